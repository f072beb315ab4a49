"""Coderivations of the tensor coalgebra T(W) and their graded Lie bracket.

A coderivation is stored by its restriction Hom(T(W), W): a sparse sum of
basis maps phi^I_i (send v_I to v_i, every other word to 0).  Composition
follows the insertion rule

    phi^I_i o phi^J_j = sum_k (-1)^{(|v_i1|+...+|v_i(k-1)|) |phi^J_j|} [i_k = j] phi^{(I,J,k)}_i

where (I,J,k) replaces the k-th letter of I by J.  :func:`evaluate` applies
the full coderivation extension to a word and is kept independent of
:func:`compose` so the two can check each other.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .graded_space import V21, GradedSpace, SpaceError, Word, check_word, word_parity
from .scalars import Polynomial, as_rational, scalar_from_json, scalar_to_json

Key = tuple[Word, int]


class CoderivationError(ValueError):
    pass


class ParityError(CoderivationError):
    pass


def term_parity(word: Word, target: int, space: GradedSpace = V21) -> int:
    return (word_parity(word, space) + space.parity(target)) & 1


def _mul(a, b, order):
    if order is not None and isinstance(a, Polynomial) and isinstance(b, Polynomial):
        return a.mul(b, order)
    return a * b


def _key_order(key: Key):
    word, target = key
    return (len(word), word, target)


class Coderivation:
    """Immutable sparse element of C(W) = Hom(T(W), W).

    ``terms`` maps ``(word, target)`` to a nonzero coefficient (a Fraction or a
    :class:`Polynomial`).  Zero coefficients are dropped on construction.
    """

    __slots__ = ("space", "terms", "_parity")

    def __init__(self, space: GradedSpace = V21, terms: Mapping[Key, object] | None = None, *, check: bool = True):
        self.space = space
        clean: dict[Key, object] = {}
        for (word, target), c in (terms or {}).items():
            if check:
                word = check_word(word, space)
                space.parity(target)
                if not isinstance(c, Polynomial):
                    c = as_rational(c)
            if c:
                key = (word, target)
                if key in clean:
                    c = clean[key] + c
                    if not c:
                        del clean[key]
                        continue
                clean[key] = c
        self.terms = clean
        self._parity = -2

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, space: GradedSpace = V21) -> "Coderivation":
        return cls(space, {})

    @classmethod
    def basis(cls, word: Iterable[int], target: int, coeff=1, space: GradedSpace = V21) -> "Coderivation":
        return cls(space, {(tuple(word), target): coeff})

    @classmethod
    def _raw(cls, space, terms):
        d = cls.__new__(cls)
        d.space = space
        d.terms = terms
        d._parity = -2
        return d

    # -- structure ----------------------------------------------------------
    @property
    def parity(self) -> int | None:
        """0 or 1 for a homogeneous coderivation, None for zero.

        Raises :class:`ParityError` when terms of both parities are present.
        """
        if self._parity == -2:
            pars = {term_parity(w, t, self.space) for (w, t) in self.terms}
            if len(pars) > 1:
                self._parity = -1
            else:
                self._parity = pars.pop() if pars else None
        if self._parity == -1:
            raise ParityError("inhomogeneous coderivation; split it with split_parity() first")
        return self._parity

    def is_homogeneous(self) -> bool:
        try:
            self.parity
        except ParityError:
            return False
        return True

    def split_parity(self) -> tuple["Coderivation", "Coderivation"]:
        even, odd = {}, {}
        for (w, t), c in self.terms.items():
            (odd if term_parity(w, t, self.space) else even)[(w, t)] = c
        return Coderivation._raw(self.space, even), Coderivation._raw(self.space, odd)

    def arities(self) -> set[int]:
        return {len(w) for (w, _) in self.terms}

    def arity_part(self, n: int) -> "Coderivation":
        return Coderivation._raw(self.space, {k: c for k, c in self.terms.items() if len(k[0]) == n})

    def coeff(self, word: Iterable[int], target: int):
        return self.terms.get((tuple(word), target), Fraction(0))

    def items(self) -> Iterator[tuple[Key, object]]:
        """Terms in canonical order: arity, then word, then target."""
        for k in sorted(self.terms, key=_key_order):
            yield k, self.terms[k]

    def map_coeffs(self, fn: Callable) -> "Coderivation":
        out = {}
        for k, c in self.terms.items():
            c2 = fn(c)
            if c2:
                out[k] = c2
        return Coderivation._raw(self.space, out)

    def truncate(self, order: int) -> "Coderivation":
        return self.map_coeffs(lambda c: c.truncate(order) if isinstance(c, Polynomial) else c)

    def specialize(self, assignment: Mapping[str, object]) -> "Coderivation":
        """Evaluate polynomial coefficients at parameter values."""
        return self.map_coeffs(lambda c: c.evaluate(assignment) if isinstance(c, Polynomial) else c)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- linear structure ---------------------------------------------------
    def _check_space(self, other: "Coderivation"):
        if other.space != self.space:
            raise CoderivationError(f"space mismatch: {self.space} vs {other.space}")

    def __add__(self, other):
        if not isinstance(other, Coderivation):
            return NotImplemented
        self._check_space(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return Coderivation._raw(self.space, out)

    def __neg__(self):
        return Coderivation._raw(self.space, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Coderivation):
            return NotImplemented
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, Coderivation):
            return NotImplemented
        if isinstance(s, int):
            s = Fraction(s)
        return self.map_coeffs(lambda c: c * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (Fraction(1) / as_rational(s))

    def __eq__(self, other):
        if not isinstance(other, Coderivation):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    # -- display ------------------------------------------------------------
    def __str__(self):
        return format_coderivation(self)

    def __repr__(self):
        return f"Coderivation({self})"


# -- the bracket calculus ------------------------------------------------------

def _homogeneous(f: Coderivation, role: str) -> int:
    try:
        p = f.parity
    except ParityError as exc:
        raise ParityError(f"{role} is inhomogeneous; split it with split_parity() first") from exc
    return 0 if p is None else p


def compose(f: Coderivation, g: Coderivation, *, order: int | None = None) -> Coderivation:
    """The insertion product f o g (not itself a coderivation composite).

    ``order`` truncates polynomial coefficients of the products.
    """
    f._check_space(g)
    _homogeneous(f, "left argument")
    _homogeneous(g, "right argument")
    space = f.space
    by_target: dict[int, list] = {}
    for (J, j), b in g.terms.items():
        by_target.setdefault(j, []).append((J, b, term_parity(J, j, space)))
    par = [space.parity(i) for i in space.indices()]
    out: dict[Key, object] = {}
    for (I, i), a in f.terms.items():
        prefix = 0
        for k, ik in enumerate(I):
            hits = by_target.get(ik)
            if hits:
                for J, b, pg in hits:
                    c = _mul(a, b, order)
                    if prefix & pg:
                        c = -c
                    key = (I[:k] + J + I[k + 1:], i)
                    if key in out:
                        c = out[key] + c
                        if not c:
                            del out[key]
                            continue
                    if c:
                        out[key] = c
            prefix ^= par[ik - 1]
    return Coderivation._raw(space, out)


def bracket(f: Coderivation, g: Coderivation, *, order: int | None = None) -> Coderivation:
    """Graded commutator [f, g] = f o g - (-1)^{|f||g|} g o f."""
    pf = _homogeneous(f, "left argument")
    pg = _homogeneous(g, "right argument")
    fg = compose(f, g, order=order)
    gf = compose(g, f, order=order)
    return fg + gf if pf & pg else fg - gf


def coboundary(d: Coderivation, f: Coderivation, *, check: bool = False, order: int | None = None) -> Coderivation:
    """Hochschild coboundary D(f) = [d, f] for an odd codifferential d."""
    if d and _homogeneous(d, "differential") != 1:
        raise ParityError("coboundary requires an odd differential")
    if check and not is_codifferential(d):
        raise CoderivationError("d is not a codifferential: [d,d] != 0")
    return bracket(d, f, order=order)


def evaluate(f: Coderivation, w: Iterable[int]) -> dict[Word, object]:
    """Apply the coderivation extension of f to the word v_w.

    Each term phi^I_i acts at every position where I occurs as a subword,
    with the Koszul sign (-1)^{|prefix| |phi^I_i|}.  Returns a formal sum
    {word: coefficient} with zero entries removed.
    """
    space = f.space
    w = check_word(w, space)
    out: dict[Word, object] = {}
    for (I, i), a in f.terms.items():
        n = len(I)
        pt = term_parity(I, i, space)
        for p in range(len(w) - n + 1):
            if w[p:p + n] != I:
                continue
            c = -a if (pt and word_parity(w[:p], space)) else a
            key = w[:p] + (i,) + w[p + n:]
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def evaluate_sum(f: Coderivation, vec: Mapping[Word, object]) -> dict[Word, object]:
    """Linear extension of :func:`evaluate` to formal sums of words."""
    out: dict[Word, object] = {}
    for w, c in vec.items():
        for w2, c2 in evaluate(f, w).items():
            s = out.get(w2, 0) + c * c2
            if s:
                out[w2] = s
            else:
                out.pop(w2, None)
    return out


def extension_commutator(f: Coderivation, g: Coderivation, w: Iterable[int]) -> dict[Word, object]:
    """F G - (-1)^{|f||g|} G F on the word w, F and G the coalgebra extensions.

    Independent of :func:`compose`; ``evaluate(bracket(f, g), w)`` must agree.
    """
    pf = _homogeneous(f, "left argument")
    pg = _homogeneous(g, "right argument")
    out = dict(evaluate_sum(f, evaluate(g, w)))
    sign = 1 if pf & pg else -1
    for w2, c in evaluate_sum(g, evaluate(f, w)).items():
        s = out.get(w2, 0) + sign * c
        if s:
            out[w2] = s
        else:
            out.pop(w2, None)
    return out


def projected_composite(f: Coderivation, g: Coderivation, w: Iterable[int]) -> dict[Word, object]:
    """The length-one part of F G on w; ``evaluate(compose(f, g), w)`` must agree."""
    return {k: c for k, c in evaluate_sum(f, evaluate(g, w)).items() if len(k) == 1}


@dataclass(frozen=True)
class CodifferentialCheck:
    ok: bool
    certificate: Coderivation

    def __bool__(self):
        return self.ok


def is_codifferential(d: Coderivation, *, order: int | None = None) -> CodifferentialCheck:
    """Decide [d, d] = 0; on failure the surviving terms of [d, d] are the certificate."""
    if d and _homogeneous(d, "codifferential candidate") != 1:
        raise ParityError("a codifferential must be odd")
    dd = bracket(d, d, order=order)
    return CodifferentialCheck(not dd, dd)


# -- text format ---------------------------------------------------------------

def _fmt_coeff(c) -> str:
    if isinstance(c, Polynomial):
        s = str(c)
        return s if len(c.terms) == 1 and not s.startswith("-") else f"({s})"
    return str(c)


def format_coderivation(f: Coderivation) -> str:
    """Render in the ``psi(2,3;2) - psi(3,2;2)`` notation (psi odd, phi even)."""
    if not f.terms:
        return "0"
    parts = []
    for (w, t), c in f.items():
        name = "psi" if term_parity(w, t, f.space) else "phi"
        base = f"{name}({','.join(map(str, w))};{t})"
        sign = "+"
        if isinstance(c, Polynomial):
            if len(c.terms) == 1:
                (_, lc), = c.terms.items()
                if lc < 0:
                    sign, c = "-", -c
            if c == 1:
                body = base
            else:
                body = f"{base}*{_fmt_coeff(c)}"
        else:
            if c < 0:
                sign, c = "-", -c
            body = base if c == 1 else f"{c}*{base}"
        parts.append((sign, body))
    s0, b0 = parts[0]
    out = ("-" if s0 == "-" else "") + b0
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f": {text[pos:pos + 12]!r}" if text else ""))


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<basis>psi|phi)|(?P<param>t\d+)|(?P<op>[-+*/(),;^]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError("unexpected token", text, start)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


def parse_coderivation(text: str, space: GradedSpace = V21, params: Iterable[str] | None = None) -> Coderivation:
    """Parse ``psi(2,3;2) - psi(3,2;2) + 1/2*psi(2,2;3)*t1``.

    ``psi`` must name an odd basis term and ``phi`` an even one.  Parameter
    tokens ``t1, t2, ...`` make the coefficients polynomials; their variable
    list is ``params`` if given, else the tokens that occur, in numeric order.
    """
    toks = _tokenize(text)
    if params is None:
        found = sorted({v for k, v, _ in toks if k == "param"}, key=lambda s: int(s[1:]))
        params = tuple(found)
    params = tuple(params)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        k, v, p = toks[i]
        if (kind and k != kind) or (value is not None and v != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {v or 'end of input'!r}", text, p)
        i += 1
        return k, v, p

    def scalar(v):
        return Polynomial.constant(params, v) if params else v

    def parse_basis():
        _, name, p0 = take("basis")
        take("op", "(")
        word = []
        if peek()[1] != ";":
            while True:
                k, v, p = take("num")
                if "/" in v:
                    raise ParseError("basis index must be an integer", text, p)
                word.append(int(v))
                if peek()[1] == ",":
                    take()
                    continue
                break
        take("op", ";")
        k, v, p = take("num")
        if "/" in v:
            raise ParseError("basis index must be an integer", text, p)
        target = int(v)
        take("op", ")")
        try:
            par = term_parity(tuple(word), target, space)
        except SpaceError as exc:
            raise ParseError(str(exc), text, p0) from exc
        if name == "psi" and par == 0:
            raise ParseError("psi(...) names an odd term but this term is even; use phi", text, p0)
        if name == "phi" and par == 1:
            raise ParseError("phi(...) names an even term but this term is odd; use psi", text, p0)
        return (tuple(word), target)

    # values are ("s", scalar) or ("d", Coderivation)
    def combine_sum(x, y, sign, pos):
        if x[0] != y[0]:
            if x[0] == "s" and not x[1]:
                x = ("d", Coderivation.zero(space))
            elif y[0] == "s" and not y[1]:
                y = ("d", Coderivation.zero(space))
            else:
                raise ParseError("cannot add a scalar to a coderivation", text, pos)
        return (x[0], x[1] + y[1] if sign > 0 else x[1] - y[1])

    def combine_prod(x, y, pos):
        if x[0] == "d" and y[0] == "d":
            raise ParseError("product of two coderivations", text, pos)
        if x[0] == "s" and y[0] == "s":
            return ("s", x[1] * y[1])
        s, d = (x[1], y[1]) if x[0] == "s" else (y[1], x[1])
        return ("d", d * s)

    def parse_factor():
        k, v, p = peek()
        if k == "num":
            take()
            return ("s", scalar(Fraction(v)))
        if k == "param":
            take()
            if v not in params:
                raise ParseError(f"unknown parameter {v}", text, p)
            return ("s", Polynomial.variable(params, v))
        if k == "basis":
            return ("d", Coderivation(space, {parse_basis(): scalar(Fraction(1))}))
        if v == "(":
            take()
            e = parse_expr()
            take("op", ")")
            return e
        raise ParseError(f"unexpected {v or 'end of input'!r}", text, p)

    def parse_power():
        base = parse_factor()
        k, v, p = peek()
        if k == "op" and v == "^":
            take()
            _, e, pe = take("num")
            if base[0] != "s":
                raise ParseError("only scalars can be raised to a power", text, p)
            base = ("s", base[1] ** int(e))
        return base

    def parse_term():
        acc = parse_power()
        while True:
            k, v, p = peek()
            if v == "*" and k == "op":
                take()
                acc = combine_prod(acc, parse_power(), p)
            elif v == "/" and k == "op":
                take()
                kk, vv, pp = take("num")
                if Fraction(vv) == 0:
                    raise ParseError("division by zero", text, pp)
                acc = combine_prod(acc, ("s", scalar(1 / Fraction(vv))), p)
            elif k in ("num", "param", "basis") or v == "(":
                acc = combine_prod(acc, parse_power(), p)
            else:
                return acc

    def parse_expr():
        sign = 1
        if peek()[0] == "op" and peek()[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
        acc = parse_term()
        if sign < 0:
            acc = (acc[0], -acc[1])
        while peek()[0] == "op" and peek()[1] in "+-":
            s, p = take()[1], toks[i - 1][2]
            acc = combine_sum(acc, parse_term(), 1 if s == "+" else -1, p)
        return acc

    if toks[0][0] == "end":
        raise ParseError("empty expression", text, 0)
    kind, result = parse_expr()
    if peek()[0] != "end":
        raise ParseError(f"unexpected {peek()[1]!r}", text, peek()[2])
    if kind == "s":
        if result:
            raise ParseError("expression has no basis term", text, 0)
        return Coderivation.zero(space)
    return result


# -- JSON ----------------------------------------------------------------------

def coderivation_to_json(f: Coderivation) -> dict:
    return {
        "space": f.space.to_json(),
        "terms": [
            {"word": list(w), "target": t, "coeff": scalar_to_json(c)} for (w, t), c in f.items()
        ],
    }


def coderivation_from_json(obj) -> Coderivation:
    space = GradedSpace.from_json(obj.get("space", {"even": 2, "odd": 1}))
    terms = {}
    for t in obj["terms"]:
        key = (tuple(t["word"]), int(t["target"]))
        terms[key] = terms.get(key, 0) + scalar_from_json(t["coeff"])
    return Coderivation(space, terms)


def basis_terms(n: int, parity: int | None = None, space: GradedSpace = V21) -> list[Key]:
    """Basis (word, target) pairs of C^n in canonical order, optionally of one parity."""
    from .graded_space import enumerate_words

    out = []
    for w in enumerate_words(n, space):
        wp = word_parity(w, space)
        for t in space.indices():
            if parity is None or (wp + space.parity(t)) & 1 == parity:
                out.append((w, t))
    return out

"""Linear changes of basis acting on coderivations.

``pullback(g, d)`` is (g^* d)(w_1..w_n) = g^{-1} d(g w_1, ..., g w_n) for a
parity-preserving g.  Nilpotent shifts exp(beta) act by
d -> d + [d, beta] + 1/2 [[d, beta], beta] + ...  Witness search solves the
polynomial system d(g., g.) = g d'(., .) over the whole parity-preserving group
GL(p) x GL(q) with sympy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .coderivations import Coderivation, bracket, compose
from .graded_space import V21, GradedSpace, enumerate_words
from .scalars import Polynomial, as_rational, rational_from_json, rational_to_json


class GroupActionError(ValueError):
    pass


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    a = [row[:] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            raise GroupActionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class LinearAutomorphism:
    """Invertible matrix on the basis of W; column j is the image of v_j.

    Unless ``shifted`` is set the matrix must be block diagonal for the
    even/odd split.
    """

    matrix: tuple
    space: GradedSpace = V21
    shifted: bool = False

    def __post_init__(self):
        n = self.space.dim
        m = tuple(tuple(as_rational(x) for x in row) for row in self.matrix)
        if len(m) != n or any(len(row) != n for row in m):
            raise GroupActionError(f"expected a {n}x{n} matrix")
        object.__setattr__(self, "matrix", m)
        if not self.shifted:
            for i in range(n):
                for j in range(n):
                    if m[i][j] and self.space.parity(i + 1) != self.space.parity(j + 1):
                        raise GroupActionError(f"entry ({i + 1},{j + 1}) mixes parities")
        if not _det([list(r) for r in m]):
            raise GroupActionError("singular matrix: not an automorphism")

    @classmethod
    def identity(cls, space: GradedSpace = V21) -> "LinearAutomorphism":
        n = space.dim
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), space)

    @classmethod
    def diagonal(cls, entries: Sequence, space: GradedSpace = V21) -> "LinearAutomorphism":
        n = space.dim
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)), space)

    @classmethod
    def permutation(cls, perm: Sequence[int], space: GradedSpace = V21) -> "LinearAutomorphism":
        """g(v_j) = v_{perm[j-1]} (1-based images)."""
        n = space.dim
        rows = [[0] * n for _ in range(n)]
        for j, i in enumerate(perm):
            rows[i - 1][j] = 1
        return cls(tuple(map(tuple, rows)), space)

    def inverse(self) -> "LinearAutomorphism":
        return LinearAutomorphism(tuple(map(tuple, _inverse([list(r) for r in self.matrix]))), self.space, self.shifted)

    def __matmul__(self, other: "LinearAutomorphism") -> "LinearAutomorphism":
        n = self.space.dim
        a, b = self.matrix, other.matrix
        m = tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)) for i in range(n))
        return LinearAutomorphism(m, self.space, self.shifted or other.shifted)

    def to_json(self) -> dict:
        return {"matrix": [[rational_to_json(x) for x in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, obj, space: GradedSpace = V21) -> "LinearAutomorphism":
        g = cls(tuple(tuple(rational_from_json(x) for x in row) for row in obj["matrix"]), space)
        beta = obj.get("beta")
        if beta:
            b = BetaShift(Coderivation.basis((int(beta["from"]),), int(beta["to"]), rational_from_json(beta["coeff"]), space))
            g = g @ b.as_automorphism()
        return g


def pullback(g: LinearAutomorphism, d: Coderivation) -> Coderivation:
    """g^* d.  For diagonal g the coefficient of phi^{jk}_i scales by g_j g_k / g_i."""
    if g.space != d.space:
        raise GroupActionError("space mismatch")
    m = g.matrix
    inv = _inverse([list(r) for r in m])
    n = g.space.dim
    # nonzero entries of each row of g: v_i appears in g(v_j) with weight m[i][j]
    row_support = [[(j + 1, m[i][j]) for j in range(n) if m[i][j]] for i in range(n)]
    out: dict = {}
    for (I, i), c in d.terms.items():
        targets = [(l + 1, inv[l][i - 1]) for l in range(n) if inv[l][i - 1]]
        for choice in product(*(row_support[k - 1] for k in I)):
            J = tuple(j for j, _ in choice)
            w = Fraction(1)
            for _, x in choice:
                w *= x
            for l, y in targets:
                key = (J, l)
                s = out.get(key, 0) + c * (w * y)
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return Coderivation(d.space, out)


def opposite(d: Coderivation) -> Coderivation:
    """The opposite algebra, written on W.

    m^op(a, b) = (-1)^{|a||b|} m(b, a) on A = Pi W becomes: the coefficient of
    phi^{jk}_i is -(-1)^{|v_j||v_k|} times the coefficient of phi^{kj}_i.
    """
    if d.terms and d.arities() != {2}:
        raise GroupActionError("opposite is defined for arity-2 structures")
    out = {}
    for ((j, k), t), c in d.terms.items():
        sign = d.space.parity(j) & d.space.parity(k)
        out[((k, j), t)] = c if sign else -c
    return Coderivation(d.space, out)


def is_commutative(d: Coderivation) -> bool:
    """Graded commutativity of the algebra on A: d equals its opposite."""
    return opposite(d) == d


@dataclass(frozen=True)
class BetaShift:
    """An even arity-1 map beta with beta o beta = 0, so exp(beta) = 1 + beta."""

    beta: Coderivation

    def __post_init__(self):
        b = self.beta
        if b.terms:
            if b.arities() != {1}:
                raise GroupActionError("beta must be an arity-1 map")
            if b.parity != 0:
                raise GroupActionError("beta must be even")
            if compose(b, b):
                raise GroupActionError("beta is not nilpotent: beta o beta != 0")

    def as_automorphism(self) -> LinearAutomorphism:
        n = self.beta.space.dim
        rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for ((j,), i), c in self.beta.terms.items():
            rows[i - 1][j - 1] += as_rational(c)
        return LinearAutomorphism(tuple(map(tuple, rows)), self.beta.space)


def exp_beta(b: BetaShift | Coderivation, d: Coderivation, *, max_terms: int = 32) -> Coderivation:
    """exp(-ad_beta) d = d + [d,beta] + 1/2 [[d,beta],beta] + ...  (a finite sum)."""
    if isinstance(b, Coderivation):
        b = BetaShift(b)
    beta = b.beta
    total = d
    term = d
    k = 0
    while True:
        k += 1
        term = bracket(term, beta) / k
        if not term:
            return total
        total = total + term
        if k >= max_terms:
            raise GroupActionError("exp(-ad beta) did not terminate: beta is not nilpotent on d")


@dataclass(frozen=True)
class EquivalenceCheck:
    ok: bool
    difference: Coderivation

    def __bool__(self):
        return self.ok


def verify_equivalence(d: Coderivation, d2: Coderivation, g) -> EquivalenceCheck:
    """True iff g^* d = d2.  ``g`` is a LinearAutomorphism, a BetaShift, or a sequence
    of them applied left to right (so [g, h] means pullback by g, then by h)."""
    steps = g if isinstance(g, (list, tuple)) else [g]
    cur = d
    for s in steps:
        if isinstance(s, BetaShift):
            cur = pullback(s.as_automorphism(), cur)
        elif isinstance(s, LinearAutomorphism):
            cur = pullback(s, cur)
        else:
            raise GroupActionError(f"not a witness: {s!r}")
    diff = cur - d2
    return EquivalenceCheck(not diff, diff)


# -- witness search ------------------------------------------------------------

@dataclass
class WitnessSearch:
    """Outcome of :func:`find_witness`.

    status is ``"found"`` (rational witness), ``"algebraic"`` (solutions exist
    but need irrational entries; ``algebraic`` holds one as a sympy Matrix,
    verified exactly), ``"none"`` (the polynomial system has no solution over
    C) or ``"inconclusive"``.
    """

    status: str
    witness: LinearAutomorphism | None = None
    algebraic: object = None
    note: str = ""

    @property
    def equivalent(self) -> bool | None:
        if self.status in ("found", "algebraic"):
            return True
        if self.status == "none":
            return False
        return None


def _sym(c):
    import sympy as sp

    c = as_rational(c)
    return sp.Rational(c.numerator, c.denominator)


def _witness_equations(d: Coderivation, d2: Coderivation, space: GradedSpace):
    import sympy as sp

    n = space.dim
    syms = {}
    G = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            if space.parity(i + 1) == space.parity(j + 1):
                s = sp.Symbol(f"g{i + 1}{j + 1}")
                syms[(i, j)] = s
                G[i, j] = s
    arities = d.arities() | d2.arities()
    eqs = []
    for ar in sorted(arities):
        for J in enumerate_words(ar, space):
            for i in range(1, n + 1):
                lhs = 0
                for (I, ii), c in d.terms.items():
                    if ii != i or len(I) != ar:
                        continue
                    m = _sym(c)
                    for a, b in zip(I, J):
                        m = m * G[a - 1, b - 1]
                    lhs += m
                rhs = 0
                for l in range(1, n + 1):
                    c = d2.terms.get((J, l))
                    if c:
                        rhs += _sym(c) * G[i - 1, l - 1]
                e = sp.expand(lhs - rhs)
                if e != 0:
                    eqs.append(e)
    return G, syms, eqs


def _is_rational(x) -> bool:
    return bool(getattr(x, "is_rational", False))


def find_witness(d: Coderivation, d2: Coderivation, *, seed: int = 0, max_tries: int = 64) -> WitnessSearch:
    """Search for parity-preserving g with g^* d = d2.

    Free parameters of a solution family are set to small integers first
    (0, 1, -1, 2, ...), then to seeded random values.
    """
    import sympy as sp

    if d.space != d2.space:
        raise GroupActionError("space mismatch")
    for f in (d, d2):
        if any(isinstance(c, Polynomial) for c in f.terms.values()):
            raise GroupActionError("specialize polynomial coefficients before searching for a witness")
    space = d.space
    G, syms, eqs = _witness_equations(d, d2, space)
    inv = sp.Symbol("_detinv")
    det = G.det()
    unknowns = list(syms.values())
    try:
        sols = sp.solve(eqs + [inv * det - 1], unknowns + [inv], dict=True)
    except (NotImplementedError, ValueError) as exc:  # pragma: no cover - solver limits
        return WitnessSearch("inconclusive", note=f"solver failed: {exc}")
    if not sols:
        return WitnessSearch("none", note="no solution over C")
    rng = random.Random(seed)
    candidates = [0, 1, -1, 2, -2, 3, -3]
    algebraic = None
    for sol in sols:
        full = [sol.get(s, s) for s in unknowns]
        free = sorted(set().union(*(sp.sympify(v).free_symbols for v in full)) - {inv}, key=str)
        tries = list(product(candidates, repeat=len(free)))
        tries = tries[:max_tries] + [tuple(rng.randint(-9, 9) for _ in free) for _ in range(max_tries)]
        for vals in tries:
            sub = dict(zip(free, vals))
            try:
                vals_g = [sp.nsimplify(sp.sympify(v).subs(sub)) for v in full]
            except ZeroDivisionError:
                continue
            if any(v.has(sp.zoo, sp.oo, sp.nan) for v in vals_g):
                continue
            M = G.subs(dict(zip(unknowns, vals_g)))
            if sp.simplify(M.det()) == 0:
                continue
            if all(_is_rational(v) for v in vals_g):
                rows = tuple(
                    tuple(Fraction(int(sp.numer(M[i, j])), int(sp.denom(M[i, j]))) for j in range(space.dim))
                    for i in range(space.dim)
                )
                g = LinearAutomorphism(rows, space)
                if verify_equivalence(d, d2, g):
                    return WitnessSearch("found", g)
            else:
                if algebraic is None and all(sp.simplify(e.subs(dict(zip(unknowns, vals_g)))) == 0 for e in eqs):
                    algebraic = M
                fixed = [v for v in full if not (sp.sympify(v).free_symbols - {inv})]
                if any(not _is_rational(v) for v in fixed):
                    break  # an irrational constant in this family: no rational member
    if algebraic is not None:
        return WitnessSearch("algebraic", algebraic=algebraic, note="every witness found needs irrational entries")
    return WitnessSearch("inconclusive", note="no admissible parameter values found")

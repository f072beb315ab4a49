"""Exact coefficients: rationals and truncated multivariate polynomials over Q.

Rationals are plain :class:`fractions.Fraction` values.  Polynomials are
sparse maps from exponent vectors to Fractions over a fixed, ordered tuple of
parameter names; they stand in for formal power series and are cut off at a
configurable total degree.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

DEFAULT_ORDER = 4


class ScalarError(ValueError):
    """Invalid scalar input (zero denominator, unknown variable, ...)."""


def normalize(num: int, den: int = 1) -> Fraction:
    """Return ``num/den`` in lowest terms with a positive denominator.

    >>> normalize(3, -6)
    Fraction(-1, 2)
    """
    if den == 0:
        raise ScalarError("invalid scalar: zero denominator")
    return Fraction(num, den)


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScalarError(f"cannot read rational from {x!r}") from exc
    raise ScalarError(f"not an exact rational: {x!r}")


def _grlex_key(exps: tuple[int, ...]):
    # graded lexicographic, largest monomial first when sorted ascending on this key
    return (-sum(exps), tuple(-e for e in exps))


class Polynomial:
    """Sparse polynomial with rational coefficients in ordered variables.

    Instances are treated as immutable.  Arithmetic with ints and Fractions is
    supported on either side; two polynomials must share the same variables.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple[int, ...], object] | None = None):
        self.vars = tuple(variables)
        n = len(self.vars)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ScalarError(f"exponent vector {exps} does not match variables {self.vars}")
            if any(e < 0 for e in exps):
                raise ScalarError(f"negative exponent in {exps}")
            c = as_rational(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, variables, c) -> "Polynomial":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def variable(cls, variables, name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise ScalarError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: 1})

    @classmethod
    def gens(cls, variables) -> list["Polynomial"]:
        variables = tuple(variables)
        return [cls.variable(variables, v) for v in variables]

    @classmethod
    def _raw(cls, variables, terms):
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.vars = variables
        p.terms = terms
        p._hash = None
        return p

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                if not other.terms:
                    return Polynomial._raw(self.vars, {})
                if not self.terms:
                    return other
                raise ScalarError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.vars, other)
        return None

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.vars != self.vars:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw(self.vars, {})
            return Polynomial._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.mul(o)

    __rmul__ = __mul__

    def mul(self, other: "Polynomial", max_degree: int | None = None) -> "Polynomial":
        """Product, optionally dropping terms of total degree above ``max_degree``."""
        o = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in o.terms.items():
                if max_degree is not None and d1 + sum(e2) > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.vars, out)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ScalarError("negative power of a polynomial")
        out = Polynomial.constant(self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    # -- predicates and comparison -----------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if not self.terms and not other.terms:
                return True
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * len(self.vars): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- structure ----------------------------------------------------------
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) == k})

    def truncate(self, max_total_degree: int) -> "Polynomial":
        if max_total_degree < 0:
            raise ScalarError("truncation degree must be non-negative")
        return Polynomial._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) <= max_total_degree})

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda ec: _grlex_key(ec[0]))

    def leading_coefficient(self) -> Fraction:
        ts = self.sorted_terms()
        return ts[0][1] if ts else Fraction(0)

    def evaluate(self, assignment: Mapping[str, object]):
        """Substitute every variable.  Values may be rationals or polynomials."""
        missing = [v for v in self.vars if v not in assignment]
        if missing and self.terms:
            raise ScalarError(f"missing value for variable {missing[0]!r}")
        vals = [assignment.get(v, 0) for v in self.vars]
        if all(isinstance(x, (int, Fraction)) for x in vals):
            vals = [as_rational(x) for x in vals]
            total = Fraction(0)
            for e, c in self.terms.items():
                m = c
                for x, k in zip(vals, e):
                    if k:
                        m *= x ** k
                total += m
            return total
        total = 0
        for e, c in self.terms.items():
            m = c
            for x, k in zip(vals, e):
                for _ in range(k):
                    m = m * x
            total = total + m
        return total

    def substitute(self, assignment: Mapping[str, object]):
        """Partial substitution; unassigned variables are kept."""
        full = {v: assignment.get(v, Polynomial.variable(self.vars, v)) for v in self.vars}
        if any(isinstance(x, Polynomial) for x in full.values()):
            out = Polynomial._raw(self.vars, {})
            for e, c in self.terms.items():
                m = Polynomial.constant(self.vars, c)
                for v, k in zip(self.vars, e):
                    for _ in range(k):
                        m = m * full[v]
                out = out + m
            return out
        return self.evaluate(full)

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive over Z."""
        from math import gcd

        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Scale to content 1 with a positive leading (grlex) coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self / c

    def __repr__(self):
        return f"Polynomial({self.vars!r}, {self!s})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                cs = str(abs(c))
                if "/" in cs:
                    cs = f"({cs})"
                s = f"{'-' if c < 0 else ''}{cs}*{mono}"
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out


Scalar = Union[Fraction, Polynomial]


def poly_truncate(p: Polynomial, max_total_degree: int) -> Polynomial:
    return p.truncate(max_total_degree)


def poly_evaluate(p, assignment: Mapping[str, object]) -> Fraction:
    if isinstance(p, Polynomial):
        return p.evaluate(assignment)
    return as_rational(p)


def truncate_scalar(c, order: int):
    if isinstance(c, Polynomial):
        return c.truncate(order)
    return c


def is_zero(c) -> bool:
    return not c


# -- JSON ----------------------------------------------------------------------

def rational_to_json(r) -> dict:
    r = as_rational(r)
    return {"num": str(r.numerator), "den": str(r.denominator)}


def rational_from_json(obj) -> Fraction:
    if isinstance(obj, (int, str)):
        return as_rational(obj)
    try:
        return normalize(int(obj["num"]), int(obj["den"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ScalarError):
            raise
        raise ScalarError(f"malformed rational {obj!r}") from exc


def polynomial_to_json(p: Polynomial) -> dict:
    return {
        "vars": list(p.vars),
        "terms": [{"exps": list(e), "coeff": rational_to_json(c)} for e, c in p.sorted_terms()],
    }


def polynomial_from_json(obj) -> Polynomial:
    return Polynomial(obj["vars"], {tuple(t["exps"]): rational_from_json(t["coeff"]) for t in obj["terms"]})


def scalar_to_json(c):
    if isinstance(c, Polynomial):
        return polynomial_to_json(c)
    return rational_to_json(c)


def scalar_from_json(obj):
    if isinstance(obj, dict) and "vars" in obj:
        return polynomial_from_json(obj)
    return rational_from_json(obj)

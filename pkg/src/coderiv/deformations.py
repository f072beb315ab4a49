"""Versal deformations: d^inf = d + sum t_i delta_i + higher-order corrections.

The odd part of H^2(d) gives the parameters.  Order by order, the degree-n part
of the Maurer-Cartan defect 1/2[d^inf, d^inf] is split with
:func:`coderiv.cohomology.solve_coboundary`.  The coboundary part is cancelled
by a correction of degree n, and the residue (supported on the canonical
complement of B^3) is kept.  The coefficients of the accumulated residue are
the relations on the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .coderivations import Coderivation, bracket, coderivation_from_json, coderivation_to_json, is_codifferential
from .cohomology import cohomology_basis, cohomology_dims, is_coboundary, is_cocycle, solve_coboundary
from .linalg import rref_basis
from .scalars import DEFAULT_ORDER, Polynomial, polynomial_to_json


class DeformationError(ValueError):
    pass


@dataclass(frozen=True)
class DeformationState:
    base: Coderivation
    parameters: tuple
    basis: tuple  # the odd H^2 representatives multiplying t_1..t_m
    current: Coderivation  # polynomial coefficients
    order: int  # defect is known to vanish modulo relations up to this degree
    residue: Coderivation  # accumulated unsolvable part of the defect
    corrections: tuple = ()  # per degree n >= 2: the correction added at degree n
    stable: bool = False

    @property
    def relations(self) -> list[Polynomial]:
        return relation_generators(self.residue, self.parameters)

    def poly(self, c) -> Polynomial:
        return c if isinstance(c, Polynomial) else Polynomial.constant(self.parameters, c)

    def at_zero(self) -> Coderivation:
        return self.current.specialize({t: 0 for t in self.parameters})

    def to_json(self) -> dict:
        def cj(f):
            return coderivation_to_json(f.map_coeffs(self.poly))

        return {
            "base": coderivation_to_json(self.base),
            "parameters": list(self.parameters),
            "basis": [coderivation_to_json(b) for b in self.basis],
            "current": cj(self.current),
            "order": self.order,
            "residue": cj(self.residue),
            "corrections": [cj(c) for c in self.corrections],
            "relations": [polynomial_to_json(r) for r in self.relations],
            "stable": self.stable,
        }

    @classmethod
    def from_json(cls, obj) -> "DeformationState":
        return cls(
            coderivation_from_json(obj["base"]),
            tuple(obj["parameters"]),
            tuple(coderivation_from_json(b) for b in obj["basis"]),
            coderivation_from_json(obj["current"]),
            int(obj["order"]),
            coderivation_from_json(obj["residue"]),
            tuple(coderivation_from_json(c) for c in obj.get("corrections", [])),
            bool(obj.get("stable", False)),
        )


def _param_names(m: int, names: Sequence[str] | None) -> tuple:
    if names is None:
        return tuple(f"t{i + 1}" for i in range(m))
    names = tuple(names)
    if len(names) != m:
        raise DeformationError(f"need {m} parameter names, got {len(names)}")
    return names


def _check_basis(d: Coderivation, basis: Sequence[Coderivation]):
    """A user basis must consist of odd 2-cocycles independent modulo coboundaries."""
    h_odd = cohomology_dims(d, 2).h[2][1]
    if len(basis) != h_odd:
        raise DeformationError(f"odd H^2 has dimension {h_odd}, basis has {len(basis)} elements")
    for b in basis:
        if b.arities() != {2} or b.parity != 1:
            raise DeformationError(f"{b} is not an odd 2-cochain")
        if not is_cocycle(d, b):
            raise DeformationError(f"{b} is not a cocycle")
    # independence modulo B^2: no nontrivial combination is a coboundary
    from .cohomology import _coords, _image_echelon

    image = _image_echelon(d, 2, 1)
    residues = [image.reduce(_coords(d, b, 2, 1))[0] for b in basis]
    if len(rref_basis(residues)) != len(basis):
        raise DeformationError("basis elements are dependent modulo coboundaries")


def infinitesimal_deformation(
    d: Coderivation,
    basis: Sequence[Coderivation] | None = None,
    names: Sequence[str] | None = None,
) -> DeformationState:
    """d + sum t_i delta_i with delta_i an odd H^2 basis (canonical unless given)."""
    if not is_codifferential(d):
        raise DeformationError("base is not a codifferential")
    if basis is None:
        basis = cohomology_basis(d, 2, 1)
    else:
        basis = list(basis)
        _check_basis(d, basis)
    params = _param_names(len(basis), names)
    gens = Polynomial.gens(params)
    cur = d.map_coeffs(lambda c: Polynomial.constant(params, c))
    for t, b in zip(gens, basis):
        cur = cur + b * t
    return DeformationState(d, params, tuple(basis), cur, 1, Coderivation.zero(d.space))


def mc_defect(s: DeformationState, order: int | None = None) -> Coderivation:
    """D(phi) + 1/2[phi, phi] for current = base + phi, truncated at ``order``.

    Since [d, d] = 0 this is 1/2[current, current].
    """
    k = s.order if order is None else order
    if not s.current:
        return s.current
    return (bracket(s.current, s.current, order=k) / 2).truncate(k)


def _by_monomial(f: Coderivation, degree: int) -> dict:
    """Degree-``degree`` part of f, split by monomial: exps -> Coderivation over Q."""
    out: dict = {}
    for key, c in f.terms.items():
        if not isinstance(c, Polynomial):
            if degree == 0 and c:
                out.setdefault((), {})[key] = c
            continue
        for exps, a in c.terms.items():
            if sum(exps) == degree:
                out.setdefault(exps, {})[key] = a
    return {e: Coderivation(f.space, t) for e, t in out.items()}


def _monomial(params, exps) -> Polynomial:
    return Polynomial(params, {tuple(exps): Fraction(1)})


def extend_to_order(s: DeformationState, k: int) -> DeformationState:
    """Add corrections of degrees s.order+1 .. k."""
    if k < s.order:
        raise DeformationError("cannot extend to a lower order")
    cur, residue, corrections = s.current, s.residue, list(s.corrections)
    for n in range(s.order + 1, k + 1):
        defect = (bracket(cur, cur, order=n) / 2).truncate(n)
        corr = Coderivation.zero(s.base.space)
        res_n = Coderivation.zero(s.base.space)
        for exps, target in sorted(_by_monomial(defect, n).items()):
            sol = solve_coboundary(s.base, target, check=False)
            m = _monomial(s.parameters, exps)
            corr = corr - sol.preimage * m
            res_n = res_n + sol.residue * m
        cur = cur + corr
        residue = residue + res_n
        corrections.append(corr)
    return replace(s, current=cur, order=k, residue=residue, corrections=tuple(corrections))


def versal_deformation(
    d: Coderivation,
    order: int = DEFAULT_ORDER,
    basis: Sequence[Coderivation] | None = None,
    names: Sequence[str] | None = None,
) -> DeformationState:
    """Extend order by order, stopping once two consecutive orders add nothing."""
    s = infinitesimal_deformation(d, basis, names)
    quiet = 0
    while s.order < order:
        before = len(s.relations)
        s = extend_to_order(s, s.order + 1)
        if not s.corrections[-1] and len(s.relations) == before:
            quiet += 1
            if quiet == 2:
                return replace(s, stable=True)
        else:
            quiet = 0
    return s


# -- relations --------------------------------------------------------------------

def relation_generators(residue: Coderivation, params: Sequence[str]) -> list[Polynomial]:
    """Linearly independent relations spanning the residue coefficients.

    Each is primitive (content 1, positive leading coefficient); the list is
    sorted by degree then grlex order of the leading term.
    """
    polys = [c if isinstance(c, Polynomial) else Polynomial.constant(params, c) for _, c in residue.items()]
    if not polys:
        return []
    monos = sorted({e for p in polys for e in p.terms}, key=lambda e: (-sum(e), tuple(-x for x in e)))
    index = {e: i for i, e in enumerate(monos)}
    vecs = [{index[e]: a for e, a in p.terms.items()} for p in polys]
    out = []
    for v in rref_basis(vecs):
        out.append(Polynomial(tuple(params), {monos[i]: a for i, a in v.items()}).primitive())
    return sorted(out, key=lambda p: (p.degree(), str(p)))


@dataclass(frozen=True)
class Component:
    """A linear solution component: var -> expression in the free variables."""

    parameters: tuple
    equations: dict  # name -> Polynomial, linear in the free parameters

    @property
    def free(self) -> tuple:
        return tuple(t for t in self.parameters if t not in self.equations)

    def __str__(self):
        if not self.equations:
            return "everything"
        return ", ".join(f"{k}={self.equations[k]}" for k in self.parameters if k in self.equations)

    def substitution(self) -> dict:
        """Symbolic parameterization of the component, for every parameter."""
        out = {t: Polynomial.variable(self.parameters, t) for t in self.free}
        out.update(self.equations)
        return out

    def contains(self, point: Mapping[str, object]) -> bool:
        full = {t: point.get(t, 0) for t in self.parameters}
        return all(v.evaluate(full) == full[k] for k, v in self.equations.items())


@dataclass(frozen=True)
class RelationIdeal:
    parameters: tuple
    generators: tuple
    components: tuple = field(default=())  # local components through the origin
    other: tuple = field(default=())  # solution families that miss the origin

    def annihilates(self, comp: Component) -> bool:
        sub = comp.substitution()
        return all(not g.substitute(sub) for g in self.generators)

    def vanishes_at(self, point: Mapping[str, object]) -> bool:
        return all(not g.evaluate(point) for g in self.generators)


def _to_sympy(p: Polynomial, syms):
    import sympy as sp

    expr = sp.Integer(0)
    for exps, a in p.terms.items():
        m = sp.Rational(a.numerator, a.denominator)
        for s, e in zip(syms, exps):
            m *= s ** e
        expr += m
    return expr


def _from_sympy(expr, params) -> Polynomial | None:
    import sympy as sp

    syms = sp.symbols(params)
    try:
        poly = sp.Poly(sp.expand(expr), *syms)
    except sp.PolynomialError:
        return None
    terms = {}
    for exps, c in poly.terms():
        if not c.is_rational:
            return None
        terms[tuple(exps)] = Fraction(int(c.p), int(c.q))
    return Polynomial(params, terms)


def solve_relations(generators: Sequence[Polynomial], params: Sequence[str]) -> tuple[list, list]:
    """Solution families of the relations, split into (local linear, other)."""
    import sympy as sp

    params = tuple(params)
    if not generators:
        return [Component(params, {})], []
    syms = sp.symbols(params)
    eqs = [_to_sympy(g, syms) for g in generators]
    sols = sp.solve(eqs, syms, dict=True)
    local, other = [], []
    for sol in sols:
        origin = {s: 0 for s in syms}
        eqs_ = {}
        ok = True
        for s, v in sol.items():
            p = _from_sympy(v, params)
            if p is None or p.degree() > 1:
                ok = False
                break
            eqs_[str(s)] = p
        at_origin = all(sp.simplify(v.subs(origin)) == 0 for v in sol.values())
        comp = Component(params, eqs_) if ok else sol
        (local if ok and at_origin else other).append(comp)
    # sympy may list a line lying inside a listed plane; keep maximal components only
    local = [c for c in local if not any(o is not c and _inside(c, o) for o in local)]
    local.sort(key=str)
    return local, other


def _inside(a: Component, b: Component) -> bool:
    """a is contained in b (and strictly smaller, or equal but listed later)."""
    sub = a.substitution()
    if not all(not (v.substitute(sub) - sub[k]) for k, v in b.equations.items()):
        return False
    return len(a.free) < len(b.free) or str(a) > str(b)


def obstruction_relations(s: DeformationState) -> RelationIdeal:
    gens = tuple(s.relations)
    local, other = solve_relations(gens, s.parameters)
    ideal = RelationIdeal(s.parameters, gens, tuple(local), tuple(other))
    for c in local:
        if not ideal.annihilates(c):  # pragma: no cover - would be a solver bug
            raise DeformationError(f"component {c} does not annihilate the relations")
    return ideal


# -- jump deformations -----------------------------------------------------------------

@dataclass
class JumpResult:
    status: str  # "true", "false", "inconclusive"
    specialized: Coderivation
    witness: object = None
    algebraic: bool = False
    note: str = ""

    def __bool__(self):
        return self.status == "true"


def verify_jump(
    d: Coderivation,
    s: DeformationState,
    assignment: Mapping[str, object],
    target: Coderivation,
    *,
    seed: int = 0,
) -> JumpResult:
    """Is the deformation at ``assignment`` equivalent to ``target``?

    Witnesses needing irrational entries count as equivalence; the result then
    carries ``algebraic=True`` and the exact sympy matrix.
    """
    from .group_actions import LinearAutomorphism, find_witness

    if s.base != d:
        raise DeformationError("state was not built on d")
    point = {t: assignment.get(t, 0) for t in s.parameters}
    bad = [str(g) for g in s.relations if g.evaluate(point)]
    if bad:
        raise DeformationError(f"assignment does not annihilate the relations: {', '.join(bad)}")
    dt = s.current.specialize(point)
    if not is_codifferential(dt):
        return JumpResult("inconclusive", dt, note="specialization is not a codifferential at this truncation")
    if dt == target:
        return JumpResult("true", dt, LinearAutomorphism.identity(d.space), note="identical")
    ws = find_witness(dt, target, seed=seed)
    if ws.status == "found":
        return JumpResult("true", dt, ws.witness)
    if ws.status == "algebraic":
        return JumpResult("true", dt, ws.algebraic, algebraic=True, note=ws.note)
    if ws.status == "none":
        return JumpResult("false", dt, note=ws.note)
    return JumpResult("inconclusive", dt, note=ws.note)


def is_flat(s: DeformationState, order: int = DEFAULT_ORDER) -> bool:
    """mc_defect vanishes identically up to ``order``."""
    return not mc_defect(s, order)


def coboundary_free(d: Coderivation, f: Coderivation) -> bool:
    """True when f is a cocycle that is not a coboundary (a nonzero class)."""
    return is_cocycle(d, f) and not is_coboundary(d, f)

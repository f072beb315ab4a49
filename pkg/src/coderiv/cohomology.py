"""Hochschild cohomology of a codifferential d, computed exactly over Q.

The coboundary D(f) = [d, f] maps the parity-p sector of C^n to the
parity-(p+1) sector of C^{n+1} (d is odd).  Cochain coordinates follow the
canonical basis order of :func:`coderiv.coderivations.basis_terms`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coderivations import Coderivation, ParityError, basis_terms, bracket, is_codifferential
from .graded_space import cochain_dims
from .linalg import Echelon, column_echelon, rref_basis


class CohomologyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CoboundaryMatrix:
    degree: int
    parity: int  # parity of the source sector
    rows: tuple  # basis keys of C^{n+1}, parity 1-parity
    cols: tuple  # basis keys of C^n, parity `parity`
    columns: tuple  # sparse column vectors {row index: Fraction}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * len(self.cols) for _ in self.rows]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def rank(self) -> int:
        return column_echelon(enumerate(self.columns))[0].rank


def _require_differential(d: Coderivation, check: bool):
    if d.terms:
        try:
            p = d.parity
        except ParityError as exc:
            raise CohomologyError("differential must be homogeneous") from exc
        if p != 1:
            raise CohomologyError("differential must be odd")
        if d.arities() != {2}:
            raise CohomologyError("coboundary matrices need an arity-2 differential")
    if check and not is_codifferential(d):
        raise CohomologyError("not a codifferential: [d,d] != 0 (pass check=False to override)")


@lru_cache(maxsize=256)
def _matrix(d: Coderivation, n: int, parity: int) -> CoboundaryMatrix:
    cols = tuple(basis_terms(n, parity, d.space))
    rows = tuple(basis_terms(n + 1, 1 - parity, d.space))
    index = {k: i for i, k in enumerate(rows)}
    columns = []
    for key in cols:
        img = bracket(d, Coderivation._raw(d.space, {key: Fraction(1)}))
        col = {}
        for k, c in img.terms.items():
            if k not in index:
                raise CohomologyError(f"coboundary left the expected sector at term {k}")
            col[index[k]] = c
        columns.append(col)
    return CoboundaryMatrix(n, parity, rows, cols, tuple(columns))


def coboundary_matrix(d: Coderivation, n: int, parity: int, *, check: bool = True) -> CoboundaryMatrix:
    """Matrix of D from the parity sector of C^n to the opposite sector of C^{n+1}."""
    if n < 0 or parity not in (0, 1):
        raise CohomologyError("need n >= 0 and parity in {0, 1}")
    _require_differential(d, check)
    return _matrix(d, n, parity)


@dataclass
class _Sector:
    matrix: CoboundaryMatrix
    echelon: Echelon
    kernel: list  # kernel vectors as {col index: coeff}


@lru_cache(maxsize=256)
def _sector(d: Coderivation, n: int, parity: int) -> _Sector:
    m = _matrix(d, n, parity)
    ech, kernel = column_echelon(enumerate(m.columns))
    return _Sector(m, ech, kernel)


@dataclass(frozen=True)
class CohomologyReport:
    z: tuple  # per degree (even, odd)
    b: tuple
    h: tuple
    basis: tuple | None = None  # per degree list of representatives, if requested

    def __str__(self):
        return "  ".join(f"{e}|{o}" for e, o in self.h)

    def to_json(self) -> dict:
        from .coderivations import coderivation_to_json

        out = {
            "h": [{"even": e, "odd": o} for e, o in self.h],
            "z": [{"even": e, "odd": o} for e, o in self.z],
            "b": [{"even": e, "odd": o} for e, o in self.b],
        }
        if self.basis is not None:
            out["basis"] = [[coderivation_to_json(f) for f in reps] for reps in self.basis]
        return out


def cohomology_dims(d: Coderivation, n_max: int, *, basis: bool = False, check: bool = True) -> CohomologyReport:
    """Exact h^n = z^n - b^n, even|odd, for 0 <= n <= n_max."""
    if n_max < 0:
        raise CohomologyError("n_max must be non-negative")
    _require_differential(d, check)
    zs, bs, hs, reps = [], [], [], []
    for n in range(n_max + 1):
        zp, bp = [], []
        for p in (0, 1):
            dim = cochain_dims(n, d.space)[p]
            sec = _sector(d, n, p)
            zp.append(dim - sec.echelon.rank)
            bp.append(0 if n == 0 else _sector(d, n - 1, 1 - p).echelon.rank)
        zs.append(tuple(zp))
        bs.append(tuple(bp))
        hs.append((zp[0] - bp[0], zp[1] - bp[1]))
        if basis:
            reps.append(tuple(cohomology_basis(d, n, check=False)))
    return CohomologyReport(tuple(zs), tuple(bs), tuple(hs), tuple(reps) if basis else None)


def _to_coderivation(d: Coderivation, keys, vec) -> Coderivation:
    return Coderivation._raw(d.space, {keys[i]: c for i, c in vec.items() if c})


def _image_echelon(d: Coderivation, n: int, parity: int) -> Echelon:
    """Echelon of B^n in the parity sector of C^n (coordinates: C^n basis order)."""
    if n == 0:
        return Echelon()
    return _sector(d, n - 1, 1 - parity).echelon


def cohomology_basis(d: Coderivation, n: int, parity: int | None = None, *, check: bool = True) -> list[Coderivation]:
    """Cocycle representatives of a basis of H^n (even classes first).

    Each representative is the normal form of a cocycle modulo B^n, and the
    set is put in reduced echelon form, so the choice is canonical.
    """
    _require_differential(d, check)
    out = []
    for p in ((0, 1) if parity is None else (parity,)):
        sec = _sector(d, n, p)
        image = _image_echelon(d, n, p)
        normal = []
        for kv in sec.kernel:
            r, _ = image.reduce(kv)
            if r:
                normal.append(r)
        for vec in rref_basis(normal):
            out.append(_to_coderivation(d, sec.matrix.cols, vec))
    return out


def _coords(d: Coderivation, f: Coderivation, n: int, parity: int) -> dict:
    keys = basis_terms(n, parity, d.space)
    index = {k: i for i, k in enumerate(keys)}
    vec = {}
    for k, c in f.terms.items():
        if k not in index:
            raise CohomologyError(f"term {k} is not in C^{n} of parity {parity}")
        vec[index[k]] = c
    return vec


def is_cocycle(d: Coderivation, f: Coderivation) -> bool:
    return not bracket(d, f)


def is_coboundary(d: Coderivation, f: Coderivation) -> bool:
    if not f:
        return True
    n, p = _degree_parity(f)
    r, _ = _image_echelon(d, n, p).reduce(_coords(d, f, n, p))
    return not r


def _degree_parity(f: Coderivation) -> tuple[int, int]:
    ar = f.arities()
    if len(ar) != 1:
        raise CohomologyError("target must have a single arity")
    try:
        p = f.parity
    except ParityError as exc:
        raise CohomologyError("target must be parity-homogeneous") from exc
    return ar.pop(), p


@dataclass(frozen=True)
class SolveResult:
    preimage: Coderivation
    residue: Coderivation

    @property
    def solved(self) -> bool:
        return not self.residue


def solve_coboundary(d: Coderivation, target: Coderivation, *, check: bool = True) -> SolveResult:
    """Split ``target = D(preimage) + residue``.

    The residue lies in the span of the non-pivot coordinates of im D, a fixed
    complement, and is zero exactly when target is a coboundary.  The preimage
    has no component along ker D in the column-echelon sense (free columns are
    never used).
    """
    _require_differential(d, check)
    if not target:
        return SolveResult(Coderivation.zero(d.space), Coderivation.zero(d.space))
    n1, p = _degree_parity(target)
    if n1 == 0:
        return SolveResult(Coderivation.zero(d.space), target)
    sec = _sector(d, n1 - 1, 1 - p)
    vec = _coords(d, target, n1, p)
    r, comb = sec.echelon.reduce(vec)
    return SolveResult(_to_coderivation(d, sec.matrix.cols, comb), _to_coderivation(d, sec.matrix.rows, r))


def complement_coordinates(d: Coderivation, n: int, parity: int) -> list:
    """Basis keys of C^n (given parity) spanning the canonical complement of B^n."""
    keys = basis_terms(n, parity, d.space)
    piv = _image_echelon(d, n, parity).pivots
    return [k for i, k in enumerate(keys) if i not in piv]

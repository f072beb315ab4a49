"""Sparse exact linear algebra over Q.

Vectors are dicts ``{index: Fraction}`` without zero entries.  :class:`Echelon`
keeps a pivoted basis of a column space, and remembers how each basis vector
was built from the original columns, so reduction yields both a preimage and a
residue supported off the pivots.  The non-pivot coordinates therefore span a
canonical complement of the column space.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Vec = dict


def axpy(y: dict, a, x: Mapping) -> None:
    """In place: y += a*x."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def scale(x: Mapping, a) -> dict:
    if not a:
        return {}
    return {k: v * a for k, v in x.items()}


class Echelon:
    """Incremental pivot basis.

    Each stored vector has a pivot (its smallest index at insertion time) that
    is zero in every vector inserted later.  Reducing a vector in insertion
    order therefore clears all pivots.
    """

    def __init__(self):
        self.rows: list[tuple[int, dict, dict]] = []  # (pivot, vector, combination)
        self.pivots: set = set()

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping, combo: Mapping | None = None) -> tuple[dict, dict]:
        """Return (residue, coefficients) with vec = sum coefficients[c]*column_c + residue."""
        r = dict(vec)
        coeffs: dict = {}
        if combo:
            coeffs = dict(combo)
        for piv, v, comb in self.rows:
            a = r.get(piv)
            if a:
                a = a / v[piv]
                axpy(r, -a, v)
                axpy(coeffs, a, comb)
        return r, coeffs

    def add(self, vec: Mapping, label=None) -> tuple[bool, dict]:
        """Insert a column.  Returns (independent, kernel_relation).

        When the column depends on earlier ones, ``kernel_relation`` is the
        combination of labels that vanishes (label -> coefficient).
        """
        r, comb = self.reduce(vec)
        own = {label: Fraction(1)} if label is not None else {}
        if not r:
            rel = dict(own)
            axpy(rel, -1, comb)
            return False, rel
        piv = min(r)
        combo = dict(own)
        axpy(combo, -1, comb)
        self.rows.append((piv, r, combo))
        self.pivots.add(piv)
        return True, {}


def column_echelon(columns: Iterable[tuple[object, Mapping]]) -> tuple[Echelon, list[dict]]:
    """Echelonize labelled columns; also return a kernel basis (label -> coeff)."""
    ech = Echelon()
    kernel = []
    for label, col in columns:
        indep, rel = ech.add(col, label)
        if not indep:
            kernel.append(rel)
    return ech, kernel


def rref_basis(vectors: Iterable[Mapping]) -> list[dict]:
    """Reduced row-echelon basis of the span: pivot entry 1, zero in the other vectors."""
    rows: list[tuple[int, dict]] = []
    for v in vectors:
        r = dict(v)
        for piv, w in rows:
            a = r.get(piv)
            if a:
                axpy(r, -a, w)
        if not r:
            continue
        piv = min(r)
        r = scale(r, 1 / r[piv])
        for j, (p2, w) in enumerate(rows):
            a = w.get(piv)
            if a:
                w = dict(w)
                axpy(w, -a, r)
                rows[j] = (p2, w)
        rows.append((piv, r))
    rows.sort(key=lambda pr: pr[0])
    return [w for _, w in rows]


def rank(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank

"""Extensions V = M + W of an algebra W by an ideal M, in coderivation form.

A codifferential on V splits as d = delta + mu + lambda + psi by where each term
takes its inputs and where it lands:

    delta   all inputs in W, target in W
    mu      all inputs in M, target in M
    lambda  mixed inputs, target in M        (C^{1,1} in arity 2)
    psi     all inputs in W, target in M     (C^{0,2})

A term with an M input and a W target is forbidden since M is an ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .coderivations import (
    Coderivation,
    bracket,
    coderivation_from_json,
    coderivation_to_json,
    is_codifferential,
)
from .graded_space import V21, GradedSpace
from .group_actions import BetaShift, exp_beta

SECTORS = ("delta", "mu", "lambda", "psi")


class SectorError(ValueError):
    pass


def term_sector(word, target: int, M: Sequence[int], W: Sequence[int]) -> str:
    """Which component of an extension a basis term belongs to (or "beta" for C^{0,1})."""
    in_m = [i in M for i in word]
    if target in W:
        if any(in_m):
            raise SectorError(f"term {word}->{target} maps M-inputs into W; M would not be an ideal")
        return "delta"
    if len(word) == 1 and not in_m[0]:
        return "beta"
    if all(in_m):
        return "mu"
    if not any(in_m):
        return "psi"
    return "lambda"


def _check_sector(f: Coderivation, name: str, M, W):
    for (w, t) in f.terms:
        s = term_sector(w, t, M, W)
        if s != name:
            raise SectorError(f"term {w}->{t} of {name} lies in the {s} sector")


@dataclass(frozen=True)
class ExtensionDatum:
    M: tuple
    W: tuple
    delta: Coderivation
    mu: Coderivation
    lam: Coderivation
    psi: Coderivation
    tau: Coderivation | None = None
    space: GradedSpace = V21

    def __post_init__(self):
        M, W = tuple(self.M), tuple(self.W)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "W", W)
        if set(M) & set(W) or sorted(M + W) != list(self.space.indices()):
            raise SectorError("M and W must partition the basis")
        for name, f in self.components().items():
            if f.space != self.space:
                raise SectorError(f"{name} lives on a different space")
            _check_sector(f, name, M, W)
        if self.tau is not None:
            _check_sector(self.tau, "psi", M, W)
        d = self.assemble()
        if d and d.parity != 1:
            raise SectorError("assembled d is not odd")

    @classmethod
    def build(cls, M, W, delta=None, mu=None, lam=None, psi=None, tau=None, space: GradedSpace = V21):
        z = Coderivation.zero(space)
        return cls(tuple(M), tuple(W), delta or z, mu or z, lam or z, psi or z, tau, space)

    def components(self) -> dict:
        return {"delta": self.delta, "mu": self.mu, "lambda": self.lam, "psi": self.psi}

    def assemble(self) -> Coderivation:
        d = self.delta + self.mu + self.lam + self.psi
        return d + self.tau if self.tau is not None else d

    def to_json(self) -> dict:
        out = {"M": list(self.M), "W": list(self.W)}
        for name, f in self.components().items():
            out[name] = coderivation_to_json(f)
        if self.tau is not None:
            out["tau"] = coderivation_to_json(self.tau)
        return out

    @classmethod
    def from_json(cls, obj) -> "ExtensionDatum":
        parts = {k: coderivation_from_json(obj[k]) for k in SECTORS if k in obj}
        space = next(iter(parts.values())).space if parts else V21
        tau = coderivation_from_json(obj["tau"]) if obj.get("tau") else None
        return cls.build(obj["M"], obj["W"], parts.get("delta"), parts.get("mu"), parts.get("lambda"),
                         parts.get("psi"), tau, space)


@dataclass(frozen=True)
class ExtensionReport:
    mc: Coderivation  # [delta,lambda] + 1/2[lambda,lambda] + [mu,psi]
    compatibility: Coderivation  # [mu,lambda]
    cocycle: Coderivation  # [delta+lambda, psi]
    delta_ok: bool
    mu_ok: bool
    codifferential: bool

    @property
    def ok(self) -> bool:
        return not self.mc and not self.compatibility and not self.cocycle

    def to_json(self) -> dict:
        return {
            "mc": {"holds": not self.mc, "defect": coderivation_to_json(self.mc)},
            "compatibility": {"holds": not self.compatibility, "defect": coderivation_to_json(self.compatibility)},
            "cocycle": {"holds": not self.cocycle, "defect": coderivation_to_json(self.cocycle)},
            "delta_codifferential": self.delta_ok,
            "mu_codifferential": self.mu_ok,
            "codifferential": self.codifferential,
        }


def check_extension(e: ExtensionDatum) -> ExtensionReport:
    """The three structure equations; psi includes tau when one is given."""
    psi = e.psi + e.tau if e.tau is not None else e.psi
    mc = bracket(e.delta, e.lam) + bracket(e.lam, e.lam) / 2 + bracket(e.mu, psi)
    compat = bracket(e.mu, e.lam)
    cocycle = bracket(e.delta + e.lam, psi)
    return ExtensionReport(
        mc,
        compat,
        cocycle,
        bool(is_codifferential(e.delta)),
        bool(is_codifferential(e.mu)),
        bool(is_codifferential(e.assemble())),
    )


def restricted_equivalence(e: ExtensionDatum, b: BetaShift | Coderivation) -> ExtensionDatum:
    """lambda' = lambda + [mu,beta],  psi' = psi + [delta + lambda + 1/2[mu,beta], beta]."""
    beta = b.beta if isinstance(b, BetaShift) else b
    _check_sector(beta, "beta", e.M, e.W)
    mb = bracket(e.mu, beta)
    lam2 = e.lam + mb
    psi2 = e.psi + bracket(e.delta + e.lam + mb / 2, beta)
    return ExtensionDatum(e.M, e.W, e.delta, e.mu, lam2, psi2, e.tau, e.space)


def restricted_equivalence_agrees(e: ExtensionDatum, b: BetaShift | Coderivation) -> bool:
    """Cross-check: the shifted datum assembles to exp(-ad beta) d."""
    beta = b.beta if isinstance(b, BetaShift) else b
    return restricted_equivalence(e, beta).assemble() == exp_beta(beta, e.assemble())


# -- lambda as left/right multiplication matrices -------------------------------

@dataclass(frozen=True)
class LRMatrices:
    """lambda = sum_k psi^{w(k) m(j)}_{m(i)} (L_k)^i_j + psi^{m(j) w(k)}_{m(i)} (R_k)^i_j.

    L[k] and R[k] are dim M square matrices (row i, column j) indexed by the
    positions of M; k runs over the basis indices of W.  For an odd w(k) the
    matrices are even maps of M, for an even w(k) odd maps.
    """

    M: tuple
    W: tuple
    L: dict
    R: dict
    space: GradedSpace = V21

    def __post_init__(self):
        n = len(self.M)
        for side in (self.L, self.R):
            for k, mat in side.items():
                if k not in self.W:
                    raise SectorError(f"{k} is not a W index")
                if len(mat) != n or any(len(r) != n for r in mat):
                    raise SectorError("L and R matrices must be dim M square")
                want = 1 - self.space.parity(k)  # parity of the map M -> M
                for a, row in enumerate(mat):
                    for b, x in enumerate(row):
                        if x and (self.space.parity(self.M[a]) + self.space.parity(self.M[b])) % 2 != want:
                            raise SectorError(f"entry ({a + 1},{b + 1}) of the matrix for w={k} breaks parity")

    def to_lambda(self) -> Coderivation:
        terms: dict = {}
        for side, mats in (("L", self.L), ("R", self.R)):
            for k, mat in mats.items():
                for a, row in enumerate(mat):
                    for b, x in enumerate(row):
                        if x:
                            word = (k, self.M[b]) if side == "L" else (self.M[b], k)
                            terms[(word, self.M[a])] = terms.get((word, self.M[a]), 0) + x
        return Coderivation(self.space, terms)

    @classmethod
    def from_lambda(cls, lam: Coderivation, M, W) -> "LRMatrices":
        M, W = tuple(M), tuple(W)
        pos = {m: a for a, m in enumerate(M)}
        n = len(M)
        L = {k: [[Fraction(0)] * n for _ in range(n)] for k in W}
        R = {k: [[Fraction(0)] * n for _ in range(n)] for k in W}
        for (w, t), c in lam.terms.items():
            if len(w) != 2 or term_sector(w, t, M, W) != "lambda":
                raise SectorError(f"term {w}->{t} is not in C^(1,1)")
            x, y = w
            if x in W:
                L[x][pos[t]][pos[y]] = c
            else:
                R[y][pos[t]][pos[x]] = c
        return cls(M, W, L, R, lam.space)


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _madd(*ms):
    n = len(ms[0])
    return [[sum(m[i][j] for m in ms) for j in range(n)] for i in range(n)]


def _mneg(a):
    return [[-x for x in row] for row in a]


def half_bracket_formula(lr: LRMatrices) -> Coderivation:
    """1/2[lambda,lambda] written with matrix products:

    phi^{w(k)w(l)m(j)}_{m(i)} ((LO_k - LE_k) L_l)^i_j + phi^{m(j)w(k)w(l)}_{m(i)} (R_l R_k)^i_j
      + phi^{w(k)m(j)w(l)}_{m(i)} (R_l L_k + (LO_k - LE_k) R_l)^i_j.
    """
    s = lr.space
    n = len(lr.M)
    zero = [[0] * n for _ in range(n)]
    terms: dict = {}

    def put(word, mat):
        for a in range(n):
            for b in range(n):
                x = mat[a][b]
                if x:
                    key = (tuple(lr.M[b] if c is None else c for c in word), lr.M[a])
                    terms[key] = terms.get(key, 0) + x

    for k in lr.W:
        Lk = lr.L.get(k, zero)
        signed_Lk = Lk if s.parity(k) == 0 else _mneg(Lk)  # LO_k - LE_k
        for l in lr.W:
            Ll, Rl, Rk = lr.L.get(l, zero), lr.R.get(l, zero), lr.R.get(k, zero)
            put((k, l, None), _matmul(signed_Lk, Ll))
            put((None, k, l), _matmul(Rl, Rk))
            put((k, None, l), _madd(_matmul(Rl, Lk), _matmul(signed_Lk, Rl)))
    return Coderivation(s, terms)


# -- extensions of the simple 0|1 algebra by a trivial 2|0 algebra ---------------

SIMPLE01_M = (1, 2)
SIMPLE01_W = (3,)


@dataclass(frozen=True)
class Simple01Solution:
    L: tuple  # diagonal entries
    R: tuple
    codifferential: Coderivation
    match: str | None = None
    witness: object = field(default=None, compare=False)

    @property
    def lr(self) -> LRMatrices:
        diag = lambda v: [[Fraction(v[i]) if i == j else Fraction(0) for j in range(2)] for i in range(2)]
        return LRMatrices(SIMPLE01_M, SIMPLE01_W, {3: diag(self.L)}, {3: diag(self.R)})

    def label(self) -> str:
        return f"L=diag{self.L} R=diag{self.R}"


def _diag_solutions():
    # a slot is a pair (l, r) of simultaneous eigenvalues, l in {0,1}, r in {0,-1};
    # G_{delta,mu} permutes the two slots, so unordered pairs are the orbits
    slots = [(1, -1), (1, 0), (0, -1), (0, 0)]
    for a, b in combinations_with_replacement(slots, 2):
        a, b = sorted((a, b), key=lambda s: (-s[0], s[1]))
        yield (a[0], b[0]), (a[1], b[1])


def _invariants(d: Coderivation, n_max: int = 3):
    from .cohomology import cohomology_dims

    return cohomology_dims(d, n_max).h


def enumerate_simple01_solutions(match: bool = True, seed: int = 0) -> list[Simple01Solution]:
    """The diagonal (L, R) solutions for delta = psi^{33}_3, M = <v1,v2>, mu = 0.

    With match=True each assembled codifferential is paired with the catalog
    entry among d2..d11 it is equivalent to, using cohomology as a prefilter
    and a witness search to confirm.
    """
    from . import catalog
    from .group_actions import find_witness, verify_equivalence

    delta = Coderivation.basis((3, 3), 3)
    cands = [catalog.get(f"d{i}") for i in range(2, 12)]
    inv = {c.name: _invariants(c.formula) for c in cands} if match else {}
    out = []
    for L, R in _diag_solutions():
        lr = LRMatrices(SIMPLE01_M, SIMPLE01_W,
                        {3: [[L[0], 0], [0, L[1]]]}, {3: [[R[0], 0], [0, R[1]]]})
        e = ExtensionDatum.build(SIMPLE01_M, SIMPLE01_W, delta=delta, lam=lr.to_lambda())
        d = e.assemble()
        name, witness = None, None
        if match:
            h = _invariants(d)
            for c in cands:
                if inv[c.name] != h:
                    continue
                if d == c.formula:
                    name = c.name
                    break
                ws = find_witness(d, c.formula, seed=seed)
                if ws.status == "found" and verify_equivalence(d, c.formula, ws.witness):
                    name, witness = c.name, ws.witness
                    break
        out.append(Simple01Solution(L, R, d, name, witness))
    return out


def lr_conditions_hold(L, R) -> bool:
    """L^2 = L, R^2 = -R, LR = RL for 2x2 matrices."""
    LL, RR, LR_, RL = _matmul(L, L), _matmul(R, R), _matmul(L, R), _matmul(R, L)
    return LL == [list(r) for r in L] and RR == _mneg(R) and LR_ == RL

"""The 2|1 moduli catalog: d1..d15(p:q), the published cohomology table, matrix forms.

Formulas are authoritative.  The published table is stored verbatim; cells that
the computation contradicts are listed in each entry's notes, never corrected
in place.  ``catalog.json`` (package data) is a frozen export of this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .coderivations import Coderivation, coderivation_to_json, parse_coderivation
from .graded_space import V21, GradedSpace
from .scalars import as_rational


class CatalogError(KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


# name -> formula in text syntax (the two families are built by family())
_FORMULAS = {
    "d1": "psi(2,3;2) - psi(3,2;2) + psi(2,2;3) - psi(3,3;3)",
    "d2": "psi(3,3;3) + psi(3,1;1) + psi(3,2;2)",
    "d3": "psi(3,3;3) - psi(1,3;1) - psi(2,3;2)",
    "d4": "psi(3,3;3) + psi(3,1;1) - psi(2,3;2)",
    "d5": "psi(3,3;3) - psi(1,3;1) + psi(3,2;2) - psi(2,3;2)",
    "d6": "psi(3,3;3) + psi(3,1;1) + psi(3,2;2) - psi(2,3;2)",
    "d7": "psi(3,3;3) + psi(3,2;2)",
    "d8": "psi(3,3;3) - psi(2,3;2)",
    "d9": "psi(3,3;3) + psi(3,1;1) - psi(1,3;1) + psi(3,2;2) - psi(2,3;2)",
    "d10": "psi(3,3;3)",
    "d11": "psi(3,3;3) + psi(3,2;2) - psi(2,3;2)",
    "d12": "psi(2,2;3) + psi(2,3;1) - psi(3,2;1)",
    "d14": "psi(2,1;3) - psi(1,2;3)",
}
FAMILIES = ("d13", "d15")
NAMES = ("d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "d10", "d11", "d12", "d13", "d14", "d15")


def _h(text: str) -> tuple:
    return tuple(tuple(int(x) for x in cell.split("|")) for cell in text.split())


# the published table, verbatim; key (name, params) with params None for a
# non-family entry and "generic" for the generic family row
TABLE = {
    ("d1", None): _h("1|1 1|0 1|0 1|0 1|0"),
    ("d2", None): _h("0|0 3|0 0|0 0|0 0|0"),
    ("d3", None): _h("0|0 3|0 0|0 0|0 0|0"),
    ("d4", None): _h("0|0 1|0 0|0 1|0 0|0"),
    ("d5", None): _h("1|0 1|0 1|0 1|0 1|0"),
    ("d6", None): _h("1|0 1|0 1|0 1|0 1|0"),
    ("d7", None): _h("1|0 1|0 2|0 2|0 2|0"),
    ("d8", None): _h("1|0 1|0 2|0 2|0 2|0"),
    ("d9", None): _h("3|0 4|0 6|0 12|0 24|0"),
    ("d10", None): _h("3|0 4|0 8|0 16|0 32|0"),
    ("d11", None): _h("2|1 2|1 2|1 2|1 2|1"),
    ("d12", None): _h("1|1 2|0 1|1 2|0 1|1"),
    ("d13", "generic"): _h("0|1 2|0 2|1 3|0 4|0"),
    ("d13", (1, 1)): _h("0|1 2|0 2|1 5|0 4|2"),
    ("d13", (1, -1)): _h("1|1 2|1 3|1 4|1 5|1"),
    ("d13", (1, 0)): _h("1|0 2|0 4|1 6|2 8|3"),
    ("d13", (0, 0)): _h("1|1 3|1 5|4 10|7 18|14"),
    ("d14", None): _h("2|1 4|2 5|4 8|4 10|5"),
    ("d15", "generic"): _h("1|0 2|0 1|2 2|1 2|2"),
    ("d15", (1, 1)): _h("1|0 2|1 2|2 4|2 3|4"),
    ("d15", (1, 0)): _h("1|0 2|0 2|3 5|3 5|6"),
    ("d15", (0, 1)): _h("1|0 2|0 2|3 5|3 5|6"),
    ("d15", (1, -1)): _h("2|1 3|2 4|3 5|4 6|5"),
}

# the 21 tabulated special rows, in table order
ROWS = tuple(k for k in TABLE if k[1] != "generic")
# generic family rows are checked at these points
GENERIC_POINTS = {"d13": (2, 3), "d15": (2, 1)}

# cells where the computed value contradicts the table: (row key, degree) -> computed
DISCREPANCIES = {
    (("d9", None), 0): (2, 1),
    (("d10", None), 0): (2, 1),
    (("d13", (1, 0)), 0): (0, 1),
    (("d13", (0, 0)), 4): (17, 15),
    (("d14", None), 2): (6, 3),
}

# matrices as printed, columns in the order (1,1),(1,2),(2,1),(2,2),(1,3),(2,3),(3,1),(3,2),(3,3)
_PRINTED = {
    "d1": ("000000000", "00000+0-0", "000+0000-"),
    "d2": ("000000+00", "0000000+0", "00000000+"),
    "d3": ("0000-0000", "00000-000", "00000000+"),
    "d4": ("000000+00", "00000-000", "00000000+"),
    "d5": ("000000+00", "00000-0+0", "00000000+"),
    "d6": ("0-+000000", "000+00000", "00000000+"),
    "d7": ("000000000", "0000000+0", "00000000+"),
    "d8": ("000000000", "00000-000", "00000000+"),
    "d9": ("0000-0+00", "00000-0+0", "00000000+"),
    "d10": ("000000000", "000000000", "00000000+"),
    "d11": ("000000000", "00000-0+0", "00000000+"),
    "d12": ("000000+00", "0000000+0", "00000000+"),
    "d14": ("000000000", "000000000", "0-+000000"),
}

_NOTES = {
    "d1": {"unital": False, "center": [1, 3]},
    "d2": {"opposite": "d3", "typos": ["cohomology basis printed as 'H^1-<...>', read as 'H^1=<...>'"]},
    "d3": {"opposite": "d2", "typos": ["text says its opposite algebra is d3; read as d2"]},
    "d4": {"opposite": "d4"},
    "d5": {"opposite": "d6", "typos": ["printed matrix disagrees with the formula"]},
    "d6": {"opposite": "d5", "typos": ["printed matrix disagrees with the formula"]},
    "d7": {"opposite": "d8"},
    "d8": {"opposite": "d7", "typos": ["header printed as 'd8==...', read as a single '='"]},
    "d9": {
        "unital": True,
        "commutative": True,
        "table_conflicts": ["H^0 printed 3|0 exceeds dim C^0 = 2|1; computed 2|1"],
    },
    "d10": {
        "unital": False,
        "commutative": True,
        "table_conflicts": ["H^0 printed 3|0 exceeds dim C^0 = 2|1; computed 2|1"],
    },
    "d11": {
        "unital": False,
        "commutative": True,
        "opposite": "d10",
        "typos": ["text says its opposite algebra is d10; d11 is commutative, so it is its own opposite"],
    },
    "d12": {
        "unital": False,
        "center": [1, 3],
        "typos": [
            "printed matrix is identical to the one printed for d2",
            "displayed versal deformation contains a stray '=' mid-expression",
        ],
    },
    "d13": {"center": [3], "symmetry": "d13(p:q) ~ d13(q:p)"},
    "d14": {
        "commutative": True,
        "table_conflicts": ["H^2 printed 5|4 while the text states h^2 = 6|3; computed 6|3"],
    },
    "d15": {"commutative": "iff p = -q", "opposite": "d15(q:p)"},
}

_SPECIAL_NOTES = {
    ("d13", (1, 0)): {"table_conflicts": ["H^0 printed 1|0 while the center is <v3>; computed 0|1"]},
    ("d13", (0, 0)): {"table_conflicts": ["H^4 printed 18|14; computed 17|15 (same total 32)"]},
}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: tuple | None
    formula: Coderivation
    expected_h: tuple | None
    marker: str  # "tabulated", "generic" or "symmetric" (Sigma_2 image of a row)
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def label(self) -> str:
        return label(self.name, self.params)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "label": self.label,
            "formula": coderivation_to_json(self.formula),
            "text": str(self.formula),
            "marker": self.marker,
            "notes": self.notes,
        }
        if self.params is not None:
            out["params"] = [_frac_str(x) for x in self.params]
        if self.expected_h is not None:
            out["expected_h"] = [{"even": e, "odd": o} for e, o in self.expected_h]
        return out


def _frac_str(x) -> str:
    return str(as_rational(x))


def canonical_name(name: str) -> str:
    n = str(name).strip().lower().replace("_", "").replace("{", "").replace("}", "")
    if not n.startswith("d"):
        n = "d" + n
    if n not in NAMES:
        raise CatalogError(f"unknown catalog entry {name!r}")
    return n


def normalize_params(params) -> tuple[Fraction, Fraction]:
    """Projective normalization: scale so the first nonzero coordinate is 1."""
    if params is None or len(params) != 2:
        raise CatalogError("family entries need two projective parameters (p, q)")
    p, q = (as_rational(x) for x in params)
    if p:
        return Fraction(1), q / p
    if q:
        return Fraction(0), Fraction(1)
    return Fraction(0), Fraction(0)


def label(name: str, params=None) -> str:
    name = canonical_name(name)
    if params is None:
        return name
    p, q = params
    return f"{name}({_frac_str(p)}:{_frac_str(q)})"


def family(name: str, p, q, space: GradedSpace = V21) -> Coderivation:
    """The family member at (p, q) exactly as given, without normalizing."""
    name = canonical_name(name)
    p, q = as_rational(p), as_rational(q)
    if name == "d13":
        terms = {((2, 2), 3): 1, ((2, 1), 3): p, ((1, 2), 3): q}
    elif name == "d15":
        terms = {((2, 3), 1): p, ((3, 2), 1): q}
    else:
        raise CatalogError(f"{name} is not a family")
    return Coderivation(space, terms)


def formula(name: str, params=None) -> Coderivation:
    return get(name, params).formula


def _lookup(name: str, params):
    if params is None:
        return TABLE.get((name, None)), "tabulated"
    # Fractions hash like the equal ints, so normalized params index TABLE directly
    if (name, params) in TABLE:
        return TABLE[(name, params)], "tabulated"
    if name == "d13":
        swapped = normalize_params((params[1], params[0]))
        if (name, swapped) in TABLE:
            return TABLE[(name, swapped)], "symmetric"
    return TABLE[(name, "generic")], "generic"


def get(name: str, params=None) -> CatalogEntry:
    name = canonical_name(name)
    notes = dict(_NOTES.get(name, {}))
    if name in FAMILIES:
        if params is None:
            raise CatalogError(f"{name} needs parameters (p, q)")
        pq = normalize_params(params)
        d = family(name, *pq)
        if name == "d15" and not any(pq):
            notes["zero"] = "d15(0:0) is the zero codifferential"
        h, marker = _lookup(name, pq)
        notes.update(_SPECIAL_NOTES.get((name, pq), {}))
        return CatalogEntry(name, pq, d, h, marker, notes)
    if params is not None:
        raise CatalogError(f"{name} takes no parameters")
    d = parse_coderivation(_FORMULAS[name])
    h, marker = _lookup(name, None)
    if name in _PRINTED:
        notes["printed_matrix"] = _printed(name)
    return CatalogEntry(name, None, d, h, marker, notes)


def expected_cohomology(name: str, params=None) -> tuple[tuple, str]:
    """The published row and a marker: "tabulated", "symmetric" or "generic"."""
    e = get(name, params)
    return e.expected_h, e.marker


def entries() -> list[CatalogEntry]:
    """The 21 tabulated codifferentials in table order."""
    return [get(n, p) for n, p in ROWS]


def generic_entries() -> list[CatalogEntry]:
    return [get(n, p) for n, p in GENERIC_POINTS.items()]


# -- matrix forms ---------------------------------------------------------------

LEX_COLUMNS = tuple((j, k) for j in (1, 2, 3) for k in (1, 2, 3))
# the even-even block first, as in the printed displays
PRINTED_COLUMNS = ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 1), (3, 2), (3, 3))


def _columns(order: str):
    if order == "lex":
        return LEX_COLUMNS
    if order == "printed":
        return PRINTED_COLUMNS
    raise CatalogError(f"unknown column order {order!r}")


def to_matrix(d: Coderivation, order: str = "lex") -> list[list]:
    """3x9 matrix; row i is the target v_i, columns are input pairs (j, k)."""
    if d.space != V21:
        raise CatalogError("matrix forms are defined for the 2|1 space")
    if d.terms and d.arities() != {2}:
        raise CatalogError("matrix forms need arity-2 terms only")
    cols = {c: n for n, c in enumerate(_columns(order))}
    m = [[Fraction(0)] * 9 for _ in range(3)]
    for (w, i), c in d.terms.items():
        m[i - 1][cols[w]] = c
    return m


def from_matrix(m, order: str = "lex") -> Coderivation:
    if len(m) != 3 or any(len(r) != 9 for r in m):
        raise CatalogError("expected a 3x9 matrix")
    cols = _columns(order)
    terms = {}
    for i, row in enumerate(m, start=1):
        for c, x in zip(cols, row):
            if x:
                terms[(c, i)] = x
    return Coderivation(V21, terms)


def _printed(name: str) -> list[list[int]]:
    sym = {"0": 0, "+": 1, "-": -1}
    return [[sym[ch] for ch in row] for row in _PRINTED[name]]


def printed_matrix(name: str):
    """The matrix as printed (printed column order), or None if none was printed."""
    name = canonical_name(name)
    return _printed(name) if name in _PRINTED else None


# -- golden file ----------------------------------------------------------------

def export() -> dict:
    rows = [e.to_json() for e in entries()]
    generic = [e.to_json() for e in generic_entries()]
    return {"version": 1, "space": V21.to_json(), "entries": rows, "generic": generic}


def load_golden() -> dict:
    with resources.files("coderiv").joinpath("catalog.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)


def write_golden(path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(export(), fh, indent=1, sort_keys=True)
        fh.write("\n")

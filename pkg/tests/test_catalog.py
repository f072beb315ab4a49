from fractions import Fraction

import pytest
from hypothesis import given

from coderiv import catalog, is_codifferential
from coderiv.catalog import CatalogError
from coderiv.coderivations import coderivation_from_json
from coderiv.group_actions import find_witness, verify_equivalence

from conftest import small_fractions


def test_row_count_and_labels():
    rows = catalog.entries()
    assert len(rows) == 21
    labels = [e.label for e in rows]
    assert len(set(labels)) == 21
    assert labels[:3] == ["d1", "d2", "d3"]
    assert "d13(1:-1)" in labels and "d15(0:1)" in labels


@pytest.mark.parametrize("e", catalog.entries() + catalog.generic_entries(), ids=lambda e: e.label)
def test_every_formula_is_a_codifferential(e):
    assert is_codifferential(e.formula)
    assert len(e.expected_h) == 5


def test_golden_file_matches_export():
    assert catalog.load_golden() == catalog.export()


def test_golden_formulas_parse_back():
    golden = catalog.load_golden()
    for row, e in zip(golden["entries"], catalog.entries()):
        assert coderivation_from_json(row["formula"]) == e.formula
        assert [tuple(x.values()) for x in row["expected_h"]] == [tuple(h) for h in e.expected_h]


@pytest.mark.parametrize("spelling", ["d13", "d_13", "13", "D_{13}"])
def test_name_spellings(spelling):
    assert catalog.canonical_name(spelling) == "d13"


def test_unknown_names_and_bad_params():
    with pytest.raises(CatalogError):
        catalog.get("d16")
    with pytest.raises(CatalogError):
        catalog.get("d13")
    with pytest.raises(CatalogError):
        catalog.get("d1", (1, 0))


@given(small_fractions, small_fractions, small_fractions.filter(bool))
def test_projective_normalization(p, q, s):
    n = catalog.normalize_params((p, q))
    assert n == catalog.normalize_params((p * s, q * s))
    first = next((x for x in n if x), None)
    assert first in (None, 1)


def test_markers():
    assert catalog.get("d13", (1, 1)).marker == "tabulated"
    assert catalog.get("d13", (2, 3)).marker == "generic"
    assert catalog.get("d13", (0, 1)).marker == "symmetric"
    assert catalog.get("d13", (0, 1)).expected_h == catalog.get("d13", (1, 0)).expected_h
    assert catalog.get("d15", (4, 2)).label == "d15(1:1/2)"


def test_d13_swap_symmetry_has_a_witness():
    a = catalog.formula("d13", (1, 2))
    b = catalog.formula("d13", (2, 1))
    ws = find_witness(a, b)
    assert ws.status == "found"
    assert verify_equivalence(a, b, ws.witness)


@pytest.mark.parametrize("order", ["lex", "printed"])
@pytest.mark.parametrize("e", catalog.entries(), ids=lambda e: e.label)
def test_matrix_round_trip(order, e):
    m = catalog.to_matrix(e.formula, order)
    assert len(m) == 3 and all(len(r) == 9 for r in m)
    assert catalog.from_matrix(m, order) == e.formula


def test_printed_matrices():
    agree, disagree = [], []
    for name in catalog.NAMES:
        printed = catalog.printed_matrix(name)
        if printed is None:
            continue
        m = catalog.to_matrix(catalog.formula(name), "printed")
        (agree if m == [[Fraction(x) for x in r] for r in printed] else disagree).append(name)
    assert sorted(disagree) == ["d12", "d5", "d6"]
    assert len(agree) == 10


def test_documented_discrepancies_name_both_values():
    for (key, n), computed in catalog.DISCREPANCIES.items():
        assert catalog.TABLE[key][n] != computed


def test_entry_json():
    js = catalog.get("d15", (1, -1)).to_json()
    assert js["label"] == "d15(1:-1)"
    assert js["marker"] == "tabulated"
    assert coderivation_from_json(js["formula"]) == catalog.formula("d15", (1, -1))

from itertools import permutations, product

import numpy as np
import pytest

from minparadox import catalog
from minparadox.kripke import Structure, schema_valid_full
from minparadox.search import (
    SeparationQuery,
    audit_figure1,
    canonical_code,
    catalog_table,
    characterize,
    classify,
    count_structures,
    enumerate_structures,
    find_separation,
    posets,
    run_experiments,
)


def _labeled_posets(n):
    """Every partial order on range(n), by filtering all relations."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in product((False, True), repeat=len(off)):
        m = np.eye(n, dtype=bool)
        for (i, j), b in zip(off, bits):
            m[i, j] = b
        if (m & m.T).sum() != n:
            continue
        if ((m.astype(int) @ m.astype(int) > 0) & ~m).any():
            continue
        yield m


def _orbit_key(m):
    n = len(m)
    return min(m[np.ix_(p, p)].tobytes() for p in permutations(range(n)))


def _upset_count(m):
    n = len(m)
    return sum(
        all(not (bits >> i & 1) or all(bits >> j & 1 for j in range(n) if m[i, j]) for i in range(n))
        for bits in range(1 << n)
    )


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_counts_against_brute_force(n):
    classes = {}
    for m in _labeled_posets(n):
        classes.setdefault(_orbit_key(m), m)
    assert len(posets(n)) == len(classes)
    assert {_orbit_key(m) for m in posets(n)} == set(classes)
    assert count_structures(n, exact=True) == sum(_upset_count(m) for m in classes.values())


def test_known_counts():
    assert [len(posets(n)) for n in range(1, 7)] == [1, 2, 5, 16, 63, 318]
    assert count_structures(1) == 2
    assert count_structures(2, exact=True) == 7
    assert count_structures(2) == 9


def test_enumeration_is_deterministic_and_duplicate_free():
    a = list(enumerate_structures(4))
    b = list(enumerate_structures(4))
    assert a == b
    per_poset = {}
    for s in a:
        per_poset.setdefault((len(s), s.leq.tobytes()), set()).add(s.q_mask)
    assert sum(map(len, per_poset.values())) == len(a)


def test_enumeration_bounds():
    with pytest.raises(ValueError):
        list(enumerate_structures(0))
    with pytest.raises(ValueError):
        list(enumerate_structures(7))


def test_canonical_code_detects_isomorphism():
    w3p = catalog.model("W3'").structure
    relabeled = Structure.from_pairs(["x", "a", "b"], [("x", "a"), ("x", "b")], ["a", "b"])
    assert canonical_code(relabeled) == canonical_code(w3p)
    assert canonical_code(catalog.model("W3").structure) != canonical_code(w3p)


# --- tables

FIG4 = {
    "W1": "11111111",
    "W1_bot": "00111111",
    "W2": "01010111",
    "W2_bot": "00110111",
    "W2'": "00110101",
    "W3": "01000011",
    "W3_bot": "00100111",
    "W3'": "00100100",
    "W4": "01000111",
    "W4_bot": "00100111",
}


def test_catalog_table_matches_overview():
    t = catalog_table()
    assert tuple(t.columns) == catalog.FIG4_COLUMNS
    assert t.rows == list(FIG4)
    for row, bits in FIG4.items():
        assert "".join("1" if x else "0" for x in t.row(row)) == bits


def test_table_renderings():
    t = catalog_table()
    csv = t.to_csv().splitlines()
    assert csv[0] == "model,DNE,EFQ,LEM,DGP,PP,WLEM,WT,DGPimp"
    assert csv[3] == "W2,0,1,0,1,0,1,1,1"
    assert '"DNE": true' in t.to_json()
    assert "✓" in t.to_text() and "✗" in t.to_text()


def test_cells_match_schema_validity():
    ms = [(f"S{i}", s) for i, s in enumerate(enumerate_structures(3))]
    ps = [catalog.principle(k) for k in ("DGP", "SmL")]
    t = classify(ms, ps)
    for (name, s) in ms:
        for p in ps:
            assert t.cell(name, p.key) == schema_valid_full(s, p.schema)


def test_parallel_classification_is_identical():
    ms = [(f"S{i}", s) for i, s in enumerate(enumerate_structures(3))]
    ps = [catalog.principle(k) for k in catalog.FIG4_COLUMNS]
    assert np.array_equal(classify(ms, ps).cells, classify(ms, ps, jobs=2).cells)


# --- separations


def test_efq_without_wlem_is_the_v():
    s = find_separation(SeparationQuery({"EFQ"}, {"WLEM"}))
    assert canonical_code(s) == canonical_code(catalog.model("W3").structure)


def test_wlem_without_dgp_lem_efq_exists():
    s = find_separation(SeparationQuery({"WLEM"}, {"DGP", "LEM", "EFQ"}, 4))
    assert s is not None
    assert schema_valid_full(s, catalog.principle("WLEM").schema)
    assert s.abnormal


def test_dne_forces_empty_cone():
    assert find_separation(SeparationQuery({"DNE"}, {"EFQ"})) is None


def test_query_validation():
    with pytest.raises(ValueError):
        SeparationQuery({"LEM"}, {"LEM"})
    with pytest.raises(ValueError):
        SeparationQuery({"LEM"}, set(), 0)


def test_proved_arrows_have_no_separation():
    for a, b in catalog.FIG1_EDGES:
        assert find_separation(SeparationQuery({a}, {b}, 3)) is None


# --- audits


def test_audit_figure1():
    pairs = audit_figure1()
    assert len(pairs) == 56
    assert all(p.ok for p in pairs), [p for p in pairs if not p.ok]
    by = {(p.a, p.b): p for p in pairs}
    assert by["LEM", "WT"].kind == "separated" and by["LEM", "WT"].detail == "W2'"
    assert by["DNE", "WT"].kind == "proved" and by["DNE", "WT"].detail == "DNE → PP → WT"
    assert by["DGPimp", "WLEM"].detail == "W3"
    assert sum(p.kind == "proved" for p in pairs) == 18


def test_experiments_other_than_the_w3prime_claim():
    checks = {c.name: c for c in run_experiments()}
    for name, c in checks.items():
        if "W3'" not in name:
            assert c.ok, name
    sml = catalog.principle("SmL").schema
    assert schema_valid_full(catalog.model("W2").structure, sml)
    assert schema_valid_full(catalog.model("W3'").structure, catalog.principle("Scott").schema)


def test_characterization_sweep_small():
    rep = characterize(3)
    assert rep.structures == 37
    assert not rep.mismatches
    assert not rep.w4_pattern_found  # the diamond needs four worlds


def test_sml_cannot_fail_on_w3prime():
    # W3' validates LEM and LEM derives SmL, so soundness forces SmL to hold there
    from minparadox.ledger import check_entry, ledger

    w3p = catalog.model("W3'").structure
    assert schema_valid_full(w3p, catalog.principle("LEM").schema)
    assert check_entry(next(e for e in ledger() if e.name == "LEM⊢SmL")).derived
    assert schema_valid_full(w3p, catalog.principle("SmL").schema)
    # SmL holds and DGP fails on W3', so SmL does not imply DGP
    assert not schema_valid_full(w3p, catalog.principle("DGP").schema)

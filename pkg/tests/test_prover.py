import numpy as np
import pytest

from _randgen import random_formula
from minparadox import catalog
from minparadox.formula import parse
from minparadox.kripke import Model, forces
from minparadox.prover import BudgetExceeded, Prover, derives, derives_minimal


def d(assumptions, goal, **kw):
    return derives([parse(a) for a in assumptions], parse(goal), **kw)


@pytest.mark.parametrize(
    "assumptions, goal, expected",
    [
        ([], "p -> p", True),
        ([], "bot -> p", False),
        (["~top -> (top -> p)"], "bot -> p", True),
        ([], "(p -> ~p) -> ~p", True),
        (["p | ~p", "bot -> p"], "~~p -> p", True),
        ([], "p | ~p", False),
        ([], "~~p -> p", False),
        ([], "~~~p -> ~p", True),
        ([], "p -> ~~p", True),
        (["p & q"], "q & p", True),
        (["p | q", "p -> r", "q -> r"], "r", True),
        ([], "((p -> q) -> p) -> p", False),
        ([], "~~(p | ~p)", True),
        ([], "(p -> q) | (q -> p)", False),
    ],
)
def test_minimal_examples(assumptions, goal, expected):
    assert d(assumptions, goal) is expected


def test_bottom_is_an_atom_only_in_minimal_mode():
    assert not d([], "bot -> p")
    assert d([], "bot -> p", mode="intuitionistic")
    assert d([], "((p -> q) -> p) -> p", mode="intuitionistic") is False
    assert d(["~p", "p"], "q", mode="intuitionistic")
    assert not d(["~p", "p"], "q")


def test_bot_renaming_is_harmless():
    # minimal logic treats bot exactly like a fresh atom
    assert d(["~~p"], "~~~~p") == d(["(p -> z) -> z"], "((((p -> z) -> z) -> z) -> z)")


def test_budget():
    with pytest.raises(BudgetExceeded):
        derives([], catalog.principle("P8").schema.generic(), budget=3)


def test_mode_validation():
    with pytest.raises(ValueError):
        Prover("classical")


def test_provable_catalog_principles():
    for key in catalog.PROVABLE_KEYS:
        assert derives_minimal([], catalog.principle(key).schema.generic()), key


def test_unprovable_catalog_principles():
    for key in ("DNE", "EFQ", "LEM", "WLEM", "PP", "DGP", "WT", "DGPimp", "KP", "Scott", "SmL"):
        assert not derives_minimal([], catalog.principle(key).schema.generic()), key


def _all_models(structures, names):
    for s in structures:
        ups = [s.unmask(int(u)) for u in s.upset_masks]
        for combo in np.ndindex(*([len(ups)] * len(names))):
            yield Model(s, {a: ups[i] for a, i in zip(names, combo)})


def test_soundness_on_small_random_sequents():
    from minparadox.search import enumerate_structures

    structures = list(enumerate_structures(3))
    rng = np.random.default_rng(11)
    prover = Prover()
    for _ in range(60):
        gamma = [random_formula(rng, 2, ("p", "q")) for _ in range(rng.integers(0, 3))]
        goal = random_formula(rng, 3, ("p", "q"))
        if not prover.derives(gamma, goal):
            continue
        for m in _all_models(structures, ("p", "q")):
            for w in m.structure.worlds:
                if all(forces(m, w, g) for g in gamma):
                    assert forces(m, w, goal)

import random

from hypothesis import given

from conftest import ordinals
from forcinglab.ccc import SimConfig, simulate_generic_pprime
from forcinglab.generators import plant_quotient_pools, plant_split_family, random_pcond
from forcinglab.ordinals import OMEGA, ZERO
from forcinglab.pstar import Certificate
from forcinglab.serialize import RunManifest, dumps, encode, loads, to_dot
from forcinglab.side import pcond
from forcinglab.trees import EMPTY_TREE, Tree
from forcinglab.universe import DEFAULT_UNIVERSE, Countable, Station, model


def test_round_trip_on_random_conditions():
    r = random.Random(0)
    for _ in range(1000):
        c = random_pcond(r)
        text = dumps(c)
        assert loads(text) == c
        assert dumps(loads(text)) == text


@given(ordinals())
def test_ordinals_round_trip(a):
    assert loads(dumps(a)) == a


def test_round_trip_on_other_types():
    values = [
        plant_split_family(random.Random(1), 3),
        DEFAULT_UNIVERSE,
        RunManifest("gen", "tree", {"count": 3}, 7),
        Certificate(("a", "b")),
        {Station(4): frozenset({ZERO}), Countable(OMEGA): frozenset()},
        (1, "x", None, True, [model(1, (0, 1))]),
        simulate_generic_pprime(SimConfig(indices=(0, 1), height=3, pairs=((0, 1),))),
        plant_quotient_pools(random.Random(2), 2),
    ]
    for v in values:
        assert loads(dumps(v)) == v, type(v).__name__


def test_equal_sets_print_identically():
    a = frozenset({Station(3), Countable(ZERO), Station(1)})
    b = frozenset(sorted(a, reverse=True))
    assert dumps(a) == dumps(b)
    assert encode(ZERO) == {"$o": "0"}


def test_empty_tree_dot_is_a_single_node():
    dot = to_dot(EMPTY_TREE)
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    assert dot.count("[label=") == 1 and "->" not in dot


def test_dot_colours_subtrees():
    t = Tree.from_parents({ZERO: None, OMEGA: ZERO, OMEGA + 1: ZERO})
    dot = to_dot(pcond(t, {Station(4): {ZERO, OMEGA}, Station(5): {ZERO, OMEGA + 1}}))
    assert dot.count("->") == 2
    assert "striped" in dot
    assert "cluster_legend" in dot and "s4" in dot and "s5" in dot

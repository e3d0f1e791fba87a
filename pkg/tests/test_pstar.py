import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcinglab import naive
from forcinglab.generators import extend_pstar, mutate_pstar, plant_split_family, random_pstar
from forcinglab.ordinals import OMEGA, ZERO, ch_point, parse
from forcinglab.pstar import (
    EMPTY,
    HypothesisViolation,
    PStar,
    amalgamate_split_family,
    is_split_pair,
    leq_failures,
    leq_pstar,
    make,
    normalize,
    normalize_check,
    oplus_pstar,
    split_consequence_failures,
    split_failures,
    validate_pstar,
)
from forcinglab.trees import Tree, validate_tree

W1, W2 = OMEGA, parse("w*2")
D1, D2, D3 = ch_point(1), ch_point(2), ch_point(3)

seeds = st.integers(0, 10**9)


def parts4(c):
    return (c.T.nodes, c.T.order, c.W, c.D)


def fork(*tops, below=ZERO):
    return Tree.from_parents({below: None, **{x: below for x in tops}})


def test_validate_examples():
    assert validate_pstar(EMPTY) == (True, [])
    t = fork(W1)
    assert validate_pstar(make(t, {5: {ZERO, W1}}))[0]
    ok, why = validate_pstar(make(t, {5: {W1}}))
    assert not ok and "downwards closed" in why[0]
    assert not validate_pstar(make(t, {5: {ZERO}}, [{5, 6}]))[0]


def test_leq_examples():
    p = make(fork(W1, W1 + 1), {1: {ZERO, W1}, 2: {ZERO, W1 + 1}}, [{1, 2}])
    assert leq_pstar(p, p)
    assert leq_pstar(p, EMPTY)
    t = fork(W1, W1 + 1, W2)
    q = make(t, {1: {ZERO, W1, W2}, 2: {ZERO, W1 + 1, W2}}, [{1, 2}])
    assert validate_pstar(q)[0]
    assert not leq_pstar(q, p)
    assert leq_failures(q, p)[0].startswith("(d)")
    with pytest.raises(ValueError):
        leq_pstar(make(fork(W1), {5: {W1}}), p)


def test_normalize_examples():
    p = make(Tree.from_parents({ZERO: None, W1: ZERO, W2: W1}), {0: {ZERO, W1}})
    assert normalize(p) == p
    q = make(fork(W2, W2 + 1), {0: {ZERO, W2}, 1: {ZERO, W2 + 1}}, [{0, 1}])
    n = normalize(q)
    assert validate_tree(n.T).as_tuple() == (True, True, True)
    low = [x for x in n.T.nodes - q.T.nodes if x < W2]
    assert len(low) == 2 and all(OMEGA <= x < W2 for x in low)
    assert n.T.parent(W2) != n.T.parent(W2 + 1)
    assert normalize_check(q, n) == []
    assert n.D == q.D and n.dom == q.dom


def test_split_examples():
    assert is_split_pair(EMPTY, EMPTY, D1, D2)
    low = Tree.from_parents({ZERO: None, W1: ZERO})
    p = make(Tree.from_parents({ZERO: None, W1: ZERO, D1 + W1: W1}), {0: {ZERO, W1, D1 + W1}})
    q = make(Tree.from_parents({ZERO: None, W1: ZERO, D2 + W1: W1}), {0: {ZERO, W1, D2 + W1}})
    assert low.nodes < p.T.nodes
    assert is_split_pair(p, q, D1, D2)
    bad = make(p.T, {0: p.W[0], 1: {ZERO, W1, D1 + W1}})
    bad_q = make(q.T, {0: q.W[0], 1: {ZERO, W1}})
    assert split_failures(bad, bad_q, D1, D2) == ["(4)"]
    with pytest.raises(ValueError):
        is_split_pair(p, q, D2, D1)
    with pytest.raises(ValueError):
        is_split_pair(p, q, OMEGA, D2)


def test_oplus_examples():
    p = random_pstar(random.Random(1))
    assert oplus_pstar([p, p]) == p
    a = make(Tree.from_parents({ZERO: None, W1: ZERO, W2: W1}))
    b = make(fork(W1, W2))
    assert not validate_pstar(oplus_pstar([a, b]))[0] or not leq_pstar(oplus_pstar([a, b]), b, check=False)


def test_amalgamation_examples():
    am, cert = amalgamate_split_family([EMPTY, EMPTY], [D1, D2])
    assert am == EMPTY and "delta-system" in cert.checked
    fam = plant_split_family(random.Random(7), 3)
    am, cert = amalgamate_split_family(fam.parts, fam.deltas)
    for c in fam.parts:
        assert naive.pstar_leq(parts4(am), parts4(c))
    p = make(fork(W1), {0: {ZERO, W1}, 1: {ZERO, W1}})
    q = make(fork(W1), {0: {ZERO, W1}, 1: {ZERO, W1}})
    p2 = make(Tree.from_parents({ZERO: None, W1: ZERO, D1: W1}), {0: {ZERO, W1, D1}, 1: {ZERO, W1, D1}})
    with pytest.raises(HypothesisViolation) as err:
        amalgamate_split_family([p2, q], [D1, D2])
    assert err.value.clause.startswith("split")
    assert is_split_pair(p, q, D1, D2)


@given(seeds, st.sampled_from((2, 3, 4)))
@settings(max_examples=60)
def test_split_consequences_hold(s, d):
    fam = plant_split_family(random.Random(s), d)
    for i in range(d):
        for j in range(i + 1, d):
            p, q = fam.parts[i], fam.parts[j]
            assert is_split_pair(p, q, fam.deltas[i], fam.deltas[j])
            assert naive.split_ok(parts4(p), parts4(q), fam.deltas[i], fam.deltas[j])
            assert split_consequence_failures(p, q, fam.deltas[i]) == []


@given(seeds)
@settings(max_examples=100)
def test_leq_reflexive_and_transitive(s):
    r = random.Random(s)
    p = random_pstar(r, high=0.3)
    q = extend_pstar(r, p)
    u = extend_pstar(r, q)
    assert leq_pstar(p, p)
    if all(validate_pstar(c)[0] for c in (q, u)) and leq_pstar(q, p) and leq_pstar(u, q):
        assert leq_pstar(u, p)


@given(seeds)
@settings(max_examples=100)
def test_normalize_meets_every_clause(s):
    p = random_pstar(random.Random(s), high=0.3)
    q = normalize(p)
    assert normalize_check(p, q) == []
    assert naive.pstar_leq(parts4(q), parts4(p))
    assert naive.tree_flags(q.T.nodes, q.T.order) == (True, True, True)
    assert normalize(q) == q


@given(seeds)
@settings(max_examples=200)
def test_validate_matches_oracle_on_raw_inputs(s):
    r = random.Random(s)
    c = mutate_pstar(r, random_pstar(r, high=0.3))
    assert validate_pstar(c)[0] == naive.pstar_ok(*parts4(c))


def test_empty_reads_as_empty_subtree():
    p = PStar(fork(W1), {}, frozenset())
    assert p.w(3) == frozenset()

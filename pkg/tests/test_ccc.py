import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcinglab.ccc import (
    TOP,
    EFunction,
    SimConfig,
    check_strong_almost_disjoint,
    derive_triple_family,
    find_compatible_pair,
    is_e_separated,
    make_weak_rho,
    simulate_generic_pprime,
    validate_pprime,
    verify_weak_rho,
)
from forcinglab.generators import extend_pstar, plant_copy_family, plant_split_family
from forcinglab.ordinals import OMEGA, ONE, ZERO, Ordinal, ch_point, h_of, parse
from forcinglab.pstar import amalgamate_split_family, leq_pstar, make, pair, validate_pstar
from forcinglab.trees import Tree

W1, W2 = OMEGA, parse("w*2")


def fork(*tops):
    return Tree.from_parents({ZERO: None, **{x: ZERO for x in tops}})


def test_e_separation_examples():
    t = fork(W1)
    assert is_e_separated({5: {ZERO, W1}}, EFunction({}, ZERO))
    assert not is_e_separated({5: {ZERO, W1}, 7: {ZERO, W1}}, EFunction({pair(5, 7): ZERO}, TOP))
    assert is_e_separated({5: {ZERO, W1}, 7: {ZERO, W1}}, make_weak_rho("constant-top"))
    assert validate_pprime(make(t, {5: {ZERO, W1}, 7: {ZERO}}), EFunction({}, ZERO))[0]


def test_weak_rho_examples():
    fam = [[{0}, {1}], [{2, 3}, {4}, {5}]]
    assert verify_weak_rho(make_weak_rho("constant-top"), fam, [ONE, OMEGA]) == (True, None)
    assert verify_weak_rho(make_weak_rho("adversarial-small"), [[{0}, {1}]], [ONE]) == (False, (0, ONE))
    with pytest.raises(ValueError):
        verify_weak_rho(make_weak_rho("constant-top"), [[{0, 1}, {1}]], [ONE])
    with pytest.raises(ValueError):
        make_weak_rho("bogus")


def test_random_weak_rho_is_reproducible():
    a = make_weak_rho("random", range(10), seed=1, p=0.5)
    b = make_weak_rho("random", range(10), seed=1, p=0.5)
    assert a == b and a.table


def test_weak_rho_against_exhaustive_scan():
    r = random.Random(11)
    idx = range(40)
    e = make_weak_rho("random", idx, seed=5, p=0.9, small=3)
    gammas = [ONE, Ordinal.of(2), OMEGA]
    for _ in range(40):
        pool = r.sample(list(idx), 15)
        fam = [set(pool[3 * k:3 * k + 3]) for k in range(5)]
        for g in gammas:
            brute = any(all(e(x, y) >= g for x in fam[i] for y in fam[j]) for i, j in combinations(range(5), 2))
            assert verify_weak_rho(e, [fam], [g])[0] == brute


def test_compatible_pair_examples():
    p = make(fork(W1), {5: {ZERO, W1}})
    res = find_compatible_pair([p, p], make_weak_rho("constant-top"))
    assert res.ok and (res.i, res.j) == (0, 1) and res.amalgam == p
    a = make(fork(W1))
    b = make(Tree.from_parents({ZERO: None, W1: ZERO, W2: W1}))
    c = make(fork(W1, W1 + 1))
    res = find_compatible_pair([a, b, c], make_weak_rho("constant-top"))
    assert not res.ok and res.stage.startswith("(i)")


@pytest.mark.parametrize("kind", ["constant-top", "random-high"])
def test_compatible_pair_on_translated_copies(kind):
    fam = plant_copy_family(random.Random(4), 200, kind)
    assert verify_weak_rho(fam.e, [fam.blocks], [fam.zeta, TOP])[0]
    res = find_compatible_pair(fam.conds, fam.e, fam.levels)
    assert res.ok
    am = res.amalgam
    assert validate_pprime(am, fam.e)[0]
    assert leq_pstar(am, fam.conds[res.i]) and leq_pstar(am, fam.conds[res.j])


def test_simulator_examples():
    g = simulate_generic_pprime(SimConfig(indices=(), height=1))
    assert g.tree.nodes == {ZERO}
    g = simulate_generic_pprime(SimConfig(indices=(5,), height=3))
    assert {h_of(x) for x in g.subtrees[5]} >= {Ordinal.of(k) for k in range(3)}
    assert all(g.tree.below(x) <= g.subtrees[5] for x in g.subtrees[5])
    g = simulate_generic_pprime(SimConfig(indices=(5, 7), height=4, pairs=((5, 7),), seed=3))
    (cert,) = check_strong_almost_disjoint(g)
    assert cert.committed and cert.certified and cert.generators >= 1


def test_uncommitted_pairs_report_no_certificate():
    g = simulate_generic_pprime(SimConfig(indices=(1, 2), height=3, pairs=()))
    (cert,) = check_strong_almost_disjoint(g)
    assert not cert.committed and not cert.certified


def test_triple_family_examples():
    chain = Tree.from_parents({ZERO: None, W1: ZERO, W2: W1})
    fams, _ = derive_triple_family(chain, {0: chain.nodes})
    assert fams[0] == frozenset()
    b = Tree.from_parents({ZERO: None, W1: ZERO, W1 + 1: ZERO, W2: W1, W2 + 1: W1})
    fams, report = derive_triple_family(b, {0: b.nodes, 1: {ZERO, W1, W1 + 1}})
    assert fams[0] == {frozenset({ZERO, W1, W1 + 1}), frozenset({W1, W2, W2 + 1})}
    assert report[(0, 1)] == 1


@given(st.integers(0, 10**6))
@settings(max_examples=8, deadline=None)
def test_simulator_chain_descends_in_pprime(s):
    e = make_weak_rho("constant-top")
    g = simulate_generic_pprime(SimConfig(indices=(0, 1, 2), height=4, pairs=((0, 1),), seed=s))
    for a, b in zip(g.chain, g.chain[1:]):
        assert validate_pprime(b, e)[0]
        assert leq_pstar(b, a)
    assert all(c.certified for c in check_strong_almost_disjoint(g) if c.committed)


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_private_nodes_stay_incomparable_below_an_amalgam(s):
    r = random.Random(s)
    fam = plant_split_family(r, 2)
    am, _ = amalgamate_split_family(fam.parts, fam.deltas)
    p, q = fam.parts
    only_p, only_q = p.T.nodes - q.T.nodes, q.T.nodes - p.T.nodes
    c = am
    for _ in range(4):
        nxt = extend_pstar(r, c)
        if validate_pstar(nxt)[0] and leq_pstar(nxt, c):
            c = nxt
    assert all(not c.T.comparable(x, y) for x in only_p for y in only_q)


def test_default_levels_are_ch_points():
    p = make(fork(W1))
    res = find_compatible_pair([p, p, p], make_weak_rho("constant-top"))
    assert res.ok and res.amalgam == p and all(x < ch_point(1) for x in p.T.nodes)

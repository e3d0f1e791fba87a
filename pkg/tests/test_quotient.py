import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcinglab.ccc import SimConfig
from forcinglab.generators import (
    CONVERSE_EXAMPLE,
    THETA,
    extend_pcond,
    plant_add_model,
    plant_converse_counterexample,
    plant_mirror,
    plant_quotient_pools,
    valid_pcond,
)
from forcinglab.ordinals import OMEGA, ZERO
from forcinglab.pstar import HypothesisViolation
from forcinglab.quotient import (
    FilterConfig,
    SearchFailure,
    common_extension,
    dtheta_check,
    dtheta_densify,
    in_p_theta,
    in_sk_theta,
    in_theta,
    project_theta,
    quotient_add_model,
    quotient_amalgamate,
    quotient_membership,
    quotient_multi_amalgamate,
    simulate_ptheta_filter,
)
from forcinglab.side import leq_p, oplus_p, p_violations, pcond, validate_p
from forcinglab.suites import converse_failures
from forcinglab.trees import Tree
from forcinglab.universe import DEFAULT_UNIVERSE as U
from forcinglab.universe import Countable, Station, model

seeds = st.integers(0, 10**9)
BASE = (0, 1, 2, 3)
T1 = Tree.from_parents({ZERO: None, OMEGA: ZERO})


def test_projection_examples():
    p = pcond(T1, {Station(4): T1.nodes, Station(13): T1.nodes, Countable(0): {ZERO}},
              D=[{Station(4), Station(13)}], A=[model(1, BASE), model(2, BASE + (13,))])
    s = project_theta(p, THETA, U)
    assert set(s.W) == {Station(4), Countable(0)}
    assert s.D == frozenset() and s.A == {model(1, BASE)}
    assert s.T == p.T
    assert in_p_theta(s, THETA, U) and not in_p_theta(p, THETA, U)
    with pytest.raises(ValueError):
        project_theta(p, 8, U)


def test_membership_helpers():
    assert in_theta(Station(11), THETA) and not in_theta(Station(12), THETA)
    assert in_theta(Countable(OMEGA), THETA)
    assert in_sk_theta(model(1, BASE + (11,)), THETA)
    assert not in_sk_theta(model(1, BASE + (12,)), THETA)


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_condition_extends_its_projection(s):
    p = valid_pcond(random.Random(s), U)
    proj = project_theta(p, THETA, U)
    assert in_p_theta(proj, THETA, U) and leq_p(p, proj, U)
    assert project_theta(proj, THETA, U) == proj


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_projection_is_monotone(s):
    r = random.Random(s)
    p = valid_pcond(r, U)
    q = extend_pcond(r, p, U)
    if not p_violations(q, U) and leq_p(q, p, U):
        assert leq_p(project_theta(q, THETA, U), project_theta(p, THETA, U), U)


@given(seeds)
@settings(max_examples=150, deadline=None)
def test_projection_distributes_over_sums(s):
    r = random.Random(s)
    p = valid_pcond(r, U)
    parts = [p, extend_pcond(r, p, U)]
    if any(p_violations(c, U) for c in parts) or p_violations(oplus_p(parts), U):
        return
    assert project_theta(oplus_p(parts), THETA, U) == oplus_p([project_theta(c, THETA, U) for c in parts])


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_densify_lands_in_the_dense_set(s):
    pl = plant_mirror(random.Random(s), with_model=s % 2 == 0)
    res = dtheta_densify(pl.q, pl.theta, U, pl.n)
    assert dtheta_check(res.condition, pl.theta, U) is not None
    assert leq_p(res.condition, pl.q, U)
    if pl.n is not None:
        assert U.is_N_closed(res.condition.A, pl.n)


def test_starved_mirror_is_a_search_failure():
    pl = plant_mirror(random.Random(1), starve=True)
    with pytest.raises(SearchFailure):
        dtheta_densify(pl.q, pl.theta, U, pl.n)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_quotient_amalgam_is_below_both(s):
    r = random.Random(s)
    pl = plant_mirror(r)
    p = dtheta_densify(pl.q, pl.theta, U, pl.n).condition
    proj = project_theta(p, THETA, U)
    t = extend_pcond(r, proj, U)
    if p_violations(t, U) or not leq_p(t, proj, U) or not in_p_theta(t, THETA, U):
        return
    am = quotient_amalgamate(p, t, THETA, U)
    assert validate_p(am, U)[0] and leq_p(am, p, U) and leq_p(am, t, U)


def test_filter_examples():
    fa = simulate_ptheta_filter(FilterConfig(THETA, SimConfig(indices=(), height=1)), U)
    assert fa.tree.nodes == {ZERO} and not fa.generator.A
    fa = simulate_ptheta_filter(FilterConfig(THETA, SimConfig(indices=(0, 1), height=3), (model(1, BASE), model(2, BASE + (12,)))), U)
    assert model(1, BASE) in fa.generator.A
    assert fa.skipped == (model(2, BASE + (12,)),)
    with pytest.raises(ValueError):
        simulate_ptheta_filter(FilterConfig(THETA, SimConfig(indices=(Station(13),))), U)
    with pytest.raises(ValueError):
        fa.with_generator(pcond(A=[model(1, (0, 1))]))


def test_common_extension_examples():
    a = pcond(A=[model(1, BASE)])
    assert common_extension(a, pcond(), U).status == "compatible"
    rep = common_extension(a, pcond(A=[model(1, (0, 1))]), U)
    assert rep.status == "incompatible" and "adequate" in rep.reason
    b = pcond(Tree.from_parents({ZERO: None, OMEGA: ZERO, OMEGA + 1: OMEGA}))
    c = pcond(Tree.from_parents({ZERO: None, OMEGA + 1: ZERO, OMEGA: OMEGA + 1}))
    assert common_extension(b, c, U).status == "incompatible"


def test_converse_counterexample_as_planted():
    assert converse_failures(CONVERSE_EXAMPLE) == []


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_random_converse_counterexamples(s):
    assert converse_failures(plant_converse_counterexample(random.Random(s), U)) == []


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_add_model_over_the_filter(s):
    sc = plant_add_model(random.Random(s))
    pn, v = quotient_add_model(sc.p, sc.n, sc.happrox)
    assert sc.n in pn.A and leq_p(v, pn, U)


def test_add_model_needs_models():
    sc = plant_add_model(random.Random(0))
    with pytest.raises(HypothesisViolation) as err:
        quotient_add_model(pcond(), sc.n, sc.happrox)
    assert err.value.clause == "nonempty"


@given(seeds, st.sampled_from((2, 3)))
@settings(max_examples=20, deadline=None)
def test_multi_amalgam_is_in_the_quotient(s, d):
    sc = plant_quotient_pools(random.Random(s), d)
    res = quotient_multi_amalgamate(sc.pools, sc.happrox, d)
    assert quotient_membership(res.amalgam, sc.happrox).member
    assert all(leq_p(res.amalgam, c, U) for c, _ in res.chosen)


def test_multi_amalgam_examples():
    sc = plant_quotient_pools(random.Random(0), 2)
    with pytest.raises(ValueError):
        quotient_multi_amalgamate([[]], sc.happrox, 2)
    c, n = sc.pools[0][0]
    assert quotient_multi_amalgamate(sc.pools, sc.happrox, 1).amalgam == c

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcinglab import naive
from forcinglab.generators import (
    VIOLATION_CLAUSES,
    extend_pcond,
    plant_fingerprint_family,
    plant_reflection,
    plant_violation,
    random_pcond,
    valid_pcond,
)
from forcinglab.ordinals import OMEGA, ZERO, ch_point
from forcinglab.pstar import HypothesisViolation
from forcinglab.side import (
    PCond,
    add_model,
    amalgamate_fingerprint,
    amalgamate_models,
    closure_extend,
    fingerprint_w,
    leq_p,
    oplus_leq_criterion,
    pcond,
    reflect_generic,
    reflection_clauses,
    validate_p,
)
from forcinglab.trees import Tree
from forcinglab.universe import DEFAULT_UNIVERSE as U
from forcinglab.universe import Countable, model, sk_contains

seeds = st.integers(0, 10**9)
BASE = (0, 1, 2, 3)
D1 = ch_point(1)
HIGH = Tree.from_parents({ZERO: None, OMEGA: ZERO, D1 + OMEGA: OMEGA})


def parts6(c):
    return (c.T.nodes, c.T.order, c.W, c.D, c.A)


def test_validate_examples():
    assert validate_p(PCond(), U) == (True, [])
    ok, why = validate_p(pcond(A=[model(1, (2,))]), U)
    assert not ok and "not a model" in why[0]
    ok, why = validate_p(pcond(A=[model(1, (0, 1)), model(1, BASE)]), U)
    assert not ok and "adequate" in why[0]
    W = {Countable(0): HIGH.nodes, Countable(1): HIGH.nodes}
    assert validate_p(pcond(HIGH, W), U)[0]
    ok, why = validate_p(pcond(HIGH, W, A=[model(1, BASE)]), U)
    assert not ok and "outside" in why[0]
    assert validate_p(pcond(HIGH, W, A=[model(2, BASE)]), U)[0]


def test_leq_examples():
    p = pcond(A=[model(1, BASE)])
    q = pcond(A=[model(1, BASE), model(2, BASE + (5,))])
    assert leq_p(q, p, U) and not leq_p(p, q, U)
    assert leq_p(p, PCond(), U)
    with pytest.raises(ValueError):
        leq_p(pcond(A=[model(1, (2,))]), p, U)


def test_add_model_examples():
    p = pcond(A=[model(1, BASE)])
    q = add_model(p, model(2, BASE + (4,)), U)
    assert leq_p(q, p, U) and len(q.A) == 2
    with pytest.raises(ValueError):
        add_model(p, model(1, (2,)), U)
    with pytest.raises(ValueError):
        add_model(p, model(1, BASE), U)


def test_closure_extend_examples():
    n = model(2, BASE + (4,))
    p = pcond(A=[model(1, BASE + (5,)), n])
    q = closure_extend(p, "N", n, U)
    assert model(1, BASE) in q.A and leq_p(q, p, U)
    assert closure_extend(p, "beta", 4, U).A == p.A | {model(1, BASE), model(2, BASE)}
    with pytest.raises(ValueError):
        closure_extend(p, "N", model(3), U)
    with pytest.raises(ValueError):
        closure_extend(p, "gamma", 4, U)


def test_oplus_criterion_rejects_bad_hypotheses():
    p = pcond(A=[model(1, BASE)])
    with pytest.raises(HypothesisViolation) as err:
        oplus_leq_criterion([p, p], PCond(), U)
    assert err.value.clause == "(2)"
    with pytest.raises(HypothesisViolation) as err:
        oplus_leq_criterion([p, p], pcond(A=[model(1, (2,))]), U)
    assert err.value.clause == "(1)"
    assert oplus_leq_criterion([p, p], p, U)


def test_fingerprint_requires_a_closed_model():
    p = pcond(A=[model(1, BASE + (5,)), model(2, BASE + (4,))])
    with pytest.raises(ValueError):
        fingerprint_w(p, model(2, BASE + (4,)), U)
    with pytest.raises(ValueError):
        fingerprint_w(p, model(3), U)


@pytest.mark.parametrize("clause", VIOLATION_CLAUSES)
def test_planted_violations_name_their_clause(clause):
    seen = 0
    for s in range(30):
        x = plant_violation(random.Random(s), clause)
        if x is None:
            continue
        parts, models, f, g = x
        with pytest.raises(HypothesisViolation) as err:
            if clause == "fingerprint":
                amalgamate_fingerprint(parts, models, U)
            else:
                amalgamate_models(parts, models, f, g, U)
        assert err.value.clause == clause
        seen += 1
    assert seen >= 10


@given(seeds, st.sampled_from((1, 2, 3)))
@settings(max_examples=60, deadline=None)
def test_fingerprint_amalgam_extends_every_part(s, d):
    fam = plant_fingerprint_family(random.Random(s), d)
    if d == 1:
        return
    am, cert = amalgamate_fingerprint(fam.parts, fam.models, U)
    assert validate_p(am, U)[0]
    for p in fam.parts:
        assert leq_p(am, p, U)
        assert naive.p_leq(parts6(am), parts6(p))
    assert "three delta-systems" in cert.checked


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_validate_matches_oracle(s):
    c = random_pcond(random.Random(s), U)
    assert validate_p(c, U)[0] == naive.p_ok(U, *parts6(c))


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_leq_matches_oracle(s):
    r = random.Random(s)
    p = valid_pcond(r, U)
    q = extend_pcond(r, p, U)
    if validate_p(q, U)[0]:
        assert leq_p(q, p, U) == naive.p_leq(parts6(q), parts6(p))


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_planted_reflection_finds_a_copy(s):
    plant = plant_reflection(random.Random(s))
    res = reflect_generic(plant.q, plant.n, U)
    assert res.ok
    assert sk_contains(plant.n, res.witness)
    assert leq_p(res.amalgam, plant.q, U) and leq_p(res.amalgam, res.witness, U)


def test_reflection_examples():
    n = model(2, BASE + (4,))
    q = pcond(A=[model(1, BASE)])
    res = reflect_generic(q, n, U)
    assert res.ok and res.witness == q and res.tried == 0
    with pytest.raises(ValueError):
        reflect_generic(pcond(A=[model(3, BASE)]), n, U)
    plant = plant_reflection(random.Random(2), starve=True)
    assert not reflect_generic(plant.q, plant.n, U).ok


def test_copy_of_itself_fails_the_hull_clause():
    plant = plant_reflection(random.Random(5))
    q, n = plant.q, plant.n
    ident = {e: e for e in q.W}
    assert "hull" in reflection_clauses(q, n, q, ident, {m: m for m in q.A}, U)

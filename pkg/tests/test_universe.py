import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcinglab import naive
from forcinglab.generators import profile_inputs, random_model, random_side
from forcinglab.ordinals import ch_point
from forcinglab.universe import (
    DEFAULT_UNIVERSE as U,
    PROFILES,
    Cut,
    Station,
    UniverseError,
    build_universe,
    cut,
    meet,
    model,
    sk_contains,
    sk_model,
    union_adequacy_check,
)

seeds = st.integers(0, 10**9)
BASE = (0, 1, 2, 3)


def test_build_universe_examples():
    u = build_universe({"stations": 6, "lambda0": [0, 1, 3], "lambda": [4], "sigma": [4]})
    assert u.size == 6 and u.lam == {4}
    with pytest.raises(UniverseError):
        build_universe({"stations": 0, "lambda": [], "sigma": []})
    with pytest.raises(UniverseError):
        build_universe({"stations": 6, "lambda0": [0], "lambda": [4], "sigma": [4]})
    with pytest.raises(UniverseError):
        build_universe({"stations": 6, "lambda0": [0, 1], "lambda": [4], "sigma": [5]})
    assert build_universe({"stations": 9, "seed": 3}) == build_universe({"stations": 9, "seed": 3})
    assert build_universe(U.to_config()) == U


def test_sk_contains_examples():
    n = model(2, BASE + (4,))
    assert sk_contains(n, model(1, BASE))
    assert not sk_contains(n, model(2, BASE))
    assert not sk_contains(n, model(1, BASE + (5,)))
    assert sk_contains(n, [ch_point(1), Station(4)])
    assert sk_contains(Cut(8), model(3, BASE + (4,)))
    assert not sk_contains(Cut(4), model(1, BASE + (4,)))


def test_comparison_point_examples():
    m, n = model(1, BASE), model(2, BASE + (5,))
    assert U.comparison_point(m, n) == 4
    assert U.comparison_point(model(1), model(2)) == 4
    assert U.comparison_point(model(1, BASE + (4,)), model(2, BASE + (4, 5))) == 8
    assert U.comparison_point(model(1, BASE + (16,)), model(2, BASE + (16,))) == U.size


def test_common_limit_station_stays_below_the_point():
    # a common station is below the point, so intersecting with it loses nothing
    m, n = model(1, BASE + (4,)), model(2, BASE + (4, 5))
    b = U.comparison_point(m, n)
    assert U.classify(m, n) == "<"
    assert meet(m, n) == cut(m, b)


def test_classify_and_adequacy_examples():
    m, n = model(1, BASE), model(2, BASE + (5,))
    assert U.classify(m, n) == "<" and U.classify(n, m) == ">"
    assert U.classify(m, model(1, BASE)) == "~"
    assert U.classify(model(1, BASE + (5,)), model(1, BASE + (6,))) == "~"
    assert U.classify(model(1, (0, 1)), model(1, BASE)) == "!"
    assert U.is_adequate({m, n})
    assert not U.is_adequate({model(1, (0, 1)), model(1, BASE)})
    assert not U.is_adequate({model(1, (2,))})


def test_closure_examples():
    m, n = model(1, BASE + (5,)), model(2, BASE + (4,))
    A = U.close_N({m, n}, n)
    assert A == {m, n, model(1, BASE)}
    assert U.is_N_closed(A, n)
    with pytest.raises(ValueError):
        U.close_N({m}, n)
    B = U.close_beta({n}, 4)
    assert B == {n, model(2, BASE)}
    with pytest.raises(ValueError):
        U.close_beta({n}, 5)


@given(seeds)
@settings(max_examples=200)
def test_comparison_point_symmetric_and_matches_oracle(s):
    r = random.Random(s)
    m, n = random_model(r, U), random_model(r, U)
    b = U.comparison_point(m, n)
    assert b == U.comparison_point(n, m)
    assert b == naive._point(U, m, n)
    assert all(t < b for t in m.stations & n.stations)


@given(seeds)
@settings(max_examples=200)
def test_adequacy_matches_oracle(s):
    r = random.Random(s)
    A = random_side(r, U, r.randint(1, 4), adequate=False)
    assert U.is_adequate(A) == naive.adequate(U, A)


@given(seeds)
@settings(max_examples=150)
def test_closures_idempotent_and_adequate(s):
    r = random.Random(s)
    A = random_side(r, U, r.randint(1, 4))
    n = max(A)
    C = U.close_N(A, n)
    assert U.close_N(C, n) == C and U.is_adequate(C)
    b = r.choice(sorted(U.lam))
    D = U.close_beta(A, b)
    assert U.close_beta(D, b) == D and U.is_adequate(D)


@given(seeds)
@settings(max_examples=200)
def test_order_read_off_from_heights(s):
    # inside an adequate set, M < N exactly when delta_M < delta_N
    r = random.Random(s)
    A = random_side(r, U, 4)
    for m, n in combinations(sorted(A), 2):
        c = U.classify(m, n)
        if m.delta < n.delta:
            assert c == "<"
        elif m.delta == n.delta:
            assert c == "~"


@given(seeds, st.sampled_from(PROFILES))
@settings(max_examples=300)
def test_profiles_have_no_counterexamples(s, profile):
    v = union_adequacy_check(U, profile, profile_inputs(random.Random(s), U, profile))
    assert not v.counterexample, v


def test_profile_examples():
    n = model(3, BASE + (4, 5))
    v = union_adequacy_check(U, "add-top-model", {"A": {model(1, BASE), model(2, BASE + (4,))}, "N": n})
    assert v.hypotheses and v.conclusion
    v = union_adequacy_check(U, "add-top-model", {"A": {model(1, (0, 1)), model(1, BASE)}, "N": n})
    assert not v.hypotheses and v.conclusion is None
    with pytest.raises(ValueError):
        union_adequacy_check(U, "bogus", {})
    assert sk_model(n, model(2, BASE))

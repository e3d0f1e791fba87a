"""Acceptance suites.

A suite is a list of cases.  Each case draws seeded instances, checks them
and counts failures; failing instances are shrunk before they are reported.
Cases marked ``honest`` run bounded searches on instances that may have no
solution, so their failures are reported as a rate instead of failing the
suite.  Reports contain no timings, so a replay is byte-identical.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from . import naive
from .ccc import (
    TOP,
    EFunction,
    SimConfig,
    check_strong_almost_disjoint,
    derive_triple_family,
    find_compatible_pair,
    is_e_separated,
    simulate_generic_pprime,
    validate_pprime,
    verify_weak_rho,
)
from .corpus import KINDS, _make, instance_failures
from .generators import (
    CONVERSE_EXAMPLE,
    OracleInstance,
    THETA,
    VIOLATION_CLAUSES,
    extend_in_theta,
    extend_pcond,
    extend_pstar,
    free_reflection,
    make_rng,
    mutate_pstar,
    mutate_tree,
    plant_add_model,
    plant_converse_counterexample,
    plant_copy_family,
    plant_fingerprint_family,
    plant_mirror,
    plant_quotient_pools,
    plant_reflection,
    plant_split_family,
    plant_violation,
    profile_inputs,
    random_efunction,
    random_pcond,
    random_pstar,
    random_tree,
    raw_pstar,
    valid_pcond,
)
from .ordinals import ZERO, Ordinal, ch_point, h_of
from .pstar import (
    HypothesisViolation,
    PStar,
    amalgamate_split_family,
    normalize,
    normalize_check,
    split_consequence_failures,
    split_failures,
    leq_pstar,
    validate_pstar,
)
from .quotient import (
    FilterConfig,
    SearchFailure,
    dtheta_check,
    dtheta_densify,
    in_p_theta,
    project_theta,
    projection_witness,
    quotient_add_model,
    quotient_amalgamate,
    quotient_membership,
    quotient_multi_amalgamate,
    simulate_ptheta_filter,
    theta_transfer_failures,
)
from .serialize import SCHEMA_VERSION, encode
from .side import (
    PCond,
    amalgamate_fingerprint,
    amalgamate_models,
    delta_system_failures,
    index_maps,
    leq_p,
    normalize_p,
    oplus_p,
    p_violations,
    reflect_generic,
    validate_p,
)
from .trees import Tree, validate_tree
from .universe import DEFAULT_UNIVERSE, PROFILES, random_universe, sk_contains, union_adequacy_check

U = DEFAULT_UNIVERSE

FILTER_HEADER = (
    "filters are finite: membership means compatibility with the last condition "
    "of a finite descending chain, not with a generic filter"
)


@dataclass
class Case:
    name: str
    count: int
    sample: Callable
    check: Callable
    honest: bool = False
    kind: str | None = None


@dataclass
class Suite:
    name: str
    criterion: int | None
    title: str
    cases: list = field(default_factory=list)
    header: str = ""


# helpers -------------------------------------------------------------------

def _parts4(c: PStar):
    return (c.T.nodes, c.T.order, c.W, c.D)


def _parts5(c: PCond):
    return (c.T.nodes, c.T.order, c.W, c.D, c.A)


def _p_ok(c: PCond, u=U) -> bool:
    return naive.p_ok(u, c.T.nodes, c.T.order, c.W, c.D, c.A)


def _certify(out: PCond, parts, u=U) -> list[str]:
    """Naive validity of ``out`` and its extension of every part."""
    fails = []
    if not _p_ok(out, u):
        fails.append("certify: result is not a condition")
    for k, c in enumerate(parts):
        if not naive.p_leq(_parts5(out), _parts5(c)):
            fails.append(f"certify: result does not extend part {k}")
    return fails


def _guard(fn, x) -> list[str]:
    try:
        return list(fn(x))
    except HypothesisViolation as exc:
        return [f"hypothesis {exc.clause}: {exc.detail}"]
    except SearchFailure as exc:
        return [f"search: {exc}"]
    except Exception as exc:  # a crash is a failure of the case, not of the runner
        return [f"error: {type(exc).__name__}: {exc}"]


# shrinking -----------------------------------------------------------------

def _tree_cuts(t: Tree):
    for x in sorted(t.nodes, reverse=True):
        gone = {x} | {y for y in t.nodes if t.lt(x, y)}
        keep = t.nodes - gone
        yield gone, Tree(keep, frozenset(o for o in t.order if o[0] in keep and o[1] in keep))


def _variants(x):
    if isinstance(x, PCond):
        for m in sorted(x.A):
            yield PCond(x.base, x.A - {m})
        for b in _variants(x.base):
            yield PCond(b, x.A)
    elif isinstance(x, PStar):
        for eta in sorted(x.W):
            W = {k: v for k, v in x.W.items() if k != eta}
            yield PStar(x.T, W, frozenset(d for d in x.D if eta not in d))
        for gone, t in _tree_cuts(x.T):
            yield PStar(t, {k: v - gone for k, v in x.W.items()}, x.D)
    elif isinstance(x, Tree):
        for _, t in _tree_cuts(x):
            yield t
    elif isinstance(x, (list, tuple)):
        for k, v in enumerate(x):
            for w in _variants(v):
                y = list(x)
                y[k] = w
                yield type(x)(y) if isinstance(x, tuple) else y
    elif dataclasses.is_dataclass(x) and not isinstance(x, type):
        for f in dataclasses.fields(x):
            if not f.init:
                continue
            for w in _variants(getattr(x, f.name)):
                yield dataclasses.replace(x, **{f.name: w})


def _tag(fails) -> str:
    return fails[0].split(":")[0] if fails else ""


def shrink(case: Case, x, fails, steps: int = 60):
    """Greedy delete-index, delete-model and delete-node passes that keep the
    first failure's tag."""
    tag = _tag(fails)
    for _ in range(steps):
        for y in _variants(x):
            got = _guard(case.check, y)
            if got and _tag(got) == tag:
                x = y
                break
        else:
            return x
    return x


# running -------------------------------------------------------------------

def run_case(case: Case, seed, suite: str, scale: float = 1.0, instances=None) -> dict:
    rng = make_rng(seed, suite, case.name)
    want = len(instances) if instances is not None else max(1, math.ceil(case.count * scale))
    source = iter(instances) if instances is not None else None
    seen = skipped = failed = 0
    examples = []
    attempts = 0
    while seen < want and attempts < 25 * want + 25:
        attempts += 1
        x = next(source) if source is not None else case.sample(rng)
        if x is None:
            skipped += 1
            continue
        seen += 1
        fails = _guard(case.check, x)
        if fails:
            failed += 1
            if not case.honest and len(examples) < 3:
                small = shrink(case, x, fails)
                examples.append({"failures": _guard(case.check, small)[:5] or fails[:5], "instance": encode(small)})
    short = seen < want
    passed = not short and (case.honest or failed == 0)
    out = {
        "case": case.name,
        "instances": seen,
        "skipped": skipped,
        "failed": failed,
        "honest": case.honest,
        "passed": passed,
        "counterexamples": examples,
    }
    if short:
        out["note"] = f"only {seen} of {want} instances could be drawn"
    if case.honest:
        out["note"] = f"search failures on {failed} of {seen} instances"
    return out


def run_suite(name: str, seed=0, scale: float = 1.0, corpus=None) -> dict:
    """Run a suite; ``corpus`` is an optional (kind, instances) pair that
    replaces generation for the cases accepting that kind."""
    suite = SUITES[name]
    cases = suite.cases
    if corpus is not None:
        kind, instances = corpus
        cases = [c for c in cases if c.kind == kind]
        if not cases:
            raise ValueError(f"suite {name} takes no corpus of kind {kind!r}")
        results = [run_case(c, seed, name, instances=list(instances)) for c in cases]
    else:
        results = [run_case(c, seed, name, scale) for c in cases]
    report = {
        "suite": name,
        "criterion": suite.criterion,
        "title": suite.title,
        "schema": SCHEMA_VERSION,
        "seed": seed,
        "scale": scale,
        "cases": results,
        "passed": all(r["passed"] for r in results),
    }
    if suite.header:
        report["header"] = suite.header
    return report


def summary_lines(report: dict) -> list[str]:
    out = []
    for r in report["cases"]:
        status = "PASS" if r["passed"] else "FAIL"
        line = f"{status} {report['suite']} / {r['case']}: {r['instances']} instances, {r['failed']} failed"
        if r.get("note"):
            line += f" ({r['note']})"
        out.append(line)
    verdict = "PASS" if report["passed"] else "FAIL"
    label = f"criterion {report['criterion']}: " if report["criterion"] else ""
    out.append(f"{verdict} {label}{report['title']}")
    return out


# 1. oracle equivalence -----------------------------------------------------------------

NO_E = EFunction({}, ZERO)


def _lift(c: PStar) -> PCond:
    return PCond(c, frozenset())


def _one(c: PCond) -> OracleInstance:
    return OracleInstance(c, c, NO_E, ZERO, ZERO)


def _sample_tree(rng):
    t = random_tree(rng, max_nodes=10, high=0.3)
    if rng.random() < 0.5:
        t = mutate_tree(rng, t)
    return _one(_lift(PStar(t)))


def _sample_pstar(rng):
    return _one(_lift(raw_pstar(rng, high=0.3)))


def _sample_p(rng):
    c = random_pcond(rng, U, max_nodes=10, n_idx=4, n_models=3)
    if rng.random() < 0.3:
        c = PCond(mutate_pstar(rng, c.base), c.A)
    return _one(c)


def _sample_pair(rng, side: bool):
    if side:
        p = random_pcond(rng, U, max_nodes=10, n_idx=4, n_models=3, adequate=1.0)
    else:
        p = _lift(random_pstar(rng, high=0.3))
    r = rng.random()
    if r < 0.6:
        q = extend_pcond(rng, p, U, steps=2) if side else _lift(extend_pstar(rng, p.base, steps=2))
    elif r < 0.8:
        q = PCond(mutate_pstar(rng, p.base), p.A)
    else:
        q = random_pcond(rng, U, max_nodes=10) if side else _lift(random_pstar(rng, high=0.3))
    return OracleInstance(p, q, NO_E, ZERO, ZERO)


def _sample_split(rng):
    if rng.random() < 0.6:
        fam = plant_split_family(rng, 2)
        p, q = (_lift(c) for c in fam.parts)
        if rng.random() < 0.5:
            q = _lift(mutate_pstar(rng, q.base))
        dp, dq = fam.deltas
    else:
        p = _lift(random_pstar(rng, high=0.3))
        q = _lift(extend_pstar(rng, p.base, steps=2)) if rng.random() < 0.5 else _lift(random_pstar(rng, high=0.3))
        i = rng.randint(1, 3)
        dp, dq = ch_point(i), ch_point(rng.randint(i + 1, 4))
    return OracleInstance(p, q, NO_E, dp, dq)


def _sample_esep(rng):
    c = random_pstar(rng, high=0.3)
    return OracleInstance(_lift(c), _lift(c), random_efunction(rng, pool=sorted(c.W)), ZERO, ZERO)


def _small_instance(x: OracleInstance):
    small = lambda c: len(c.T.nodes) <= 10 and len(c.W) <= 4 and len(c.A) <= 3
    return x if small(x.p) and small(x.q) else None


def _sized(sample):
    return lambda rng: _small_instance(sample(rng))


def _check_tree(x):
    t = x.p.T
    return [] if validate_tree(t).as_tuple() == naive.tree_flags(t.nodes, t.order) else ["disagree validate_tree"]


def _check_pstar(x):
    return [] if validate_pstar(x.p.base)[0] == naive.pstar_ok(*_parts4(x.p.base)) else ["disagree validate_pstar"]


def _check_p(x):
    return [] if validate_p(x.p, U)[0] == _p_ok(x.p) else ["disagree validate_p"]


def _check_leq_pstar(x):
    p, q = x.p.base, x.q.base
    if not (validate_pstar(p)[0] and validate_pstar(q)[0]):
        return []
    return [] if leq_pstar(q, p) == naive.pstar_leq(_parts4(q), _parts4(p)) else ["disagree leq_pstar"]


def _check_leq_p(x):
    if not (validate_p(x.p, U)[0] and validate_p(x.q, U)[0]):
        return []
    return [] if leq_p(x.q, x.p, U) == naive.p_leq(_parts5(x.q), _parts5(x.p)) else ["disagree leq_p"]


def _check_split(x):
    p, q = x.p.base, x.q.base
    if not (validate_pstar(p)[0] and validate_pstar(q)[0]):
        return []
    fast = not split_failures(p, q, x.dp, x.dq, first=True)
    return [] if fast == naive.split_ok(_parts4(p), _parts4(q), x.dp, x.dq) else ["disagree is_split_pair"]


def _check_esep(x):
    W = x.p.W
    return [] if is_e_separated(W, x.e) == naive.e_separated(W, x.e) else ["disagree is_e_separated"]


# predicate, sampler, check, share of the total instance count
ORACLE_CASES = (
    ("validate_tree", _sample_tree, _check_tree, 15_000),
    ("validate_pstar", _sample_pstar, _check_pstar, 15_000),
    ("validate_p", _sample_p, _check_p, 15_000),
    ("leq_pstar", lambda rng: _sample_pair(rng, False), _check_leq_pstar, 15_000),
    ("leq_p", lambda rng: _sample_pair(rng, True), _check_leq_p, 15_000),
    ("is_split_pair", _sample_split, _check_split, 15_000),
    ("is_e_separated", _sample_esep, _check_esep, 10_000),
)


# 2. split amalgamation ------------------------------------------------------------------

def _split_check(fam):
    out = []
    am, _ = amalgamate_split_family(fam.parts, fam.deltas)
    if not naive.pstar_ok(*_parts4(am)):
        out.append("certify: amalgam is not a condition")
    for k, c in enumerate(fam.parts):
        if not naive.pstar_leq(_parts4(am), _parts4(c)):
            out.append(f"certify: amalgam does not extend part {k}")
    for i, j in combinations(range(len(fam.parts)), 2):
        out += [f"consequence {v}: {i},{j}" for v in split_consequence_failures(fam.parts[i], fam.parts[j], fam.deltas[i])]
    return out


# 3. normalization -----------------------------------------------------------------------

def _norm_sample(rng):
    c = random_pstar(rng, max_nodes=10, pool=range(6), high=0.2)
    return c if validate_pstar(c)[0] else None


def _norm_check(p: PStar):
    q = normalize(p)
    out = [f"conclusion: {v}" for v in normalize_check(p, q)]
    if naive.tree_flags(q.T.nodes, q.T.order) != (True, True, True):
        out.append("oracle: normalized tree flags")
    if not naive.pstar_leq(_parts4(q), _parts4(p)):
        out.append("oracle: result does not extend input")
    return out


def _norm_p_sample(rng):
    c = valid_pcond(rng, U)
    return c if c.A else None


def _norm_p_check(p: PCond):
    q = normalize_p(p, U)
    out = [f"conclusion: {v}" for v in normalize_check(p.base, q.base)]
    if q.A != p.A:
        out.append("conclusion: side condition changed")
    if not _p_ok(q):
        out.append("oracle: result is not a condition")
    return out


# 4. compatible pairs --------------------------------------------------------------------

def _ccc_sample(rng):
    return plant_copy_family(rng, 200, rng.choice(("constant-top", "random-high")))


def _ccc_check(fam):
    ok, cex = verify_weak_rho(fam.e, [fam.blocks], [fam.zeta, TOP])
    if not ok:
        return [f"weak-rho: counterexample {cex}"]
    r = find_compatible_pair(fam.conds, fam.e, fam.levels)
    if not r.ok:
        return [f"search: stopped at {r.stage} {r.detail}".strip()]
    am = r.amalgam
    out = []
    if not validate_pprime(am, fam.e)[0] or not naive.pstar_ok(*_parts4(am)) or not naive.e_separated(am.W, fam.e):
        out.append("certify: amalgam is not in the poset")
    for k in (r.i, r.j):
        if not naive.pstar_leq(_parts4(am), _parts4(fam.conds[k])):
            out.append(f"certify: amalgam does not extend condition {k}")
    return out


# 5. P' simulation -----------------------------------------------------------------------

def _sim_sample(rng):
    idx = tuple(range(8))
    pairs = tuple(combinations(idx, 2))
    return SimConfig(indices=idx, height=12, pairs=pairs, seed=rng.randrange(10**6))


def simulation_failures(g) -> list[str]:
    out = []
    last = g.last
    if validate_tree(last.T).as_tuple() != (True, True, True):
        out.append("tree: final tree fails a flag")
    if naive.tree_flags(last.T.nodes, last.T.order) != (True, True, True):
        out.append("tree: oracle flags")
    heights = last.T.height_set()
    for x in last.T.nodes:
        have = {h_of(z) for z in last.T.below(x)}
        if any(a < h_of(x) and a not in have for a in heights):
            out.append(f"height agreement: {x}")
            break
    for k, (a, b) in enumerate(zip(g.chain, g.chain[1:])):
        if not validate_pstar(b)[0] or not leq_pstar(b, a):
            out.append(f"chain: step {k} is not a descending condition")
            break
    for eta, sub in last.W.items():
        if any(x not in sub for y in sub for x, z in last.T.order if z == y):
            out.append(f"subtree: W({eta}) not downwards closed")
        got = {h_of(x) for x in sub}
        if any(Ordinal.of(a) not in got for a in range(g.config.height)):
            out.append(f"subtree: W({eta}) misses a height")
    certs = {c.pair: c for c in check_strong_almost_disjoint(g)}
    for a, b in g.config.pairs:
        c = certs.get(tuple(sorted((a, b))))
        if c is None or not c.committed or not c.certified:
            out.append(f"certificate: pair {a},{b}")
    fams, _ = derive_triple_family(last.T, last.W)
    for a, b in combinations(sorted(fams), 2):
        at = next((q for q in g.chain if frozenset((a, b)) in q.D), None)
        gens = at.W[a] & at.W[b] if at is not None else frozenset()
        for tri in fams[a] & fams[b]:
            if any(not any(last.T.le(x, z) for z in gens) for x in tri):
                out.append(f"triples: shared triple of {a},{b} outside the certified region")
                break
    return out


def _sim_check(cfg: SimConfig):
    return simulation_failures(simulate_generic_pprime(cfg))


# 6. universe profiles ---------------------------------------------------------------

UNIVERSES = (("default", U), ("random-17", random_universe(17, 1)), ("random-12", random_universe(12, 2)))


def _profile_case(label, u, profile, count):
    def sample(rng):
        x = profile_inputs(rng, u, profile)
        return x if union_adequacy_check(u, profile, x).hypotheses else None

    def check(x):
        v = union_adequacy_check(u, profile, x)
        return [f"fidelity: {v.detail or 'conclusion fails'}"] if v.counterexample else []

    return Case(f"{profile} on {label}", count, sample, check)


# 7. amalgamation over models ------------------------------------------------------------

def _fp_sample(rng):
    return plant_fingerprint_family(rng, rng.choice((2, 3)))


def _fp_check(fam):
    out, _ = amalgamate_fingerprint(fam.parts, fam.models, U)
    fails = _certify(out, fam.parts)
    fails += [f"delta-system: {v}" for v in delta_system_failures(fam.parts, fam.models)]
    return fails


def _maps_check(fam):
    f, g = index_maps(fam.parts)
    out, _ = amalgamate_models(fam.parts, fam.models, f, g, U)
    return _certify(out, fam.parts)


def _violation_case(clause):
    def sample(rng):
        got = plant_violation(rng, clause)
        return None if got is None else (clause,) + tuple(got)

    def check(x):
        clause, parts, models, f, g = x
        try:
            if clause == "fingerprint":
                amalgamate_fingerprint(parts, models, U)
            else:
                amalgamate_models(parts, models, f, g, U)
        except HypothesisViolation as exc:
            return [] if exc.clause == clause else [f"wrong clause: {exc.clause} instead of {clause}"]
        return [f"accepted: planted violation of {clause}"]

    return Case(f"violation {clause} rejected", 150, sample, check)


# 8. projections ---------------------------------------------------------------------

def _law1_check(p):
    s = project_theta(p, THETA, U)
    out = []
    if not in_p_theta(s, THETA, U):
        out.append("(1): projection is not in the cut poset")
    elif not leq_p(p, s, U):
        out.append("(1): condition does not extend its projection")
    return out


def _law2_sample(rng):
    p = valid_pcond(rng, U)
    q = extend_pcond(rng, p, U)
    if p_violations(q, U) or not leq_p(q, p, U):
        return None
    return (q, p)


def _law2_check(x):
    q, p = x
    return [] if leq_p(project_theta(q, THETA, U), project_theta(p, THETA, U), U) else ["(2): projection is not monotone"]


def _law3_sample(rng):
    s = project_theta(valid_pcond(rng, U), THETA, U)
    q = extend_pcond(rng, s, U)
    if p_violations(q, U) or not leq_p(q, s, U):
        return None
    return (q, s)


def _law3_check(x):
    q, s = x
    return [] if leq_p(project_theta(q, THETA, U), s, U) else ["(3): projection of q does not extend s"]


def _law4_sample(rng):
    if rng.random() < 0.5:
        parts = plant_fingerprint_family(rng, 2).parts
    else:
        p = valid_pcond(rng, U)
        parts = [p, extend_pcond(rng, p, U)]
    if any(p_violations(c, U) for c in parts) or p_violations(oplus_p(parts), U):
        return None
    return tuple(parts)


def _law4_check(parts):
    whole = project_theta(oplus_p(parts), THETA, U)
    split = oplus_p([project_theta(c, THETA, U) for c in parts])
    return [] if whole == split else ["sum: projection does not distribute over the sum"]


def _dense_pair(rng, pool=None):
    pl = plant_mirror(rng, with_model=rng.random() < 0.5)
    try:
        p = dtheta_densify(pl.q, pl.theta, U, pl.n).condition
    except SearchFailure:
        return None
    proj = project_theta(p, THETA, U)
    s = extend_in_theta(rng, proj, THETA, U, pool=pool)
    if p_violations(s, U) or not leq_p(s, proj, U):
        return None
    return (p, s)


def _amalgam_check(x):
    p, s = x
    r = quotient_amalgamate(p, s, THETA, U)
    return _certify(r, [p, s])


def _witness_check(x):
    p, s = x
    projection_witness(p, s, THETA, U)
    return []


# 9. reflection and density -----------------------------------------------------------

def _reflect_check(pl):
    r = reflect_generic(pl.q, pl.n, U)
    if not r.ok:
        return [f"search: {r.reason}"]
    out = _certify(r.amalgam, [pl.q])
    if not sk_contains(pl.n, r.witness):
        out.append("witness: copy is not in the hull of the model")
    return out


def _free_reflection(rng):
    return free_reflection(rng, U)


def _mirror_check(pl):
    res = dtheta_densify(pl.q, pl.theta, U, pl.n)
    out = _certify(res.condition, [pl.q])
    if dtheta_check(res.condition, pl.theta, U) is None:
        out.append("witness: result is not in the dense set")
    if pl.n is not None and not U.is_N_closed(res.condition.A, pl.n):
        out.append("witness: result is not closed under the model")
    return out


def _add_model_check(sc):
    pn, v = quotient_add_model(sc.p, sc.n, sc.happrox)
    return _certify(v, [pn])


def _pools_sample(rng, collide=False):
    return plant_quotient_pools(rng, rng.choice((2, 3)), collide=collide)


def _pools_check(sc):
    d = len(sc.pools)
    res = quotient_multi_amalgamate(sc.pools, sc.happrox, d)
    out = _certify(res.amalgam, [c for c, _ in res.chosen])
    if not quotient_membership(res.amalgam, sc.happrox).member:
        out.append("quotient: amalgam is not in the quotient")
    return out


# 10. quotient semantics ---------------------------------------------------------------

def converse_failures(sc) -> list[str]:
    fa = simulate_ptheta_filter(FilterConfig(THETA, SimConfig(), tuple(sc.generator_models)), U)
    rep = quotient_membership(sc.p, fa)
    out = []
    if rep.member:
        out.append("converse: condition is in the quotient")
    if not rep.projection_in_filter:
        out.append("converse: projection is not in the filter")
    return out


def _criterion_check(sc):
    out = _pools_check(sc)
    for i, j in combinations(range(len(sc.parts)), 2):
        if sk_contains(sc.models[j], sc.parts[i]):
            for v in theta_transfer_failures(sc.parts[i], sc.models[i], sc.parts[j], sc.models[j], THETA, U):
                out.append(f"transfer {v}: parts {i},{j}")
    return out


# registry ------------------------------------------------------------------------------

def _instances_suite() -> Suite:
    cases = []
    for kind in KINDS:
        count = 20 if kind in ("pprime", "quotient-scenario") else 200
        cases.append(Case(kind, count, lambda rng, k=kind: _make(k, rng), lambda x, k=kind: instance_failures(k, x), kind=kind))
    return Suite("instances", None, "generated instances are well formed", cases)


def _build() -> dict:
    suites = [
        Suite("oracle-equivalence", 1, "fast predicates agree with naive definitional checkers", [
            *(Case(name, n, _sized(sample), check) for name, sample, check, n in ORACLE_CASES),
        ]),
        Suite("split-amalgamation", 2, "split delta-system families amalgamate", [
            Case("families d=2..4", 10_000, lambda rng: plant_split_family(rng, rng.choice((2, 3, 4))), _split_check,
                 kind="split-family"),
        ]),
        Suite("normalization", 3, "normalization meets every conclusion clause", [
            Case("tree-and-subtree conditions", 10_000, _norm_sample, _norm_check, kind="pstar"),
            Case("conditions with models", 2_000, _norm_p_sample, _norm_p_check, kind="p"),
        ]),
        Suite("compatible-pair", 4, "compatible pairs among translated copies", [
            Case("200 copies", 20, _ccc_sample, _ccc_check, kind="pprime"),
        ]),
        Suite("pprime-simulation", 5, "generic approximation with 8 indices to height 12", [
            Case("all 28 pairs committed", 1, _sim_sample, _sim_check),
        ]),
        Suite("universe-profiles", 6, "side-condition unions stay adequate", [
            _profile_case(label, u, prof, 1200 if label == "default" else 200)
            for label, u in UNIVERSES for prof in PROFILES
        ]),
        Suite("model-amalgamation", 7, "amalgamation over models and fingerprints", [
            Case("fingerprint-matched families", 1000, _fp_sample, _fp_check, kind="fingerprint-pool"),
            Case("explicit commuting maps", 500, _fp_sample, _maps_check),
        ] + [_violation_case(c) for c in VIOLATION_CLAUSES]),
        Suite("projection-laws", 8, "projection to the cut station", [
            Case("extends its projection", 10_000, lambda rng: valid_pcond(rng, U), _law1_check, kind="p"),
            Case("monotone", 10_000, _law2_sample, _law2_check),
            Case("below a cut condition", 10_000, _law3_sample, _law3_check),
            Case("distributes over sums", 10_000, _law4_sample, _law4_check),
            Case("amalgam below both", 1000, _dense_pair, _amalgam_check),
            Case("witness below the amalgam", 1000, lambda rng: _dense_pair(rng, range(8)), _witness_check, honest=True),
        ], header=FILTER_HEADER),
        Suite("reflection-density", 9, "planted witness recovery", [
            Case("copy into a model", 500, lambda rng: plant_reflection(rng, U), _reflect_check),
            Case("mirror below the cut", 500, lambda rng: plant_mirror(rng, with_model=rng.random() < 0.5), _mirror_check),
            Case("add a model over the filter", 500, lambda rng: plant_add_model(rng), _add_model_check),
            Case("incomparable representatives", 500, _pools_sample, _pools_check, kind="quotient-scenario"),
            Case("free copy search", 500, _free_reflection, _reflect_check, honest=True),
            Case("starved copy search", 500, lambda rng: plant_reflection(rng, U, starve=True), _reflect_check, honest=True),
            Case("starved mirror search", 500, lambda rng: plant_mirror(rng, starve=True), _mirror_check, honest=True),
            Case("stacked representatives", 200, lambda rng: _pools_sample(rng, True), _pools_check, honest=True),
        ], header=FILTER_HEADER),
        Suite("quotient-semantics", 10, "quotient membership against finite filters", [
            Case("converse counterexample as planted", 1, lambda rng: CONVERSE_EXAMPLE, converse_failures),
            Case("random converse counterexamples", 200, lambda rng: plant_converse_counterexample(rng, U), converse_failures),
            Case("incomparability criterion", 300, _pools_sample, _criterion_check),
        ], header=FILTER_HEADER),
        _instances_suite(),
    ]
    return {s.name: s for s in suites}


SUITES = _build()
ACCEPTANCE = tuple(name for name, s in SUITES.items() if s.criterion is not None)

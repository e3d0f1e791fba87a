"""Projections to the part of a condition below a cut station, the dense sets
built on them, and quotient semantics against a finite filter surrogate.

The filter of a run is the upward closure of a single generator condition,
so every quotient predicate below is decidable.  This is a finite stand-in
for a generic filter, not a generic filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations, permutations

from .ccc import SimConfig, Simulator
from .pstar import Certificate, HypothesisViolation, PStar, pair
from .side import (
    PCond,
    add_model,
    amalgamate_fingerprint,
    closure_extend,
    fingerprint_w,
    oplus_p,
    p_violations,
    leq_p,
    separation_failures,
)
from .trees import Tree, downward_closure, is_end_extension, validate_tree, find_incomparable_family
from .universe import Cut, ModelSet, Station, Universe, contains, cut, meet, sk_contains, sk_model, support


class SearchFailure(RuntimeError):
    """A bounded witness search ran out of candidates."""


def in_theta(eta, theta: int) -> bool:
    if isinstance(eta, Station):
        return eta.index < theta
    return True


def in_sk_theta(m: ModelSet, theta: int) -> bool:
    return all(s < theta for s in m.stations)


def _need_sigma(u: Universe, theta: int):
    if theta not in u.sigma:
        raise ValueError(f"station {theta} is not a cut station")


def project_theta(p: PCond, theta: int, u: Universe) -> PCond:
    _need_sigma(u, theta)
    W = {eta: sub for eta, sub in p.W.items() if in_theta(eta, theta)}
    D = frozenset(d for d in p.D if all(in_theta(e, theta) for e in d))
    A = frozenset(m for m in p.A if in_sk_theta(m, theta))
    return PCond(PStar(p.T, W, D), A)


def in_p_theta(p: PCond, theta: int, u: Universe) -> bool:
    return not p_violations(p, u) and sk_contains(Cut(theta), p)


# D_theta ------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaWitness:
    f: tuple  # sorted (eta, f(eta)) pairs
    g: tuple  # sorted (M, g(M)) pairs

    @property
    def fmap(self) -> dict:
        return dict(self.f)

    @property
    def gmap(self) -> dict:
        return dict(self.g)

    def support_items(self):
        return (self.f, self.g)


def dtheta_clause_failures(p: PCond, theta: int, f: dict, g: dict) -> list[str]:
    """Clauses (a)-(f) of membership in D_theta for explicit maps."""
    out = []
    outside = [e for e in p.W if not in_theta(e, theta)]
    inside = [e for e in p.W if in_theta(e, theta)]
    far = [m for m in p.A if not in_sk_theta(m, theta)]
    near = set(m for m in p.A if in_sk_theta(m, theta))
    if set(f) != set(outside) or any(f[e] not in inside for e in outside):
        out.append("f-domain")
    if set(g) != set(far) or any(g[m] not in near for m in far):
        out.append("g-domain")
    if out:
        return out
    if any(p.W[e] != p.W[f[e]] for e in outside):
        out.append("(a)")
    if any(g[m].delta != m.delta or not cut(m, theta).stations <= g[m].stations for m in far):
        out.append("(b)")
    if any(contains(m, e) != contains(g[m], f[e]) for e in outside for m in far):
        out.append("(c)")
    if any(pair(e, x) in p.D and pair(f[e], x) not in p.D for e in outside for x in inside):
        out.append("(d)")
    if any(pair(a, b) in p.D and pair(f[a], f[b]) not in p.D for a, b in combinations(outside, 2)):
        out.append("(e)")
    if any(_subset(k, m) and not _subset(g[k], g[m]) for k in far for m in far if k != m):
        out.append("(f)")
    return out


def _subset(a: ModelSet, b: ModelSet) -> bool:
    return a.delta <= b.delta and a.stations <= b.stations


def dtheta_check(p: PCond, theta: int, u: Universe) -> ThetaWitness | None:
    """The least witness (in canonical order) that p lies in D_theta, or None."""
    _need_sigma(u, theta)
    if p_violations(p, u) or not u.is_beta_closed(p.A, theta):
        return None
    outside = sorted(e for e in p.W if not in_theta(e, theta))
    inside = sorted(e for e in p.W if in_theta(e, theta))
    far = sorted(m for m in p.A if not in_sk_theta(m, theta))
    near = sorted(m for m in p.A if in_sk_theta(m, theta))
    fcands = [[x for x in inside if p.W[x] == p.W[e]] for e in outside]
    gcands = [[k for k in near if k.delta == m.delta and cut(m, theta).stations <= k.stations] for m in far]
    f, g = {}, {}

    def ok_f(i):
        e = outside[i]
        for j in range(i):
            a = outside[j]
            if pair(a, e) in p.D and pair(f[a], f[e]) not in p.D:
                return False
        return all(pair(e, x) not in p.D or pair(f[e], x) in p.D for x in inside)

    def ok_g(i):
        m = far[i]
        for e in outside:
            if contains(m, e) != contains(g[m], f[e]):
                return False
        for j in range(i):
            k = far[j]
            if _subset(k, m) and not _subset(g[k], g[m]):
                return False
            if _subset(m, k) and not _subset(g[m], g[k]):
                return False
        return True

    def solve_g(i):
        if i == len(far):
            return True
        for c in gcands[i]:
            g[far[i]] = c
            if ok_g(i) and solve_g(i + 1):
                return True
        g.pop(far[i], None)
        return False

    def solve_f(i):
        if i == len(outside):
            return solve_g(0)
        for c in fcands[i]:
            f[outside[i]] = c
            if ok_f(i) and solve_f(i + 1):
                return True
        f.pop(outside[i], None)
        return False

    if not solve_f(0):
        return None
    if dtheta_clause_failures(p, theta, f, g):
        raise AssertionError("witness search returned a non-witness")
    return ThetaWitness(tuple(sorted(f.items())), tuple(sorted(g.items())))


def in_dtheta(p: PCond, theta: int, u: Universe) -> bool:
    return dtheta_check(p, theta, u) is not None


def cross_theta_amalgamate(qbar: PCond, q: PCond, theta: int, f: dict, g: dict, u: Universe) -> tuple[PCond, Certificate]:
    """Amalgamate q with a copy of it inside the hull of theta."""
    _need_sigma(u, theta)
    if p_violations(q, u) or not u.is_beta_closed(q.A, theta):
        raise HypothesisViolation("theta-closed", "q must be a condition with a theta-closed side")
    if p_violations(qbar, u) or not sk_contains(Cut(theta), qbar):
        raise HypothesisViolation("copy", "the copy must be a condition inside the hull of theta")
    if qbar.T != q.T:
        raise HypothesisViolation("tree", "the copy must share the tree")
    if set(f) != set(q.W) or set(f.values()) != set(qbar.W) or len(set(f.values())) != len(f):
        raise HypothesisViolation("bijection-f")
    if set(g) != set(q.A) or set(g.values()) != set(qbar.A) or len(set(g.values())) != len(g):
        raise HypothesisViolation("bijection-g")
    if any(f[e] != e for e in q.W if in_theta(e, theta)):
        raise HypothesisViolation("(1)")
    if any(g[m] != m for m in q.A if in_sk_theta(m, theta)):
        raise HypothesisViolation("(2)")
    if any(q.W[e] != qbar.W[f[e]] for e in q.W):
        raise HypothesisViolation("(3)")
    if any(g[m].delta != m.delta or not cut(m, theta).stations <= g[m].stations for m in q.A):
        raise HypothesisViolation("(4)")
    if any(contains(m, e) != contains(g[m], f[e]) for e in q.W for m in q.A):
        raise HypothesisViolation("(5)")
    out = oplus_p([qbar, q])
    v = p_violations(out, u)
    if v:
        raise AssertionError(f"cross amalgam is not a condition: {v[0]}")
    if not (leq_p(out, qbar, u, check=False) and leq_p(out, q, u, check=False)):
        raise AssertionError("cross amalgam does not extend both inputs")
    return out, Certificate(("theta-closed", "copy in hull", "(1)-(5)", "amalgam valid and below both"))


def _remap_stations(q: PCond, smap: dict) -> tuple[PCond, dict, dict]:
    def st(e):
        return Station(smap.get(e.index, e.index)) if isinstance(e, Station) else e

    fmap = {e: st(e) for e in q.W}
    gmap = {m: ModelSet(m.delta, frozenset(smap.get(s, s) for s in m.stations)) for m in q.A}
    W = {fmap[e]: sub for e, sub in q.W.items()}
    D = frozenset(frozenset(fmap[e] for e in d) for d in q.D)
    return PCond(PStar(q.T, W, D), frozenset(gmap.values())), fmap, gmap


def mirror_failures(q: PCond, qbar: PCond, fmap: dict, gmap: dict, theta: int, u: Universe, n: ModelSet | None) -> list[str]:
    """Clauses (1)-(12) of the mirror formula for the candidate ``qbar``."""
    out = []
    etas, ks = sorted(q.W), sorted(q.A)
    if p_violations(qbar, u) or not sk_contains(Cut(theta), qbar):
        out.append("(1)")
    if qbar.T != q.T:
        out.append("(2)")
    if set(qbar.W) != {fmap[e] for e in etas} or len({fmap[e] for e in etas}) != len(etas):
        out.append("(3)")
    if qbar.A != {gmap[k] for k in ks} or len({gmap[k] for k in ks}) != len(ks):
        out.append("(4)")
    if any(fmap[e] != e for e in etas if in_theta(e, theta)):
        out.append("(5)")
    if any(gmap[k] != k for k in ks if in_sk_theta(k, theta)):
        out.append("(6)")
    if any(qbar.W.get(fmap[e]) != q.W[e] for e in etas):
        out.append("(7)")
    if any(gmap[k].delta != k.delta or not cut(k, theta).stations <= gmap[k].stations for k in ks):
        out.append("(8)")
    if any(contains(k, e) != contains(gmap[k], fmap[e]) for e in etas for k in ks):
        out.append("(9)")
    if any((pair(a, b) in q.D) != (pair(fmap[a], fmap[b]) in qbar.D) for a, b in combinations(etas, 2)):
        out.append("(10)")
    if any(_subset(a, b) != _subset(gmap[a], gmap[b]) for a in ks for b in ks):
        out.append("(11)")
    if n is not None:
        nt = cut(n, theta)
        if any(meet(gmap[k], nt) not in qbar.A for k in ks):
            out.append("(12)")
    return out


@dataclass
class DensifyResult:
    condition: PCond
    witness: ThetaWitness
    mirror: PCond | None
    tried: int


def dtheta_densify(q: PCond, theta: int, u: Universe, n: ModelSet | None = None, limit: int = 5000) -> DensifyResult:
    """An extension of q in D_theta (closed under n when n is given)."""
    _need_sigma(u, theta)
    if p_violations(q, u):
        raise ValueError("q is not a condition")
    if n is not None:
        if n not in q.A:
            raise ValueError("the model must belong to q")
        q = closure_extend(q, "N", n, u)
    q = closure_extend(q, "beta", theta, u)
    if n is not None and not u.is_N_closed(q.A, n):
        raise AssertionError("station closure lost closure under the model")
    found = dtheta_check(q, theta, u)
    if found is not None:
        return DensifyResult(q, found, None, 0)
    used = support(q)[1]
    high = sorted(s for s in used if s >= theta)
    free = sorted(s for s in range(theta) if s not in used)
    tried = 0
    for image in permutations(free, len(high)):
        smap = dict(zip(high, image))
        if not u.preserves_pattern(smap, used):
            continue
        tried += 1
        if tried > limit:
            break
        qbar, fmap, gmap = _remap_stations(q, smap)
        if mirror_failures(q, qbar, fmap, gmap, theta, u, n):
            continue
        r, _ = cross_theta_amalgamate(qbar, q, theta, fmap, gmap, u)
        if n is not None and not u.is_N_closed(r.A, n):
            raise AssertionError("mirror amalgam is not closed under the model")
        w = dtheta_check(r, theta, u)
        if w is None:
            raise AssertionError("mirror amalgam is not in D_theta")
        return DensifyResult(r, w, qbar, tried)
    raise SearchFailure(f"no mirror of q below station {theta} after {tried} candidates")


# E_theta and theta fingerprints ----------------------------------------------

@dataclass(frozen=True)
class ThetaFingerprint:
    base: object
    f: tuple
    g: tuple

    def support_items(self):
        return (self.base, self.f, self.g)


def fingerprint_theta(p: PCond, n: ModelSet, theta: int, u: Universe) -> ThetaFingerprint:
    w = dtheta_check(p, theta, u)
    if w is None:
        raise ValueError("condition is not in D_theta")
    base = fingerprint_w(p, n, u)
    f = tuple((e, x) for e, x in w.f if contains(n, e))
    g = tuple((m, k) for m, k in w.g if sk_model(n, m))
    return ThetaFingerprint(base, f, g)


def theta_transfer_failures(p: PCond, m: ModelSet, q: PCond, n: ModelSet, theta: int, u: Universe) -> list[str]:
    """Both membership-transfer conclusions for a matched, nested pair."""
    wp, wq = dtheta_check(p, theta, u), dtheta_check(q, theta, u)
    fp, gp, fq, gq = wp.fmap, wp.gmap, wq.fmap, wq.gmap
    out = []
    for e in fq:
        for k in gp:
            if contains(k, e) and not contains(gp[k], fq[e]):
                out.append("(1)")
                break
    for e in fp:
        for k in gq:
            if k.delta < n.delta and contains(k, e) and not contains(gq[k], fp[e]):
                out.append("(2)")
                break
    return sorted(set(out))


@dataclass(frozen=True)
class EThetaReport:
    member: bool
    kind: str
    detail: str = ""


def etheta_check(p: PCond, theta: int, u: Universe, parts=None, models=None) -> EThetaReport:
    """Membership in E_theta.  A decomposition is taken from ``parts`` and
    ``models`` when given (the provenance of an amalgam built here); no blind
    decomposition search is attempted otherwise."""
    if p_violations(p, u):
        return EThetaReport(False, "invalid")
    if p.A and in_dtheta(p, theta, u):
        return EThetaReport(True, "dense")
    if parts is None:
        return EThetaReport(False, "none", "not in D_theta with a model and no decomposition supplied")
    parts, models = list(parts), list(models)
    if len(parts) < 2 or len(models) != len(parts):
        return EThetaReport(False, "none", "decomposition needs at least two parts with one model each")
    if not all(in_dtheta(c, theta, u) for c in parts):
        return EThetaReport(False, "none", "(1)")
    if oplus_p(parts) != p:
        return EThetaReport(False, "none", "(2)")
    prints = []
    for c, n in zip(parts, models):
        if n not in c.A or not u.is_N_closed(c.A, n):
            return EThetaReport(False, "none", "(3)")
        prints.append(fingerprint_theta(c, n, theta, u))
    if any(a != b for a, b in combinations(prints, 2)):
        return EThetaReport(False, "none", "(4)")
    if any(not sk_contains(models[j], parts[i]) for i, j in combinations(range(len(parts)), 2)):
        return EThetaReport(False, "none", "(5)")
    return EThetaReport(True, "amalgam", f"d={len(parts)}")


# the projection amalgam -------------------------------------------------------

def y_amalgam(p: PCond, s: PCond) -> PCond:
    """(T_s, Y, D_s | D_p, A_s | A_p) with Y from W_s and closures of W_p in T_s."""
    Y = dict(s.W)
    for eta, sub in p.W.items():
        if eta not in s.W:
            Y[eta] = downward_closure(s.T, sub)
    return PCond(PStar(s.T, Y, s.D | p.D), s.A | p.A)


def quotient_amalgamate(p: PCond, s: PCond, theta: int, u: Universe, parts=None, models=None) -> PCond:
    rep = etheta_check(p, theta, u, parts, models)
    if not rep.member:
        raise HypothesisViolation("E_theta", rep.detail)
    if not in_p_theta(s, theta, u):
        raise HypothesisViolation("P_theta", "s must be a condition inside the hull of theta")
    if not leq_p(s, project_theta(p, theta, u), u, check=False):
        raise HypothesisViolation("below-projection", "s does not extend the projection of p")
    out = y_amalgam(p, s)
    v = p_violations(out, u)
    if v:
        raise AssertionError(f"projection amalgam is not a condition: {v[0]}")
    if not leq_p(out, s, u, check=False) or not leq_p(out, p, u, check=False):
        raise AssertionError("projection amalgam does not extend both inputs")
    return out


def projection_witness(p: PCond, s: PCond, theta: int, u: Universe, parts=None, models=None) -> PCond:
    """Some r below p in E_theta whose projection extends s."""
    base = quotient_amalgamate(p, s, theta, u, parts, models)
    r = dtheta_densify(base, theta, u).condition
    if not (leq_p(r, p, u, check=False) and leq_p(project_theta(r, theta, u), s, u, check=False)):
        raise AssertionError("projection witness fails")
    if not r.A:
        raise AssertionError("projection witness has no models")
    return r


# finite filters ----------------------------------------------------------------

@dataclass
class FilterConfig:
    theta: int
    sim: SimConfig = field(default_factory=SimConfig)
    models: tuple = ()


@dataclass
class FilterApprox:
    chain: list
    theta: int
    universe: Universe
    skipped: tuple = ()

    @property
    def generator(self) -> PCond:
        return self.chain[-1]

    @property
    def tree(self) -> Tree:
        return self.generator.T

    def contains(self, p: PCond) -> bool:
        return leq_p(self.generator, p, self.universe, check=False)

    def in_pool(self, n: ModelSet) -> bool:
        return cut(n, self.theta) in self.generator.A

    def with_generator(self, g: PCond) -> "FilterApprox":
        if not leq_p(g, self.generator, self.universe):
            raise ValueError("new generator must extend the old one")
        return replace(self, chain=self.chain + [g])


def simulate_ptheta_filter(config: FilterConfig, u: Universe) -> FilterApprox:
    theta = config.theta
    _need_sigma(u, theta)
    for eta in config.sim.indices:
        if not in_theta(eta, theta):
            raise ValueError(f"index {eta} lies above the cut station")
    chain = [PCond()]
    skipped = []
    for n in sorted(config.models):
        cur = chain[-1]
        if not (u.is_model(n) and in_sk_theta(n, theta) and sk_contains(n, cur) and u.is_adequate(cur.A | {n})):
            skipped.append(n)
            continue
        chain.append(add_model(cur, n, u))
    A = chain[-1].A
    sim = replace(config.sim, start=chain[-1].base)
    run = Simulator(sim, lambda c: not separation_failures(c.W, A, first=True)).run()
    for b in run.chain[1:]:
        chain.append(PCond(b, A))
    for a, b in zip(chain, chain[1:]):
        if not leq_p(b, a, u, check=False) or p_violations(b, u):
            raise AssertionError("filter chain is not descending in P_theta")
    return FilterApprox(chain, theta, u, tuple(skipped))


# quotient membership -----------------------------------------------------------

@dataclass(frozen=True)
class MembershipReport:
    member: bool
    status: str  # compatible, incompatible or undecided
    witness: PCond | None = None
    reason: str = ""
    projection_in_filter: bool = False


def _order_conflict(a: Tree, b: Tree) -> bool:
    common = a.nodes & b.nodes
    return any(a.lt(x, y) != b.lt(x, y) for x in common for y in common if x != y)


def _separation_conflict(g: PCond, p: PCond):
    W = {}
    for c in (g, p):
        for eta, sub in c.W.items():
            W[eta] = W.get(eta, frozenset()) | sub
    bad = separation_failures(W, g.A | p.A, first=True)
    return bad[0] if bad else None


def common_extension(a: PCond, b: PCond, u: Universe) -> MembershipReport:
    """Bounded search for a common extension, with incompatibility certificates."""
    if leq_p(a, b, u, check=False):
        return MembershipReport(True, "compatible", a, "first extends second")
    if leq_p(b, a, u, check=False):
        return MembershipReport(True, "compatible", b, "second extends first")
    if not u.is_adequate(a.A | b.A):
        return MembershipReport(False, "incompatible", None, "union of side conditions is not adequate")
    if _order_conflict(a.T, b.T):
        return MembershipReport(False, "incompatible", None, "trees order shared nodes differently")
    clash = _separation_conflict(a, b)
    if clash is not None:
        m, eta, xi, x = clash
        return MembershipReport(False, "incompatible", None, f"{x} is forced into W({eta})&W({xi}) outside {m}")
    joined = oplus_p([a, b])
    cands = [joined]
    if not validate_tree(joined.T).is_standard:
        return MembershipReport(False, "undecided", None, "the union of the trees is not a tree")
    closed = {eta: downward_closure(joined.T, sub) for eta, sub in joined.W.items()}
    # every common extension contains these closures, so a clash here is final
    forced = separation_failures(closed, joined.A, first=True)
    if forced:
        m, eta, xi, x = forced[0]
        return MembershipReport(False, "incompatible", None, f"{x} is forced into W({eta})&W({xi}) outside {m}")
    if closed != joined.W:
        cands.append(PCond(PStar(joined.T, closed, joined.D), joined.A))
    if is_end_extension(b.T, a.T):
        cands.append(y_amalgam(b, a))
    if is_end_extension(a.T, b.T):
        cands.append(y_amalgam(a, b))
    for r in cands:
        if not p_violations(r, u) and leq_p(r, a, u, check=False) and leq_p(r, b, u, check=False):
            return MembershipReport(True, "compatible", r, "amalgam")
    return MembershipReport(False, "undecided", None, "no candidate extension validated")


def quotient_membership(p: PCond, happrox: FilterApprox) -> MembershipReport:
    u, theta = happrox.universe, happrox.theta
    rep = common_extension(happrox.generator, p, u)
    proj = happrox.contains(project_theta(p, theta, u))
    return replace(rep, projection_in_filter=proj)


def quotient_add_model(p: PCond, n: ModelSet, happrox: FilterApprox) -> tuple[PCond, PCond]:
    """Certify p + N in the quotient; returns (p + N, v) with v below the
    filter generator's refinement t and below p + N."""
    u, theta = happrox.universe, happrox.theta
    if not p.A:
        raise HypothesisViolation("nonempty", "p has no models")
    if dtheta_check(p, theta, u) is None:
        raise HypothesisViolation("D_theta", "p is not in D_theta")
    if not happrox.in_pool(n):
        raise HypothesisViolation("pool", "the model's trace below theta is not in the filter")
    if theta not in n.stations or not sk_contains(n, p):
        raise HypothesisViolation("hull", "p and theta must lie in the hull of the model")
    mem = quotient_membership(p, happrox)
    if not mem.member:
        raise HypothesisViolation("quotient", "p is not compatible with the filter generator")
    t = project_theta(mem.witness, theta, u)
    pn = add_model(p, n, u)
    v = y_amalgam(p, t)
    v = PCond(v.base, v.A | {n})
    bad = p_violations(v, u)
    if bad:
        raise AssertionError(f"v is not a condition: {bad[0]}")
    if not (leq_p(v, t, u, check=False) and leq_p(v, pn, u, check=False)):
        raise AssertionError("v does not extend both t and p + N")
    if not leq_p(t, happrox.generator, u, check=False) or cut(n, theta) not in t.A:
        raise AssertionError("refined generator lost the filter")
    return pn, v


@dataclass
class MultiResult:
    amalgam: PCond
    chosen: list
    certificate: Certificate


def quotient_multi_amalgamate(pools, happrox: FilterApprox, d: int) -> MultiResult:
    u, theta = happrox.universe, happrox.theta
    cands = [pair_ for pool in pools for pair_ in pool]
    if not cands:
        raise ValueError("no candidates")
    if d == 1:
        c, n = cands[0]
        return MultiResult(c, [(c, n)], Certificate(("single representative",)))
    prints = [fingerprint_theta(c, n, theta, u) for c, n in cands]
    if any(x != prints[0] for x in prints):
        raise HypothesisViolation("fingerprint", "pools are not fingerprint-matched")
    for c, _ in cands:
        if not quotient_membership(c, happrox).member:
            raise HypothesisViolation("quotient", "a pool member is not in the quotient")
    cands.sort(key=lambda cn: cn[1].sort_key())
    chain = []
    for c, n in cands:
        if all(sk_contains(n, pc) for pc, _ in chain):
            chain.append((c, n))
    blocks = [frozenset(x for x in c.T.nodes if not x < n.delta) for c, n in chain]
    pick = find_incomparable_family(happrox.tree, blocks, d)
    if pick is None:
        raise SearchFailure(f"no {d} representatives with pairwise incomparable private nodes")
    chosen = [chain[i] for i in pick]
    parts = [c for c, _ in chosen]
    amalgam, cert = amalgamate_fingerprint(parts, [n for _, n in chosen], u)
    for i, j in combinations(range(d), 2):
        a, b = parts[i].T.nodes, parts[j].T.nodes
        if any(happrox.tree.comparable(x, y) for x in a - b for y in b - a):
            raise AssertionError("chosen representatives are not incomparable in the filter tree")
    if not quotient_membership(amalgam, happrox).member:
        raise AssertionError("incomparability criterion holds but the amalgam is not in the quotient")
    return MultiResult(amalgam, chosen, Certificate(cert.checked + ("incomparable in filter tree", "in quotient")))

"""Conditions with side conditions: (T, W, D, A) where A is an adequate set
of models and W is A-separated.  Includes amalgamation over models,
fingerprints and the copy search that reflects a condition into a model."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .ordinals import OMEGA, Ordinal, ch_point
from .pstar import (
    Certificate,
    HypothesisViolation,
    PStar,
    leq_failures,
    normalize,
    oplus_pstar,
    violations,
)
from .trees import Tree, restrict
from .universe import (
    ModelSet,
    Station,
    Universe,
    contains,
    meet,
    sk_contains,
    sk_model,
)


@dataclass(frozen=True)
class PCond:
    base: PStar = field(default_factory=PStar)
    A: frozenset = frozenset()

    @property
    def T(self) -> Tree:
        return self.base.T

    @property
    def W(self) -> dict:
        return self.base.W

    @property
    def D(self) -> frozenset:
        return self.base.D

    def support_items(self):
        return (self.base, self.A)


def pcond(T=None, W=None, D=(), A=()) -> PCond:
    base = PStar(T or Tree(), {k: frozenset(v) for k, v in (W or {}).items()}, frozenset(frozenset(d) for d in D))
    return PCond(base, frozenset(A))


def separation_failures(W: dict, A, first: bool = False) -> list:
    out = []
    for m in sorted(A):
        inside = sorted(eta for eta in W if contains(m, eta))
        for eta, xi in combinations(inside, 2):
            for x in W[eta] & W[xi]:
                if not x < m.delta:
                    out.append((m, eta, xi, x))
                    if first:
                        return out
    return out


def p_violations(c: PCond, u: Universe) -> list[str]:
    out = list(violations(c.base))
    bad = [m for m in c.A if not u.is_model(m)]
    if bad:
        out.append(f"{bad[0]} is not a model")
    elif not u.adequacy(c.A)[0]:
        out.append("A is not adequate")
    for m, eta, xi, x in separation_failures(c.W, c.A, first=True):
        out.append(f"W({eta})&W({xi}) holds {x} outside {m}")
    return out


def validate_p(c: PCond, u: Universe) -> tuple[bool, list[str]]:
    v = p_violations(c, u)
    return not v, v


def leq_p(q: PCond, p: PCond, u: Universe, check: bool = True) -> bool:
    if check:
        for name, c in (("q", q), ("p", p)):
            v = p_violations(c, u)
            if v:
                raise ValueError(f"{name} is not a condition: {v[0]}")
    return p.A <= q.A and not leq_failures(q.base, p.base, first=True)


def normalize_p(p: PCond, u: Universe) -> PCond:
    q = PCond(normalize(p.base), p.A)
    v = p_violations(q, u)
    if v:
        raise AssertionError(f"normalization lost separation: {v[0]}")
    return q


def add_model(p: PCond, n: ModelSet, u: Universe) -> PCond:
    if not u.is_model(n):
        raise ValueError(f"{n} is not a model")
    if not sk_contains(n, p):
        raise ValueError("condition is not in the hull of the model")
    q = PCond(p.base, p.A | {n})
    v = p_violations(q, u)
    if v:
        raise AssertionError(f"adding a model broke the condition: {v[0]}")
    return q


def closure_extend(p: PCond, kind: str, target, u: Universe) -> PCond:
    if kind == "N":
        if target not in p.A:
            raise ValueError("closure model must belong to the condition")
        A = u.close_N(p.A, target)
    elif kind == "beta":
        A = u.close_beta(p.A, target)
    else:
        raise ValueError(f"unknown closure kind {kind!r}")
    q = PCond(p.base, A)
    v = p_violations(q, u)
    if v or not leq_p(q, p, u, check=False):
        raise AssertionError(f"closure is not a certified extension: {v[:1]}")
    if kind == "beta":
        for n in p.A:
            if u.is_N_closed(p.A, n) and not u.is_N_closed(A, n):
                raise AssertionError(f"station closure broke closure under {n}")
    return q


def oplus_p(parts) -> PCond:
    parts = list(parts)
    if len(parts) < 2:
        raise ValueError("oplus needs at least two conditions")
    return PCond(oplus_pstar([c.base for c in parts]), frozenset().union(*(c.A for c in parts)))


def cross_private_incomparable(parts, r_tree: Tree) -> bool:
    for i, j in combinations(range(len(parts)), 2):
        a, b = parts[i].T.nodes, parts[j].T.nodes
        for x in a - b:
            for y in b - a:
                if r_tree.comparable(x, y):
                    return False
    return True


def oplus_leq_criterion(parts, r: PCond, u: Universe) -> bool:
    """If the amalgam of ``parts`` is a condition below every part, and ``r``
    lies below every part without ordering private nodes of different parts,
    then ``r`` extends the amalgam."""
    parts = list(parts)
    am = oplus_p(parts)
    if p_violations(am, u) or any(not leq_p(am, c, u, check=False) for c in parts):
        raise HypothesisViolation("(0)", "amalgam is not a condition below every part")
    if p_violations(r, u):
        raise HypothesisViolation("(1)", "r is not a condition")
    if any(not leq_p(r, c, u, check=False) for c in parts):
        raise HypothesisViolation("(2)", "r does not extend every part")
    if not cross_private_incomparable(parts, r.T):
        raise HypothesisViolation("(3)", "r orders private nodes of different parts")
    verdict = leq_p(r, am, u, check=False)
    if not verdict:
        raise AssertionError("criterion hypotheses hold but r does not extend the amalgam")
    return verdict


# amalgamation over models --------------------------------------------------

def model_subset(a: ModelSet, b: ModelSet) -> bool:
    return a.delta <= b.delta and a.stations <= b.stations


def _compose(outer: dict, inner: dict) -> dict:
    return {k: inner[v] for k, v in outer.items()}


def amalgamate_models(parts, models, f, g, u: Universe) -> tuple[PCond, Certificate]:
    """Amalgamate conditions sitting in increasing models.

    ``f[(j, i)]`` maps dom W_j onto dom W_i and ``g[(j, i)]`` maps A_j onto
    A_i, for every i < j.
    """
    parts, models = list(parts), list(models)
    d = len(parts)
    if d < 2 or len(models) != d:
        raise ValueError("need at least two parts, one model each")
    for i, (p, n) in enumerate(zip(parts, models)):
        if p_violations(p, u):
            raise HypothesisViolation("condition", f"part {i}")
        if n not in p.A:
            raise HypothesisViolation("model-in-part", f"part {i}")
        if not u.is_N_closed(p.A, n):
            raise HypothesisViolation("model-closed", f"part {i}")
    for i, j in combinations(range(d), 2):
        if not sk_contains(models[j], parts[i]):
            raise HypothesisViolation("hull-nesting", f"part {i} not in hull of model {j}")
    for i, j in combinations(range(d), 2):
        fj, gj = f[(j, i)], g[(j, i)]
        if set(fj) != set(parts[j].W) or sorted(fj.values()) != sorted(parts[i].W) or len(set(fj.values())) != len(fj):
            raise HypothesisViolation("bijection-f", f"{j}->{i}")
        if set(gj) != set(parts[j].A) or set(gj.values()) != set(parts[i].A) or len(set(gj.values())) != len(gj):
            raise HypothesisViolation("bijection-g", f"{j}->{i}")
    for i, j, k in combinations(range(d), 3):
        if f[(k, i)] != _compose(f[(k, j)], f[(j, i)]) or g[(k, i)] != _compose(g[(k, j)], g[(j, i)]):
            raise HypothesisViolation("commutativity", f"{k}->{j}->{i}")
    deltas = [n.delta for n in models]
    for i, j in combinations(range(d), 2):
        pi, pj = parts[i], parts[j]
        fj, gj = f[(j, i)], g[(j, i)]
        ni, nj = models[i], models[j]
        di, dj = deltas[i], deltas[j]
        if restrict(pi.T, di) != restrict(pj.T, dj):
            raise HypothesisViolation("(1)", f"{i},{j}")
        ai = frozenset(e for e in pi.W if contains(ni, e))
        aj = frozenset(e for e in pj.W if contains(nj, e))
        if ai != aj or any(fj[e] != e for e in aj):
            raise HypothesisViolation("(2)", f"{i},{j}")
        for e in pj.W:
            for m in pj.A:
                if contains(m, e) != contains(gj[m], fj[e]):
                    raise HypothesisViolation("(3)", f"{i},{j}")
        for e in pj.W:
            if frozenset(x for x in pi.W[fj[e]] if x < di) != frozenset(x for x in pj.W[e] if x < dj):
                raise HypothesisViolation("(4)", f"{i},{j}")
        bi = frozenset(m for m in pi.A if sk_model(ni, m))
        bj = frozenset(m for m in pj.A if sk_model(nj, m))
        if bi != bj or any(gj[m] != m for m in bj):
            raise HypothesisViolation("(5)", f"{i},{j}")
        for m in pj.A:
            if m.delta < dj:
                if gj[m].delta != m.delta or not model_subset(meet(m, nj), gj[m]):
                    raise HypothesisViolation("(6)", f"{i},{j}")
    out = oplus_p(parts)
    v = p_violations(out, u)
    if v:
        raise AssertionError(f"amalgam over models is not a condition: {v[0]}")
    for i, p in enumerate(parts):
        if not leq_p(out, p, u, check=False):
            raise AssertionError(f"amalgam does not extend part {i}")
    return out, Certificate(("nesting", "bijections", "commutativity", "(1)-(6)", "amalgam valid and below parts"))


# fingerprints ---------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    t: Tree
    a: frozenset
    b: frozenset
    m: int
    n: int
    w: tuple
    U0: frozenset
    U1: frozenset
    U2: frozenset
    U3: frozenset
    h0: tuple
    h1: tuple

    def support_items(self):
        return (self.t.nodes, self.a, self.b, self.w, self.h0, self.h1)


def enumerations(p: PCond):
    return sorted(p.W), sorted(p.A)


def fingerprint_w(p: PCond, n: ModelSet, u: Universe) -> Fingerprint:
    if n not in p.A or not u.is_N_closed(p.A, n):
        raise ValueError("fingerprint needs a model of the condition it is closed under")
    d = n.delta
    etas, ks = enumerations(p)
    U2 = frozenset(l for l, k in enumerate(ks) if k.delta < d)
    return Fingerprint(
        t=restrict(p.T, d),
        a=frozenset(e for e in etas if contains(n, e)),
        b=frozenset(k for k in ks if sk_model(n, k)),
        m=len(etas),
        n=len(ks),
        w=tuple(frozenset(x for x in p.W[e] if x < d) for e in etas),
        U0=frozenset(i for i, e in enumerate(etas) if contains(n, e)),
        U1=frozenset(l for l, k in enumerate(ks) if sk_model(n, k)),
        U2=U2,
        U3=frozenset((i, l) for i, e in enumerate(etas) for l, k in enumerate(ks) if contains(k, e)),
        h0=tuple((l, ks[l].delta) for l in sorted(U2)),
        h1=tuple((l, meet(ks[l], n)) for l in sorted(U2)),
    )


def fingerprint_diff(a: Fingerprint, b: Fingerprint) -> list[str]:
    names = ("t", "a", "b", "m", "n", "w", "U0", "U1", "U2", "U3", "h0", "h1")
    return [k for k in names if getattr(a, k) != getattr(b, k)]


def index_maps(parts):
    """The f/g families matching canonical enumerations position by position."""
    enums = [enumerations(p) for p in parts]
    f, g = {}, {}
    for i, j in combinations(range(len(parts)), 2):
        f[(j, i)] = dict(zip(enums[j][0], enums[i][0]))
        g[(j, i)] = dict(zip(enums[j][1], enums[i][1]))
    return f, g


def amalgamate_fingerprint(parts, models, u: Universe) -> tuple[PCond, Certificate]:
    parts, models = list(parts), list(models)
    prints = [fingerprint_w(p, n, u) for p, n in zip(parts, models)]
    for i, j in combinations(range(len(parts)), 2):
        diff = fingerprint_diff(prints[i], prints[j])
        if diff:
            raise HypothesisViolation("fingerprint", f"parts {i},{j} differ in {', '.join(diff)}")
        if not sk_contains(models[j], parts[i]):
            raise HypothesisViolation("hull-nesting", f"part {i} not in hull of model {j}")
    f, g = index_maps(parts)
    out, cert = amalgamate_models(parts, models, f, g, u)
    problems = delta_system_failures(parts, models)
    if problems:
        raise AssertionError(f"delta-system conclusion fails: {problems[0]}")
    return out, Certificate(cert.checked + ("fingerprints equal", "three delta-systems"))


def delta_system_failures(parts, models) -> list[str]:
    out = []
    trees = [p.T.nodes for p in parts]
    doms = [frozenset(p.W) for p in parts]
    sides = [p.A for p in parts]
    for k, n in enumerate(models):
        checks = (
            ("tree", trees, frozenset(x for x in trees[k] if x < n.delta)),
            ("domain", doms, frozenset(e for e in doms[k] if contains(n, e))),
            ("models", sides, frozenset(m for m in sides[k] if sk_model(n, m))),
        )
        for name, sets, root in checks:
            if len(sets) >= 2 and not all(a & b == root for a, b in combinations(sets, 2)):
                out.append(f"{name} family is not a delta-system with root from part {k}")
    return out


# remapping ------------------------------------------------------------------

def shift_ordinal(a: Ordinal, start: int, new: int) -> Ordinal:
    """Move ordinals at or above w^w*start so that w^w*start lands on w^w*new."""
    if a < ch_point(start):
        return a
    (e, c), rest = a.terms[0], a.terms[1:]
    if e != OMEGA:
        raise ValueError(f"cannot shift {a}")
    return Ordinal(((OMEGA, c - start + new),) + rest)


def remap_index(e, cmap, smap):
    from .universe import Countable

    if isinstance(e, Station):
        return Station(smap.get(e.index, e.index))
    if isinstance(e, Countable):
        return Countable(cmap(e.alpha))
    if isinstance(e, int):
        return e
    raise TypeError(f"cannot remap {e!r}")


def remap_model(m: ModelSet, cmap, smap) -> ModelSet:
    return ModelSet(cmap(m.delta), frozenset(smap.get(s, s) for s in m.stations))


def remap_condition(p: PCond, cmap, smap=None) -> tuple[PCond, dict, dict]:
    smap = smap or {}
    nodes = {x: cmap(x) for x in p.T.nodes}
    T = Tree(frozenset(nodes.values()), frozenset((nodes[x], nodes[y]) for x, y in p.T.order))
    fmap = {e: remap_index(e, cmap, smap) for e in p.W}
    W = {fmap[e]: frozenset(nodes[x] for x in sub) for e, sub in p.W.items()}
    D = frozenset(frozenset(fmap[e] for e in d) for d in p.D)
    gmap = {m: remap_model(m, cmap, smap) for m in p.A}
    return PCond(PStar(T, W, D), frozenset(gmap.values())), fmap, gmap


def lead_coefficient(a: Ordinal) -> int:
    """Coefficient of w^w in a (0 when a < w^w)."""
    if a.terms and a.terms[0][0] == OMEGA:
        return a.terms[0][1]
    return 0


def countable_atoms(p) -> set:
    from .universe import support

    return support(p)[0]


def station_atoms(p) -> set:
    from .universe import support

    return support(p)[1]


# reflection ------------------------------------------------------------------

@dataclass
class ReflectionResult:
    ok: bool
    witness: PCond | None = None
    amalgam: PCond | None = None
    tried: int = 0
    reason: str = ""


def reflection_clauses(q: PCond, n: ModelSet, qbar: PCond, fmap: dict, gmap: dict, u: Universe, constraint=None) -> list[str]:
    """Which of the thirteen copy clauses fail for the candidate ``qbar``."""
    out = []
    etas, ks = sorted(q.W), [n] + sorted(q.A - {n})
    nbar = gmap[n]
    dq, dbar = n.delta, nbar.delta
    if p_violations(qbar, u) or (constraint is not None and not constraint(qbar)):
        out.append("(1)")
    if set(fmap.values()) != set(qbar.W) or len(set(fmap.values())) != len(etas) or set(gmap.values()) != qbar.A or len(set(gmap.values())) != len(ks):
        out.append("(2)")
    if restrict(qbar.T, dbar) != restrict(q.T, dq):
        out.append("(4)")
    U0 = [e for e in etas if contains(n, e)]
    if any(fmap[e] != e for e in U0):
        out.append("(5)")
    if any(contains(m, e) != contains(gmap[m], fmap[e]) for e in etas for m in ks):
        out.append("(6)")
    if frozenset(e for e in qbar.W if contains(nbar, e)) != frozenset(U0):
        out.append("(7)")
    if any(frozenset(x for x in qbar.W[fmap[e]] if x < dbar) != frozenset(x for x in q.W[e] if x < dq) for e in etas):
        out.append("(8)")
    if frozenset(m for m in qbar.A if sk_model(nbar, m)) != frozenset(m for m in q.A if sk_model(n, m)):
        out.append("(9)")
    if any(gmap[m] != m for m in ks if sk_model(n, m)):
        out.append("(10)")
    small = [m for m in ks if m.delta < dq]
    if any(gmap[m].delta != m.delta or not model_subset(meet(m, n), gmap[m]) for m in small):
        out.append("(11)")
    if any((m.delta < dq) != (gmap[m].delta < dbar) for m in ks):
        out.append("(12)")
    if any(meet(gmap[m], nbar) not in qbar.A for m in small):
        out.append("(13)")
    if not sk_contains(n, qbar):
        out.append("hull")
    return out


def _station_maps(outside, targets, used, u: Universe, limit: int):
    """Pattern-preserving injections from ``outside`` into ``targets``."""
    outside = sorted(outside)
    if not outside:
        yield {}
        return
    count = 0
    for image in permutations(sorted(targets), len(outside)):
        smap = dict(zip(outside, image))
        if u.preserves_pattern(smap, used):
            yield smap
            count += 1
            if count >= limit:
                return


def _pinned_stations(q: PCond, n: ModelSet) -> set:
    """Stations the copy of n must keep: those of indices in n, of models in
    the hull of n, and of the traces on n of smaller models."""
    out = {e.index for e in q.W if isinstance(e, Station) and e.index in n.stations}
    for m in q.A:
        if sk_model(n, m):
            out |= m.stations
        elif m.delta < n.delta:
            out |= m.stations & n.stations
    return out


def reflect_generic(q: PCond, n: ModelSet, u: Universe, constraint=None, limit: int = 2000) -> ReflectionResult:
    """Search the hull of ``n`` for a copy of ``q`` and amalgamate with it.

    Countable atoms at or above the trace of n are shifted down, stations
    outside n are sent injectively to unused stations of n with the same
    attributes, and the copy of n itself keeps only the stations it must.
    """
    if sk_contains(n, q) and (constraint is None or constraint(q)):
        return ReflectionResult(True, q, q, 0, "already inside the hull")
    if n not in q.A or not u.is_N_closed(q.A, n):
        raise ValueError("model must belong to the condition, which must be closed under it")
    start = lead_coefficient(n.delta)
    atoms = countable_atoms(q)
    low = [lead_coefficient(a) for a in atoms if a < n.delta]
    high = [lead_coefficient(a) for a in atoms if not a < n.delta]
    span = max(high) - start
    floor = max(low, default=0) + 1
    used = station_atoms(PCond(q.base, q.A - {n}))
    outside = used - n.stations
    copies = [u.close_model(n.delta, _pinned_stations(q, n)).stations]
    if n.stations not in copies:
        copies.append(n.stations)
    tried = 0
    for kept in copies:
        targets = n.stations - used - kept
        for new in range(floor, start - span):
            def cmap(a, new=new):
                return shift_ordinal(a, start, new)
            for smap in _station_maps(outside, targets, used | kept, u, limit):
                tried += 1
                if tried > limit:
                    return ReflectionResult(False, None, None, tried, "search limit reached")
                qbar, fmap, gmap = remap_condition(q, cmap, smap)
                nbar = ModelSet(cmap(n.delta), kept)
                gmap[n] = nbar
                qbar = PCond(qbar.base, frozenset(gmap.values()))
                if reflection_clauses(q, n, qbar, fmap, gmap, u, constraint):
                    continue
                try:
                    am, _ = amalgamate_models([qbar, q], [nbar, n], {(1, 0): fmap}, {(1, 0): gmap}, u)
                except HypothesisViolation as exc:
                    return ReflectionResult(False, qbar, None, tried, f"copy passes every clause but {exc}")
                return ReflectionResult(True, qbar, am, tried, "copy")
    return ReflectionResult(False, None, None, tried, "no copy fits inside the hull")

"""The c.c.c. poset: e-separated conditions, weak rho functions at finite
scale, the pairwise compatibility search and the generic-filter simulator."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .ordinals import DEFAULT_CEILING, ZERO, Ordinal, ch_point, h_of, next_in_Ch
from .pstar import (
    PStar,
    leq_failures,
    normalize,
    oplus_pstar,
    pair,
    split_failures,
    violations,
)
from .trees import (
    Tree,
    add_leaf,
    antichain_width,
    downward_closure,
    fresh_node,
    insert_below,
    is_downwards_closed,
    has_minimal_splits,
    restrict,
)

TOP = DEFAULT_CEILING


@dataclass(frozen=True)
class EFunction:
    table: dict = field(default_factory=dict)
    default: Ordinal = TOP

    def __call__(self, eta, xi) -> Ordinal:
        return self.table.get(pair(eta, xi), self.default)

    def __hash__(self):
        return hash((frozenset(self.table.items()), self.default))


def is_e_separated(W: dict, e: EFunction) -> bool:
    return not separation_failures(W, e)


def separation_failures(W: dict, e: EFunction) -> list:
    out = []
    for eta, xi in combinations(sorted(W), 2):
        bound = e(eta, xi)
        for x in W[eta] & W[xi]:
            if bound < h_of(x):
                out.append((eta, xi, x))
    return out


def validate_pprime(c: PStar, e: EFunction) -> tuple[bool, list[str]]:
    v = violations(c)
    v += [f"W({a})&W({b}) holds {x} above e" for a, b, x in separation_failures(c.W, e)]
    return not v, v


def verify_weak_rho(e: EFunction, families, gammas):
    """Return (True, None) or (False, (family index, gamma))."""
    for fi, fam in enumerate(families):
        blocks = [frozenset(b) for b in fam]
        for a, b in combinations(range(len(blocks)), 2):
            if blocks[a] & blocks[b]:
                raise ValueError(f"family {fi} is not pairwise disjoint")
        for g in gammas:
            hit = any(
                all(not e(x, y) < g for x in blocks[i] for y in blocks[j])
                for i, j in combinations(range(len(blocks)), 2)
            )
            if not hit:
                return False, (fi, g)
    return True, None


def make_weak_rho(kind: str, indices=(), seed: int = 0, p: float = 0.5, small: int = 1) -> EFunction:
    """Generator stand-ins for a weak rho function.

    ``constant-top`` maps every pair to the ceiling, ``random`` maps each pair
    of ``indices`` to the ceiling with probability ``p`` and to a natural below
    ``small`` otherwise, and ``adversarial-small`` is constantly zero.
    """
    if kind == "constant-top":
        return EFunction({}, TOP)
    if kind == "adversarial-small":
        return EFunction({}, ZERO)
    if kind == "random":
        rng = random.Random(seed)
        table = {}
        for a, b in combinations(sorted(indices), 2):
            table[pair(a, b)] = TOP if rng.random() < p else Ordinal.of(rng.randrange(max(small, 1)))
        return EFunction(table, ZERO)
    raise ValueError(f"unknown weak rho kind {kind!r}")


# compatibility search ------------------------------------------------------

@dataclass
class PairResult:
    ok: bool
    i: int | None = None
    j: int | None = None
    amalgam: PStar | None = None
    stage: str = ""
    detail: str = ""


STAGES = ("(i) bucketing", "(ii) delta-system", "(iii) root stabilization", "(iv) weak-rho scan", "(v) certification")


def _traces(c: PStar, d: Ordinal):
    return tuple(frozenset(x for x in c.W[eta] if x < d) for eta in sorted(c.W))


def find_compatible_pair(conds, e: EFunction, levels=None) -> PairResult:
    conds = list(conds)
    if levels is None:
        levels = [ch_point(i + 1) for i in range(len(conds))]
    for k, c in enumerate(conds):
        ok, v = validate_pprime(c, e)
        if not ok:
            raise ValueError(f"condition {k} is not in the poset: {v[0]}")
    buckets = defaultdict(list)
    for k, c in enumerate(conds):
        key = (restrict(c.T, levels[k]), len(c.W), _traces(c, levels[k]))
        buckets[key].append(k)
    groups = [g for g in buckets.values() if len(g) >= 2]
    if not groups:
        return PairResult(False, stage=STAGES[0], detail="every bucket is a singleton")
    furthest = 1
    notes = []
    for group in groups:
        group.sort(key=lambda k: levels[k])
        for root, members in _sunflowers(conds, group):
            furthest = max(furthest, 2)
            stable = defaultdict(list)
            for k in members:
                c = conds[k]
                ordered = sorted(c.W)
                pos = tuple(n for n, eta in enumerate(ordered) if eta in root)
                own = all(
                    all(x < levels[k] for x in c.W[a] & c.W[b])
                    for a, b in combinations(sorted(root), 2)
                )
                if own:
                    stable[pos].append(k)
            for ks in stable.values():
                if len(ks) < 2:
                    continue
                furthest = max(furthest, 3)
                core = restrict(conds[ks[0]].T, levels[ks[0]])
                zeta = next_in_Ch(max(core.nodes)) if core.nodes else ZERO
                for i, j in combinations(ks, 2):
                    pi, pj = conds[i], conds[j]
                    if any(
                        e(a, b) < zeta
                        for a in pi.dom - root
                        for b in pj.dom - root
                    ):
                        continue
                    furthest = max(furthest, 4)
                    if split_failures(pi, pj, levels[i], levels[j], first=True):
                        notes.append(f"{i},{j}: not split")
                        continue
                    am = pi if pi == pj else oplus_pstar([pi, pj])
                    problems = validate_pprime(am, e)[1]
                    problems += leq_failures(am, pi, first=True) + leq_failures(am, pj, first=True)
                    if problems:
                        notes.append(f"{i},{j}: {problems[0]}")
                        continue
                    return PairResult(True, i, j, am, stage="done")
    return PairResult(False, stage=STAGES[furthest], detail="; ".join(notes[:3]))


def _sunflowers(conds, group):
    """Candidate delta-subsystems of the domains, largest first."""
    doms = {k: conds[k].dom for k in group}
    roots = defaultdict(int)
    for a, b in combinations(group, 2):
        roots[doms[a] & doms[b]] += 1
    ordered = sorted(roots, key=lambda r: (-roots[r], len(r), sorted(map(repr, r))))
    out = []
    for r in ordered:
        chosen = []
        for k in group:
            if r <= doms[k] and all(doms[k] & doms[c] == r for c in chosen):
                chosen.append(k)
        if len(chosen) >= 2:
            out.append((r, chosen))
    out.sort(key=lambda rc: -len(rc[1]))
    return out


# generic simulator ---------------------------------------------------------

class StarvationError(RuntimeError):
    pass


@dataclass
class SimConfig:
    indices: tuple = ()
    height: int = 1
    pairs: tuple = ()
    seed: int = 0
    reuse: float = 0.7
    commit_delay: int = 0
    max_rounds: int = 5000
    start: PStar | None = None


@dataclass
class GenericApprox:
    chain: list
    config: SimConfig
    rounds: int = 0

    @property
    def last(self) -> PStar:
        return self.chain[-1]

    @property
    def tree(self) -> Tree:
        return self.last.T

    @property
    def subtrees(self) -> dict:
        return self.last.W

    @property
    def commitments(self) -> frozenset:
        return self.last.D


REQUIREMENT_TYPES = ("root", "normalize", "commit", "grow", "below", "above")


class Simulator:
    """Round-robin density-requirement scheduler over (T, W, D) conditions.

    ``accept(candidate, current)`` decides whether a proposed extension is a
    legal step; subclasses or callers use it for the separation clause.
    """

    def __init__(self, config: SimConfig, separated):
        self.cfg = config
        self.separated = separated
        self.rng = random.Random(config.seed)

    def accept(self, cand: PStar, cur: PStar) -> bool:
        return self.separated(cand) and not leq_failures(cand, cur, first=True)

    # requirement finders return a callable that meets the requirement
    def _root(self, p, rnd):
        if ZERO in p.T.nodes:
            return None
        return lambda: PStar(add_leaf(p.T, None, ZERO), p.W, p.D)

    def _normalize(self, p, rnd):
        if is_downwards_closed(p.T) and has_minimal_splits(p.T):
            return None
        return lambda: normalize(p)

    def _commit(self, p, rnd):
        if rnd < self.cfg.commit_delay or ZERO not in p.T.nodes:
            return None
        for a, b in self.cfg.pairs:
            if pair(a, b) not in p.D:
                def meet(a=a, b=b):
                    W = dict(p.W)
                    for x in (a, b):
                        W.setdefault(x, frozenset({ZERO}))
                    return PStar(p.T, W, p.D | {pair(a, b)})
                return meet
        return None

    def _grow(self, p, rnd):
        if ZERO not in p.T.nodes:
            return None
        for eta in self.cfg.indices:
            if eta not in p.W:
                return lambda eta=eta: PStar(p.T, {**p.W, eta: frozenset({ZERO})}, p.D)
            have = {h_of(x) for x in p.W[eta]}
            for a in range(self.cfg.height):
                alpha = Ordinal.of(a)
                if alpha not in have:
                    return lambda eta=eta, alpha=alpha: self._grow_step(p, eta, alpha)
        return None

    def _grow_step(self, p, eta, alpha):
        sub = p.W[eta]
        if self.rng.random() < self.cfg.reuse:
            cands = sorted(x for x in p.T.nodes if h_of(x) == alpha)
            self.rng.shuffle(cands)
            for y in cands:
                W = {**p.W, eta: sub | downward_closure(p.T, [y])}
                cand = PStar(p.T, W, p.D)
                if self.accept(cand, p):
                    return cand
        lower = [x for x in sub if h_of(x) < alpha]
        top = max(lower, key=lambda x: (h_of(x), x))
        y = fresh_node(alpha, p.T.nodes)
        T = add_leaf(p.T, top, y)
        return PStar(T, {**p.W, eta: sub | {y}}, p.D)

    def _below(self, p, rnd):
        for x in sorted(p.T.nodes):
            hx = h_of(x)
            have = {h_of(z) for z in p.T.below(x)}
            for a in range(self.cfg.height):
                alpha = Ordinal.of(a)
                if not alpha < hx:
                    break
                if alpha not in have:
                    return lambda x=x, alpha=alpha: self._insert(p, x, alpha)
        return None

    def _insert(self, p, x, alpha):
        chain = sorted(p.T.below(x) | {x})
        child = next(c for c in chain if alpha < h_of(c))
        n = fresh_node(alpha, p.T.nodes)
        T = insert_below(p.T, child, n)
        W = {eta: (sub | {n}) if child in sub else sub for eta, sub in p.W.items()}
        return PStar(T, W, p.D)

    def _above(self, p, rnd):
        for x in sorted(p.T.nodes, key=lambda x: (-len(p.T.below(x)), x)):
            hx = h_of(x)
            for b in range(self.cfg.height):
                beta = Ordinal.of(b)
                if not hx < beta:
                    continue
                if not any(h_of(y) == beta for y in p.T.above(x)):
                    return lambda x=x, beta=beta: PStar(add_leaf(p.T, x, fresh_node(beta, p.T.nodes)), p.W, p.D)
        return None

    def run(self) -> GenericApprox:
        start = self.cfg.start or PStar()
        chain = [start]
        finders = [getattr(self, "_" + name) for name in REQUIREMENT_TYPES]
        for rnd in range(self.cfg.max_rounds):
            progressed = False
            for find in finders:
                p = chain[-1]
                step = find(p, rnd)
                if step is None:
                    continue
                q = step()
                if not self.accept(q, p):
                    raise StarvationError(f"{find.__name__[1:]} produced an illegal step")
                chain.append(q)
                progressed = True
            if not progressed and rnd >= self.cfg.commit_delay:
                return GenericApprox(chain, self.cfg, rnd)
        pending = [f.__name__[1:] for f in finders if f(chain[-1], self.cfg.max_rounds) is not None]
        raise StarvationError(f"unmet requirements after {self.cfg.max_rounds} rounds: {pending}")


def simulate_generic_pprime(config: SimConfig, e: EFunction | None = None) -> GenericApprox:
    e = e or EFunction()
    return Simulator(config, lambda c: is_e_separated(c.W, e)).run()


@dataclass
class PairCertificate:
    pair: tuple
    committed: bool
    certified: bool
    generators: int = 0
    intersection: int = 0
    max_antichain: int = 0


def check_strong_almost_disjoint(g: GenericApprox) -> list[PairCertificate]:
    last = g.last
    out = []
    for eta, xi in combinations(sorted(last.W), 2):
        inter = last.W[eta] & last.W[xi]
        width = antichain_width(last.T, inter)
        key = pair(eta, xi)
        at = next((q for q in g.chain if key in q.D), None)
        if at is None:
            out.append(PairCertificate((eta, xi), False, False, 0, len(inter), width))
            continue
        gens = at.W[eta] & at.W[xi]
        ok = all(any(last.T.le(x, z) for z in gens) for x in inter)
        out.append(PairCertificate((eta, xi), True, ok, len(gens), len(inter), width))
    return out


def immediate_successors(t: Tree, carrier, x) -> list:
    ups = [y for y in carrier if t.lt(x, y)]
    return sorted(y for y in ups if not any(t.lt(z, y) for z in ups if z != y))


def derive_triple_family(tree: Tree, subtrees: dict):
    fams = {}
    for eta, sub in subtrees.items():
        fam = set()
        for x in sub:
            succ = immediate_successors(tree, sub, x)
            for y, z in combinations(succ, 2):
                fam.add(frozenset((x, y, z)))
        fams[eta] = frozenset(fam)
    report = {(a, b): len(fams[a] & fams[b]) for a, b in combinations(sorted(fams), 2)}
    return fams, report

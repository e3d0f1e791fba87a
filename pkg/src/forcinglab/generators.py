"""Seeded random instances and planted families for the suites and the CLI.

Every generator takes a ``random.Random`` so that a run is determined by its
seed.  Planted generators build instances that satisfy the hypotheses of an
operation by construction; the matching ``*_violation`` helpers break one
named clause.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass, field
from itertools import combinations

from .ccc import TOP, EFunction, SimConfig
from .ordinals import OMEGA, OMEGA_OMEGA, ZERO, Ordinal, block_start, ch_point, h_of, omega_pow
from .pstar import PStar, pair
from .side import PCond, p_violations
from .trees import EMPTY_TREE, Tree, add_leaf, downward_closure, insert_below
from .universe import DEFAULT_UNIVERSE, Countable, ModelSet, Station, Universe, cut, sk_model

THETA = 12
BASE = frozenset({0, 1, 2, 3})
PLAIN_LOW = (5, 6, 7)
PLAIN_MID = (9, 10, 11)
PLAIN_HIGH = (13, 14, 15)


def make_rng(seed, *salt) -> random.Random:
    return random.Random(":".join(str(s) for s in (seed,) + salt))


@lru_cache(maxsize=4096)
def node_at(height, j: int = 0) -> Ordinal:
    """The j-th ordinal of the block of nodes with the given height."""
    if isinstance(height, int):
        height = Ordinal.of(height)
    if height == ZERO:
        if j:
            raise ValueError("height 0 holds only the root")
        return ZERO
    start = block_start(height)
    return start + j if j else start


# trees ------------------------------------------------------------------------

def random_tree(rng, max_nodes: int = 10, max_height: int = 5, spread: int = 3, high: float = 0.0, empty: float = 0.02) -> Tree:
    """A standard finite tree; with probability ``high`` a new node jumps to a
    height at or above w^w."""
    if rng.random() < empty:
        return EMPTY_TREE
    target = rng.randint(1, max_nodes)
    parents = {ZERO: None}
    heights = {ZERO: ZERO}
    for _ in range(8 * max_nodes):
        if len(parents) >= target:
            break
        par = rng.choice(sorted(parents))
        hp = heights[par]
        if high and rng.random() < high and hp < OMEGA_OMEGA:
            hh = OMEGA_OMEGA + rng.randrange(2)
        else:
            hh = hp + rng.randint(1, 2)
            cap = Ordinal.of(max_height) if hp < OMEGA_OMEGA else OMEGA_OMEGA + max_height
            if hh > cap:
                continue
        x = node_at(hh, rng.randrange(spread))
        if x in parents:
            continue
        parents[x] = par
        heights[x] = hh
    return Tree.from_parents(parents)


def random_subtree(rng, t: Tree, p: float = 0.4) -> frozenset:
    picks = [x for x in sorted(t.nodes) if rng.random() < p]
    return downward_closure(t, picks)


def mutate_tree(rng, t: Tree) -> Tree:
    """A raw tree that is usually not standard."""
    nodes, order = set(t.nodes), set(t.order)
    kind = rng.randrange(6)
    if kind == 0 and order:
        order.discard(rng.choice(sorted(order, key=lambda o: (o[0].key, o[1].key))))
    elif kind == 1:
        x = Ordinal.of(rng.randint(1, 5))
        nodes.add(x)
        if ZERO in nodes:
            order.add((ZERO, x))
    elif kind == 2 and order:
        x, y = rng.choice(sorted(order, key=lambda o: (o[0].key, o[1].key)))
        order.discard((x, y))
        order.add((y, x))
    elif kind == 3 and any(h_of(x) > ZERO for x in nodes):
        par = rng.choice(sorted(x for x in nodes if h_of(x) > ZERO))
        y = node_at(h_of(par), 7)
        if y not in nodes:
            nodes.add(y)
            order |= {(a, y) for a in t.below(par) | {par}}
    elif kind == 4:
        a, b = node_at(1, 5), node_at(1, 6)
        y = node_at(3, 5)
        nodes |= {ZERO, a, b, y}
        order |= {(ZERO, a), (ZERO, b), (ZERO, y), (a, y), (b, y)}
    else:
        nodes.discard(ZERO)
        order = {o for o in order if ZERO not in o}
    return Tree(frozenset(nodes), frozenset(order))


# P* conditions ---------------------------------------------------------------

INT_POOL = tuple(range(6))


def random_pstar(rng, max_nodes: int = 10, n_idx: int = 4, pool=INT_POOL, high: float = 0.0, t: Tree | None = None) -> PStar:
    t = random_tree(rng, max_nodes, high=high) if t is None else t
    k = rng.randint(0, min(n_idx, len(pool)))
    dom = sorted(rng.sample(list(pool), k))
    W = {eta: random_subtree(rng, t) for eta in dom}
    D = frozenset(pair(a, b) for a, b in combinations(dom, 2) if rng.random() < 0.3)
    return PStar(t, W, D)


def mutate_pstar(rng, c: PStar) -> PStar:
    kind = rng.randrange(4)
    W = dict(c.W)
    if kind == 0:
        return PStar(mutate_tree(rng, c.T), W, c.D)
    if kind == 1 and W:
        eta = rng.choice(sorted(W))
        tops = [x for x in sorted(c.T.nodes) if c.T.below(x)]
        if tops:
            W[eta] = frozenset({rng.choice(tops)})
            return PStar(c.T, W, c.D)
    if kind == 2 and W:
        eta = rng.choice(sorted(W))
        W[eta] = W[eta] | {node_at(9, 9)}
        return PStar(c.T, W, c.D)
    dom = sorted(W) or [0]
    return PStar(c.T, W, c.D | {pair(dom[0], 99)})


def raw_pstar(rng, **kw) -> PStar:
    """Valid about half the time."""
    c = random_pstar(rng, **kw)
    return mutate_pstar(rng, c) if rng.random() < 0.5 else c


def extend_pstar(rng, c: PStar, steps: int = 3, pool=INT_POOL) -> PStar:
    """A random refinement attempt; not always an extension."""
    T, W, D = c.T, dict(c.W), set(c.D)
    for _ in range(steps):
        kind = rng.randrange(5)
        if kind == 0 and T.nodes:
            par = rng.choice(sorted(T.nodes))
            y = node_at(h_of(par) + rng.randint(1, 2), rng.randrange(4))
            if y not in T.nodes:
                T = add_leaf(T, par, y)
        elif kind == 1 and T.order:
            x, y = sorted(T.order, key=lambda o: (o[0].key, o[1].key))[rng.randrange(len(T.order))]
            if h_of(y) > h_of(x) + 1:
                n = node_at(h_of(x) + 1, rng.randrange(4) + 3)
                if n not in T.nodes:
                    W = {e: (s | {n}) if y in s and x in s else s for e, s in W.items()}
                    T = insert_below(T, y, n)
                    # raw inputs may hold stray nodes; keep them as they are
                    W = {e: downward_closure(T, s & T.nodes) | (s - T.nodes) for e, s in W.items()}
        elif kind == 2 and W and T.nodes:
            eta = rng.choice(sorted(W))
            W[eta] = W[eta] | downward_closure(T, [rng.choice(sorted(T.nodes))])
        elif kind == 3:
            eta = rng.choice(list(pool))
            W.setdefault(eta, random_subtree(rng, T, 0.3) if T.nodes else frozenset())
        elif len(W) >= 2:
            a, b = rng.sample(sorted(W), 2)
            D.add(pair(a, b))
    return PStar(T, W, frozenset(D))


def random_efunction(rng, pool=INT_POOL, small: int = 4, p: float = 0.4) -> EFunction:
    table = {}
    for a, b in combinations(sorted(pool), 2):
        table[pair(a, b)] = TOP if rng.random() < p else Ordinal.of(rng.randrange(small))
    return EFunction(table, ZERO)


@dataclass
class OracleInstance:
    """Two raw conditions, an e-function and a pair of split levels."""

    p: PCond
    q: PCond
    e: EFunction
    dp: Ordinal
    dq: Ordinal


# split families ------------------------------------------------------------------

def _parents(t: Tree) -> dict:
    return {x: t.parent(x) for x in t.nodes}


def _private_chains(rng, t: Tree, level: Ordinal, count: int, depth: int = 3):
    """Chains of new nodes above ``level`` attached to nodes of ``t``.

    Returns a list of (attach point, [nodes bottom-up])."""
    out = []
    used = set()
    for c in range(count):
        attach = rng.choice(sorted(t.nodes))
        m = rng.randrange(2)
        chain = []
        for _ in range(rng.randint(1, depth)):
            x = node_at(level + m, c)
            if x in used:
                break
            used.add(x)
            chain.append(x)
            m += rng.randint(1, 2)
        if chain:
            out.append((attach, chain))
    return out


def _attach(parents: dict, chains) -> dict:
    parents = dict(parents)
    for attach, chain in chains:
        below = attach
        for x in chain:
            parents[x] = below
            below = x
    return parents


@dataclass
class SplitFamily:
    parts: list
    deltas: list
    root: frozenset


def plant_split_family(rng, d: int) -> SplitFamily:
    """Pairwise split parts whose domains form a delta-system."""
    t = random_tree(rng, max_nodes=5, max_height=4, empty=0.0)
    shared = list(range(rng.randint(0, 3)))
    Wr = {eta: random_subtree(rng, t) for eta in shared}
    Dr = {pair(a, b) for a, b in combinations(shared, 2) if rng.random() < 0.4}
    parts, deltas = [], []
    for i in range(d):
        level = ch_point(i + 1)
        priv = [100 + 10 * i + k for k in range(rng.randint(0, 2))]
        chains = _private_chains(rng, t, level, rng.randint(0, 3))
        T = Tree.from_parents(_attach(_parents(t), chains))
        W = {eta: set(Wr[eta]) for eta in shared}
        for k in priv:
            W[k] = set(random_subtree(rng, t))
        for attach, chain in chains:
            owners = [eta for eta in shared if attach in Wr[eta]]
            r = rng.random()
            if owners and r < 0.4:
                W[rng.choice(owners)] |= set(chain)
            elif priv and r < 0.8:
                k = rng.choice(priv)
                W[k] |= set(downward_closure(T, chain))
        D = set(Dr)
        for k in priv:
            for other in shared + priv:
                if other != k and rng.random() < 0.3:
                    D.add(pair(k, other))
        parts.append(PStar(T, {e: frozenset(s) for e, s in W.items()}, frozenset(D)))
        deltas.append(level)
    return SplitFamily(parts, deltas, frozenset(shared))


# P' translated copies ----------------------------------------------------------------

@dataclass
class CopyFamily:
    conds: list
    levels: list
    e: EFunction
    blocks: list
    zeta: Ordinal


def plant_copy_family(rng, n: int, kind: str = "constant-top", p: float = 0.1) -> CopyFamily:
    """``n`` translated copies of one condition shape.

    Copy k keeps a fixed root part below w^w and moves its private part to
    the interval starting at w^w*(k+1).  The e-function is the constant top
    or a random function that is top on pairs inside one copy, on one planted
    pair of copies, and with probability ``p`` across the other copies.
    """
    t = random_tree(rng, max_nodes=5, max_height=4, empty=0.0)
    roots = list(range(rng.randint(0, 2)))
    Wr = {eta: random_subtree(rng, t) for eta in roots}
    Dr = {pair(a, b) for a, b in combinations(roots, 2) if rng.random() < 0.4}
    n_priv = rng.randint(1, 2)
    shape_seed = rng.random()
    conds, levels, blocks = [], [], []
    for k in range(n):
        level = ch_point(k + 1)
        srng = random.Random(shape_seed)
        chains = _private_chains(srng, t, level, srng.randint(1, 3))
        T = Tree.from_parents(_attach(_parents(t), chains))
        priv = [1000 + 10 * k + j for j in range(n_priv)]
        W = {eta: set(Wr[eta]) for eta in roots}
        for j in priv:
            W[j] = set(random_subtree(srng, t))
        for attach, chain in chains:
            owners = [eta for eta in roots if attach in Wr[eta]]
            r = srng.random()
            if owners and r < 0.4:
                W[srng.choice(owners)] |= set(chain)
            elif r < 0.8:
                W[srng.choice(priv)] |= set(downward_closure(T, chain))
        D = set(Dr) | {pair(priv[0], j) for j in priv[1:] if srng.random() < 0.5}
        conds.append(PStar(T, {e: frozenset(s) for e, s in W.items()}, frozenset(D)))
        levels.append(level)
        blocks.append(frozenset(priv))
    if kind == "constant-top":
        e = EFunction({}, TOP)
    elif kind == "random-high":
        table = {}
        owner = {j: k for k, b in enumerate(blocks) for j in b}
        dom = sorted(roots) + sorted(owner)
        # one pair of copies is fully separated so the weak-rho clause has a witness
        planted = set(rng.sample(range(n), 2)) if n >= 2 else set()
        for a, b in combinations(dom, 2):
            same = a in roots or b in roots or owner[a] == owner[b]
            witness = not same and {owner[a], owner[b]} == planted
            table[pair(a, b)] = TOP if same or witness or rng.random() < p else Ordinal.of(rng.randrange(3))
        e = EFunction(table, ZERO)
    else:
        raise ValueError(f"unknown e-function kind {kind!r}")
    return CopyFamily(conds, levels, e, blocks, OMEGA_OMEGA)


# models and side conditions -------------------------------------------------------------

def random_model(rng, u: Universe, deltas=(1, 2, 3), pool=None, p: float = 0.35) -> ModelSet:
    pool = range(u.size) if pool is None else pool
    picks = [s for s in pool if rng.random() < p]
    return u.close_model(ch_point(rng.choice(deltas)), picks)


def random_side(rng, u: Universe, k: int, adequate: bool = True, **kw) -> frozenset:
    A = set()
    for _ in range(6 * k + 6):
        if len(A) >= k:
            break
        m = random_model(rng, u, **kw)
        # A is already adequate, so only the pairs through m need checking
        if not adequate or (u.is_model(m) and all(u.classify(m, n) != "!" for n in A)):
            A.add(m)
    return frozenset(A)


@lru_cache(maxsize=64)
def kappa_pool(u: Universe = DEFAULT_UNIVERSE) -> tuple:
    return (
        Countable(0),
        Countable(omega_pow(1, 3)),
        Countable(ch_point(1) + 2),
        Countable(ch_point(2) + 1),
        Station(0),
        Station(5),
        Station(9),
        Station(u.size - 1),
    )


def random_pcond(rng, u: Universe = DEFAULT_UNIVERSE, max_nodes: int = 10, n_idx: int = 4, n_models: int = 3, high: float = 0.3, adequate: float = 0.8) -> PCond:
    base = random_pstar(rng, max_nodes, n_idx, pool=kappa_pool(u), high=high)
    A = random_side(rng, u, rng.randint(0, n_models), adequate=rng.random() < adequate)
    return PCond(base, A)


def valid_pcond(rng, u: Universe = DEFAULT_UNIVERSE, tries: int = 50, **kw) -> PCond:
    for _ in range(tries):
        c = random_pcond(rng, u, **kw)
        if not p_violations(c, u):
            return c
    return PCond()


def extend_pcond(rng, c: PCond, u: Universe = DEFAULT_UNIVERSE, steps: int = 3) -> PCond:
    base = extend_pstar(rng, c.base, steps, pool=kappa_pool(u))
    A = set(c.A)
    if rng.random() < 0.5:
        m = random_model(rng, u)
        if u.is_adequate(A | {m}):
            A.add(m)
    if A and rng.random() < 0.1:
        A.discard(rng.choice(sorted(A)))
    return PCond(base, frozenset(A))


# union-adequacy profile inputs --------------------------------------------------------

def _in_hull(rng, u: Universe, n: ModelSet, k: int) -> frozenset:
    """An adequate set of models in the hull of n."""
    lower = [j for j in range(1, 8) if ch_point(j) < n.delta]
    if not lower:
        return frozenset()
    A = set()
    for _ in range(4 * k + 4):
        if len(A) >= k:
            break
        m = random_model(rng, u, deltas=lower, pool=sorted(n.stations), p=0.6)
        if sk_model(n, m) and u.is_adequate(A | {m}):
            A.add(m)
    return frozenset(A)


def _below_station(rng, u: Universe, beta: int, k: int, deltas=(1, 2, 3, 4)) -> frozenset:
    A = set()
    for _ in range(4 * k + 4):
        if len(A) >= k:
            break
        m = random_model(rng, u, deltas=deltas, pool=range(beta), p=0.5)
        if u.is_adequate(A | {m}):
            A.add(m)
    return frozenset(A)


def profile_inputs(rng, u: Universe, profile: str) -> dict:
    """Inputs planted to satisfy the profile's hypotheses most of the time."""
    lam = sorted(u.lam)
    if profile == "intersection-below":
        return {"M": random_model(rng, u, deltas=(1, 2)), "N": random_model(rng, u, deltas=(2, 3, 4))}
    if profile == "add-top-model":
        n = random_model(rng, u, deltas=(3, 4), p=0.6)
        return {"A": _in_hull(rng, u, n, rng.randint(0, 3)), "N": n}
    if profile == "close-model":
        A = random_side(rng, u, rng.randint(1, 4), deltas=(1, 2, 3, 4))
        return {"A": A, "N": rng.choice(sorted(A)) if A else random_model(rng, u)}
    if profile == "close-station":
        A = random_side(rng, u, rng.randint(1, 4), deltas=(1, 2, 3, 4))
        n = rng.choice(sorted(A)) if A else None
        if n is not None:
            A = u.close_N(A, n) if u.is_adequate(u.close_N(A, n)) else A
        return {"A": A, "beta": rng.choice(lam), "N": n}
    if profile == "add-over-trace":
        beta = rng.choice(lam)
        n = random_model(rng, u, deltas=(2, 3, 4), p=0.5)
        A = set(_below_station(rng, u, beta, rng.randint(0, 3)))
        A.add(cut(n, beta))
        if not u.is_adequate(A):
            A = {cut(n, beta)}
        return {"A": frozenset(A), "N": n, "beta": beta}
    if profile == "station-cuts":
        A = random_side(rng, u, rng.randint(1, 4), deltas=(1, 2, 3, 4))
        C = set(A)
        for m in sorted(A):
            if rng.random() < 0.6:
                C.add(cut(m, rng.choice(lam)))
        return {"A": A, "C": frozenset(C)}
    if profile == "union-over-model":
        A = set(random_side(rng, u, rng.randint(1, 4), deltas=(1, 2, 3, 4)))
        n = max(A, key=lambda m: m.delta.key)
        A = u.close_N(A, n)
        inner = frozenset(m for m in A if sk_model(n, m))
        B = set(inner)
        for m in _in_hull(rng, u, n, rng.randint(0, 3)):
            if u.is_adequate(B | {m}):
                B.add(m)
        return {"A": A, "B": frozenset(B), "N": n}
    if profile == "union-over-station":
        beta = rng.choice(lam)
        A = random_side(rng, u, rng.randint(1, 4), deltas=(1, 2, 3, 4))
        A = u.close_beta(A, beta)
        inner = frozenset(m for m in A if all(s < beta for s in m.stations))
        B = set(inner)
        for m in _below_station(rng, u, beta, rng.randint(0, 3)):
            if u.is_adequate(B | {m}):
                B.add(m)
        return {"A": A, "B": frozenset(B), "beta": beta}
    if profile == "chain-union":
        sets, tops = [], [None]
        first = random_side(rng, u, rng.randint(1, 3), deltas=(1, 2))
        sets.append(first)
        for level in range(1, rng.randint(2, 3)):
            stations = set().union(*(m.stations for m in sets[-1])) | {s for s in range(u.size) if rng.random() < 0.3}
            n = u.close_model(ch_point(2 + 2 * level), stations)
            A = set(sets[-1]) | {n}
            for m in random_side(rng, u, rng.randint(0, 2), deltas=(1, 2, 3, 4, 5)):
                if u.is_adequate(A | {m}):
                    A.add(m)
            A = u.close_N(A, n)
            sets.append(frozenset(A))
            tops.append(n)
        return {"sets": sets, "models": tops}
    raise ValueError(f"unknown profile {profile!r}")


# fingerprint plants -------------------------------------------------------------------

def fp_delta(i: int) -> Ordinal:
    return ch_point(2 + 2 * i)


def fp_model(i: int, private=PLAIN_LOW) -> ModelSet:
    return ModelSet(fp_delta(i), BASE | frozenset(private[:i]))


B0 = ModelSet(ch_point(1), BASE)


@dataclass
class FingerprintPlant:
    parts: list
    models: list
    shape: dict = field(default_factory=dict)


def _fp_shape(rng, root_tree: Tree | None = None, root_W=None, root_D=frozenset(), root_A=frozenset()):
    t = root_tree if root_tree is not None else random_tree(rng, max_nodes=5, max_height=4, empty=0.0)
    if root_W is None:
        roots = sorted(rng.sample([Countable(0), Countable(OMEGA), Countable(omega_pow(1, 2) + 1)], rng.randint(0, 2)))
        roots += [Station(s) for s in sorted(rng.sample(sorted(BASE), rng.randint(0, 2)))]
        root_W = {eta: random_subtree(rng, t) for eta in roots}
        root_D = frozenset(pair(a, b) for a, b in combinations(roots, 2) if rng.random() < 0.4)
    return {
        "t": t,
        "W": dict(root_W),
        "D": frozenset(root_D),
        "A": frozenset(root_A),
        "n_count": rng.randint(0, 2),
        "use_station": rng.random() < 0.7,
        "seed": rng.random(),
        "own": True,
    }


def fp_part(shape: dict, i: int, private=PLAIN_LOW, extra_leaf: bool = False) -> PCond:
    """Part i of a fingerprint plant from a shared shape."""
    srng = random.Random(shape["seed"])
    t, delta = shape["t"], fp_delta(i)
    chains = _private_chains(srng, t, delta, srng.randint(1, 3))
    T = Tree.from_parents(_attach(_parents(t), chains))
    roots = sorted(shape["W"])
    W = {eta: set(sub) for eta, sub in shape["W"].items()}
    priv = [Countable(delta + c) for c in range(1, shape["n_count"] + 1)]
    if shape["use_station"]:
        priv.append(Station(private[i]))
    for e in priv:
        W[e] = set(random_subtree(srng, t, 0.3))
    for attach, chain in chains:
        owners = [eta for eta in roots if attach in shape["W"][eta]]
        r = srng.random()
        if not shape["own"]:
            continue
        if owners and r < 0.4:
            W[srng.choice(owners)] |= set(chain)
        elif priv and r < 0.8:
            W[srng.choice(priv)] |= set(downward_closure(T, chain))
    if extra_leaf and chains:
        top = chains[0][1][-1]
        leaf = node_at(h_of(top) + 1, 9)
        T = add_leaf(T, top, leaf)
    D = set(shape["D"])
    dom = roots + priv
    for a in priv:
        for b in dom:
            if a != b and srng.random() < 0.3:
                D.add(pair(a, b))
    side = ModelSet(ch_point(1), BASE | {private[i]})
    A = frozenset({fp_model(i, private), B0, side}) | shape["A"]
    return PCond(PStar(T, {e: frozenset(s) for e, s in W.items()}, frozenset(D)), A)


def plant_fingerprint_family(rng, d: int, **shape_kw) -> FingerprintPlant:
    if not 1 <= d <= 3:
        raise ValueError("fingerprint plants support 1 <= d <= 3")
    shape = _fp_shape(rng, **shape_kw)
    parts = [fp_part(shape, i, extra_leaf=rng.random() < 0.3) for i in range(d)]
    return FingerprintPlant(parts, [fp_model(i) for i in range(d)], shape)


# clause-violation plants for amalgamation over models -----------------------------------

def plant_violation(rng, clause: str):
    """A two-part input to amalgamate_models (or amalgamate_fingerprint for
    ``fingerprint``) that breaks exactly the named clause.

    Returns (parts, models, f, g) or None when the random shape cannot host
    the violation."""
    from .side import index_maps

    fam = plant_fingerprint_family(rng, 2)
    parts, models = fam.parts, fam.models
    f, g = index_maps(parts)
    p0, p1 = parts
    if clause == "hull-nesting":
        return [p1, p0], [models[1], models[0]], *index_maps([p1, p0])
    if clause == "(1)":
        extra = node_at(rng.randint(1, 4), 8)
        T = add_leaf(p1.T, ZERO, extra)
        return [p0, PCond(PStar(T, p1.W, p1.D), p1.A)], models, f, g
    if clause == "(2)":
        inside = [e for e in sorted(p1.W) if e in fam.shape["W"]]
        if len(inside) < 2:
            return None
        a, b = inside[:2]
        f = {(1, 0): {**f[(1, 0)], a: b, b: a}}
        return parts, models, f, g
    if clause == "(3)":
        if not fam.shape["use_station"]:
            return None
        side1 = ModelSet(ch_point(1), BASE | {PLAIN_LOW[1]})
        gm = dict(g[(1, 0)])
        gm[side1], gm[B0] = B0, gm[side1]
        return parts, models, f, {(1, 0): gm}
    if clause == "(4)":
        roots = sorted(fam.shape["W"])
        for eta in roots:
            spare = [x for x in sorted(fam.shape["t"].nodes) if x not in p1.W[eta]]
            if spare:
                W = dict(p1.W)
                W[eta] = W[eta] | downward_closure(p1.T, [spare[0]])
                bad = PCond(PStar(p1.T, W, p1.D), p1.A)
                if not p_violations(bad, DEFAULT_UNIVERSE):
                    return [p0, bad], models, f, g
        return None
    if clause == "fingerprint":
        if not fam.shape["use_station"]:
            return None
        last = fp_part(fam.shape, 1, private=(PLAIN_LOW[0], PLAIN_MID[0]))
        last = PCond(last.base, frozenset(m for m in last.A if m.stations != BASE | {PLAIN_MID[0]}) | {ModelSet(ch_point(1), BASE | {PLAIN_LOW[1]})})
        return [p0, last], models, f, g
    raise ValueError(f"no violation plant for clause {clause!r}")


VIOLATION_CLAUSES = ("hull-nesting", "(1)", "(2)", "(3)", "(4)", "fingerprint")


# reflection plants ------------------------------------------------------------------------

@dataclass
class ReflectionPlant:
    q: PCond
    n: ModelSet
    solvable: bool


def plant_reflection(rng, u: Universe = DEFAULT_UNIVERSE, starve: bool = False) -> ReflectionPlant:
    """A condition whose part above the model has a copy inside the model's hull.

    Private stations come from the high plain stations and have free plain
    targets inside the model; private countables sit at or above its trace.
    ``starve`` removes the room for a copy."""
    k = rng.choice((4, 5, 6))
    n_stations = BASE if starve else BASE | set(PLAIN_LOW)
    n = ModelSet(ch_point(2 if starve and rng.random() < 0.5 else k), frozenset(n_stations))
    delta = n.delta
    t = random_tree(rng, max_nodes=5, max_height=4, empty=0.0)
    roots = sorted(rng.sample([Countable(0), Countable(OMEGA), Countable(omega_pow(1, 2) + 1)], rng.randint(0, 2)))
    roots += [Station(s) for s in sorted(rng.sample(sorted(BASE), rng.randint(0, 2)))]
    n_st = rng.randint(1 if starve else 0, 2)
    priv = [Countable(delta + c) for c in range(1, rng.randint(0, 2) + 1)]
    priv += [Station(s) for s in PLAIN_MID[:n_st]]
    chains = _private_chains(rng, t, delta, rng.randint(1, 3))
    T = Tree.from_parents(_attach(_parents(t), chains))
    W = {eta: set(random_subtree(rng, t)) for eta in roots}
    for e in priv:
        W[e] = set(random_subtree(rng, t, 0.3))
    for attach, chain in chains:
        owners = [eta for eta in roots if attach in W[eta]] + priv
        if owners and rng.random() < 0.8:
            e = rng.choice(owners)
            W[e] |= set(downward_closure(T, chain))
    dom = roots + priv
    D = frozenset(pair(a, b) for a, b in combinations(dom, 2) if rng.random() < 0.3)
    A = {n, B0}
    if n_st:
        A.add(ModelSet(ch_point(1), BASE | {PLAIN_MID[0]}))
    q = PCond(PStar(T, {e: frozenset(s) for e, s in W.items()}, D), frozenset(A))
    q = PCond(q.base, u.close_N(q.A, n))
    return ReflectionPlant(q, n, not starve)


def free_reflection(rng, u: Universe = DEFAULT_UNIVERSE) -> ReflectionPlant | None:
    """A random condition with a random model of it; solvability unknown."""
    c = valid_pcond(rng, u)
    if not c.A:
        return None
    n = max(c.A)
    A = u.close_N(c.A, n)
    q = PCond(c.base, A)
    if p_violations(q, u):
        return None
    return ReflectionPlant(q, n, False)


# mirror plants below a cut station -----------------------------------------------------------

@dataclass
class MirrorPlant:
    q: PCond
    theta: int
    n: ModelSet | None
    solvable: bool


def plant_mirror(rng, u: Universe = DEFAULT_UNIVERSE, theta: int = THETA, starve: bool = False, with_model: bool = False) -> MirrorPlant:
    """A condition using stations above theta that have attribute-matched free
    stations below it; ``starve`` uses more high stations than there is room for."""
    used_low = sorted(rng.sample(PLAIN_LOW, rng.randint(0, 2)))
    if starve:
        used_low += [PLAIN_MID[0]]
        high = list(PLAIN_HIGH)
    elif rng.random() < 0.2:
        high = [u.size - 1]
    else:
        high = sorted(rng.sample(PLAIN_HIGH, rng.randint(1, 3)))
    t = random_tree(rng, max_nodes=7, max_height=4, high=0.3, empty=0.0)
    low_idx = [Countable(0), Countable(ch_point(1) + 1)] + [Station(s) for s in sorted(BASE)[:2]] + [Station(s) for s in used_low]
    idx = sorted(rng.sample(low_idx, rng.randint(0, 3))) + [Station(s) for s in high]
    W = {e: random_subtree(rng, t, 0.3) for e in idx}
    D = frozenset(pair(a, b) for a, b in combinations(idx, 2) if rng.random() < 0.3)
    A = set()
    stations = BASE | set(used_low) | set(high[:1])
    n = u.close_model(ch_point(rng.choice((2, 3))), stations)
    A.add(n)
    if rng.random() < 0.6:
        A.add(u.close_model(ch_point(1), BASE | set(used_low)))
    q = PCond(PStar(t, W, D), frozenset(A))
    if p_violations(q, u):
        # keep only the parts below the smallest trace, which cannot clash
        low = min(m.delta for m in A)
        W = {e: frozenset(x for x in sub if x < low) for e, sub in W.items()}
        q = PCond(PStar(t, W, D), frozenset(A))
    return MirrorPlant(q, theta, n if with_model else None, not starve)


# projection plants ------------------------------------------------------------------------

def extend_in_theta(rng, s: PCond, theta: int = THETA, u: Universe = DEFAULT_UNIVERSE, steps: int = 3,
                    pool=None) -> PCond:
    """A random extension that stays inside the hull of theta when it validates.

    New models draw stations from ``pool`` (default: everything below theta).
    """
    pool = range(theta) if pool is None else pool
    base = s.base
    T, W, D = base.T, dict(base.W), set(base.D)
    A = set(s.A)
    for _ in range(steps):
        kind = rng.randrange(4)
        if kind == 0 and T.nodes:
            par = rng.choice(sorted(T.nodes))
            y = node_at(h_of(par) + rng.randint(1, 2), rng.randrange(5) + 4)
            if y not in T.nodes:
                T = add_leaf(T, par, y)
        elif kind == 1 and W and T.nodes:
            eta = rng.choice(sorted(W))
            cand = W[eta] | downward_closure(T, [rng.choice(sorted(T.nodes))])
            trial = PCond(PStar(T, {**W, eta: cand}, frozenset(D)), frozenset(A))
            if not p_violations(trial, u):
                W[eta] = cand
        elif kind == 2:
            m = random_model(rng, u, deltas=(1, 2, 3, 4), pool=pool)
            if u.is_adequate(A | {m}):
                trial = PCond(PStar(T, W, frozenset(D)), frozenset(A | {m}))
                if not p_violations(trial, u):
                    A.add(m)
        elif len(W) >= 2:
            a, b = rng.sample(sorted(W), 2)
            D.add(pair(a, b))
    return PCond(PStar(T, W, frozenset(D)), frozenset(A))


# quotient scenarios ------------------------------------------------------------------------

@dataclass
class ConverseScenario:
    generator_models: tuple
    p: PCond
    clash: tuple


def plant_converse_counterexample(rng, u: Universe = DEFAULT_UNIVERSE, theta: int = THETA) -> ConverseScenario:
    """A model M below theta in the filter and a model N reaching above theta
    that is not comparable with M; p carries only N."""
    for _ in range(2000):
        m = random_model(rng, u, deltas=(1, 2, 3), pool=range(theta), p=0.5)
        n = random_model(rng, u, deltas=(1, 2, 3), p=0.5)
        if all(s < theta for s in n.stations):
            continue
        if u.classify(m, n) == "!":
            return ConverseScenario((m,), PCond(PStar(), frozenset({n})), (m, n))
    raise RuntimeError("no clashing pair found")


CONVERSE_EXAMPLE = ConverseScenario(
    (ModelSet(ch_point(3), BASE | {5}),),
    PCond(PStar(), frozenset({ModelSet(ch_point(2), BASE | {5, 6, 13})})),
    (ModelSet(ch_point(3), BASE | {5}), ModelSet(ch_point(2), BASE | {5, 6, 13})),
)


@dataclass
class PoolScenario:
    happrox: object
    pools: list
    parts: list
    models: list
    collide: bool


def filter_for(rng, roots, models=(), theta: int = THETA, u: Universe = DEFAULT_UNIVERSE, height: int = 3):
    from .quotient import FilterConfig, simulate_ptheta_filter

    pairs = tuple((a, b) for a, b in combinations(roots, 2) if rng.random() < 0.5)
    sim = SimConfig(indices=tuple(roots), height=height, pairs=pairs, seed=rng.randrange(10**6))
    return simulate_ptheta_filter(FilterConfig(theta, sim, tuple(models)), u)


def plant_quotient_pools(rng, d: int, collide: bool = False, theta: int = THETA, u: Universe = DEFAULT_UNIVERSE, side_model: ModelSet | None = None) -> PoolScenario:
    """Fingerprint-matched candidates whose private nodes also lie in the
    filter tree.  With ``collide`` the private chains of consecutive
    candidates are stacked on one branch of that tree."""
    roots = sorted(rng.sample([Countable(0), Countable(OMEGA), Countable(omega_pow(1, 2) + 1)], rng.randint(1, 2)))
    models = (B0,) + ((side_model,) if side_model is not None else ())
    fa = filter_for(rng, roots, models, theta, u)
    g0 = fa.generator
    shape = _fp_shape(rng, root_tree=g0.T, root_W=g0.W, root_D=g0.D, root_A=frozenset({B0}))
    shape["own"] = not collide
    count = 3
    parts = [fp_part(shape, i) for i in range(count)]
    parents = _parents(g0.T)
    # every part attaches its chains at the same points of the filter tree
    tops = {}
    for p in parts:
        priv = sorted(x for x in p.T.nodes if x not in g0.T.nodes)
        here = {}
        for x in priv:
            par = p.T.parent(x)
            if par in g0.T.nodes:
                if collide and par in tops:
                    par = tops[par]
                here.setdefault(p.T.parent(x), max(y for y in priv if p.T.le(x, y)))
            parents[x] = par
        tops.update(here)
    T_H = Tree.from_parents(parents)
    g = PCond(PStar(T_H, g0.W, g0.D), g0.A)
    fa = fa.with_generator(g)
    pools = [[(parts[i], fp_model(i))] for i in range(count)]
    pools = [sum(pools[j::d], []) for j in range(d)]
    return PoolScenario(fa, pools, parts, [fp_model(i) for i in range(count)], collide)


@dataclass
class AddModelScenario:
    happrox: object
    p: PCond
    n: ModelSet


def plant_add_model(rng, theta: int = THETA, u: Universe = DEFAULT_UNIVERSE) -> AddModelScenario:
    """A quotient member p in the hull of a model N reaching theta whose
    trace below theta sits in the filter."""
    top = rng.choice((8, 9, 10))
    k = u.close_model(ch_point(top), BASE | set(PLAIN_LOW[: rng.randint(1, 3)]))
    n = u.close_model(k.delta, k.stations | {theta})
    scen = plant_quotient_pools(rng, 2, side_model=k, theta=theta, u=u)
    return AddModelScenario(scen.happrox, scen.parts[0], n)

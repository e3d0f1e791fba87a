"""Instance kinds for ``gen`` and the validity check each instance must pass."""

from __future__ import annotations

from itertools import combinations

from .ccc import find_compatible_pair, validate_pprime
from .generators import (
    make_rng,
    plant_copy_family,
    plant_fingerprint_family,
    plant_quotient_pools,
    plant_split_family,
    random_pstar,
    random_tree,
    valid_pcond,
)
from .pstar import is_delta_system, split_failures, violations
from .quotient import fingerprint_theta, quotient_membership
from .side import fingerprint_diff, fingerprint_w, p_violations
from .trees import validate_tree
from .universe import DEFAULT_UNIVERSE, random_universe

KINDS = ("tree", "pstar", "split-family", "pprime", "model-universe", "p", "fingerprint-pool", "quotient-scenario")


def _make(kind: str, rng):
    if kind == "tree":
        return random_tree(rng, max_nodes=12)
    if kind == "pstar":
        return random_pstar(rng, pool=range(8))
    if kind == "split-family":
        return plant_split_family(rng, rng.choice((2, 3, 4)))
    if kind == "pprime":
        return plant_copy_family(rng, 8, rng.choice(("constant-top", "random-high")))
    if kind == "model-universe":
        return random_universe(rng.randint(6, 17), rng.randrange(10**6))
    if kind == "p":
        return valid_pcond(rng)
    if kind == "fingerprint-pool":
        return plant_fingerprint_family(rng, rng.choice((1, 2, 3)))
    if kind == "quotient-scenario":
        return plant_quotient_pools(rng, 2)
    raise ValueError(f"unknown kind {kind!r}")


def instance_failures(kind: str, x, u=DEFAULT_UNIVERSE) -> list[str]:
    """Why ``x`` is not a well-formed instance of ``kind`` (empty when it is)."""
    if kind == "tree":
        return [] if validate_tree(x).is_standard else ["tree: not standard"]
    if kind == "pstar":
        return [f"pstar: {v}" for v in violations(x)]
    if kind == "split-family":
        out = [f"part {k}: {v}" for k, c in enumerate(x.parts) for v in violations(c)]
        for i, j in combinations(range(len(x.parts)), 2):
            out += [f"split {i},{j}: {v}" for v in split_failures(x.parts[i], x.parts[j], x.deltas[i], x.deltas[j])]
        if not is_delta_system([c.dom for c in x.parts])[0]:
            out.append("delta-system: domains")
        return out
    if kind == "pprime":
        out = [f"copy {k}: {v}" for k, c in enumerate(x.conds) for v in validate_pprime(c, x.e)[1]]
        if not out and not find_compatible_pair(x.conds, x.e, x.levels).ok:
            out.append("pprime: no compatible pair")
        return out
    if kind == "model-universe":
        return []
    if kind == "p":
        return [f"p: {v}" for v in p_violations(x, u)]
    if kind == "fingerprint-pool":
        out = [f"part {k}: {v}" for k, c in enumerate(x.parts) for v in p_violations(c, u)]
        if out:
            return out
        prints = [fingerprint_w(c, n, u) for c, n in zip(x.parts, x.models)]
        for i, j in combinations(range(len(prints)), 2):
            diff = fingerprint_diff(prints[i], prints[j])
            if diff:
                out.append(f"fingerprint {i},{j}: {', '.join(diff)}")
        return out
    if kind == "quotient-scenario":
        fa = x.happrox
        cands = [cn for pool in x.pools for cn in pool]
        out = []
        prints = {fingerprint_theta(c, n, fa.theta, fa.universe) for c, n in cands}
        if len(prints) > 1:
            out.append("quotient: pools are not fingerprint-matched")
        for k, (c, _) in enumerate(cands):
            if not quotient_membership(c, fa).member:
                out.append(f"quotient: candidate {k} is not in the quotient")
        return out
    raise ValueError(f"unknown kind {kind!r}")


def generate(kind: str, count: int, seed) -> list:
    """``count`` validated instances of ``kind``; invalid draws are redrawn."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    rng = make_rng(seed, "gen", kind)
    out = []
    for _ in range(50 * count + 50):
        if len(out) >= count:
            break
        x = _make(kind, rng)
        if not instance_failures(kind, x):
            out.append(x)
    if len(out) < count:
        raise RuntimeError(f"could not draw {count} valid {kind} instances")
    return out

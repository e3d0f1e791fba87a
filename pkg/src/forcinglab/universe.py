"""A finite surrogate for the side-condition universe.

Indices below kappa are either countable ordinals or *stations*, finitely
many uncountable ordinals above all countable ones.  A model is recorded by
its countable trace (an initial segment ``delta`` in C_h) and the finite set
of stations it contains.  Skolem-hull membership is decided by support.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import total_ordering
from itertools import combinations

from .ordinals import ZERO, Ordinal, ch_point, is_in_Ch


@total_ordering
class KappaOrdinal:
    __slots__ = ()

    def sort_key(self):
        raise NotImplementedError

    def __lt__(self, other):
        return self.sort_key() < _kappa_key(other)

    def __eq__(self, other):
        return isinstance(other, KappaOrdinal) and self.sort_key() == other.sort_key()

    def __hash__(self):
        return hash(self.sort_key())


def _kappa_key(x):
    if isinstance(x, KappaOrdinal):
        return x.sort_key()
    if isinstance(x, int):
        return (0, Ordinal.of(x).key)
    raise TypeError(f"not an index: {x!r}")


class Countable(KappaOrdinal):
    __slots__ = ("alpha",)

    def __init__(self, alpha):
        if isinstance(alpha, int):
            alpha = Ordinal.of(alpha)
        self.alpha = alpha

    def sort_key(self):
        return (0, self.alpha.key)

    def __repr__(self):
        return f"c{self.alpha}"


class Station(KappaOrdinal):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index

    def sort_key(self):
        return (1, self.index)

    def __repr__(self):
        return f"s{self.index}"


@dataclass(frozen=True)
class ModelSet:
    delta: Ordinal
    stations: frozenset = frozenset()

    def sort_key(self):
        return (self.delta.key, tuple(sorted(self.stations)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"M({self.delta}; {sorted(self.stations)})"


def model(k_or_delta, stations=()) -> ModelSet:
    d = ch_point(k_or_delta) if isinstance(k_or_delta, int) else k_or_delta
    return ModelSet(d, frozenset(stations))


class UniverseError(ValueError):
    pass


@dataclass(frozen=True)
class Universe:
    """Stations ``0..size-1`` with attribute sets.

    ``lam`` stations must have uncountable cofinality and at least two
    ``lambda0`` stations below them.
    """

    size: int
    lambda0: frozenset
    lam: frozenset
    sigma: frozenset
    cof: frozenset = None

    def __post_init__(self):
        if self.cof is None:
            object.__setattr__(self, "cof", frozenset(self.lam))
        if self.size <= 0:
            raise UniverseError("universe needs at least one station")
        if not self.lam:
            raise UniverseError("no limit stations")
        if not self.sigma:
            raise UniverseError("no cut stations")
        for s in self.lambda0 | self.lam | self.sigma | self.cof:
            if not 0 <= s < self.size:
                raise UniverseError(f"station {s} out of range")
        if not self.sigma <= self.lam:
            raise UniverseError("cut stations must be limit stations")
        for s in self.lam:
            if s not in self.cof:
                raise UniverseError(f"limit station {s} needs uncountable cofinality")
            if sum(1 for t in self.lambda0 if t < s) < 2:
                raise UniverseError(f"limit station {s} has fewer than two base stations below")
        below = tuple(max((t for t in self.lambda0 if t < s), default=None) for s in range(self.size))
        object.__setattr__(self, "_below", below)

    # models ----------------------------------------------------------------

    def lambda0_below(self, s: int):
        if 0 <= s < self.size:
            return self._below[s]
        below = [t for t in self.lambda0 if t < s]
        return max(below) if below else None

    def is_model(self, m: ModelSet) -> bool:
        if not (m.delta > ZERO and is_in_Ch(m.delta)):
            return False
        for s in m.stations:
            if not 0 <= s < self.size:
                return False
            t = self.lambda0_below(s)
            if t is not None and t not in m.stations:
                return False
        return True

    def close_model(self, delta: Ordinal, stations) -> ModelSet:
        """Smallest model with the given trace containing ``stations``."""
        out = set(stations)
        todo = list(out)
        while todo:
            t = self.lambda0_below(todo.pop())
            if t is not None and t not in out:
                out.add(t)
                todo.append(t)
        return ModelSet(delta, frozenset(out))

    def comparison_point(self, m: ModelSet, n: ModelSet) -> int:
        common = m.stations & n.stations
        cands = sorted(s for s in self.lam if not common or s > max(common))
        # with no limit station above the overlap, kappa itself (index size) plays that role
        return cands[0] if cands else self.size

    def classify(self, m: ModelSet, n: ModelSet) -> str:
        """'<', '>', '~' or '!' for the pair (m, n)."""
        b = self.comparison_point(m, n)
        mb, nb = cut(m, b), cut(n, b)
        if sk_model(n, mb):
            return "<"
        if sk_model(m, nb):
            return ">"
        if mb == nb:
            return "~"
        return "!"

    def adequacy(self, A) -> tuple[bool, dict]:
        A = sorted(A)
        table = {}
        ok = True
        for m, n in combinations(A, 2):
            c = self.classify(m, n)
            table[(m, n)] = c
            if c == "!":
                ok = False
        return ok, table

    def is_adequate(self, A) -> bool:
        return all(self.is_model(m) for m in A) and self.adequacy(A)[0]

    def close_N(self, A, n: ModelSet) -> frozenset:
        A = frozenset(A)
        if n not in A:
            raise ValueError("model not in the set")
        extra = {meet(m, n) for m in A if m.delta < n.delta and self.classify(m, n) == "<"}
        return A | extra

    def close_beta(self, A, beta: int) -> frozenset:
        if beta not in self.lam:
            raise ValueError(f"station {beta} is not a limit station")
        A = frozenset(A)
        return A | {cut(m, beta) for m in A}

    def next_limit(self, s: int) -> int:
        above = [t for t in self.lam if t > s]
        return min(above) if above else self.size

    def attributes(self, s: int) -> tuple:
        return (s in self.lambda0, s in self.lam, s in self.cof, s in self.sigma)

    def preserves_pattern(self, smap: dict, used) -> bool:
        """Whether moving stations by ``smap`` (identity elsewhere) keeps every
        model and every comparison among models built from ``used`` intact."""
        used = sorted(set(used) | set(smap))
        img = {s: smap.get(s, s) for s in used}
        if len(set(img.values())) != len(img):
            return False
        for s in smap:
            if self.attributes(s) != self.attributes(img[s]):
                return False
            low = self.lambda0_below(s)
            if self.lambda0_below(img[s]) != img.get(low, low):
                return False
        for x, y in combinations(used, 2):
            if not img[x] < img[y]:
                return False
        for x in used:
            for y in used:
                if (y < self.next_limit(x)) != (img[y] < self.next_limit(img[x])):
                    return False
        return True

    def is_N_closed(self, A, n: ModelSet) -> bool:
        return all(meet(m, n) in A for m in A if m.delta < n.delta)

    def is_beta_closed(self, A, beta: int) -> bool:
        return all(cut(m, beta) in A for m in A)

    # configuration ---------------------------------------------------------

    def to_config(self) -> dict:
        return {
            "stations": self.size,
            "lambda0": sorted(self.lambda0),
            "lambda": sorted(self.lam),
            "sigma": sorted(self.sigma),
            "cof": sorted(self.cof),
        }


def build_universe(config: dict) -> Universe:
    if "seed" in config and "lambda" not in config:
        return random_universe(config.get("stations", 8), config["seed"])
    return Universe(
        size=config["stations"],
        lambda0=frozenset(config.get("lambda0", ())),
        lam=frozenset(config.get("lambda", ())),
        sigma=frozenset(config.get("sigma", ())),
        cof=frozenset(config["cof"]) if "cof" in config else None,
    )


def random_universe(size: int, seed: int) -> Universe:
    rng = random.Random(seed)
    if size < 3:
        raise UniverseError("random universes need at least three stations")
    while True:
        lambda0 = frozenset(s for s in range(size) if rng.random() < 0.6) | {0, 1}
        lam = frozenset(s for s in range(2, size) if rng.random() < 0.5 and sum(t < s for t in lambda0) >= 2)
        if lam:
            break
    sigma = frozenset(s for s in lam if rng.random() < 0.5) or frozenset({max(lam)})
    return Universe(size, lambda0, lam, sigma)


DEFAULT_UNIVERSE = Universe(
    size=17,
    lambda0=frozenset({0, 1, 2, 3}),
    lam=frozenset({4, 8, 12, 16}),
    sigma=frozenset({12}),
)


# intersections -----------------------------------------------------------

def cut(m: ModelSet, beta: int) -> ModelSet:
    """The model m intersected with the station beta."""
    return ModelSet(m.delta, frozenset(s for s in m.stations if s < beta))


def meet(m: ModelSet, n: ModelSet) -> ModelSet:
    return ModelSet(min(m.delta, n.delta), m.stations & n.stations)


def contains(m: ModelSet, x) -> bool:
    """Membership of a single atom (index or ordinal) in the model."""
    if isinstance(x, Station):
        return x.index in m.stations
    if isinstance(x, Countable):
        return x.alpha < m.delta
    if isinstance(x, Ordinal):
        return x < m.delta
    if isinstance(x, int):
        return Ordinal.of(x) < m.delta
    raise TypeError(f"not an atom: {x!r}")


def sk_model(n: ModelSet, m: ModelSet) -> bool:
    return m.delta < n.delta and m.stations <= n.stations


# support hulls -----------------------------------------------------------

def support(obj, out=None):
    """Countable atoms (as Ordinals) and station indices of an object."""
    if out is None:
        out = (set(), set())
    cs, ss = out
    if obj is None or isinstance(obj, (str, bool)):
        return out
    if isinstance(obj, Ordinal):
        cs.add(obj)
    elif isinstance(obj, Countable):
        cs.add(obj.alpha)
    elif isinstance(obj, Station):
        ss.add(obj.index)
    elif isinstance(obj, int):
        cs.add(Ordinal.of(obj))
    elif isinstance(obj, ModelSet):
        cs.add(obj.delta)
        ss.update(obj.stations)
    elif isinstance(obj, dict):
        for k, v in obj.items():
            support(k, out)
            support(v, out)
    elif isinstance(obj, (tuple, list, set, frozenset)):
        for v in obj:
            support(v, out)
    elif hasattr(obj, "support_items"):
        for v in obj.support_items():
            support(v, out)
    else:
        raise TypeError(f"no support for {type(obj).__name__}")
    return out


@dataclass(frozen=True)
class Cut:
    """The hull of a station, standing for Sk(theta)."""

    station: int


def sk_contains(n, obj) -> bool:
    cs, ss = support(obj)
    if isinstance(n, Cut):
        return all(s < n.station for s in ss)
    if isinstance(n, int):
        return all(s < n for s in ss)
    return all(c < n.delta for c in cs) and ss <= n.stations


# union adequacy profiles ---------------------------------------------------

PROFILES = (
    "intersection-below",   # M < N gives M & N = M cut at the comparison point
    "add-top-model",        # A inside Sk(N) plus N
    "close-model",          # N-closure
    "close-station",        # beta-closure, keeping N-closure
    "add-over-trace",       # A inside Sk(beta) with N cut at beta in A, plus N
    "station-cuts",         # adequate A plus cuts of its members
    "union-over-model",     # A N-closed, A & Sk(N) <= B <= Sk(N)
    "union-over-station",   # A beta-closed, A & Sk(beta) <= B <= Sk(beta)
    "chain-union",          # finite chain of such unions
)


@dataclass
class Verdict:
    profile: str
    hypotheses: bool
    conclusion: bool | None
    detail: str = ""

    @property
    def counterexample(self) -> bool:
        return self.hypotheses and self.conclusion is False


def union_adequacy_check(u: Universe, profile: str, inputs: dict) -> Verdict:
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    check = _PROFILE_CHECKS[profile]
    hyp, concl, detail = check(u, inputs)
    return Verdict(profile, hyp, concl if hyp else None, detail)


def _models_ok(u, A):
    return all(u.is_model(m) for m in A)


def _p_intersection(u, x):
    m, n = x["M"], x["N"]
    A = {m, n}
    if not (_models_ok(u, A) and u.is_adequate(A) and u.classify(m, n) == "<"):
        return False, None, ""
    b = u.comparison_point(m, n)
    ok = meet(m, n) == cut(m, b) and sk_model(n, meet(m, n))
    return True, ok, f"beta=s{b}"


def _p_add_top(u, x):
    A, n = frozenset(x["A"]), x["N"]
    if not (u.is_adequate(A) and u.is_model(n) and all(sk_model(n, m) for m in A)):
        return False, None, ""
    return True, u.is_adequate(A | {n}), ""


def _p_close_model(u, x):
    A, n = frozenset(x["A"]), x["N"]
    if not (u.is_adequate(A) and n in A):
        return False, None, ""
    C = u.close_N(A, n)
    return True, u.is_adequate(C) and u.is_N_closed(C, n) and u.close_N(C, n) == C, ""


def _p_close_station(u, x):
    A, b = frozenset(x["A"]), x["beta"]
    n = x.get("N")
    if not (u.is_adequate(A) and b in u.lam):
        return False, None, ""
    C = u.close_beta(A, b)
    ok = u.is_adequate(C) and u.is_beta_closed(C, b) and u.close_beta(C, b) == C
    if n is not None and n in A and u.is_N_closed(A, n):
        ok = ok and u.is_N_closed(C, n)
    return True, ok, ""


def _p_add_over_trace(u, x):
    A, n, b = frozenset(x["A"]), x["N"], x["beta"]
    hyp = (
        b in u.lam
        and u.is_adequate(A)
        and all(sk_contains(Cut(b), m) for m in A)
        and u.is_model(n)
        and cut(n, b) in A
    )
    if not hyp:
        return False, None, ""
    return True, u.is_adequate(A | {n}), ""


def _p_station_cuts(u, x):
    A, C = frozenset(x["A"]), frozenset(x["C"])
    hyp = u.is_adequate(A) and A <= C and _models_ok(u, C)
    if hyp:
        for k in C - A:
            if not any(cut(m, b) == k for m in A for b in u.lam):
                hyp = False
                break
    if not hyp:
        return False, None, ""
    return True, u.is_adequate(C), ""


def _p_union_model(u, x):
    A, B, n = frozenset(x["A"]), frozenset(x["B"]), x["N"]
    hyp = (
        u.is_adequate(A)
        and n in A
        and u.is_N_closed(A, n)
        and u.is_adequate(B)
        and all(sk_model(n, m) for m in B)
        and all(m in B for m in A if sk_model(n, m))
    )
    if not hyp:
        return False, None, ""
    return True, u.is_adequate(A | B), ""


def _p_union_station(u, x):
    A, B, b = frozenset(x["A"]), frozenset(x["B"]), x["beta"]
    hyp = (
        b in u.lam
        and u.is_adequate(A)
        and u.is_beta_closed(A, b)
        and u.is_adequate(B)
        and all(sk_contains(Cut(b), m) for m in B)
        and all(m in B for m in A if sk_contains(Cut(b), m))
    )
    if not hyp:
        return False, None, ""
    return True, u.is_adequate(A | B), ""


def _p_chain(u, x):
    sets = [frozenset(s) for s in x["sets"]]
    tops = x["models"]
    hyp = len(sets) >= 2 and all(u.is_adequate(s) for s in sets)
    for i in range(1, len(sets)):
        if not hyp:
            break
        n = tops[i]
        hyp = (
            n in sets[i]
            and u.is_N_closed(sets[i], n)
            and all(m in sets[i - 1] for m in sets[i] if sk_model(n, m))
            and all(sk_model(n, m) for m in sets[i - 1])
        )
    if not hyp:
        return False, None, ""
    return True, u.is_adequate(frozenset().union(*sets)), ""


_PROFILE_CHECKS = {
    "intersection-below": _p_intersection,
    "add-top-model": _p_add_top,
    "close-model": _p_close_model,
    "close-station": _p_close_station,
    "add-over-trace": _p_add_over_trace,
    "station-cuts": _p_station_cuts,
    "union-over-model": _p_union_model,
    "union-over-station": _p_union_station,
    "chain-union": _p_chain,
}

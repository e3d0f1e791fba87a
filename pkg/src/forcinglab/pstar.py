"""Conditions (T, W, D): a tree, finitely many downward-closed subtrees, and
committed pairs of subtree indices."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .ordinals import ZERO, Ordinal, h_of, is_in_Ch
from .trees import (
    EMPTY_TREE,
    Tree,
    downward_closure,
    fresh_node,
    insert_below,
    is_downward_closed_in,
    is_end_extension,
    restrict,
    tree_oplus,
    validate_tree,
)


class HypothesisViolation(ValueError):
    """An amalgamation was requested on inputs that miss a stated hypothesis."""

    def __init__(self, clause: str, detail: str = ""):
        super().__init__(f"hypothesis {clause} fails: {detail}" if detail else f"hypothesis {clause} fails")
        self.clause = clause
        self.detail = detail


def pair(a, b) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True, eq=True)
class PStar:
    T: Tree = EMPTY_TREE
    W: dict = field(default_factory=dict)
    D: frozenset = frozenset()

    def __hash__(self):
        return hash((self.T, frozenset(self.W.items()), self.D))

    def w(self, eta) -> frozenset:
        return self.W.get(eta, frozenset())

    @property
    def dom(self) -> frozenset:
        return frozenset(self.W)

    def support_items(self):
        return (self.T.nodes, tuple(self.W), tuple(self.W.values()), self.D)


EMPTY = PStar()


@dataclass(frozen=True)
class Certificate:
    """Record of the hypothesis clauses checked before returning an amalgam."""

    checked: tuple
    notes: tuple = ()


def make(T: Tree, W: dict | None = None, D=()) -> PStar:
    return PStar(T, {k: frozenset(v) for k, v in (W or {}).items()}, frozenset(frozenset(d) for d in D))


def violations(c: PStar) -> list[str]:
    out = []
    rep = validate_tree(c.T)
    if not rep.is_standard:
        out.append("tree is not a standard finite tree")
    for eta, sub in c.W.items():
        if not sub <= c.T.nodes:
            out.append(f"W({eta}) is not a subset of T")
        elif not is_downward_closed_in(c.T, sub):
            out.append(f"W({eta}) is not downwards closed")
    for d in c.D:
        if len(d) != 2:
            out.append(f"D entry {set(d)} is not a pair")
        elif not d <= c.dom:
            out.append(f"D entry {set(d)} leaves dom(W)")
    return out


def validate_pstar(c: PStar) -> tuple[bool, list[str]]:
    v = violations(c)
    return not v, v


def leq_pstar(q: PStar, p: PStar, check: bool = True) -> bool:
    """q extends p."""
    if check:
        for name, c in (("q", q), ("p", p)):
            v = violations(c)
            if v:
                raise ValueError(f"{name} is not a condition: {v[0]}")
    return not leq_failures(q, p, first=True)


def leq_failures(q: PStar, p: PStar, first: bool = False) -> list[str]:
    out = []
    if not is_end_extension(p.T, q.T):
        out.append("(a) tree is not an end-extension")
        if first:
            return out
    for eta, sub in p.W.items():
        if eta not in q.W or not sub <= q.W[eta]:
            out.append(f"(b) W({eta}) not extended")
            if first:
                return out
    if not p.D <= q.D:
        out.append("(c) committed pairs dropped")
        if first:
            return out
    for d in p.D:
        eta, xi = sorted(d)
        old = p.w(eta) & p.w(xi)
        for x in q.w(eta) & q.w(xi):
            if not any(q.T.le(x, z) for z in old):
                out.append(f"(d) {x} in W({eta})&W({xi}) escapes the committed intersection")
                if first:
                    return out
    return out


def normalize(p: PStar) -> PStar:
    """Extend to a downwards-closed tree with minimal splits.

    New nodes are placed on the edges of the Hasse diagram, so branching
    points and the order among old nodes are left untouched.
    """
    t = p.T
    if not t.nodes:
        return p
    heights = set(h_of(x) for x in t.nodes)
    for x, y in combinations(sorted(t.nodes), 2):
        if not t.comparable(x, y):
            heights.add(h_of(t.meet(x, y)) + 1)
    used = set(t.nodes)
    new_tree = t
    for child in sorted(t.nodes):
        par = t.parent(child)
        if par is None:
            continue
        lo, hi = h_of(par), h_of(child)
        for a in sorted(heights):
            if lo < a < hi:
                n = fresh_node(a, used)
                used.add(n)
                new_tree = insert_below(new_tree, child, n)
    W = {eta: downward_closure(new_tree, sub) for eta, sub in p.W.items()}
    return PStar(new_tree, W, p.D)


def normalize_check(p: PStar, q: PStar) -> list[str]:
    """Clause-by-clause check of the normalization conclusion."""
    out = []
    rep = validate_tree(q.T)
    if not rep.is_standard:
        out.append("result tree not standard")
    if not rep.is_downwards_closed:
        out.append("result tree not downwards closed")
    if not rep.has_minimal_splits:
        out.append("result tree lacks minimal splits")
    if q.D != p.D or q.dom != p.dom:
        out.append("domain or committed pairs changed")
    for eta in p.W:
        if q.W[eta] != downward_closure(q.T, p.W[eta]):
            out.append(f"W({eta}) is not the closure of the old subtree")
    if leq_failures(q, p, first=True):
        out.append("result does not extend the input")
    for eta, xi in combinations(sorted(p.W), 2):
        old = p.w(eta) & p.w(xi)
        for x in q.w(eta) & q.w(xi):
            if not any(q.T.le(x, z) for z in old):
                out.append(f"shared node {x} of {eta},{xi} is not below an old shared node")
    return out


def is_split_pair(p: PStar, q: PStar, dp: Ordinal, dq: Ordinal) -> bool:
    return not split_failures(p, q, dp, dq, first=True)


def split_failures(p: PStar, q: PStar, dp: Ordinal, dq: Ordinal, first: bool = False) -> list[str]:
    if not (is_in_Ch(dp) and is_in_Ch(dq)):
        raise ValueError("split levels must lie in C_h")
    if not dp < dq:
        raise ValueError("split levels must increase")
    out = []
    if restrict(p.T, dp) != restrict(q.T, dq):
        out.append("(1)")
        if first:
            return out
    if any(not x < dq for x in p.T.nodes):
        out.append("(2)")
        if first:
            return out
    shared = sorted(p.dom & q.dom)
    for eta in shared:
        if frozenset(x for x in p.W[eta] if x < dp) != frozenset(x for x in q.W[eta] if x < dq):
            out.append("(3)")
            if first:
                return out
            break
    for eta, xi in combinations(shared, 2):
        if any(not x < dp for x in p.W[eta] & p.W[xi]) or any(not x < dq for x in q.W[eta] & q.W[xi]):
            out.append("(4)")
            break
    return out


def split_consequence_failures(p: PStar, q: PStar, dp: Ordinal) -> list[str]:
    """Facts every split pair must satisfy: shared nodes lie below ``dp`` and
    cross intersections with a shared index stay inside that index's subtree."""
    out = []
    if any(not x < dp for x in p.T.nodes & q.T.nodes):
        out.append("(a)")
    shared = p.dom & q.dom
    for xi in shared:
        if any(not p.W[eta] & q.W[xi] <= p.W[xi] for eta in p.dom):
            out.append("(b)")
            break
    for xi in shared:
        if any(not q.W[eta] & p.W[xi] <= q.W[xi] for eta in q.dom):
            out.append("(c)")
            break
    return out


def oplus_pstar(parts) -> PStar:
    parts = list(parts)
    if len(parts) < 2:
        raise ValueError("oplus needs at least two conditions")
    T = tree_oplus([c.T for c in parts])
    W = {}
    for c in parts:
        for eta, sub in c.W.items():
            W[eta] = W.get(eta, frozenset()) | sub
    D = frozenset().union(*(c.D for c in parts))
    return PStar(T, W, D)


def is_delta_system(sets) -> tuple[bool, frozenset]:
    sets = [frozenset(s) for s in sets]
    if len(sets) < 2:
        return True, sets[0] if sets else frozenset()
    root = sets[0] & sets[1]
    ok = all(a & b == root for a, b in combinations(sets, 2))
    return ok, root


def amalgamate_split_family(parts, deltas) -> tuple[PStar, Certificate]:
    parts = list(parts)
    deltas = list(deltas)
    if len(parts) != len(deltas) or len(parts) < 2:
        raise ValueError("need at least two parts with one level each")
    checked = []
    for i, j in combinations(range(len(parts)), 2):
        fails = split_failures(parts[i], parts[j], deltas[i], deltas[j], first=True)
        if fails:
            raise HypothesisViolation(f"split{fails[0]}", f"parts {i},{j}")
    checked.append("pairwise split")
    ok, root = is_delta_system([c.dom for c in parts])
    if not ok:
        raise HypothesisViolation("delta-system", "domains do not share a common root")
    checked.append("delta-system")
    out = oplus_pstar(parts)
    v = violations(out)
    if v:
        raise AssertionError(f"amalgam is not a condition: {v[0]}")
    for i, c in enumerate(parts):
        fails = leq_failures(out, c, first=True)
        if fails:
            raise AssertionError(f"amalgam does not extend part {i}: {fails[0]}")
    checked.append("amalgam valid and below every part")
    return out, Certificate(tuple(checked), (f"root={sorted(root, key=repr)}",))


def root_condition() -> PStar:
    return PStar(Tree(frozenset({ZERO})), {}, frozenset())

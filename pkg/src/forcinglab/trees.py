"""Standard finite trees on countable ordinals and their subtree calculus."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .ordinals import DEFAULT_CEILING, OMEGA, ZERO, Ordinal, h_of, omega_mul


@dataclass(frozen=True)
class TreeReport:
    is_standard: bool
    is_downwards_closed: bool
    has_minimal_splits: bool

    def as_tuple(self):
        return (self.is_standard, self.is_downwards_closed, self.has_minimal_splits)


@dataclass(frozen=True)
class Tree:
    """A finite set of ordinals with a strict order stored as all its pairs.

    Nothing is validated on construction so that raw unions can be inspected;
    use :func:`validate_tree` to check the standard-tree axioms.
    """

    nodes: frozenset = frozenset()
    order: frozenset = frozenset()
    _below: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _kids: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _std: bool = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        below = {x: set() for x in self.nodes}
        for x, y in self.order:
            below.setdefault(y, set()).add(x)
            below.setdefault(x, set())
        object.__setattr__(self, "_below", {k: frozenset(v) for k, v in below.items()})

    @classmethod
    def from_parents(cls, parents: dict) -> "Tree":
        """Build from a map node -> parent (None for the root)."""
        order = set()
        for x in parents:
            p = parents[x]
            seen = set()
            while p is not None:
                if p in seen:
                    raise ValueError("cycle in parent map")
                seen.add(p)
                order.add((p, x))
                p = parents[p]
        return cls(frozenset(parents), frozenset(order))

    def below(self, x) -> frozenset:
        return self._below.get(x, frozenset())

    def lt(self, x, y) -> bool:
        return x in self._below.get(y, ())

    def le(self, x, y) -> bool:
        return x == y or x in self._below.get(y, ())

    def comparable(self, x, y) -> bool:
        return x == y or self.lt(x, y) or self.lt(y, x)

    def above(self, x) -> frozenset:
        return frozenset(y for y in self.nodes if x in self._below[y])

    def parent(self, x):
        preds = self.below(x)
        return max(preds) if preds else None

    def children(self, x) -> list:
        kids = self._kids
        if kids is None:
            kids = {}
            for y in self.nodes:
                kids.setdefault(self.parent(y), []).append(y)
            object.__setattr__(self, "_kids", kids)
        return sorted(kids.get(x, ()))

    def meet(self, x, y):
        """Largest common lower bound (inclusive), or None."""
        common = (self.below(x) | {x}) & (self.below(y) | {y})
        # greatest in the tree order; on malformed inputs that need not be the ordinal max
        tops = [z for z in common if all(w == z or self.lt(w, z) for w in common)]
        return tops[0] if len(tops) == 1 else None

    def maximal(self) -> list:
        tops = set(self.nodes)
        for x, _ in self.order:
            tops.discard(x)
        return sorted(tops)

    def height_set(self) -> frozenset:
        return frozenset(h_of(x) for x in self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, x):
        return x in self.nodes


EMPTY_TREE = Tree()


def validate_tree(t: Tree, ceiling: Ordinal = DEFAULT_CEILING) -> TreeReport:
    return TreeReport(is_standard(t, ceiling), is_downwards_closed(t), has_minimal_splits(t))


def is_standard(t: Tree, ceiling: Ordinal = DEFAULT_CEILING) -> bool:
    if ceiling is not DEFAULT_CEILING:
        return _is_standard(t, ceiling)
    if t._std is None:
        object.__setattr__(t, "_std", _is_standard(t, ceiling))
    return t._std


def _is_standard(t: Tree, ceiling: Ordinal) -> bool:
    for x in t.nodes:
        if not isinstance(x, Ordinal) or not x < ceiling:
            return False
        if x != ZERO and x < OMEGA:
            return False
    for x, y in t.order:
        if x not in t.nodes or y not in t.nodes or x == y:
            return False
        if not h_of(x, ceiling) < h_of(y, ceiling):
            return False
    for y in t.nodes:
        preds = t.below(y)
        for x in preds:
            # transitivity and linearity of predecessors
            if not t.below(x) <= preds:
                return False
        for a, b in combinations(preds, 2):
            if not (t.lt(a, b) or t.lt(b, a)):
                return False
    if t.nodes:
        if ZERO not in t.nodes:
            return False
        if any(not t.lt(ZERO, x) for x in t.nodes if x != ZERO):
            return False
    return True


def is_downwards_closed(t: Tree) -> bool:
    heights = {x: h_of(x) for x in t.nodes}
    levels = set(heights.values())
    for x in t.nodes:
        have = {heights[z] for z in t.below(x)}
        for a in levels:
            if a < heights[x] and a not in have:
                return False
    return True


def has_minimal_splits(t: Tree) -> bool:
    if is_standard(t):
        # every branching node must have all its children one level up
        for z in t.nodes:
            kids = t.children(z)
            if len(kids) >= 2 and any(h_of(c) != h_of(z) + 1 for c in kids):
                return False
        return True
    return _minimal_splits_pairwise(t)


def _minimal_splits_pairwise(t: Tree) -> bool:
    for x, y in combinations(t.nodes, 2):
        if t.comparable(x, y):
            continue
        z = t.meet(x, y)
        if z is None:
            return False
        target = h_of(z) + 1
        xs = [a for a in t.below(x) | {x} if h_of(a) == target]
        ys = [b for b in t.below(y) | {y} if h_of(b) == target]
        if not any(a != b for a in xs for b in ys):
            return False
    return True


def restrict(t: Tree, d: Ordinal) -> Tree:
    nodes = frozenset(x for x in t.nodes if x < d)
    order = frozenset((x, y) for x, y in t.order if y < d and x < d)
    return Tree(nodes, order)


def induced(t: Tree, carrier) -> Tree:
    carrier = frozenset(carrier)
    return Tree(carrier, frozenset((x, y) for x, y in t.order if x in carrier and y in carrier))


def is_end_extension(small: Tree, big: Tree) -> bool:
    if not small.nodes <= big.nodes:
        return False
    keep = small.nodes
    return frozenset(o for o in big.order if o[0] in keep and o[1] in keep) == small.order


def downward_closure(host: Tree, w) -> frozenset:
    out = set()
    for x in w:
        if x not in host.nodes:
            raise ValueError(f"{x} is not a node of the host tree")
        out.add(x)
        out |= host.below(x)
    return frozenset(out)


def is_downward_closed_in(host: Tree, w) -> bool:
    return all(host.below(x) <= w for x in w)


def tree_oplus(parts) -> Tree:
    parts = list(parts)
    if len(parts) < 2:
        raise ValueError("tree_oplus needs at least two trees")
    nodes = frozenset().union(*(p.nodes for p in parts))
    order = frozenset().union(*(p.order for p in parts))
    return Tree(nodes, order)


def fresh_node(height: Ordinal, used, ceiling: Ordinal = DEFAULT_CEILING) -> Ordinal:
    """Least ordinal of the given h-block not in ``used``."""
    if height == ZERO:
        if ZERO in used:
            raise ValueError("height-0 block holds only the root")
        return ZERO
    start = omega_mul(height, ceiling)
    j = 0
    while True:
        x = start + Ordinal.of(j) if j else start
        if x not in used:
            return x
        j += 1


def add_leaf(t: Tree, parent, node) -> Tree:
    """Add ``node`` immediately above ``parent`` (or as root when parent is None)."""
    if node in t.nodes:
        raise ValueError(f"{node} already present")
    new = set()
    if parent is not None:
        new = {(a, node) for a in t.below(parent) | {parent}}
    return Tree(t.nodes | {node}, t.order | new)


def insert_below(t: Tree, child, node) -> Tree:
    """Insert ``node`` on the edge from the parent of ``child`` up to ``child``."""
    if node in t.nodes:
        raise ValueError(f"{node} already present")
    lower = t.below(child)
    new = {(a, node) for a in lower}
    new |= {(node, b) for b in t.nodes if b == child or t.lt(child, b)}
    return Tree(t.nodes | {node}, t.order | new)


def find_incomparable_family(t: Tree, blocks, want: int, max_chain: int | None = None):
    """Indices of ``want`` blocks that are pairwise incomparable node by node.

    Returns the lexicographically least such index list, or None.
    """
    blocks = [frozenset(b) for b in blocks]
    for i, j in combinations(range(len(blocks)), 2):
        if blocks[i] & blocks[j]:
            raise ValueError(f"blocks {i} and {j} overlap")
    if max_chain is not None:
        longest = max((len(t.below(x)) + 1 for x in t.nodes), default=0)
        if longest > max_chain:
            raise ValueError(f"tree has a chain of length {longest} > {max_chain}")
    if want <= 0:
        return []
    n = len(blocks)
    ok = [[False] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        free = all(not t.comparable(x, y) for x in blocks[i] for y in blocks[j])
        ok[i][j] = ok[j][i] = free

    def extend(chosen, start):
        if len(chosen) == want:
            return list(chosen)
        for k in range(start, n):
            if n - k < want - len(chosen):
                break
            if all(ok[c][k] for c in chosen):
                found = extend(chosen + [k], k + 1)
                if found:
                    return found
        return None

    return extend([], 0)


def antichain_width(t: Tree, carrier) -> int:
    """Size of a largest antichain of a downward-closed carrier (its maximal elements)."""
    carrier = frozenset(carrier)
    return sum(1 for x in carrier if not any(t.lt(x, y) for y in carrier))

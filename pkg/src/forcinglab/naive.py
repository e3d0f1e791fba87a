"""Slow, literal re-implementations of the main predicates.

These work on raw node and pair sets with explicit quantifier loops and
share no helper with the fast checkers, so the two can be compared
instance by instance.  Ordinal arithmetic (``h_of``) is the only shared
ingredient.
"""

from __future__ import annotations

from .ordinals import DEFAULT_CEILING, OMEGA, ZERO, h_of


def _lt(order, x, y):
    return (x, y) in order


def _le(order, x, y):
    return x == y or (x, y) in order


def tree_flags(nodes, order, ceiling=DEFAULT_CEILING):
    nodes, order = set(nodes), set(order)
    return (_standard(nodes, order, ceiling), _dc(nodes, order), _splits(nodes, order))


def _standard(nodes, order, ceiling):
    for x in nodes:
        if not (x == ZERO or (not x < OMEGA and x < ceiling)):
            return False
    for x, y in order:
        if x not in nodes or y not in nodes or x == y:
            return False
    preds = {y: {x for x in nodes if (x, y) in order} for y in nodes}
    for y in nodes:
        for x in preds[y]:
            # x < y and z < x must give z < y
            for z in preds[x]:
                if z not in preds[y]:
                    return False
            if not h_of(x) < h_of(y):
                return False
        for a in preds[y]:
            for b in preds[y]:
                if a != b and a not in preds[b] and b not in preds[a]:
                    return False
    if nodes:
        if ZERO not in nodes:
            return False
        for x in nodes:
            if x != ZERO and not _lt(order, ZERO, x):
                return False
    return True


def _down(nodes, order):
    """Each node with the set of nodes at or below it."""
    return {y: {x for x in nodes if x == y or (x, y) in order} for y in nodes}


def _dc(nodes, order):
    down = _down(nodes, order)
    heights = {h_of(x) for x in nodes}
    for x in nodes:
        for a in heights:
            if a < h_of(x) and not any(h_of(z) == a for z in down[x] if z != x):
                return False
    return True


def _splits(nodes, order):
    down = _down(nodes, order)
    for x in nodes:
        for y in nodes:
            if x == y or x in down[y] or y in down[x]:
                continue
            lower = down[x] & down[y]
            tops = [z for z in lower if all(w in down[z] for w in lower)]
            if len(tops) != 1:
                return False
            target = h_of(tops[0]) + 1
            xs = [a for a in down[x] if h_of(a) == target]
            ys = [b for b in down[y] if h_of(b) == target]
            if not any(a != b for a in xs for b in ys):
                return False
    return True


def pstar_ok(T_nodes, T_order, W, D) -> bool:
    if not _standard(set(T_nodes), set(T_order), DEFAULT_CEILING):
        return False
    for sub in W.values():
        for x in sub:
            if x not in T_nodes:
                return False
            for y in T_nodes:
                if _lt(T_order, y, x) and y not in sub:
                    return False
    for d in D:
        d = list(d)
        if len(d) != 2 or d[0] not in W or d[1] not in W:
            return False
    return True


def _w(W, eta):
    return W[eta] if eta in W else set()


def pstar_leq(q, p) -> bool:
    """q extends p; each argument is (nodes, order, W, D)."""
    qn, qo, qW, qD = q
    pn, po, pW, pD = p
    for x in pn:
        if x not in qn:
            return False
    for x in pn:
        for y in pn:
            if _lt(qo, x, y) != _lt(po, x, y):
                return False
    for eta in pW:
        if eta not in qW:
            return False
        for x in pW[eta]:
            if x not in qW[eta]:
                return False
    for d in pD:
        if d not in qD:
            return False
    for d in pD:
        eta, xi = list(d)
        for x in qn:
            if x in _w(qW, eta) and x in _w(qW, xi):
                if not any(_le(qo, x, z) for z in pn if z in _w(pW, eta) and z in _w(pW, xi)):
                    return False
    return True


def split_ok(p, q, dp, dq) -> bool:
    pn, po, pW, _ = p
    qn, qo, qW, _ = q
    low_p = {x for x in pn if x < dp}
    low_q = {x for x in qn if x < dq}
    if low_p != low_q:
        return False
    for x in low_p:
        for y in low_p:
            if _lt(po, x, y) != _lt(qo, x, y):
                return False
    for x in pn:
        if not x < dq:
            return False
    shared = [eta for eta in pW if eta in qW]
    for eta in shared:
        if {x for x in pW[eta] if x < dp} != {x for x in qW[eta] if x < dq}:
            return False
    for eta in shared:
        for xi in shared:
            if eta == xi:
                continue
            for x in pW[eta]:
                if x in pW[xi] and not x < dp:
                    return False
            for x in qW[eta]:
                if x in qW[xi] and not x < dq:
                    return False
    return True


def e_separated(W, e) -> bool:
    for eta in W:
        for xi in W:
            if eta == xi:
                continue
            for x in W[eta]:
                if x in W[xi] and e(eta, xi) < h_of(x):
                    return False
    return True


# side conditions ------------------------------------------------------------

def _is_model(u, m) -> bool:
    # traces are nonzero multiples of w^w: every exponent of the normal form is infinite
    if m.delta == ZERO or any(e < OMEGA for e, _ in m.delta.terms):
        return False
    for s in m.stations:
        if not 0 <= s < u.size:
            return False
        below = [t for t in range(s) if t in u.lambda0]
        if below and below[-1] not in m.stations:
            return False
    return True


def _point(u, m, n):
    common = [s for s in range(u.size) if s in m.stations and s in n.stations]
    for s in range(u.size):
        if s in u.lam and all(s > c for c in common):
            return s
    return u.size


def adequate(u, A) -> bool:
    A = list(A)
    for m in A:
        if not _is_model(u, m):
            return False
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            m, n = A[i], A[j]
            b = _point(u, m, n)
            mb = (m.delta, {s for s in m.stations if s < b})
            nb = (n.delta, {s for s in n.stations if s < b})
            if mb == nb:
                continue
            if m.delta < n.delta and mb[1] <= n.stations:
                continue
            if n.delta < m.delta and nb[1] <= m.stations:
                continue
            return False
    return True


def _member(m, eta) -> bool:
    if hasattr(eta, "index"):
        return eta.index in m.stations
    alpha = getattr(eta, "alpha", eta)
    if isinstance(alpha, int):
        # naturals lie below every nonzero trace
        return m.delta > ZERO
    return alpha < m.delta


def a_separated(W, A) -> bool:
    for m in A:
        for eta in W:
            for xi in W:
                if eta == xi or not (_member(m, eta) and _member(m, xi)):
                    continue
                for x in W[eta]:
                    if x in W[xi] and not x < m.delta:
                        return False
    return True


def p_ok(u, T_nodes, T_order, W, D, A) -> bool:
    return pstar_ok(T_nodes, T_order, W, D) and adequate(u, A) and a_separated(W, A)


def p_leq(q, p) -> bool:
    """Each argument is (nodes, order, W, D, A)."""
    if not all(m in q[4] for m in p[4]):
        return False
    return pstar_leq(q[:4], p[:4])

"""Independent reference implementations used only for cross-checking.

Each routine here deliberately re-solves a problem the main modules already
solve, with a different algorithm and no shared plumbing, so that agreement
between the two is meaningful evidence.  Everything is brute force and only
suitable for small instances.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

from .space import WindowedSpace, ball


# -- bipartite matching by Kuhn's augmenting paths ---------------------------


def kuhn_matching(left: list, neighbours: dict) -> dict:
    """Maximum bipartite matching; returns {left vertex: right vertex}."""
    match_r: dict = {}

    def try_augment(u, seen: set) -> bool:
        for v in neighbours[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or try_augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in left:
        try_augment(u, set())
    return {u: v for v, u in match_r.items()}


def doubling_possible_by_matching(window: WindowedSpace, F: set, R: int) -> bool:
    """Can two disjoint R-translates of F be matched into the window?

    Independent route: Kuhn's algorithm on the doubled bipartite graph.
    """
    space = window.space
    left = [(x, i) for x in sorted(F, key=repr) for i in (0, 1)]
    neighbours = {
        (x, i): sorted(ball(space, x, R), key=repr) for (x, i) in left
    }
    return len(kuhn_matching(left, neighbours)) == len(left)


def hall_violators_by_enumeration(window: WindowedSpace, F: set, R: int, limit: int = 16):
    """All subsets S of F with |B_R(S)| < 2|S|, by explicit enumeration."""
    if len(F) > limit:
        raise ValueError("enumeration oracle limited to small sets")
    space = window.space
    out = []
    pts = sorted(F, key=repr)
    for k in range(1, len(pts) + 1):
        for sub in combinations(pts, k):
            b = set()
            for x in sub:
                b |= ball(space, x, R)
            if len(b) < 2 * k:
                out.append(frozenset(sub))
    return out


# -- minimum sup-norm fill by Edmonds-Karp plus linear scan ------------------


class _EKGraph:
    """Plain adjacency-matrix Edmonds-Karp max flow."""

    def __init__(self, n: int):
        self.n = n
        self.cap = [dict() for _ in range(n)]

    def add(self, u: int, v: int, c: int):
        self.cap[u][v] = self.cap[u].get(v, 0) + c
        self.cap[v].setdefault(u, 0)

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            parent = {s: None}
            queue = deque([s])
            while queue and t not in parent:
                u = queue.popleft()
                for v, c in self.cap[u].items():
                    if c > 0 and v not in parent:
                        parent[v] = u
                        queue.append(v)
            if t not in parent:
                return total
            path = []
            v = t
            while parent[v] is not None:
                u = parent[v]
                path.append((u, v))
                v = u
            push = min(self.cap[u][v] for u, v in path)
            for u, v in path:
                self.cap[u][v] -= push
                self.cap[v][u] += push
            total += push


def _fill_feasible(window: WindowedSpace, coeffs: dict, P: int, bound: int) -> bool:
    space = window.space
    pts = sorted(space.points, key=repr)
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    S, T, W = n, n + 1, n + 2
    g = _EKGraph(n + 3)
    for p in pts:
        for q in ball(space, p, P):
            if q != p:
                g.add(idx[p], idx[q], bound)
    demand = 0
    for p in pts:
        c = coeffs.get(p, 0)
        if p in window.core:
            if c > 0:
                g.add(idx[p], T, c)
                demand += c
            elif c < 0:
                g.add(S, idx[p], -c)
    total = sum(coeffs.get(p, 0) for p in window.core)
    big = sum(abs(v) for v in coeffs.values()) + 1
    if total > 0:
        g.add(S, W, total)
    elif total < 0:
        g.add(W, T, -total)
        demand += -total
    for h in sorted(window.halo, key=repr):
        g.add(W, idx[h], big)
        g.add(idx[h], W, big)
    return g.max_flow(S, T) == demand


def min_fill_norm_by_scan(window: WindowedSpace, coeffs: dict, P: int, cap: int = 64) -> int | None:
    """Smallest sup-norm bound that admits a fill, by trying 0, 1, 2, ...

    Returns None when no bound up to ``cap`` works.  Independent route:
    Edmonds-Karp feasibility, linear scan instead of binary search.
    """
    for bound in range(cap + 1):
        if _fill_feasible(window, coeffs, P, bound):
            return bound
    return None

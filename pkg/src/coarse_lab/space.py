"""Finite bounded-geometry metric spaces with integer metrics.

A window splits a finite point set into a *core* and a *halo* so that the
finite set can stand in for an infinite ambient space: any boundary
computation at radius R <= halo depth on a core subset sees exactly what
the ambient space would show.  All distances are nonnegative integers and
all invariance ratios are exact rationals, so strict inequalities such as
|boundary| < eps * |F| never involve floating point.
"""

from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

Point = Hashable

# Full cubic triangle-inequality validation is only affordable for small
# user-supplied matrices; larger ones get a seeded random sample.
TRIANGLE_CHECK_LIMIT = 128
TRIANGLE_SAMPLE = 20000


class FiniteMetricSpace:
    """Base class: a finite point set with a total symmetric integer metric.

    Subclasses implement ``dist`` and may override the bulk operations
    (``ball_of``, ``boundary_of``, ``diameter_of``) with structure-aware
    versions; the generic fallbacks only rely on ``dist``.
    """

    def __init__(self, points: Iterable[Point]):
        pts = tuple(points)
        index: dict[Point, int] = {}
        for i, p in enumerate(pts):
            if p in index:
                raise ValueError(f"duplicate point identifier: {p!r}")
            index[p] = i
        self.points = pts
        self._index = index

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: Point) -> bool:
        return p in self._index

    def dist(self, x: Point, y: Point) -> int:
        raise NotImplementedError

    # -- bulk operations, overridable ------------------------------------

    def ball_of(self, center: Point, R: int) -> set:
        return {y for y in self.points if self.dist(center, y) <= R}

    def boundary_of(self, F: set, R: int) -> set:
        out: set = set()
        for f in F:
            out |= self.ball_of(f, R)
        return out - F

    def diameter_of(self, F: set) -> int:
        pts = list(F)
        best = 0
        for i, x in enumerate(pts):
            for y in pts[i + 1:]:
                d = self.dist(x, y)
                if d > best:
                    best = d
        return best


class MatrixSpace(FiniteMetricSpace):
    """Metric given by an explicit dense matrix of nonnegative integers."""

    def __init__(self, points: Iterable[Point], matrix: Sequence[Sequence[int]]):
        super().__init__(points)
        n = len(self.points)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("distance matrix shape does not match point count")
        self._matrix = [list(map(int, row)) for row in matrix]
        self._validate()

    def _validate(self) -> None:
        n = len(self.points)
        m = self._matrix
        for i in range(n):
            if m[i][i] != 0:
                raise ValueError(f"nonzero self-distance at {self.points[i]!r}")
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise ValueError("distance matrix is not symmetric")
                if m[i][j] <= 0:
                    raise ValueError("zero distance between distinct points")
        if n <= TRIANGLE_CHECK_LIMIT:
            triples = ((i, j, k) for i in range(n) for j in range(n) for k in range(n))
        else:
            rng = random.Random(0)
            triples = (
                (rng.randrange(n), rng.randrange(n), rng.randrange(n))
                for _ in range(TRIANGLE_SAMPLE)
            )
        for i, j, k in triples:
            if m[i][k] > m[i][j] + m[j][k]:
                raise ValueError(
                    "triangle inequality fails at "
                    f"({self.points[i]!r}, {self.points[j]!r}, {self.points[k]!r})"
                )

    def dist(self, x: Point, y: Point) -> int:
        return self._matrix[self._index[x]][self._index[y]]


class GraphSpace(FiniteMetricSpace):
    """Hop-count shortest-path metric of an undirected graph.

    Pairs in distinct components get the documented sentinel distance
    ``len(points) + 1``, which keeps the metric total; every radius used in
    practice stays below the sentinel.  Distance rows are produced by BFS
    and cached per source point.
    """

    def __init__(self, points: Iterable[Point], edges: Iterable[tuple[Point, Point]]):
        super().__init__(points)
        adj: dict[Point, list[Point]] = {p: [] for p in self.points}
        seen: set[frozenset] = set()
        for a, b in edges:
            if a not in self._index or b not in self._index:
                raise ValueError(f"edge ({a!r}, {b!r}) references an undeclared vertex")
            if a == b:
                raise ValueError(f"self-loop edge at {a!r}")
            key = frozenset((a, b))
            if key in seen:
                continue
            seen.add(key)
            adj[a].append(b)
            adj[b].append(a)
        for p in adj:
            adj[p].sort(key=self._index.__getitem__)
        self._adj = adj
        self.sentinel = len(self.points) + 1
        self._rows: dict[Point, list[int]] = {}

    def _row(self, source: Point) -> list[int]:
        row = self._rows.get(source)
        if row is None:
            row = [self.sentinel] * len(self.points)
            row[self._index[source]] = 0
            queue = deque([source])
            while queue:
                u = queue.popleft()
                du = row[self._index[u]]
                for v in self._adj[u]:
                    iv = self._index[v]
                    if row[iv] == self.sentinel:
                        row[iv] = du + 1
                        queue.append(v)
            self._rows[source] = row
        return row

    def dist(self, x: Point, y: Point) -> int:
        if x == y:
            if x not in self._index:
                raise KeyError(x)
            return 0
        return self._row(x)[self._index[y]]

    def ball_of(self, center: Point, R: int) -> set:
        if R >= self.sentinel:
            return set(self.points)
        out = {center}
        frontier = [center]
        for _ in range(R):
            nxt = []
            for u in frontier:
                for v in self._adj[u]:
                    if v not in out:
                        out.add(v)
                        nxt.append(v)
            if not nxt:
                break
            frontier = nxt
        return out

    def boundary_of(self, F: set, R: int) -> set:
        if R >= self.sentinel:
            return set(self.points) - F
        seen = set(F)
        out: set = set()
        frontier = list(F)
        for _ in range(R):
            nxt = []
            for u in frontier:
                for v in self._adj[u]:
                    if v not in seen:
                        seen.add(v)
                        out.add(v)
                        nxt.append(v)
            if not nxt:
                break
            frontier = nxt
        return out

    def diameter_of(self, F: set) -> int:
        best = 0
        for f in F:
            row = self._row(f)
            for g in F:
                d = row[self._index[g]]
                if d > best:
                    best = d
        return best


class IntegerLineSpace(FiniteMetricSpace):
    """A finite integer interval with the metric |a - b|."""

    def __init__(self, lo: int, hi: int):
        if lo > hi:
            raise ValueError("empty integer interval")
        super().__init__(range(lo, hi + 1))
        self.lo = lo
        self.hi = hi

    def dist(self, x: int, y: int) -> int:
        return abs(x - y)

    def ball_of(self, center: int, R: int) -> set:
        return set(range(max(self.lo, center - R), min(self.hi, center + R) + 1))

    def boundary_of(self, F: set, R: int) -> set:
        if not F:
            return set()
        pts = sorted(F)
        out: set = set()
        run_start = pts[0]
        prev = pts[0]
        runs = []
        for p in pts[1:]:
            if p != prev + 1:
                runs.append((run_start, prev))
                run_start = p
            prev = p
        runs.append((run_start, prev))
        for a, b in runs:
            out.update(range(max(self.lo, a - R), a))
            out.update(range(b + 1, min(self.hi, b + R) + 1))
        return out - F

    def diameter_of(self, F: set) -> int:
        return max(F) - min(F)


class IntegerSubsetSpace(FiniteMetricSpace):
    """A strictly increasing set of integers with the metric |a - b|.

    This is the subspace metric inherited from the integer line; the subset
    is treated as the whole space, so boundaries count only subset points.
    """

    def __init__(self, values: Iterable[int]):
        vals = list(values)
        if not vals:
            raise ValueError("empty integer subset")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("values must be strictly increasing")
        super().__init__(vals)
        self._sorted = vals

    def dist(self, x: int, y: int) -> int:
        return abs(x - y)

    def ball_of(self, center: int, R: int) -> set:
        vals = self._sorted
        i = bisect_left(vals, center - R)
        j = bisect_right(vals, center + R)
        return set(vals[i:j])

    def boundary_of(self, F: set, R: int) -> set:
        vals = self._sorted
        out: set = set()
        for f in F:
            i = bisect_left(vals, f - R)
            j = bisect_right(vals, f + R)
            out.update(vals[i:j])
        return out - F

    def diameter_of(self, F: set) -> int:
        return max(F) - min(F)


class StackedSpace(FiniteMetricSpace):
    """Finite window of the column space over a base space.

    Points are pairs (x, n) with x in the base and 0 <= n < K.  The metric
    is d((x,n),(y,m)) = n + m + d_base(x,y) for x != y and |n - m| on a
    single column, so any route between distinct columns passes through the
    base level.
    """

    def __init__(self, base: FiniteMetricSpace, K: int):
        if K < 2:
            raise ValueError("stacked window needs height K >= 2")
        super().__init__((x, n) for x in base.points for n in range(K))
        self.base = base
        self.K = K

    def dist(self, p: tuple, q: tuple) -> int:
        (x, n), (y, m) = p, q
        if x == y:
            return abs(n - m)
        return n + m + self.base.dist(x, y)

    def ball_of(self, center: tuple, R: int) -> set:
        x, n = center
        out = {(x, m) for m in range(max(0, n - R), min(self.K, n + R + 1))}
        budget = R - n
        if budget >= 1:
            for y in self.base.ball_of(x, budget):
                if y == x:
                    continue
                top = budget - self.base.dist(x, y)
                out.update((y, m) for m in range(0, min(self.K - 1, top) + 1))
        return out

    def boundary_of(self, F: set, R: int) -> set:
        cols: dict[Point, list[int]] = {}
        for x, n in F:
            cols.setdefault(x, []).append(n)
        out: set = set()
        for x, levels in cols.items():
            levels.sort()
            run_start = prev = levels[0]
            runs = []
            for n in levels[1:]:
                if n != prev + 1:
                    runs.append((run_start, prev))
                    run_start = n
                prev = n
            runs.append((run_start, prev))
            for a, b in runs:
                out.update((x, m) for m in range(max(0, a - R), a))
                out.update((x, m) for m in range(b + 1, min(self.K - 1, b + R) + 1))
            # only levels below R can reach other columns
            for n in levels:
                budget = R - n
                if budget < 1:
                    continue
                for y in self.base.ball_of(x, budget):
                    if y == x:
                        continue
                    top = budget - self.base.dist(x, y)
                    out.update((y, m) for m in range(0, min(self.K - 1, top) + 1))
        return out - F

    def diameter_of(self, F: set) -> int:
        cols: dict[Point, tuple[int, int]] = {}
        for x, n in F:
            lo, hi = cols.get(x, (n, n))
            cols[x] = (min(lo, n), max(hi, n))
        best = 0
        items = list(cols.items())
        for i, (x, (lo_x, hi_x)) in enumerate(items):
            best = max(best, hi_x - lo_x)
            for y, (lo_y, hi_y) in items[i + 1:]:
                best = max(best, hi_x + hi_y + self.base.dist(x, y))
        return best


class BoxSpace(FiniteMetricSpace):
    """Coarse disjoint union of cycle graphs, one per modulus.

    Points are pairs (i, a) with a in the cycle of length moduli[i].  Within
    a block the distance is the cycle-graph distance; across blocks i != j
    it is D_i + D_j where D_i accumulates the block diameters plus one, so
    block separation grows with the index.
    """

    def __init__(self, moduli: Sequence[int]):
        mods = list(moduli)
        if not mods or any(m < 1 for m in mods):
            raise ValueError("moduli must be positive integers")
        super().__init__((i, a) for i, m in enumerate(mods) for a in range(m))
        self.moduli = mods
        offsets = []
        acc = 0
        for m in mods:
            acc += m // 2 + 1
            offsets.append(acc)
        self.block_offsets = offsets

    def _cycle_dist(self, m: int, a: int, b: int) -> int:
        d = abs(a - b)
        return min(d, m - d)

    def dist(self, p: tuple, q: tuple) -> int:
        (i, a), (j, b) = p, q
        if i == j:
            return self._cycle_dist(self.moduli[i], a, b)
        return self.block_offsets[i] + self.block_offsets[j]

    def cross_block_dist(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self.block_offsets[i] + self.block_offsets[j]

    def ball_of(self, center: tuple, R: int) -> set:
        i, a = center
        m = self.moduli[i]
        if 2 * R + 1 >= m:
            out = {(i, b) for b in range(m)}
        else:
            out = {(i, (a + d) % m) for d in range(-R, R + 1)}
        for j, mj in enumerate(self.moduli):
            if j != i and self.cross_block_dist(i, j) <= R:
                out.update((j, b) for b in range(mj))
        return out

    def diameter_of(self, F: set) -> int:
        blocks: dict[int, list[int]] = {}
        for i, a in F:
            blocks.setdefault(i, []).append(a)
        best = 0
        idxs = sorted(blocks)
        for i in idxs:
            m = self.moduli[i]
            pts = blocks[i]
            for u, a in enumerate(pts):
                for b in pts[u + 1:]:
                    best = max(best, self._cycle_dist(m, a, b))
        for u, i in enumerate(idxs):
            for j in idxs[u + 1:]:
                best = max(best, self.cross_block_dist(i, j))
        return best


@dataclass(frozen=True)
class WindowedSpace:
    """A finite stand-in for an infinite space: core plus quarantined halo.

    The halo absorbs truncation artifacts; computations whose R-neighbourhood
    stays off the halo are faithful to the ambient space the window was cut
    from.  Whether every halo point really lies within ``halo_depth`` of the
    core is reported by :meth:`halo_depth_report`, not enforced.
    """

    space: FiniteMetricSpace
    core: frozenset
    halo: frozenset
    halo_depth: int

    def __post_init__(self):
        pts = set(self.space.points)
        if self.core & self.halo:
            raise ValueError("core and halo overlap")
        if self.core | self.halo != pts:
            raise ValueError("core and halo do not partition the window")
        if self.halo_depth < 0:
            raise ValueError("halo depth must be nonnegative")

    def is_core(self, p: Point) -> bool:
        return p in self.core

    def halo_contaminated(self, F: set, R: int) -> bool:
        """True when the R-boundary of F meets the halo.

        A contaminated computation may disagree with the ambient space the
        window stands in for; callers downgrade such results to advisory.
        """
        return bool(self.space.boundary_of(set(F), R) & self.halo)

    def halo_depth_report(self) -> int:
        if not self.halo:
            return 0
        return max(min(self.space.dist(h, c) for c in self.core) for h in self.halo)


# ---------------------------------------------------------------------------
# operations


def build_graph_metric(vertices: Iterable[Point], edges: Iterable[tuple[Point, Point]]) -> GraphSpace:
    """Shortest-path metric of an undirected graph.

    Distinct components are assigned the sentinel distance n + 1 so the
    metric stays total.
    """
    return GraphSpace(vertices, edges)


def ball(space: FiniteMetricSpace, center: Point, R: int) -> set:
    """Closed ball {y : d(center, y) <= R}."""
    if center not in space:
        raise ValueError(f"unknown center: {center!r}")
    if R < 0:
        raise ValueError("radius must be nonnegative")
    return space.ball_of(center, R)


def outer_boundary(space: FiniteMetricSpace, F: Iterable[Point], R: int) -> set:
    """Outer R-boundary: the points outside F at distance at most R from F."""
    Fs = set(F)
    for p in Fs:
        if p not in space:
            raise ValueError(f"set contains an unknown point: {p!r}")
    if R < 0:
        raise ValueError("radius must be nonnegative")
    if not Fs or R == 0:
        return set()
    return space.boundary_of(Fs, R)


def folner_ratio(space: FiniteMetricSpace, F: Iterable[Point], R: int) -> Fraction:
    """|outer R-boundary of F| / |F| as an exact rational."""
    Fs = set(F)
    if not Fs:
        raise ValueError("Folner ratio of the empty set is undefined")
    return Fraction(len(outer_boundary(space, Fs, R)), len(Fs))


def diameter(space: FiniteMetricSpace, F: Iterable[Point]) -> int:
    """Largest pairwise distance within the nonempty set F."""
    Fs = set(F)
    if not Fs:
        raise ValueError("diameter of the empty set is undefined")
    for p in Fs:
        if p not in space:
            raise ValueError(f"set contains an unknown point: {p!r}")
    return space.diameter_of(Fs)


def geometry_profile(space: FiniteMetricSpace, R: int) -> int:
    """The largest cardinality of an R-ball; finite by construction."""
    return max(len(space.ball_of(x, R)) for x in space.points)


def stacked_product_window(X: FiniteMetricSpace, K: int, halo_depth: int | None = None) -> WindowedSpace:
    """Stack K copies of X into a column space and quarantine the top layers.

    The ambient column space is infinite upward, so the top of a finite
    window lies about boundaries; by default the top quarter (rounded down)
    is declared halo.
    """
    if K < 2:
        raise ValueError("stacked window needs height K >= 2")
    space = StackedSpace(X, K)
    H = K // 4 if halo_depth is None else halo_depth
    if H < 0 or H >= K:
        raise ValueError("halo depth must satisfy 0 <= H < K")
    core = frozenset(p for p in space.points if p[1] < K - H)
    halo = frozenset(p for p in space.points if p[1] >= K - H)
    return WindowedSpace(space, core, halo, H)


def integer_window(lo: int, hi: int, halo_depth: int) -> WindowedSpace:
    """Integer interval core [lo, hi] padded with halo_depth points per side."""
    if lo > hi:
        raise ValueError("empty core interval")
    if halo_depth < 0:
        raise ValueError("halo depth must be nonnegative")
    space = IntegerLineSpace(lo - halo_depth, hi + halo_depth)
    core = frozenset(range(lo, hi + 1))
    halo = frozenset(space.points) - core
    return WindowedSpace(space, core, halo, halo_depth)


def regular_tree_window(degree: int, core_depth: int, halo_depth: int) -> WindowedSpace:
    """Ball of a degree-regular tree, the outermost halo_depth shells quarantined.

    The root has ``degree`` children and every other internal node has
    degree - 1 children, so the full tree is degree-regular away from the
    leaves.  Node identifiers are path strings, e.g. "v", "v0", "v02".
    """
    if degree < 2:
        raise ValueError("tree degree must be at least 2")
    if core_depth < 0 or halo_depth < 0:
        raise ValueError("depths must be nonnegative")
    total = core_depth + halo_depth
    vertices = ["v"]
    edges: list[tuple[str, str]] = []
    core = {"v"}
    frontier = ["v"]
    for depth in range(1, total + 1):
        nxt = []
        for parent in frontier:
            fanout = degree if parent == "v" else degree - 1
            for c in range(fanout):
                child = parent + str(c)
                vertices.append(child)
                edges.append((parent, child))
                nxt.append(child)
                if depth <= core_depth:
                    core.add(child)
        frontier = nxt
    space = GraphSpace(vertices, edges)
    halo = frozenset(space.points) - frozenset(core)
    return WindowedSpace(space, frozenset(core), halo, halo_depth)


def subset_window(values: Iterable[int]) -> WindowedSpace:
    """A strictly increasing integer set treated as a complete space (no halo)."""
    space = IntegerSubsetSpace(values)
    return WindowedSpace(space, frozenset(space.points), frozenset(), 0)


def box_window(moduli: Sequence[int]) -> WindowedSpace:
    """Coarse disjoint union of cycles treated as a complete space (no halo)."""
    space = BoxSpace(moduli)
    return WindowedSpace(space, frozenset(space.points), frozenset(), 0)

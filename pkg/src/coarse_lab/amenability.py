"""Folner-set search and the paradoxical side of the amenability dichotomy.

A window is declared amenable-looking when some core set has a small outer
R-boundary; it is paradoxical-looking when a set admits two disjoint
injective translates with displacement at most R.  The two outcomes of
``doubling_check`` are exactly the two sides of the Hall condition
|B_R(S)| >= 2|S| and are certified either by an explicit pair of maps or by
an explicit violating subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .flows import FlowNetwork
from .space import (
    IntegerLineSpace,
    WindowedSpace,
    ball,
    folner_ratio,
    outer_boundary,
)


@dataclass
class FolnerResult:
    """Best candidate seen by a bounded search; never a non-existence proof."""

    points: frozenset
    ratio: Fraction
    success: bool
    examined: int
    strategy: str


@dataclass
class ParadoxWitness:
    """Two injective maps with displacement <= R and disjoint images."""

    phi1: dict
    phi2: dict
    R: int

    def replay(self, window: WindowedSpace) -> None:
        space = window.space
        assert set(self.phi1) == set(self.phi2)
        images = list(self.phi1.values()) + list(self.phi2.values())
        assert len(images) == len(set(images)), "images collide"
        for phi in (self.phi1, self.phi2):
            for x, y in phi.items():
                assert y in space, f"image {y!r} outside the window"
                assert space.dist(x, y) <= self.R, f"displacement of {x!r} exceeds R"


@dataclass
class HallViolator:
    """A subset S of F whose R-ball is too small to hold two copies of S."""

    points: frozenset
    R: int

    def replay(self, window: WindowedSpace) -> None:
        space = window.space
        b = set(self.points) | outer_boundary(space, self.points, self.R)
        assert len(b) < 2 * len(self.points), "claimed violator satisfies Hall"


def _admissible(window: WindowedSpace, F: set, R: int) -> bool:
    return not window.halo_contaminated(F, R)


def _candidate_balls(window: WindowedSpace, R: int, budget: int):
    space = window.space
    centers = sorted((p for p in window.core), key=repr)
    produced = 0
    radius = 0
    while produced < budget:
        emitted = False
        for c in centers:
            F = ball(space, c, radius)
            if F <= window.core and _admissible(window, F, R):
                emitted = True
                yield F
                produced += 1
                if produced >= budget:
                    return
        if not emitted:
            return
        radius += 1


def _candidate_intervals(window: WindowedSpace, R: int, budget: int):
    if not isinstance(window.space, IntegerLineSpace):
        raise ValueError("interval strategy needs an integer-line window")
    core = sorted(window.core)
    lo, hi = core[0], core[-1]
    mid = (lo + hi) // 2
    for length in range(1, budget + 1):
        a = mid - length // 2
        b = a + length - 1
        if a < lo or b > hi:
            return
        F = set(range(a, b + 1))
        if _admissible(window, F, R):
            yield F


def _candidate_greedy(window: WindowedSpace, R: int, budget: int):
    """Hill climbing: grow the set one boundary point at a time."""
    space = window.space
    singles = sorted(
        (p for p in window.core if _admissible(window, {p}, R)), key=repr
    )
    if not singles:
        return
    best = min(singles, key=lambda p: (folner_ratio(space, {p}, R), repr(p)))
    F = {best}
    yield set(F)
    produced = 1
    while produced < budget:
        frontier = sorted(
            (p for p in outer_boundary(space, F, R) if p in window.core), key=repr
        )
        best_next = None
        best_ratio = None
        for p in frontier:
            F2 = F | {p}
            if not _admissible(window, F2, R):
                continue
            r = folner_ratio(space, F2, R)
            if best_ratio is None or r < best_ratio:
                best_ratio = r
                best_next = p
        if best_next is None:
            return
        F.add(best_next)
        yield set(F)
        produced += 1


_STRATEGIES = {
    "balls": _candidate_balls,
    "intervals": _candidate_intervals,
    "greedy": _candidate_greedy,
}


def folner_search(
    window: WindowedSpace,
    R: int,
    epsilon: Fraction,
    strategy: str = "balls",
    budget: int = 200,
) -> FolnerResult:
    """Examine up to ``budget`` candidate sets and return the best ratio seen.

    Candidates are restricted to core sets whose R-ball stays off the halo,
    so every reported ratio is faithful to the ambient space.  The search is
    deliberately incomplete: success means a witness was found, failure only
    means none was found among the examined candidates.
    """
    if strategy not in _STRATEGIES:
        raise ValueError(f"unknown strategy: {strategy!r}")
    epsilon = Fraction(epsilon)
    space = window.space
    best: set | None = None
    best_ratio: Fraction | None = None
    examined = 0
    for F in _STRATEGIES[strategy](window, R, budget):
        examined += 1
        r = folner_ratio(space, F, R) if R > 0 else Fraction(0)
        if best_ratio is None or r < best_ratio:
            best, best_ratio = F, r
    if best is None:
        raise ValueError("no admissible candidate set; window too small for R")
    return FolnerResult(
        points=frozenset(best),
        ratio=best_ratio,
        success=best_ratio < epsilon,
        examined=examined,
        strategy=strategy,
    )


def doubling_check(window: WindowedSpace, F: Iterable, R: int) -> ParadoxWitness | HallViolator:
    """Try to fit two disjoint R-translates of F inside the window.

    This succeeds precisely when |B_R(S)| >= 2|S| for every S inside F, by
    max-flow duality on the doubled bipartite graph.  The returned object is
    either a witness pair of maps or a minimum-cut violating subset; exactly
    one of the two is possible.  Domains live in the core; images may use
    the whole window, halo included.
    """
    space = window.space
    Fs = set(F)
    if not Fs <= window.core:
        raise ValueError("the doubled set must lie inside the core")
    if R < 0:
        raise ValueError("R must be nonnegative")
    if not Fs:
        return ParadoxWitness(phi1={}, phi2={}, R=R)

    order = {p: i for i, p in enumerate(sorted(space.points, key=repr))}
    net = FlowNetwork()
    big = 2 * len(Fs) + 1
    target_arcs: dict[tuple, int] = {}
    targets: set = set()
    for x in sorted(Fs, key=order.__getitem__):
        net.add_edge("s", ("L", x), 2)
        for y in sorted(ball(space, x, R), key=order.__getitem__):
            target_arcs[(x, y)] = net.add_edge(("L", x), ("R", y), big)
            targets.add(y)
    for y in sorted(targets, key=order.__getitem__):
        net.add_edge(("R", y), "t", 1)

    value = net.max_flow("s", "t")
    if value == 2 * len(Fs):
        phi1: dict = {}
        phi2: dict = {}
        for x in Fs:
            hits = sorted(
                (y for (xx, y), e in target_arcs.items() if xx == x and net.flow_on(e) > 0),
                key=order.__getitem__,
            )
            assert len(hits) == 2, "flow decomposition must give two targets"
            phi1[x], phi2[x] = hits
        return ParadoxWitness(phi1=phi1, phi2=phi2, R=R)

    side = net.source_side("s")
    S = {x for x in Fs if ("L", x) in side}
    violator = HallViolator(points=frozenset(S), R=R)
    b = S | outer_boundary(space, S, R)
    assert len(b) < 2 * len(S), "min cut failed to produce a Hall violator"
    return violator

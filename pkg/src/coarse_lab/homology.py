"""Degree <= 1 uniformly finite chains and minimum sup-norm boundary filling.

A zero chain is an integer function on window points; a one chain assigns
integers to ordered pairs within a propagation bound P.  The boundary of the
pair (x, y) is the difference of point masses at y and x, so filling a zero
chain c means routing its mass along pairs of length at most P.  The filling
solver minimises the sup norm of the filler exactly: a chain over a window
core is a boundary in the ambient space iff a uniformly bounded fill exists,
with mass allowed to exit through the halo.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .flows import FlowNetwork
from .space import WindowedSpace, ball


@dataclass
class ZeroChain:
    """Finitely supported integer function on window points."""

    coeffs: dict

    def __post_init__(self):
        self.coeffs = {p: int(v) for p, v in self.coeffs.items() if v != 0}

    def support(self) -> set:
        return set(self.coeffs)

    def total(self) -> int:
        return sum(self.coeffs.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, ZeroChain) and self.coeffs == other.coeffs

    def restricted_to(self, points: Iterable) -> "ZeroChain":
        pts = set(points)
        return ZeroChain({p: v for p, v in self.coeffs.items() if p in pts})


@dataclass
class OneChain:
    """Bounded integer function on ordered pairs of propagation <= P."""

    coeffs: dict
    propagation: int

    def __post_init__(self):
        self.coeffs = {e: int(v) for e, v in self.coeffs.items() if v != 0}

    def sup_norm(self) -> int:
        return max((abs(v) for v in self.coeffs.values()), default=0)

    def validate(self, window: WindowedSpace) -> None:
        space = window.space
        for (x, y), v in self.coeffs.items():
            if x not in space or y not in space:
                raise ValueError(f"pair ({x!r}, {y!r}) leaves the window")
            if space.dist(x, y) > self.propagation:
                raise ValueError(
                    f"pair ({x!r}, {y!r}) exceeds propagation {self.propagation}"
                )


class InfeasibleFill(ValueError):
    """No fill exists at any bound: a closed core component carries mass."""

    def __init__(self, component, total: int):
        super().__init__(
            f"component of {len(component)} core points with no halo contact "
            f"carries total mass {total}"
        )
        self.component = frozenset(component)
        self.total = total


@dataclass
class FillResult:
    chain: OneChain
    norm: int


def apply_boundary(h: OneChain) -> ZeroChain:
    """Boundary of a one chain: each pair (x, y) deposits +1 at y and -1 at x."""
    out: dict = {}
    for (x, y), v in h.coeffs.items():
        out[y] = out.get(y, 0) + v
        out[x] = out.get(x, 0) - v
    return ZeroChain(out)


def _pair_components(window: WindowedSpace, P: int) -> list[set]:
    space = window.space
    seen: set = set()
    components = []
    for start in sorted(space.points, key=repr):
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for p in frontier:
                for q in ball(space, p, P):
                    if q not in comp:
                        comp.add(q)
                        nxt.append(q)
            frontier = nxt
        seen |= comp
        components.append(comp)
    return components


def _build_network(window: WindowedSpace, nodes: set, coeffs: dict, P: int, bound: int):
    """Transshipment feasibility network at a given sup-norm bound."""
    space = window.space
    net = FlowNetwork()
    pair_arcs: dict = {}
    snodes = sorted(nodes, key=repr)
    for p in snodes:
        for q in sorted(ball(space, p, P), key=repr):
            if q != p and q in nodes:
                pair_arcs[(p, q)] = net.add_edge(p, q, bound)
    demand = 0
    total = 0
    for p in snodes:
        c = coeffs.get(p, 0)
        if p in window.core:
            total += c
            if c > 0:
                net.add_edge(p, "t", c)
                demand += c
            elif c < 0:
                net.add_edge("s", p, -c)
    big = sum(abs(v) for v in coeffs.values()) + 1
    if total > 0:
        net.add_edge("s", "w", total)
    elif total < 0:
        net.add_edge("w", "t", -total)
        demand += -total
    for h in snodes:
        if h in window.halo:
            net.add_edge("w", h, big)
            net.add_edge(h, "w", big)
    return net, pair_arcs, demand


def _feasible(window: WindowedSpace, nodes: set, coeffs: dict, P: int, bound: int):
    net, pair_arcs, demand = _build_network(window, nodes, coeffs, P, bound)
    if net.max_flow("s", "t") < demand:
        return None
    return net, pair_arcs


def min_norm_fill(window: WindowedSpace, c: ZeroChain, P: int) -> FillResult:
    """Fill c by a one chain of propagation P with the least possible sup norm.

    The chain must be supported on the core and P may not exceed the halo
    depth, so mass exiting through the halo behaves as it would in the
    ambient space.  Raises :class:`InfeasibleFill` when some component of
    the distance-P graph lies entirely in the core yet carries nonzero
    total mass; otherwise the optimum is found by binary search on the
    bound, with max-flow integrality providing an integer filler.  The
    filler is canonicalised to net flows: at most one of h(x,y), h(y,x) is
    nonzero.
    """
    if P < 1:
        raise ValueError("propagation must be a positive integer")
    if P > window.halo_depth and window.halo:
        raise ValueError(
            f"propagation {P} exceeds halo depth {window.halo_depth}; "
            "exits through the halo would not be faithful"
        )
    if not c.support() <= window.core:
        raise ValueError("zero chain must be supported on the core")
    if not c.coeffs:
        return FillResult(OneChain({}, P), 0)

    relevant: set = set()
    for comp in _pair_components(window, P):
        if not comp & c.support():
            continue
        if not comp & window.halo:
            total = sum(c.coeffs.get(p, 0) for p in comp)
            if total != 0:
                raise InfeasibleFill(sorted(comp, key=repr), total)
        relevant |= comp

    hi = sum(abs(v) for v in c.coeffs.values())
    lo = 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        got = _feasible(window, relevant, c.coeffs, P, mid)
        if got is not None:
            best = (mid, got)
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None, "total mass bound must be feasible"
    norm, (net, pair_arcs) = best

    flows: dict = {}
    for (x, y), e in pair_arcs.items():
        f = net.flow_on(e)
        if f:
            flows[(x, y)] = f
    coeffs: dict = {}
    done: set = set()
    for (x, y), f in flows.items():
        if (y, x) in done:
            continue
        done.add((x, y))
        net_flow = f - flows.get((y, x), 0)
        if net_flow > 0:
            coeffs[(x, y)] = net_flow
        elif net_flow < 0:
            coeffs[(y, x)] = -net_flow
    chain = OneChain(coeffs, P)
    assert chain.sup_norm() <= norm
    got = apply_boundary(chain).restricted_to(window.core)
    assert got == c.restricted_to(window.core), "fill does not bound the chain"
    return FillResult(chain, norm)

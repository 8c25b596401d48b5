"""Finitely presented commutative monoids under bounded search.

Elements are vectors in N^k in multiset normal form; a presentation is a
finite set of relation pairs.  The word problem is attacked by breadth-first
congruence saturation, applying relations in both directions whenever one
side can be subtracted entrywise, bounded by a rewrite depth, an entry cap
and a state cap.  Completeness is explicitly surrendered: every verdict is
Yes with a replayable certificate, No with a statement of the exhausted
search region, or Unknown when a bound cut the search off.  A No never
claims more than the region it searched.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

DEFAULT_DEPTH = 12
DEFAULT_ENTRY_CAP = 20
DEFAULT_Z_CAP = 10
DEFAULT_N_MAX = 4
DEFAULT_STATE_CAP = 100_000

Vector = tuple

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class MonoidPresentation:
    rank: int
    relations: tuple[tuple[Vector, Vector], ...]

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        for lhs, rhs in self.relations:
            if len(lhs) != self.rank or len(rhs) != self.rank:
                raise ValueError("relation vectors must have length equal to the rank")
            if any(v < 0 for v in lhs + rhs):
                raise ValueError("relation vectors must be nonnegative")

    @property
    def free(self) -> bool:
        return not self.relations


def presentation(rank: int, relations: Iterable[Sequence[Sequence[int]]] = ()) -> MonoidPresentation:
    return MonoidPresentation(
        rank,
        tuple((tuple(l), tuple(r)) for l, r in relations),
    )


@dataclass
class Verdict:
    kind: str
    detail: str
    certificate: object = None

    @property
    def yes(self) -> bool:
        return self.kind == YES

    @property
    def no(self) -> bool:
        return self.kind == NO


def _check_vector(p: MonoidPresentation, v: Sequence[int]) -> Vector:
    t = tuple(int(x) for x in v)
    if len(t) != p.rank:
        raise ValueError(f"vector {t} does not match rank {p.rank}")
    if any(x < 0 for x in t):
        raise ValueError("elements are nonnegative integer vectors")
    return t


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vscale(n: int, u: Vector) -> Vector:
    return tuple(n * a for a in u)


def _apply(w: Vector, take: Vector, give: Vector) -> Vector | None:
    if all(a >= b for a, b in zip(w, take)):
        return tuple(a - b + c for a, b, c in zip(w, take, give))
    return None


def _saturate(
    p: MonoidPresentation,
    start: Vector,
    depth: int,
    entry_cap: int,
    state_cap: int,
    target: Vector | None = None,
):
    """Bounded closure of {start} under both directions of every relation.

    Returns (parents, complete, found) where parents maps each reached
    vector to its predecessor step and complete means nothing was cut off
    by a bound, so the closure is the whole congruence class.
    """
    parents: dict[Vector, tuple | None] = {start: None}
    if target is not None and target == start:
        return parents, True, True
    frontier = [start]
    truncated = False
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for ri, (lhs, rhs) in enumerate(p.relations):
                for forward, take, give in ((True, lhs, rhs), (False, rhs, lhs)):
                    w2 = _apply(w, take, give)
                    if w2 is None or w2 in parents:
                        continue
                    if max(w2) > entry_cap:
                        truncated = True
                        continue
                    if len(parents) >= state_cap:
                        truncated = True
                        continue
                    parents[w2] = (w, ri, forward)
                    if target is not None and w2 == target:
                        return parents, not truncated, True
                    nxt.append(w2)
        if not nxt:
            break
        frontier = nxt
    else:
        if frontier:
            truncated = True
    return parents, not truncated, target is not None and target in parents


def _path(parents: dict, end: Vector) -> tuple:
    steps = []
    cur = end
    while parents[cur] is not None:
        prev, ri, forward = parents[cur]
        steps.append((ri, forward))
        cur = prev
    return tuple(reversed(steps))


def replay_path(p: MonoidPresentation, start: Vector, steps) -> Vector:
    """Apply certificate steps from ``start``; raises if any step is illegal."""
    cur = tuple(start)
    for ri, forward in steps:
        lhs, rhs = p.relations[ri]
        take, give = (lhs, rhs) if forward else (rhs, lhs)
        nxt = _apply(cur, take, give)
        if nxt is None:
            raise ValueError(f"step ({ri}, {forward}) does not apply to {cur}")
        cur = nxt
    return cur


def equal(
    p: MonoidPresentation,
    u: Sequence[int],
    v: Sequence[int],
    depth: int = DEFAULT_DEPTH,
    entry_cap: int = DEFAULT_ENTRY_CAP,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Verdict:
    """Bounded word problem: can u be rewritten into v?

    Yes carries the rewrite path.  No means the whole congruence class of u
    was enumerated within the bounds and v is not in it; Unknown means a
    bound cut the enumeration off first.
    """
    u = _check_vector(p, u)
    v = _check_vector(p, v)
    parents, complete, found = _saturate(p, u, depth, entry_cap, state_cap, target=v)
    region = f"depth {depth}, entry cap {entry_cap}"
    if found:
        return Verdict(YES, f"rewrite path of length {len(_path(parents, v))}", _path(parents, v))
    if complete:
        return Verdict(
            NO,
            f"congruence class of {u} exhausted ({len(parents)} elements) within {region}; "
            f"{v} is not among them",
        )
    return Verdict(UNKNOWN, f"search from {u} truncated within {region}")


@dataclass
class LeqCertificate:
    z: Vector
    path: tuple

    def replay(self, p: MonoidPresentation, u: Vector, v: Vector) -> None:
        assert replay_path(p, vadd(u, self.z), self.path) == tuple(v)


def leq(
    p: MonoidPresentation,
    u: Sequence[int],
    v: Sequence[int],
    depth: int = DEFAULT_DEPTH,
    z_cap: int = DEFAULT_Z_CAP,
    entry_cap: int = DEFAULT_ENTRY_CAP,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Verdict:
    """Algebraic preorder: is there z with u + z = v, entries of z <= z_cap?

    Searches the bounded congruence class of v for a member dominating u.
    """
    u = _check_vector(p, u)
    v = _check_vector(p, v)
    parents, complete, _ = _saturate(p, v, depth, entry_cap, state_cap)
    candidates = []
    dominating = 0
    for w in parents:
        if all(a >= b for a, b in zip(w, u)):
            dominating += 1
            z = tuple(a - b for a, b in zip(w, u))
            if max(z, default=0) <= z_cap:
                candidates.append(z)
    region = f"depth {depth}, entry cap {entry_cap}, z_cap {z_cap}"
    if candidates:
        z = min(candidates)
        target_path = equal(p, vadd(u, z), v, depth, entry_cap, state_cap)
        assert target_path.yes, "a dominating class member must be reachable"
        return Verdict(YES, f"z = {z}", LeqCertificate(z, target_path.certificate))
    if complete:
        if dominating:
            detail = (
                f"class of {v} complete ({len(parents)} elements); dominating members "
                f"exist but every z exceeds z_cap within {region}"
            )
        else:
            detail = (
                f"class of {v} complete ({len(parents)} elements); no member dominates "
                f"{u} within {region}"
            )
        return Verdict(NO, detail)
    return Verdict(UNKNOWN, f"class of {v} truncated within {region}")


@dataclass
class AupCounterexample:
    x: Vector
    y: Vector
    n: int
    scaled_leq: Verdict
    plain_leq: Verdict


@dataclass
class AupResult:
    counterexample: AupCounterexample | None
    region: str

    @property
    def found(self) -> bool:
        return self.counterexample is not None


def check_almost_unperforated(
    p: MonoidPresentation,
    x_cap: int = 8,
    n_max: int = DEFAULT_N_MAX,
    depth: int = DEFAULT_DEPTH,
    z_cap: int = DEFAULT_Z_CAP,
    entry_cap: int = DEFAULT_ENTRY_CAP,
) -> AupResult:
    """Sweep for (x, y, n) with (n+1)x <= ny yet x not <= y within bounds.

    The sweep is ordered by (n, x, y) lexicographically and reports the
    first counterexample, whose Yes and No verdicts both carry their
    evidence.  A counterexample requires the plain leq to fail strongly:
    the congruence class of y is completely enumerated and no member
    dominates x at all.  Refusals that only happen because the witness z
    would exceed z_cap are skipped, as are truncated searches; neither is
    a refutation.
    """
    region = (
        f"x,y entries <= {x_cap}, 1 <= n <= {n_max}, depth {depth}, "
        f"z_cap {z_cap}, entry cap {entry_cap}"
    )
    vectors = list(product(range(x_cap + 1), repeat=p.rank))
    if p.free:
        # in a free commutative monoid both leq checks are plain arithmetic
        for n in range(1, n_max + 1):
            for x in vectors:
                u = vscale(n + 1, x)
                for y in vectors:
                    w = vscale(n, y)
                    if all(a >= b for a, b in zip(w, u)) and max(
                        (a - b for a, b in zip(w, u)), default=0
                    ) <= z_cap:
                        if not all(a <= b for a, b in zip(x, y)):
                            return AupResult(
                                AupCounterexample(
                                    x, y, n,
                                    leq(p, u, w, depth, z_cap, entry_cap),
                                    leq(p, x, y, depth, z_cap, entry_cap),
                                ),
                                region,
                            )
        return AupResult(None, region)

    closure_cache: dict[Vector, tuple] = {}

    def closure(v: Vector):
        got = closure_cache.get(v)
        if got is None:
            parents, complete, _ = _saturate(p, v, depth, entry_cap, DEFAULT_STATE_CAP)
            got = (tuple(parents), complete)
            closure_cache[v] = got
        return got

    def bounded_yes(u: Vector, v: Vector) -> bool:
        members, _ = closure(v)
        return any(
            all(a >= b for a, b in zip(w, u))
            and max((a - b for a, b in zip(w, u)), default=0) <= z_cap
            for w in members
        )

    def strong_no(u: Vector, v: Vector) -> bool:
        members, complete = closure(v)
        if not complete:
            return False
        return not any(all(a >= b for a, b in zip(w, u)) for w in members)

    for n in range(1, n_max + 1):
        for x in vectors:
            u = vscale(n + 1, x)
            for y in vectors:
                if not bounded_yes(u, vscale(n, y)):
                    continue
                if strong_no(x, y):
                    return AupResult(
                        AupCounterexample(
                            x, y, n,
                            leq(p, u, vscale(n, y), depth, z_cap, entry_cap),
                            leq(p, x, y, depth, z_cap, entry_cap),
                        ),
                        region,
                    )
    return AupResult(None, region)


@dataclass
class ProperInfinityResult:
    verdict: Verdict
    least_multiple: int | None
    multiple_verdict: Verdict | None


def properly_infinite(
    p: MonoidPresentation,
    x: Sequence[int],
    depth: int = DEFAULT_DEPTH,
    z_cap: int = DEFAULT_Z_CAP,
    entry_cap: int = DEFAULT_ENTRY_CAP,
    m_cap: int = 8,
) -> ProperInfinityResult:
    """Verdict of 2x <= x, plus the least multiple m with 2(mx) <= mx."""
    x = _check_vector(p, x)
    verdict = leq(p, vscale(2, x), x, depth, z_cap, entry_cap)
    least = None
    mv = None
    for m in range(1, m_cap + 1):
        mx = vscale(m, x)
        got = leq(p, vscale(2, mx), mx, depth, z_cap, entry_cap)
        if got.yes:
            least, mv = m, got
            break
    return ProperInfinityResult(verdict, least, mv)


@dataclass
class RefinementResult:
    found: bool
    quadruple: tuple[Vector, Vector, Vector, Vector] | None
    detail: str

    def replay(self, p: MonoidPresentation, a, b, c, d, depth=DEFAULT_DEPTH) -> None:
        w, x, y, z = self.quadruple
        assert equal(p, vadd(w, x), a, depth).yes
        assert equal(p, vadd(y, z), b, depth).yes
        assert equal(p, vadd(w, y), c, depth).yes
        assert equal(p, vadd(x, z), d, depth).yes


def refinement_instance(
    p: MonoidPresentation,
    a: Sequence[int],
    b: Sequence[int],
    c: Sequence[int],
    d: Sequence[int],
    depth: int = DEFAULT_DEPTH,
    cap: int = DEFAULT_ENTRY_CAP,
    entry_cap: int = DEFAULT_ENTRY_CAP,
) -> RefinementResult:
    """Bounded search for w,x,y,z refining a + b = c + d into a 2x2 grid.

    The summand w is enumerated in descending lexicographic order, so free
    presentations return the entrywise-minimum decomposition first.
    """
    a = _check_vector(p, a)
    b = _check_vector(p, b)
    c = _check_vector(p, c)
    d = _check_vector(p, d)
    pre = equal(p, vadd(a, b), vadd(c, d), depth, entry_cap)
    if not pre.yes:
        raise ValueError(
            f"precondition a + b = c + d not established: {pre.kind} ({pre.detail})"
        )

    def members(v: Vector) -> list[Vector]:
        parents, _, _ = _saturate(p, v, depth, entry_cap, DEFAULT_STATE_CAP)
        return sorted(parents)

    CA, CB, CC, CD = members(a), members(b), members(c), members(d)
    ub = tuple(
        min(max(m[i] for m in CA), max(m[i] for m in CC), cap)
        for i in range(p.rank)
    )
    for w in sorted(product(*(range(u + 1) for u in ub)), reverse=True):
        xs = sorted(
            tuple(m_i - w_i for m_i, w_i in zip(m, w))
            for m in CA
            if all(m_i >= w_i for m_i, w_i in zip(m, w))
        )
        if not xs:
            continue
        ys = sorted(
            tuple(m_i - w_i for m_i, w_i in zip(m, w))
            for m in CC
            if all(m_i >= w_i for m_i, w_i in zip(m, w))
        )
        for x in xs:
            for y in ys:
                zb = {
                    tuple(m_i - y_i for m_i, y_i in zip(m, y))
                    for m in CB
                    if all(m_i >= y_i for m_i, y_i in zip(m, y))
                }
                zd = {
                    tuple(m_i - x_i for m_i, x_i in zip(m, x))
                    for m in CD
                    if all(m_i >= x_i for m_i, x_i in zip(m, x))
                }
                common = sorted(zb & zd)
                if common:
                    return RefinementResult(True, (w, x, y, common[0]), "found")
    return RefinementResult(
        False, None, f"no quadruple within entry bound {cap}, depth {depth}"
    )


def cancellative_equal(
    p: MonoidPresentation,
    u: Sequence[int],
    v: Sequence[int],
    depth: int = DEFAULT_DEPTH,
    z_cap: int = DEFAULT_Z_CAP,
    entry_cap: int = DEFAULT_ENTRY_CAP,
) -> Verdict:
    """Equality in the cancellative hull: is there z with u + z = v + z?

    Yes means u and v become identified after adding some z with entries at
    most z_cap, i.e. they agree in the universal cancellative quotient.
    """
    u = _check_vector(p, u)
    v = _check_vector(p, v)
    any_unknown = False
    for z in product(range(z_cap + 1), repeat=p.rank):
        got = equal(p, vadd(u, z), vadd(v, z), depth, entry_cap)
        if got.yes:
            return Verdict(YES, f"z = {z}", (z, got.certificate))
        if got.kind == UNKNOWN:
            any_unknown = True
    region = f"z entries <= {z_cap}, depth {depth}, entry cap {entry_cap}"
    if any_unknown:
        return Verdict(UNKNOWN, f"some equality searches truncated within {region}")
    return Verdict(NO, f"no identifying z within {region}")

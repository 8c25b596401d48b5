"""Finite clopen castles: towers of bijectively linked levels over atoms.

A castle partitions a finite atom set into towers; a tower of height N is a
list of columns, each an ordered sequence of N distinct atoms, with column
position j holding the atom at level j.  The positional encoding carries
all the level-to-level bijections implicitly, so the composition laws
between them hold by construction and validation reduces to the partition
property.  Orbits are columns; the type vector of an integer function is
its per-orbit mass, which makes comparison questions exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .space import WindowedSpace, outer_boundary
from .tiling import Tiling, verify_tiling


@dataclass(frozen=True)
class Tower:
    height: int
    columns: tuple[tuple, ...]

    def level(self, j: int) -> set:
        return {col[j] for col in self.columns}


@dataclass
class Castle:
    towers: list[Tower]

    def atoms(self) -> set:
        return {a for t in self.towers for col in t.columns for a in col}

    def orbits(self) -> list[tuple]:
        """All columns across towers, in castle enumeration order."""
        return [col for t in self.towers for col in t.columns]


@dataclass
class TypeVector:
    """Per-orbit masses of an integer function, aligned with ``orbits``."""

    masses: tuple[int, ...]
    orbits: tuple[tuple, ...]

    def __le__(self, other: "TypeVector") -> bool:
        if self.orbits != other.orbits:
            raise ValueError("type vectors over different castles")
        return all(a <= b for a, b in zip(self.masses, other.masses))

    def by_orbit(self) -> dict:
        return dict(zip(self.orbits, self.masses))

    def strictly_positive(self) -> bool:
        return all(m > 0 for m in self.masses)


def make_castle(towers: Iterable[tuple[int, Sequence[Sequence]]]) -> Castle:
    return Castle(
        [Tower(h, tuple(tuple(col) for col in cols)) for h, cols in towers]
    )


def validate(c: Castle) -> list[str]:
    """All castle invariants; an empty list means the castle is valid."""
    violations = []
    seen: dict = {}
    for i, tower in enumerate(c.towers):
        if tower.height < 1:
            violations.append(f"tower {i}: height must be at least 1")
        if not tower.columns:
            violations.append(f"tower {i}: has no columns, levels would be empty")
        for ci, col in enumerate(tower.columns):
            if len(col) != tower.height:
                violations.append(
                    f"tower {i} column {ci}: length {len(col)} != height {tower.height}"
                )
            if len(set(col)) != len(col):
                violations.append(f"tower {i} column {ci}: repeated atom")
            for a in col:
                if a in seen:
                    violations.append(
                        f"atom {a!r} appears in tower {seen[a]} and tower {i}"
                    )
                seen[a] = i
    return violations


def _require_valid(c: Castle) -> None:
    violations = validate(c)
    if violations:
        raise ValueError("invalid castle: " + "; ".join(violations[:5]))


def refine(c: Castle, targets: Sequence[Iterable]) -> Castle:
    """Split towers until every level is contained in or disjoint from each target.

    Columns of a tower are grouped by their membership pattern: which levels
    lie in which target.  Each group becomes a thinner tower whose levels
    are then homogeneous with respect to every target.  Atoms, columns and
    hence orbits are untouched; only the grouping changes.
    """
    _require_valid(c)
    target_sets = [frozenset(t) for t in targets]
    atoms = c.atoms()
    for i, t in enumerate(target_sets):
        if not t <= atoms:
            raise ValueError(f"target {i} contains non-atoms")
    new_towers: list[Tower] = []
    for tower in c.towers:
        groups: dict[tuple, list] = {}
        for col in tower.columns:
            pattern = tuple(
                tuple(col[j] in t for t in target_sets) for j in range(tower.height)
            )
            groups.setdefault(pattern, []).append(col)
        for pattern in sorted(groups, key=repr):
            new_towers.append(Tower(tower.height, tuple(groups[pattern])))
    return Castle(new_towers)


def type_vector(c: Castle, f: Callable | dict) -> TypeVector:
    """Sum the values of f over each orbit (column)."""
    _require_valid(c)
    get = f.get if isinstance(f, dict) else None
    masses = []
    orbits = []
    for tower in c.towers:
        for col in tower.columns:
            if get is not None:
                m = sum(get(a, 0) for a in col)
            else:
                m = sum(f(a) for a in col)
            if m < 0:
                raise ValueError("type vectors need nonnegative functions")
            masses.append(m)
            orbits.append(col)
    return TypeVector(tuple(masses), tuple(orbits))


def indicator(A: Iterable) -> dict:
    return {a: 1 for a in A}


@dataclass
class ComparisonWitness:
    """Level-to-level bisections moving A into B with disjoint images.

    Each entry maps the atoms of one refined level inside A bijectively to
    the atoms of a level inside B; sources partition A and images are
    pairwise disjoint subsets of B.
    """

    bisections: list[dict]

    def replay(self, A: set, B: set) -> None:
        sources: list = []
        images: list = []
        for bij in self.bisections:
            assert len(set(bij.values())) == len(bij), "bisection not injective"
            sources.extend(bij.keys())
            images.extend(bij.values())
        assert len(sources) == len(set(sources)), "sources overlap"
        assert set(sources) == set(A), "sources do not partition A"
        assert len(images) == len(set(images)), "images overlap"
        assert set(images) <= set(B), "images leave B"


@dataclass
class ComparisonRefusal:
    tower_index: int
    a_levels: int
    b_levels: int


@dataclass
class ComparisonResult:
    ok: bool
    witness: ComparisonWitness | None = None
    refusal: ComparisonRefusal | None = None


def compare(c: Castle, A: Iterable, B: Iterable) -> ComparisonResult:
    """Decide subequivalence of A to B inside the castle, with certificate.

    After refining against {A, B}, count per tower the levels inside A and
    inside B; A is subequivalent to B iff the A-count never exceeds the
    B-count, and in that case level-to-level bisections realise the move.
    """
    _require_valid(c)
    A = frozenset(A)
    B = frozenset(B)
    refined = refine(c, [A, B])
    bisections: list[dict] = []
    for ti, tower in enumerate(refined.towers):
        a_levels = [j for j in range(tower.height) if tower.level(j) <= A]
        b_levels = [j for j in range(tower.height) if tower.level(j) <= B]
        if len(a_levels) > len(b_levels):
            return ComparisonResult(
                ok=False,
                refusal=ComparisonRefusal(ti, len(a_levels), len(b_levels)),
            )
        for j, k in zip(a_levels, b_levels):
            bisections.append({col[j]: col[k] for col in tower.columns})
    return ComparisonResult(ok=True, witness=ComparisonWitness(bisections))


def is_order_unit(c: Castle, f: Callable | dict) -> bool:
    """True iff the support of f meets every orbit."""
    return type_vector(c, f).strictly_positive()


def order_ideal_lattice(c: Castle, max_orbits: int = 16) -> list[frozenset]:
    """All order ideals of the castle's type semigroup, as orbit index sets.

    Ideals correspond to invariant atom sets, i.e. unions of orbits; each is
    reported by its generating set of orbit indices.  There are 2^k of them
    for k orbits, so enumeration is capped.
    """
    _require_valid(c)
    k = len(c.orbits())
    if k > max_orbits:
        raise ValueError(
            f"{k} orbits give 2^{k} ideals; raise max_orbits to enumerate anyway"
        )
    out = []
    for mask in range(1 << k):
        out.append(frozenset(i for i in range(k) if mask >> i & 1))
    return out


def castle_from_tiling(t: Tiling) -> Castle:
    """Tiles become orbits: one tower per tile size, one column per tile.

    Atoms of each tile are ordered canonically (by identifier order), which
    fixes the positional bijections between levels.  The tiling is verified
    first; a broken partition propagates as :class:`PartitionError`.
    """
    verify_tiling(t)
    by_size: dict[int, list[tuple]] = {}
    for tile in t.tiles:
        col = tuple(sorted(tile, key=repr))
        by_size.setdefault(len(col), []).append(col)
    towers = [
        Tower(size, tuple(sorted(by_size[size])))
        for size in sorted(by_size)
    ]
    return Castle(towers)


def random_castle(rng, max_atoms: int = 60) -> Castle:
    """Seeded random castle for sweeps: random tower heights and widths."""
    n = rng.randint(1, max_atoms)
    atoms = list(range(n))
    rng.shuffle(atoms)
    towers = []
    pos = 0
    while pos < n:
        remaining = n - pos
        height = rng.randint(1, min(6, remaining))
        width = rng.randint(1, max(1, remaining // height))
        take = height * width
        if take > remaining:
            height, width, take = remaining, 1, remaining
        chunk = atoms[pos:pos + take]
        pos += take
        columns = tuple(
            tuple(chunk[k * height:(k + 1) * height]) for k in range(width)
        )
        towers.append(Tower(height, columns))
    return Castle(towers)


def invariance_defect(c: Castle, window: WindowedSpace, R: int) -> Fraction:
    """Worst orbit boundary ratio: max over orbits of |bd_R(orbit)| / |orbit|.

    Orbits whose boundary meets the halo are skipped; the window cannot
    speak for the ambient space there.
    """
    _require_valid(c)
    space = window.space
    atoms = c.atoms()
    for a in atoms:
        if a not in space:
            raise ValueError(f"castle atom {a!r} is not a window point")
    best = None
    for orbit in c.orbits():
        F = set(orbit)
        bd = outer_boundary(space, F, R)
        if bd & window.halo:
            continue
        ratio = Fraction(len(bd), len(F))
        if best is None or ratio > best:
            best = ratio
    if best is None:
        raise ValueError("every orbit is halo-contaminated at this radius")
    return best

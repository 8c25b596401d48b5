import random
from fractions import Fraction

import pytest

from coarse_lab.castle import (
    Castle,
    Tower,
    castle_from_tiling,
    compare,
    indicator,
    invariance_defect,
    is_order_unit,
    make_castle,
    order_ideal_lattice,
    random_castle,
    refine,
    type_vector,
    validate,
)
from coarse_lab.space import integer_window
from coarse_lab.tiling import PartitionError, Tiling, tile_interval


def two_tower_castle():
    # towers: (height 3, 2 columns) and (height 2, 1 column)
    return make_castle(
        [
            (3, [("a0", "a1", "a2"), ("b0", "b1", "b2")]),
            (2, [("c0", "c1")]),
        ]
    )


def level_partition(c: Castle) -> set:
    return {frozenset(t.level(j)) for t in c.towers for j in range(t.height)}


def orbit_masses(c: Castle, f) -> dict:
    tv = type_vector(c, f)
    return {frozenset(o): m for o, m in tv.by_orbit().items()}


# -- validation ---------------------------------------------------------------


def test_validate_ok():
    c = make_castle([(2, [("a", "c"), ("b", "d")])])
    assert validate(c) == []


def test_validate_repeated_atom():
    c = make_castle([(2, [("a", "c"), ("a", "d")])])
    assert any("appears" in v for v in validate(c))


def test_validate_empty_tower():
    c = Castle([Tower(2, ())])
    assert any("no columns" in v for v in validate(c))


def test_validate_column_length_mismatch():
    c = Castle([Tower(3, (("a", "b"),))])
    assert any("length" in v for v in validate(c))


# -- refinement ---------------------------------------------------------------


def test_refine_pattern_split():
    c = make_castle([(2, [("a", "c"), ("b", "d")])])
    r = refine(c, [{"a", "d"}])
    assert len(r.towers) == 2
    assert all(len(t.columns) == 1 for t in r.towers)
    assert level_partition(r) == {
        frozenset({"a"}),
        frozenset({"b"}),
        frozenset({"c"}),
        frozenset({"d"}),
    }
    for t in r.towers:
        for j in range(t.height):
            lvl = t.level(j)
            assert lvl <= {"a", "d"} or not (lvl & {"a", "d"})


def test_refine_full_level_target_is_noop():
    c = two_tower_castle()
    target = {"a1", "b1"}  # level 1 of tower 0
    r = refine(c, [target])
    assert level_partition(r) == level_partition(c)


def test_refine_empty_target_is_noop():
    c = two_tower_castle()
    r = refine(c, [set()])
    assert level_partition(r) == level_partition(c)


def test_refine_idempotent_and_preserves_type_vectors():
    rng = random.Random(5)
    for _ in range(60):
        c = random_castle(rng, 40)
        targets = [
            set(rng.sample(sorted(c.atoms()), rng.randint(0, len(c.atoms()))))
            for _ in range(rng.randint(1, 3))
        ]
        r1 = refine(c, targets)
        assert validate(r1) == []
        for t in r1.towers:
            for j in range(t.height):
                lvl = t.level(j)
                for tgt in targets:
                    assert lvl <= tgt or not (lvl & tgt)
        r2 = refine(r1, targets)
        assert level_partition(r2) == level_partition(r1)
        assert sorted(r1.orbits()) == sorted(c.orbits())
        f = {a: rng.randint(0, 3) for a in c.atoms()}
        assert orbit_masses(c, f) == orbit_masses(r1, f)


# -- type vectors -------------------------------------------------------------


def test_type_vector_constant_one_gives_heights():
    c = two_tower_castle()
    tv = type_vector(c, lambda a: 1)
    assert tv.masses == (3, 3, 2)


def test_type_vector_level_indicator():
    c = two_tower_castle()
    tv = type_vector(c, indicator({"a1", "b1"}))
    assert tv.masses == (1, 1, 0)


def test_type_vector_zero():
    c = two_tower_castle()
    assert type_vector(c, lambda a: 0).masses == (0, 0, 0)


# -- comparison ---------------------------------------------------------------


def test_compare_witness_example():
    c = two_tower_castle()
    A = {"a0", "b0"}  # one level of tower 0
    B = {"a1", "b1", "a2", "b2", "c0"}  # two levels of tower 0, one of tower 1
    res = compare(c, A, B)
    assert res.ok
    res.witness.replay(A, B)


def test_compare_refusal_example():
    c = two_tower_castle()
    A = {"a0", "b0"}
    B = {"a1", "b1", "a2", "b2", "c0"}
    res = compare(c, B, A)
    assert not res.ok
    assert res.refusal.tower_index == 0
    assert (res.refusal.a_levels, res.refusal.b_levels) == (2, 1)


def test_compare_empty_A():
    c = two_tower_castle()
    res = compare(c, set(), {"a0"})
    assert res.ok
    res.witness.replay(set(), {"a0"})


def test_compare_matches_type_vector_oracle():
    rng = random.Random(17)
    for _ in range(200):
        c = random_castle(rng, 40)
        atoms = sorted(c.atoms())
        A = set(rng.sample(atoms, rng.randint(0, len(atoms))))
        B = set(rng.sample(atoms, rng.randint(0, len(atoms))))
        res = compare(c, A, B)
        expected = type_vector(c, indicator(A)) <= type_vector(c, indicator(B))
        assert res.ok == expected
        if res.ok:
            res.witness.replay(A, B)


def test_almost_unperforation_holds_exactly():
    # in the free per-orbit semigroup, (n+1)v <= nw forces v <= w
    rng = random.Random(23)
    for _ in range(300):
        k = rng.randint(1, 6)
        n = rng.randint(1, 5)
        w = [rng.randint(0, 9) for _ in range(k)]
        v = [rng.randint(0, 9) for _ in range(k)]
        if all((n + 1) * a <= n * b for a, b in zip(v, w)):
            assert all(a <= b for a, b in zip(v, w))


# -- order units and ideals ---------------------------------------------------


def test_order_unit_constant_one():
    c = two_tower_castle()
    assert is_order_unit(c, lambda a: 1)


def test_order_unit_misses_a_tower():
    c = two_tower_castle()
    assert not is_order_unit(c, indicator({"a0", "b1"}))


def test_order_unit_single_orbit():
    c = make_castle([(3, [("x", "y", "z")])])
    assert is_order_unit(c, indicator({"y"}))


def test_ideal_lattice_counts():
    single = make_castle([(2, [("x", "y")])])
    assert order_ideal_lattice(single) == [frozenset(), frozenset({0})]
    two = make_castle([(1, [("x",), ("y",)])])
    assert len(order_ideal_lattice(two)) == 4
    three = make_castle([(1, [("x",), ("y",), ("z",)])])
    assert len(order_ideal_lattice(three)) == 8
    big = random_castle(random.Random(1), 60)
    if len(big.orbits()) > 16:
        with pytest.raises(ValueError):
            order_ideal_lattice(big)


# -- castle from tiling and invariance defect ---------------------------------


def test_castle_from_interval_tiling():
    w = integer_window(-100, 100, 2)
    t = tile_interval(w, 1, Fraction(1, 10))
    c = castle_from_tiling(t)
    assert validate(c) == []
    heights = sorted(tw.height for tw in c.towers)
    sizes = sorted({len(tile) for tile in t.tiles})
    assert heights == sizes
    assert sorted(len(o) for o in c.orbits()) == sorted(len(x) for x in t.tiles)


def test_castle_from_single_tile():
    w = integer_window(0, 4, 1)
    t = tile_interval(w, 1, Fraction(1, 10))  # core shorter than N: one tile
    assert len(t.tiles) == 1
    c = castle_from_tiling(t)
    assert len(c.towers) == 1
    assert len(c.towers[0].columns) == 1
    assert c.towers[0].height == 5


def test_castle_groups_by_size():
    w = integer_window(0, 16, 2)
    from coarse_lab.tiling import TileMeta

    tiles = [frozenset(range(0, 5)), frozenset(range(5, 10)), frozenset(range(10, 17))]
    meta = [TileMeta(Fraction(0), 0, True)] * 3
    t = Tiling(w, tiles, 1, Fraction(2, 1), meta, 7)
    c = castle_from_tiling(t)
    assert sorted((tw.height, len(tw.columns)) for tw in c.towers) == [(5, 2), (7, 1)]


def test_castle_from_broken_tiling_raises():
    w = integer_window(0, 9, 1)
    t = Tiling(w, [frozenset({0, 1})], 1, Fraction(1, 2), [], 1)
    with pytest.raises(PartitionError):
        castle_from_tiling(t)


def test_defect_equals_max_tile_ratio():
    w = integer_window(-300, 300, 2)
    t = tile_interval(w, 1, Fraction(1, 10))
    c = castle_from_tiling(t)
    assert invariance_defect(c, w, 1) == Fraction(2, 21)
    assert invariance_defect(c, w, 1) == t.max_ratio()


def test_defect_whole_window_single_orbit():
    w = integer_window(0, 9, 0)
    c = make_castle([(10, [tuple(range(10))])])
    assert invariance_defect(c, w, 3) == 0


def test_defect_singleton_orbits():
    w = integer_window(-5, 5, 1)
    c = make_castle([(1, [(i,) for i in range(-5, 6)])])
    assert invariance_defect(c, w, 1) == 2


def test_defect_atom_mismatch():
    w = integer_window(0, 3, 0)
    c = make_castle([(1, [("nope",)])])
    with pytest.raises(ValueError, match="window point"):
        invariance_defect(c, w, 1)

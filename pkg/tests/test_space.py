import random
from fractions import Fraction

import pytest

from coarse_lab.space import (
    BoxSpace,
    IntegerLineSpace,
    IntegerSubsetSpace,
    MatrixSpace,
    StackedSpace,
    ball,
    box_window,
    build_graph_metric,
    diameter,
    folner_ratio,
    geometry_profile,
    integer_window,
    outer_boundary,
    regular_tree_window,
    stacked_product_window,
    subset_window,
)


def brute_boundary(space, F, R):
    """Definition replay: points outside F at distance <= R from F."""
    F = set(F)
    return {
        x
        for x in space.points
        if x not in F and any(space.dist(x, f) <= R for f in F)
    }


def brute_ball(space, center, R):
    return {y for y in space.points if space.dist(center, y) <= R}


# -- graph metric -----------------------------------------------------------


def test_path_graph_two_hops():
    s = build_graph_metric([0, 1, 2], [(0, 1), (1, 2)])
    assert s.dist(0, 2) == 2


def test_single_vertex_identity():
    s = build_graph_metric(["v"], [])
    assert s.dist("v", "v") == 0


def test_disconnected_sentinel():
    # components of sizes 2 and 1: sentinel is 3 + 1
    s = build_graph_metric(["a", "b", "c"], [("a", "b")])
    assert s.dist("a", "c") == 4
    assert s.dist("c", "b") == 4
    assert s.sentinel == 4


def test_duplicate_vertex_rejected():
    with pytest.raises(ValueError):
        build_graph_metric(["a", "a"], [])


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        build_graph_metric(["a", "b"], [("a", "a")])


def test_edge_to_undeclared_vertex_rejected():
    with pytest.raises(ValueError):
        build_graph_metric(["a"], [("a", "b")])


def test_graph_ball_crosses_sentinel():
    s = build_graph_metric(["a", "b", "c"], [("a", "b")])
    assert ball(s, "a", 1) == {"a", "b"}
    assert ball(s, "a", 4) == {"a", "b", "c"}


# -- balls ------------------------------------------------------------------


def test_ball_on_path():
    s = build_graph_metric(range(5), [(i, i + 1) for i in range(4)])
    assert ball(s, 2, 1) == {1, 2, 3}
    assert ball(s, 2, 1) == brute_ball(s, 2, 1)


def test_ball_radius_zero():
    s = IntegerLineSpace(-3, 3)
    assert ball(s, 0, 0) == {0}


def test_tree_root_ball():
    w = regular_tree_window(3, 2, 0)
    b = ball(w.space, "v", 2)
    assert len(b) == 10  # 1 + 3 + 6
    assert b == brute_ball(w.space, "v", 2)


def test_ball_unknown_center():
    s = IntegerLineSpace(0, 5)
    with pytest.raises(ValueError):
        ball(s, 99, 1)


# -- outer boundary ---------------------------------------------------------


def test_boundary_empty_set():
    s = IntegerLineSpace(0, 10)
    assert outer_boundary(s, set(), 3) == set()


def test_boundary_interval_in_z_window():
    w = integer_window(-50, 50, 0)
    F = set(range(0, 10))
    got = outer_boundary(w.space, F, 2)
    assert got == {-2, -1, 10, 11}
    assert len(got) == 4  # 2R
    assert got == brute_boundary(w.space, F, 2)


def test_boundary_singleton_on_path():
    s = build_graph_metric(range(5), [(i, i + 1) for i in range(4)])
    assert outer_boundary(s, {2}, 1) == {1, 3}


def test_boundary_disjoint_and_within_R():
    rng = random.Random(7)
    w = integer_window(-30, 30, 0)
    for _ in range(25):
        F = set(rng.sample(w.space.points, rng.randint(1, 12)))
        R = rng.randint(0, 4)
        got = outer_boundary(w.space, F, R)
        assert got == brute_boundary(w.space, F, R)
        assert not (got & F)
        assert all(min(abs(x - f) for f in F) <= R for x in got)


def test_boundary_monotonicity():
    rng = random.Random(11)
    s = IntegerLineSpace(-40, 40)
    for _ in range(25):
        F = set(rng.sample(s.points, rng.randint(1, 10)))
        extra = set(rng.sample(s.points, rng.randint(0, 6)))
        F2 = F | extra
        R, R2 = sorted((rng.randint(0, 5), rng.randint(0, 5)))
        assert outer_boundary(s, F, R) <= F2 | outer_boundary(s, F2, R)
        assert outer_boundary(s, F, R) <= outer_boundary(s, F, R2)


def test_ball_is_center_plus_boundary():
    rng = random.Random(3)
    w = regular_tree_window(3, 3, 0)
    pts = sorted(w.space.points)
    for _ in range(10):
        x = rng.choice(pts)
        R = rng.randint(0, 3)
        assert ball(w.space, x, R) == {x} | outer_boundary(w.space, {x}, R)


def test_z_interval_boundary_is_2R():
    rng = random.Random(19)
    w = integer_window(-100, 100, 0)
    for _ in range(30):
        a = rng.randint(-80, 60)
        b = a + rng.randint(0, 15)
        R = rng.randint(1, 5)
        F = set(range(a, b + 1))
        assert len(outer_boundary(w.space, F, R)) == 2 * R


# -- Folner ratio -----------------------------------------------------------


def test_folner_ratio_interval():
    w = integer_window(-200, 200, 0)
    F = set(range(0, 21))
    assert folner_ratio(w.space, F, 1) == Fraction(2, 21)


def test_folner_ratio_whole_window():
    s = IntegerLineSpace(0, 9)
    assert folner_ratio(s, set(s.points), 3) == 0


def test_folner_ratio_tree_ball():
    w = regular_tree_window(3, 5, 0)
    F = ball(w.space, "v", 3)
    assert len(F) == 22
    assert folner_ratio(w.space, F, 1) == Fraction(24, 22)


def test_folner_ratio_empty_set_rejected():
    s = IntegerLineSpace(0, 5)
    with pytest.raises(ValueError):
        folner_ratio(s, set(), 1)


# -- diameter ---------------------------------------------------------------


def test_diameter_singleton():
    s = IntegerLineSpace(0, 5)
    assert diameter(s, {3}) == 0


def test_diameter_interval():
    s = IntegerLineSpace(-20, 20)
    assert diameter(s, set(range(0, 10))) == 9


def test_diameter_spread_set():
    s = IntegerLineSpace(-20, 20)
    assert diameter(s, {0, 1, 4}) == 4


def test_diameter_empty_rejected():
    s = IntegerLineSpace(0, 5)
    with pytest.raises(ValueError):
        diameter(s, set())


# -- stacked product --------------------------------------------------------


def test_stacked_single_point_column():
    X = build_graph_metric(["p"], [])
    w = stacked_product_window(X, 8)
    s = w.space
    for n in range(8):
        for m in range(8):
            assert s.dist(("p", n), ("p", m)) == abs(n - m)


def test_stacked_metric_formula():
    X = build_graph_metric(["x", "y"], [("x", "y")])
    s = StackedSpace(X, 5)
    assert s.dist(("x", 0), ("y", 0)) == 1
    assert s.dist(("x", 2), ("y", 3)) == 6


def test_stacked_base_ball():
    X = build_graph_metric(["x", "y"], [("x", "y")])
    s = StackedSpace(X, 5)
    got = ball(s, ("x", 0), 1)
    assert got == {("x", 0), ("x", 1), ("y", 0)}
    assert len(got) == 3


def test_stacked_triangle_inequality():
    X = build_graph_metric(["a", "b", "c"], [("a", "b"), ("b", "c")])
    s = StackedSpace(X, 6)
    rng = random.Random(5)
    pts = sorted(s.points)
    for _ in range(300):
        p, q, r = (rng.choice(pts) for _ in range(3))
        assert s.dist(p, r) <= s.dist(p, q) + s.dist(q, r)


def test_stacked_boundary_matches_brute():
    X = build_graph_metric(["a", "b", "c"], [("a", "b"), ("b", "c")])
    s = StackedSpace(X, 7)
    rng = random.Random(13)
    pts = sorted(s.points)
    for _ in range(20):
        F = set(rng.sample(pts, rng.randint(1, 8)))
        R = rng.randint(0, 4)
        assert s.boundary_of(F, R) == brute_boundary(s, F, R)
        assert s.diameter_of(F) == max(
            s.dist(p, q) for p in F for q in F
        )


def test_stacked_window_split():
    X = build_graph_metric(["p"], [])
    w = stacked_product_window(X, 8)
    assert w.halo_depth == 2
    assert w.core == frozenset(("p", n) for n in range(6))
    assert w.halo == frozenset(("p", n) for n in (6, 7))


def test_stacked_window_rejects_small_K():
    X = build_graph_metric(["p"], [])
    with pytest.raises(ValueError):
        stacked_product_window(X, 1)


# -- box space --------------------------------------------------------------


def test_box_space_cycle_distance():
    s = BoxSpace([4, 8])
    assert s.dist((0, 0), (0, 3)) == 1
    assert s.dist((1, 0), (1, 4)) == 4
    # cross-block: D_1 + D_2 = (2+1) + (2+1+4+1) = 11
    assert s.dist((0, 2), (1, 5)) == 11


def test_box_space_boundary_matches_brute():
    s = BoxSpace([2, 4, 8])
    rng = random.Random(23)
    pts = sorted(s.points)
    for _ in range(20):
        F = set(rng.sample(pts, rng.randint(1, 6)))
        R = rng.randint(0, 10)
        assert s.boundary_of(F, R) == brute_boundary(s, F, R)
        assert s.diameter_of(F) == max(s.dist(p, q) for p in F for q in F)


def test_box_window_has_no_halo():
    w = box_window([2, 4])
    assert w.halo == frozenset()
    assert w.core == frozenset(w.space.points)


# -- matrix space -----------------------------------------------------------


def test_matrix_space_valid():
    m = [[0, 1, 2], [1, 0, 1], [2, 1, 0]]
    s = MatrixSpace(["a", "b", "c"], m)
    assert s.dist("a", "c") == 2


def test_matrix_space_rejects_asymmetry():
    with pytest.raises(ValueError):
        MatrixSpace(["a", "b"], [[0, 1], [2, 0]])


def test_matrix_space_rejects_triangle_violation():
    with pytest.raises(ValueError):
        MatrixSpace(["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])


def test_matrix_space_rejects_zero_off_diagonal():
    with pytest.raises(ValueError):
        MatrixSpace(["a", "b"], [[0, 0], [0, 0]])


# -- windows ----------------------------------------------------------------


def test_integer_window_split():
    w = integer_window(0, 9, 2)
    assert w.core == frozenset(range(0, 10))
    assert w.halo == frozenset({-2, -1, 10, 11})
    assert w.halo_depth_report() == 2


def test_window_partition_enforced():
    s = IntegerLineSpace(0, 4)
    with pytest.raises(ValueError):
        from coarse_lab.space import WindowedSpace

        WindowedSpace(s, frozenset({0, 1}), frozenset({1, 2, 3, 4}), 1)


def test_halo_contamination_flag():
    w = integer_window(0, 9, 3)
    assert not w.halo_contaminated({4, 5}, 2)
    assert w.halo_contaminated({0, 1}, 2)


def test_geometry_profile():
    w = regular_tree_window(3, 3, 0)
    assert geometry_profile(w.space, 1) == 4  # interior point plus 3 neighbours
    s = IntegerLineSpace(0, 100)
    assert geometry_profile(s, 5) == 11


def test_subset_window():
    w = subset_window([1, 4, 9, 16])
    assert w.halo == frozenset()
    assert w.space.dist(4, 16) == 12
    with pytest.raises(ValueError):
        IntegerSubsetSpace([3, 3])
    with pytest.raises(ValueError):
        IntegerSubsetSpace([])

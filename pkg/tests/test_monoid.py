import random
from itertools import product

import pytest

from coarse_lab.monoid import (
    cancellative_equal,
    check_almost_unperforated,
    equal,
    leq,
    presentation,
    properly_infinite,
    refinement_instance,
    replay_path,
    vadd,
    vscale,
)

FREE1 = presentation(1)
FREE2 = presentation(2)
FREE3 = presentation(3)
NUM23 = presentation(2, [[(3, 0), (0, 2)]])  # 3a = 2b, isomorphic to <2,3> in N
IDEM = presentation(1, [[(2,), (1,)]])  # 2a = a
SHRINK = presentation(1, [[(3,), (2,)]])  # 3a = 2a


def image23(v):
    # the isomorphism onto the numerical monoid <2,3>: a -> 2, b -> 3
    return 2 * v[0] + 3 * v[1]


# -- equal --------------------------------------------------------------------


def test_equal_free_is_vector_equality():
    assert equal(FREE2, (1, 2), (1, 2)).yes
    got = equal(FREE2, (1, 2), (2, 1))
    assert got.no  # closure of a free element is itself, so this is exhaustive


def test_equal_defining_relation_one_step():
    got = equal(NUM23, (3, 0), (0, 2))
    assert got.yes
    assert len(got.certificate) == 1
    assert replay_path(NUM23, (3, 0), got.certificate) == (0, 2)


def test_equal_generators_distinct():
    got = equal(NUM23, (1, 0), (0, 1))
    assert got.no
    assert "exhausted" in got.detail


def test_equal_certificates_replay():
    rng = random.Random(3)
    for _ in range(40):
        u = (rng.randint(0, 6), rng.randint(0, 4))
        v = (rng.randint(0, 6), rng.randint(0, 4))
        got = equal(NUM23, u, v)
        if got.yes:
            assert replay_path(NUM23, u, got.certificate) == v
            assert image23(u) == image23(v)
        elif got.no:
            assert image23(u) != image23(v)


def test_equal_rank_mismatch():
    with pytest.raises(ValueError):
        equal(FREE2, (1,), (1, 0))


def test_equal_unknown_when_truncated():
    # the idempotent class of a is infinite upward; a tiny entry cap truncates it
    got = equal(IDEM, (1,), (19,), depth=30, entry_cap=3)
    assert got.kind == "unknown"


# -- leq ----------------------------------------------------------------------


def test_leq_zero_below_everything():
    got = leq(FREE3, (0, 0, 0), (2, 3, 4))
    assert got.yes
    assert got.certificate.z == (2, 3, 4)


def test_leq_equality_case():
    got = leq(NUM23, (3, 0), (0, 2))
    assert got.yes
    assert got.certificate.z == (0, 0)


def test_leq_generator_gap():
    got = leq(NUM23, (1, 0), (0, 1))
    assert got.no  # needs image 1, which <2,3> lacks


def test_leq_certificates_replay():
    rng = random.Random(9)
    for _ in range(30):
        u = (rng.randint(0, 4), rng.randint(0, 3))
        v = (rng.randint(0, 4), rng.randint(0, 3))
        got = leq(NUM23, u, v)
        if got.yes:
            got.certificate.replay(NUM23, u, v)


def test_leq_monotone_in_bounds():
    pairs = [((a, b), (c, d)) for a, b, c, d in product(range(3), repeat=4)]
    for u, v in pairs:
        low = leq(NUM23, u, v, depth=2, z_cap=2)
        high = leq(NUM23, u, v, depth=12, z_cap=10)
        if low.yes:
            assert high.yes


# -- almost unperforation -----------------------------------------------------


def test_aup_free_has_no_counterexample():
    res = check_almost_unperforated(FREE3, x_cap=4, n_max=3)
    assert not res.found


def test_aup_numerical_monoid_counterexample():
    res = check_almost_unperforated(NUM23, x_cap=8, n_max=4)
    assert res.found
    ce = res.counterexample
    assert (ce.x, ce.y, ce.n) == ((1, 0), (0, 1), 2)
    assert ce.scaled_leq.yes
    ce.scaled_leq.certificate.replay(NUM23, vscale(3, ce.x), vscale(2, ce.y))
    assert ce.plain_leq.no


def test_aup_idempotent_none():
    res = check_almost_unperforated(IDEM, x_cap=4, n_max=3)
    assert not res.found


def test_aup_counterexample_found_at_small_bounds():
    for depth, zcap in ((2, 3), (5, 6)):
        res = check_almost_unperforated(NUM23, x_cap=8, n_max=4, depth=depth, z_cap=zcap)
        assert res.found
        ce = res.counterexample
        assert (ce.x, ce.y, ce.n) == ((1, 0), (0, 1), 2)


def test_aup_fast_path_matches_generic():
    # a degenerate relation forces the generic code path on a free monoid
    free_like = presentation(2, [[(1, 1), (1, 1)]])
    fast = check_almost_unperforated(FREE2, x_cap=3, n_max=2)
    slow = check_almost_unperforated(free_like, x_cap=3, n_max=2)
    assert fast.found == slow.found == False  # noqa: E712


# -- properly infinite --------------------------------------------------------


def test_pinf_idempotent_yes():
    res = properly_infinite(IDEM, (1,))
    assert res.verdict.yes
    assert res.least_multiple == 1


def test_pinf_free_no():
    res = properly_infinite(FREE1, (1,))
    assert res.verdict.no
    assert res.least_multiple is None


def test_pinf_shrink_multiple_two():
    res = properly_infinite(SHRINK, (1,))
    assert res.verdict.no  # 2a <= a fails
    assert res.least_multiple == 2  # 2(2a) = 4a = 3a = 2a
    assert res.multiple_verdict.yes


# -- refinement ---------------------------------------------------------------


def test_refinement_free_rank2():
    res = refinement_instance(FREE2, (1, 0), (0, 1), (1, 0), (0, 1))
    assert res.found
    assert res.quadruple == ((1, 0), (0, 0), (0, 0), (0, 1))
    res.replay(FREE2, (1, 0), (0, 1), (1, 0), (0, 1))


def test_refinement_free_rank1():
    res = refinement_instance(FREE1, (2,), (3,), (4,), (1,))
    assert res.found
    assert res.quadruple == ((2,), (0,), (2,), (1,))
    res.replay(FREE1, (2,), (3,), (4,), (1,))


def test_refinement_precondition_violation():
    with pytest.raises(ValueError, match="precondition"):
        refinement_instance(FREE1, (1,), (1,), (3,), (3,))


def test_refinement_with_relations():
    res = refinement_instance(NUM23, (3, 0), (0, 1), (0, 2), (0, 1))
    assert res.found
    res.replay(NUM23, (3, 0), (0, 1), (0, 2), (0, 1))


# -- cancellative hull --------------------------------------------------------


def test_cancellative_equal_trivially():
    got = cancellative_equal(FREE2, (1, 1), (1, 1))
    assert got.yes
    assert got.certificate[0] == (0, 0)


def test_cancellative_collapses_idempotent():
    got = cancellative_equal(IDEM, (1,), (0,))
    assert got.yes
    z, path = got.certificate
    assert z == (1,)
    assert replay_path(IDEM, vadd((1,), z), path) == vadd((0,), z)


def test_cancellative_free_distinct():
    got = cancellative_equal(FREE2, (1, 0), (0, 1))
    assert got.no


def test_cancellative_shrink_identifies_multiples():
    # in the hull of 3a=2a, 3a and 2a are equal with z = 0; a and 2a need z
    assert cancellative_equal(SHRINK, (3,), (2,)).yes
    got = cancellative_equal(SHRINK, (1,), (2,))
    assert got.yes


# -- verdicts are honest ------------------------------------------------------


def test_no_verdicts_state_region():
    got = leq(NUM23, (1, 0), (0, 1))
    assert "z_cap" in got.detail or "depth" in got.detail


def test_free_agrees_with_coordinatewise_arithmetic():
    rng = random.Random(21)
    for _ in range(50):
        u = tuple(rng.randint(0, 5) for _ in range(3))
        v = tuple(rng.randint(0, 5) for _ in range(3))
        assert equal(FREE3, u, v).yes == (u == v)
        expect = all(a <= b for a, b in zip(u, v))
        assert leq(FREE3, u, v).yes == expect

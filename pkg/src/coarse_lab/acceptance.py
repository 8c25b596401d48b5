"""The acceptance suite: ten criteria, each replayed from scratch.

Every criterion is a function returning a :class:`CriterionResult`; the CLI
``selftest`` subcommand and the pytest acceptance module both run these.
All tolerances are exact (rational arithmetic); the only inexact quantities
are wall-clock budgets, which are part of the stated criteria.  Expensive
intermediates (the four tilings) are shared through a context dict so the
glue criterion can reuse them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .amenability import HallViolator, ParadoxWitness, doubling_check
from .castle import (
    castle_from_tiling,
    compare,
    indicator,
    invariance_defect,
    random_castle,
    refine,
    type_vector,
    validate,
)
from .homology import ZeroChain, apply_boundary, min_norm_fill
from .monoid import (
    cancellative_equal,
    check_almost_unperforated,
    presentation,
    properly_infinite,
    vscale,
)
from .oracles import doubling_possible_by_matching, min_fill_norm_by_scan
from .space import (
    ball,
    integer_window,
    outer_boundary,
    regular_tree_window,
    stacked_product_window,
)
from .tiling import (
    block_length,
    box_tiling_plan,
    stacked_block_height,
    tile_box_space,
    tile_interval,
    tile_sparse_subset,
    tile_stacked_product,
    verify_tiling,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed: float
    details: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.elapsed:.2f}s)"


class _Check:
    def __init__(self):
        self.failures: list[str] = []
        self.details: list[str] = []

    def expect(self, ok: bool, message: str):
        if not ok:
            self.failures.append(message)

    def note(self, message: str):
        self.details.append(message)


def _result(number: int, title: str, chk: _Check, elapsed: float, budget: float | None) -> CriterionResult:
    if budget is not None:
        chk.expect(elapsed < budget, f"runtime {elapsed:.2f}s exceeds budget {budget}s")
    return CriterionResult(
        number, title, passed=not chk.failures, elapsed=elapsed,
        details=chk.details, failures=chk.failures,
    )


def _random_sparse_subset(rng: random.Random, size: int) -> list[int]:
    gaps = [1, 1, 2, 3, 4, 7, 15, 60, 700]
    acc = rng.randint(0, 50)
    out = [acc]
    for _ in range(size - 1):
        acc += rng.choice(gaps)
        out.append(acc)
    return out


def criterion_1(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    window = integer_window(-100_000, 100_000, 5)
    R, eps = 5, Fraction(1, 100)
    chk.expect(block_length(R, eps) == 1001, "block length is not 1001")
    t = tile_interval(window, R, eps)
    report = verify_tiling(t)
    elapsed = time.perf_counter() - t0
    chk.expect(report.passed, "verification failed: " + "; ".join(report.failures[:3]))
    interior = [m for m in t.meta if not m.contaminated]
    chk.expect(bool(interior), "no interior tiles")
    bad = [str(m.ratio) for m in interior if m.ratio != Fraction(10, 1001)]
    chk.expect(not bad, f"interior ratios other than 10/1001: {bad[:3]}")
    chk.note(f"{len(t.tiles)} tiles, {len(interior)} interior at ratio 10/1001")
    ctx["tiling_1"] = t
    return _result(1, "integer-line tiling at (5, 1/100)", chk, elapsed, 2.0)


def criterion_2(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    subsets = [[n * n for n in range(1, 1001)]]
    rng = random.Random(0)
    for _ in range(20):
        subsets.append(_random_sparse_subset(rng, rng.randint(150, 400)))
    tilings = []
    count = 0
    for A in subsets:
        for R in (1, 2, 5):
            for eps in (Fraction(1, 2), Fraction(1, 10)):
                t = tile_sparse_subset(A, R, eps)
                report = verify_tiling(t)
                count += 1
                if not report.passed:
                    chk.expect(False, f"subset tiling failed at R={R}, eps={eps}")
                N = block_length(R, eps)
                if any(m.diameter > 2 * R * N for m in t.meta):
                    chk.expect(False, f"diameter exceeds 2RN at R={R}, eps={eps}")
                tilings.append(t)
    elapsed = time.perf_counter() - t0
    chk.note(f"{count} tilings over {len(subsets)} subsets, all verified")
    ctx["tilings_2"] = tilings
    return _result(2, "sparse-subset tilings across the (R, eps) sweep", chk, elapsed, 5.0)


def criterion_3(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    X = regular_tree_window(3, 5, 0).space
    R, eps = 2, Fraction(1, 20)
    # halo is a quarter of K, so K = 909 gives core height 682 = 2N with N = 341
    window = stacked_product_window(X, 909)
    S, N = stacked_block_height(window, R, eps)
    chk.expect(S == 15, f"computed S = {S}, expected the root ball to dominate with 15")
    chk.expect(N == 341, f"computed N = {N}, expected 341")
    chk.expect((window.space.K - window.halo_depth) % N == 0, "core height not a multiple of N")
    t = tile_stacked_product(window, R, eps)
    report = verify_tiling(t)
    elapsed = time.perf_counter() - t0
    chk.expect(report.passed, "verification failed: " + "; ".join(report.failures[:3]))
    bottom_bound = Fraction(S + R, N)
    bottoms = [
        m for tile, m in zip(t.tiles, t.meta) if any(n == 0 for _, n in tile)
    ]
    chk.expect(len(bottoms) == len(X.points), "one bottom tile per column expected")
    chk.expect(
        all(m.ratio <= bottom_bound for m in bottoms),
        f"a bottom tile exceeds (S+R)/N = {bottom_bound}",
    )
    chk.note(f"S={S}, N={N}, {len(t.tiles)} tiles, bottom ratios <= {bottom_bound}")
    ctx["tiling_3"] = t
    return _result(3, "stacked column tiling over the depth-5 tree ball", chk, elapsed, None)


def criterion_4(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    moduli = [2 ** k for k in range(1, 13)]
    R, eps = 1, Fraction(1, 3)
    plan = box_tiling_plan(moduli, R, eps)
    chk.expect(plan.monotile_length == 8, f"monotile length {plan.monotile_length} != 8")
    chk.expect(
        [moduli[i] for i in plan.absorbed_blocks] == [2, 4, 8, 16],
        "quotients below the isometry radius were not absorbed",
    )
    t = tile_box_space(moduli, R, eps)
    report = verify_tiling(t)
    elapsed = time.perf_counter() - t0
    chk.expect(report.passed, "verification failed: " + "; ".join(report.failures[:3]))
    x0 = t.tiles[0]
    chk.expect(
        outer_boundary(t.window.space, x0, R) == set(),
        "X_0 has a nonempty outer boundary",
    )
    arcs = t.tiles[1:]
    chk.expect(all(len(a) == 8 for a in arcs), "an arc has length other than 8")
    chk.expect(
        all(m.ratio == Fraction(1, 4) for m in t.meta[1:]),
        "an arc ratio differs from 1/4",
    )
    chk.note(f"{len(arcs)} arcs of length 8 at ratio 1/4, X_0 absorbs blocks {list(plan.absorbed_blocks)}")
    ctx["tiling_4"] = t
    return _result(4, "box-space tiling over cycle quotients", chk, elapsed, None)


def criterion_5(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    rng = random.Random(5)
    discrepancies = 0
    for _ in range(1000):
        c = random_castle(rng, 60)
        atoms = sorted(c.atoms())
        A = set(rng.sample(atoms, rng.randint(0, len(atoms))))
        B = set(rng.sample(atoms, rng.randint(0, len(atoms))))
        res = compare(c, A, B)
        expected = type_vector(c, indicator(A)) <= type_vector(c, indicator(B))
        if res.ok != expected:
            discrepancies += 1
            continue
        if res.ok:
            try:
                res.witness.replay(A, B)
            except AssertionError as e:
                chk.expect(False, f"witness replay failed: {e}")
    elapsed = time.perf_counter() - t0
    chk.expect(discrepancies == 0, f"{discrepancies} disagreements with the type-vector oracle")
    chk.note("1000 castles, comparison agrees with per-orbit mass everywhere")
    return _result(5, "castle comparison is exactly the type-vector order", chk, elapsed, 10.0)


def criterion_6(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    rng = random.Random(6)
    failures = 0
    for _ in range(500):
        c = random_castle(rng, 60)
        atoms = sorted(c.atoms())
        targets = [
            set(rng.sample(atoms, rng.randint(0, len(atoms))))
            for _ in range(rng.randint(1, 3))
        ]
        r = refine(c, targets)
        ok = not validate(r)
        ok = ok and all(
            lvl <= tgt or not (lvl & tgt)
            for t_ in r.towers
            for j in range(t_.height)
            for lvl in [t_.level(j)]
            for tgt in targets
        )
        ok = ok and sorted(r.orbits()) == sorted(c.orbits())
        f = {a: rng.randint(0, 3) for a in atoms}
        masses = lambda cas: dict(zip(cas.orbits(), type_vector(cas, f).masses))
        ok = ok and masses(c) == masses(r)
        r2 = refine(r, targets)
        levels = lambda cas: {frozenset(t_.level(j)) for t_ in cas.towers for j in range(t_.height)}
        ok = ok and levels(r2) == levels(r)
        if not ok:
            failures += 1
    elapsed = time.perf_counter() - t0
    chk.expect(failures == 0, f"{failures} refinement failures")
    chk.note("500 castles refined: adapted levels, orbits and masses preserved, idempotent")
    return _result(6, "castle refinement against random targets", chk, elapsed, None)


def criterion_7(ctx: dict) -> CriterionResult:
    chk = _Check()
    tilings = []
    for key in ("tiling_1", "tiling_3", "tiling_4"):
        if key in ctx:
            tilings.append(ctx[key])
    tilings.extend(ctx.get("tilings_2", []))
    if not tilings:
        # standalone invocation: rebuild the four construction families
        criterion_1(ctx)
        criterion_2(ctx)
        criterion_3(ctx)
        criterion_4(ctx)
        return criterion_7(ctx)
    t0 = time.perf_counter()
    checked = 0
    for t in tilings:
        c = castle_from_tiling(t)
        defect = invariance_defect(c, t.window, t.R)
        if defect != t.max_ratio():
            chk.expect(
                False,
                f"defect {defect} != max clean tile ratio {t.max_ratio()}",
            )
        checked += 1
    elapsed = time.perf_counter() - t0
    chk.note(f"{checked} tilings: invariance defect equals max tile ratio exactly")
    return _result(7, "castle invariance defect ties back to tile ratios", chk, elapsed, None)


def criterion_8(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    free3 = presentation(3)
    res = check_almost_unperforated(free3, x_cap=8, n_max=4, depth=12, z_cap=10)
    chk.expect(not res.found, f"free monoid produced a counterexample: {res.counterexample}")

    num23 = presentation(2, [[(3, 0), (0, 2)]])
    res2 = check_almost_unperforated(num23, x_cap=8, n_max=4, depth=12, z_cap=10)
    chk.expect(res2.found, "numerical monoid counterexample not found")
    if res2.found:
        ce = res2.counterexample
        chk.expect(
            (ce.x, ce.y, ce.n) == ((1, 0), (0, 1), 2),
            f"counterexample {(ce.x, ce.y, ce.n)} != ((1,0), (0,1), 2)",
        )
        try:
            ce.scaled_leq.certificate.replay(num23, vscale(ce.n + 1, ce.x), vscale(ce.n, ce.y))
        except AssertionError:
            chk.expect(False, "scaled leq certificate does not replay")
        chk.expect(ce.plain_leq.no, "plain leq verdict is not a No")

    idem = presentation(1, [[(2,), (1,)]])
    pinf = properly_infinite(idem, (1,))
    chk.expect(pinf.verdict.yes, "2a <= a not established in the idempotent monoid")
    canc = cancellative_equal(idem, (1,), (0,))
    chk.expect(canc.yes, "a != 0 in the cancellative hull of the idempotent monoid")
    elapsed = time.perf_counter() - t0
    chk.note("free N^3 clean, <2,3> counterexample (a, b, 2), idempotent collapses")
    return _result(8, "monoid decision suite", chk, elapsed, 10.0)


def criterion_9(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    norms = {}
    for L in (50, 100, 200):
        window = integer_window(0, L - 1, 2)
        c = ZeroChain({p: 1 for p in window.core})
        res = min_norm_fill(window, c, 1)
        norms[L] = res.norm
        chk.expect(res.norm == (L + 1) // 2, f"fill norm {res.norm} != ceil({L}/2)")
        got = apply_boundary(res.chain).restricted_to(window.core)
        chk.expect(got == c, f"fill boundary mismatch at L={L}")
    tree_norms = {}
    for radius in (4, 5, 6, 7, 8):
        window = regular_tree_window(3, radius, 1)
        c = ZeroChain({p: 1 for p in window.core})
        res = min_norm_fill(window, c, 1)
        tree_norms[radius] = res.norm
        chk.expect(res.norm <= 3, f"tree fill norm {res.norm} > 3 at radius {radius}")
    # independent oracle on the two smallest instances
    wz = integer_window(0, 49, 2)
    cz = {p: 1 for p in wz.core}
    chk.expect(
        min_fill_norm_by_scan(wz, cz, 1) == norms[50],
        "oracle disagrees on the length-50 line",
    )
    wt = regular_tree_window(3, 4, 1)
    ct = {p: 1 for p in wt.core}
    chk.expect(
        min_fill_norm_by_scan(wt, ct, 1) == tree_norms[4],
        "oracle disagrees on the radius-4 tree ball",
    )
    elapsed = time.perf_counter() - t0
    chk.note(f"line norms {norms}, tree norms {tree_norms}, oracle agrees")
    return _result(9, "boundary-fill growth dichotomy: line vs tree", chk, elapsed, 30.0)


def criterion_10(ctx: dict) -> CriterionResult:
    chk = _Check()
    t0 = time.perf_counter()
    R = 2
    for radius in (3, 4, 5):
        window = regular_tree_window(3, radius + R, R)
        F = ball(window.space, "v", radius)
        res = doubling_check(window, F, R)
        chk.expect(
            isinstance(res, ParadoxWitness),
            f"tree ball radius {radius} did not double",
        )
        if isinstance(res, ParadoxWitness):
            try:
                res.replay(window)
            except AssertionError as e:
                chk.expect(False, f"witness replay failed at radius {radius}: {e}")
        if len(F) <= 200:
            chk.expect(
                doubling_possible_by_matching(window, F, R)
                == isinstance(res, ParadoxWitness),
                f"matching oracle disagrees on tree radius {radius}",
            )
    for L in (10, 20, 50, 100):
        for r in (1, 2, 3, 4, 5):
            window = integer_window(0, L - 1, r)
            F = set(window.core)
            res = doubling_check(window, F, r)
            witness = isinstance(res, ParadoxWitness)
            violator = isinstance(res, HallViolator)
            chk.expect(witness != violator, "outcomes are not exclusive")
            if 2 * r < L:
                chk.expect(violator, f"interval L={L}, R={r} did not violate Hall")
                if violator:
                    try:
                        res.replay(window)
                    except AssertionError as e:
                        chk.expect(False, f"violator replay failed: {e}")
            if L <= 200:
                chk.expect(
                    doubling_possible_by_matching(window, F, r) == witness,
                    f"matching oracle disagrees on interval L={L}, R={r}",
                )
    elapsed = time.perf_counter() - t0
    chk.note("tree balls double with replayable maps; intervals yield Hall violators")
    return _result(10, "paradoxical-vs-amenable dichotomy via doubling", chk, elapsed, None)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_criteria(numbers=None) -> list[CriterionResult]:
    ctx: dict = {}
    results = []
    for n in sorted(numbers or CRITERIA):
        results.append(CRITERIA[n](ctx))
    return results

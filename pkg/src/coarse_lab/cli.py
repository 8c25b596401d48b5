"""Command-line front door.

Exit codes separate three situations: 0 means success or a mathematical
pass, 1 means the mathematics said no (a failed verification, a comparison
refusal, a Hall violator, an infeasible fill, a No verdict), and 2 means
the invocation itself was wrong (unknown flags, missing files, schema
violations).  Reports are deterministic JSON: same config and seed, same
bytes.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .acceptance import CRITERIA, run_criteria
from .amenability import ParadoxWitness, doubling_check, folner_search
from .castle import (
    castle_from_tiling,
    compare,
    invariance_defect,
    refine,
    validate as validate_castle,
)
from .homology import InfeasibleFill, min_norm_fill
from .monoid import (
    DEFAULT_DEPTH,
    DEFAULT_ENTRY_CAP,
    DEFAULT_N_MAX,
    DEFAULT_Z_CAP,
    cancellative_equal,
    check_almost_unperforated,
    equal,
    leq,
    properly_infinite,
    refinement_instance,
)
from .serialize import (
    PointCodec,
    SchemaError,
    castle_from_dict,
    castle_to_dict,
    dump_json,
    encode_point,
    format_fraction,
    load_json,
    one_chain_to_dict,
    parse_fraction,
    points_from_arg,
    presentation_from_dict,
    tiling_from_dict,
    tiling_to_dict,
    vector_from_arg,
    window_from_spec,
    zero_chain_from_dict,
)
from .tiling import (
    PartitionError,
    tile_box_space,
    tile_interval,
    tile_sparse_subset,
    tile_stacked_product,
    verify_tiling,
)

OK, NEGATIVE, USAGE = 0, 1, 2


def _threads() -> int:
    raw = os.environ.get("COARSE_LAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise SchemaError(f"COARSE_LAB_THREADS={raw!r} is not an integer") from None
    if n < 1:
        raise SchemaError("COARSE_LAB_THREADS must be at least 1")
    return n


class Emitter:
    def __init__(self, args, command: str):
        self.json_only = args.json
        self.out = args.out
        self.report = {
            "tool": "coarse-lab",
            "version": __version__,
            "command": command,
            "params": {
                k: v
                for k, v in sorted(vars(args).items())
                if k not in ("func", "json", "out") and v is not None
            },
            "seed": args.seed,
            "threads": _threads(),
        }

    def say(self, line: str):
        if not self.json_only:
            print(line)

    def finish(self, result: dict, code: int) -> int:
        self.report["result"] = result
        self.report["exit_code"] = code
        text = dump_json(self.report, self.out)
        if self.json_only:
            print(text)
        return code


def _load_window(path):
    return window_from_spec(load_json(path))


def _point_set(args, codec: PointCodec) -> set:
    if getattr(args, "points", None):
        return points_from_arg(args.points, codec)
    if getattr(args, "set", None):
        data = load_json(args.set)
        if "points" not in data:
            raise SchemaError(f"{args.set}: expected a 'points' list")
        return {codec.decode(k) for k in data["points"]}
    raise SchemaError("supply --points or --set")


# -- subcommand handlers ------------------------------------------------------


def cmd_boundary(args) -> int:
    em = Emitter(args, "boundary")
    window = _load_window(args.infile)
    codec = PointCodec(window.space)
    F = _point_set(args, codec)
    from .space import outer_boundary

    bd = outer_boundary(window.space, F, args.R)
    contaminated = bool(bd & window.halo)
    em.say(f"outer {args.R}-boundary has {len(bd)} points"
           + (" (halo-contaminated)" if contaminated else ""))
    return em.finish(
        {
            "boundary": sorted(encode_point(p) for p in bd),
            "size": len(bd),
            "halo_contaminated": contaminated,
        },
        OK,
    )


def cmd_ball(args) -> int:
    em = Emitter(args, "ball")
    window = _load_window(args.infile)
    codec = PointCodec(window.space)
    from .space import ball

    b = ball(window.space, codec.decode(args.center), args.R)
    em.say(f"ball of radius {args.R} around {args.center} has {len(b)} points")
    return em.finish(
        {"ball": sorted(encode_point(p) for p in b), "size": len(b)}, OK
    )


def cmd_tile(args) -> int:
    em = Emitter(args, "tile")
    eps = parse_fraction(args.epsilon)
    spec = load_json(args.infile)
    if args.strategy == "interval":
        window = window_from_spec(spec)
        t = tile_interval(window, args.R, eps)
    elif args.strategy == "sparse":
        if "A" not in spec:
            raise SchemaError("sparse tiling input needs an 'A' list")
        t = tile_sparse_subset(
            spec["A"], args.R, eps, bool(spec.get("prefix_of_unbounded", False))
        )
    elif args.strategy == "stack":
        window = window_from_spec(spec)
        t = tile_stacked_product(window, args.R, eps)
    else:
        if "box" in spec:
            moduli = spec["box"].get("moduli", [])
        else:
            moduli = spec.get("moduli", [])
        if not moduli:
            raise SchemaError("box tiling input needs 'moduli'")
        t = tile_box_space(moduli, args.R, eps)
        spec = {"box": {"moduli": moduli}}
    payload = tiling_to_dict(t, space_spec=spec)
    if args.tiling_out:
        dump_json(payload, args.tiling_out)
        em.say(f"wrote tiling with {len(t.tiles)} tiles to {args.tiling_out}")
    em.say(
        f"{len(t.tiles)} tiles, max clean ratio {format_fraction(t.max_ratio())}, "
        f"diameter bound {t.diameter_bound}"
    )
    return em.finish(
        {
            "tiles": len(t.tiles),
            "max_ratio": format_fraction(t.max_ratio()),
            "diameter_bound": t.diameter_bound,
            "notes": t.notes,
            "tiling": payload if not args.tiling_out else args.tiling_out,
        },
        OK,
    )


def _load_tiling(args):
    data = load_json(args.infile)
    window = _load_window(args.space) if getattr(args, "space", None) else None
    return tiling_from_dict(data, window)


def cmd_verify_tiling(args) -> int:
    em = Emitter(args, "verify-tiling")
    t = _load_tiling(args)
    report = verify_tiling(t)
    em.say(
        ("PASS" if report.passed else "FAIL")
        + f": max clean ratio {format_fraction(report.max_ratio)} vs epsilon "
        + format_fraction(report.epsilon)
    )
    for f in report.failures:
        em.say("  " + f)
    result = {
        "passed": report.passed,
        "max_ratio": format_fraction(report.max_ratio),
        "max_diameter": report.max_diameter,
        "failures": report.failures,
        "meta_mismatches": report.meta_mismatches,
        "tiles": [
            {
                "index": tr.index,
                "size": tr.size,
                "ratio": format_fraction(tr.ratio),
                "diameter": tr.diameter,
                "contaminated": tr.contaminated,
            }
            for tr in report.tiles
        ],
    }
    return em.finish(result, OK if report.passed else NEGATIVE)


def cmd_folner(args) -> int:
    em = Emitter(args, "folner")
    window = _load_window(args.infile)
    res = folner_search(
        window, args.R, parse_fraction(args.epsilon), args.strategy, args.budget
    )
    em.say(
        f"best of {res.examined} candidates: {len(res.points)} points at ratio "
        f"{format_fraction(res.ratio)} ({'success' if res.success else 'no witness found'})"
    )
    return em.finish(
        {
            "success": res.success,
            "ratio": format_fraction(res.ratio),
            "size": len(res.points),
            "points": sorted(encode_point(p) for p in res.points),
            "examined": res.examined,
        },
        OK if res.success else NEGATIVE,
    )


def cmd_paradox(args) -> int:
    em = Emitter(args, "paradox")
    window = _load_window(args.infile)
    codec = PointCodec(window.space)
    F = _point_set(args, codec)
    res = doubling_check(window, F, args.R)
    if isinstance(res, ParadoxWitness):
        res.replay(window)
        em.say(f"witness: two disjoint {args.R}-translates of {len(F)} points")
        return em.finish(
            {
                "outcome": "witness",
                "phi1": {encode_point(x): encode_point(y) for x, y in sorted(res.phi1.items(), key=lambda kv: encode_point(kv[0]))},
                "phi2": {encode_point(x): encode_point(y) for x, y in sorted(res.phi2.items(), key=lambda kv: encode_point(kv[0]))},
            },
            OK,
        )
    res.replay(window)
    em.say(f"Hall violator of {len(res.points)} points: doubling impossible")
    return em.finish(
        {
            "outcome": "violator",
            "points": sorted(encode_point(p) for p in res.points),
        },
        NEGATIVE,
    )


def cmd_homology_fill(args) -> int:
    em = Emitter(args, "homology-fill")
    window = _load_window(args.infile)
    codec = PointCodec(window.space)
    c = zero_chain_from_dict(load_json(args.chain), codec)
    try:
        res = min_norm_fill(window, c, args.P)
    except InfeasibleFill as e:
        em.say(f"infeasible: {e}")
        return em.finish(
            {
                "outcome": "infeasible",
                "component": sorted(encode_point(p) for p in e.component),
                "component_total": e.total,
            },
            NEGATIVE,
        )
    em.say(f"filled with sup norm {res.norm} on {len(res.chain.coeffs)} pairs")
    return em.finish(
        {"outcome": "filled", "norm": res.norm, "chain": one_chain_to_dict(res.chain)},
        OK,
    )


def _load_castle(args, codec=None):
    return castle_from_dict(load_json(args.infile), codec)


def cmd_castle_validate(args) -> int:
    em = Emitter(args, "castle validate")
    data = load_json(args.infile)
    from .castle import Castle, Tower

    towers = [
        Tower(td.get("height", 0), tuple(tuple(col) for col in td.get("columns", [])))
        for td in data.get("towers", [])
    ]
    violations = validate_castle(Castle(towers))
    for v in violations:
        em.say("violation: " + v)
    if not violations:
        em.say("castle is valid")
    return em.finish(
        {"ok": not violations, "violations": violations},
        OK if not violations else NEGATIVE,
    )


def cmd_castle_refine(args) -> int:
    em = Emitter(args, "castle refine")
    c = _load_castle(args)
    targets_data = load_json(args.targets)
    if "targets" not in targets_data:
        raise SchemaError(f"{args.targets}: expected a 'targets' list of lists")
    r = refine(c, [set(t) for t in targets_data["targets"]])
    payload = castle_to_dict(r)
    if args.castle_out:
        dump_json(payload, args.castle_out)
        em.say(f"wrote refined castle to {args.castle_out}")
    em.say(f"{len(c.towers)} towers refined into {len(r.towers)}")
    return em.finish(
        {"towers": len(r.towers), "castle": payload if not args.castle_out else args.castle_out},
        OK,
    )


def cmd_castle_compare(args) -> int:
    em = Emitter(args, "castle compare")
    c = _load_castle(args)
    atoms = {str(a): a for a in c.atoms()}

    def decode_set(text):
        out = set()
        for k in text.split(","):
            k = k.strip()
            if not k:
                continue
            if k not in atoms:
                raise SchemaError(f"unknown atom {k!r}")
            out.add(atoms[k])
        return out

    A, B = decode_set(args.A), decode_set(args.B)
    res = compare(c, A, B)
    if res.ok:
        res.witness.replay(A, B)
        em.say(f"subequivalent: {len(res.witness.bisections)} level bisections")
        return em.finish(
            {
                "ok": True,
                "bisections": [
                    {str(k): str(v) for k, v in sorted(b.items(), key=lambda kv: str(kv[0]))}
                    for b in res.witness.bisections
                ],
            },
            OK,
        )
    ref = res.refusal
    em.say(
        f"refusal at tower {ref.tower_index}: {ref.a_levels} source levels vs "
        f"{ref.b_levels} target levels"
    )
    return em.finish(
        {
            "ok": False,
            "tower": ref.tower_index,
            "a_levels": ref.a_levels,
            "b_levels": ref.b_levels,
        },
        NEGATIVE,
    )


def cmd_castle_defect(args) -> int:
    em = Emitter(args, "castle defect")
    window = _load_window(args.space)
    codec = PointCodec(window.space)
    c = _load_castle(args, codec)
    d = invariance_defect(c, window, args.R)
    em.say(f"invariance defect at R={args.R}: {format_fraction(d)}")
    return em.finish({"defect": format_fraction(d)}, OK)


def cmd_castle_from_tiling(args) -> int:
    em = Emitter(args, "castle from-tiling")
    t = _load_tiling(args)
    c = castle_from_tiling(t)
    payload = castle_to_dict(c)
    if args.castle_out:
        dump_json(payload, args.castle_out)
        em.say(f"wrote castle to {args.castle_out}")
    em.say(f"{len(c.towers)} towers over {len(c.atoms())} atoms")
    return em.finish(
        {"towers": len(c.towers), "castle": payload if not args.castle_out else args.castle_out},
        OK,
    )


def _verdict_result(v) -> dict:
    out = {"verdict": v.kind, "detail": v.detail}
    if v.certificate is not None:
        cert = v.certificate
        if hasattr(cert, "z"):
            out["z"] = list(cert.z)
            out["path"] = [[ri, fwd] for ri, fwd in cert.path]
        elif isinstance(cert, tuple) and len(cert) == 2 and isinstance(cert[0], tuple):
            out["z"] = list(cert[0])
            out["path"] = [[ri, fwd] for ri, fwd in cert[1]]
        else:
            out["path"] = [[ri, fwd] for ri, fwd in cert]
    return out


def cmd_monoid(args) -> int:
    em = Emitter(args, f"monoid {args.monoid_op}")
    p = presentation_from_dict(load_json(args.infile))
    op = args.monoid_op
    depth, zcap, cap = args.depth, args.zcap, args.cap
    if op == "equal":
        v = equal(p, vector_from_arg(args.u), vector_from_arg(args.v), depth, cap)
        em.say(f"{v.kind}: {v.detail}")
        return em.finish(_verdict_result(v), OK if v.yes else NEGATIVE)
    if op == "leq":
        v = leq(p, vector_from_arg(args.u), vector_from_arg(args.v), depth, zcap, cap)
        em.say(f"{v.kind}: {v.detail}")
        return em.finish(_verdict_result(v), OK if v.yes else NEGATIVE)
    if op == "aup":
        res = check_almost_unperforated(p, args.xcap, args.nmax, depth, zcap, cap)
        if res.found:
            ce = res.counterexample
            em.say(
                f"counterexample: x={list(ce.x)} y={list(ce.y)} n={ce.n}: "
                f"(n+1)x <= ny holds yet x <= y fails"
            )
            return em.finish(
                {
                    "found": True,
                    "x": list(ce.x),
                    "y": list(ce.y),
                    "n": ce.n,
                    "scaled_leq": _verdict_result(ce.scaled_leq),
                    "plain_leq": _verdict_result(ce.plain_leq),
                    "region": res.region,
                },
                NEGATIVE,
            )
        em.say(f"no counterexample within bounds ({res.region})")
        return em.finish({"found": False, "region": res.region}, OK)
    if op == "pinf":
        res = properly_infinite(p, vector_from_arg(args.x), depth, zcap, cap)
        em.say(f"2x <= x: {res.verdict.kind}; least doubling multiple: {res.least_multiple}")
        return em.finish(
            {
                "verdict": _verdict_result(res.verdict),
                "least_multiple": res.least_multiple,
            },
            OK if res.verdict.yes else NEGATIVE,
        )
    if op == "refine":
        res = refinement_instance(
            p,
            vector_from_arg(args.a),
            vector_from_arg(args.b),
            vector_from_arg(args.c),
            vector_from_arg(args.d),
            depth,
            cap,
        )
        if res.found:
            w, x, y, z = res.quadruple
            em.say(f"refinement: w={list(w)} x={list(x)} y={list(y)} z={list(z)}")
            return em.finish(
                {"found": True, "w": list(w), "x": list(x), "y": list(y), "z": list(z)},
                OK,
            )
        em.say(f"not found: {res.detail}")
        return em.finish({"found": False, "detail": res.detail}, NEGATIVE)
    if op == "canc":
        v = cancellative_equal(p, vector_from_arg(args.u), vector_from_arg(args.v), depth, zcap, cap)
        em.say(f"{v.kind}: {v.detail}")
        return em.finish(_verdict_result(v), OK if v.yes else NEGATIVE)
    raise SchemaError(f"unknown monoid operation {op!r}")


def cmd_selftest(args) -> int:
    em = Emitter(args, "selftest")
    numbers = None
    if args.criteria:
        numbers = [int(x) for x in args.criteria.split(",")]
        for n in numbers:
            if n not in CRITERIA:
                raise SchemaError(f"no criterion {n}")
    results = run_criteria(numbers)
    for r in results:
        em.say(r.line())
        for f in r.failures:
            em.say("    ! " + f)
    ok = all(r.passed for r in results)
    return em.finish(
        {
            "passed": ok,
            "criteria": [
                {
                    "number": r.number,
                    "title": r.title,
                    "passed": r.passed,
                    "elapsed_s": round(r.elapsed, 3),
                    "details": r.details,
                    "failures": r.failures,
                }
                for r in results
            ],
        },
        OK if ok else NEGATIVE,
    )


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="coarse-lab",
        description="Folner tilings, castles, type-semigroup checks and "
        "boundary filling on finite metric windows.",
    )
    top.add_argument("--json", action="store_true", help="machine output only")
    top.add_argument("--out", help="write the JSON report to this path")
    top.add_argument("--seed", type=int, default=0, help="seed recorded in reports")
    sub = top.add_subparsers(dest="subcommand", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=handler)
        return p

    p = add("boundary", cmd_boundary, help="outer R-boundary of a point set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--points", help="comma-separated point keys")
    p.add_argument("--set", help="JSON file with a 'points' list")
    p.add_argument("--R", type=int, required=True)

    p = add("ball", cmd_ball, help="closed ball around a point")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--center", required=True)
    p.add_argument("--R", type=int, required=True)

    p = add("tile", cmd_tile, help="construct a tiling")
    p.add_argument("--strategy", choices=["interval", "sparse", "stack", "box"], required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="tiling_out", help="tiling JSON destination")

    p = add("verify-tiling", cmd_verify_tiling, help="replay a tiling's claims")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--space", help="window file when the tiling has no embedded space")

    p = add("folner", cmd_folner, help="bounded search for an invariant set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--strategy", choices=["balls", "intervals", "greedy"], default="balls")
    p.add_argument("--budget", type=int, default=200)

    p = add("paradox", cmd_paradox, help="doubling check: witness or violator")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--points", help="comma-separated point keys")
    p.add_argument("--set", help="JSON file with a 'points' list")
    p.add_argument("--R", type=int, required=True)

    p = add("homology-fill", cmd_homology_fill, help="minimum sup-norm boundary fill")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--chain", required=True)
    p.add_argument("--P", type=int, required=True)

    castle = sub.add_parser("castle", help="castle operations")
    csub = castle.add_subparsers(dest="castle_op", required=True)

    def addc(name, handler):
        p = csub.add_parser(name)
        p.set_defaults(func=handler)
        p.add_argument("--in", dest="infile", required=True)
        return p

    addc("validate", cmd_castle_validate)
    p = addc("refine", cmd_castle_refine)
    p.add_argument("--targets", required=True, help="JSON file with a 'targets' list")
    p.add_argument("--out", dest="castle_out")
    p = addc("compare", cmd_castle_compare)
    p.add_argument("--A", required=True, help="comma-separated atoms")
    p.add_argument("--B", required=True, help="comma-separated atoms")
    p = addc("defect", cmd_castle_defect)
    p.add_argument("--space", required=True)
    p.add_argument("--R", type=int, required=True)
    p = addc("from-tiling", cmd_castle_from_tiling)
    p.add_argument("--space", help="window file when the tiling has no embedded space")
    p.add_argument("--out", dest="castle_out")

    monoid = sub.add_parser("monoid", help="bounded monoid decision procedures")
    msub = monoid.add_subparsers(dest="monoid_op", required=True)
    for name in ("equal", "leq", "aup", "pinf", "refine", "canc"):
        p = msub.add_parser(name)
        p.set_defaults(func=cmd_monoid)
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        p.add_argument("--cap", type=int, default=DEFAULT_ENTRY_CAP)
        p.add_argument("--zcap", type=int, default=DEFAULT_Z_CAP)
        if name in ("equal", "leq", "canc"):
            p.add_argument("--u", required=True)
            p.add_argument("--v", required=True)
        if name == "aup":
            p.add_argument("--xcap", type=int, default=8)
            p.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
        if name == "pinf":
            p.add_argument("--x", required=True)
        if name == "refine":
            for flag in ("a", "b", "c", "d"):
                p.add_argument(f"--{flag}", required=True)

    p = add("selftest", cmd_selftest, help="run the acceptance criteria")
    p.add_argument("--criteria", help="comma-separated criterion numbers")

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, PartitionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

"""JSON schemas for spaces, windows, tilings, castles, chains, presentations.

Rationals travel as "p/q" strings end to end; points travel as string keys
(pairs joined with "|"), so no verdict ever depends on floating point.
Loaders validate the structural invariants of whatever they admit and name
the first offending key on failure.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .castle import Castle, Tower, validate as validate_castle
from .homology import OneChain, ZeroChain
from .monoid import MonoidPresentation, presentation
from .space import (
    FiniteMetricSpace,
    MatrixSpace,
    WindowedSpace,
    box_window,
    build_graph_metric,
    integer_window,
    regular_tree_window,
    stacked_product_window,
    subset_window,
)
from .tiling import TileMeta, Tiling


class SchemaError(ValueError):
    """Input file does not match the documented schema."""


def parse_fraction(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise SchemaError(f"expected a rational 'p/q' string, got {text!r}")
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"bad rational {text!r}: {e}") from None
    return f


def format_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def encode_point(p) -> str:
    if isinstance(p, tuple):
        return "|".join(str(x) for x in p)
    return str(p)


class PointCodec:
    """Bijection between a space's points and their string keys."""

    def __init__(self, space: FiniteMetricSpace):
        self.key_to_point = {}
        for p in space.points:
            k = encode_point(p)
            if k in self.key_to_point:
                raise SchemaError(f"point keys collide at {k!r}")
            self.key_to_point[k] = p

    def decode(self, key: str):
        if key not in self.key_to_point:
            raise SchemaError(f"unknown point key {key!r}")
        return self.key_to_point[key]

    def decode_pair(self, key: str):
        """Split an "x|y" pair key at the unique separator that parses."""
        parts = key.split("|")
        hits = []
        for cut in range(1, len(parts)):
            a, b = "|".join(parts[:cut]), "|".join(parts[cut:])
            if a in self.key_to_point and b in self.key_to_point:
                hits.append((self.key_to_point[a], self.key_to_point[b]))
        if len(hits) != 1:
            raise SchemaError(f"pair key {key!r} has {len(hits)} valid readings")
        return hits[0]


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise SchemaError(f"{context}: missing key {key!r}")
    return obj[key]


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON ({e})") from None


def space_from_spec(spec: dict) -> FiniteMetricSpace:
    """Bare space forms: a graph or an explicit matrix."""
    if "vertices" in spec:
        edges = [tuple(e) for e in spec.get("edges", [])]
        for e in edges:
            if len(e) != 2:
                raise SchemaError(f"edges: {e!r} is not a pair")
        return build_graph_metric(spec["vertices"], edges)
    if "points" in spec:
        return MatrixSpace(spec["points"], _require(spec, "matrix", "matrix space"))
    raise SchemaError("space: expected 'vertices' or 'points'")


def window_from_spec(spec: dict) -> WindowedSpace:
    """Window forms: graph/matrix plus core, or one of the shorthands.

    Shorthands: {"interval": {lo, hi, halo_depth}}, {"tree": {degree,
    core_depth, halo_depth}}, {"stack": {base, K, halo_depth}},
    {"box": {moduli}}, {"A": [...]} for integer subsets.
    """
    if "interval" in spec:
        iv = spec["interval"]
        return integer_window(
            _require(iv, "lo", "interval"),
            _require(iv, "hi", "interval"),
            iv.get("halo_depth", 0),
        )
    if "tree" in spec:
        tr = spec["tree"]
        return regular_tree_window(
            _require(tr, "degree", "tree"),
            _require(tr, "core_depth", "tree"),
            tr.get("halo_depth", 0),
        )
    if "stack" in spec:
        st = spec["stack"]
        base = space_from_spec(_require(st, "base", "stack"))
        return stacked_product_window(
            base, _require(st, "K", "stack"), st.get("halo_depth")
        )
    if "box" in spec:
        return box_window(_require(spec["box"], "moduli", "box"))
    if "A" in spec:
        return subset_window(spec["A"])
    space = space_from_spec(spec)
    if "core" in spec:
        codec = PointCodec(space)
        core = frozenset(codec.decode(k) for k in spec["core"])
        halo = frozenset(space.points) - core
        return WindowedSpace(space, core, halo, spec.get("halo_depth", 0))
    pts = frozenset(space.points)
    return WindowedSpace(space, pts, frozenset(), 0)


def tiling_to_dict(t: Tiling, space_spec: dict | None = None) -> dict:
    out = {
        "R": t.R,
        "epsilon": format_fraction(t.epsilon),
        "tiles": [sorted(encode_point(p) for p in tile) for tile in t.tiles],
        "meta": [
            {
                "ratio": format_fraction(m.ratio),
                "diam": m.diameter,
                "contaminated": m.contaminated,
            }
            for m in t.meta
        ],
        "diameter_bound": t.diameter_bound,
        "notes": t.notes,
    }
    if space_spec is not None:
        out["space"] = space_spec
    return out


def tiling_from_dict(data: dict, window: WindowedSpace | None = None) -> Tiling:
    if window is None:
        if "space" not in data:
            raise SchemaError(
                "tiling: no embedded 'space' and no window supplied"
            )
        window = window_from_spec(data["space"])
    codec = PointCodec(window.space)
    tiles = [
        frozenset(codec.decode(k) for k in tile)
        for tile in _require(data, "tiles", "tiling")
    ]
    meta_in = data.get("meta", [])
    meta = [
        TileMeta(
            ratio=parse_fraction(_require(m, "ratio", "tiling meta")),
            diameter=_require(m, "diam", "tiling meta"),
            contaminated=bool(m.get("contaminated", False)),
        )
        for m in meta_in
    ]
    diam_bound = data.get(
        "diameter_bound", max((m.diameter for m in meta), default=0)
    )
    return Tiling(
        window=window,
        tiles=tiles,
        R=_require(data, "R", "tiling"),
        epsilon=parse_fraction(_require(data, "epsilon", "tiling")),
        meta=meta,
        diameter_bound=diam_bound,
        notes=list(data.get("notes", [])),
    )


def castle_to_dict(c: Castle) -> dict:
    return {
        "towers": [
            {
                "height": t.height,
                "columns": [[encode_point(a) for a in col] for col in t.columns],
            }
            for t in c.towers
        ]
    }


def castle_from_dict(data: dict, codec: PointCodec | None = None) -> Castle:
    towers = []
    for i, td in enumerate(_require(data, "towers", "castle")):
        height = _require(td, "height", f"castle tower {i}")
        cols = _require(td, "columns", f"castle tower {i}")
        decoded = tuple(
            tuple(codec.decode(a) if codec else a for a in col) for col in cols
        )
        towers.append(Tower(height, decoded))
    c = Castle(towers)
    violations = validate_castle(c)
    if violations:
        raise SchemaError("castle: " + violations[0])
    return c


def presentation_from_dict(data: dict) -> MonoidPresentation:
    rank = _require(data, "rank", "presentation")
    rels = data.get("relations", [])
    for i, r in enumerate(rels):
        if len(r) != 2:
            raise SchemaError(f"presentation relation {i}: expected a pair of vectors")
    try:
        return presentation(rank, rels)
    except ValueError as e:
        raise SchemaError(f"presentation: {e}") from None


def zero_chain_from_dict(data: dict, codec: PointCodec) -> ZeroChain:
    coeffs = _require(data, "coeffs", "zero chain")
    return ZeroChain({codec.decode(k): int(v) for k, v in coeffs.items()})


def zero_chain_to_dict(c: ZeroChain) -> dict:
    return {
        "coeffs": {encode_point(p): v for p, v in sorted(c.coeffs.items(), key=lambda kv: encode_point(kv[0]))}
    }


def one_chain_from_dict(data: dict, codec: PointCodec) -> OneChain:
    coeffs = _require(data, "coeffs", "one chain")
    P = _require(data, "P", "one chain")
    return OneChain(
        {codec.decode_pair(k): int(v) for k, v in coeffs.items()}, P
    )


def one_chain_to_dict(h: OneChain) -> dict:
    return {
        "coeffs": {
            f"{encode_point(x)}|{encode_point(y)}": v
            for (x, y), v in sorted(
                h.coeffs.items(), key=lambda kv: (encode_point(kv[0][0]), encode_point(kv[0][1]))
            )
        },
        "P": h.propagation,
    }


def points_from_arg(text: str, codec: PointCodec) -> set:
    """Comma-separated point keys from the command line."""
    return {codec.decode(k.strip()) for k in text.split(",") if k.strip()}


def vector_from_arg(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SchemaError(f"bad vector {text!r}; expected comma-separated integers") from None


def dump_json(data: dict, path=None) -> str:
    text = json.dumps(data, sort_keys=True, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text

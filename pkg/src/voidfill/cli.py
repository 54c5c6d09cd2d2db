"""Command-line interface.

Subcommands: fill, blend, eval, mask-gen, synth, train-coarse, compare.
All raster arguments are ASCII grids; weights use the DEMW format and
network architectures the line-oriented spec format. Exit codes: 0 ok,
1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .blend import BlendConfig, fill_and_blend
from .compare import aggregate_means, records_to_csv, run_comparison
from .errors import DataError, NumericalError, VoidFillError
from .fillers import IdwParams, SplineParams, fill_extend, fill_idw, fill_spline
from .geometry import sample_rect_mask, synth_terrain
from .metrics import DEFAULT_BINS, em_histogram, mse
from .neural import (
    canonical_network,
    generator_forward,
    load_weights_file,
    parse_network_spec,
    save_weights_file,
    train_coarse,
)
from .neural.training import AdamParams
from .raster import DemGrid, VoidMask, dump_asc, load_asc, read_mask_asc
from .neural.losses import LossConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

METHOD_NAMES = ("extend", "idw", "spline", "neural")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_filler_flags(parser, require_method=True):
    if require_method:
        parser.add_argument("--method", choices=METHOD_NAMES, required=True)
    parser.add_argument("--fit-radius", type=int, default=3, help="paraboloid window radius")
    parser.add_argument("--power", type=float, default=2.0, help="IDW distance power")
    parser.add_argument("--radius", type=float, default=32.0, help="IDW search radius in pixels")
    parser.add_argument("--smoothing-passes", type=int, default=2, help="IDW 3x3 smoothing passes")
    parser.add_argument("--knot-spacing", type=int, default=8)
    parser.add_argument("--smoothing-weight", type=float, default=1e-3)
    parser.add_argument("--solver-tolerance", type=float, default=1e-8)
    parser.add_argument("--max-iterations", type=int, default=10000)
    parser.add_argument("--weights", type=Path, help="DEMW weight file (neural method)")
    parser.add_argument("--network", type=Path, help="network spec file (default: built-in)")


def _load_network(args):
    if args.network is not None:
        with open(args.network, "r", encoding="utf-8") as fh:
            return parse_network_spec(fh.read(), name=str(args.network))
    return canonical_network()


def _make_filler(args):
    if args.method == "extend":
        return lambda g, m: fill_extend(g, m, r=args.fit_radius)
    if args.method == "idw":
        params = IdwParams(power=args.power, radius=args.radius, smoothing_passes=args.smoothing_passes)
        return lambda g, m: fill_idw(g, m, params)
    if args.method == "spline":
        params = SplineParams(
            knot_spacing=args.knot_spacing,
            smoothing_weight=args.smoothing_weight,
            solver_tolerance=args.solver_tolerance,
            max_iterations=args.max_iterations,
        )
        return lambda g, m: fill_spline(g, m, params)
    if args.weights is None:
        raise _UsageError("--method neural requires --weights")
    spec = _load_network(args)
    weights = load_weights_file(args.weights, spec)
    return lambda g, m: generator_forward(g, m, spec, weights)[1]


def _load_input(args):
    grid, mask = load_asc(args.infile)
    if args.mask is not None:
        with open(args.mask, "r", encoding="ascii") as fh:
            sidecar = read_mask_asc(fh.read())
        if sidecar.shape != grid.shape:
            raise DataError(f"sidecar mask shape {sidecar.shape} != grid shape {grid.shape}")
        mask = VoidMask(mask.bits | sidecar.bits)
    return grid, mask


def _cmd_fill(args):
    filler = _make_filler(args)
    grid, mask = _load_input(args)
    filled = filler(grid, mask)
    dump_asc(args.outfile, filled, VoidMask.empty(*filled.shape))
    print(f"filled {mask.unknown_count} pixels with {args.method} -> {args.outfile}")
    return EXIT_OK


def _cmd_blend(args):
    filler = _make_filler(args)
    grid, mask = _load_input(args)
    cfg = BlendConfig(width=args.blend_width, fit_radius=args.fit_radius, steepness=args.sigmoid_steepness)
    blended = fill_and_blend(grid, mask, filler, cfg)
    dump_asc(args.outfile, blended, VoidMask.empty(*blended.shape))
    print(
        f"filled {mask.unknown_count} pixels with {args.method}, "
        f"blended {min(cfg.width, _ring_depth(mask))} rings -> {args.outfile}"
    )
    return EXIT_OK


def _ring_depth(mask: VoidMask) -> int:
    from .geometry import ring_partition

    return ring_partition(mask).depth


def _cmd_eval(args):
    pred, _ = load_asc(args.pred)
    truth, truth_mask = load_asc(args.truth)
    with open(args.mask, "r", encoding="ascii") as fh:
        mask = read_mask_asc(fh.read())
    if truth_mask.bits.any():
        raise DataError("truth grid contains nodata pixels; evaluation needs complete ground truth")
    print(f"mse={mse(pred, truth, mask)!r} em={em_histogram(pred, truth, mask, bins=args.bins)!r}")
    return EXIT_OK


def _cmd_mask_gen(args):
    mask = sample_rect_mask(
        args.rows, args.cols, seed=args.seed, count=args.rects, size_range=(args.min_size, args.max_size)
    )
    grid = DemGrid(mask.bits.astype(np.float64))
    dump_asc(args.outfile, grid, VoidMask.empty(args.rows, args.cols))
    print(f"mask with {mask.unknown_count} unknown pixels -> {args.outfile}")
    return EXIT_OK


def _cmd_synth(args):
    grid = synth_terrain(args.rows, args.cols, seed=args.seed, kind=args.kind)
    dump_asc(args.outfile, grid, VoidMask.empty(args.rows, args.cols))
    print(f"{args.kind} terrain {args.rows}x{args.cols} -> {args.outfile}")
    return EXIT_OK


def _training_dataset(args):
    tiles = []
    for index in range(args.tiles):
        terrain = synth_terrain(args.size, args.size, seed=args.seed + 1000 + index, kind=args.kind)
        mask = sample_rect_mask(
            args.size,
            args.size,
            seed=args.seed + 2000 + index,
            count=2,
            size_range=(args.size // 4, args.size // 2),
        )
        tiles.append((terrain, mask))
    return tiles


def _cmd_train_coarse(args):
    spec = _load_network(args)
    dataset = _training_dataset(args)
    adam = AdamParams(learning_rate=args.learning_rate)
    store, losses = train_coarse(
        dataset, spec, seed=args.seed, steps=args.steps, adam=adam, loss_cfg=LossConfig(discount_gamma=args.gamma)
    )
    save_weights_file(args.out_weights, store)
    window = min(len(losses), len(dataset))
    final = sum(losses[-window:]) / window
    print(f"trained coarse stage for {args.steps} steps on {len(dataset)} tiles -> {args.out_weights}")
    print(f"loss_step1={losses[0]!r} loss_final_mean={final!r} reduction={100 * (1 - final / losses[0]):.1f}%")
    return EXIT_OK


def _cmd_compare(args):
    tile_paths = sorted(Path(args.tiles_dir).glob("*.asc"))
    if not tile_paths:
        raise DataError(f"no .asc tiles found in {args.tiles_dir}")
    tiles = []
    for path in tile_paths:
        grid, tile_mask = load_asc(path)
        if tile_mask.bits.any():
            raise DataError(f"tile {path} contains nodata pixels; comparison needs complete ground truth")
        tiles.append((path.stem, grid))

    method_names = [name.strip() for name in args.methods.split(",") if name.strip()]
    unknown = [name for name in method_names if name not in METHOD_NAMES]
    if unknown:
        raise _UsageError(f"unknown methods: {', '.join(unknown)}")
    methods = {}
    for name in method_names:
        sub = argparse.Namespace(**vars(args))
        sub.method = name
        methods[name] = _make_filler(sub)

    def mask_source(index, tile_id, grid):
        seed = args.seed + index
        mask = sample_rect_mask(
            grid.rows, grid.cols, seed=seed, count=args.rects, size_range=(args.min_size, args.max_size)
        )
        return mask, seed

    records = run_comparison(tiles, mask_source, methods, bins=args.bins, record_timing=not args.no_timing)
    csv_text = records_to_csv(records, bins=args.bins)
    with open(args.csv, "w", encoding="ascii", newline="\n") as fh:
        fh.write(csv_text)
    failures = sum(1 for rec in records if rec.error)
    print(f"wrote {len(records)} records ({failures} failures) -> {args.csv}")
    for name, (mean_mse, mean_em, n) in sorted(aggregate_means(records).items()):
        print(f"  {name}: mse={mean_mse:.6g} em={mean_em:.6g} (n={n})")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="voidfill", description="Void filling for digital elevation models")
    parser.add_argument("--version", action="version", version=f"voidfill {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_fill = sub.add_parser("fill", help="fill a grid's voids with one method")
    _add_filler_flags(p_fill)
    p_fill.add_argument("--in", dest="infile", type=Path, required=True)
    p_fill.add_argument("--out", dest="outfile", type=Path, required=True)
    p_fill.add_argument("--mask", type=Path, help="sidecar 0/1 mask, unioned with nodata voids")
    p_fill.set_defaults(func=_cmd_fill)

    p_blend = sub.add_parser("blend", help="fill, then blend the boundary band")
    _add_filler_flags(p_blend)
    p_blend.add_argument("--in", dest="infile", type=Path, required=True)
    p_blend.add_argument("--out", dest="outfile", type=Path, required=True)
    p_blend.add_argument("--mask", type=Path, help="sidecar 0/1 mask, unioned with nodata voids")
    p_blend.add_argument("--blend-width", type=int, default=8)
    p_blend.add_argument("--sigmoid-steepness", type=float, default=10.0)
    p_blend.set_defaults(func=_cmd_blend)

    p_eval = sub.add_parser("eval", help="score a filled grid against ground truth")
    p_eval.add_argument("--pred", type=Path, required=True)
    p_eval.add_argument("--truth", type=Path, required=True)
    p_eval.add_argument("--mask", type=Path, required=True)
    p_eval.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p_eval.set_defaults(func=_cmd_eval)

    p_mask = sub.add_parser("mask-gen", help="sample a random rectangle mask")
    p_mask.add_argument("--rows", type=int, required=True)
    p_mask.add_argument("--cols", type=int, required=True)
    p_mask.add_argument("--seed", type=int, default=0)
    p_mask.add_argument("--rects", type=int, default=3)
    p_mask.add_argument("--min-size", type=int, default=8)
    p_mask.add_argument("--max-size", type=int, default=24)
    p_mask.add_argument("--out", dest="outfile", type=Path, required=True)
    p_mask.set_defaults(func=_cmd_mask_gen)

    p_synth = sub.add_parser("synth", help="generate synthetic terrain")
    p_synth.add_argument("--rows", type=int, required=True)
    p_synth.add_argument("--cols", type=int, required=True)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--kind", choices=("quadratic", "gaussian_hills", "fractal"), default="gaussian_hills")
    p_synth.add_argument("--out", dest="outfile", type=Path, required=True)
    p_synth.set_defaults(func=_cmd_synth)

    p_train = sub.add_parser("train-coarse", help="train the coarse stage on synthetic tiles")
    p_train.add_argument("--steps", type=int, default=500)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--out-weights", type=Path, required=True)
    p_train.add_argument("--tiles", type=int, default=20)
    p_train.add_argument("--size", type=int, default=32)
    p_train.add_argument("--kind", choices=("quadratic", "gaussian_hills", "fractal"), default="gaussian_hills")
    p_train.add_argument("--learning-rate", type=float, default=1e-4)
    p_train.add_argument("--gamma", type=float, default=0.99)
    p_train.add_argument("--network", type=Path, help="network spec file (default: built-in)")
    p_train.set_defaults(func=_cmd_train_coarse)

    p_cmp = sub.add_parser("compare", help="run methods over a tile directory and write a CSV")
    _add_filler_flags(p_cmp, require_method=False)
    p_cmp.add_argument("--tiles-dir", type=Path, required=True)
    p_cmp.add_argument("--csv", type=Path, required=True)
    p_cmp.add_argument("--methods", default="extend,idw,spline")
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--rects", type=int, default=2)
    p_cmp.add_argument("--min-size", type=int, default=8)
    p_cmp.add_argument("--max-size", type=int, default=20)
    p_cmp.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p_cmp.add_argument("--no-timing", action="store_true", help="write zero wall times (byte-deterministic CSV)")
    p_cmp.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except _UsageError as exc:
        print(parser.format_usage(), end="", file=sys.stderr)
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help/--version
        code = exc.code
        return int(code) if code else EXIT_OK
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except VoidFillError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver.

Subcommands:

    segment    run one method on an image + seed file, write the label PGM
    phantoms   generate a deterministic benchmark corpus
    sweep      annotation-variation experiment over a corpus (CSV + figure)
    compare    rank-sum comparison between two methods from a results CSV
    serve      start the HTTP segmentation service

Exit codes: 0 success, 2 usage error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .baselines import GrowCutParams, run_growcut
from .engine import BGrowthParams, run_bgrowth
from .grid import decode_labelmap, encode_labelmap, image_to_mask, load_pgm, save_pgm
from .harness import (
    METHODS,
    compare_methods,
    evaluate_case,
    export_aggregate_csv,
    export_compare_csv,
    export_csv,
    exterior_sweep,
    interior_sweep,
    read_csv,
    run_sweep,
)
from .seedgen import generate_corpus, load_corpus, save_corpus


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bgrowth", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="segment one image from a seed scribble file")
    seg.add_argument("--image", required=True, help="input image (binary PGM)")
    seg.add_argument("--seeds", help="seed file, {0,128,255} encoded PGM (required for growth methods)")
    seg.add_argument("--method", default="bgrowth", choices=METHODS)
    seg.add_argument("--out", required=True, help="output label PGM path")
    seg.add_argument("--max-iters", type=int, default=30)
    seg.add_argument("--gt", help="optional ground-truth PGM; prints a metrics CSV line")
    seg.add_argument("--trace-dir", help="write per-iteration label snapshots here")
    seg.add_argument("--trace-stride", type=int, default=1)

    ph = sub.add_parser("phantoms", help="generate a deterministic phantom corpus")
    ph.add_argument("--count", type=int, default=50)
    ph.add_argument("--seed", type=int, default=1, help="base RNG seed of the corpus")
    ph.add_argument("--out", required=True, help="output directory")
    ph.add_argument("--rows", type=int, default=64)
    ph.add_argument("--cols", type=int, default=64)

    sw = sub.add_parser("sweep", help="annotation-variation experiment over a corpus")
    sw.add_argument("--corpus", required=True, help="corpus directory from `phantoms`")
    sw.add_argument("--axis", default="interior_fraction", choices=["interior_fraction", "exterior_distance"])
    sw.add_argument("--values", help="comma-separated axis values (defaults to the protocol ranges)")
    sw.add_argument("--fixed", type=float, help="value of the other axis (defaults: exterior 6 / interior 0.5)")
    sw.add_argument("--methods", default="bgrowth,growcut")
    sw.add_argument("--out", required=True, help="output directory for CSVs and the figure")
    sw.add_argument("--no-figure", action="store_true", help="skip the matplotlib figure")

    cp = sub.add_parser("compare", help="rank-sum comparison between two methods")
    cp.add_argument("--csv", required=True, help="per-case results CSV from `sweep`")
    cp.add_argument("--method-a", default="bgrowth")
    cp.add_argument("--method-b", default="growcut")
    cp.add_argument("--alpha", type=float, default=0.01)
    cp.add_argument("--out", required=True, help="output directory")
    cp.add_argument("--no-figure", action="store_true")

    sv = sub.add_parser("serve", help="start the HTTP service")
    sv.add_argument("--addr", help="host:port (default env SEGSERVE_ADDR or 127.0.0.1:8080)")
    sv.add_argument("--ui-dir", help="static UI bundle to serve at / (default: ./frontend/dist if present)")
    sv.add_argument("--pixel-budget", type=int, help="max pixels per raster (default env SEGSERVE_PIXEL_BUDGET)")
    return parser


def _cmd_segment(args) -> int:
    image = load_pgm(args.image)
    if args.method in ("bgrowth", "growcut"):
        if not args.seeds:
            print("error: --seeds is required for growth methods", file=sys.stderr)
            return 2
        seeds = decode_labelmap(load_pgm(args.seeds))
        capture = args.trace_dir is not None
        if args.method == "bgrowth":
            res = run_bgrowth(image, seeds, BGrowthParams(max_iters=args.max_iters, capture_trace=capture, trace_stride=args.trace_stride))
        else:
            res = run_growcut(image, seeds, GrowCutParams(max_iters=args.max_iters, capture_trace=capture, trace_stride=args.trace_stride))
        save_pgm(encode_labelmap(res.labels), args.out)
        if capture:
            tdir = Path(args.trace_dir)
            tdir.mkdir(parents=True, exist_ok=True)
            for k, snap in res.trace:
                save_pgm(encode_labelmap(snap), tdir / f"trace_{k:04d}.pgm")
        print(f"{args.method}: {res.iterations_run} iterations, converged={str(res.converged).lower()}, {res.elapsed:.4f}s")
    else:
        from .baselines import otsu_segment
        from .grid import mask_to_image

        seg = otsu_segment(image)
        save_pgm(mask_to_image(seg), args.out)
        print(f"otsu: wrote {args.out}")

    if args.gt:
        gt = image_to_mask(load_pgm(args.gt))
        seeds = decode_labelmap(load_pgm(args.seeds)) if args.seeds else None
        params = None
        if args.method == "bgrowth":
            params = BGrowthParams(max_iters=args.max_iters)
        elif args.method == "growcut":
            params = GrowCutParams(max_iters=args.max_iters)
        row = evaluate_case(args.method, image, gt, seeds, params, case_id=Path(args.image).stem)
        print("case_id,method,accuracy,jaccard,dice,precision,recall,f_measure,elapsed_s")
        print(
            f"{row.case_id},{row.method},{row.accuracy:.6f},{row.jaccard:.6f},{row.dice:.6f},"
            f"{row.precision:.6f},{row.recall:.6f},{row.f_measure:.6f},{row.elapsed:.6f}"
        )
    return 0


def _cmd_phantoms(args) -> int:
    cases = generate_corpus(args.count, args.seed, rows=args.rows, cols=args.cols)
    manifest = save_corpus(cases, args.out)
    print(f"wrote {len(cases)} cases to {args.out} ({manifest.name} + 3 PGMs per case)")
    return 0


def _cmd_sweep(args) -> int:
    corpus = load_corpus(args.corpus)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for m in methods:
        if m not in METHODS:
            print(f"error: unknown method {m!r}", file=sys.stderr)
            return 2
    values = None
    if args.values:
        values = tuple(float(v) for v in args.values.split(","))
    if args.axis == "interior_fraction":
        spec = interior_sweep(values, fixed_exterior=int(args.fixed) if args.fixed else 6)
    else:
        spec = exterior_sweep(values, fixed_interior=args.fixed if args.fixed else 0.5)
    records, aggregates = run_sweep(corpus, spec, methods)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cases_csv = export_csv(records, out / f"sweep_{spec.axis}_cases.csv")
    agg_csv = export_aggregate_csv(aggregates, out / f"sweep_{spec.axis}_aggregate.csv")
    print(f"wrote {cases_csv}")
    print(f"wrote {agg_csv}")
    if not args.no_figure:
        from .report import plot_sweep

        fig = plot_sweep(aggregates, out / f"sweep_{spec.axis}.png")
        print(f"wrote {fig}")
    return 0


def _cmd_compare(args) -> int:
    records = read_csv(args.csv)
    rows = compare_methods(records, args.method_a, args.method_b, alpha=args.alpha)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = export_compare_csv(rows, out / f"compare_{args.method_a}_vs_{args.method_b}.csv")
    print(f"wrote {path}")
    for c in rows:
        verdict = "significant" if c.significant else "not significant"
        print(
            f"{c.measure}: U={c.result.u_statistic:.1f} p={c.result.p_two_sided:.6f} "
            f"({c.result.method}, n={c.result.n1}/{c.result.n2}) -> {verdict} at {args.alpha:g}"
        )
    if not args.no_figure:
        from .report import plot_compare

        fig = plot_compare(records, args.method_a, args.method_b, out / f"compare_{args.method_a}_vs_{args.method_b}.png")
        print(f"wrote {fig}")
    return 0


def _cmd_serve(args) -> int:
    import os

    import uvicorn

    from .server import create_app

    addr = args.addr or os.environ.get("SEGSERVE_ADDR", "127.0.0.1:8080")
    host, _, port = addr.rpartition(":")
    if not host:
        print(f"error: --addr must be host:port, got {addr!r}", file=sys.stderr)
        return 2
    ui_dir = args.ui_dir
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = "frontend/dist"
    app = create_app(pixel_budget=args.pixel_budget, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


_COMMANDS = {
    "segment": _cmd_segment,
    "phantoms": _cmd_phantoms,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

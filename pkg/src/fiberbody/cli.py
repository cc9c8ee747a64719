"""Command-line interface: fiber, support, verify, compare, export.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numeric error.
Result files are CSV with an embedded manifest; --plot renders a matplotlib
figure next to the delimited output.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .bodies import SampledSupport, sphere_sample
from .bodyfile import parse_body_spec
from .errors import (
    FiberBodyError,
    InputError,
    MethodError,
    ParseError,
    ValidationError,
)
from .export import export_pointcloud, export_svg, render_residual_figure, render_support_figure
from .reconstruct import hausdorff_distance
from .resultio import RunManifest, Stopwatch, hash_bytes, read_support_csv, write_support_csv
from .routes import METHODS, compute_fiber
from .verify import SUITES, run_suites

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _file_hash(path) -> str:
    with open(path, "rb") as fh:
        return hash_bytes(fh.read())


def _manifest(args, command: str, split=None, rule: str = "", elapsed=None) -> RunManifest:
    return RunManifest(
        command=command,
        body_hash=_file_hash(args.body) if getattr(args, "body", None) else "",
        split=f"{split.n}+{split.m}" if split is not None else "",
        rule=rule,
        seed=getattr(args, "seed", None),
        wall_time_s=elapsed,
    )


def cmd_fiber(args) -> int:
    body, split = parse_body_spec(args.body)
    with Stopwatch() as clock:
        sampled = compute_fiber(
            body, split, method=args.method, nodes=args.nodes,
            samples=args.samples, seed=args.seed, n_directions=args.directions,
        )
    rule = f"method={sampled.metadata.get('method')},nodes={args.nodes},samples={args.samples}"
    manifest = _manifest(args, "fiber", split, rule, clock.elapsed)
    write_support_csv(args.out, sampled, manifest)
    print(f"wrote {len(sampled)} support values to {args.out} "
          f"({sampled.metadata.get('method')}, {clock.elapsed:.2f}s)")
    if args.plot:
        render_support_figure(args.plot, sampled, [sampled.metadata.get("method", "fiber")],
                              title=f"fiber body ({args.body})")
        print(f"wrote figure {args.plot}")
    return EXIT_OK


def cmd_support(args) -> int:
    body, split = parse_body_spec(args.body)
    dirs = sphere_sample(body.dim, args.directions, "uniform-grid")
    vals = np.array([body.support(d) for d in dirs])
    sampled = SampledSupport(body.dim, dirs, vals, None, {"method": "support"})
    with Stopwatch() as clock:
        pass
    manifest = _manifest(args, "support", split, f"directions={args.directions}", clock.elapsed)
    write_support_csv(args.out, sampled, manifest)
    print(f"wrote {len(sampled)} support values to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    body, split = parse_body_spec(args.body)
    suites = args.suite or list(SUITES)
    kwargs = {}
    if args.nodes:
        kwargs["nodes"] = args.nodes
    if args.samples:
        kwargs["samples"] = args.samples
    report = run_suites(body, split, suites, label=args.body, seed=args.seed, **kwargs)
    print("\n".join(report.lines()))
    if args.plot and report.checks:
        render_residual_figure(
            args.plot,
            [c.name for c in report.checks],
            [c.residual for c in report.checks],
            [c.tolerance for c in report.checks],
            title=f"verification residuals ({args.body})",
        )
        print(f"wrote figure {args.plot}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILURE


def cmd_compare(args) -> int:
    a, _ = read_support_csv(args.first)
    b, _ = read_support_csv(args.second)
    dist = hausdorff_distance(a, b)
    print(f"sampled Hausdorff distance: {dist!r}")
    if args.plot:
        render_support_figure(args.plot, [a, b], [args.first, args.second],
                              title="compared bodies")
        print(f"wrote figure {args.plot}")
    if args.tol is not None and dist > args.tol:
        print(f"FAIL: distance exceeds tolerance {args.tol}")
        return EXIT_CHECK_FAILURE
    return EXIT_OK


def cmd_export(args) -> int:
    if args.what == "svg":
        samples = []
        for path in args.inputs:
            s, _ = read_support_csv(path)
            samples.append(s)
        manifest = RunManifest(command="export-svg",
                               body_hash=",".join(_file_hash(p) for p in args.inputs))
        export_svg(args.out, samples, manifest, labels=list(args.inputs))
        print(f"wrote {args.out} ({len(samples)} path(s))")
        return EXIT_OK
    body, split = parse_body_spec(args.inputs[0])
    manifest = RunManifest(command=f"export-{args.format}",
                           body_hash=_file_hash(args.inputs[0]),
                           split=f"{split.n}+{split.m}", seed=args.seed,
                           rule=f"samples={args.samples}")
    pts = export_pointcloud(args.out, body, args.samples, args.format, manifest)
    print(f"wrote {len(pts)} boundary points to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fiberbody",
                                description="fiber bodies of convex bodies by "
                                            "cross-validating numeric routes")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    f = sub.add_parser("fiber", help="compute fiber-body support values")
    f.add_argument("body", help="body description file (JSON)")
    f.add_argument("--method", choices=METHODS, default="auto")
    f.add_argument("--directions", type=int, default=32, metavar="N")
    f.add_argument("--nodes", type=int, default=64, metavar="N")
    f.add_argument("--samples", type=int, default=1_000_000, metavar="N")
    f.add_argument("--seed", type=int, default=0, metavar="S")
    f.add_argument("--out", required=True, metavar="PATH")
    f.add_argument("--plot", metavar="PATH", help="render a figure next to the CSV")
    f.set_defaults(func=cmd_fiber)

    s = sub.add_parser("support", help="evaluate the body's own support function")
    s.add_argument("body")
    s.add_argument("--directions", type=int, default=32, metavar="N")
    s.add_argument("--out", required=True, metavar="PATH")
    s.set_defaults(func=cmd_support)

    v = sub.add_parser("verify", help="run invariant suites; exit 1 on failure")
    v.add_argument("body")
    v.add_argument("--suite", action="append", choices=SUITES,
                   help="repeatable; default runs all suites")
    v.add_argument("--seed", type=int, default=0, metavar="S")
    v.add_argument("--nodes", type=int, default=None, metavar="N")
    v.add_argument("--samples", type=int, default=None, metavar="N")
    v.add_argument("--plot", metavar="PATH")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare", help="sampled Hausdorff distance of two result files")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--plot", metavar="PATH")
    c.set_defaults(func=cmd_compare)

    e = sub.add_parser("export", help="SVG polygons or OBJ/PLY point clouds")
    e.add_argument("what", choices=("svg", "pointcloud"))
    e.add_argument("inputs", nargs="+",
                   help="result CSVs for svg; a body file for pointcloud")
    e.add_argument("--format", choices=("obj", "ply"), default="obj")
    e.add_argument("--samples", type=int, default=1000, metavar="N")
    e.add_argument("--seed", type=int, default=0, metavar="S")
    e.add_argument("--out", required=True, metavar="PATH")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, ValidationError, InputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MethodError, FiberBodyError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

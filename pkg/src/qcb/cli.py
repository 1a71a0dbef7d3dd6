"""Command-line driver: fuzz campaigns, tightness sweeps, distance queries
and capacity tables.

Exit codes: 0 no violations, 1 violations found, 2 usage or parse error.
Reports written to a file also get a rendered figure next to them unless
``--no-plot`` is given.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import bounds, capacities, report
from .channels import ChannelFileError, load_channel
from .distances import DiamondConvergenceError, bures_distance, diamond_norm

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2


def _default_seed() -> int:
    try:
        return int(os.environ.get("QCB_SEED", "0"))
    except ValueError:
        return 0


def _parse_dims(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        if not item:
            continue
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"bad dims entry {item!r}, expected LABEL=DIM")
        label, _, val = item.partition("=")
        out[label.strip()] = int(val)
    if not out:
        raise argparse.ArgumentTypeError("empty dims argument")
    return out


def _parse_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcb",
        description="continuity-bound verification lab for quantum channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="fuzz a bound and emit a margin report")
    chk.add_argument("bound", choices=[
        "prop1", "prop2", "prop3", "prop4", "prop5", "aux", "fcb", "chicb",
    ])
    chk.add_argument("--trials", type=int, default=100)
    chk.add_argument("--seed", type=int, default=None)
    chk.add_argument("--dims", type=_parse_dims, default=None,
                     help="subsystem dims, e.g. A=2,B=2,C=2,E=2")
    chk.add_argument("--n", type=int, default=2, help="channel copies (prop4)")
    chk.add_argument("--m", type=int, default=4, help="max ensemble size (prop2)")
    chk.add_argument("--kraus", type=int, default=4, help="max Kraus rank of random channels")
    chk.add_argument("--dout", type=int, default=None, help="fixed output dimension")
    chk.add_argument("--d", type=int, default=2, help="erasure input dimension (prop5)")
    chk.add_argument("--p", type=float, default=0.4, help="first erasure probability (prop5)")
    chk.add_argument("--q", type=float, default=0.5, help="second erasure probability (prop5)")
    chk.add_argument("--qc", action="store_true", help="block-classical extensions (prop1)")
    chk.add_argument("--same-channel", action="store_true")
    chk.add_argument("--same-state", action="store_true")
    chk.add_argument("--same-outputs", action="store_true")
    chk.add_argument("--restarts", type=int, default=16)
    chk.add_argument("--slack", type=float, default=None,
                     help="violation threshold override in bits (default 1e-7; 1e-9 for fcb)")
    chk.add_argument("--eps-source", choices=["interval-upper", "analytic"],
                     default="analytic", help="distance provenance where both exist (prop5)")
    chk.add_argument("--out", default=None, help="write the report here instead of stdout")
    chk.add_argument("--format", choices=["csv", "tsv"], default="csv")
    chk.add_argument("--no-plot", action="store_true")

    tgt = sub.add_parser("tightness", help="closed-form tightness sweep of the erasure family")
    tgt.add_argument("--x", type=_parse_floats, default=[1e-3, 1e-2, 1e-1])
    tgt.add_argument("--log2d", type=_parse_floats, default=None)
    tgt.add_argument("--d", type=_parse_floats, default=None,
                     help="dimensions; converted to log2")
    tgt.add_argument("--kind", choices=["quantum", "private-oneshot", "holevo-cap",
                                        "classical", "private"], default="quantum")
    tgt.add_argument("--out", default=None)
    tgt.add_argument("--format", choices=["csv", "tsv"], default="csv")
    tgt.add_argument("--no-plot", action="store_true")

    dst = sub.add_parser("distance", help="distance interval between two channel files")
    dst.add_argument("file_a")
    dst.add_argument("file_b")
    dst.add_argument("--method", choices=["diamond", "bures", "both"], default="both")
    dst.add_argument("--tol", type=float, default=1e-7)
    dst.add_argument("--seed", type=int, default=None)
    dst.add_argument("--restarts", type=int, default=16)

    cap = sub.add_parser("capacity", help="closed-form capacity table")
    cap.add_argument("--family", choices=["erasure"], default="erasure")
    cap.add_argument("--d", type=int, required=True)
    cap.add_argument("--p", type=float, required=True)

    return parser


def _run_check(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    dims = args.dims
    if args.trials < 1:
        print("qcb check: --trials must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    slack = {} if args.slack is None else {"slack": args.slack}
    try:
        if args.bound == "prop1":
            dd = dims or {"A": 2, "B": 2, "C": 2, "E": 2}
            order = tuple(dd.get(l, 2) for l in ("A", "B", "C", "E"))
            reports = bounds.fuzz_prop1(args.trials, dims=order, seed=seed, qc=args.qc, **slack)
        elif args.bound == "prop2":
            douts = (args.dout,) if args.dout else (2, 3)
            reports = bounds.fuzz_prop2(
                args.trials, seed=seed, dout_choices=douts, max_kraus=args.kraus,
                max_m=args.m, same_channel=args.same_channel,
                same_outputs=args.same_outputs, restarts=args.restarts, **slack,
            )
        elif args.bound == "prop3":
            dd = dims or {"A": 2, "C": 2, "D": 2}
            douts = (args.dout,) if args.dout else (2, 3)
            reports = bounds.fuzz_prop3(
                args.trials, seed=seed, d_a=dd.get("A", 2), d_c=dd.get("C", 2),
                d_d=dd.get("D", 2), dout_choices=douts, max_kraus=args.kraus,
                same_channel=args.same_channel, same_state=args.same_state,
                restarts=args.restarts, **slack,
            )
        elif args.bound == "prop4":
            dd = dims or {"A": 2, "C": 2, "D": 2}
            reports = bounds.fuzz_prop4(
                args.trials, seed=seed, n=args.n, d_a=dd.get("A", 2),
                d_c=dd.get("C", 2), d_d=dd.get("D", 2),
                dout=args.dout or 2, max_kraus=args.kraus, restarts=args.restarts,
                **slack,
            )
        elif args.bound == "prop5":
            reports = bounds.check_prop5_erasure(
                args.d, args.p, args.q, restarts=args.restarts, seed=seed,
                eps_source=args.eps_source, **slack,
            )
        elif args.bound == "aux":
            reports = bounds.fuzz_auxiliary(args.trials, seed=seed, **slack)
        elif args.bound == "fcb":
            reports = bounds.fuzz_fcb(args.trials, seed=seed, **slack)
        else:
            reports = bounds.fuzz_chicb(args.trials, seed=seed, **slack)
    except ValueError as exc:
        print(f"qcb check: {exc}", file=sys.stderr)
        return EXIT_USAGE

    delim = "\t" if args.format == "tsv" else ","
    text = report.reports_csv(reports, delim)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if not args.no_plot and reports:
            report.render_margin_figure(reports, report.figure_path(args.out))
    else:
        sys.stdout.write(text)

    violations = [r for r in reports if r.violated]
    worst = min((r.margin for r in reports), default=0.0)
    print(
        f"qcb check {args.bound}: trials={len(reports)} violations={len(violations)} "
        f"worst_margin={worst:.6e} bits",
        file=sys.stderr,
    )
    return EXIT_VIOLATIONS if violations else EXIT_OK


def _run_tightness(args) -> int:
    if args.log2d is not None:
        log2d = args.log2d
    elif args.d is not None:
        log2d = [math.log2(v) for v in args.d]
    else:
        log2d = [10.0, 100.0, 1000.0]
    for x in args.x:
        if x < 0.0 or x >= 0.5:
            print(f"qcb tightness: offset {x} outside (0, 1/2)", file=sys.stderr)
            return EXIT_USAGE
    rows = bounds.tightness_rows(args.x, log2d, kind=args.kind)
    delim = "\t" if args.format == "tsv" else ","
    text = report.tightness_csv(rows, delim)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if not args.no_plot:
            report.render_tightness_figure(rows, report.figure_path(args.out))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _run_distance(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        cha = load_channel(args.file_a)
        chb = load_channel(args.file_b)
    except (ChannelFileError, OSError) as exc:
        print(f"qcb distance: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if (cha.din, cha.dout) != (chb.din, chb.dout):
        print(
            f"qcb distance: dimension mismatch "
            f"({cha.din}->{cha.dout} vs {chb.din}->{chb.dout})",
            file=sys.stderr,
        )
        return EXIT_USAGE

    diam = bur = None
    if args.method in ("diamond", "both"):
        try:
            diam = diamond_norm(cha, chb, tol=args.tol, seed=seed)
        except DiamondConvergenceError as exc:
            diam = exc.interval
            print(f"qcb distance: {exc}", file=sys.stderr)
        print(
            f"diamond   [{diam.lower:.12g}, {diam.upper:.12g}] "
            f"({diam.lower_method} / {diam.upper_method})"
        )
    if args.method in ("bures", "both"):
        bur = bures_distance(
            cha, chb, restarts=args.restarts, seed=seed,
            diamond_interval=diam, solve_diamond=(args.method == "bures"),
        )
        print(
            f"bures     [{bur.lower:.12g}, {bur.upper:.12g}] "
            f"({bur.lower_method} / {bur.upper_method})"
        )
    if diam is not None and bur is not None:
        ok = (
            0.5 * diam.lower <= bur.upper + 1e-9
            and bur.lower <= math.sqrt(max(diam.upper, 0.0)) + 1e-9
        )
        print(f"sandwich  {'consistent' if ok else 'INCONSISTENT'}")
    return EXIT_OK


def _run_capacity(args) -> int:
    try:
        table = capacities.erasure_capacities(args.d, args.p)
    except ValueError as exc:
        print(f"qcb capacity: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"erasure family, d={args.d}, p={args.p:g}")
    for kind in capacities.CAPACITY_KINDS:
        cv = table[kind]
        print(f"  {kind:<16} {cv.value:.12g} bits  [{cv.exactness}]")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.command == "check":
        return _run_check(args)
    if args.command == "tightness":
        return _run_tightness(args)
    if args.command == "distance":
        return _run_distance(args)
    return _run_capacity(args)


if __name__ == "__main__":
    sys.exit(main())

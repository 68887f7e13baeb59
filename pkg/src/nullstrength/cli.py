"""Command-line interface: ``nullstrength {compute,study,simulate,calibrate}``.

Exit codes: 0 success, 2 usage or validation error, 3 statistical
precondition (e.g. control mean too close to zero), 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from typing import Sequence

from . import __version__, kernels
from .candidates import NullRegion, StatisticId
from .deltam import Scale, calibration_grid, compute_delta_m, compute_r_delta_m, mean_credibility
from .equivalence import test_negligible
from .errors import StatisticalPreconditionError
from .harness import SIMULTANEOUS, Regime, default_family, run_investigation
from .measures import MeasureId
from .posterior import DEFAULT_K, SampleSummary
from .rng import RngSeed
from .study import BUNDLED_TABLES, analyze_study, bundled_table, emit_report, parse_study_csv

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_IO = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _config_grid(text: str) -> tuple[list[float], list[int]]:
    ratios, sep, ns = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected RATIOS:NS, e.g. 0,0.5,1,2,4:6,12,24,48,96")
    return _floats(ratios), _ints(ns)


def _manifest(command: str, args: argparse.Namespace) -> dict:
    arguments = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {
        "tool": "nullstrength",
        "version": __version__,
        "backend": kernels.BACKEND,
        "command": command,
        "arguments": arguments,
        "seed": args.seed,
    }


def _write(text: str, path: str | None) -> None:
    """Write to ``path`` atomically (temp file + rename), or to stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nullstrength-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _summary(values: list[float] | None, mean, sd, n, flag: str) -> SampleSummary:
    if values is not None:
        return SampleSummary.from_observations(values)
    missing = [f"--{name}" for name, v in zip(flag.split(","), (mean, sd, n)) if v is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    return SampleSummary(mean, sd, n)


def _read_observations(path: str | None) -> list[float] | None:
    if path is None:
        return None
    with open(path, newline="", encoding="utf-8") as fh:
        out = []
        for row in csv.reader(fh):
            for cell in row:
                try:
                    out.append(float(cell))
                except ValueError:
                    continue  # header or label cells
    return out


# -- subcommands ---------------------------------------------------------------


def cmd_compute(args: argparse.Namespace) -> int:
    x = _summary(_read_observations(args.x_csv), args.xbar, args.sx, args.m, "xbar,sx,m")
    y = _summary(_read_observations(args.y_csv), args.ybar, args.sy, args.n, "ybar,sy,n")
    seed = RngSeed(args.seed)
    compute = compute_r_delta_m if args.relative else compute_delta_m
    result = compute(x, y, args.alpha, args.k, seed)
    doc = {"manifest": _manifest("compute", args), "result": result.to_dict()}
    if args.threshold is not None:
        doc["decision"] = test_negligible(result, args.threshold).to_dict()
    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        name = "r_delta_m" if args.relative else "delta_m"
        lines = [
            f"{name} = {result.value!r}",
            f"credibility = {result.credibility:g}",
            f"k = {result.k}",
            f"seed = {args.seed}",
        ]
        if "decision" in doc:
            lines.append(f"decision = {doc['decision']['designation']} (threshold {args.threshold:g})")
        text = "\n".join(lines) + "\n"
    _write(text, args.output)
    return EXIT_OK


def _study_source(source: str) -> str:
    if source.startswith("bundled:"):
        return bundled_table(source.split(":", 1)[1])
    return source


def cmd_study(args: argparse.Namespace) -> int:
    records = parse_study_csv(_study_source(args.input))
    rows = analyze_study(records, args.threshold, args.k, RngSeed(args.seed), args.parallelism)
    _write(emit_report(rows, args.format, _manifest("study", args)), args.output)
    return EXIT_OK


def _parse_statistics(text: str) -> list[StatisticId]:
    if text == "all":
        return list(StatisticId)
    try:
        return [StatisticId(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"--statistics: {exc}; choose from {[s.value for s in StatisticId]}") from None


def _parse_investigations(text: str, family: str | None) -> list[tuple[str, Scale]]:
    if text == "all":
        fams = [Scale(family)] if family else [Scale.RAW, Scale.RELATIVE]
        out = []
        for fam in fams:
            single = ["abs_mu_dm", "sigma_d"] if fam is Scale.RAW else ["abs_r_mu_dm", "r_sigma_d"]
            out += [(m, fam) for m in single + ["df_d", "alpha_dm", SIMULTANEOUS]]
        return out
    out = []
    for name in (s.strip() for s in text.split(",") if s.strip()):
        if name != SIMULTANEOUS:
            try:
                name = MeasureId.parse(name).value
            except ValueError:
                raise UsageError(f"--measure: unknown measure {name!r}") from None
        out.append((name, Scale(family) if family else default_family(name)))
    return out


def cmd_simulate(args: argparse.Namespace) -> int:
    statistics = _parse_statistics(args.statistics)
    investigations = _parse_investigations(args.measure, args.family)
    regimes = [Regime.NULL, Regime.POSITIVE] if args.regime == "both" else [Regime.parse(args.regime)]
    reports = []
    for key, fam in investigations:
        region = None
        if args.region is not None:
            lo, hi = args.region
            region = NullRegion(lo, hi, fam)
        for regime in regimes:
            reports += run_investigation(
                key,
                regime,
                statistics,
                args.n_configs,
                args.m_samples,
                region,
                RngSeed(args.seed),
                fam,
                args.k,
                args.parallelism,
            )
    manifest = _manifest("simulate", args)
    if args.format == "json":
        text = json.dumps({"manifest": manifest, "reports": [r.to_dict() for r in reports]}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write("# manifest " + json.dumps(manifest, sort_keys=True) + "\n")
        cols = ["statistic", "measure", "regime", "family", "investigation", "error_rate",
                "n_configs", "m_samples", "binomial_p", "n_incorrect", "n_failed", "k", "seed"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in reports:
            d = r.to_dict()
            d["seed"] = args.seed
            w.writerow([d[c] for c in cols])
        text = buf.getvalue()
    _write(text, args.output)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    ratios, ns = args.config_grid
    kinds = [Scale.RAW, Scale.RELATIVE] if args.kind == "both" else [Scale(args.kind)]
    cells = calibration_grid(args.alpha_grid, ratios, ns, kinds, args.k, RngSeed(args.seed))
    means = mean_credibility(cells)
    summary = [
        {"kind": kind.value, "alpha_dm": alpha, "target": 1 - alpha, "mean_credibility": rate}
        for (kind, alpha), rate in means.items()
    ]
    manifest = _manifest("calibrate", args)
    if args.format == "json":
        doc = {
            "manifest": manifest,
            "summary": summary,
            "cells": [
                {"kind": c.kind.value, "alpha_dm": c.alpha_dm, "ratio": c.ratio, "n": c.n, "rate": c.rate}
                for c in cells
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write("# manifest " + json.dumps(manifest, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "alpha_dm", "target", "mean_credibility"])
        for s in summary:
            w.writerow([s["kind"], s["alpha_dm"], s["target"], s["mean_credibility"]])
        text = buf.getvalue()
    _write(text, args.output)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _alpha(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text}")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _region(text: str) -> tuple[float, float]:
    lo, hi = _floats(text)
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="nullstrength",
        description="Most difference in means (delta_M) and null-strength tools.",
        formatter_class=fmt,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format="json", formats=("json", "csv")):
        p.add_argument("--k", type=_positive_int, default=DEFAULT_K, help="posterior draws per group")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--format", choices=formats, default=default_format, help="output format")
        p.add_argument("--output", "-o", default=None, help="output file (stdout if omitted)")

    p = sub.add_parser("compute", help="delta_M or r delta_M for two group summaries", formatter_class=fmt)
    for flag, kind, label in (
        ("--xbar", float, "control sample mean"),
        ("--sx", _positive, "control sample sd"),
        ("--m", int, "control sample size"),
        ("--ybar", float, "experiment sample mean"),
        ("--sy", _positive, "experiment sample sd"),
        ("--n", int, "experiment sample size"),
    ):
        p.add_argument(flag, type=kind, default=None, help=label)
    p.add_argument("--x-csv", default=None, help="raw control observations (replaces --xbar/--sx/--m)")
    p.add_argument("--y-csv", default=None, help="raw experiment observations (replaces --ybar/--sy/--n)")
    p.add_argument("--alpha", type=_alpha, default=0.05, help="alpha_DM; credibility is 1 - alpha")
    p.add_argument("--relative", action="store_true", help="compute r delta_M (fraction of control mean)")
    p.add_argument("--threshold", type=_positive, default=None, help="also test |mu_DM| < threshold")
    common(p, formats=("json", "text"))
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("study", help="analyse a study table", formatter_class=fmt)
    p.add_argument(
        "--input",
        required=True,
        help=f"study CSV path, or bundled:NAME with NAME in {', '.join(BUNDLED_TABLES)}",
    )
    p.add_argument("--threshold", type=_positive, default=0.30, help="relative threshold (0.30 = 30%%)")
    p.add_argument("--parallelism", type=_positive_int, default=os.cpu_count() or 1, help="worker processes")
    common(p)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("simulate", help="integrated comparison error of candidate statistics", formatter_class=fmt)
    p.add_argument(
        "--measure",
        default="abs_mu_dm",
        help="comma-separated measures (aliases mu_dm, r_mu_dm), 'simultaneous', or 'all'",
    )
    p.add_argument("--regime", choices=("null", "positive", "both"), default="null")
    p.add_argument("--statistics", default="all", help="comma-separated statistic ids or 'all'")
    p.add_argument("--family", choices=("raw", "relative"), default=None, help="measure family (default: by measure)")
    p.add_argument("--n-configs", type=_positive_int, default=200, help="configuration pairs (N)")
    p.add_argument("--m-samples", type=_positive_int, default=50, help="samples per pair (M)")
    p.add_argument("--region", type=_region, default=None, help="null region LO,HI (default -1,1 raw; -0.1,0.1 relative)")
    p.add_argument("--parallelism", type=_positive_int, default=os.cpu_count() or 1, help="worker processes")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="mean credibility rate of delta_M over a grid", formatter_class=fmt)
    p.add_argument("--alpha-grid", type=_floats, default=[0.05, 0.10, 0.20], help="alpha_DM values")
    p.add_argument(
        "--config-grid",
        type=_config_grid,
        default=([0.0, 0.5, 1.0, 2.0, 4.0], [6, 12, 24, 48, 96]),
        help="standardized effects xbar_DM/s_DM and sample sizes, as RATIOS:NS",
    )
    p.add_argument("--kind", choices=("raw", "relative", "both"), default="both")
    common(p)
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        return args.func(args)
    except StatisticalPreconditionError as exc:
        hint = " (try without --relative)" if getattr(args, "relative", False) else ""
        print(f"nullstrength: {type(exc).__name__}: {exc}{hint}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"nullstrength: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"nullstrength: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

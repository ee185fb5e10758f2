"""Command-line interface.

Subcommands: quantile (calibrate thresholds), fit (estimate the histogram),
evaluate (audit an estimator), simulate (benchmark harness), plot-data
(convert documents to plotting CSV).  Exit codes: 0 success, 1 usage error,
2 data error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import densities, evaluate, inference, io, multiscale
from .dp import essential_histogram
from .intervals import interval_arrays
from .sample import DuplicateValuesError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _alpha_list(args) -> list[float]:
    if getattr(args, "alphas", None):
        return [float(a) for a in args.alphas.split(",")]
    return [args.alpha]


def _get_table(n: int, args) -> multiscale.QuantileTable:
    cache_dir = Path(args.cache_dir) if args.cache_dir else multiscale.default_cache_dir()
    n_capped = min(n, multiscale.TABLE_N_CAP)
    path = multiscale._cache_path(cache_dir, n_capped, args.reps, args.seed)
    if not path.exists():
        _warn(
            f"no calibrated thresholds for n={n_capped} in {cache_dir}; "
            f"simulating now ({args.reps} replications) -- this can take a while"
        )
    return multiscale.simulate_quantiles(
        n, reps=args.reps, seed=args.seed, cache_dir=cache_dir
    )


def cmd_quantile(args) -> int:
    jj, _, _ = interval_arrays(min(args.n, multiscale.TABLE_N_CAP))
    if jj.size == 0:
        print(f"error: no calibration intervals exist for n={args.n}", file=sys.stderr)
        return EXIT_DATA
    table = _get_table(args.n, args)
    for a, k in zip(table.alphas, table.kappas):
        print(f"alpha={a:<6g} kappa={k:.6f}")
    if args.out:
        multiscale.save_table(table, args.out)
    return EXIT_OK


def _out_path(base: str, alpha: float, many: bool, suffix: str = "") -> Path:
    p = Path(base)
    if many:
        p = p.with_name(f"{p.stem}_alpha{alpha:g}{suffix}{p.suffix}")
    elif suffix:
        p = p.with_name(f"{p.stem}{suffix}{p.suffix}")
    return p


def cmd_fit(args) -> int:
    sample = io.read_sample(args.input, jitter=args.jitter, seed=args.seed)
    alphas = _alpha_list(args)
    jj, _, _ = interval_arrays(sample.n)
    small = jj.size == 0
    if small:
        _warn(
            f"n={sample.n} is too small for multiscale calibration; "
            "returning a single-bin histogram"
        )
        table = None
    else:
        table = _get_table(sample.n, args)
    many = len(alphas) > 1
    for alpha in alphas:
        if small:
            from .dp import _single_bin

            fit = _single_bin(sample)
        else:
            fit = essential_histogram(sample, alpha, table)
        doc = io.histogram_document(fit, alpha)
        out = _out_path(args.out, alpha, many)
        io.write_json(doc, out)
        print(f"alpha={alpha:g}: {fit.nbins} bins -> {out}")
        if args.features:
            if small:
                _warn("feature detection skipped: sample too small")
                continue
            feats = inference.significant_feature_intervals(sample, alpha, table)
            bounds = inference.lower_bound_modes(feats)
            fdoc = io.feature_document(feats, alpha, bounds)
            fout = _out_path(args.out, alpha, many, suffix=".features")
            io.write_json(fdoc, fout)
            print(
                f"alpha={alpha:g}: {len(feats)} certified features, "
                f">= {bounds[0]} modes, >= {bounds[1]} troughs -> {fout}"
            )
    return EXIT_OK


def cmd_evaluate(args) -> int:
    sample = io.read_sample(args.input, jitter=args.jitter, seed=args.seed)
    estimator = io.read_histogram(args.hist)
    table = _get_table(sample.n, args)
    report = evaluate.audit(sample, estimator, args.alpha, table)
    doc = io.audit_document(report, sample)
    if args.out:
        io.write_json(doc, args.out)
    print(
        f"violations={len(report.violations)} removable={len(report.removable)} "
        f"clean={report.clean}"
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    density = densities.get_density(args.density)
    methods = args.methods.split(",")
    alphas = _alpha_list(args)
    table = None
    if "essential" in methods:
        table = _get_table(args.n, args)
    rows = densities.benchmark_rows(
        density, args.n, args.bench_reps, methods, alphas, args.seed, table=table
    )
    io.write_benchmark_csv(rows, args.out)
    print(f"{len(rows)} rows -> {args.out}")
    return EXIT_OK


def cmd_plot_data(args) -> int:
    doc = json.loads(Path(args.input).read_text())
    io.write_plot_data(doc, args.out)
    print(f"{doc.get('type')} -> {args.out}")
    return EXIT_OK


def _build_parser() -> _Parser:
    p = _Parser(prog="mshist", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, cache=True):
        sp.add_argument("--seed", type=int, default=0)
        if cache:
            sp.add_argument("--cache-dir", default=None)
            sp.add_argument("--reps", type=int, default=multiscale.DEFAULT_REPS)

    q = sub.add_parser("quantile", help="calibrate and cache thresholds")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out", default=None)
    common(q)
    q.set_defaults(func=cmd_quantile)

    f = sub.add_parser("fit", help="fit the fewest-bins feasible histogram")
    f.add_argument("--input", required=True)
    f.add_argument("--alpha", type=float, default=0.1)
    f.add_argument("--alphas", default=None, help="comma list; one output per alpha")
    f.add_argument("--out", required=True)
    f.add_argument("--jitter", action="store_true")
    f.add_argument("--features", action="store_true")
    common(f)
    f.set_defaults(func=cmd_fit)

    e = sub.add_parser("evaluate", help="audit a histogram against the data")
    e.add_argument("--input", required=True)
    e.add_argument("--hist", required=True)
    e.add_argument("--alpha", type=float, default=0.1)
    e.add_argument("--out", default=None)
    e.add_argument("--jitter", action="store_true")
    common(e)
    e.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("simulate", help="benchmark methods on a known density")
    s.add_argument("--density", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bench-reps", type=int, default=100, help="benchmark replications")
    s.add_argument("--methods", default="essential")
    s.add_argument("--alpha", type=float, default=0.1)
    s.add_argument("--alphas", default=None)
    s.add_argument("--out", required=True)
    common(s)
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("plot-data", help="convert a JSON document to plotting CSV")
    d.add_argument("--input", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_plot_data)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except DuplicateValuesError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (ArithmeticError, RuntimeError) as e:
        print(f"error: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

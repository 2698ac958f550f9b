"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric-domain error.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import arfima, bench, testfuncs
from .errors import DataError, DomainError
from .io import atomic_write, csv_text, read_series
from .pipeline import ANCHOR_COUNT, DEFAULT_COARSE_LEVEL, denoise_direct, denoise_logdiff, difference, resolve_levels
from .shrinkage import ShrinkageConfig, apply_rule, parse_sigma_policy
from .wavelet import available_filters, dwt

log = logging.getLogger("logdiff")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DOMAIN = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def _add_shrinkage_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("wavelet and shrinkage")
    g.add_argument("--filter", default="d4", choices=available_filters(), help="wavelet filter; dbN has N vanishing moments, dM has M taps (default d4, the 4-tap filter)")
    g.add_argument("--alpha", type=float, default=0.8, help="prior weight of the point mass at zero (default 0.8)")
    g.add_argument("--tau", type=float, default=5.0, help="logistic prior scale (default 5)")
    g.add_argument("--quad-order", type=int, default=64, help="Gauss-Hermite nodes, even and >= 16 (default 64)")
    g.add_argument(
        "--sigma-policy",
        default="per-level-mad",
        help="per-level-mad (default), finest-level-mad or fixed:<sigma>",
    )
    g.add_argument(
        "--coarse-level",
        type=int,
        default=DEFAULT_COARSE_LEVEL,
        help=f"coarsest level that is shrunk; coarser levels pass through (default {DEFAULT_COARSE_LEVEL}, 0 = full depth)",
    )


def _config(args, rule: str = "logistic") -> ShrinkageConfig:
    try:
        policy = parse_sigma_policy(args.sigma_policy)
    except DomainError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        return ShrinkageConfig(rule, args.alpha, args.tau, args.quad_order, policy)
    except DomainError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    spec = arfima.ArfimaSpec(args.d, args.sigma_a, args.n, args.seed)
    e = arfima.simulate(spec)
    _emit(csv_text(("index", "value"), ((i, float(v)) for i, v in enumerate(e))), args.out)
    return EXIT_OK


def cmd_signal(args) -> int:
    sig = testfuncs.generate(args.signal, args.n, args.target_sd)
    _emit(csv_text(("index", "value"), ((i, float(v)) for i, v in enumerate(sig.samples))), args.out)
    return EXIT_OK


def cmd_acf(args) -> int:
    x = read_series(args.input)
    maxlag = min(args.maxlag, x.size - 1)
    if args.difference:
        x = difference(x)
        maxlag = min(maxlag, x.size - 1)
    acf = arfima.sample_acf(x, maxlag)
    _emit(csv_text(("lag", "value"), acf.rows()), args.out)
    return EXIT_OK


def _largest_length(size: int, extra: int) -> int:
    # largest 2**J + extra not exceeding size
    if size - extra < 1:
        return 0
    return 2 ** ((size - extra).bit_length() - 1) + extra


def cmd_denoise(args) -> int:
    y = read_series(args.input, args.column)
    extra = 1 if args.method == "logdiff" else 0
    keep = _largest_length(y.size, extra)
    if args.method == "logdiff" and keep < ANCHOR_COUNT:
        raise DataError(f"logdiff needs a 2**J + 1 prefix of at least 20 observations (33 or more points), got {y.size}")
    if keep < 2:
        raise DataError(f"need at least 2 observations, got {y.size}")
    if keep < y.size:
        log.warning(
            "truncating %d observations to %d (largest %s); dropped %d from the end",
            y.size,
            keep,
            "2**J + 1" if extra else "2**J",
            y.size - keep,
        )
        y = y[:keep]
    coarse = args.coarse_level
    if args.method == "logdiff":
        config = _config(args, "logistic")
        result = denoise_logdiff(y, args.filter, config, coarse_level=coarse)
    else:
        config = _config(args, args.method)
        result = denoise_direct(y, args.method, args.filter, config, coarse_level=coarse)
    f_hat = result.f_hat

    if args.dump_coeffs:
        series = difference(y) if args.method == "logdiff" else y
        decomp = dwt(series, args.filter, resolve_levels(series.size, None, coarse))
        shrunk = apply_rule(decomp, config, series.size)
        rows = (
            (block, level, i, raw, new)
            for (block, level, i, raw), (*_, new) in zip(decomp.rows(), shrunk.rows())
        )
        atomic_write(args.dump_coeffs, csv_text(("block", "level", "index", "value", "shrunk"), rows))

    _emit(csv_text(("index", "y", "f_hat"), ((i, float(a), float(b)) for i, (a, b) in enumerate(zip(y, f_hat)))), args.out)
    resid = y - f_hat
    sd_f, sd_r = float(np.std(f_hat, ddof=1)), float(np.std(resid, ddof=1))
    snr = sd_f / sd_r if sd_r > 0 else float("inf")
    print(
        f"summary: method={args.method} n={y.size} |y|_2={np.linalg.norm(y):.6g} "
        f"|f_hat|_2={np.linalg.norm(f_hat):.6g} sd(f_hat)={sd_f:.6g} sd(resid)={sd_r:.6g} est_snr={snr:.4g}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    config = _config(args)
    try:
        spec = bench.BenchmarkSpec(
            signals=tuple(args.signals),
            n_values=tuple(args.n),
            snr_values=tuple(args.snr),
            d=args.d,
            replications=args.reps,
            master_seed=args.seed,
            methods=tuple(args.methods),
            config=config,
            filter=args.filter,
            coarse_level=args.coarse_level,
            target_sd=args.target_sd,
        )
    except DomainError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = bench.run(spec, workers=args.workers)
    paths = report.write(args.out, dump_mse=args.dump_mse)
    print("wrote " + ", ".join(paths), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logdiff",
        description="Wavelet shrinkage of signals observed under long-memory ARFIMA noise.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="ARFIMA(0,d,0) noise as index,value CSV")
    p.add_argument("--d", type=float, required=True, help="memory parameter, -0.5 < d < 0.5")
    p.add_argument("--sigma-a", type=float, default=1.0, help="innovation sd (default 1)")
    p.add_argument("--n", type=int, required=True, help="series length")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("signal", help="Donoho-Johnstone test signal as index,value CSV")
    p.add_argument("--signal", required=True, choices=testfuncs.NAMES)
    p.add_argument("--n", type=int, required=True, help="number of grid points")
    p.add_argument("--target-sd", type=float, default=testfuncs.DEFAULT_TARGET_SD, help="sample sd after rescaling (default 7)")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_signal)

    p = sub.add_parser("acf", help="sample autocorrelation of a one-column CSV series")
    p.add_argument("input", help="input CSV")
    p.add_argument("--maxlag", type=int, default=40, help="largest lag (default 40)")
    p.add_argument("--difference", action="store_true", help="use first differences of the series")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_acf)

    p = sub.add_parser("denoise", help="estimate the signal in a CSV series")
    p.add_argument("input", help="input CSV: one numeric column, optional header; last column used if several")
    p.add_argument("--column", type=int, help="0-based column to read")
    p.add_argument("--method", default="logdiff", choices=bench.METHODS, help="estimator (default logdiff)")
    _add_shrinkage_flags(p)
    p.add_argument("--dump-coeffs", metavar="PATH", help="also write wavelet coefficients (block,level,index,value,shrunk)")
    p.add_argument("--out", help="output CSV of index,y,f_hat (default stdout)")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("bench", help="Monte Carlo AMSE/SD comparison of the three estimators")
    p.add_argument("--signals", "--signal", nargs="+", default=list(testfuncs.NAMES), choices=testfuncs.NAMES)
    p.add_argument("--n", type=int, nargs="+", default=[512, 2048], help="sample sizes 2**J (default 512 2048)")
    p.add_argument("--snr", type=float, nargs="+", default=[3.0, 9.0], help="signal-to-noise ratios (default 3 9)")
    p.add_argument("--d", type=float, default=0.4, help="memory parameter (default 0.4)")
    p.add_argument("--reps", type=int, default=200, help="replications, >= 2 (default 200)")
    p.add_argument("--seed", type=int, default=20250101, help="master seed")
    p.add_argument("--methods", nargs="+", default=list(bench.METHODS), choices=bench.METHODS)
    p.add_argument("--target-sd", type=float, default=testfuncs.DEFAULT_TARGET_SD, help="signal sd (default 7)")
    p.add_argument("--workers", type=int, default=1, help="worker processes; results do not depend on it")
    _add_shrinkage_flags(p)
    p.add_argument("--dump-mse", action="store_true", help="also write <out>_mse.csv with per-replication MSEs")
    p.add_argument("--out", required=True, help="output prefix: writes <out>.csv and <out>.json")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"logdiff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"logdiff: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DataError as exc:
        print(f"logdiff: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except bench.BenchmarkError as exc:
        cause = exc.__cause__
        print(f"logdiff: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN if isinstance(cause, DomainError) else EXIT_DATA
    except OSError as exc:
        print(f"logdiff: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

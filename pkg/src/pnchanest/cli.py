"""Command-line front end: configure sweeps, reproduce figure presets,
tabulate the closed forms, and run a quick self-test.

Exit codes: 0 success, 2 configuration error, 1 runtime error.
"""

import argparse
import os
import sys

import numpy as np

from . import analysis
from .channel import PROFILES, load_profile, realize_channel, receive_pn
from .estimators import EstimatorMethod, TruncatedInverseEstimator
from .harness import ALL_METHODS, SweepConfig, emit_report, run_sweep
from .sequences import (
    DTMB_PRESETS,
    GuardInterval,
    circular_autocorrelation,
    dtmb_guard_interval,
    generate_m_sequence,
)
from .structured import correlation_inverse, dense_correlation_matrix

SEED_ENV_VAR = "PNCHANEST_SEED"

# Figure presets: (guard preset, channel profile), SNR 0..40 dB in 5 dB steps,
# 1000 trials.
FIGURE_PRESETS = {
    "fig2": ("dtmb420", "tu6"),
    "fig3": ("dtmb945", "tu6"),
    "fig4": ("dtmb420", "ht"),
    "fig5": ("dtmb945", "ht"),
}

DEFAULT_SNR_GRID = "0:40:5"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - surface runtime failures as exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnchanest",
        description="PN-correlation channel estimation: Monte Carlo sweeps "
                    "and closed-form MSE/CRB tables.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a configurable Monte Carlo sweep")
    _add_pn_flags(sweep)
    _add_run_flags(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    figure = sub.add_parser(
        "figure", help="run a canned sweep preset (fig2..fig5)")
    figure.add_argument("id", choices=sorted(FIGURE_PRESETS),
                        help="preset: fig2=420/TU-6, fig3=945/TU-6, "
                             "fig4=420/HT, fig5=945/HT")
    figure.add_argument("--trials", type=int, default=1000)
    figure.add_argument("--seed", type=_parse_seed, default=None)
    figure.add_argument("--workers", type=int, default=None)
    figure.add_argument("--out", default=None,
                        help="output path (default: <id>.csv, '-' for stdout)")
    figure.add_argument("--format", choices=("csv", "json"), default="csv")
    figure.set_defaults(handler=cmd_figure)

    formulas = sub.add_parser(
        "formulas", help="tabulate closed-form MSE and CRB values")
    formulas.add_argument("--n", type=int, required=True,
                          help="sequence length N")
    formulas.add_argument("--l", type=int, default=None,
                          help="channel length L (omit to skip truncated forms)")
    formulas.add_argument("--snr", type=_parse_snr_grid, default=None,
                          help="SNR grid a:b:c in dB (default 0:40:5)")
    formulas.set_defaults(handler=cmd_formulas)

    selftest = sub.add_parser(
        "selftest", help="quick internal consistency checks")
    selftest.add_argument("--seed", type=_parse_seed, default=None)
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def _add_pn_flags(parser):
    parser.add_argument("--pn", choices=sorted(DTMB_PRESETS), default=None,
                        help="guard-interval preset")
    parser.add_argument("--degree", type=int, default=None,
                        help="custom LFSR degree (with --ncp)")
    parser.add_argument("--poly", type=_parse_mask, default=None,
                        help="custom feedback polynomial bitmask (hex or decimal)")
    parser.add_argument("--ncp", type=int, default=None,
                        help="custom cyclic-prefix length")


def _add_run_flags(parser):
    parser.add_argument("--channel", default="tu6",
                        help="tu6, ht, or file:PATH with rows 'name delay_us power_db'")
    parser.add_argument("--snr", type=_parse_snr_grid, default=None,
                        help=f"SNR grid a:b:c in dB (default {DEFAULT_SNR_GRID})")
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--assumed-l", type=int, default=None, dest="assumed_l",
                        help="channel length for the truncated estimators "
                             "(default: the profile's quantized length)")
    parser.add_argument("--estimators", type=_parse_estimators,
                        default=ALL_METHODS,
                        help="comma list of: " + ",".join(m.value for m in ALL_METHODS))
    parser.add_argument("--seed", type=_parse_seed, default=None,
                        help=f"master seed (fallback: ${SEED_ENV_VAR}, then 0)")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker threads (default: available parallelism)")
    parser.add_argument("--out", default="-",
                        help="output path, '-' for stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def cmd_sweep(args) -> int:
    guard = _resolve_guard(args)
    profile = _resolve_profile(args.channel)
    config = SweepConfig(
        guard=guard,
        profile=profile,
        snr_db=args.snr if args.snr is not None else _parse_snr_grid(DEFAULT_SNR_GRID),
        trials=args.trials,
        estimators=args.estimators,
        assumed_length=args.assumed_l,
        master_seed=_resolve_seed(args.seed),
        label="sweep",
    )
    report = run_sweep(config, workers=_resolve_workers(args.workers))
    _write(report, args.out, args.format)
    return 0


def cmd_figure(args) -> int:
    preset, channel = FIGURE_PRESETS[args.id]
    config = SweepConfig(
        guard=dtmb_guard_interval(preset),
        profile=PROFILES[channel],
        snr_db=_parse_snr_grid(DEFAULT_SNR_GRID),
        trials=args.trials,
        estimators=ALL_METHODS,
        master_seed=_resolve_seed(args.seed),
        label=args.id,
    )
    report = run_sweep(config, workers=_resolve_workers(args.workers))
    out = args.out if args.out is not None else f"{args.id}.{args.format}"
    _write(report, out, args.format)
    return 0


def cmd_formulas(args) -> int:
    n = args.n
    l = args.l
    snrs = args.snr if args.snr is not None else _parse_snr_grid(DEFAULT_SNR_GRID)
    threshold = analysis.error_floor_snr_db(n)
    print(f"closed-form MSE and CRB for N={n}" + (f", L={l}" if l else ""))
    print(f"error floor onset: {threshold:.1f} dB "
          "(floor exceeds the noise term above this SNR; marked *)")
    headers = ["snr_db", "sigma_w2", "correlation", "inverse-full", "crb-full"]
    if l is not None:
        headers += ["inverse-truncated", "subtract-interference", "crb-truncated"]
    headers.append("floor")
    print("  ".join(f"{h:>22}" for h in headers))
    for snr in snrs:
        sigma_w2 = 10.0 ** (-snr / 10.0)
        cells = [f"{snr:22.2f}", f"{sigma_w2:22.6e}",
                 f"{analysis.mse_correlation(n, sigma_w2):22.6e}",
                 f"{analysis.mse_full_inverse(n, sigma_w2):22.6e}",
                 f"{analysis.crb_full(n, sigma_w2):22.6e}"]
        if l is not None:
            cells += [f"{analysis.mse_truncated_inverse(n, l, sigma_w2):22.6e}",
                      f"{analysis.mse_interference_subtraction(n, l, sigma_w2):22.6e}",
                      f"{analysis.crb_truncated(n, l, sigma_w2):22.6e}"]
        cells.append(f"{'*' if snr > threshold else '-':>22}")
        print("  ".join(cells))
    return 0


def cmd_selftest(args) -> int:
    """A fast battery of internal consistency checks."""
    seed = _resolve_seed(args.seed)
    rng = np.random.default_rng(seed)
    failures = 0

    def check(name, ok):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1

    seq = generate_m_sequence(8)
    lags = rng.integers(1, seq.n, size=32)
    check("two-valued autocorrelation (degree 8, sampled lags)",
          circular_autocorrelation(seq, 0) == 1.0
          and all(circular_autocorrelation(seq, int(k)) == -1.0 / seq.n
                  for k in lags))

    n = seq.n
    product = dense_correlation_matrix(n) @ correlation_inverse(n).dense()
    check("structured inverse identity (N=255, 1e-12)",
          np.max(np.abs(product - np.eye(n))) < 1e-12)

    ok = True
    for profile in PROFILES.values():
        realization = realize_channel(profile, rng)
        received = receive_pn(seq, realization, 0.0)
        estimator = TruncatedInverseEstimator(
            sequence=seq, channel_length=realization.length).fit()
        ok &= bool(np.max(np.abs(estimator.transform(received.samples)
                                 - realization.taps)) < 1e-10)
    check("noiseless recovery on TU-6 and HT (1e-10)", ok)

    config = SweepConfig(
        guard=dtmb_guard_interval("dtmb420"), profile=PROFILES["tu6"],
        snr_db=(20.0,), trials=200, master_seed=seed, label="selftest")
    report = run_sweep(config)
    ok = all(abs(r.empirical_mse - r.predicted_mse) <= 5 * r.std_error
             for r in report.rows)
    check("Monte Carlo within 5 standard errors of theory (200 trials)", ok)

    print("selftest:", "ok" if failures == 0 else f"{failures} failure(s)")
    return 0 if failures == 0 else 1


def _resolve_guard(args) -> GuardInterval:
    custom = [v is not None for v in (args.degree, args.ncp)]
    if args.pn is not None:
        if any(custom) or args.poly is not None:
            raise ValueError("--pn is mutually exclusive with --degree/--poly/--ncp")
        return dtmb_guard_interval(args.pn)
    if not all(custom):
        raise ValueError("provide --pn PRESET, or both --degree and --ncp")
    body = generate_m_sequence(args.degree, polynomial=args.poly)
    return GuardInterval(body=body, cp_length=args.ncp)


def _resolve_profile(spec):
    if spec in PROFILES:
        return PROFILES[spec]
    if spec.startswith("file:"):
        return load_profile(spec[len("file:"):])
    raise ValueError(f"unknown channel {spec!r}: use tu6, ht, or file:PATH")


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return _parse_seed(env)
    return 0


def _resolve_workers(workers):
    if workers is None:
        return os.cpu_count() or 1
    if workers < 1:
        raise ValueError(f"--workers must be >= 1, got {workers}")
    return workers


def _write(report, out, fmt):
    if out == "-":
        emit_report(report, sys.stdout, fmt=fmt)
    else:
        emit_report(report, out, fmt=fmt)


def _parse_snr_grid(text):
    """Parse 'a:b:c' (inclusive of b when the grid lands on it) or a single value."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(
                f"SNR grid must look like start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("SNR grid step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        if count < 1:
            raise argparse.ArgumentTypeError(f"empty SNR grid {text!r}")
        return tuple(start + i * step for i in range(count))
    try:
        return (float(text),)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR value {text!r}") from None


def _parse_estimators(text):
    try:
        return tuple(EstimatorMethod(part.strip())
                     for part in str(text).split(",") if part.strip())
    except ValueError:
        valid = ",".join(m.value for m in ALL_METHODS)
        raise argparse.ArgumentTypeError(
            f"bad estimator list {text!r}; valid names: {valid}") from None


def _parse_seed(text):
    try:
        value = int(str(text), 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _parse_mask(text):
    try:
        return int(str(text), 0)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad polynomial mask {text!r} (use hex like 0x171)") from None


if __name__ == "__main__":
    sys.exit(main())

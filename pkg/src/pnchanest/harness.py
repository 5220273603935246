"""Monte Carlo engine: sweep SNR, estimate channels, compare against theory.

Every trial draws a fresh channel realization and a fresh noise vector,
synthesizes the received PN, runs the requested estimators on it, and records
the per-trial MSE with the normalization matching each estimator's length
convention (over N positions for full-length estimators with the true CIR
zero-padded, over the assumed L positions for truncated ones).

Reproducibility: trial ``t`` of SNR cell ``c`` uses the substream
``SeedSequence(master_seed, spawn_key=(c, t))``, and per-trial results are
written into arrays indexed by trial before a single fixed-order reduction.
Reports are therefore bit-identical for a given master seed regardless of the
worker count or scheduling.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analysis
from .channel import ChannelProfile, quantize_profile, realize_channel, receive_pn
from .estimators import (
    EstimatorMethod,
    TRUNCATED_METHODS,
    correlation_operator,
    make_estimator,
)
from .sequences import GuardInterval

#: Exact column order of CSV reports.
CSV_COLUMNS = ("estimator", "snr_db", "empirical_mse", "predicted_mse",
               "crb", "trials", "std_error")

ALL_METHODS = (EstimatorMethod.CORRELATION, EstimatorMethod.INVERSE_FULL,
               EstimatorMethod.INVERSE_TRUNCATED,
               EstimatorMethod.SUBTRACT_INTERFERENCE)


@dataclass(frozen=True)
class SweepConfig:
    """Configuration of one Monte Carlo sweep."""

    guard: GuardInterval
    profile: ChannelProfile
    snr_db: tuple
    trials: int = 1000
    estimators: tuple = ALL_METHODS
    assumed_length: int | None = None
    master_seed: int = 0
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        object.__setattr__(
            self, "estimators",
            tuple(EstimatorMethod(m) for m in self.estimators))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.snr_db:
            raise ValueError("snr_db must be a non-empty list of SNR points")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.assumed_length is not None:
            if not 1 <= int(self.assumed_length) <= self.guard.body.n:
                raise ValueError(
                    f"assumed_length must be in [1, {self.guard.body.n}], "
                    f"got {self.assumed_length}")

    @property
    def true_length(self) -> int:
        """Quantized length of the configured channel profile."""
        return quantize_profile(self.profile)[2]

    @property
    def resolved_length(self) -> int:
        """Channel length the truncated estimators assume."""
        if self.assumed_length is not None:
            return int(self.assumed_length)
        return self.true_length


@dataclass(frozen=True)
class MseRow:
    """One (estimator, SNR) cell of a report."""

    estimator: str
    snr_db: float
    empirical_mse: float
    predicted_mse: float
    crb: float
    trials: int
    std_error: float
    model_mismatch: bool = field(default=False, compare=False)


@dataclass
class MseReport:
    """Monte Carlo results plus the metadata needed to re-run them."""

    rows: list
    metadata: dict


def trial_rng(master_seed, cell_index, trial_index) -> np.random.Generator:
    """The documented per-trial random substream.

    Distinct (cell, trial) pairs get independent PCG64 streams derived from
    the master seed, so results do not depend on how trials are scheduled.
    """
    seq = np.random.SeedSequence(entropy=int(master_seed),
                                 spawn_key=(int(cell_index), int(trial_index)))
    return np.random.default_rng(seq)


def run_sweep(config: SweepConfig, workers=1) -> MseReport:
    """Run the configured sweep and return an :class:`MseReport`.

    ``workers`` splits each SNR cell's trials across threads; it affects wall
    time only, never results.  If the assumed channel length undershoots the
    profile's true length the sweep still runs, and the truncated estimators'
    rows are flagged as a model mismatch.
    """
    body = config.guard.body
    symbols = body.symbols
    n = body.n
    positions, _, true_length = quantize_profile(config.profile)
    assumed = config.resolved_length
    mismatch = assumed < true_length

    methods = config.estimators
    workers = max(1, int(workers or 1))
    corr_op = correlation_operator(symbols)
    refiners = {m: make_estimator(m, body, assumed).fit()
                for m in methods if m is not EstimatorMethod.CORRELATION}

    rows = []
    for cell_index, snr_db in enumerate(config.snr_db):
        sigma_w2 = 10.0 ** (-snr_db / 10.0)
        per_trial = {m: np.empty(config.trials) for m in methods}

        def simulate(trial_range, _sigma=sigma_w2, _cell=cell_index,
                     _out=per_trial):
            count = len(trial_range)
            received = np.empty((count, n), dtype=np.complex128)
            truth = np.zeros((count, n), dtype=np.complex128)
            for j, t in enumerate(trial_range):
                rng = trial_rng(config.master_seed, _cell, t)
                realization = realize_channel(config.profile, rng, draw_index=t)
                received[j] = receive_pn(body, realization, _sigma, rng).samples
                truth[j, :true_length] = realization.taps
            hbar = received @ corr_op
            sl = slice(trial_range[0], trial_range[-1] + 1)
            for m in methods:
                if m is EstimatorMethod.CORRELATION:
                    err = hbar - truth
                elif m in TRUNCATED_METHODS:
                    err = refiners[m].refine(hbar) - truth[:, :assumed]
                else:
                    err = refiners[m].refine(hbar) - truth
                _out[m][sl] = np.mean(np.abs(err) ** 2, axis=1)

        chunks = _chunk(range(config.trials), workers)
        if len(chunks) == 1:
            simulate(chunks[0])
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(simulate, chunks))

        for m in methods:
            values = per_trial[m]
            empirical = float(np.sum(values) / config.trials)
            if config.trials > 1:
                std_error = float(np.std(values, ddof=1) / np.sqrt(config.trials))
            else:
                std_error = 0.0
            rows.append(MseRow(
                estimator=m.value,
                snr_db=float(snr_db),
                empirical_mse=empirical,
                predicted_mse=analysis.predicted_mse(m, n, sigma_w2, assumed),
                crb=analysis.crb(m, n, sigma_w2, assumed),
                trials=config.trials,
                std_error=std_error,
                model_mismatch=mismatch and m in TRUNCATED_METHODS,
            ))

    metadata = {
        "label": config.label,
        "pn_degree": body.degree,
        "pn_polynomial": hex(body.polynomial),
        "pn_seed_state": body.seed_state,
        "pn_length": n,
        "cp_length": config.guard.cp_length,
        "profile": {
            "name": config.profile.name,
            "delays_us": list(config.profile.delays_us),
            "powers_db": list(config.profile.powers_db),
            "sampling_rate": config.profile.sampling_rate,
        },
        "true_channel_length": true_length,
        "assumed_channel_length": assumed,
        "snr_db": list(config.snr_db),
        "trials": config.trials,
        "estimators": [m.value for m in methods],
        "master_seed": int(config.master_seed),
        "model_mismatch": mismatch,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    return MseReport(rows=rows, metadata=metadata)


def emit_report(report: MseReport, destination, fmt="csv") -> None:
    """Write a report as CSV (rows only, byte-reproducible) or JSON (rows plus
    metadata).  Floats keep full precision (17 significant digits)."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    text = _render_csv(report) if fmt == "csv" else _render_json(report)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {destination!r}: {exc}") from exc


def load_report(source, fmt=None) -> MseReport:
    """Read back a report written by :func:`emit_report`."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        if fmt is None:
            fmt = "json" if str(source).endswith(".json") else "csv"
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        payload = json.loads(text)
        rows = [_row_from_fields(r) for r in payload["rows"]]
        return MseReport(rows=rows, metadata=payload.get("metadata", {}))
    lines = [ln for ln in text.splitlines() if ln]
    header = tuple(lines[0].split(","))
    if header != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header!r}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append(_row_from_fields(dict(zip(CSV_COLUMNS, parts))))
    return MseReport(rows=rows, metadata={})


def _row_from_fields(fields) -> MseRow:
    return MseRow(
        estimator=str(fields["estimator"]),
        snr_db=float(fields["snr_db"]),
        empirical_mse=float(fields["empirical_mse"]),
        predicted_mse=float(fields["predicted_mse"]),
        crb=float(fields["crb"]),
        trials=int(fields["trials"]),
        std_error=float(fields["std_error"]),
    )


def _fmt(value) -> str:
    # 18 significant digits: exceeds the 12 required and round-trips exactly
    return format(float(value), ".17e")


def _render_csv(report: MseReport) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in report.rows:
        lines.append(",".join((
            row.estimator,
            _fmt(row.snr_db),
            _fmt(row.empirical_mse),
            _fmt(row.predicted_mse),
            _fmt(row.crb),
            str(int(row.trials)),
            _fmt(row.std_error),
        )))
    return "\n".join(lines) + "\n"


def _render_json(report: MseReport) -> str:
    row_lines = []
    for row in report.rows:
        row_lines.append(
            "    {"
            f'"estimator": {json.dumps(row.estimator)}, '
            f'"snr_db": {_fmt(row.snr_db)}, '
            f'"empirical_mse": {_fmt(row.empirical_mse)}, '
            f'"predicted_mse": {_fmt(row.predicted_mse)}, '
            f'"crb": {_fmt(row.crb)}, '
            f'"trials": {int(row.trials)}, '
            f'"std_error": {_fmt(row.std_error)}'
            "}")
    metadata = json.dumps(report.metadata, indent=2)
    metadata = "\n".join("  " + line for line in metadata.splitlines()).lstrip()
    rows = ",\n".join(row_lines)
    return ('{\n  "metadata": ' + metadata + ',\n  "rows": [\n' + rows
            + "\n  ]\n}\n")


def _chunk(trial_range, workers):
    total = len(trial_range)
    size = max(1, -(-total // workers))
    return [range(start, min(start + size, total))
            for start in range(0, total, size)]

"""Monte Carlo comparison of Universal, Logistic and Log-Diff estimators.

For every scenario (signal, n, snr) and replication r, ``n + 1`` points
``y = f + e`` are drawn with ARFIMA(0, d, 0) noise. Log-Diff uses all of
them; the direct methods use points 2..n+1. Every method is scored on the
same n points 2..n+1, against the same noise draw.

Child seeds::

    splitmix64(x) = standard SplitMix64 finaliser on (x + 0x9E3779B97F4A7C15) mod 2**64
    h = splitmix64(master_seed)
    for c in (signal_id, n, float64_bits(snr), r): h = splitmix64(h XOR c)

with signal ids bumps=0, blocks=1, doppler=2, heavisine=3.
"""

from __future__ import annotations

import hashlib
import json
import logging
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import arfima, testfuncs
from .io import atomic_write, csv_text
from .pipeline import DEFAULT_COARSE_LEVEL, denoise_direct, denoise_logdiff
from .shrinkage import ShrinkageConfig
from .wavelet import get_filter

log = logging.getLogger(__name__)

METHODS = ("universal", "logistic", "logdiff")
SIGNAL_IDS = {name: i for i, name in enumerate(testfuncs.NAMES)}
MASK64 = 2**64 - 1
SEED_SCHEME = (
    "h = splitmix64(master_seed); for c in (signal_id, n, float64_bits(snr), r): "
    "h = splitmix64(h ^ c); signal ids bumps=0 blocks=1 doppler=2 heavisine=3"
)


class BenchmarkError(RuntimeError):
    pass


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _float_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def child_seed(master_seed: int, signal: str, n: int, snr: float, r: int) -> int:
    h = splitmix64(master_seed & MASK64)
    for c in (SIGNAL_IDS[signal], n, _float_bits(snr), r):
        h = splitmix64(h ^ c)
    return h


def mse(f_hat, f) -> float:
    """Mean squared error over all points."""
    f_hat = np.asarray(f_hat, dtype=float)
    f = np.asarray(f, dtype=float)
    if f_hat.shape != f.shape:
        raise ValueError(f"length mismatch: {f_hat.shape} vs {f.shape}")
    if f.size < 1:
        raise ValueError("empty input")
    return float(np.mean((f_hat - f) ** 2))


@dataclass
class BenchmarkSpec:
    signals: tuple[str, ...] = testfuncs.NAMES
    n_values: tuple[int, ...] = (512, 2048)
    snr_values: tuple[float, ...] = (3.0, 9.0)
    d: float = 0.4
    replications: int = 200
    master_seed: int = 20250101
    methods: tuple[str, ...] = METHODS
    config: ShrinkageConfig = field(default_factory=ShrinkageConfig)
    filter: str = "d4"
    coarse_level: int | None = DEFAULT_COARSE_LEVEL
    target_sd: float = testfuncs.DEFAULT_TARGET_SD

    def __post_init__(self):
        self.signals = tuple(s.lower() for s in self.signals)
        self.n_values = tuple(int(n) for n in self.n_values)
        self.snr_values = tuple(float(s) for s in self.snr_values)
        self.methods = tuple(self.methods)
        for s in self.signals:
            if s not in SIGNAL_IDS:
                raise ValueError(f"unknown signal {s!r}; choose from {', '.join(testfuncs.NAMES)}")
        for n in self.n_values:
            if n < 8 or n & (n - 1):
                raise ValueError(f"n values must be powers of two >= 8, got {n}")
        for snr in self.snr_values:
            if not snr > 0:
                raise ValueError(f"snr values must be positive, got {snr}")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        if self.replications < 2:
            raise ValueError(f"replications must be >= 2 (sample SD needs two values), got {self.replications}")
        arfima.ArfimaSpec(self.d, 1.0, 1, self.master_seed)
        get_filter(self.filter)

    def scenarios(self):
        for signal in self.signals:
            for n in self.n_values:
                for snr in self.snr_values:
                    yield signal, n, snr

    def to_dict(self) -> dict:
        out = asdict(self)
        out["config"] = self.config.to_dict()
        return out


@dataclass
class BenchmarkReport:
    spec: BenchmarkSpec
    rows: list[dict]
    mses: dict[tuple, np.ndarray] = field(repr=False)

    def header(self) -> dict:
        return {"seed_scheme": SEED_SCHEME, "spec": self.spec.to_dict()}

    def row(self, signal, n, snr, method) -> dict:
        for r in self.rows:
            if (r["signal"], r["n"], r["snr"], r["method"]) == (signal, n, float(snr), method):
                return r
        raise KeyError((signal, n, snr, method))

    COLUMNS = ("signal", "n", "snr", "method", "amse", "sd", "replications", "seeds_digest")

    def to_csv(self) -> str:
        return csv_text(self.COLUMNS, ([r[c] for c in self.COLUMNS] for r in self.rows))

    def to_json(self) -> str:
        return json.dumps({"header": self.header(), "rows": self.rows}, indent=2) + "\n"

    def mse_csv(self) -> str:
        def rows():
            for (signal, n, snr, method), values in self.mses.items():
                for r, v in enumerate(values):
                    yield signal, n, float(snr), method, r, float(v)

        return csv_text(("signal", "n", "snr", "method", "r", "mse"), rows())

    def write(self, prefix: str, dump_mse: bool = False) -> list[str]:
        paths = [f"{prefix}.csv", f"{prefix}.json"]
        atomic_write(paths[0], self.to_csv())
        atomic_write(paths[1], self.to_json())
        if dump_mse:
            paths.append(f"{prefix}_mse.csv")
            atomic_write(paths[2], self.mse_csv())
        return paths


def _seeds_digest(seeds) -> str:
    return hashlib.sha256(",".join(str(s) for s in seeds).encode()).hexdigest()[:16]


def scenario_noise(spec: BenchmarkSpec, signal: str, n: int, snr: float):
    """Truth, noise matrix ``(replications, n + 1)`` and child seeds of one scenario."""
    truth = testfuncs.generate(signal, n + 1, spec.target_sd)
    sigma_a = testfuncs.calibrate_sigma_a(truth, snr, spec.d)
    seeds = [child_seed(spec.master_seed, signal, n, snr, r) for r in range(spec.replications)]
    noise = arfima.simulate_many(spec.d, sigma_a, n + 1, seeds)
    return truth.samples, noise, seeds


def run_scenario(spec: BenchmarkSpec, signal: str, n: int, snr: float) -> tuple[dict[str, np.ndarray], list[int]]:
    """Per-replication MSEs for every method of one scenario."""
    try:
        f, noise, seeds = scenario_noise(spec, signal, n, snr)
        out = {m: np.empty(spec.replications) for m in spec.methods}
        for r, e in enumerate(noise):
            y = f + e
            for method in spec.methods:
                if method == "logdiff":
                    est = denoise_logdiff(y, spec.filter, spec.config.with_rule("logistic"), coarse_level=spec.coarse_level)
                    # the anchor point is not estimated by the direct methods
                    out[method][r] = mse(est.f_hat[1:], f[1:])
                else:
                    est = denoise_direct(y[1:], method, spec.filter, spec.config, coarse_level=spec.coarse_level)
                    out[method][r] = mse(est.f_hat, f[1:])
        return out, seeds
    except Exception as exc:
        raise BenchmarkError(f"scenario signal={signal} n={n} snr={snr}: {exc}") from exc


def _run_one(args):
    return run_scenario(*args)


def run(spec: BenchmarkSpec, workers: int = 1) -> BenchmarkReport:
    """Run every scenario; results do not depend on ``workers``."""
    scenarios = list(spec.scenarios())
    jobs = [(spec, *s) for s in scenarios]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = []
        for job in jobs:
            log.info("scenario %s n=%d snr=%g", *job[1:])
            results.append(_run_one(job))

    rows, mses = [], {}
    for (signal, n, snr), (per_method, seeds) in zip(scenarios, results):
        digest = _seeds_digest(seeds)
        for method in spec.methods:
            values = per_method[method]
            mses[(signal, n, snr, method)] = values
            rows.append(
                {
                    "signal": signal,
                    "n": n,
                    "snr": snr,
                    "method": method,
                    "amse": float(np.mean(values)),
                    "sd": float(np.std(values, ddof=1)),
                    "replications": spec.replications,
                    "seeds_digest": digest,
                }
            )
    return BenchmarkReport(spec, rows, mses)

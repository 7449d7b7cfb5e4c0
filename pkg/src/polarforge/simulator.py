"""Seeded BPSK-AWGN Monte-Carlo harness.

Every block draws its message and noise from its own counter-based stream
keyed by ``(seed, snr point, block index)``, and blocks are decoded in
fixed-size batches.  A point stops at the first block where the error target
is met, so results do not depend on the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import binomtest

from .codec import CodeConfig, encode_batch
from .decoders import codeword_correlation, decode_batch

__all__ = [
    "SimConfig",
    "PointResult",
    "SimResult",
    "awgn_transmit",
    "block_seed",
    "run_bler",
    "wilson_interval",
    "CSV_COLUMNS",
]

NOISELESS_LLR = 300.0
CSV_COLUMNS = (
    "ebn0_db", "blocks", "blk_errs", "bler", "bler_lo", "bler_hi",
    "prune", "ml_like", "bit_errs", "ber",
)


@dataclass(frozen=True)
class SimConfig:
    ebn0_db: tuple[float, ...]
    max_blocks: int = 10_000_000
    target_errors: int = 100
    seed: int = 0
    workers: int = 1
    batch: int = 256
    noiseless: bool = False

    def __post_init__(self):
        object.__setattr__(self, "ebn0_db", tuple(float(x) for x in self.ebn0_db))
        if not self.ebn0_db:
            raise ValueError("empty Eb/N0 grid")
        if self.target_errors < 1:
            raise ValueError("target_errors must be >= 1")
        if self.max_blocks < 1 or self.batch < 1 or self.workers < 1:
            raise ValueError("max_blocks, batch and workers must be positive")


def wilson_interval(errors: int, blocks: int, confidence: float = 0.95) -> tuple[float, float]:
    if blocks == 0:
        return 0.0, 1.0
    ci = binomtest(errors, blocks).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass
class PointResult:
    ebn0_db: float
    blocks: int = 0
    block_errors: int = 0
    bit_errors: int = 0
    prune: int = 0
    ml_like: int = 0
    first_error_counts: dict[int, int] = field(default_factory=dict)
    ml_metric_violations: int = 0
    ml_correlation_violations: int = 0

    @property
    def bler(self) -> float:
        return self.block_errors / self.blocks if self.blocks else 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / self._bits if self.blocks else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.block_errors, self.blocks)

    _bits: int = field(default=0, repr=False)


@dataclass
class SimResult:
    points: list[PointResult]
    list_size: int
    exact: bool
    config: SimConfig

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for p in self.points:
            lo, hi = p.interval
            w.writerow([
                repr(p.ebn0_db), p.blocks, p.block_errors, f"{p.bler:.6e}", f"{lo:.6e}", f"{hi:.6e}",
                p.prune, p.ml_like, p.bit_errors, f"{p.ber:.6e}",
            ])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "list_size": self.list_size,
            "exact": self.exact,
            "config": asdict(self.config),
            "points": [
                {
                    "ebn0_db": p.ebn0_db,
                    "blocks": p.blocks,
                    "block_errors": p.block_errors,
                    "bit_errors": p.bit_errors,
                    "prune": p.prune,
                    "ml_like": p.ml_like,
                    "bler": p.bler,
                    "bler_interval": list(p.interval),
                    "ml_metric_violations": p.ml_metric_violations,
                    "ml_correlation_violations": p.ml_correlation_violations,
                }
                for p in self.points
            ],
        }


def block_seed(seed: int, point: int, block: int, stream: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed), spawn_key=(int(point), int(block), int(stream)))


def _rng(seed) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def awgn_transmit(codeword, sigma: float, seed) -> np.ndarray:
    """BPSK (bit ``b`` -> ``1 - 2b``) plus white Gaussian noise; returns ``2y/sigma^2``."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    c = np.asarray(codeword, dtype=float)
    y = 1.0 - 2.0 * c + sigma * _rng(seed).standard_normal(c.shape)
    return 2.0 * y / sigma**2


def _sigma(ebn0_db: float, rate: float) -> float:
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def _run_batch(args):
    code, list_size, exact, sim, point, first, count = args
    ebn0 = sim.ebn0_db[point]
    k = code.message_length
    rate = code.message_length / code.N
    sigma = _sigma(ebn0, rate)
    msgs = np.empty((count, k), dtype=np.uint8)
    for j in range(count):
        msgs[j] = _rng(block_seed(sim.seed, point, first + j, 0)).integers(0, 2, k, dtype=np.uint8)
    cw = encode_batch(msgs, code)
    if sim.noiseless:
        llr = (1.0 - 2.0 * cw) * NOISELESS_LLR
    else:
        llr = np.stack([
            awgn_transmit(cw[j], sigma, block_seed(sim.seed, point, first + j, 1)) for j in range(count)
        ])
    true_v = code.message_to_v(msgs)
    out = decode_batch(llr, code, list_size, true_v, exact)
    bit_errs = np.sum(out.message != msgs, axis=1)
    event = out.event
    ml = event == 2
    metric_bad = ml & ~(out.metric <= out.true_metric + 1e-9 * np.maximum(1.0, np.abs(out.true_metric)))
    corr_sel = codeword_correlation(out.codeword, llr)
    corr_true = codeword_correlation(cw, llr)
    corr_bad = ml & ~(corr_sel >= corr_true - 1e-9 * np.maximum(1.0, np.abs(corr_true)))
    return event, bit_errs, out.first_loss, metric_bad, corr_bad


def run_bler(code: CodeConfig, list_size: int, sim: SimConfig, exact: bool = False) -> SimResult:
    """Block/bit error rates and genie event counts per Eb/N0 point.

    ``list_size=1`` is plain successive cancellation.  Rates use the
    information rate ``message_length / N`` to set the noise level.
    """
    if list_size < 1:
        raise ValueError("list size must be >= 1")
    points = []
    pool = ProcessPoolExecutor(sim.workers) if sim.workers > 1 else None
    try:
        for p in range(len(sim.ebn0_db)):
            res = PointResult(sim.ebn0_db[p])
            next_block = 0
            done = False
            while not done and next_block < sim.max_blocks:
                wave = []
                for _ in range(sim.workers if pool else 1):
                    if next_block >= sim.max_blocks:
                        break
                    count = min(sim.batch, sim.max_blocks - next_block)
                    wave.append((code, list_size, exact, sim, p, next_block, count))
                    next_block += count
                results = pool.map(_run_batch, wave) if pool else map(_run_batch, wave)
                for event, bit_errs, first_loss, metric_bad, corr_bad in results:
                    if done:
                        break
                    for j in range(len(event)):
                        res.blocks += 1
                        res._bits += code.message_length
                        ev = int(event[j])
                        if ev != 0:
                            res.block_errors += 1
                            res.prune += ev == 1
                            res.ml_like += ev == 2
                            res.bit_errors += int(bit_errs[j])
                            if ev == 1:
                                fl = int(first_loss[j])
                                res.first_error_counts[fl] = res.first_error_counts.get(fl, 0) + 1
                            res.ml_metric_violations += bool(metric_bad[j])
                            res.ml_correlation_violations += bool(corr_bad[j])
                        if res.block_errors >= sim.target_errors:
                            done = True
                            break
            points.append(res)
    finally:
        if pool:
            pool.shutdown()
    return SimResult(points, list_size, exact, sim)

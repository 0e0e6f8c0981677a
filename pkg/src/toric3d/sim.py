"""Monte Carlo bit-flip experiments.

Every trial draws its error from a generator seeded by (master seed, L,
p, trial index), so a sweep gives the same numbers however its trials are
spread over worker processes.  Trials are consumed in index order and the
stop rule is applied in that order too.
"""

from __future__ import annotations

import json
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cellsets import FaceSet
from .decoders import BoundaryDecoder, DecodeStatus, InternalError, PeriodicDecoder
from .lattice import ChainComplex3, build_boundary_slab, build_cubic_torus
from .latticefile import loads
from .stabilizer import LogicalBasis, classify_zero_syndrome, logical_basis, syndrome

DEFAULT_MAX_TRIALS = 100_000
DEFAULT_MAX_LOGICAL = 300
CSV_HEADER = "family,L,n,p,trials,decode_failures,logical_failures,logical_rate,stderr,mean_decode_ms,seed"
FAMILIES = ("cubic-torus", "slab", "rough-slab")

TRIVIAL = "trivial"
LOGICAL = "logical"
DECODE_FAILURE = "decode_failure"


@dataclass(frozen=True)
class DecoderOptions:
    estimator: str = "cubic"
    retries: int = 1
    gf2_fallback: bool | None = None  # None: decoder default


@dataclass(frozen=True)
class LatticeSource:
    """How a worker process rebuilds the lattice: a family and size, or file text."""

    family: str
    L: int
    text: str | None = None

    def build(self) -> ChainComplex3:
        if self.text is not None:
            return loads(self.text)
        if self.family == "cubic-torus":
            return build_cubic_torus(self.L)
        if self.family == "slab":
            return build_boundary_slab(self.L, self.L, self.L)
        if self.family == "rough-slab":
            return build_boundary_slab(self.L, self.L, self.L, rough_axes=(0, 1))
        raise ValueError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class TrialConfig:
    source: LatticeSource
    p: float
    seed: int = 0
    max_trials: int = DEFAULT_MAX_TRIALS
    max_logical: int = DEFAULT_MAX_LOGICAL
    options: DecoderOptions = DecoderOptions()

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.max_trials <= 0 or self.max_logical <= 0:
            raise ValueError("stop rule limits must be positive")


class LatticeContext:
    """Lattice, decoder and logical basis shared read-only by many trials."""

    def __init__(self, lattice: ChainComplex3, options: DecoderOptions = DecoderOptions()):
        self.lattice = lattice
        self.basis: LogicalBasis = logical_basis(lattice)
        extra = {} if options.gf2_fallback is None else {"gf2_fallback": options.gf2_fallback}
        if lattice.periodic:
            self.decoder = PeriodicDecoder(
                lattice, self.basis, estimator=options.estimator, retries=options.retries, **extra
            )
        else:
            self.decoder = BoundaryDecoder(lattice, **extra)

    @classmethod
    def from_source(cls, source: LatticeSource, options: DecoderOptions = DecoderOptions()) -> "LatticeContext":
        return cls(source.build(), options)


def trial_rng(seed: int, L: int, p: float, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, L, round(p * 1_000_000), index]))


def sample_error(face_count: int, p: float, rng: np.random.Generator) -> FaceSet:
    """Each face flipped independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    hits = np.flatnonzero(rng.random(face_count) < p)
    return FaceSet.from_ids(face_count, hits.tolist())


@dataclass(frozen=True)
class TrialRecord:
    kind: str
    status: str
    seconds: float
    retry_used: bool = False
    projection_failed: bool = False

    @property
    def failed(self) -> bool:
        return self.kind != TRIVIAL


def run_trial(
    ctx: LatticeContext,
    config: TrialConfig,
    index: int,
    forced_error: FaceSet | None = None,
    forced_estimate: FaceSet | None = None,
) -> TrialRecord:
    """One sample, decode and classify.

    ``forced_error`` and ``forced_estimate`` replace the sampled error or
    the decoder's answer; they exist for tests.
    """
    c = ctx.lattice
    if forced_error is None:
        error = sample_error(c.n_faces, config.p, trial_rng(config.seed, config.source.L, config.p, index))
    else:
        error = forced_error
    s = syndrome(c, error)
    start = time.perf_counter()
    outcome = ctx.decoder.decode(s)
    seconds = time.perf_counter() - start
    diag = outcome.diagnostics
    retry = bool(diag.get("retry_used", False))
    if forced_estimate is not None:
        estimate = forced_estimate
    elif outcome.success:
        estimate = outcome.estimate
    else:
        projection = outcome.status is DecodeStatus.KLEIN_BOTTLE_SUSPECTED
        return TrialRecord(DECODE_FAILURE, str(outcome.status), seconds, retry, projection)
    residual = error ^ estimate
    if syndrome(c, residual):
        raise InternalError(f"trial {index}: residual has a nonzero syndrome")
    kind = TRIVIAL if classify_zero_syndrome(c, ctx.basis, residual).trivial else LOGICAL
    return TrialRecord(kind, str(outcome.status), seconds, retry, False)


@dataclass
class PointResult:
    family: str
    L: int
    n: int
    p: float
    seed: int
    trials: int = 0
    logical_failures: int = 0
    decode_failures: int = 0
    failures_by_status: dict = field(default_factory=dict)
    retry_trials: int = 0
    projection_failures: int = 0
    total_seconds: float = 0.0

    @property
    def failures(self) -> int:
        # decode failures count as logical failures
        return self.logical_failures + self.decode_failures

    @property
    def logical_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    @property
    def stderr(self) -> float:
        if not self.trials:
            return 0.0
        r = self.logical_rate
        return math.sqrt(r * (1.0 - r) / self.trials)

    @property
    def mean_decode_ms(self) -> float:
        return 1000.0 * self.total_seconds / self.trials if self.trials else 0.0

    def add(self, record: TrialRecord) -> None:
        self.trials += 1
        self.total_seconds += record.seconds
        self.retry_trials += record.retry_used
        if record.kind == LOGICAL:
            self.logical_failures += 1
        elif record.kind == DECODE_FAILURE:
            self.decode_failures += 1
            self.failures_by_status[record.status] = self.failures_by_status.get(record.status, 0) + 1
            self.projection_failures += record.projection_failed

    def csv_row(self, timing: bool = True) -> str:
        ms = f"{self.mean_decode_ms:.4f}" if timing else ""
        return (
            f"{self.family},{self.L},{self.n},{self.p:.6g},{self.trials},{self.decode_failures},"
            f"{self.failures},{self.logical_rate:.6g},{self.stderr:.6g},{ms},{self.seed}"
        )

    def to_dict(self, timing: bool = True) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "total_seconds"}
        d.update(
            failures=self.failures,
            logical_rate=self.logical_rate,
            stderr=self.stderr,
            mean_decode_ms=self.mean_decode_ms if timing else None,
        )
        return d


# worker-side cache so each process builds a lattice context once
_CONTEXTS: dict = {}


def _context(source: LatticeSource, options: DecoderOptions) -> LatticeContext:
    key = (source, options)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = LatticeContext.from_source(source, options)
        _CONTEXTS[key] = ctx
    return ctx


def _run_chunk(config: TrialConfig, start: int, stop: int) -> list[TrialRecord]:
    ctx = _context(config.source, config.options)
    return [run_trial(ctx, config, i) for i in range(start, stop)]


def _chunks(config: TrialConfig, chunk: int) -> Iterable[tuple[int, int]]:
    for start in range(0, config.max_trials, chunk):
        yield start, min(start + chunk, config.max_trials)


def run_point(
    config: TrialConfig,
    threads: int = 1,
    chunk: int = 64,
    executor: ProcessPoolExecutor | None = None,
    ctx: LatticeContext | None = None,
) -> PointResult:
    """Run trials in index order until the stop rule fires.

    With several workers, chunks are computed ahead and consumed in order;
    records past the stopping trial are discarded, so the result does not
    depend on the worker count.
    """
    if ctx is None:
        ctx = _context(config.source, config.options)
    result = PointResult(config.source.family, config.source.L, ctx.lattice.n_faces, config.p, config.seed)

    def consume(records: Sequence[TrialRecord]) -> bool:
        for rec in records:
            result.add(rec)
            if result.failures >= config.max_logical or result.trials >= config.max_trials:
                return True
        return False

    if executor is None and threads <= 1:
        for start, stop in _chunks(config, chunk):
            if consume([run_trial(ctx, config, i) for i in range(start, stop)]):
                break
        return result

    own = executor is None
    pool = executor if executor is not None else ProcessPoolExecutor(max_workers=threads)
    try:
        width = 2 * getattr(pool, "_max_workers", threads)
        pending = []
        chunks = iter(_chunks(config, chunk))
        done = False
        while not done:
            while len(pending) < width:
                nxt = next(chunks, None)
                if nxt is None:
                    break
                pending.append(pool.submit(_run_chunk, config, *nxt))
            if not pending:
                break
            done = consume(pending.pop(0).result())
        for fut in pending:
            fut.cancel()
    finally:
        if own:
            pool.shutdown(wait=True, cancel_futures=True)
    return result


@dataclass
class SweepReport:
    rows: list[PointResult]
    config: dict

    def to_csv(self, timing: bool = True) -> str:
        lines = [CSV_HEADER] + [r.csv_row(timing) for r in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self, timing: bool = True) -> str:
        payload = {"config": self.config, "rows": [r.to_dict(timing) for r in self.rows]}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def rate(self, L: int, p: float) -> float:
        for r in self.rows:
            if r.L == L and math.isclose(r.p, p, abs_tol=1e-12):
                return r.logical_rate
        raise KeyError((L, p))


def default_threads() -> int:
    raw = os.environ.get("TORIC3D_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1


def run_sweep(
    family: str,
    sizes: Sequence[int],
    ps: Sequence[float],
    seed: int = 0,
    max_trials: int = DEFAULT_MAX_TRIALS,
    max_logical: int = DEFAULT_MAX_LOGICAL,
    options: DecoderOptions = DecoderOptions(),
    threads: int = 1,
    lattice_text: str | None = None,
) -> SweepReport:
    """Every (L, p) pair in order; each point honours the stop rule independently."""
    rows = []
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for L in sizes:
            source = LatticeSource(family, L, lattice_text)
            for p in ps:
                config = TrialConfig(source, p, seed, max_trials, max_logical, options)
                rows.append(run_point(config, threads=threads, executor=pool))
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)
    echo = {
        "family": family,
        "sizes": list(sizes),
        "ps": list(ps),
        "seed": seed,
        "max_trials": max_trials,
        "max_logical": max_logical,
        "estimator": options.estimator,
        "retries": options.retries,
        "gf2_fallback": options.gf2_fallback,
    }
    return SweepReport(rows, echo)


def crossing(ps: Sequence[float], rates_a: Sequence[float], rates_b: Sequence[float]) -> list[float]:
    """Linear-interpolated p values where two rate curves cross."""
    out = []
    diff = [a - b for a, b in zip(rates_a, rates_b)]
    for i in range(len(ps) - 1):
        d0, d1 = diff[i], diff[i + 1]
        if d0 == 0:
            out.append(ps[i])
        elif d0 * d1 < 0:
            out.append(ps[i] + (ps[i + 1] - ps[i]) * d0 / (d0 - d1))
    if diff and diff[-1] == 0:
        out.append(ps[-1])
    return out


def fit_power_law(ns: Sequence[float], ts: Sequence[float]) -> tuple[float, float]:
    """Least-squares fit of log t = log c + alpha log n; returns (c, alpha)."""
    alpha, logc = np.polyfit(np.log(ns), np.log(ts), 1)
    return float(math.exp(logc)), float(alpha)


def status_counts(records: Iterable[TrialRecord]) -> Counter:
    return Counter(r.status for r in records)

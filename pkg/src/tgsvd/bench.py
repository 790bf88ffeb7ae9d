"""Data generators, timing harness and report writer for GTSVD benchmarks."""

import csv
import io
import json
import os
import platform
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BenchSpecError
from .gtsvd import ALGORITHMS, relative_error
from .sketch import SketchConfig
from .tensor_core import tprod

EXPERIMENTS = ("synthetic", "analytic")
FORMATS = ("json", "csv")
CSV_COLUMNS = ("algo", "n", "R", "p", "q", "trials", "trial", "time_s", "rel_error", "mean_time_s", "mean_rel_error")


def gen_low_tubal_rank(n, rank, seed=0):
    """``A * B`` with standard Gaussian ``A`` (n x R x n) and ``B`` (R x n x n); tubal rank ``R`` almost surely."""
    if not 1 <= rank <= n:
        raise BenchSpecError(f"rank must lie in [1, n = {n}], got {rank}")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, rank, n))
    b = rng.standard_normal((rank, n, n))
    return tprod(a, b)


def _grid(n):
    if n < 1:
        raise BenchSpecError(f"n must be positive, got {n}")
    i = np.arange(1, n + 1, dtype=np.float64)
    return i[:, None, None], i[None, :, None], i[None, None, :]


def gen_inverse_distance(n):
    """``X(i, j, k) = 1 / sqrt(i^2 + j^2 + k^2)`` with 1-based indices."""
    i, j, k = _grid(n)
    return 1.0 / np.sqrt(i**2 + j**2 + k**2)


def gen_cubic_root(n):
    """``Y(i, j, k) = (i^3 + j^3 + k^3)^(-1/3)`` with 1-based indices."""
    i, j, k = _grid(n)
    return (i**3 + j**3 + k**3) ** (-1.0 / 3.0)


@dataclass(frozen=True)
class BenchSpec:
    experiment: str = "synthetic"
    n: int = 50
    rank: int = 10
    oversample: int = 10
    power: int = 0
    algo: str = "rand2"
    trials: int = 3
    seed: int = 0
    out: str = "-"
    fmt: str = "json"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise BenchSpecError(f"unknown experiment {self.experiment!r}")
        if self.algo not in ALGORITHMS:
            raise BenchSpecError(f"unknown algorithm {self.algo!r}, expected one of {sorted(ALGORITHMS)}")
        if self.fmt not in FORMATS:
            raise BenchSpecError(f"unknown format {self.fmt!r}")
        if self.n < 1 or self.rank < 1 or self.oversample < 0 or self.power < 0:
            raise BenchSpecError("n and rank must be positive, oversample and power nonnegative")
        if self.trials < 1:
            raise BenchSpecError(f"trials must be at least 1, got {self.trials}")
        if self.n < self.rank + self.oversample:
            raise BenchSpecError(f"n = {self.n} is smaller than rank + oversample = {self.rank + self.oversample}")
        if not 0 <= self.seed < 2**64:
            raise BenchSpecError("seed must fit in an unsigned 64-bit integer")

    def sketch(self, trial):
        """Sketch config of one trial; its seed is a child of the spec seed."""
        seed = int(np.random.SeedSequence(self.seed, spawn_key=(trial,)).generate_state(1, np.uint64)[0])
        return SketchConfig(self.rank, self.rank, self.oversample, self.oversample, self.power, seed)


@dataclass
class BenchReport:
    algo: str
    n: int
    R: int
    p: int
    q: int
    trials: int
    times_s: list
    rel_errors: list
    experiment: str = "synthetic"
    seed: int = 0
    environment: dict = field(default_factory=dict)

    @property
    def mean_time_s(self):
        return float(np.mean(self.times_s))

    @property
    def median_time_s(self):
        return float(np.median(self.times_s))

    @property
    def min_time_s(self):
        return float(np.min(self.times_s))

    @property
    def mean_rel_error(self):
        return float(np.mean(self.rel_errors))

    def to_dict(self):
        d = asdict(self)
        d.update(
            mean_time_s=self.mean_time_s,
            median_time_s=self.median_time_s,
            min_time_s=self.min_time_s,
            mean_rel_error=self.mean_rel_error,
        )
        return d

    @classmethod
    def from_dict(cls, d):
        names = cls.__dataclass_fields__
        return cls(**{k: v for k, v in d.items() if k in names})


def environment_note():
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "machine": platform.machine(),
        "cpus": os.cpu_count(),
    }


def make_pair(spec):
    """The ``(X, Y)`` pair of an experiment; both are ``n x n x n``."""
    if spec.experiment == "analytic":
        return gen_inverse_distance(spec.n), gen_cubic_root(spec.n)
    seeds = np.random.SeedSequence(spec.seed).spawn(2)
    return (
        gen_low_tubal_rank(spec.n, spec.rank, np.random.default_rng(seeds[0])),
        gen_low_tubal_rank(spec.n, spec.rank, np.random.default_rng(seeds[1])),
    )


def run_benchmark(spec, pair=None, clock=time.perf_counter):
    """Time ``spec.trials`` factorizations of the experiment pair.

    Only the factorization is timed; data generation and the error
    evaluation happen outside the clock.  Errors raised by an algorithm are
    re-raised with the trial context attached.
    """
    x, y = make_pair(spec) if pair is None else pair
    factor = ALGORITHMS[spec.algo]
    times, errors = [], []
    for t in range(spec.trials):
        cfg = spec.sketch(t)
        start = clock()
        try:
            f = factor(x, y, cfg)
        except Exception as exc:
            raise RuntimeError(f"{spec.algo} failed on trial {t} (n={spec.n}, R={spec.rank}): {exc}") from exc
        times.append(max(clock() - start, 1e-9))
        errors.append(relative_error(x, y, f))
    return BenchReport(
        spec.algo,
        spec.n,
        spec.rank,
        spec.oversample,
        spec.power,
        spec.trials,
        times,
        errors,
        spec.experiment,
        spec.seed,
        environment_note(),
    )


def _csv_text(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        for t, (sec, err) in enumerate(zip(r.times_s, r.rel_errors)):
            w.writerow([r.algo, r.n, r.R, r.p, r.q, r.trials, t, repr(sec), repr(err), repr(r.mean_time_s), repr(r.mean_rel_error)])
    return buf.getvalue()


def format_report(reports, fmt="json"):
    """Render one report or a list of them as JSON or CSV text."""
    single = isinstance(reports, BenchReport)
    reports = [reports] if single else list(reports)
    if not reports or any(not r.times_s for r in reports):
        raise BenchSpecError("refusing to emit a report without trials")
    if fmt == "json":
        body = reports[0].to_dict() if single else [r.to_dict() for r in reports]
        return json.dumps(body, indent=2) + "\n"
    if fmt == "csv":
        return _csv_text(reports)
    raise BenchSpecError(f"unknown format {fmt!r}")


def emit_report(reports, path, fmt="json"):
    """Write :func:`format_report` output to ``path`` (``"-"`` for stdout)."""
    text = format_report(reports, fmt)
    if path in (None, "-"):
        print(text, end="")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text

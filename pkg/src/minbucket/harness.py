"""Seeded Monte Carlo runs of MinBucket work on ECM graphs.

One trial = draw degrees, build an ECM graph, run MinBucket, record the
wedge counter. Trials are independent and seeded from
``(master_seed, n, trial)``, so results do not depend on the worker count.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import BoundReport, limit_constant
from .degrees import (
    DegreeSequence,
    DivergenceError,
    PowerLawParams,
    ReferenceDistribution,
    cap_sqrt_n,
    cap_sqrt_n_over_log2,
    power_law_sequence,
    sample_iid_degrees,
)
from .graph import generate_ecm
from .triangles import TIE_MODES, minbucket_enumerate, pair_work, trivial_enumerate

WORKERS_ENV = "MINBUCKET_WORKERS"

CSV_HEADER = ("n", "alpha", "trial", "work", "trivial_work", "edges", "ratio")
PLOT_HEADER = ("n", "mean_ratio", "stddev", "reference_Cn")


class ConfigError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """A trial would exceed ``max_stubs``; ``partial`` holds the finished prefix."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float = 2.4
    n_values: tuple[int, ...] = (10**4, 10**5, 10**6)
    trials: int = 10
    cap_rule: str = "sqrt_n"            # sqrt_n | sqrt_n_over_log2 | fixed:K
    tie_mode: str = "consistent"
    degree_model: str = "iid"           # iid | deterministic_powerlaw
    master_seed: int = 0
    workers: int = 1
    fixed_degrees: bool = False         # one degree sequence per n, shared by its trials
    bucket_by: str = "realized"         # realized | target
    reference_cap: int | None = None    # support cap of the distribution behind C
    max_stubs: int | None = None
    audit: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.n_values:
            raise ConfigError("n_values must be nonempty")
        if list(self.n_values) != sorted(set(self.n_values)):
            raise ConfigError("n_values must be strictly ascending")
        if self.n_values[0] < 2:
            raise ConfigError("every n must be >= 2")
        if not self.alpha > 1:
            raise ConfigError("alpha must be > 1")
        if self.tie_mode not in TIE_MODES:
            raise ConfigError(f"tie_mode must be one of {TIE_MODES}")
        if self.degree_model not in ("iid", "deterministic_powerlaw"):
            raise ConfigError(f"unknown degree_model {self.degree_model!r}")
        if self.bucket_by not in ("realized", "target"):
            raise ConfigError(f"unknown bucket_by {self.bucket_by!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        self.cap(self.n_values[0])  # validates cap_rule

    def cap(self, n: int) -> int:
        rule = self.cap_rule
        if rule == "sqrt_n":
            c = cap_sqrt_n(n)
        elif rule == "sqrt_n_over_log2":
            c = cap_sqrt_n_over_log2(n)
        elif rule.startswith("fixed:") and rule[6:].isdigit() and int(rule[6:]) >= 1:
            c = int(rule[6:])
        else:
            raise ConfigError(f"bad cap_rule {rule!r}")
        return min(c, n - 1)


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial: int
    work: int
    trivial_work: int
    edges: int
    mean_degree: float
    audit: dict | None = field(default=None, compare=False)

    @property
    def ratio(self) -> float:
        return self.work / self.n


@dataclass(frozen=True)
class NSummary:
    n: int
    trials: int
    mean_work: float
    std_work: float
    mean_ratio: float
    std_ratio: float


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: tuple[TrialRecord, ...]
    summary: tuple[NSummary, ...]
    reference_constant: float | None
    complete: bool = True

    def by_n(self, n: int) -> NSummary:
        for s in self.summary:
            if s.n == n:
                return s
        raise KeyError(n)


def trial_seed(master_seed: int, n: int, trial: int) -> int:
    """128-bit seed, a pure function of ``(master_seed, n, trial)``."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(int(n), int(trial)))
    hi, lo = ss.generate_state(2, np.uint64).tolist()
    return (hi << 64) | lo


def _degree_seed(master_seed: int, n: int) -> int:
    # spawn_key of length 1 never collides with the (n, trial) keys above
    ss = np.random.SeedSequence(master_seed, spawn_key=(int(n),))
    hi, lo = ss.generate_state(2, np.uint64).tolist()
    return (hi << 64) | lo


def make_degrees(cfg: ExperimentConfig, n: int, rng) -> DegreeSequence:
    cap = cfg.cap(n)
    if cfg.degree_model == "deterministic_powerlaw":
        return power_law_sequence(PowerLawParams(cfg.alpha, n, cap))
    return sample_iid_degrees(ReferenceDistribution.power_law(cfg.alpha, cap), n, rng)


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> TrialRecord:
    rng = np.random.default_rng(trial_seed(cfg.master_seed, n, trial))
    if cfg.fixed_degrees:
        seq = make_degrees(cfg, n, np.random.default_rng(_degree_seed(cfg.master_seed, n)))
    else:
        seq = make_degrees(cfg, n, rng)
    if cfg.max_stubs is not None and seq.stub_sum > cfg.max_stubs:
        raise ResourceLimitError(
            f"n={n} trial={trial}: {seq.stub_sum} stubs exceeds max_stubs={cfg.max_stubs}")
    g, _ = generate_ecm(seq, rng)
    target = seq.vertex_degrees() if cfg.bucket_by == "target" else None
    rep = minbucket_enumerate(g, cfg.tie_mode, degrees=target)
    audit = None
    if cfg.audit:
        other = "consistent" if cfg.tie_mode == "both" else "both"
        alt = minbucket_enumerate(g, other, degrees=target)
        triv = trivial_enumerate(g)
        audit = {
            "work_closed_form": pair_work(rep.bucket_sizes),
            "trivial_counter": triv.wedges_enumerated,
            "max_bucket_minus_degree": int((rep.bucket_sizes - g.degrees).max()),
            f"work_{other}": alt.wedges_enumerated,
            f"work_{cfg.tie_mode}": rep.wedges_enumerated,
        }
    return TrialRecord(
        n=n,
        trial=trial,
        work=rep.wedges_enumerated,
        trivial_work=pair_work(g.degrees),
        edges=g.edge_count,
        mean_degree=2 * g.edge_count / n,
        audit=audit,
    )


def _run_task(args):
    return run_trial(*args)


def aggregate(records) -> tuple[NSummary, ...]:
    out = []
    ns = sorted({r.n for r in records})
    for n in ns:
        w = np.array([r.work for r in records if r.n == n], dtype=float)
        ratio = w / n
        sd = float(np.std(w, ddof=1)) if w.size > 1 else math.nan
        sdr = float(np.std(ratio, ddof=1)) if w.size > 1 else math.nan
        out.append(NSummary(n, int(w.size), float(w.mean()), sd, float(ratio.mean()), sdr))
    return tuple(out)


def reference_constant(cfg: ExperimentConfig) -> float | None:
    """Limit constant of the configured power law, or None when alpha <= 7/3."""
    if cfg.alpha <= 7 / 3:
        return None
    try:
        return limit_constant(ReferenceDistribution.power_law(cfg.alpha, cfg.reference_cap)).value
    except DivergenceError:
        return None


def _finish(cfg, records, complete):
    return ExperimentResult(cfg, tuple(records), aggregate(records), reference_constant(cfg),
                            complete)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run every ``(n, trial)`` and aggregate in ``(n, trial)`` order.

    On :class:`ResourceLimitError` the exception carries the results of all
    trials that precede the failing one.
    """
    tasks = [(cfg, n, t) for n in cfg.n_values for t in range(cfg.trials)]
    records = []
    try:
        if cfg.workers == 1:
            for task in tasks:
                records.append(_run_task(task))
        else:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                for rec in pool.map(_run_task, tasks):
                    records.append(rec)
    except ResourceLimitError as exc:
        exc.partial = _finish(cfg, records, complete=False)
        raise
    return _finish(cfg, records, complete=True)


def default_workers() -> int:
    v = os.environ.get(WORKERS_ENV)
    if v is None:
        return 1
    if not v.isdigit() or int(v) < 1:
        raise ConfigError(f"{WORKERS_ENV} must be a positive integer, got {v!r}")
    return int(v)


# ---------------------------------------------------------------------------
# output


def csv_text(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    a = repr(float(result.config.alpha))
    for r in result.records:
        w.writerow([r.n, a, r.trial, r.work, r.trivial_work, r.edges, f"{r.ratio:.6f}"])
    return buf.getvalue()


def plot_text(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PLOT_HEADER)
    c = result.reference_constant
    for s in result.summary:
        sd = "" if math.isnan(s.std_ratio) else f"{s.std_ratio:.6f}"
        ref = "" if c is None else f"{c * s.n:.6f}"
        w.writerow([s.n, f"{s.mean_ratio:.6f}", sd, ref])
    return buf.getvalue()


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(result: ExperimentResult, path) -> None:
    _write(path, csv_text(result))


def emit_plot_data(result: ExperimentResult, path) -> None:
    _write(path, plot_text(result))


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    mean_work: float
    predicted: float
    ratio: float


def compare_bounds(result: ExperimentResult, report: BoundReport) -> list[ComparisonRow]:
    """Empirical mean work against ``C * n`` for each ``n``."""
    if not result.summary:
        return []
    if report.alpha is None or not math.isclose(report.alpha, result.config.alpha):
        raise ValueError(f"bound report alpha {report.alpha} does not match "
                         f"experiment alpha {result.config.alpha}")
    if report.limit_constant is None:
        raise ValueError("bound report has no limit constant")
    c = report.limit_constant.value
    return [ComparisonRow(s.n, s.mean_work, c * s.n, s.mean_work / (c * s.n))
            for s in result.summary]


# ---------------------------------------------------------------------------
# key=value config files

_FILE_KEYS = {"alpha", "n_list", "trials", "tie", "cap", "seed", "workers", "csv",
              "plot_data", "degree_model", "fixed_degrees", "bucket_by", "reference_cap",
              "max_stubs"}


def read_config_file(path) -> dict[str, str]:
    """Flat ``key=value`` lines; keys are the CLI flag names with ``_``."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        k, v = (x.strip() for x in s.split("=", 1))
        k = k.replace("-", "_")
        if k not in _FILE_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {k!r}")
        out[k] = v
    return out


def parse_n_list(text: str) -> tuple[int, ...]:
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            x = float(tok)
        except ValueError:
            raise ConfigError(f"bad n value {tok!r}") from None
        if x != int(x):
            raise ConfigError(f"n must be an integer, got {tok!r}")
        vals.append(int(x))
    return tuple(vals)


def parse_cap(text: str) -> str:
    t = text.strip().replace("-", "_")
    if t in ("sqrt_n", "sqrt_n_over_log2"):
        return t
    if t.isdigit():
        return f"fixed:{t}"
    if t.startswith("fixed:"):
        return t
    raise ConfigError(f"bad cap {text!r}")

"""Parameter sweeps over rho-MNK landscapes with replicated walks.

Seeds for every (cell, replicate, role) come from :func:`derive_seed`, so
results do not depend on execution order or on the number of workers.
Rows are written in long format::

    n,m,k,rho,mu,instance_seed,walk_seed,metric,value

and per-cell aggregates go to a sibling ``<stem>_summary.csv``.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .copula import CorrelationMatrix, validate
from .errors import InfeasibleCorrelation, InvalidConfig
from .landscape import InstanceParams, generate
from .walks import DEFAULT_BUDGET, adaptive_walk, autocorrelation, random_walk

log = logging.getLogger(__name__)

ROW_FIELDS = ("n", "m", "k", "rho", "mu", "instance_seed", "walk_seed", "metric", "value")
CELL_FIELDS = ("n", "m", "k", "rho", "mu", "metric")
SUMMARY_FIELDS = CELL_FIELDS + ("mean", "std", "count", "excluded")
ADAPTIVE_METRICS = (
    "steps_taken",
    "evaluations_used",
    "final_hypervolume",
    "nondominated_count",
    "certified",
)

# grid used in the experiments
TABLE1_GRID = dict(
    n_values=(64,),
    m_values=(2, 3, 5),
    k_values=(2, 4, 6, 8, 10),
    rho_values=(-0.9, -0.7, -0.4, -0.2, 0.0, 0.2, 0.4, 0.7, 0.9),
)
DESK_SCALE = dict(k_values=(2, 6, 10), rho_values=(-0.4, 0.0, 0.4, 0.9), replicates=10)


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple = TABLE1_GRID["n_values"]
    m_values: tuple = TABLE1_GRID["m_values"]
    k_values: tuple = TABLE1_GRID["k_values"]
    rho_values: tuple = TABLE1_GRID["rho_values"]
    mu: int = 100
    walk_kind: str = "random"
    walk_length: int = 5000
    replicates: int = 30
    base_seed: int = 0
    output_path: str | None = None
    budget: int = DEFAULT_BUDGET
    k_max: int = 100
    workers: int = 1

    def validate(self) -> None:
        if self.walk_kind not in ("random", "adaptive"):
            raise InvalidConfig(f"walk kind must be 'random' or 'adaptive', got {self.walk_kind!r}")
        if self.replicates < 1:
            raise InvalidConfig("replicates must be >= 1")
        if self.mu < 1:
            raise InvalidConfig("mu must be >= 1")
        if self.walk_kind == "random" and self.walk_length < 2:
            raise InvalidConfig("random walks need a length of at least 2")
        if self.workers < 1:
            raise InvalidConfig("workers must be >= 1")
        if self.budget < 1:
            raise InvalidConfig("budget must be >= 1")
        if not 0 <= self.base_seed < 2**64:
            raise InvalidConfig("base seed must be a 64-bit unsigned integer")
        for values in (self.n_values, self.m_values, self.k_values, self.rho_values):
            if not values:
                raise InvalidConfig("every grid axis needs at least one value")
        for n, k in itertools.product(self.n_values, self.k_values):
            if n < 1 or not 0 <= k <= n - 1:
                raise InvalidConfig(f"k={k} is not in [0, n-1] for n={n}")
        if any(m < 1 for m in self.m_values):
            raise InvalidConfig("m must be >= 1")
        for n in self.n_values:
            if n < 63 and self.mu > 2**n:
                raise InvalidConfig(f"mu={self.mu} exceeds the 2**{n} distinct solutions")

    @property
    def lag_count(self) -> int:
        return min(self.k_max, self.walk_length - 1)


@dataclass(frozen=True)
class ResultRow:
    n: int
    m: int
    k: int
    rho: float
    mu: int
    instance_seed: int
    walk_seed: int
    metric: str
    value: float


@dataclass
class SweepResult:
    rows: list
    summary: list
    skipped: list = field(default_factory=list)


def derive_seed(base_seed: int, cell: tuple, replicate: int, role: str) -> int:
    """64-bit seed from BLAKE2b over the textual key ``base|cell|replicate|role``.

    Floats in ``cell`` enter through ``repr`` so that e.g. ``0.2`` and
    ``0.20000000000000001`` map alike.
    """
    parts = [str(int(base_seed))]
    parts += [repr(float(c)) if isinstance(c, float) else str(c) for c in cell]
    parts += [str(int(replicate)), role]
    digest = hashlib.blake2b("|".join(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def feasible(m: int, rho: float) -> bool:
    try:
        validate(CorrelationMatrix(m, rho))
    except InfeasibleCorrelation:
        return False
    return True


def grid_cells(config: SweepConfig) -> tuple[list, list]:
    """Feasible ``(n, m, k, rho)`` cells in grid order, and the skipped ones."""
    cells, skipped = [], []
    for n, m, k, rho in itertools.product(
        config.n_values, config.m_values, config.k_values, config.rho_values
    ):
        cell = (int(n), int(m), int(k), float(rho))
        if feasible(cell[1], cell[3]):
            cells.append(cell)
        else:
            skipped.append(cell)
    return cells, skipped


def run_replicate(config: SweepConfig, cell: tuple, replicate: int) -> list[ResultRow]:
    n, m, k, rho = cell
    key = (n, m, k, rho, config.mu)
    instance_seed = derive_seed(config.base_seed, key, replicate, "instance")
    walk_seed = derive_seed(config.base_seed, key, replicate, "walk")
    instance = generate(InstanceParams(n, m, k, rho, instance_seed))

    def row(metric, value):
        return ResultRow(n, m, k, rho, config.mu, instance_seed, walk_seed, metric, float(value))

    if config.walk_kind == "random":
        walk = random_walk(instance, config.mu, config.walk_length, walk_seed)
        try:
            ac = autocorrelation(walk.fitness_series, config.lag_count)
        except ValueError:
            # constant series: every lag and tau undefined
            nan = [math.nan] * config.lag_count
            return [row(f"r{j + 1}", v) for j, v in enumerate(nan)] + [row("tau", math.nan)]
        rows = [row(f"r{j + 1}", v) for j, v in enumerate(ac.r)]
        rows.append(row("tau", math.nan if ac.tau is None else ac.tau))
        return rows

    walk = adaptive_walk(instance, config.mu, walk_seed, budget=config.budget)
    values = (
        walk.steps_taken,
        walk.evaluations_used,
        walk.final_fitness,
        walk.nondominated_count,
        1.0 if walk.certified else 0.0,
    )
    return [row(name, v) for name, v in zip(ADAPTIVE_METRICS, values)]


def _run_unit(args):
    return run_replicate(*args)


def summarize(rows, group_by=CELL_FIELDS) -> list[dict]:
    """Mean, sample standard deviation and count of ``value`` per group.

    NaN values are left out and tallied in ``excluded``. Groups keep the
    order of their first row.
    """
    groups: dict[tuple, list] = {}
    for r in rows:
        groups.setdefault(tuple(getattr(r, f) for f in group_by), []).append(r.value)
    out = []
    for key, values in groups.items():
        defined = [v for v in values if not math.isnan(v)]
        count = len(defined)
        if count == 0:
            mean = std = math.nan
        else:
            mean = statistics.fmean(defined)
            std = statistics.stdev(defined) if count > 1 else 0.0
        agg = dict(zip(group_by, key))
        agg.update(mean=mean, std=std, count=count, excluded=len(values) - count)
        out.append(agg)
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def summary_path(output_path) -> Path:
    p = Path(output_path)
    return p.with_name(p.stem + "_summary" + (p.suffix or ".csv"))


def write_rows(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for r in rows:
            w.writerow([_fmt(getattr(r, f)) for f in ROW_FIELDS])


def write_summary(summary, path, fields=SUMMARY_FIELDS) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for agg in summary:
            w.writerow([_fmt(agg[f]) for f in fields])


def run_sweep(config: SweepConfig) -> SweepResult:
    """Run every feasible cell ``config.replicates`` times.

    Infeasible ``(m, rho)`` pairs are logged and skipped before any instance
    is generated. With ``workers > 1`` units run in a process pool; results
    are reassembled in (cell, replicate) order.
    """
    config.validate()
    cells, skipped = grid_cells(config)
    for cell in skipped:
        log.warning("skipping infeasible cell n=%d m=%d k=%d rho=%r", *cell)

    units = [(config, cell, rep) for cell in cells for rep in range(config.replicates)]
    if config.workers > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_run_unit, units))
    else:
        chunks = [_run_unit(u) for u in units]
    rows = [r for chunk in chunks for r in chunk]
    summary = summarize(rows)

    if config.output_path is not None:
        write_rows(rows, config.output_path)
        write_summary(summary, summary_path(config.output_path))
    return SweepResult(rows=rows, summary=summary, skipped=skipped)


def with_overrides(config: SweepConfig, **changes) -> SweepConfig:
    return replace(config, **{k: v for k, v in changes.items() if v is not None})

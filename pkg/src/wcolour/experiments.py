"""Monte Carlo sweeps over (n, p, theta) grids and CSV / JSON Lines emission.

Four kinds of sweep:

- t1a: greedy and two-stage colourings against the linear bound 2 mu n p
- t1b: heavy-tailed weights, where the largest edge weight outgrows n p
- t2: fraction of uniform r-colourings with a good copy of a balanced pattern
- concentration: per-vertex degree deviations against the Chernoff bound

Every trial derives its randomness from (master seed, seed path), so a record
can be replayed alone and output files do not depend on the worker count.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
import sys
import threading
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, Sequence, TextIO

from .colouring import (
    exact_chi_w,
    greedy_colour,
    local_average_bound,
    random_order,
    two_stage_colour,
)
from .config import (
    DEFAULT_EXACT_BUDGET,
    EXACT_MAX_N,
    EXPERIMENT_DEFAULTS,
    EXPERIMENT_KINDS,
    OUTPUT_FORMATS,
    RECORD_COLUMNS,
)
from .errors import ContractViolation, InvalidInputError
from .graph import degree_stats, gen_gnp, p_from_beta
from .patterns import PatternGraph, is_balanced, resolve_pattern
from .seeding import Seed
from .system_utils import ordered_map
from .threshold import CopyTable, ThresholdParams, sample_goodness, theta_threshold
from .weights import WeightDistributionSpec, sample_weights

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep parameters. Exactly one of `beta` and `p_grid` fixes p per n,
    except for t2, which needs `beta` (the threshold depends on it)."""

    kind: str
    n_grid: tuple[int, ...]
    dist: WeightDistributionSpec = field(default_factory=WeightDistributionSpec.constant)
    beta: Optional[float] = None
    p_grid: Optional[tuple[float, ...]] = None
    theta_grid: tuple[float, ...] = ()
    pattern: str = "triangle"
    eps: float = 0.3
    trials: Optional[int] = None
    colourings: Optional[int] = None
    K: Optional[int] = None
    M: Optional[int] = None
    order: str = "id"
    exact_budget: int = DEFAULT_EXACT_BUDGET
    master_seed: int = 0
    output: Optional[str] = None
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "theta_grid", tuple(float(t) for t in self.theta_grid))
        if self.p_grid is not None:
            object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        defaults = EXPERIMENT_DEFAULTS.get(self.kind, {})
        if self.trials is None:
            object.__setattr__(self, "trials", defaults.get("trials", 1))
        if self.colourings is None:
            object.__setattr__(self, "colourings", defaults.get("colourings", 1))
        self._validate()

    def _validate(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise InvalidInputError(f"unknown experiment kind '{self.kind}' (valid: {', '.join(EXPERIMENT_KINDS)})")
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise InvalidInputError("n grid must be non-empty with every n >= 1")
        if self.trials < 1 or self.colourings < 1:
            raise InvalidInputError("trials and colourings must be >= 1")
        if not 0.0 < self.eps < 0.5:
            raise InvalidInputError(f"eps must lie in (0, 1/2), got {self.eps}")
        if self.format not in OUTPUT_FORMATS:
            raise InvalidInputError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got '{self.format}'")
        if self.order not in ("id", "random"):
            raise InvalidInputError(f"order must be 'id' or 'random', got '{self.order}'")
        if self.exact_budget < 1:
            raise InvalidInputError("exact budget must be >= 1")
        if self.K is not None and self.K < 1:
            raise InvalidInputError(f"K must be >= 1, got {self.K}")
        if self.M is not None and self.M < 1:
            raise InvalidInputError(f"M must be >= 1, got {self.M}")

        if self.kind == "t2":
            if self.beta is None or self.p_grid is not None:
                raise InvalidInputError("t2 sweeps need beta (and no p grid)")
            if not self.theta_grid or any(not 0.0 < t < 1.0 for t in self.theta_grid):
                raise InvalidInputError("t2 sweeps need a non-empty theta grid inside (0, 1)")
        else:
            if (self.beta is None) == (self.p_grid is None):
                raise InvalidInputError("give exactly one of beta and a p grid")
            if self.p_grid is not None and (not self.p_grid or any(not 0.0 <= p <= 1.0 for p in self.p_grid)):
                raise InvalidInputError("p grid must be non-empty with every p in [0, 1]")

    def p_values(self, n: int) -> tuple[float, ...]:
        if self.beta is not None:
            return (p_from_beta(n, self.beta),)
        return self.p_grid

    def pattern_graph(self) -> PatternGraph:
        return resolve_pattern(self.pattern)

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["dist"] = str(self.dist)
        for key in ("n_grid", "p_grid", "theta_grid"):
            if data[key] is not None:
                data[key] = list(data[key])
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidInputError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values = dict(data)
        if "dist" in values and not isinstance(values["dist"], WeightDistributionSpec):
            values["dist"] = WeightDistributionSpec.parse(str(values["dist"]))
        for key in ("n_grid", "p_grid", "theta_grid"):
            if values.get(key) is not None:
                values[key] = tuple(values[key])
        try:
            return cls(**values)
        except TypeError as e:
            raise InvalidInputError(f"invalid experiment config: {e}") from e

    @classmethod
    def from_json(cls, path: Path) -> ExperimentConfig:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInputError(f"cannot read config {path}: {e}") from e
        if not isinstance(data, dict):
            raise InvalidInputError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)


@dataclass
class TrialRecord:
    """Measurements of one trial; fields a kind does not measure stay None."""

    experiment: str
    n: int
    seed_path: tuple[int, ...]
    p: Optional[float] = None
    beta: Optional[float] = None
    eps: Optional[float] = None
    mu: Optional[float] = None
    max_degree: Optional[int] = None
    greedy_max: Optional[int] = None
    local_bound: Optional[int] = None
    two_stage_max: Optional[int] = None
    bad_count: Optional[int] = None
    exact_chi_w: Optional[int] = None
    ratio: Optional[float] = None
    max_weight: Optional[int] = None
    growth_exponent: Optional[float] = None
    lower_exponent: Optional[float] = None
    theta: Optional[float] = None
    theta_th: Optional[float] = None
    r: Optional[int] = None
    M: Optional[int] = None
    K: Optional[int] = None
    graph_seed: Optional[int] = None
    fraction: Optional[float] = None
    stderr: Optional[float] = None
    y_count: Optional[int] = None
    z_count: Optional[int] = None
    copies: Optional[int] = None
    deviation_fraction: Optional[float] = None
    e_nei: Optional[bool] = None
    chernoff_bound: Optional[float] = None
    wall_clock: Optional[float] = None


_FIELD_KINDS = {f.name: f.type for f in dataclasses.fields(TrialRecord)}


def _convert(name: str, raw):
    """Parse one emitted value back into the field's type."""
    if raw is None or raw == "":
        return None
    kind = _FIELD_KINDS[name]
    if name == "seed_path":
        if isinstance(raw, list):
            return tuple(int(x) for x in raw)
        return tuple(int(x) for x in str(raw).split("/")) if raw else ()
    if "bool" in kind:
        return raw if isinstance(raw, bool) else str(raw).lower() == "true"
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return raw


@dataclass(frozen=True)
class Cell:
    """One point of the sweep grid."""

    index: int
    n: int
    n_index: int
    p: float
    p_index: int = 0
    theta: Optional[float] = None
    theta_index: int = 0


def cells(cfg: ExperimentConfig) -> list[Cell]:
    """Grid cells in output order: (theta, n) for t2, (n, p) otherwise."""
    out: list[Cell] = []
    if cfg.kind == "t2":
        for t_idx, theta in enumerate(cfg.theta_grid):
            for n_idx, n in enumerate(cfg.n_grid):
                out.append(Cell(len(out), n, n_idx, p_from_beta(n, cfg.beta), 0, theta, t_idx))
        return out
    for n_idx, n in enumerate(cfg.n_grid):
        for p_idx, p in enumerate(cfg.p_values(n)):
            out.append(Cell(len(out), n, n_idx, p, p_idx))
    return out


def _base_seed(cfg: ExperimentConfig, cell: Cell, seed_index: int) -> Seed:
    return Seed(cfg.master_seed, (cell.n_index, cell.p_index, seed_index))


def _graph_and_weights(cfg: ExperimentConfig, cell: Cell, seed_index: int):
    base = _base_seed(cfg, cell, seed_index)
    g = gen_gnp(cell.n, cell.p, base.child(0))
    return base, g, sample_weights(g, cfg.dist, base.child(1))


def _check_t1a(cfg: ExperimentConfig) -> None:
    mu = cfg.dist.mean()
    if math.isinf(mu):
        raise InvalidInputError(f"t1a needs a weight law with finite mean, got {cfg.dist}")
    if cfg.beta is not None and not 0.0 < cfg.beta < 1.0:
        raise InvalidInputError(f"t1a needs beta in (0, 1), got {cfg.beta}")
    for cell in cells(cfg):
        if cell.n * cell.p < 1.0:
            raise InvalidInputError(f"n p = {cell.n * cell.p:g} < 1 at n={cell.n}: outside the linear regime")


def _t1b_exponent(cfg: ExperimentConfig) -> Optional[float]:
    """(2 - beta) / (2s) with s = alpha / 2; None for bounded weights."""
    if cfg.dist.kind != "pareto" or cfg.beta is None:
        return None
    return (2.0 - cfg.beta) / cfg.dist.alpha


def _check_t1b(cfg: ExperimentConfig) -> None:
    if cfg.dist.kind != "pareto":
        return
    s = cfg.dist.alpha / 2.0
    if s <= 1.0:
        raise InvalidInputError(f"t1b needs s = alpha/2 > 1, got alpha={cfg.dist.alpha:g}")
    if cfg.beta is None:
        raise InvalidInputError("t1b with pareto weights needs beta")
    if not 1.0 - 1.0 / (2.0 * s - 1.0) < cfg.beta < 1.0:
        raise InvalidInputError(
            f"t1b needs {1.0 - 1.0 / (2.0 * s - 1.0):g} < beta < 1 for alpha={cfg.dist.alpha:g}, got {cfg.beta}"
        )


def _check_t2(cfg: ExperimentConfig) -> PatternGraph:
    gamma = cfg.pattern_graph()
    if gamma.e0 < 1 or not is_balanced(gamma):
        raise InvalidInputError(f"pattern '{gamma.name}' is not balanced")
    theta_threshold(gamma.v0, gamma.e0, cfg.beta)
    return gamma


def validate(cfg: ExperimentConfig) -> None:
    """Kind-specific preconditions; raises InvalidInputError."""
    if cfg.kind == "t1a":
        _check_t1a(cfg)
    elif cfg.kind == "t1b":
        _check_t1b(cfg)
    elif cfg.kind == "t2":
        _check_t2(cfg)


def _trial_t1a(cfg: ExperimentConfig, cell: Cell, seed_index: int) -> TrialRecord:
    base, g, w = _graph_and_weights(cfg, cell, seed_index)
    mu = cfg.dist.mean()
    order = random_order(g.n, base.child(3)) if cfg.order == "random" else None
    greedy = greedy_colour(g, w, order)
    bound = local_average_bound(g, w)
    if greedy.max_colour > bound:
        raise ContractViolation(f"greedy max {greedy.max_colour} above local bound {bound}")
    _, report = two_stage_colour(g, w, mu, cell.p, cfg.eps)

    exact = None
    if g.n <= EXACT_MAX_N:
        result = exact_chi_w(g, w, cfg.exact_budget)
        if result.proven:
            exact = result.chi_w
        else:
            log.warning("exact search inconclusive at n=%d seed %s", g.n, base)

    _, max_degree = degree_stats(g)
    return TrialRecord(
        experiment="t1a", n=cell.n, p=cell.p, beta=cfg.beta, seed_path=base.path,
        mu=mu, max_degree=max_degree, greedy_max=greedy.max_colour, local_bound=bound,
        two_stage_max=report.max_colour, bad_count=len(report.bad_vertices),
        exact_chi_w=exact, ratio=greedy.max_colour / (2.0 * mu * cell.n * cell.p),
    )


def _trial_t1b(cfg: ExperimentConfig, cell: Cell, seed_index: int) -> TrialRecord:
    base, g, w = _graph_and_weights(cfg, cell, seed_index)
    max_weight = w.max_weight()
    np_ = cell.n * cell.p
    _, max_degree = degree_stats(g)
    return TrialRecord(
        experiment="t1b", n=cell.n, p=cell.p, beta=cfg.beta, seed_path=base.path,
        max_degree=max_degree, max_weight=max_weight,
        ratio=max_weight / np_ if np_ > 0 else None,
        growth_exponent=math.log(max_weight) / math.log(cell.n) if max_weight >= 1 and cell.n > 1 else None,
        lower_exponent=_t1b_exponent(cfg),
    )


def _trial_concentration(cfg: ExperimentConfig, cell: Cell, seed_index: int) -> TrialRecord:
    base = _base_seed(cfg, cell, seed_index)
    g = gen_gnp(cell.n, cell.p, base.child(0))
    degrees, max_degree = degree_stats(g)
    expected = (cell.n - 1) * cell.p
    deviating = sum(1 for d in degrees if abs(d - expected) >= cfg.eps * expected) if expected > 0 else 0
    np_ = cell.n * cell.p
    e_nei = all(np_ * (1.0 - cfg.eps) <= d <= np_ * (1.0 + cfg.eps) for d in degrees)
    return TrialRecord(
        experiment="concentration", n=cell.n, p=cell.p, eps=cfg.eps, seed_path=base.path,
        max_degree=max_degree, deviation_fraction=deviating / cell.n, e_nei=e_nei,
        chernoff_bound=2.0 * math.exp(-(cfg.eps**2 / 4.0) * expected),
    )


@lru_cache(maxsize=128)
def _t2_host(cfg: ExperimentConfig, n_index: int, seed_index: int):
    """Graph, weights and copy table shared by every theta at one (n, seed)."""
    n = cfg.n_grid[n_index]
    cell = Cell(0, n, n_index, p_from_beta(n, cfg.beta))
    _, g, w = _graph_and_weights(cfg, cell, seed_index)
    return g, w, CopyTable(g, w, cfg.pattern_graph())


def _trial_t2(cfg: ExperimentConfig, cell: Cell, seed_index: int) -> TrialRecord:
    gamma = cfg.pattern_graph()
    g, w, table = _t2_host(cfg, cell.n_index, seed_index)
    params = ThresholdParams.resolve(
        cell.n, gamma, cfg.dist, theta=cell.theta, beta=cfg.beta, k=cfg.K, m=cfg.M
    )
    seed = _base_seed(cfg, cell, seed_index).child(2, cell.theta_index)
    sample = sample_goodness(g, w, gamma, params.r, params.M, cfg.colourings, seed, k=params.K, table=table)
    return TrialRecord(
        experiment="t2", n=cell.n, p=cell.p, beta=cfg.beta,
        seed_path=(cell.n_index, seed_index, cell.theta_index),
        theta=cell.theta, theta_th=theta_threshold(gamma.v0, gamma.e0, cfg.beta),
        r=params.r, M=params.M, K=params.K, graph_seed=seed_index,
        fraction=sample.fraction, stderr=sample.stderr,
        y_count=sample.y_total, z_count=sample.z_total, copies=sample.copies,
    )


_TRIALS: dict[str, Callable[[ExperimentConfig, Cell, int], TrialRecord]] = {
    "t1a": _trial_t1a,
    "t1b": _trial_t1b,
    "t2": _trial_t2,
    "concentration": _trial_concentration,
}


def _timed(cfg: ExperimentConfig, cell: Cell, seed_index: int) -> TrialRecord:
    start = time.perf_counter()
    record = _TRIALS[cfg.kind](cfg, cell, seed_index)
    record.wall_clock = time.perf_counter() - start
    return record


def run(
    cfg: ExperimentConfig,
    workers: int = 1,
    on_cell_done: Optional[Callable[[Cell], None]] = None,
) -> Iterator[TrialRecord]:
    """Stream the sweep's records in (cell index, seed index) order.

    The config is validated before this returns, not on the first record.
    """
    validate(cfg)
    grid = cells(cfg)
    items = [(cell, s) for cell in grid for s in range(cfg.trials)]
    remaining = {cell.index: cfg.trials for cell in grid}
    lock = threading.Lock()

    def done(item) -> None:
        cell, _ = item
        with lock:
            remaining[cell.index] -= 1
            finished = remaining[cell.index] == 0
        if finished and on_cell_done:
            on_cell_done(cell)

    log.info("%s sweep: %d cells x %d trials on %d worker(s)", cfg.kind, len(grid), cfg.trials, workers)
    return ordered_map(lambda item: _timed(cfg, *item), items, workers, done)


def _run_kind(kind: str, cfg: ExperimentConfig, workers: int) -> Iterator[TrialRecord]:
    if cfg.kind != kind:
        raise InvalidInputError(f"config is for '{cfg.kind}', not '{kind}'")
    return run(cfg, workers)


def run_t1a(cfg: ExperimentConfig, workers: int = 1) -> Iterator[TrialRecord]:
    return _run_kind("t1a", cfg, workers)


def run_t1b(cfg: ExperimentConfig, workers: int = 1) -> Iterator[TrialRecord]:
    return _run_kind("t1b", cfg, workers)


def run_t2(cfg: ExperimentConfig, workers: int = 1) -> Iterator[TrialRecord]:
    return _run_kind("t2", cfg, workers)


def run_concentration(cfg: ExperimentConfig, workers: int = 1) -> Iterator[TrialRecord]:
    return _run_kind("concentration", cfg, workers)


def replay(cfg: ExperimentConfig, seed_path: Sequence[int]) -> TrialRecord:
    """Re-run the single trial named by a record's seed path."""
    validate(cfg)
    path = tuple(seed_path)
    if cfg.kind == "t2":
        n_idx, seed_index, t_idx = path
        match = [c for c in cells(cfg) if c.n_index == n_idx and c.theta_index == t_idx]
    else:
        n_idx, p_idx, seed_index = path
        match = [c for c in cells(cfg) if c.n_index == n_idx and c.p_index == p_idx]
    if not match or not 0 <= seed_index < cfg.trials:
        raise InvalidInputError(f"seed path {path} does not address a trial of this config")
    return _timed(cfg, match[0], seed_index)


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def record_columns(kind: str, include_timing: bool = False) -> list[str]:
    columns = list(RECORD_COLUMNS[kind])
    if include_timing:
        columns.append("wall_clock")
    return columns


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return "/".join(str(x) for x in value)
    return repr(value) if isinstance(value, float) else str(value)


def _json_value(value):
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _write_records(f: TextIO, records: Iterable[TrialRecord], fmt: str, kind: str, columns: list[str], header: bool) -> int:
    writer = csv.writer(f, lineterminator="\n") if fmt == "csv" else None
    if writer and header:
        writer.writerow(columns)
        f.flush()
    written = 0
    for record in records:
        if record.experiment != kind:
            raise InvalidInputError(f"record of kind '{record.experiment}' in a '{kind}' stream")
        if writer:
            writer.writerow([_csv_value(getattr(record, c)) for c in columns])
        else:
            line = json.dumps({c: _json_value(getattr(record, c)) for c in columns})
            if fmt == "json":
                # one array, one record per line
                line = ("[" if written == 0 else ",") + line
            f.write(line + "\n")
        f.flush()
        written += 1
    if fmt == "json":
        f.write("]\n" if written else "[]\n")
    return written


def emit(
    records: Iterable[TrialRecord],
    fmt: str,
    path: Optional[Path],
    kind: str,
    *,
    include_timing: bool = False,
    append: bool = False,
) -> int:
    """Write records as CSV (header first), JSON Lines or a single JSON array,
    flushing each record.

    `path` None writes to stdout. With `append`, rows are added to an existing
    file and the CSV header is written only if the file is empty; a JSON array
    cannot be appended to. Returns the number of records written.
    """
    if fmt not in OUTPUT_FORMATS:
        raise InvalidInputError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got '{fmt}'")
    if append and fmt == "json":
        raise InvalidInputError("json output cannot be appended to; use jsonl")
    columns = record_columns(kind, include_timing)
    if path is None:
        return _write_records(sys.stdout, records, fmt, kind, columns, header=True)

    path = Path(path)
    try:
        fresh = not append or not path.exists() or path.stat().st_size == 0
        with open(path, "a" if append else "w", encoding="utf-8", newline="") as f:
            return _write_records(f, records, fmt, kind, columns, header=fresh)
    except OSError as e:
        raise InvalidInputError(f"cannot write {path}: {e}") from e


def parse_records(path: Path, fmt: str) -> list[TrialRecord]:
    """Read records emitted by `emit` back into TrialRecord objects."""
    if fmt not in OUTPUT_FORMATS:
        raise InvalidInputError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got '{fmt}'")
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            if fmt == "csv":
                rows = list(csv.DictReader(f))
            elif fmt == "json":
                rows = json.load(f)
            else:
                rows = [json.loads(line) for line in f if line.strip()]
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInputError(f"cannot read {path}: {e}") from e

    records = []
    for row in rows:
        values = {name: _convert(name, raw) for name, raw in row.items()}
        values.setdefault("seed_path", ())
        records.append(TrialRecord(**values))
    return records

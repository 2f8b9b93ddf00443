"""Experiment harness: solver × heuristic × instance × seed matrices to CSV.

``heuristic_calls`` counts distinct states whose value was initialised from
the heuristic (the value function memoises, so each state is charged once).
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .domains import load_problem
from .heuristics import CapabilityError, make_heuristic, optimal_values, parse_heuristic_selector
from .model import ConfigError, ExplicitSsp, ModelError, PartialSsp, apply_fixed_penalty
from .solvers import ALGORITHMS, SolveResult, SolverConfig, solve
from .solvers.common import DEFAULT_EPSILON, DEFAULT_PENALTY

CSV_COLUMNS = (
    "domain",
    "instance",
    "algo",
    "heuristic",
    "seed",
    "epsilon",
    "penalty",
    "solved",
    "wall_time_s",
    "v_s0",
    "q_value_count",
    "q_value_guard_count",
    "heuristic_calls",
    "backup_count",
    "expansions",
    "partial_actions",
    "potential_actions",
)


@dataclass
class RunMetrics:
    domain: str
    instance: str
    algo: str
    heuristic: str
    seed: int
    epsilon: float
    penalty: float
    solved: bool = False
    wall_time_s: float = 0.0
    v_s0: float = float("nan")
    q_value_count: int = 0
    q_value_guard_count: int = 0
    heuristic_calls: int = 0
    backup_count: int = 0
    expansions: int = 0
    partial_actions: int = 0
    potential_actions: int = 0
    status: str = "not-run"
    note: str = ""

    def row(self) -> dict[str, str]:
        data = asdict(self)
        out = {}
        for col in CSV_COLUMNS:
            value = data[col]
            if isinstance(value, bool):
                out[col] = "true" if value else "false"
            elif isinstance(value, float):
                out[col] = repr(value)
            else:
                out[col] = str(value)
        return out


@dataclass(frozen=True)
class BenchSpec:
    problems: Sequence[str]
    algos: Sequence[str]
    heuristics: Sequence[str]
    seeds: int = 1
    epsilon: float = DEFAULT_EPSILON
    penalty: float = DEFAULT_PENALTY
    timeout_s: float | None = None
    out: Path | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        for label in ("problems", "algos", "heuristics"):
            if not getattr(self, label):
                raise ConfigError(f"--{label}: at least one value is required")
        if self.seeds < 1:
            raise ConfigError(f"--seeds must be >= 1, got {self.seeds}")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {self.jobs}")
        for algo in self.algos:
            if algo not in ALGORITHMS:
                raise ConfigError(f"--algos: unknown algorithm {algo!r} (choose from {', '.join(ALGORITHMS)})")
        for h in self.heuristics:
            parse_heuristic_selector(h)
        SolverConfig(self.epsilon, self.penalty, 0, self.timeout_s)

    def cells(self) -> list[tuple[str, str, str, int]]:
        """Deterministic cell order: problem, algorithm, heuristic, seed."""
        return [
            (p, a, h, seed)
            for p in self.problems
            for a in self.algos
            for h in self.heuristics
            for seed in range(self.seeds)
        ]


@dataclass
class PreparedProblem:
    """A transformed instance plus its optional table heuristic and cached V*."""

    selector: str
    ssp: ExplicitSsp
    table: dict[int, float] | None
    penalty: float
    vstar: list[float] | None = field(default=None, repr=False)

    @property
    def domain(self) -> str:
        return self.selector.partition(":")[0]

    def optimal(self) -> list[float]:
        if self.vstar is None:
            self.vstar = optimal_values(self.ssp)
        return self.vstar


def prepare(selector: str, penalty: float = DEFAULT_PENALTY) -> PreparedProblem:
    ssp, table = load_problem(selector)
    return PreparedProblem(selector, apply_fixed_penalty(ssp, penalty), table, penalty)


def _action_counts(result: SolveResult, ssp: ExplicitSsp) -> tuple[int, int]:
    if result.partial is not None:
        partial: PartialSsp = result.partial
        return partial.partial_action_count(), partial.potential_action_count()
    # VI and LRTDP keep no partial SSP; every touched state carries all its actions
    touched = sum(ssp.num_actions(s) for s in result.value_function.values)
    return touched, touched


def run_single(
    problem: str | PreparedProblem,
    algo: str,
    heuristic: str,
    cfg: SolverConfig | None = None,
) -> RunMetrics:
    """Run one cell and collect its metrics.

    Selector and capability errors propagate; timeouts and solver failures
    come back as ``solved=False`` with whatever counters had accumulated.
    """
    cfg = cfg or SolverConfig()
    prepared = problem if isinstance(problem, PreparedProblem) else prepare(problem, cfg.penalty)
    if algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algo!r} (choose from {', '.join(ALGORITHMS)})")
    kind, _ = parse_heuristic_selector(heuristic)
    vstar = prepared.optimal() if kind == "pert" else None
    H = make_heuristic(heuristic, prepared.ssp, cfg.penalty, cfg.seed, prepared.table, vstar)
    result = solve(algo, prepared.ssp, H, cfg)
    partial_actions, potential_actions = _action_counts(result, prepared.ssp)
    c = result.counters
    return RunMetrics(
        domain=prepared.domain,
        instance=prepared.selector,
        algo=algo,
        heuristic=heuristic,
        seed=cfg.seed,
        epsilon=cfg.epsilon,
        penalty=cfg.penalty,
        solved=result.solved,
        wall_time_s=result.wall_time_s,
        v_s0=result.v_s0,
        q_value_count=c.q_values,
        q_value_guard_count=c.q_guard,
        heuristic_calls=c.heuristic_calls,
        backup_count=c.backups,
        expansions=c.expansions,
        partial_actions=partial_actions,
        potential_actions=potential_actions,
        status=result.status,
        note=result.diagnostics,
    )


def _run_cell(args: tuple[str, str, str, int, float, float, float | None]) -> RunMetrics:
    problem, algo, heuristic, seed, epsilon, penalty, timeout = args
    cfg = SolverConfig(epsilon, penalty, seed, timeout)
    try:
        return run_single(_cached_prepare(problem, penalty), algo, heuristic, cfg)
    except (ConfigError, ModelError, CapabilityError) as exc:
        return RunMetrics(problem.partition(":")[0], problem, algo, heuristic, seed, epsilon, penalty,
                          status="error", note=str(exc))


_PREPARED: dict[tuple[str, float], PreparedProblem] = {}


def _cached_prepare(selector: str, penalty: float) -> PreparedProblem:
    # one instance (and one V* oracle run) per worker process and selector
    key = (selector, penalty)
    if key not in _PREPARED:
        _PREPARED[key] = prepare(selector, penalty)
    return _PREPARED[key]


def run_matrix(spec: BenchSpec) -> list[RunMetrics]:
    """One row per (problem, algo, heuristic, seed) in deterministic order.

    Per-cell failures are recorded on the row (``status``/``note``) and never
    abort the matrix. When ``spec.out`` is set the CSV is written there.
    """
    jobs = [(p, a, h, seed, spec.epsilon, spec.penalty, spec.timeout_s) for p, a, h, seed in spec.cells()]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            rows = list(pool.map(_run_cell, jobs))
    else:
        rows = [_run_cell(job) for job in jobs]
    if spec.out is not None:
        write_csv(rows, spec.out)
    return rows


def to_csv(rows: Iterable[RunMetrics]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\r\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.row())
    return buf.getvalue()


def write_csv(rows: Iterable[RunMetrics], path: str | Path) -> None:
    Path(path).write_text(to_csv(rows), encoding="utf-8", newline="")


def read_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


@dataclass
class DensityReport:
    densities: dict[int, float]
    cumulative: list[tuple[float, float]]
    fraction_at_most_half: float

    def format(self, names: Sequence[str] | None = None) -> str:
        lines = [f"states: {len(self.densities)}",
                 f"fraction with density <= 0.5: {self.fraction_at_most_half:.4f}",
                 "density  cumulative-fraction"]
        lines += [f"{d:7.4f}  {f:.4f}" for d, f in self.cumulative]
        return "\n".join(lines)


def density_report(partial: PartialSsp) -> DensityReport:
    """Per-state |Â(s)|/|A(s)| over expanded states, with its empirical CDF."""
    densities = {}
    for s in sorted(partial.states - partial.goals):
        total = partial.base.num_actions(s)
        if total:
            densities[s] = len(partial.partial_actions(s)) / total
    values = sorted(densities.values())
    n = len(values)
    cumulative = []
    for i, d in enumerate(values):
        if i + 1 == n or values[i + 1] != d:
            cumulative.append((d, (i + 1) / n))
    half = sum(1 for d in values if d <= 0.5) / n if n else 0.0
    return DensityReport(densities, cumulative, half)

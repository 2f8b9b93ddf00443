"""VI, iLAO*, CG-iLAO* and LRTDP over a shared model layer."""

from __future__ import annotations

from ..model import ConfigError, ExplicitSsp, Heuristic, Watcher
from .cg_ilao import cg_ilao_solve
from .common import DEFAULT_EPSILON, DEFAULT_PENALTY, SolverConfig, SolveResult, snapshot_policy
from .ilao import ilao_solve
from .lrtdp import lrtdp_solve
from .vi import vi_solve

ALGORITHMS = ("vi", "ilao", "cg-ilao", "lrtdp")

__all__ = [
    "ALGORITHMS",
    "DEFAULT_EPSILON",
    "DEFAULT_PENALTY",
    "SolveResult",
    "SolverConfig",
    "cg_ilao_solve",
    "ilao_solve",
    "lrtdp_solve",
    "snapshot_policy",
    "solve",
    "vi_solve",
]


def solve(
    algo: str,
    ssp: ExplicitSsp,
    H: Heuristic,
    config: SolverConfig | None = None,
    watcher: Watcher | None = None,
) -> SolveResult:
    """Dispatch on a CLI algorithm selector. VI uses H as its starting values."""
    config = config or SolverConfig()
    if algo == "vi":
        return vi_solve(ssp, config.epsilon, H, config, watcher)
    if algo == "ilao":
        return ilao_solve(ssp, H, config.epsilon, config, watcher)
    if algo == "cg-ilao":
        return cg_ilao_solve(ssp, H, config.epsilon, config, watcher)
    if algo == "lrtdp":
        return lrtdp_solve(ssp, H, config.epsilon, config.seed, config, watcher)
    raise ConfigError(f"unknown algorithm {algo!r} (choose from {', '.join(ALGORITHMS)})")

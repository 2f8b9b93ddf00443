from __future__ import annotations

from ..model import Counters, ExplicitSsp, Heuristic, ValueFunction, Watcher, full_backup
from .common import Deadline, SolverConfig, SolverFailure, SolverTimeout, SolveResult, finish


def _zero(_: int) -> float:
    return 0.0


def vi_solve(
    ssp: ExplicitSsp,
    eps: float | None = None,
    V0: Heuristic | None = None,
    config: SolverConfig | None = None,
    watcher: Watcher | None = None,
) -> SolveResult:
    """Gauss-Seidel value iteration over every state until the max residual is ≤ eps.

    Sweeps visit states in ascending id and update in place.
    """
    config = config or SolverConfig()
    eps = config.epsilon if eps is None else eps
    deadline = Deadline(config.max_wall_time)
    V = ValueFunction(ssp, V0 or _zero, Counters(), watcher)
    active = [s for s in range(ssp.num_states) if s not in ssp.goals]
    sweeps = 0
    try:
        while True:
            deadline.check()
            if sweeps >= config.safety_iteration_cap:
                raise SolverFailure(f"VI exceeded {config.safety_iteration_cap} sweeps")
            sweeps += 1
            res = 0.0
            for s in active:
                r = full_backup(ssp, V, s)
                if r.residual > res:
                    res = r.residual
                V[s] = r.q_min
            if res <= eps:
                break
    except SolverTimeout:
        return finish("vi", ssp, V, None, deadline, eps, sweeps, status="timeout")
    except SolverFailure as exc:
        return finish("vi", ssp, V, None, deadline, eps, sweeps, status="failed", diagnostics=str(exc))
    return finish("vi", ssp, V, None, deadline, eps, sweeps)

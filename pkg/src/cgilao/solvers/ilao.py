from __future__ import annotations

from ..model import (
    Counters,
    ExplicitSsp,
    Heuristic,
    PartialSsp,
    ValueFunction,
    Watcher,
    add_actions,
    bellman_backup,
    greedy_action,
    greedy_envelope_postorder,
)
from .common import Deadline, Observer, SolverConfig, SolverFailure, SolverTimeout, SolveResult, finish, snapshot_policy


def ilao_solve(
    ssp: ExplicitSsp,
    H: Heuristic,
    eps: float | None = None,
    config: SolverConfig | None = None,
    watcher: Watcher | None = None,
    observer: Observer | None = None,
) -> SolveResult:
    """Improved LAO*: grow the partial SSP by fully expanding greedy fringe states.

    Each iteration traces the greedy envelope in post-order, expands every
    artificial goal on it with all applicable actions, then sweeps Bellman
    backups over the envelope until the residual drops to eps, the greedy
    policy changes, or the expanded envelope still ends in artificial goals.
    """
    config = config or SolverConfig()
    eps = config.epsilon if eps is None else eps
    deadline = Deadline(config.max_wall_time)
    V = ValueFunction(ssp, H, Counters(), watcher)
    partial = PartialSsp(ssp)
    policy: dict[int, int] = {}
    counters = V.counters
    iterations = 0
    if ssp.initial in ssp.goals:
        return finish("ilao", ssp, V, partial, deadline, eps, 0)
    V[ssp.initial]  # s0 is initialised by H before the first expansion
    try:
        while True:
            deadline.check()
            if iterations >= config.safety_iteration_cap:
                raise SolverFailure(f"iLAO* exceeded {config.safety_iteration_cap} iterations")
            iterations += 1
            envelope = greedy_envelope_postorder(partial, V, policy)
            fringe = [s for s in envelope if partial.is_artificial_goal(s)]
            for s in fringe:
                partial.expand(s)
                add_actions(partial, s, range(ssp.num_actions(s)))
                policy[s] = greedy_action(partial, V, s)
                counters.expansions += 1
            open_fringe = [s for s in greedy_envelope_postorder(partial, V, policy) if partial.is_artificial_goal(s)]
            old = snapshot_policy(partial, V, policy)
            sweeps = 0
            while True:
                deadline.check()
                sweeps += 1
                if sweeps > config.safety_iteration_cap:
                    raise SolverFailure(f"iLAO* backups exceeded {config.safety_iteration_cap} sweeps")
                res = 0.0
                for s in envelope:
                    if s in partial.goals:
                        continue
                    r = bellman_backup(partial, V, s)
                    if r.residual > res:
                        res = r.residual
                    V[s] = r.q_min
                    policy[s] = r.greedy
                current = snapshot_policy(partial, V, policy)
                if res <= eps or current != old or open_fringe:
                    break
            if observer is not None:
                observer("iteration", {"iteration": iterations, "envelope": envelope, "expanded": fringe, "open_fringe": open_fringe,
                                       "residual": res, "values": dict(V.values)})
            if not open_fringe and current == old and res <= eps:
                break
    except SolverTimeout:
        return finish("ilao", ssp, V, partial, deadline, eps, iterations, status="timeout")
    except SolverFailure as exc:
        return finish("ilao", ssp, V, partial, deadline, eps, iterations, status="failed", diagnostics=str(exc))
    return finish("ilao", ssp, V, partial, deadline, eps, iterations)

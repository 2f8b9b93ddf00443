from __future__ import annotations

from ..model import (
    Counters,
    ExplicitSsp,
    Heuristic,
    PartialSsp,
    ValueFunction,
    ViolationSet,
    Watcher,
    add_actions,
    bellman_backup,
    external_successor_pairs,
    full_backup,
    greedy_envelope_postorder,
    q_value,
)
from .common import Deadline, Observer, SolverConfig, SolverFailure, SolverTimeout, SolveResult, finish, snapshot_policy


def _interior_preds(ssp: ExplicitSsp, partial: PartialSsp, s: int):
    """Predecessor pairs whose source is a regular (non-Ĝ) state of the partial SSP."""
    states, goals = partial.states, partial.goals
    return [(sp, a) for sp, a in ssp.predecessor_index[s] if sp in states and sp not in goals]


def cg_ilao_solve(
    ssp: ExplicitSsp,
    H: Heuristic,
    eps: float | None = None,
    config: SolverConfig | None = None,
    watcher: Watcher | None = None,
    observer: Observer | None = None,
) -> SolveResult:
    """iLAO* with constraint generation over actions.

    Fringe states receive only their greedy actions. Every change of V by
    more than eps records the constraints it may have broken: an increase
    flags the state's missing actions, a decrease flags its predecessors.
    After the backup sweeps, flagged pairs that are violated by more than
    eps are enforced (adding the action if needed), which may flag further
    predecessors for the next iteration.
    """
    config = config or SolverConfig()
    eps = config.epsilon if eps is None else eps
    deadline = Deadline(config.max_wall_time)
    V = ValueFunction(ssp, H, Counters(), watcher)
    partial = PartialSsp(ssp)
    policy: dict[int, int] = {}
    gamma = ViolationSet()
    counters = V.counters
    iterations = 0

    def emit(event: str, **payload) -> None:
        if observer is not None:
            observer(event, {"iteration": iterations, "values": dict(V.values), "gamma": list(gamma), **payload})

    if ssp.initial in ssp.goals:
        return finish("cg-ilao", ssp, V, partial, deadline, eps, 0, scan_constraints=True)
    V[ssp.initial]  # s0 is initialised by H before the first expansion
    try:
        while True:
            deadline.check()
            if iterations >= config.safety_iteration_cap:
                raise SolverFailure(f"CG-iLAO* exceeded {config.safety_iteration_cap} iterations")
            iterations += 1

            envelope = greedy_envelope_postorder(partial, V, policy)
            fringe = [s for s in envelope if partial.is_artificial_goal(s)]
            for s in fringe:
                partial.expand(s)
                r = full_backup(ssp, V, s)
                add_actions(partial, s, r.argmin)
                policy[s] = r.greedy
                counters.expansions += 1
            open_fringe = [s for s in greedy_envelope_postorder(partial, V, policy) if partial.is_artificial_goal(s)]
            emit("expanded", envelope=envelope, open_fringe=open_fringe,
                 expanded={s: list(partial.partial_actions(s)) for s in fringe})

            old = snapshot_policy(partial, V, policy)
            sweeps = 0
            while True:
                deadline.check()
                sweeps += 1
                if sweeps > config.safety_iteration_cap:
                    raise SolverFailure(f"CG-iLAO* backups exceeded {config.safety_iteration_cap} sweeps")
                res = 0.0
                for s in envelope:
                    if s in partial.goals:
                        continue
                    r = bellman_backup(partial, V, s)
                    v = V[s]
                    if r.q_min - v > eps:
                        gamma.update(sorted(external_successor_pairs(ssp, partial, s)))
                    elif v - r.q_min > eps:
                        gamma.update(_interior_preds(ssp, partial, s))
                    if r.residual > res:
                        res = r.residual
                    V[s] = r.q_min
                    policy[s] = r.greedy
                current = snapshot_policy(partial, V, policy)
                if res <= eps or current != old or open_fringe:
                    break
            emit("backups", residual=res)

            fresh = ViolationSet()
            for s, a in gamma:
                q = q_value(ssp, V, s, a)
                counters.q_guard += 1
                v = V[s]
                if v > q + eps:
                    if a not in partial.partial_actions(s):
                        add_actions(partial, s, [a])
                    res = max(v - q, res)
                    V[s] = q
                    policy[s] = a
                    fresh.update(_interior_preds(ssp, partial, s))
            gamma = fresh
            current = snapshot_policy(partial, V, policy)
            emit("fixed", residual=res)

            if not open_fringe and current == old and res <= eps:
                break
    except SolverTimeout:
        return finish("cg-ilao", ssp, V, partial, deadline, eps, iterations, status="timeout")
    except SolverFailure as exc:
        return finish("cg-ilao", ssp, V, partial, deadline, eps, iterations, status="failed", diagnostics=str(exc))
    return finish("cg-ilao", ssp, V, partial, deadline, eps, iterations, scan_constraints=True)

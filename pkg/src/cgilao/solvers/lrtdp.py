from __future__ import annotations

import random

from ..model import Counters, ExplicitSsp, Heuristic, ValueFunction, Watcher, full_backup
from .common import Deadline, SolverConfig, SolverFailure, SolverTimeout, SolveResult, finish


def lrtdp_solve(
    ssp: ExplicitSsp,
    H: Heuristic,
    eps: float | None = None,
    seed: int | None = None,
    config: SolverConfig | None = None,
    watcher: Watcher | None = None,
) -> SolveResult:
    """Labeled RTDP (Bonet & Geffner, 2003).

    Greedy trials from s0 sample outcomes by probability and back up every
    visited state; on the way back each state is tested with CheckSolved,
    which labels the greedy sub-envelope once all its residuals are ≤ eps.
    """
    config = config or SolverConfig()
    eps = config.epsilon if eps is None else eps
    seed = config.seed if seed is None else seed
    deadline = Deadline(config.max_wall_time)
    V = ValueFunction(ssp, H, Counters(), watcher)
    rng = random.Random(seed)
    solved: set[int] = set(ssp.goals)
    depth_cap = 10 * ssp.num_states
    s0 = ssp.initial

    def sample(s: int, a: int) -> int:
        outcomes = ssp.actions[s][a].outcomes
        u = rng.random()
        acc = 0.0
        for o in outcomes:
            acc += o.probability
            if u < acc:
                return o.target
        return outcomes[-1].target

    def check_solved(s: int) -> bool:
        ok = True
        open_: list[int] = [] if s in solved else [s]
        closed: list[int] = []
        seen = set(open_)
        while open_:
            s = open_.pop()
            closed.append(s)
            r = full_backup(ssp, V, s)
            if r.residual > eps:
                ok = False
                continue
            for t in ssp.actions[s][r.greedy].targets:
                if t not in solved and t not in seen:
                    seen.add(t)
                    open_.append(t)
        if ok:
            solved.update(closed)
        else:
            while closed:
                s = closed.pop()
                V[s] = full_backup(ssp, V, s).q_min
        return ok

    trials = 0
    try:
        while s0 not in solved:
            deadline.check()
            if trials >= config.safety_iteration_cap:
                raise SolverFailure(f"LRTDP exceeded {config.safety_iteration_cap} trials")
            trials += 1
            visited: list[int] = []
            s = s0
            while s not in solved:
                visited.append(s)
                if len(visited) > depth_cap:
                    raise SolverFailure(f"LRTDP trial exceeded depth cap {depth_cap}")
                r = full_backup(ssp, V, s)
                V[s] = r.q_min
                s = sample(s, r.greedy)
            while visited:
                if not check_solved(visited.pop()):
                    break
    except SolverTimeout:
        return finish("lrtdp", ssp, V, None, deadline, eps, trials, status="timeout")
    except SolverFailure as exc:
        return finish("lrtdp", ssp, V, None, deadline, eps, trials, status="failed", diagnostics=str(exc))
    return finish("lrtdp", ssp, V, None, deadline, eps, trials)

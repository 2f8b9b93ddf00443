"""Admissible heuristics with call counting.

Every heuristic is a callable ``H(s) -> float``. Calling it counts; ``peek``
reads the same value without counting.
"""

from __future__ import annotations

import heapq
import math
from typing import Mapping, Sequence

import numpy as np

from .model import ConfigError, ExplicitSsp

ORACLE_EPSILON = 1e-6
ORACLE_STATE_LIMIT = 200_000


class CapabilityError(RuntimeError):
    """Raised when an oracle-backed heuristic is requested on an oversized instance."""


class TableHeuristic:
    """A heuristic backed by a precomputed per-state table."""

    def __init__(self, kind: str, table: Sequence[float], penalty: float | None = None) -> None:
        values = [float(v) for v in table]
        if penalty is not None:
            values = [min(v, penalty) for v in values]
        self.kind = kind
        self.table = values
        self.call_count = 0

    def __call__(self, s: int) -> float:
        self.call_count += 1
        return self.table[s]

    def peek(self, s: int) -> float:
        return self.table[s]

    def __repr__(self) -> str:
        return f"<{self.kind} heuristic over {len(self.table)} states>"


def h_zero(ssp: ExplicitSsp) -> TableHeuristic:
    return TableHeuristic("zero", [0.0] * ssp.num_states)


def h_table(ssp: ExplicitSsp, values: Mapping[int, float], penalty: float | None = None) -> TableHeuristic:
    """Wrap an instance-supplied table (states absent from it read as 0)."""
    return TableHeuristic("table", [values.get(s, 0.0) for s in range(ssp.num_states)], penalty)


def h_det(ssp: ExplicitSsp, penalty: float | None = None) -> TableHeuristic:
    """Shortest path to a goal in the optimistic all-outcomes determinization.

    Each action may jump to any one of its successors at its full cost.
    Computed by a backward uniform-cost sweep from the goals; states with no
    path read as ``penalty`` (or +inf without one).
    """
    n = ssp.num_states
    dist = [math.inf] * n
    heap = []
    for g in ssp.goals:
        dist[g] = 0.0
        heap.append((0.0, g))
    heapq.heapify(heap)
    done = [False] * n
    while heap:
        d, t = heapq.heappop(heap)
        if done[t]:
            continue
        done[t] = True
        for s, a in ssp.predecessor_index[t]:
            cand = d + ssp.actions[s][a].cost
            if cand < dist[s]:
                dist[s] = cand
                heapq.heappush(heap, (cand, s))
    if penalty is not None:
        dist = [penalty if math.isinf(v) else v for v in dist]
    return TableHeuristic("det", dist, penalty)


def optimal_values(ssp: ExplicitSsp, eps: float = ORACLE_EPSILON) -> list[float]:
    """V* on every state by VI started from h_det (stays a lower bound)."""
    from .solvers.vi import vi_solve

    if ssp.num_states > ORACLE_STATE_LIMIT:
        raise CapabilityError(
            f"optimal-value oracle limited to {ORACLE_STATE_LIMIT} states, instance has {ssp.num_states}"
        )
    result = vi_solve(ssp, eps, h_det(ssp))
    return result.value_function.as_list()


def perturbation_factors(num_states: int, w: float, seed: int) -> list[float]:
    """One factor in (w, 1] per state, from a stream keyed by (seed, state)."""
    factors = []
    for s in range(num_states):
        u = np.random.default_rng([seed, s]).random()
        factors.append(1.0 - (1.0 - w) * u)
    return factors


def h_pert(
    ssp: ExplicitSsp,
    w: float,
    seed: int,
    vstar: Sequence[float] | None = None,
    penalty: float | None = None,
) -> TableHeuristic:
    """V*(s)·r with r drawn once per state uniformly from (w, 1]."""
    if not 0.0 <= w < 1.0:
        raise ConfigError(f"perturbation weight must be in [0, 1), got {w!r}")
    if vstar is None:
        vstar = optimal_values(ssp)
    factors = perturbation_factors(ssp.num_states, w, seed)
    h = TableHeuristic(f"pert:{w:g}", [v * r for v, r in zip(vstar, factors)], penalty)
    h.w = w  # type: ignore[attr-defined]
    return h


def parse_heuristic_selector(selector: str) -> tuple[str, float | None]:
    """``zero`` | ``det`` | ``table`` | ``pert:<w>`` -> (kind, w)."""
    kind, _, arg = selector.partition(":")
    if kind in ("zero", "det", "table") and not arg:
        return kind, None
    if kind == "pert":
        try:
            w = float(arg)
        except ValueError:
            raise ConfigError(f"heuristic {selector!r}: weight must be a decimal number") from None
        if not 0.0 <= w < 1.0:
            raise ConfigError(f"heuristic {selector!r}: weight must be in [0, 1)")
        return kind, w
    raise ConfigError(f"unknown heuristic {selector!r}")


def make_heuristic(
    selector: str,
    ssp: ExplicitSsp,
    penalty: float | None,
    seed: int = 0,
    table: Mapping[int, float] | None = None,
    vstar: Sequence[float] | None = None,
) -> TableHeuristic:
    kind, w = parse_heuristic_selector(selector)
    if kind == "zero":
        return h_zero(ssp)
    if kind == "det":
        return h_det(ssp, penalty)
    if kind == "table":
        if table is None:
            raise ConfigError("heuristic 'table' needs a problem that ships its own heuristic (e.g. fig2)")
        return h_table(ssp, table, penalty)
    assert w is not None
    return h_pert(ssp, w, seed, vstar, penalty)

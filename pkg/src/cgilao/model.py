"""Grounded SSP model, partial SSPs, value functions and Bellman machinery.

States are dense integer ids. Actions are addressed by their ordinal inside
``ssp.actions[s]``; ordinals double as the tie-break order for greedy
policies (lowest ordinal wins).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

PROB_TOLERANCE = 1e-9
GIVE_UP = "give-up"


class ModelError(Exception):
    """Raised on malformed SSPs or invalid state/action references."""


class ConfigError(ValueError):
    """Raised on invalid user-supplied parameters."""


@dataclass(frozen=True)
class Outcome:
    target: int
    probability: float


@dataclass(frozen=True)
class ActionDef:
    name: str
    cost: float
    outcomes: tuple[Outcome, ...]

    @property
    def targets(self) -> tuple[int, ...]:
        return tuple(o.target for o in self.outcomes)


@dataclass(frozen=True, eq=False)
class ExplicitSsp:
    """Immutable grounded SSP ``<S, s0, G, A, P, C>``.

    Construction only checks that state references are in range; the
    remaining invariants are checked by :func:`validate_model` so that a
    malformed instance can still be inspected and reported on.
    """

    state_names: tuple[str, ...]
    initial: int
    goals: frozenset[int]
    actions: tuple[tuple[ActionDef, ...], ...]
    predecessor_index: tuple[tuple[tuple[int, int], ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.state_names)
        if len(self.actions) != n:
            raise ModelError(f"{len(self.actions)} action lists for {n} states")
        if not 0 <= self.initial < n:
            raise ModelError(f"initial state {self.initial} out of range")
        for g in self.goals:
            if not 0 <= g < n:
                raise ModelError(f"goal {g} out of range")
        preds: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for s, acts in enumerate(self.actions):
            for a, act in enumerate(acts):
                for o in act.outcomes:
                    if not 0 <= o.target < n:
                        raise ModelError(f"state {s} action {act.name!r}: target {o.target} out of range")
                    preds[o.target].append((s, a))
        # dedupe in case an action lists a target twice (validate_model flags that)
        index = tuple(tuple(dict.fromkeys(p)) for p in preds)
        object.__setattr__(self, "predecessor_index", index)

    @property
    def num_states(self) -> int:
        return len(self.state_names)

    def is_goal(self, s: int) -> bool:
        return s in self.goals

    def num_actions(self, s: int) -> int:
        return len(self.actions[s])

    def action(self, s: int, a: int) -> ActionDef:
        acts = self.actions[s]
        if not 0 <= a < len(acts):
            raise ModelError(f"state {self.state_names[s]!r} has no action ordinal {a}")
        return acts[a]

    def total_actions(self) -> int:
        return sum(len(a) for a in self.actions)


@dataclass
class Counters:
    """Per-run work counters shared by every layer touching the value function."""

    q_values: int = 0
    q_guard: int = 0
    heuristic_calls: int = 0
    backups: int = 0
    expansions: int = 0


Heuristic = Callable[[int], float]
Watcher = Callable[[int, float, float], None]


class ValueFunction:
    """Cost-to-go estimates, materialised from the heuristic on first read.

    Goal states read as 0 and never consult the heuristic. ``watcher`` (if
    set) sees every assignment as ``(state, old, new)``.
    """

    def __init__(
        self,
        ssp: ExplicitSsp,
        heuristic: Heuristic,
        counters: Counters | None = None,
        watcher: Watcher | None = None,
    ) -> None:
        self.ssp = ssp
        self.heuristic = heuristic
        self.counters = counters if counters is not None else Counters()
        self.watcher = watcher
        self.values: dict[int, float] = {}

    def __getitem__(self, s: int) -> float:
        v = self.values.get(s)
        if v is None:
            v = self._materialise(s)
        return v

    def _materialise(self, s: int) -> float:
        if s in self.ssp.goals:
            v = 0.0
        else:
            v = float(self.heuristic(s))
            self.counters.heuristic_calls += 1
        self.values[s] = v
        return v

    def __setitem__(self, s: int, value: float) -> None:
        if self.watcher is not None:
            self.watcher(s, self[s], value)
        self.values[s] = value

    def __contains__(self, s: int) -> bool:
        return s in self.values

    def peek(self, s: int) -> float:
        """Read without materialising or counting (used by certificates)."""
        v = self.values.get(s)
        if v is not None:
            return v
        if s in self.ssp.goals:
            return 0.0
        peek = getattr(self.heuristic, "peek", None)
        return float(peek(s) if peek is not None else self.heuristic(s))

    def as_list(self) -> list[float]:
        return [self.peek(s) for s in range(self.ssp.num_states)]


class PartialSsp:
    """Partial SSP ``<Ŝ, s0, Ĝ, Â, P, C, H>`` over a base SSP.

    ``goals`` holds Ĝ: artificial goals (frontier states priced by H) plus
    every real goal that has entered Ŝ.
    """

    def __init__(self, base: ExplicitSsp) -> None:
        self.base = base
        s0 = base.initial
        self.states: set[int] = {s0}
        self.goals: set[int] = {s0}
        self.actions: dict[int, list[int]] = {}

    def is_artificial_goal(self, s: int) -> bool:
        return s in self.goals and s not in self.base.goals

    def partial_actions(self, s: int) -> list[int]:
        return self.actions.get(s, [])

    def expand(self, s: int) -> None:
        """Turn an artificial goal into a regular state (actions added separately)."""
        self.goals.discard(s)

    def partial_action_count(self) -> int:
        return sum(len(self.actions.get(s, ())) for s in self.states)

    def potential_action_count(self) -> int:
        return sum(self.base.num_actions(s) for s in self.states)


@dataclass(frozen=True)
class BackupResult:
    q_min: float
    residual: float
    argmin: tuple[int, ...]

    @property
    def greedy(self) -> int:
        return self.argmin[0]


def q_value(ssp: ExplicitSsp, V: ValueFunction, s: int, a: int) -> float:
    """C(s,a) + Σ P(s'|s,a)·V(s'); counts one Q-value on ``V.counters``."""
    act = ssp.action(s, a)
    V.counters.q_values += 1
    total = act.cost
    values = V.values
    for o in act.outcomes:
        v = values.get(o.target)
        if v is None:
            v = V._materialise(o.target)
        total += o.probability * v
    return total


def backup_over(ssp: ExplicitSsp, V: ValueFunction, s: int, ordinals: Iterable[int]) -> BackupResult:
    q_min = math.inf
    argmin: list[int] = []
    for a in ordinals:
        q = q_value(ssp, V, s, a)
        if q < q_min:
            q_min = q
            argmin = [a]
        elif q == q_min:
            argmin.append(a)
    if not argmin:
        raise ModelError(f"backup of state {ssp.state_names[s]!r} with no actions")
    V.counters.backups += 1
    return BackupResult(q_min, abs(V[s] - q_min), tuple(argmin))


def bellman_backup(partial: PartialSsp, V: ValueFunction, s: int) -> BackupResult:
    """min over Â(s) of Q(s,a). Does not assign V(s)."""
    return backup_over(partial.base, V, s, partial.partial_actions(s))


def full_backup(ssp: ExplicitSsp, V: ValueFunction, s: int) -> BackupResult:
    """min over A(s) of Q(s,a). Does not assign V(s)."""
    return backup_over(ssp, V, s, range(ssp.num_actions(s)))


def greedy_action(partial: PartialSsp, V: ValueFunction, s: int) -> int:
    return bellman_backup(partial, V, s).greedy


def greedy_envelope_postorder(
    partial: PartialSsp,
    V: ValueFunction,
    policy: Mapping[int, int] | None = None,
    stop_uncached: bool = False,
) -> list[int]:
    """Post-order DFS of the greedy policy restricted to Â, from s0.

    Artificial goals appear as leaves; real goals are left out. ``policy``
    supplies cached greedy actions; states missing from it get a fresh
    greedy action (which costs Q-values) unless ``stop_uncached`` makes
    them leaves.
    """
    ssp = partial.base
    s0 = ssp.initial
    if s0 in ssp.goals:
        return []
    order: list[int] = []
    visited = {s0}
    stack: list[tuple[int, Iterable[int]]] = [(s0, _children(partial, V, s0, policy, stop_uncached))]
    while stack:
        s, children = stack[-1]
        for t in children:
            if t not in visited:
                visited.add(t)
                stack.append((t, _children(partial, V, t, policy, stop_uncached)))
                break
        else:
            stack.pop()
            order.append(s)
    return [s for s in order if s not in ssp.goals]


def _children(partial: PartialSsp, V: ValueFunction, s: int, policy: Mapping[int, int] | None, stop_uncached: bool):
    if s in partial.goals:
        return iter(())
    a = policy.get(s) if policy is not None else None
    if a is None:
        if stop_uncached:
            return iter(())
        a = greedy_action(partial, V, s)
    return iter(partial.base.actions[s][a].targets)


def add_actions(partial: PartialSsp, s: int, ordinals: Iterable[int]) -> list[int]:
    """Â(s) ← Â(s) ∪ ordinals; unseen successors join Ŝ and Ĝ.

    Returns the states that were new to Ŝ.
    """
    ssp = partial.base
    current = partial.actions.setdefault(s, [])
    fresh: list[int] = []
    for a in ordinals:
        act = ssp.action(s, a)
        i = bisect.bisect_left(current, a)
        if i < len(current) and current[i] == a:
            continue
        current.insert(i, a)
        for t in act.targets:
            if t not in partial.states:
                partial.states.add(t)
                partial.goals.add(t)
                fresh.append(t)
    return fresh


def predecessors(ssp: ExplicitSsp, s: int) -> frozenset[tuple[int, int]]:
    return frozenset(ssp.predecessor_index[s])


def external_successor_pairs(ssp: ExplicitSsp, partial: PartialSsp, s: int) -> set[tuple[int, int]]:
    have = set(partial.partial_actions(s))
    return {(s, a) for a in range(ssp.num_actions(s)) if a not in have}


class ViolationSet:
    """Insertion-ordered, duplicate-free set of (state, action-ordinal) pairs."""

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()) -> None:
        self._pairs: dict[tuple[int, int], None] = dict.fromkeys(pairs)

    def add(self, pair: tuple[int, int]) -> None:
        self._pairs.setdefault(pair, None)

    def update(self, pairs: Iterable[tuple[int, int]]) -> None:
        for p in pairs:
            self._pairs.setdefault(p, None)

    def __iter__(self):
        return iter(list(self._pairs))

    def __len__(self) -> int:
        return len(self._pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self._pairs

    def __bool__(self) -> bool:
        return bool(self._pairs)

    def as_set(self) -> set[tuple[int, int]]:
        return set(self._pairs)

    def __repr__(self) -> str:
        return f"ViolationSet({list(self._pairs)!r})"


def apply_fixed_penalty(ssp: ExplicitSsp, penalty: float) -> ExplicitSsp:
    """Add a cost-``penalty`` give-up action to every non-goal state.

    The give-up action is the last ordinal and moves deterministically to the
    lowest-id goal, so every state can reach a goal afterwards.
    """
    if not penalty > 0 or not math.isfinite(penalty):
        raise ConfigError(f"penalty must be a positive finite number, got {penalty!r}")
    if not ssp.goals:
        raise ModelError("cannot apply fixed penalty: SSP has no goals")
    sink = min(ssp.goals)
    give_up = ActionDef(GIVE_UP, float(penalty), (Outcome(sink, 1.0),))
    actions = tuple(
        acts if s in ssp.goals else acts + (give_up,)
        for s, acts in enumerate(ssp.actions)
    )
    return ExplicitSsp(ssp.state_names, ssp.initial, ssp.goals, actions)


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(self.problems)


def validate_model(ssp: ExplicitSsp, require_actions: bool = True) -> ValidationReport:
    """Check every ExplicitSsp invariant and report each violation by location.

    ``require_actions=False`` skips the non-goal-has-an-action check, which
    only holds after the fixed-penalty transform.
    """
    report = ValidationReport()
    names = ssp.state_names
    if not ssp.goals:
        report.problems.append("goal set is empty")
    if len(set(names)) != len(names):
        report.problems.append("duplicate state names")
    outcome_entries = 0
    for s, acts in enumerate(ssp.actions):
        where = f"state {names[s]!r}"
        if s in ssp.goals and acts:
            report.problems.append(f"{where}: goal state has {len(acts)} actions")
        if require_actions and s not in ssp.goals and not acts:
            report.problems.append(f"{where}: non-goal state has no actions")
        for a, act in enumerate(acts):
            loc = f"{where} action {a} ({act.name!r})"
            if not (act.cost > 0 and math.isfinite(act.cost)):
                report.problems.append(f"{loc}: cost {act.cost!r} is not strictly positive")
            if not act.outcomes:
                report.problems.append(f"{loc}: no outcomes")
                continue
            total = 0.0
            for o in act.outcomes:
                if not 0 < o.probability <= 1:
                    report.problems.append(f"{loc}: probability {o.probability!r} outside (0, 1]")
                total += o.probability
            if abs(total - 1.0) > PROB_TOLERANCE:
                report.problems.append(f"{loc}: probabilities sum to {total!r}")
            targets = act.targets
            if len(set(targets)) != len(targets):
                report.problems.append(f"{loc}: duplicate outcome targets")
            outcome_entries += len(set(targets))
    # predecessor index must be exactly the inverse outcome relation
    pred_entries = 0
    for s, preds in enumerate(ssp.predecessor_index):
        pred_entries += len(preds)
        for sp, a in preds:
            if s not in ssp.actions[sp][a].targets:
                report.problems.append(f"predecessor index: ({names[sp]!r}, {a}) listed for {names[s]!r}")
    if pred_entries != outcome_entries:
        report.problems.append(f"predecessor index has {pred_entries} entries for {outcome_entries} outcomes")
    return report


def ssp_from_lists(
    names: Sequence[str],
    initial: int,
    goals: Iterable[int],
    actions: Sequence[Sequence[tuple[str, float, Sequence[tuple[int, float]]]]],
) -> ExplicitSsp:
    """Build an ExplicitSsp from plain nested tuples ``(name, cost, [(target, p), ...])``."""
    acts = tuple(
        tuple(ActionDef(n, float(c), tuple(Outcome(t, float(p)) for t, p in outs)) for n, c, outs in per_state)
        for per_state in actions
    )
    return ExplicitSsp(tuple(names), initial, frozenset(goals), acts)

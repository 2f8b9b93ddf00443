"""Triangle Tire World with head-start, TW(n, d).

Locations ``(i, j)`` sit on rows ``i = 1..2n+1``; row ``i`` holds ``2n+2-i``
locations. Corners: A = (1, 1), B = (2n+1, 1), C = (1, 2n+1). The agent
starts on edge AB at distance ``d`` from B and must reach C.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..model import ActionDef, ConfigError, ExplicitSsp, Outcome

Location = tuple[int, int]

FLAT_PROBABILITY = 0.5


@dataclass(frozen=True)
class TwConfig:
    n: int
    d: int
    consumable_spares: bool = True

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"TW size n must be >= 1, got {self.n}")
        if not 1 <= self.d <= 2 * self.n:
            raise ConfigError(f"TW head-start d must be in [1, {2 * self.n}], got {self.d}")


@dataclass(frozen=True)
class TwState:
    location: Location
    tyre_ok: bool
    has_spare: bool
    consumed: frozenset[Location] = frozenset()

    def name(self) -> str:
        i, j = self.location
        parts = [f"l-{i}-{j}", "ok" if self.tyre_ok else "flat", "spare" if self.has_spare else "nospare"]
        if self.consumed:
            parts.append("used:" + ",".join(f"{a}-{b}" for a, b in sorted(self.consumed)))
        return " ".join(parts)


def row_length(n: int, i: int) -> int:
    return 2 * n + 2 - i


def locations(n: int) -> list[Location]:
    return [(i, j) for i in range(1, 2 * n + 2) for j in range(1, row_length(n, i) + 1)]


def _exists(n: int, loc: Location) -> bool:
    i, j = loc
    return 1 <= i <= 2 * n + 1 and 1 <= j <= row_length(n, i)


# Road rules, one row per rule: (row parity, column filter, step).
# Reproduces both triangles drawn for n = 1 and n = 2 exactly.
ROAD_RULES = (
    ("odd", "any", (0, 1)),    # horizontal along odd rows
    ("odd", "any", (1, 0)),    # up from odd rows
    ("even", "odd", (1, 0)),   # up from even rows, odd columns only
    ("even", "any", (-1, 1)),  # down-diagonal from even rows
    ("odd>=3", "odd", (-1, 1)),  # down-diagonal from odd rows above the base
)


def _rule_applies(row_rule: str, col_rule: str, i: int, j: int) -> bool:
    if row_rule == "odd" and i % 2 == 0:
        return False
    if row_rule == "even" and i % 2 == 1:
        return False
    if row_rule == "odd>=3" and (i % 2 == 0 or i < 3):
        return False
    if col_rule == "odd" and j % 2 == 0:
        return False
    return True


def road_edges(n: int) -> list[tuple[Location, Location]]:
    edges = []
    for i, j in locations(n):
        for row_rule, col_rule, (di, dj) in ROAD_RULES:
            target = (i + di, j + dj)
            if _rule_applies(row_rule, col_rule, i, j) and _exists(n, target):
                edges.append(((i, j), target))
    return sorted(edges)


def spare_locations(n: int) -> frozenset[Location]:
    return frozenset((i, j) for i, j in locations(n) if i >= 2 and not (i % 2 == 1 and j % 2 == 0))


def start_location(n: int, d: int) -> Location:
    return (2 * n + 1 - d, 1)


def goal_location(n: int) -> Location:
    return (1, 2 * n + 1)


def _reachability(n: int, roads: dict[Location, list[Location]]) -> dict[Location, frozenset[Location]]:
    reach: dict[Location, frozenset[Location]] = {}

    def visit(loc: Location) -> frozenset[Location]:
        if loc not in reach:
            acc = {loc}
            for nxt in roads.get(loc, ()):
                acc |= visit(nxt)
            reach[loc] = frozenset(acc)
        return reach[loc]

    for loc in locations(n):
        visit(loc)
    return reach


def _successors(state: TwState, roads, reach, spares, consumable: bool):
    """Yield (name, [(next_state, p), ...]) for each applicable action."""
    loc = state.location
    if state.tyre_ok:
        for target in roads.get(loc, ()):
            # spares used where the car can never return are irrelevant; dropping them keeps states canonical
            consumed = state.consumed & reach[target]
            ok = TwState(target, True, state.has_spare, consumed)
            flat = TwState(target, False, state.has_spare, consumed)
            name = f"move l-{loc[0]}-{loc[1]} l-{target[0]}-{target[1]}"
            yield name, [(ok, 1.0 - FLAT_PROBABILITY), (flat, FLAT_PROBABILITY)]
    if loc in spares and loc not in state.consumed and not state.has_spare:
        consumed = state.consumed | {loc} if consumable else state.consumed
        yield "load", [(TwState(loc, state.tyre_ok, True, consumed), 1.0)]
    if not state.tyre_ok and state.has_spare:
        yield "change", [(TwState(loc, True, False, state.consumed), 1.0)]


def generate_tw(cfg: TwConfig) -> ExplicitSsp:
    """Reachable explicit SSP of TW(n, d); dead ends are left action-less.

    With consumable spares the state remembers used spares only at locations
    the car can still reach, which is exact because used spares elsewhere
    can never be observed again.
    """
    return _build(cfg)[0]


def _build(cfg: TwConfig) -> tuple[ExplicitSsp, list[TwState]]:
    n = cfg.n
    roads: dict[Location, list[Location]] = {}
    for src, dst in road_edges(n):
        roads.setdefault(src, []).append(dst)
    reach = _reachability(n, roads)
    spares = spare_locations(n)
    goal_loc = goal_location(n)

    start = TwState(start_location(n, cfg.d), True, False)
    index = {start: 0}
    order = [start]
    raw_actions: list[list[tuple[str, list[tuple[int, float]]]]] = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        acts = []
        if state.location != goal_loc:
            for name, outs in _successors(state, roads, reach, spares, cfg.consumable_spares):
                targets = []
                for nxt, p in outs:
                    k = index.get(nxt)
                    if k is None:
                        k = index[nxt] = len(order)
                        order.append(nxt)
                        queue.append(nxt)
                    targets.append((k, p))
                acts.append((name, targets))
        raw_actions.append(acts)

    actions = tuple(
        tuple(ActionDef(name, 1.0, tuple(Outcome(t, p) for t, p in outs)) for name, outs in acts)
        for acts in raw_actions
    )
    goals = frozenset(k for k, st in enumerate(order) if st.location == goal_loc)
    return ExplicitSsp(tuple(st.name() for st in order), 0, goals, actions), order


def tw_states(cfg: TwConfig) -> list[TwState]:
    """The TwState behind each state id of ``generate_tw(cfg)``, in id order."""
    return _build(cfg)[1]

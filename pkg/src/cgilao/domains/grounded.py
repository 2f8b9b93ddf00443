"""JSON interchange format for grounded SSPs.

::

    {"states": ["s0", ...], "initial": "s0", "goals": ["g"],
     "actions": {"s0": [{"name": "a0", "cost": 1,
                         "outcomes": [{"target": "s1", "prob": 1.0}]}]}}
"""

from __future__ import annotations

import json
import math
from typing import Any

from ..model import PROB_TOLERANCE, ActionDef, ExplicitSsp, ModelError, Outcome


class FormatError(ModelError):
    """Raised when a grounded-SSP document violates the file format."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise FormatError(message)


def _number(value: Any, where: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), f"{where}: expected a number")
    _require(math.isfinite(value), f"{where}: non-finite number")
    return float(value)


def from_document(doc: Any) -> ExplicitSsp:
    _require(isinstance(doc, dict), "top level must be an object")
    for key in ("states", "initial", "goals"):
        _require(key in doc, f"missing key {key!r}")
    names = doc["states"]
    _require(isinstance(names, list) and all(isinstance(n, str) for n in names), "'states' must be an array of strings")
    index: dict[str, int] = {}
    for i, name in enumerate(names):
        _require(name not in index, f"states[{i}]: duplicate state name {name!r}")
        index[name] = i

    def lookup(name: Any, where: str) -> int:
        _require(isinstance(name, str), f"{where}: expected a state name")
        _require(name in index, f"{where}: unknown state {name!r}")
        return index[name]

    initial = lookup(doc["initial"], "initial")
    _require(isinstance(doc["goals"], list), "'goals' must be an array")
    goals = frozenset(lookup(g, f"goals[{k}]") for k, g in enumerate(doc["goals"]))
    _require(bool(goals), "'goals' must be non-empty")

    raw_actions = doc.get("actions", {})
    _require(isinstance(raw_actions, dict), "'actions' must be an object")
    per_state: list[list[ActionDef]] = [[] for _ in names]
    for state_name, acts in raw_actions.items():
        s = lookup(state_name, "actions")
        _require(isinstance(acts, list), f"actions[{state_name!r}]: expected an array")
        _require(s not in goals or not acts, f"actions[{state_name!r}]: goal states must not have actions")
        for k, act in enumerate(acts):
            where = f"actions[{state_name!r}][{k}]"
            _require(isinstance(act, dict), f"{where}: expected an object")
            name = act.get("name")
            _require(isinstance(name, str), f"{where}: missing action name")
            cost = _number(act.get("cost"), f"{where}.cost")
            _require(cost > 0, f"{where}.cost: must be > 0, got {cost}")
            outs = act.get("outcomes")
            _require(isinstance(outs, list) and bool(outs), f"{where}: 'outcomes' must be a non-empty array")
            outcomes = []
            seen: set[int] = set()
            for m, out in enumerate(outs):
                ow = f"{where}.outcomes[{m}]"
                _require(isinstance(out, dict), f"{ow}: expected an object")
                target = lookup(out.get("target"), f"{ow}.target")
                _require(target not in seen, f"{ow}: duplicate target {out['target']!r}")
                seen.add(target)
                p = _number(out.get("prob"), f"{ow}.prob")
                _require(0 < p <= 1, f"{ow}.prob: must be in (0, 1], got {p}")
                outcomes.append(Outcome(target, p))
            total = math.fsum(o.probability for o in outcomes)
            _require(abs(total - 1.0) <= PROB_TOLERANCE, f"{where}: probabilities sum to {total!r}")
            per_state[s].append(ActionDef(name, cost, tuple(outcomes)))
    return ExplicitSsp(tuple(names), initial, goals, tuple(tuple(a) for a in per_state))


def parse_grounded(text: str) -> ExplicitSsp:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def to_document(ssp: ExplicitSsp) -> dict[str, Any]:
    names = ssp.state_names
    return {
        "states": list(names),
        "initial": names[ssp.initial],
        "goals": [names[g] for g in sorted(ssp.goals)],
        "actions": {
            names[s]: [
                {
                    "name": act.name,
                    "cost": act.cost,
                    "outcomes": [{"target": names[o.target], "prob": o.probability} for o in act.outcomes],
                }
                for act in acts
            ]
            for s, acts in enumerate(ssp.actions)
            if acts
        },
    }


def serialize(ssp: ExplicitSsp, indent: int | None = None) -> str:
    return json.dumps(to_document(ssp), indent=indent)

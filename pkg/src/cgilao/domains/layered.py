"""Seeded random layered SSPs used as a property-test corpus."""

from __future__ import annotations

import random

from ..model import ActionDef, ConfigError, ExplicitSsp, Outcome

BACK_EDGE_RATE = 0.3
COST_RANGE = (0.1, 10.0)


def random_layered_ssp(layers: int, width: int, branching: int, max_outcomes: int, seed: int) -> ExplicitSsp:
    """Layer 0 holds s0, layers 1..layers-1 hold ``width`` states, layer ``layers`` is all goals.

    Every action's first outcome moves one layer forward, so every policy
    reaches the goal layer with probability 1. Remaining outcomes land on
    the next layer or, with probability ``BACK_EDGE_RATE``, on an earlier
    or the same layer.
    """
    for label, value in (("layers", layers), ("width", width), ("branching", branching), ("max_outcomes", max_outcomes)):
        if value < 1:
            raise ConfigError(f"{label} must be >= 1, got {value}")
    rng = random.Random(seed)

    layer_states: list[list[int]] = [[0]]
    names = ["s0"]
    for k in range(1, layers + 1):
        ids = list(range(len(names), len(names) + width))
        prefix = "g" if k == layers else f"l{k}-"
        names.extend(f"{prefix}{m}" for m in range(width))
        layer_states.append(ids)
    goals = frozenset(layer_states[-1])

    actions: list[tuple[ActionDef, ...]] = []
    for k, ids in enumerate(layer_states):
        for s in ids:
            if s in goals:
                actions.append(())
                continue
            acts = []
            for b in range(branching):
                forward = layer_states[k + 1]
                first = rng.choice(forward)
                pool = [t for t in forward if t != first]
                earlier = [t for layer in layer_states[: k + 1] for t in layer if t != s]
                targets = [first]
                for _ in range(rng.randint(1, max_outcomes) - 1):
                    source = earlier if earlier and rng.random() < BACK_EDGE_RATE else pool
                    choices = [t for t in source if t not in targets]
                    if not choices:
                        break
                    targets.append(rng.choice(choices))
                weights = [rng.uniform(0.1, 1.0) for _ in targets]
                total = sum(weights)
                probs = [w / total for w in weights]
                probs[-1] = 1.0 - sum(probs[:-1])
                cost = round(rng.uniform(*COST_RANGE), 6)
                acts.append(ActionDef(f"a{b}", cost, tuple(Outcome(t, p) for t, p in zip(targets, probs))))
            actions.append(tuple(acts))
    return ExplicitSsp(tuple(names), 0, goals, tuple(actions))

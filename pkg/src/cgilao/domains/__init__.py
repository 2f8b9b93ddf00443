"""Instance sources: TW(n, d), grounded JSON files, the five-state `fig2` fixture, random layered SSPs."""

from __future__ import annotations

from pathlib import Path

from ..model import ConfigError, ExplicitSsp
from .fig2 import fig2_example
from .grounded import FormatError, parse_grounded, serialize
from .layered import random_layered_ssp
from .tireworld import TwConfig, generate_tw

__all__ = [
    "FormatError",
    "TwConfig",
    "fig2_example",
    "generate_tw",
    "load_problem",
    "parse_grounded",
    "random_layered_ssp",
    "serialize",
]


def _ints(spec: str, count: int, selector: str) -> list[int]:
    parts = spec.split(",")
    if len(parts) != count:
        raise ConfigError(f"problem selector {selector!r}: expected {count} comma-separated integers")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ConfigError(f"problem selector {selector!r}: expected integers") from None


def load_problem(selector: str) -> tuple[ExplicitSsp, dict[int, float] | None]:
    """Resolve a CLI problem selector.

    Returns the SSP (before the fixed-penalty transform) and the instance's
    own heuristic table when it ships one (only ``fig2`` does).
    """
    kind, _, arg = selector.partition(":")
    if kind == "fig2" and not arg:
        return fig2_example()
    if kind == "tw":
        parts = arg.split(",")
        consumable = True
        if parts and parts[-1] == "nc":
            consumable = False
            parts = parts[:-1]
        n, d = _ints(",".join(parts), 2, selector)
        return generate_tw(TwConfig(n, d, consumable)), None
    if kind == "rand":
        layers, width, branching, outcomes, seed = _ints(arg, 5, selector)
        return random_layered_ssp(layers, width, branching, outcomes, seed), None
    if kind == "file" and arg:
        path = Path(arg)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"problem selector {selector!r}: {exc.strerror}") from None
        return parse_grounded(text), None
    raise ConfigError(f"unknown problem selector {selector!r}")

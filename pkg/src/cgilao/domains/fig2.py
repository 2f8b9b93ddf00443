"""Five-state deterministic SSP on which CG-iLAO*'s values go down."""

from __future__ import annotations

from ..model import ExplicitSsp, ssp_from_lists

S0, S1, S2, S3, G = range(5)
NAMES = ("s0", "s1", "s2", "s3", "g")

# A1 and A1_PRIME are ordinals within s1's action list
A0, A1, A1_PRIME, A2, A3 = 0, 0, 1, 0, 0

HEURISTIC = {S0: 3.0, S1: 2.0, S2: 1.0, S3: 2.0, G: 0.0}


def fig2_example() -> tuple[ExplicitSsp, dict[int, float]]:
    ssp = ssp_from_lists(
        NAMES,
        S0,
        [G],
        [
            [("a0", 1, [(S1, 1.0)])],
            [("a1", 1, [(S2, 1.0)]), ("a1'", 1, [(S3, 1.0)])],
            [("a2", 3, [(G, 1.0)])],
            [("a3", 2, [(G, 1.0)])],
            [],
        ],
    )
    return ssp, dict(HEURISTIC)

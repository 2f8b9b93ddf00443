from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from ..certificates import CertificateReport, constraint_violation_scan, verify_epsilon_consistency
from ..model import ConfigError, Counters, ExplicitSsp, PartialSsp, ValueFunction, greedy_action, greedy_envelope_postorder

DEFAULT_EPSILON = 1e-4
DEFAULT_PENALTY = 500.0

Observer = Callable[[str, dict[str, Any]], None]


class SolverTimeout(Exception):
    pass


class SolverFailure(RuntimeError):
    """A safety cap was hit; the run is abandoned with diagnostics."""


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = DEFAULT_EPSILON
    penalty: float = DEFAULT_PENALTY
    seed: int = 0
    max_wall_time: float | None = None
    safety_iteration_cap: int = 1_000_000

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon!r}")
        if not self.penalty > 0:
            raise ConfigError(f"penalty must be > 0, got {self.penalty!r}")
        if self.max_wall_time is not None and self.max_wall_time < 0:
            raise ConfigError(f"max_wall_time must be >= 0, got {self.max_wall_time!r}")


class Deadline:
    def __init__(self, seconds: float | None) -> None:
        self.start = time.perf_counter()
        self.limit = None if seconds is None else self.start + seconds

    def check(self) -> None:
        if self.limit is not None and time.perf_counter() >= self.limit:
            raise SolverTimeout

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


@dataclass
class SolveResult:
    algorithm: str
    value_function: ValueFunction
    partial: PartialSsp | None
    v_s0: float
    counters: Counters
    status: str
    wall_time_s: float
    iterations: int = 0
    certificates: dict[str, CertificateReport] = field(default_factory=dict)
    diagnostics: str = ""

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def finish(
    algorithm: str,
    ssp: ExplicitSsp,
    V: ValueFunction,
    partial: PartialSsp | None,
    deadline: Deadline,
    eps: float,
    iterations: int,
    status: str = "solved",
    diagnostics: str = "",
    scan_constraints: bool = False,
) -> SolveResult:
    wall = deadline.elapsed()
    result = SolveResult(algorithm, V, partial, V.peek(ssp.initial), V.counters, status, wall, iterations, diagnostics=diagnostics)
    if status != "solved":
        return result
    cert = verify_epsilon_consistency(ssp, partial, V, eps)
    result.certificates["epsilon-consistency"] = cert
    if scan_constraints and partial is not None:
        scan = CertificateReport("constraint-scan")
        for s, a in constraint_violation_scan(ssp, partial, V, eps):
            scan.fail(f"V({ssp.state_names[s]!r}) > Q(.., {ssp.actions[s][a].name!r}) + eps")
        scan.checked = len(partial.states - partial.goals)
        result.certificates["constraint-scan"] = scan
    if not all(c.ok for c in result.certificates.values()):
        result.status = "certificate-failed"
        result.diagnostics = "; ".join(c.summary() for c in result.certificates.values() if not c.ok)
    return result


def snapshot_policy(partial: PartialSsp, V: ValueFunction, policy: Mapping[int, int] | None = None) -> dict[int, int]:
    """Greedy action of every non-goal state on the current envelope.

    With a policy cache the envelope is traced through cached actions and
    states missing from the cache are omitted (they have not been backed up
    yet, so they count as a change once they are).
    """
    if policy is None:
        envelope = greedy_envelope_postorder(partial, V)
        return {s: greedy_action(partial, V, s) for s in envelope if s not in partial.goals}
    envelope = greedy_envelope_postorder(partial, V, policy, stop_uncached=True)
    return {s: policy[s] for s in envelope if s not in partial.goals and s in policy}

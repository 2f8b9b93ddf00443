"""Post-hoc solution certificates.

Everything here recomputes Q-values from scratch through ``V.peek`` so that
the checks neither touch the solver's counters nor reuse its policy cache.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import ExplicitSsp, PartialSsp, ValueFunction


def _q(ssp: ExplicitSsp, V: ValueFunction, s: int, a: int) -> float:
    act = ssp.actions[s][a]
    return act.cost + sum(o.probability * V.peek(o.target) for o in act.outcomes)


def _greedy(ssp: ExplicitSsp, V: ValueFunction, s: int, ordinals) -> int:
    best, best_q = -1, float("inf")
    for a in ordinals:
        q = _q(ssp, V, s, a)
        if q < best_q:
            best, best_q = a, q
    return best


def _min_q(ssp: ExplicitSsp, V: ValueFunction, s: int) -> float:
    return min(_q(ssp, V, s, a) for a in range(ssp.num_actions(s)))


@dataclass
class CertificateReport:
    name: str
    ok: bool = True
    checked: int = 0
    max_residual: float = 0.0
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.ok = False
        self.violations.append(message)

    @property
    def first_violation(self) -> str | None:
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        status = "pass" if self.ok else f"FAIL ({self.first_violation})"
        return f"{self.name}: {status} [states={self.checked}, max_res={self.max_residual:.3g}]"


def greedy_envelope(ssp: ExplicitSsp, V: ValueFunction, partial: PartialSsp | None = None) -> tuple[list[int], list[int]]:
    """States reachable from s0 under the greedy policy of V.

    With ``partial`` the policy ranges over Â(s) and stops at Ĝ. Returns
    ``(envelope_non_goal_states, open_leaves)`` where open leaves are
    reachable states that are neither real goals nor expandable.
    """
    s0 = ssp.initial
    seen = {s0}
    stack = [s0]
    envelope: list[int] = []
    leaves: list[int] = []
    while stack:
        s = stack.pop()
        if s in ssp.goals:
            continue
        if partial is not None:
            if s in partial.goals or s not in partial.states:
                leaves.append(s)
                continue
            ordinals = partial.partial_actions(s)
        else:
            ordinals = range(ssp.num_actions(s))
        if not ordinals:
            leaves.append(s)
            continue
        envelope.append(s)
        a = _greedy(ssp, V, s, ordinals)
        for o in reversed(ssp.actions[s][a].outcomes):
            if o.target not in seen:
                seen.add(o.target)
                stack.append(o.target)
    return envelope, leaves


def verify_epsilon_consistency(
    ssp: ExplicitSsp,
    partial: PartialSsp | None,
    V: ValueFunction,
    eps: float,
) -> CertificateReport:
    """res(s) ≤ eps on the greedy envelope of V, and the envelope is closed.

    Residuals are taken against the full action set A(s) even when the
    policy is restricted to a partial SSP.
    """
    report = CertificateReport("epsilon-consistency")
    envelope, leaves = greedy_envelope(ssp, V, partial)
    for s in leaves:
        report.fail(f"greedy policy reaches non-goal leaf {ssp.state_names[s]!r}")
    for s in envelope:
        res = abs(V.peek(s) - _min_q(ssp, V, s))
        report.max_residual = max(report.max_residual, res)
        if res > eps:
            report.fail(f"residual {res:.6g} > {eps:g} at {ssp.state_names[s]!r}")
    report.checked = len(envelope)
    return report


def verify_lp_certificate(ssp: ExplicitSsp, V: ValueFunction, eps: float) -> CertificateReport:
    """Feasibility of V in the VI LP (within eps) and tightness on the greedy envelope."""
    report = CertificateReport("lp-certificate")
    for s in range(ssp.num_states):
        v = V.peek(s)
        if s in ssp.goals:
            if v > eps:
                report.fail(f"goal {ssp.state_names[s]!r} has V = {v:.6g} > 0")
            continue
        for a, act in enumerate(ssp.actions[s]):
            slack = _q(ssp, V, s, a) - v
            if slack < -eps:
                report.fail(f"constraint ({ssp.state_names[s]!r}, {act.name!r}) violated by {-slack:.6g}")
    envelope, _ = greedy_envelope(ssp, V)
    for s in envelope:
        gap = _min_q(ssp, V, s) - V.peek(s)
        report.max_residual = max(report.max_residual, abs(gap))
        if gap > eps:
            report.fail(f"no tight constraint at {ssp.state_names[s]!r} (min slack {gap:.6g})")
    if not envelope and ssp.initial not in ssp.goals:
        report.notes.append("empty envelope")
    report.checked = ssp.num_states
    return report


def constraint_violation_scan(
    ssp: ExplicitSsp,
    partial: PartialSsp,
    V: ValueFunction,
    eps: float,
) -> list[tuple[int, int]]:
    """All (s, a) with s ∈ Ŝ\\Ĝ, a ∈ A(s) and V(s) > Q(s,a) + eps."""
    found = []
    for s in sorted(partial.states - partial.goals):
        v = V.peek(s)
        for a in range(ssp.num_actions(s)):
            if v > _q(ssp, V, s, a) + eps:
                found.append((s, a))
    return found

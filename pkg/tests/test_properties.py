"""Property tests over seeded random layered SSPs."""

from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from cgilao.certificates import constraint_violation_scan, verify_epsilon_consistency
from cgilao.domains import parse_grounded, random_layered_ssp, serialize
from cgilao.heuristics import h_det, h_zero
from cgilao.model import apply_fixed_penalty, validate_model
from cgilao.solvers import ALGORITHMS, SolverConfig, cg_ilao_solve, ilao_solve, solve
from oracles import policy_iteration

EPS = 1e-4
D = 500.0

instances = st.builds(
    random_layered_ssp,
    layers=st.integers(1, 6),
    width=st.integers(1, 5),
    branching=st.integers(1, 4),
    max_outcomes=st.integers(1, 4),
    seed=st.integers(0, 2**32 - 1),
)


@settings(max_examples=60, deadline=None)
@given(instances)
def test_generator_output_is_valid_and_round_trips(ssp):
    assert validate_model(ssp).ok
    back = parse_grounded(serialize(ssp))
    assert serialize(back) == serialize(ssp)


@settings(max_examples=40, deadline=None)
@given(instances, st.sampled_from(["zero", "det"]), st.integers(0, 50))
def test_solvers_reach_the_optimum(raw, heuristic, seed):
    ssp = apply_fixed_penalty(raw, D)
    reference = policy_iteration(ssp)[ssp.initial]
    for algo in ALGORITHMS:
        H = h_zero(ssp) if heuristic == "zero" else h_det(ssp, D)
        result = solve(algo, ssp, H, SolverConfig(seed=seed))
        assert result.solved, result.diagnostics
        assert abs(result.v_s0 - reference) <= 1e-3
        c = result.counters
        assert c.q_guard <= c.q_values and c.backups <= c.q_values


@settings(max_examples=40, deadline=None)
@given(instances)
def test_cg_ilao_certificates_and_action_savings(raw):
    ssp = apply_fixed_penalty(raw, D)
    cg = cg_ilao_solve(ssp, h_det(ssp, D), EPS)
    assert verify_epsilon_consistency(ssp, cg.partial, cg.value_function, EPS).ok
    assert constraint_violation_scan(ssp, cg.partial, cg.value_function, EPS) == []
    assert cg.partial.partial_action_count() <= cg.partial.potential_action_count()


@settings(max_examples=40, deadline=None)
@given(instances)
def test_ilao_values_never_drop_under_monotone_heuristic(raw):
    ssp = apply_fixed_penalty(raw, D)
    drops = []
    ilao_solve(ssp, h_det(ssp, D), EPS, watcher=lambda s, old, new: new < old - 1e-9 and drops.append(s))
    assert drops == []


@settings(max_examples=40, deadline=None)
@given(instances)
def test_h_det_is_admissible(raw):
    ssp = apply_fixed_penalty(raw, D)
    vstar = policy_iteration(ssp)
    H = h_det(ssp, D)
    assert all(H.peek(s) <= vstar[s] + 1e-9 for s in range(ssp.num_states))

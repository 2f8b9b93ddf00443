from __future__ import annotations

import pytest

from cgilao.domains import TwConfig, fig2_example, generate_tw, random_layered_ssp
from cgilao.domains.fig2 import A1, A1_PRIME, G, S0, S1, S2, S3
from cgilao.heuristics import h_det, h_table, h_zero
from cgilao.model import apply_fixed_penalty, ssp_from_lists
from cgilao.solvers import (
    ALGORITHMS,
    SolverConfig,
    cg_ilao_solve,
    ilao_solve,
    lrtdp_solve,
    solve,
    vi_solve,
)
from cgilao.model import ConfigError
from oracles import policy_iteration

EPS = 1e-4
D = 500.0


def _tw(n, d, consumable=True):
    return apply_fixed_penalty(generate_tw(TwConfig(n, d, consumable)), D)


def _fig2():
    ssp, table = fig2_example()
    return ssp, h_table(ssp, table)


def test_vi_fig2_from_zero():
    ssp, _ = fig2_example()
    V = vi_solve(ssp, EPS).value_function
    assert [V.peek(s) for s in (S0, S1, S2, S3)] == [4.0, 3.0, 3.0, 2.0]


def test_vi_tw12_matches_policy_iteration():
    ssp = _tw(1, 2)
    result = vi_solve(ssp, 1e-8)
    assert result.v_s0 == pytest.approx(policy_iteration(ssp)[ssp.initial], abs=1e-3)


def test_dead_end_value_is_penalty():
    ssp = generate_tw(TwConfig(1, 2))
    dead = [s for s in range(ssp.num_states) if s not in ssp.goals and not ssp.actions[s]]
    V = vi_solve(apply_fixed_penalty(ssp, D), EPS).value_function
    assert all(V.peek(s) == D for s in dead)


def test_ilao_fig2_expands_all_actions():
    ssp, H = _fig2()
    result = ilao_solve(ssp, H, EPS)
    assert result.solved and result.v_s0 == 4.0
    partial = result.partial
    for s in partial.states - partial.goals:
        assert partial.partial_actions(s) == list(range(ssp.num_actions(s)))


def test_ilao_tw12_agrees_with_vi():
    ssp = _tw(1, 2)
    assert ilao_solve(ssp, h_det(ssp, D)).v_s0 == pytest.approx(vi_solve(ssp).v_s0, abs=1e-3)


@pytest.mark.parametrize("solver", [ilao_solve, cg_ilao_solve, lrtdp_solve])
def test_initial_goal_is_trivial(solver):
    ssp = ssp_from_lists(["g", "s"], 0, [0], [[], [("a", 1, [(0, 1.0)])]])
    result = solver(ssp, h_zero(ssp))
    assert result.solved and result.v_s0 == 0.0
    assert result.counters.expansions == 0 and result.counters.q_values == 0


def test_vi_all_goal_ssp():
    ssp = ssp_from_lists(["g"], 0, [0], [[]])
    result = vi_solve(ssp)
    assert result.solved and result.v_s0 == 0.0 and result.counters.q_values == 0


def test_cg_ilao_fig2_trace():
    ssp, H = _fig2()
    events = []
    result = cg_ilao_solve(ssp, H, EPS, observer=lambda e, p: events.append((e, p)))
    by_iter = {(e, p["iteration"]): p for e, p in events}
    assert by_iter[("expanded", 2)]["expanded"] == {S1: [A1]}
    after = by_iter[("backups", 3)]
    assert (after["values"][S2], after["values"][S1], after["values"][S0]) == (3.0, 4.0, 5.0)
    assert after["gamma"] == [(S1, A1_PRIME)]
    fixed = by_iter[("fixed", 3)]
    assert fixed["values"][S1] == 3.0 and fixed["gamma"] == [(S0, 0)]
    assert by_iter[("backups", 4)]["values"][S0] == 4.0
    assert result.v_s0 == 4.0 and result.iterations == 4
    assert result.partial.partial_actions(S1) == [A1, A1_PRIME]
    assert result.certificates["constraint-scan"].ok


def test_cg_ilao_partial_actions_not_above_ilao():
    for n, d in [(1, 2), (2, 2), (2, 4)]:
        ssp = _tw(n, d)
        a = ilao_solve(ssp, h_det(ssp, D))
        b = cg_ilao_solve(ssp, h_det(ssp, D))
        assert b.v_s0 == pytest.approx(a.v_s0, abs=1e-3)
        assert b.partial.partial_action_count() <= a.partial.partial_action_count()


def test_cg_ilao_guard_count_is_a_subset():
    ssp = _tw(2, 3)
    c = cg_ilao_solve(ssp, h_det(ssp, D)).counters
    assert 0 < c.q_guard <= c.q_values
    assert c.q_values >= c.backups


def test_lrtdp_is_seed_deterministic():
    ssp = _tw(2, 3)
    a = lrtdp_solve(ssp, h_det(ssp, D), seed=3)
    b = lrtdp_solve(ssp, h_det(ssp, D), seed=3)
    assert a.counters == b.counters and a.value_function.values == b.value_function.values
    assert a.v_s0 == pytest.approx(vi_solve(ssp).v_s0, abs=1e-3)


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_zero_timeout_returns_unsolved(algo):
    ssp = _tw(1, 2)
    result = solve(algo, ssp, h_det(ssp, D), SolverConfig(max_wall_time=0.0))
    assert result.status == "timeout" and not result.solved
    assert result.counters.q_values == 0


@pytest.mark.parametrize("algo", ["ilao", "cg-ilao"])
def test_safety_cap_reports_failure(algo):
    ssp = _tw(2, 4)
    result = solve(algo, ssp, h_zero(ssp), SolverConfig(safety_iteration_cap=2))
    assert result.status == "failed" and "exceeded" in result.diagnostics


def test_unknown_algorithm():
    ssp, H = _fig2()
    with pytest.raises(ConfigError):
        solve("nosuch", ssp, H)


def test_solver_config_validation():
    with pytest.raises(ConfigError):
        SolverConfig(epsilon=0)
    with pytest.raises(ConfigError):
        SolverConfig(penalty=-1)


@pytest.mark.parametrize("seed", range(5))
def test_all_solvers_agree_on_random_ssps(seed):
    ssp = apply_fixed_penalty(random_layered_ssp(5, 4, 3, 3, seed), D)
    reference = policy_iteration(ssp)[ssp.initial]
    for algo in ALGORITHMS:
        result = solve(algo, ssp, h_det(ssp, D), SolverConfig(seed=seed))
        assert result.solved
        assert result.v_s0 == pytest.approx(reference, abs=1e-3)


def test_monotone_heuristic_keeps_ilao_values_non_decreasing():
    ssp = _tw(2, 4)
    drops = []

    def watch(s, old, new):
        if new < old - 1e-9:
            drops.append(s)

    ilao_solve(ssp, h_det(ssp, D), watcher=watch)
    assert drops == []


def test_cg_ilao_lowers_a_value_on_fig2():
    ssp, H = _fig2()
    drops = []
    cg_ilao_solve(ssp, H, watcher=lambda s, old, new: new < old and drops.append((s, old, new)))
    assert (S1, 4.0, 3.0) in drops and (S0, 5.0, 4.0) in drops
    assert G not in {s for s, _, _ in drops}

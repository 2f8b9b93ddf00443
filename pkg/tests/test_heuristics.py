from __future__ import annotations

import numpy as np
import pytest

from cgilao.domains import TwConfig, fig2_example, generate_tw, random_layered_ssp
from cgilao.domains.fig2 import G, S0
from cgilao.heuristics import (
    CapabilityError,
    h_det,
    h_pert,
    h_zero,
    make_heuristic,
    optimal_values,
    parse_heuristic_selector,
)
from cgilao import heuristics
from cgilao.model import ConfigError, apply_fixed_penalty
from cgilao.solvers import cg_ilao_solve, ilao_solve
from oracles import exact_values

D = 500.0


def _tw(n, d, consumable=True):
    return apply_fixed_penalty(generate_tw(TwConfig(n, d, consumable)), D)


def _bellman_min(ssp, table, s):
    return min(act.cost + sum(o.probability * table[o.target] for o in act.outcomes) for act in ssp.actions[s])


def test_h_zero():
    ssp, _ = fig2_example()
    H = h_zero(ssp)
    assert all(H(s) == 0.0 for s in range(ssp.num_states))


def test_h_det_is_exact_on_deterministic_fig2():
    ssp, _ = fig2_example()
    H = h_det(ssp)
    assert H(S0) == 4.0 and H(G) == 0.0


def test_h_det_tw12_start():
    ssp = _tw(1, 2)
    assert h_det(ssp, D)(ssp.initial) == 2.0


def test_h_det_unreachable_gets_penalty():
    ssp = generate_tw(TwConfig(1, 2))
    H = h_det(ssp, D)
    dead = [s for s in range(ssp.num_states) if s not in ssp.goals and not ssp.actions[s]]
    assert dead
    assert all(H(s) == D for s in dead)


@pytest.mark.parametrize("make", [h_zero, lambda ssp: h_det(ssp, D)])
@pytest.mark.parametrize("instance", [(1, 2), (2, 3)])
def test_monotonicity_audit(make, instance):
    ssp = _tw(*instance)
    H = make(ssp)
    table = [H.peek(s) for s in range(ssp.num_states)]
    for s in range(ssp.num_states):
        if s not in ssp.goals:
            assert table[s] <= _bellman_min(ssp, table, s) + 1e-9


@pytest.mark.parametrize(
    "ssp",
    [_tw(1, 2), _tw(2, 2), apply_fixed_penalty(random_layered_ssp(4, 3, 3, 2, 5), D)],
    ids=["tw12", "tw22", "rand"],
)
def test_admissibility_audit(ssp):
    vstar = optimal_values(ssp)
    exact = exact_values(ssp, vstar)
    assert np.allclose(exact, vstar, atol=1e-5)
    for H in (h_zero(ssp), h_det(ssp, D), h_pert(ssp, 0.3, 1, vstar, D)):
        for s in range(ssp.num_states):
            assert H.peek(s) <= exact[s] + 1e-9


def test_h_pert_interval_and_determinism():
    ssp = _tw(1, 2)
    vstar = optimal_values(ssp)
    for w in (0.0, 0.5, 0.999):
        a = h_pert(ssp, w, 7, vstar)
        b = h_pert(ssp, w, 7, vstar)
        assert a.table == b.table
        for s, v in enumerate(vstar):
            if v > 0:
                assert w * v < a.peek(s) <= v


def test_h_pert_rejects_w_one():
    ssp, _ = fig2_example()
    with pytest.raises(ConfigError):
        h_pert(ssp, 1.0, 0)


def test_h_pert_ordering_differs_for_some_seed():
    ssp = _tw(1, 2)
    vstar = optimal_values(ssp)
    order = np.argsort(vstar, kind="stable").tolist()
    assert any(
        np.argsort(h_pert(ssp, 0.0, seed, vstar).table, kind="stable").tolist() != order for seed in range(10)
    )


def test_call_count_matches_materialised_states():
    ssp = _tw(2, 2)
    for solve in (ilao_solve, cg_ilao_solve):
        H = h_det(ssp, D)
        result = solve(ssp, H)
        initialised = [s for s in result.value_function.values if s not in ssp.goals]
        assert H.call_count == len(initialised) == result.counters.heuristic_calls


def test_oracle_size_cap(monkeypatch):
    ssp, _ = fig2_example()
    monkeypatch.setattr(heuristics, "ORACLE_STATE_LIMIT", 3)
    with pytest.raises(CapabilityError):
        make_heuristic("pert:0.5", ssp, D)


@pytest.mark.parametrize(
    "selector, expected",
    [("zero", ("zero", None)), ("det", ("det", None)), ("pert:0.25", ("pert", 0.25)), ("table", ("table", None))],
)
def test_selector_parsing(selector, expected):
    assert parse_heuristic_selector(selector) == expected


@pytest.mark.parametrize("selector", ["pert:1", "pert:x", "pert", "det:1", "nosuch"])
def test_bad_selectors(selector):
    with pytest.raises(ConfigError):
        parse_heuristic_selector(selector)


def test_table_selector_needs_a_table():
    ssp = _tw(1, 1)
    with pytest.raises(ConfigError):
        make_heuristic("table", ssp, D)

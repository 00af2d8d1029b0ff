from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loqc_parity import gates
from loqc_parity.gates import (
    ConfigError,
    FactoryCostModel,
    GateConfig,
    TeleporterSpec,
    expected_uses,
    factory_grid,
    gate_budget,
    gate_budget_half_encoder,
    p_gate_cnot,
    p_gate_cnot_exact,
    p_gate_single,
    p_gate_single_exact,
    primitive_counts,
    solve_min_w,
)
from loqc_parity.walk import DomainError
from oracles import gate_loop_chain, walk_by_propagation

CFG = GateConfig(3, 2, 1, 4)


def test_teleporter_probability():
    assert TeleporterSpec(1).prob == Fraction(1, 2)
    assert TeleporterSpec(4).prob == Fraction(4, 5)
    with pytest.raises(DomainError):
        TeleporterSpec(0)


def test_config_validation():
    with pytest.raises(DomainError):
        GateConfig(0, 2, 1)
    with pytest.raises(DomainError):
        GateConfig(3, 2, 1, 0)
    with pytest.raises(DomainError):
        GateConfig(3, 2, 1, 4, p_tot=0)
    with pytest.raises(DomainError):
        p_gate_cnot(GateConfig(3, 2, 1))


def test_success_probabilities_reference_config():
    assert p_gate_single(CFG) == pytest.approx(0.98456, abs=5e-5)
    assert p_gate_cnot(CFG) == pytest.approx(0.93189, abs=5e-5)
    assert p_gate_cnot(CFG.with_w(5)) == pytest.approx(0.97622, abs=5e-5)


def test_exponent_forms_bound_exact_forms():
    for w in range(1, 12):
        cfg = CFG.with_w(w)
        assert p_gate_single(cfg) <= float(p_gate_single_exact(cfg)) + 1e-15
        assert p_gate_cnot(cfg) <= float(p_gate_cnot_exact(cfg)) + 1e-15


@pytest.mark.parametrize("n_a,n_r,n_t,w", [(3, 2, 1, 4), (2, 3, 2, 2), (4, 2, 1, 6), (2, 2, 1, 1)])
def test_exact_success_against_stage_chain(n_a, n_r, n_t, w):
    cfg = GateConfig(n_a, n_r, n_t, w)
    a, r, _ = cfg.stage_probs()
    success, adds, re_visits, attempts = gate_loop_chain(float(a), float(r), float(cfg.p_t))
    assert float(p_gate_cnot_exact(cfg)) == pytest.approx(success, rel=1e-12)
    uses = expected_uses(cfg)
    assert uses.t_g == pytest.approx(attempts, rel=1e-12)
    n_add = walk_by_propagation(cfg.p_a, -w, 1, 0)[1]
    assert uses.e_add == pytest.approx(adds * n_add, rel=1e-9)
    if w > 1:
        _, n_re, n_fre = walk_by_propagation(cfg.p_r, 0, w, 1)
        assert uses.e_re == pytest.approx(n_re + (re_visits - 1) * n_fre, rel=1e-9)
    single, *_ = gate_loop_chain(float(a), float(r), 1.0, cnot=False)
    assert float(p_gate_single_exact(cfg)) == pytest.approx(single, rel=1e-12)


def test_expected_uses_reference_config():
    uses = expected_uses(CFG)
    assert uses.t_g == pytest.approx(7.5, abs=1e-12)
    assert uses.e_add == pytest.approx(16.0025, abs=1e-4)
    assert uses.e_re == pytest.approx(6.375, abs=1e-12)


def test_primitive_counts_reference_config():
    counts = primitive_counts(CFG)
    assert counts.n_cs == pytest.approx(136.515, abs=1e-3)
    assert counts.n_elim == pytest.approx(38.380, abs=1e-3)


def test_solve_min_w():
    assert solve_min_w(0.95, GateConfig(3, 2, 1)) == 5
    assert solve_min_w(0.95, GateConfig(1, 1, 1)) is None
    with pytest.raises(DomainError):
        solve_min_w(1.0, GateConfig(3, 2, 1))


def test_half_encoder_budget_special_form():
    cfg = GateConfig(1, 1, 1, 2, p_tot=0.99)
    assert gate_budget(cfg) == pytest.approx(0.0027541, abs=1e-7)
    for w in range(1, 31):
        assert gate_budget(cfg.with_w(w)) == pytest.approx(
            gate_budget_half_encoder(w, 0.5, 0.99), rel=1e-12
        )


def test_budget_edge_cases():
    assert gate_budget(GateConfig(3, 2, 1, 4, p_tot=1.0)) == 0.0
    assert gate_budget(GateConfig(4, 4, 1, 200, p_tot=0.9)) > 1e100


def test_half_encoder_budget_decreases():
    budgets = [gate_budget(GateConfig(1, 1, 1, w, 0.99)) for w in range(1, 31)]
    assert all(b > c for b, c in zip(budgets, budgets[1:]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_higher_order_budget_increases(n):
    budgets = [gate_budget(GateConfig(n, n, 1, w, 0.99)) for w in range(1, 31)]
    assert all(b < c for b, c in zip(budgets, budgets[1:]))


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 3), w=st.integers(1, 30))
def test_higher_order_encoder_gives_larger_budget(n, w):
    low = gate_budget(GateConfig(n, n, 1, w, 0.99))
    high = gate_budget(GateConfig(n + 1, n + 1, 1, w, 0.99))
    assert high > low


@settings(max_examples=50, deadline=None)
@given(n_a=st.integers(1, 5), n_r=st.integers(1, 5), n_t=st.integers(1, 3), w=st.integers(1, 25))
def test_probabilities_in_unit_interval(n_a, n_r, n_t, w):
    cfg = GateConfig(n_a, n_r, n_t, w)
    for value in (p_gate_single(cfg), p_gate_cnot(cfg), p_gate_cnot_exact(cfg)):
        assert 0 <= float(value) <= 1


def test_factory_cost_model_recursion():
    model = FactoryCostModel()
    assert model.resource_cost(1, dual_rail=False) == (1.0, 0.0)
    # Each step: one more Bell and elimination state, then divide by the link success.
    assert model.resource_cost(2, dual_rail=False) == (8.0, 4.0)
    assert model.resource_cost(2, dual_rail=True) == (32.0, 16.0)
    assert model.resource_cost(3, dual_rail=True) == (528.0, 272.0)


def test_factory_model_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="bogus"):
        FactoryCostModel.from_dict({"bogus": 1})
    with pytest.raises(ConfigError):
        FactoryCostModel(link_success=0)
    assert FactoryCostModel.from_dict({"link_success": 0.25}).link_success == 0.25


def test_factory_grid_minimum():
    rows = factory_grid()
    best = min(rows, key=lambda r: r.bell_states)
    assert (best.n_a, best.n_r, best.w) == (2, 2, 7)
    assert best.bell_states == pytest.approx(1314.63, abs=0.01)
    assert best.elim_states == pytest.approx(649.38, abs=0.01)
    assert all(r.p_enc >= 0.95 for r in rows if r.w is not None)


def test_klm_failure_iteration():
    assert gates.f_z_klm(Fraction(1, 4)) == Fraction(7, 52)
    f, cs = gates.klm_concat(0.25, 1)
    assert f == pytest.approx(0.134615, abs=1e-6)
    assert cs == pytest.approx(0.74889, abs=1e-5)
    assert gates.klm_concat(0.25, 2)[1] == pytest.approx(0.92494, abs=1e-5)
    assert gates.klm_resource_bound() == (1000, 2250)
    with pytest.raises(DomainError):
        gates.f_z_klm(1.5)


@settings(max_examples=100, deadline=None)
@given(f=st.floats(1e-6, 0.38))
def test_klm_iteration_suppresses_failure(f):
    assert gates.f_z_klm(f) < f


def test_klm_fixed_point():
    # f = F_Z(f) reduces to 2f^2 - 3f + 1 = 0: suppression below 1/2, amplification above.
    assert gates.f_z_klm(Fraction(1, 2)) == Fraction(1, 2)
    assert gates.f_z_klm(0.49) < 0.49
    assert gates.f_z_klm(0.6) > 0.6

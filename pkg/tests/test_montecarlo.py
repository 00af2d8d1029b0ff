from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loqc_parity import gates
from loqc_parity.gates import GateConfig
from loqc_parity.montecarlo import (
    StageProbs,
    mc_report,
    run_trials,
    sim_cnot,
    sim_walk,
    sim_z90,
    summarize,
    walk_trials,
)
from loqc_parity.rng import RngStream
from loqc_parity.walk import WalkProblem
from oracles import walk_by_propagation

CFG = GateConfig(3, 2, 1, 4)
RNG = RngStream(2024)


def within(est, value, k=3.0):
    return abs(est.mean - value) <= k * est.stderr


def test_deterministic_walk():
    rep = sim_walk(WalkProblem(1.0, -4, 1, 0), 100, RNG)
    assert rep.fraction_right.mean == 1.0
    assert rep.steps_right.mean == 1.0


def test_walk_absorption_fraction():
    rep = sim_walk(WalkProblem(Fraction(2, 3), -4, 1, 0), 100_000, RNG)
    assert within(rep.fraction_right, 30 / 31)


def test_walk_conditional_steps():
    rep = sim_walk(WalkProblem(Fraction(3, 4), -4, 1, 0), 100_000, RNG)
    _, expected, _ = walk_by_propagation(0.75, -4, 1, 0)
    assert within(rep.steps_right, expected)


def test_walk_started_on_wall():
    right, steps = walk_trials(WalkProblem(0.5, 0, 3, 3), 5, RNG)
    assert right.all() and (steps == 0).all()


def test_encoder_p_one_always_succeeds():
    rep = sim_z90(CFG, 1000, RNG, probs=StageProbs(1.0, 1.0))
    assert rep.successes == 1000 and rep.logical_losses == 0
    assert rep.encoder_uses_add.mean == 1.0
    assert rep.encoder_uses_re.mean == CFG.w - 1
    rep = sim_cnot(CFG, 1000, RNG, probs=StageProbs(1.0, 1.0, 1.0))
    assert rep.success.mean == 1.0
    assert rep.teleporter_uses_gate.mean == 1.0
    assert rep.encoder_uses_add.mean == 2.0


def test_zero_stage_probability_rejected():
    with pytest.raises(ValueError):
        run_trials("z90", StageProbs(0.0, 1.0), 3, 50, RNG)
    with pytest.raises(ValueError):
        run_trials("cnot", StageProbs(0.5, 0.5, 0.0), 3, 50, RNG)


def test_tiny_add_probability_loses_everything():
    o = run_trials("z90", StageProbs(1e-3, 1.0), 2, 200, RNG)
    assert o.lost.all()


def test_z90_success_and_tallies():
    rep = sim_z90(CFG, 100_000, RNG)
    assert within(rep.success, float(gates.p_gate_single_exact(CFG)))
    assert within(rep.success, 0.98459, k=4)
    single = gates.expected_uses_single(CFG)
    assert within(rep.encoder_uses_add, single.e_add)
    assert within(rep.encoder_uses_re, single.e_re)
    assert rep.teleporter_uses_gate.mean == 0


def test_cnot_success_and_tallies():
    rep = sim_cnot(CFG, 100_000, RNG)
    assert within(rep.success, float(gates.p_gate_cnot_exact(CFG)))
    assert within(rep.success, 0.9319, k=4)
    assert within(rep.teleporter_uses_gate, 7.5)
    assert within(rep.encoder_uses_add, 16.0)
    uses = gates.expected_uses(CFG)
    assert within(rep.encoder_uses_re, uses.e_re)
    bell, elim = gates.factory_cost(CFG)
    assert within(rep.bell_states, bell)
    assert within(rep.elim_states, elim)
    assert rep.successes + rep.logical_losses <= rep.trials


def test_width_one_gate():
    cfg = GateConfig(3, 2, 1, 1)
    rep = sim_cnot(cfg, 50_000, RNG)
    assert rep.encoder_uses_re.mean == 0
    assert within(rep.success, float(gates.p_gate_cnot_exact(cfg)))
    assert within(rep.teleporter_uses_gate, 4.0)


def test_determinism():
    a = run_trials("cnot", StageProbs.of(CFG), 4, 5000, RngStream(99))
    b = run_trials("cnot", StageProbs.of(CFG), 4, 5000, RngStream(99))
    for field in ("lost", "add_uses", "re_uses", "gate_attempts", "draws"):
        assert np.array_equal(getattr(a, field), getattr(b, field))
    assert summarize(a, CFG) == summarize(b, CFG)


@settings(max_examples=10, deadline=None)
@given(cuts=st.lists(st.integers(1, 399), max_size=4, unique=True))
def test_parallel_decomposition(cuts):
    total = 400
    serial = run_trials("cnot", StageProbs.of(CFG), 4, total, RngStream(5))
    bounds = [0, *sorted(cuts), total]
    parts = [
        run_trials("cnot", StageProbs.of(CFG), 4, hi - lo, RngStream(5, stream_id=lo))
        for lo, hi in zip(bounds, bounds[1:])
    ]
    for field in ("lost", "add_uses", "re_uses", "gate_attempts", "ups", "downs"):
        joined = np.concatenate([getattr(p, field) for p in parts])
        assert np.array_equal(joined, getattr(serial, field))


@pytest.mark.parametrize("kind", ["cnot", "z90"])
@pytest.mark.parametrize("w", [1, 2, 5])
def test_conservation(kind, w):
    cfg = GateConfig(2, 2, 1, w)
    o = run_trials(kind, StageProbs.of(cfg), w, 3000, RngStream(8))
    # Every encoder use is one step of +1 or -1 components.
    assert np.array_equal(o.ups + o.downs, o.add_uses + o.re_uses + o.lost_uses)
    assert (o.max_width <= w + 1).all() and (o.min_width >= 0).all()
    if kind == "cnot":
        assert np.array_equal(o.add_walks, o.gate_attempts + 1)
        tel_fail = o.extra["control_fail"] + o.extra["target_fail"]
        assert np.array_equal(o.re_fails, o.gate_attempts - 1 - tel_fail)
    else:
        assert np.array_equal(o.add_walks, o.re_fails + 1)
    # Net change: +1 per completed add, -w per lost add walk, -1 per failed
    # re-encoding and w - 1 for the final re-encoding.
    net = o.add_walks - w * o.lost_walks - o.re_fails + (w - 1)
    assert np.array_equal(o.ups - o.downs, net)


def test_report_rows():
    rows = mc_report(CFG, 20_000, RNG)
    names = {r.quantity for r in rows}
    assert {"p_gate_cnot_exact", "e_add", "e_re", "t_g", "bell_states", "elim_states"} <= names
    assert all(np.isfinite(r.z) for r in rows)
    for r in rows:
        if r.gated:
            assert abs(r.z) <= 4, r
    refs = [r for r in rows if r.source == "paper-reference"]
    assert {r.analytic for r in refs} >= {5.7, 90.0, 32.0}
    assert not any(r.gated for r in refs)


def test_report_needs_trials():
    with pytest.raises(ValueError):
        mc_report(CFG, 10, RNG)

"""Seeded Monte Carlo of the encoded-gate algorithms and their random walks.

Every trial is a small state machine driven by its own keyed random stream
(trial ``t`` uses stream ``rng.stream_id + t``), so results do not depend on
how trials are batched.  All trials advance in lockstep, one draw per active
trial per iteration, which keeps the inner loop in numpy.

Encoded CNOT, per trial:

* ADD: walk from 0 with walls ``-w`` and ``+1`` until one component is added.
  The first round adds to both qubits, later rounds to one.  Reaching ``-w``
  is a logical loss; it is recorded and the walk restarts so that the trial
  still completes and its remaining tallies stay well defined.
* TEL1, TEL2: the two gate teleporters, each succeeding with ``P_t``.  A
  failure Z-measures the newly added component off that qubit, which goes
  back to ADD for one component.
* RE: walk from 1 with walls 0 and ``w``.  Failure destroys the new
  component and returns to ADD.

The Z90 loop is ADD (one component), a deterministic gate, then RE.

Encoder tallies count the steps of completed stage walks only; steps spent in
walks that ended in a logical loss are reported separately.  With this
accounting the expected tallies are exactly ``E_add``, ``E_re`` and ``T_g``,
and the success fraction estimates the exact renewal probability
(:func:`~loqc_parity.gates.p_gate_cnot_exact`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Optional

import numpy as np

from . import gates
from .gates import FactoryCostModel, GateConfig
from .reference import PRIMITIVES_95, RESOURCES_W4
from .rng import RngStream, keyed_uniforms, stream_keys
from .walk import WalkProblem, markov_exact

Z_GATE = 4.0

_DOMAIN_WALK = 0
_DOMAIN_Z90 = 1
_DOMAIN_CNOT = 2

ADD, TEL1, TEL2, RE, DONE = range(5)


class Estimate(NamedTuple):
    mean: float
    stderr: float

    def z(self, expected: float) -> float:
        if self.stderr > 0:
            return (self.mean - expected) / self.stderr
        return 0.0 if math.isclose(self.mean, expected, abs_tol=1e-12) else math.inf


def _estimate(x: np.ndarray) -> Estimate:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return Estimate(math.nan, math.nan)
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
    return Estimate(float(x.mean()), se)


def _keys(rng: RngStream, trials: int, kind: int) -> np.ndarray:
    domain = (rng.domain << 8) | kind
    return stream_keys(rng.seed, rng.stream_id + np.arange(trials, dtype=np.int64), domain)


# ------------------------------------------------------------------ walks


@dataclass(frozen=True)
class WalkReport:
    trials: int
    absorbed_right: int
    fraction_right: Estimate
    steps_right: Estimate
    steps_left: Estimate


def walk_trials(prob: WalkProblem, trials: int, rng: RngStream) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial ``(absorbed_right, steps)`` arrays."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    keys = _keys(rng, trials, _DOMAIN_WALK)
    pos = np.full(trials, prob.start, dtype=np.int64)
    steps = np.zeros(trials, dtype=np.int64)
    active = np.flatnonzero((pos > prob.left) & (pos < prob.right))
    p = float(prob.p)
    while active.size:
        u = keyed_uniforms(keys[active], steps[active])
        pos[active] += np.where(u < p, 1, -1)
        steps[active] += 1
        a = pos[active]
        active = active[(a > prob.left) & (a < prob.right)]
    return pos == prob.right, steps


def sim_walk(prob: WalkProblem, trials: int, rng: RngStream) -> WalkReport:
    """Absorption fraction at the right wall and conditional mean steps."""
    right, steps = walk_trials(prob, trials, rng)
    return WalkReport(
        trials=trials,
        absorbed_right=int(right.sum()),
        fraction_right=_estimate(right),
        steps_right=_estimate(steps[right]),
        steps_left=_estimate(steps[~right]),
    )


# ------------------------------------------------------------------ gates


@dataclass(frozen=True)
class StageProbs:
    """Raw per-use success probabilities; lets tests drive the loops at p = 1."""

    p_a: float
    p_r: float
    p_t: float = 1.0

    @classmethod
    def of(cls, cfg: GateConfig) -> "StageProbs":
        return cls(float(cfg.p_a), float(cfg.p_r), float(cfg.p_t))


@dataclass
class TrialOutcomes:
    """Per-trial integer outcomes; order-independent sums give every report."""

    lost: np.ndarray
    add_uses: np.ndarray
    re_uses: np.ndarray
    gate_attempts: np.ndarray
    lost_uses: np.ndarray
    lost_walks: np.ndarray
    add_walks: np.ndarray
    re_fails: np.ndarray
    ups: np.ndarray
    downs: np.ndarray
    min_width: np.ndarray
    max_width: np.ndarray
    draws: np.ndarray
    extra: dict = field(default_factory=dict)

    def subset(self, idx) -> "TrialOutcomes":
        arrays = {k: getattr(self, k)[idx] for k in self.__dataclass_fields__ if k != "extra"}
        return TrialOutcomes(**arrays, extra={k: v[idx] for k, v in self.extra.items()})


def run_trials(
    kind: Literal["cnot", "z90"],
    probs: StageProbs,
    w: int,
    trials: int,
    rng: RngStream,
    first: Literal["control", "target"] = "control",
) -> TrialOutcomes:
    """Simulate ``trials`` independent executions of the gate loop."""
    if w < 1:
        raise ValueError(f"width must be >= 1, got {w}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if first not in ("control", "target"):
        raise ValueError("first must be 'control' or 'target'")
    cnot = kind == "cnot"
    if kind not in ("cnot", "z90"):
        raise ValueError(f"unknown gate kind {kind!r}")
    # Losses restart the walk, so a zero success probability would never terminate.
    if probs.p_a <= 0 or (cnot and probs.p_t <= 0) or (w > 1 and probs.p_r <= 0):
        raise ValueError("stage success probabilities must be positive")
    keys = _keys(rng, trials, _DOMAIN_CNOT if cnot else _DOMAIN_Z90)

    n = trials
    phase = np.full(n, ADD, dtype=np.int8)
    pending = np.full(n, 2 if cnot else 1, dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    steps = np.zeros(n, dtype=np.int64)
    draws = np.zeros(n, dtype=np.int64)
    out = {k: np.zeros(n, dtype=np.int64) for k in
           ("add_uses", "re_uses", "gate_attempts", "lost_uses", "lost_walks", "add_walks", "re_fails",
            "ups", "downs",
            "control_fail", "target_fail")}
    lost = np.zeros(n, dtype=bool)
    min_width = np.full(n, w, dtype=np.int64)
    max_width = np.full(n, w, dtype=np.int64)
    fail_first = out["control_fail"] if first == "control" else out["target_fail"]
    fail_second = out["target_fail"] if first == "control" else out["control_fail"]

    active = np.arange(n)
    while active.size:
        u = keyed_uniforms(keys[active], draws[active])
        draws[active] += 1
        ph = phase[active]

        # ADD stage: walk on w + pos components, pos in (-w, 1).
        i = active[ph == ADD]
        if i.size:
            up = u[ph == ADD] < probs.p_a
            pos[i] += np.where(up, 1, -1)
            steps[i] += 1
            out["ups"][i] += up
            out["downs"][i] += ~up
            width = w + pos[i]
            max_width[i] = np.maximum(max_width[i], width)
            min_width[i] = np.minimum(min_width[i], width)
            done = i[pos[i] == 1]
            out["add_uses"][done] += steps[done]
            out["add_walks"][done] += 1
            pending[done] -= 1
            pos[done] = 0
            steps[done] = 0
            nxt = done[pending[done] == 0]
            if cnot:
                phase[nxt] = TEL1
            else:
                phase[nxt] = RE
                pos[nxt] = 1
            dead = i[pos[i] == -w]
            lost[dead] = True
            out["lost_uses"][dead] += steps[dead]
            out["lost_walks"][dead] += 1
            pos[dead] = 0
            steps[dead] = 0

        # Gate teleporters, one draw each.
        for stage, tally in ((TEL1, fail_first), (TEL2, fail_second)):
            sel = ph == stage
            i = active[sel]
            if not i.size:
                continue
            if stage == TEL1:
                out["gate_attempts"][i] += 1
            ok = u[sel] < probs.p_t
            good, bad = i[ok], i[~ok]
            if stage == TEL1:
                phase[good] = TEL2
            else:
                phase[good] = RE
                pos[good] = 1
            tally[bad] += 1
            phase[bad] = ADD
            pending[bad] = 1

        # RE stage: walk on pos components from 1 towards w.
        sel = ph == RE
        i = active[sel]
        if i.size:
            up = u[sel] < probs.p_r
            pos[i] += np.where(up, 1, -1)
            steps[i] += 1
            out["ups"][i] += up
            out["downs"][i] += ~up
            min_width[i] = np.minimum(min_width[i], pos[i])
            ok = i[pos[i] == w]
            out["re_uses"][ok] += steps[ok]
            phase[ok] = DONE
            bad = i[pos[i] == 0]
            out["re_uses"][bad] += steps[bad]
            out["re_fails"][bad] += 1
            phase[bad] = ADD
            pending[bad] = 1
            pos[np.concatenate([ok, bad])] = 0
            steps[np.concatenate([ok, bad])] = 0

        # Re-encoding to width 1 is immediate.
        if w == 1:
            sel = phase[active] == RE
            phase[active[sel]] = DONE
            pos[active[sel]] = 0
        active = active[phase[active] != DONE]

    extra = {"control_fail": out.pop("control_fail"), "target_fail": out.pop("target_fail")}
    return TrialOutcomes(lost=lost, min_width=min_width, max_width=max_width, draws=draws,
                         extra=extra, **out)


@dataclass(frozen=True)
class RunReport:
    trials: int
    successes: int
    logical_losses: int
    success: Estimate
    encoder_uses_add: Estimate
    encoder_uses_re: Estimate
    teleporter_uses_gate: Estimate
    bell_states: Estimate
    elim_states: Estimate
    n_cs: Estimate
    n_elim: Estimate
    encoder_uses_lost: Estimate


def summarize(
    o: TrialOutcomes, cfg: Optional[GateConfig] = None, model: FactoryCostModel | None = None
) -> RunReport:
    """Aggregate per-trial outcomes.  State and primitive counts need ``cfg``."""
    add, re_, tg = o.add_uses, o.re_uses, o.gate_attempts
    if cfg is not None:
        model = model or FactoryCostModel()
        ab, ae = model.resource_cost(cfg.n_a, dual_rail=True)
        rb, re_e = model.resource_cost(cfg.n_r, dual_rail=True)
        gb, ge = model.gate_attempt_cost(cfg.n_t)
        bell = add * ab + re_ * rb + tg * gb
        elim = add * ae + re_ * re_e + tg * ge
        n_cs = 2 * cfg.n_a * add + 2 * cfg.n_r * re_ + (cfg.n_t**2 + cfg.n_t) * tg
        n_el = (cfg.n_a - 1) * add + (cfg.n_r - 1) * re_ + 2 * (cfg.n_t - 1) * tg
    else:
        bell = elim = n_cs = n_el = np.full(add.shape, np.nan)
    losses = int(o.lost.sum())
    return RunReport(
        trials=int(o.lost.size),
        successes=int(o.lost.size) - losses,
        logical_losses=losses,
        success=_estimate(~o.lost),
        encoder_uses_add=_estimate(add),
        encoder_uses_re=_estimate(re_),
        teleporter_uses_gate=_estimate(tg),
        bell_states=_estimate(bell),
        elim_states=_estimate(elim),
        n_cs=_estimate(n_cs),
        n_elim=_estimate(n_el),
        encoder_uses_lost=_estimate(o.lost_uses),
    )


def sim_z90(
    cfg: GateConfig,
    trials: int,
    rng: RngStream,
    probs: StageProbs | None = None,
    model: FactoryCostModel | None = None,
) -> RunReport:
    """Single-qubit (Z90) gate loop at width ``cfg.w``."""
    o = run_trials("z90", probs or StageProbs.of(cfg), cfg._width(), trials, rng)
    return summarize(o, cfg, model)


def sim_cnot(
    cfg: GateConfig,
    trials: int,
    rng: RngStream,
    probs: StageProbs | None = None,
    model: FactoryCostModel | None = None,
    first: Literal["control", "target"] = "control",
) -> RunReport:
    """Encoded CNOT loop at width ``cfg.w``; gate teleporters run control first by default."""
    o = run_trials("cnot", probs or StageProbs.of(cfg), cfg._width(), trials, rng, first)
    return summarize(o, cfg, model)


# ------------------------------------------------------------------ comparison


class ReportRow(NamedTuple):
    quantity: str
    source: str
    analytic: float
    empirical: float
    stderr: float
    z: float
    gated: bool


def _row(name: str, source: str, value: float, est: Estimate, gated: bool) -> ReportRow:
    return ReportRow(name, source, float(value), est.mean, est.stderr, est.z(float(value)), gated)


def mc_report(
    cfg: GateConfig,
    trials: int,
    rng: RngStream,
    model: FactoryCostModel | None = None,
) -> list[ReportRow]:
    """Analytic vs simulated values for one configuration.

    ``gated`` rows compare against exact expectations and should satisfy
    ``|z| <= 4``.  Exponent-form success probabilities (lower bounds of the
    exact ones) and published reference values are listed but not gated.
    """
    if trials < 1000:
        raise ValueError("mc_report needs at least 1000 trials")
    cnot = sim_cnot(cfg, trials, rng, model=model)
    z90 = sim_z90(cfg, trials, rng, model=model)
    uses = gates.expected_uses(cfg)
    single = gates.expected_uses_single(cfg)
    prim = gates.primitive_counts(cfg, uses)
    bell, elim = gates.factory_cost(cfg, model, uses)
    rows = [
        _row("p_gate_cnot_exact", "formula", gates.p_gate_cnot_exact(cfg), cnot.success, True),
        _row("p_gate_cnot", "formula-bound", gates.p_gate_cnot(cfg), cnot.success, False),
        _row("p_gate_single_exact", "formula", gates.p_gate_single_exact(cfg), z90.success, True),
        _row("p_gate_single", "formula-bound", gates.p_gate_single(cfg), z90.success, False),
        _row("e_add", "formula", uses.e_add, cnot.encoder_uses_add, True),
        _row("e_re", "formula", uses.e_re, cnot.encoder_uses_re, True),
        _row("t_g", "formula", uses.t_g, cnot.teleporter_uses_gate, True),
        _row("z90_e_add", "formula", single.e_add, z90.encoder_uses_add, True),
        _row("z90_e_re", "formula", single.e_re, z90.encoder_uses_re, True),
        _row("n_cs", "formula", prim.n_cs, cnot.n_cs, True),
        _row("n_elim", "formula", prim.n_elim, cnot.n_elim, True),
        _row("bell_states", "formula", bell, cnot.bell_states, True),
        _row("elim_states", "formula", elim, cnot.elim_states, True),
    ]
    if (cfg.n_a, cfg.n_r, cfg.n_t, cfg.w) == (3, 2, 1, 4):
        for key, ref in RESOURCES_W4.items():
            est = {"t_g": cnot.teleporter_uses_gate, "e_add": cnot.encoder_uses_add,
                   "e_re": cnot.encoder_uses_re}[key]
            rows.append(_row(f"{key}_reference", "paper-reference", ref.value, est, False))
    rows.append(_row("n_cs_reference", "paper-reference", PRIMITIVES_95["n_cs"].value, cnot.n_cs, False))
    rows.append(_row("n_elim_reference", "paper-reference", PRIMITIVES_95["n_elim"].value, cnot.n_elim, False))
    return rows


def walk_reference(prob: WalkProblem) -> tuple[float, float]:
    """Markov-chain absorption probability and conditional mean steps at the right wall."""
    sol = markov_exact(prob)
    return sol.absorb_prob_right, sol.mean_steps_right

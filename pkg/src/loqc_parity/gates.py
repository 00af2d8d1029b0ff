"""Encoded-gate success probabilities, gate budgets and resource accounting."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from typing import NamedTuple, Optional

from .walk import DomainError, log_p_add, mean_encoder_uses, p_add, p_re

W_MAX = 200


@dataclass(frozen=True)
class TeleporterSpec:
    """Teleporter ``T_{n/(n+1)}``."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"teleporter order must be a positive integer, got {self.n}")

    @property
    def prob(self) -> Fraction:
        return Fraction(self.n, self.n + 1)


def teleporter_prob(t: TeleporterSpec | int) -> Fraction:
    if not isinstance(t, TeleporterSpec):
        t = TeleporterSpec(t)
    return t.prob


@dataclass(frozen=True)
class GateConfig:
    """Teleporter orders for the adding, re-encoding and gate stages.

    ``w`` may be left as ``None`` when the width is to be solved for.
    """

    n_a: int
    n_r: int
    n_t: int
    w: Optional[int] = None
    p_tot: float = 0.95

    def __post_init__(self):
        for name in ("n_a", "n_r", "n_t"):
            TeleporterSpec(getattr(self, name))
        if self.w is not None and self.w < 1:
            raise DomainError(f"encoding width must be >= 1, got {self.w}")
        if not 0 < self.p_tot <= 1:
            raise DomainError(f"p_tot must lie in (0, 1], got {self.p_tot}")

    @property
    def p_a(self) -> Fraction:
        return teleporter_prob(self.n_a)

    @property
    def p_r(self) -> Fraction:
        return teleporter_prob(self.n_r)

    @property
    def p_t(self) -> Fraction:
        return teleporter_prob(self.n_t)

    def with_w(self, w: int) -> "GateConfig":
        return replace(self, w=w)

    def _width(self) -> int:
        if self.w is None:
            raise DomainError("this quantity needs a concrete encoding width w")
        return self.w

    def stage_probs(self) -> tuple[Fraction, Fraction, Fraction]:
        """``(P_add, P_re, P_t^2 P_re)`` at the configured width."""
        w = self._width()
        a = p_add(self.p_a, w)
        r = p_re(self.p_r, w)
        return a, r, self.p_t**2 * r


class ExpectedUses(NamedTuple):
    e_add: float
    e_re: float
    t_g: float


class PrimitiveCounts(NamedTuple):
    n_cs: float
    n_elim: float


@dataclass(frozen=True)
class ResourceCount:
    e_add: float
    e_re: float
    t_g: float
    n_cs: float
    n_elim: float
    bell_states: float
    elim_states: float


# ---------------------------------------------------------------- success


def p_gate_single(cfg: GateConfig) -> float:
    """Single-qubit gate success in the exponent form ``P_add^(1/P_re)``."""
    a, r, _ = cfg.stage_probs()
    return float(a) ** (1 / float(r))


def p_gate_cnot(cfg: GateConfig) -> float:
    """CNOT success ``P_add^(1 + 1/(P_t^2 P_re))``; also the encoded-gate figure of merit."""
    a, _, q = cfg.stage_probs()
    return float(a) ** (1 + 1 / float(q))


def p_gate_single_exact(cfg: GateConfig) -> Fraction:
    """Exact success probability of the single-qubit add/re-encode loop.

    Attempt ``k`` needs ``k`` successful adds, so the success probability is
    ``E[P_add^K]`` with ``K`` geometric in ``P_re``:  ``a r / (1 - a (1 - r))``.
    The exponent form :func:`p_gate_single` is its Jensen lower bound.
    """
    a, r, _ = cfg.stage_probs()
    return a * r / (1 - a * (1 - r))


def p_gate_cnot_exact(cfg: GateConfig) -> Fraction:
    """Exact success probability of the CNOT loop: two initial adds then one per retry."""
    a, _, q = cfg.stage_probs()
    return a * a * q / (1 - a * (1 - q))


# ---------------------------------------------------------------- budgets


def gate_budget(cfg: GateConfig) -> float:
    """Number of encoded CNOTs affordable at total success ``cfg.p_tot``.

    ``math.inf`` when ``P_add`` is 1 to machine precision.
    """
    w = cfg._width()
    if cfg.p_tot == 1:
        return 0.0
    r = p_re(cfg.p_r, w)
    exponent = 1 + 1 / float(cfg.p_t**2 * r)
    log_a = log_p_add(cfg.p_a, w)
    if log_a == 0:
        return math.inf
    return math.log(cfg.p_tot) / (exponent * log_a)


def gate_budget_half_encoder(w: int, p_t: float, p_tot: float) -> float:
    """Budget when both encoding stages use ``T_{1/2}`` (P_add = w/(w+1), P_re = 1/w)."""
    return math.log(p_tot) / ((w / p_t**2 + 1) * (math.log(w) - math.log(w + 1)))


def solve_min_w(target: float, cfg: GateConfig, w_max: int = W_MAX) -> Optional[int]:
    """Smallest width whose CNOT success reaches ``target``; ``None`` if none up to ``w_max``."""
    if not 0 < target < 1:
        raise DomainError(f"target must lie in (0, 1), got {target}")
    for w in range(1, w_max + 1):
        if p_gate_cnot(cfg.with_w(w)) >= target:
            return w
    return None


# ---------------------------------------------------------------- resources


def _stage_means(cfg: GateConfig):
    w = cfg._width()
    n_add = mean_encoder_uses("add", cfg.p_a, w)
    n_re = mean_encoder_uses("re_success", cfg.p_r, w)
    n_fre = mean_encoder_uses("re_fail", cfg.p_r, w)
    return float(n_add), float(n_re), 0.0 if n_fre is None else float(n_fre)


def expected_uses(cfg: GateConfig) -> ExpectedUses:
    """Mean adding-encoder uses, re-encoder uses and gate attempts per encoded CNOT."""
    _, r, q = cfg.stage_probs()
    n_add, n_re, n_fre = _stage_means(cfg)
    t_g = 1 / float(q)
    e_add = (t_g + 1) * n_add
    e_re = (1 / float(r) - 1) * n_fre + n_re
    return ExpectedUses(e_add, e_re, t_g)


def expected_uses_single(cfg: GateConfig) -> ExpectedUses:
    """Same accounting for the single-qubit (Z90) loop; it has no gate teleporters."""
    _, r, _ = cfg.stage_probs()
    n_add, n_re, n_fre = _stage_means(cfg)
    attempts = 1 / float(r)
    return ExpectedUses(attempts * n_add, (attempts - 1) * n_fre + n_re, 0.0)


def primitive_counts(cfg: GateConfig, uses: ExpectedUses | None = None) -> PrimitiveCounts:
    """Physical CS gates and elimination circuits per encoded CNOT."""
    e_add, e_re, t_g = uses if uses is not None else expected_uses(cfg)
    n_a, n_r, n_t = cfg.n_a, cfg.n_r, cfg.n_t
    n_cs = 2 * n_a * e_add + 2 * n_r * e_re + (n_t**2 + n_t) * t_g
    n_elim = (n_a - 1) * e_add + (n_r - 1) * e_re + 2 * (n_t - 1) * t_g
    return PrimitiveCounts(n_cs, n_elim)


# ---------------------------------------------------------------- factory


class ConfigError(ValueError):
    """Invalid or unknown configuration key."""


@dataclass(frozen=True)
class FactoryCostModel:
    """Cost of teleporter resources in factory Bell and elimination states.

    ``|t_1>`` is ``seed_bell`` Bell states.  ``|t_{k+1}>`` splices a further
    ``bell_per_step`` Bell states and ``elim_per_step`` elimination states onto
    ``|t_k>``; the splice uses ``link_success``-probability links, one per rail
    of each of the two spliced qubits, and any link failure discards the whole
    partial resource.  A resource is consumed by every teleporter use,
    successful or not.
    """

    link_success: float = 0.5
    seed_bell: float = 1.0
    bell_per_step: float = 1.0
    elim_per_step: float = 1.0
    spliced_qubits: int = 2
    dual_rail_bell_factor: float = 1.0
    cs_bell: float = 0.0
    cs_elim: float = 0.0

    def __post_init__(self):
        if not 0 < self.link_success <= 1:
            raise ConfigError("link_success must lie in (0, 1]")
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ConfigError(f"{f.name} must be non-negative")

    @classmethod
    def from_dict(cls, data: dict) -> "FactoryCostModel":
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"unknown factory cost parameter {key!r}")
        return cls(**{k: float(v) if k != "spliced_qubits" else int(v) for k, v in data.items()})

    def to_dict(self) -> dict:
        return asdict(self)

    def resource_cost(self, n: int, dual_rail: bool) -> tuple[float, float]:
        """Expected ``(bell, elim)`` states consumed to obtain one ``|t_n>``."""
        rails = 2 if dual_rail else 1
        bell_factor = self.dual_rail_bell_factor if dual_rail else 1.0
        s = self.link_success ** (self.spliced_qubits * rails)
        bell, elim = self.seed_bell * bell_factor, 0.0
        for _ in range(n - 1):
            bell = (bell + self.bell_per_step * bell_factor) / s
            elim = (elim + self.elim_per_step) / s
        if dual_rail:
            bell += n * self.cs_bell
            elim += n * self.cs_elim
        return bell, elim

    def gate_attempt_cost(self, n_t: int) -> tuple[float, float]:
        """Control uses a single-rail teleporter, target a dual-rail one."""
        cb, ce = self.resource_cost(n_t, dual_rail=False)
        tb, te = self.resource_cost(n_t, dual_rail=True)
        n_cs = n_t**2 + n_t
        return cb + tb + n_cs * self.cs_bell, ce + te + n_cs * self.cs_elim


def factory_cost(
    cfg: GateConfig, model: FactoryCostModel | None = None, uses: ExpectedUses | None = None
) -> tuple[float, float]:
    """Bell and elimination states consumed per successful encoded CNOT."""
    model = model or FactoryCostModel()
    e_add, e_re, t_g = uses if uses is not None else expected_uses(cfg)
    ab, ae = model.resource_cost(cfg.n_a, dual_rail=True)
    rb, re_ = model.resource_cost(cfg.n_r, dual_rail=True)
    gb, ge = model.gate_attempt_cost(cfg.n_t)
    return e_add * ab + e_re * rb + t_g * gb, e_add * ae + e_re * re_ + t_g * ge


def resource_count(cfg: GateConfig, model: FactoryCostModel | None = None) -> ResourceCount:
    uses = expected_uses(cfg)
    n_cs, n_elim = primitive_counts(cfg, uses)
    bell, elim = factory_cost(cfg, model, uses)
    return ResourceCount(*uses, n_cs, n_elim, bell, elim)


class FactoryRow(NamedTuple):
    n_a: int
    n_r: int
    n_t: int
    w: Optional[int]
    p_enc: float
    bell_states: float
    elim_states: float


def factory_grid(
    target: float = 0.95,
    orders=range(2, 6),
    n_t: int = 1,
    model: FactoryCostModel | None = None,
) -> list[FactoryRow]:
    """Factory consumption over adding/re-encoding orders at the minimal width reaching ``target``."""
    rows = []
    for n_a in orders:
        for n_r in orders:
            cfg = GateConfig(n_a, n_r, n_t)
            w = solve_min_w(target, cfg)
            if w is None:
                rows.append(FactoryRow(n_a, n_r, n_t, None, math.nan, math.inf, math.inf))
                continue
            cfg = cfg.with_w(w)
            bell, elim = factory_cost(cfg, model)
            rows.append(FactoryRow(n_a, n_r, n_t, w, p_gate_cnot(cfg), bell, elim))
    return rows


# ---------------------------------------------------------------- KLM baseline


def f_z_klm(f):
    """Logical teleportation failure ``f^2 (2 - f) / (1 - f (1 - f))`` of the two-qubit code."""
    if not 0 <= f <= 1:
        raise DomainError(f"failure probability must lie in [0, 1], got {f}")
    return f * f * (2 - f) / (1 - f * (1 - f))


def klm_concat(f0, levels: int):
    """Iterate :func:`f_z_klm` ``levels`` times; returns ``(f, (1 - f)^2)``."""
    if levels < 0:
        raise DomainError("levels must be non-negative")
    f = f0
    for _ in range(levels):
        f = f_z_klm(f)
    return f, (1 - f) ** 2


KLM_TELEPORTED_CS_BOUND = 250
KLM_ELIM_PER_TELEPORTED_CS = 4
KLM_CS_PER_TELEPORTED_CS = 9


def klm_resource_bound() -> tuple[int, int]:
    """Upper bounds (elimination circuits, CS circuits) for one KLM encoded CS."""
    return (
        KLM_TELEPORTED_CS_BOUND * KLM_ELIM_PER_TELEPORTED_CS,
        KLM_TELEPORTED_CS_BOUND * KLM_CS_PER_TELEPORTED_CS,
    )

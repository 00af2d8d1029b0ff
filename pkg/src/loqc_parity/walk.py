"""Absorbing random walks modelling incremental encoding.

Each encoder attempt moves the width of an encoded qubit by +1 (success,
probability ``p``) or -1 (failure).  Adding a component is a walk from 0 with
absorbing walls at ``-w`` (all components lost) and ``+1`` (component added);
re-encoding is a walk from 1 with walls at 0 and ``w``.

Closed forms are evaluated in exact rational arithmetic whenever ``p`` is a
:class:`fractions.Fraction` (every ``T_{n/(n+1)}`` teleporter has rational
success probability) and in floating point otherwise.  :func:`markov_exact`
solves the absorbing chain directly and is the reference the closed forms are
checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, NamedTuple, Optional, Union

import numpy as np

Real = Union[float, Fraction]

#: |p - 1/2| below which the symmetric-walk branch is used.
HALF_TOL = 1e-12

Stage = Literal["add", "re_success", "re_fail"]


class DomainError(ValueError):
    """Raised when a walk quantity is requested outside its domain."""


@dataclass(frozen=True)
class WalkProblem:
    """Walk with step-up probability ``p`` on ``left..right`` started at ``start``."""

    p: Real
    left: int
    right: int
    start: int

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise DomainError(f"step probability must lie in [0, 1], got {self.p}")
        if self.left >= self.right:
            raise DomainError(f"need left < right, got L={self.left}, R={self.right}")
        if not self.left <= self.start <= self.right:
            raise DomainError(
                f"start {self.start} outside [{self.left}, {self.right}]"
            )

    @property
    def beta(self) -> Real:
        return (1 - self.p) / self.p


class MarkovSolution(NamedTuple):
    absorb_prob_right: float
    mean_steps_right: float
    mean_steps_left: float


def _is_half(p: Real) -> bool:
    if isinstance(p, Fraction):
        return p == Fraction(1, 2)
    return abs(p - 0.5) < HALF_TOL


def _require_open(p: Real):
    if not 0 < p < 1:
        raise DomainError(f"closed forms need 0 < p < 1, got {p}")


def _one_minus_pow(beta: Real, k: int) -> Real:
    """``1 - beta**k`` without cancellation when beta is close to 1."""
    if isinstance(beta, Fraction):
        return 1 - beta**k
    return -math.expm1(k * math.log(beta))


def absorb_prob(prob: WalkProblem) -> Real:
    """Probability of reaching ``right`` before ``left``."""
    p, left, right, m = prob.p, prob.left, prob.right, prob.start
    _require_open(p)
    if _is_half(p):
        value = Fraction(m - left, right - left)
        return value if isinstance(p, Fraction) else float(value)
    beta = prob.beta
    return _one_minus_pow(beta, m - left) / _one_minus_pow(beta, right - left)


def p_add(p: Real, w: int) -> Real:
    """Probability that the adding stage gains a component before losing all ``w``."""
    if w < 0:
        raise DomainError(f"width must be non-negative, got {w}")
    if w == 0:
        return Fraction(0) if isinstance(p, Fraction) else 0.0
    return absorb_prob(WalkProblem(p, -w, 1, 0))


def p_re(p: Real, w: int) -> Real:
    """Probability that re-encoding grows a single component back to ``w``."""
    if w < 1:
        raise DomainError(f"re-encoding needs w >= 1, got {w}")
    return absorb_prob(WalkProblem(p, 0, w, 1))


def log_p_add(p: Real, w: int) -> float:
    """``log(p_add(p, w))`` accurate even when ``p_add`` rounds to 1.0."""
    _require_open(p)
    if w < 1:
        raise DomainError(f"width must be >= 1, got {w}")
    if _is_half(p):
        return math.log(w) - math.log(w + 1)
    beta = float(prob_beta(p))
    if beta < 1:
        return math.log1p(-beta**w) - math.log1p(-beta ** (w + 1))
    return math.log(float(p_add(p, w)))


def prob_beta(p: Real) -> Real:
    return (1 - p) / p


def markov_exact(prob: WalkProblem) -> MarkovSolution:
    """Solve the absorbing chain on the interior sites by a dense linear solve.

    Returns the probability of absorption at ``right`` and the mean number of
    steps conditional on absorption at each wall (NaN when that wall has zero
    probability).
    """
    p = float(prob.p)
    left, right, m = prob.left, prob.right, prob.start
    if right - left < 1:
        raise DomainError("degenerate lattice")
    if m == right:
        return MarkovSolution(1.0, 0.0, math.nan)
    if m == left:
        return MarkovSolution(0.0, math.nan, 0.0)

    n = right - left - 1
    # Interior sites left+1 .. right-1 map to 0 .. n-1.
    a = np.eye(n)
    idx = np.arange(n - 1)
    a[idx, idx + 1] -= p
    a[idx + 1, idx] -= 1 - p
    to_right = np.zeros(n)
    to_right[-1] = p
    to_left = np.zeros(n)
    to_left[0] = 1 - p

    h_right = np.linalg.solve(a, to_right)
    h_left = np.linalg.solve(a, to_left)
    # E[T; absorbed at wall] satisfies (I - Q) g = h.
    g_right = np.linalg.solve(a, h_right)
    g_left = np.linalg.solve(a, h_left)

    i = m - left - 1
    pr, pl = h_right[i], h_left[i]
    mean_r = g_right[i] / pr if pr > 0 else math.nan
    mean_l = g_left[i] / pl if pl > 0 else math.nan
    return MarkovSolution(float(pr), float(mean_r), float(mean_l))


def mean_passage_closed(prob: WalkProblem) -> Real:
    """Mean steps to ``right`` conditional on not hitting ``left`` (``p > 1/2`` only)."""
    p, left, right, m = prob.p, prob.left, prob.right, prob.start
    _require_open(p)
    if p <= Fraction(1, 2) or _is_half(p):
        raise DomainError(
            "closed-form passage time is only available for p > 1/2; use markov_exact"
        )
    if m == left:
        raise DomainError("walk started on the left wall never reaches the right wall")
    beta = prob.beta
    bl, bm, br = beta**left, beta**m, beta**right
    num = (
        right * (bl - bm) * (bl + br)
        - m * (bl + bm) * (bl - br)
        + 2 * left * (beta ** (left + m) - beta ** (left + right))
    )
    den = (2 * p - 1) * (bl - bm) * (bl - br)
    return num / den


def _n_add(p: Real, w: int) -> Real:
    b = prob_beta(p)
    bw = b**w
    num = (1 - bw) * (1 + b ** (w + 1)) - 2 * w * bw * (1 - b)
    return num / ((2 * p - 1) * (1 - bw) * (1 - b ** (w + 1)))


def _n_re(p: Real, w: int) -> Real:
    b = prob_beta(p)
    bw = b**w
    num = w * (1 - b) * (1 + bw) - (1 + b) * (1 - bw)
    return num / ((2 * p - 1) * (1 - b) * (1 - bw))


def _n_fre(p: Real, w: int) -> Real:
    b = prob_beta(p)
    bw = b**w
    num = (bw + b) * (bw - 1) - 2 * w * (b ** (w + 1) - bw)
    return num / ((2 * p - 1) * (bw - b) * (1 - bw))


def mean_encoder_uses(stage: Stage, p: Real, w: int) -> Optional[Real]:
    """Mean encoder uses in one pass of an algorithm stage.

    ``add``: successful pass of the adding stage at width ``w``.
    ``re_success``: successful re-encoding from one component to ``w``.
    ``re_fail``: failed re-encoding attempt; ``None`` when ``w == 1`` because
    re-encoding to width 1 cannot fail.

    The closed forms hold for ``p > 1/2``; other ``p`` fall back to
    :func:`markov_exact` (for ``re_fail`` this is the mirrored walk).
    """
    if w < 1:
        raise DomainError(f"width must be >= 1, got {w}")
    if stage not in ("add", "re_success", "re_fail"):
        raise ValueError(f"unknown stage {stage!r}")
    if stage == "re_fail" and w == 1:
        return None
    if stage != "add" and w == 1:
        return Fraction(0) if isinstance(p, Fraction) else 0.0

    _require_open(p)
    if p > Fraction(1, 2) and not _is_half(p):
        value = {"add": _n_add, "re_success": _n_re, "re_fail": _n_fre}[stage](p, w)
        return value
    if stage == "add":
        return markov_exact(WalkProblem(p, -w, 1, 0)).mean_steps_right
    if stage == "re_success":
        return markov_exact(WalkProblem(p, 0, w, 1)).mean_steps_right
    # Mirror image: start at -1 between -w and 0 with the step directions swapped.
    return markov_exact(WalkProblem(1 - p, -w, 0, -1)).mean_steps_right

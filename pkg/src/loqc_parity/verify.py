"""Golden checks of the optical and parity-code simulators."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np
import sympy

from . import fock, parity
from .rng import RngStream

ELIM_PROBABILITY = Fraction(12, 441)
SEVEN_TERM = (
    sympy.sqrt(3) / 7, -3 * sympy.sqrt(2) / 7, sympy.sqrt(3) / 7, 3 * sympy.sqrt(2) / 7,
    sympy.Rational(1, 7), -sympy.sqrt(3) / 7, sympy.sqrt(3) / 7,
)
FIVE_TERM = tuple(sympy.sqrt(2) / 21 * c for c in (1, 1, sympy.sqrt(2), -1, 1))
DUAL_SUPPORT = ((1, 0, 0, 0, 1, 0, 1, 1), (0, 1, 1, 0, 1, 0, 0, 1), (0, 1, 1, 1, 0, 1, 0, 0))

FIDELITY_TOL = 1e-10
COEFF_TOL = 1e-12


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


def _sorted_amplitudes(state: fock.FockState) -> tuple:
    return tuple(state.amplitudes[k] for k in sorted(state.amplitudes))


def _coeffs_match(state: fock.FockState, expected) -> tuple[bool, float]:
    got = _sorted_amplitudes(state)
    if len(got) != len(expected):
        return False, math.inf
    err = max(abs(complex(sympy.N(g - e, 30))) for g, e in zip(got, expected))
    return err <= COEFF_TOL, err


def check_elimination_single() -> list[Check]:
    state, prob = fock.elim_resource("single", exact=True)
    fid = fock.fidelity(state, fock.tn_reference(2))
    ok_prob = Fraction(str(prob)) == ELIM_PROBABILITY
    trace = fock.elimination_trace("single", exact=True)
    ok7, err7 = _coeffs_match(trace["mixed"], SEVEN_TERM)
    ok5, err5 = _coeffs_match(trace["conditioned"], FIVE_TERM)
    return [
        Check("elimination_single_state", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.15f}"),
        Check("elimination_single_probability", ok_prob, f"probability {prob} (12/441 = 4/147)"),
        Check("elimination_seven_term", ok7, f"max coefficient error {err7:.3g}"),
        Check("elimination_five_term", ok5, f"max coefficient error {err5:.3g}"),
    ]


def check_elimination_dual() -> list[Check]:
    state, prob = fock.elim_resource("dual", exact=True)
    ref = fock.make_state([(k, 1) for k in DUAL_SUPPORT], labels=state.labels)
    fid = fock.fidelity(state, ref)
    ok_prob = Fraction(str(prob)) == ELIM_PROBABILITY
    return [
        Check("elimination_dual_state", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.15f}"),
        Check("elimination_dual_probability", ok_prob, f"probability {prob}"),
    ]


def check_teleporter_resources(n_max: int = 5) -> list[Check]:
    out = []
    for n in range(1, n_max + 1):
        fid = fock.fidelity(fock.build_tn(n), fock.tn_reference(n))
        out.append(Check(f"build_tn_{n}", fid >= 1 - FIDELITY_TOL, f"fidelity {fid:.15f}"))
    return out


CNOT = np.eye(4)[[0, 1, 3, 2]]
_S = 1 / math.sqrt(2)
LOGICAL_INPUTS = (
    ((1, 0), (1, 0)),
    ((1, 0), (0, 1)),
    ((0, 1), (1, 0)),
    ((0, 1), (0, 1)),
    ((_S, _S), (1, 0)),
    ((0.6, 0.8j), (_S, -_S)),
)


def _overlap_error(expected: np.ndarray, got: np.ndarray) -> float:
    return 1 - abs(np.vdot(expected, got)) / (np.linalg.norm(expected) * np.linalg.norm(got))


def check_parity_code(w_max: int = 4) -> list[Check]:
    alpha, beta = 0.6, 0.8j
    rng = RngStream(seed=0, domain=3)
    worst = {"encoder": 0.0, "recover": 0.0, "cnot": 0.0, "z90": 0.0}
    for w in range(1, 8):
        q = parity.encode_logical(alpha, beta, w)
        ref = parity.encode_logical(alpha, beta, w + 1).register.vector
        for t in range(w):
            grown = parity.encoder_step(q, t)
            worst["encoder"] = max(
                worst["encoder"],
                _overlap_error(ref, grown.register.vector),
                _overlap_error(np.array([alpha, beta]), parity.logical_amplitudes(grown)),
            )
        if w >= 2:
            for idx, outcome in itertools.product(range(w), (0, 1)):
                r = parity.z_measure_recover(q, idx, outcome)
                ref = parity.encode_logical(alpha, beta, w - 1).register.vector
                worst["recover"] = max(worst["recover"], _overlap_error(ref, r.register.vector))
    for wc, wt in itertools.product(range(1, w_max + 1), repeat=2):
        for (a, b), (c, d) in LOGICAL_INPUTS:
            for forced in (None, 0, 1):
                outcomes = None if forced is None else [forced] * (wc - 1)
                ctl = parity.encode_logical(a, b, wc)
                tgt = parity.encode_logical(c, d, wt)
                got = parity.logical_amplitudes(
                    *parity.logical_cnot(ctl, tgt, outcomes=outcomes, rng=rng)
                ).reshape(-1)
                expected = CNOT @ np.kron([a, b], [c, d])
                worst["cnot"] = max(worst["cnot"], _overlap_error(expected, got))
    for w in range(1, w_max + 1):
        for a, b in ((1, 0), (0, 1), (_S, _S), (0.6, 0.8j)):
            for forced in (None, 0, 1):
                outcomes = None if forced is None else [forced] * (w - 1)
                got = parity.logical_amplitudes(
                    parity.logical_z90(parity.encode_logical(a, b, w), outcomes, rng)
                )
                expected = np.array([a, 1j * b])
                worst["z90"] = max(worst["z90"], _overlap_error(expected, got))
    return [
        Check(f"parity_{k}", v <= FIDELITY_TOL, f"max infidelity {v:.3g}")
        for k, v in worst.items()
    ]


def run_verification() -> list[Check]:
    """All optical and parity-code checks, in a fixed order."""
    return (
        check_elimination_single()
        + check_elimination_dual()
        + check_teleporter_resources()
        + check_parity_code()
    )

"""Statevector model of the parity code and its encoded-gate procedures.

A logical qubit ``a|0> + b|1>`` of width ``w`` is stored as ``a|even> + b|odd>``
where ``|even>`` (``|odd>``) is the uniform superposition of the ``2**(w-1)``
even (odd) parity bitstrings of its component qubits.  A Z measurement of any
component with a known outcome leaves a valid width ``w - 1`` encoding after an
X correction when the outcome is 1, which is what makes the code tolerant of
teleporter failures.

Registers are dense numpy vectors in big-endian qubit order (qubit 0 is the
most significant bit).  Several encoded qubits may share one register after an
entangling gate; :class:`EncodedQubit` records which register qubits are its
components.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .rng import RngStream

NORM_TOL = 1e-12
CODE_TOL = 1e-10
PRUNE = 1e-14

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
Z90 = np.array([[1, 0], [0, 1j]], dtype=complex)

#: Default stream for sampled measurement outcomes.
DEFAULT_RNG = RngStream(seed=0, domain=3)


class CodeError(ValueError):
    pass


class CodeSpaceError(CodeError):
    """The register holds a state outside the parity code space."""


@dataclass(frozen=True, eq=False)
class QubitRegister:
    vector: np.ndarray

    def __post_init__(self):
        n = int(round(math.log2(self.vector.size))) if self.vector.size else -1
        if n < 0 or 2**n != self.vector.size:
            raise CodeError("register vector length must be a power of two")
        self.vector.setflags(write=False)

    @property
    def qubit_count(self) -> int:
        return int(round(math.log2(self.vector.size)))

    @property
    def amplitudes(self) -> dict[tuple[int, ...], complex]:
        n = self.qubit_count
        out = {}
        for i in np.flatnonzero(np.abs(self.vector) >= PRUNE):
            out[tuple(int(b) for b in format(int(i), f"0{n}b"))] = complex(self.vector[i])
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))


@dataclass(frozen=True, eq=False)
class EncodedQubit:
    register: QubitRegister
    components: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.components)


# ------------------------------------------------------------ register kernels


class _Work:
    """Mutable scratch register with named groups of component qubits."""

    def __init__(self, vector: np.ndarray, groups: dict[str, list[int]]):
        self.vec = np.array(vector, dtype=complex)
        self.groups = {k: list(v) for k, v in groups.items()}

    @property
    def n(self) -> int:
        return int(round(math.log2(self.vec.size)))

    def gate(self, u: np.ndarray, k: int):
        v = self.vec.reshape((2,) * self.n)
        v = np.moveaxis(np.tensordot(u, v, axes=([1], [k])), 0, k)
        self.vec = v.reshape(-1)

    def cnot(self, c: int, t: int):
        if c == t:
            raise CodeError("CNOT needs distinct qubits")
        v = self.vec.reshape((2,) * self.n).copy()
        sel = [slice(None)] * self.n
        sel[c] = 1
        sel = tuple(sel)
        v[sel] = np.flip(v[sel], axis=t - (t > c))
        self.vec = v.reshape(-1)

    def add_plus(self) -> int:
        self.vec = np.kron(self.vec, np.array([1, 1], dtype=complex) / math.sqrt(2))
        return self.n - 1

    def prob_one(self, k: int) -> float:
        v = self.vec.reshape((2,) * self.n)
        return float(np.sum(np.abs(np.take(v, 1, axis=k)) ** 2))

    def measure(self, k: int, outcome: Optional[int], rng: Optional[RngStream]) -> int:
        p1 = self.prob_one(k)
        if outcome is None:
            outcome = int((rng or DEFAULT_RNG).random() < p1)
        if outcome not in (0, 1):
            raise CodeError(f"outcome must be 0 or 1, got {outcome}")
        p = p1 if outcome else 1.0 - p1
        if p < NORM_TOL:
            raise CodeError(f"outcome {outcome} has zero probability")
        v = self.vec.reshape((2,) * self.n)
        self.vec = np.take(v, outcome, axis=k).reshape(-1) / math.sqrt(p)
        for g in self.groups.values():
            if k in g:
                g.remove(k)
            g[:] = [i - (i > k) for i in g]
        return outcome


def _work(*qubits: EncodedQubit) -> _Work:
    regs = {id(q.register) for q in qubits}
    if len(regs) != 1:
        raise CodeError("encoded qubits must share one register; use combine() first")
    return _Work(qubits[0].register.vector, {str(i): list(q.components) for i, q in enumerate(qubits)})


def _finish(w: _Work, names: Sequence[str]) -> tuple[EncodedQubit, ...]:
    reg = QubitRegister(w.vec)
    return tuple(EncodedQubit(reg, tuple(w.groups[n])) for n in names)


# ------------------------------------------------------------ public operations


def encode_logical(alpha: complex, beta: complex, w: int) -> EncodedQubit:
    """``alpha |even> + beta |odd>`` on ``w`` component qubits."""
    if w < 1:
        raise CodeError(f"width must be >= 1, got {w}")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) > NORM_TOL:
        raise CodeError("logical amplitudes must be normalised")
    parity = _parity(np.arange(2**w), range(w), w)
    vec = np.where(parity == 1, complex(beta), complex(alpha)) / math.sqrt(2 ** (w - 1))
    return EncodedQubit(QubitRegister(vec), tuple(range(w)))


def combine(*qubits: EncodedQubit) -> tuple[EncodedQubit, ...]:
    """Place encoded qubits with separate registers into one product register."""
    vec = np.ones(1, dtype=complex)
    out_components = []
    offset = 0
    for q in qubits:
        vec = np.kron(vec, q.register.vector)
        out_components.append(tuple(offset + c for c in q.components))
        offset += q.register.qubit_count
    reg = QubitRegister(vec)
    return tuple(EncodedQubit(reg, c) for c in out_components)


def encoder_step(q: EncodedQubit, target: int = 0) -> EncodedQubit:
    """Grow the code by one: a ``|+>`` ancilla CNOTs onto component ``target``."""
    if not 0 <= target < q.width:
        raise CodeError(f"target component {target} out of range for width {q.width}")
    w = _work(q)
    anc = w.add_plus()
    w.cnot(anc, q.components[target])
    w.groups["0"].append(anc)
    return _finish(w, ["0"])[0]


def z_measure_recover(
    q: EncodedQubit,
    index: int,
    outcome: Optional[int] = None,
    rng: Optional[RngStream] = None,
) -> EncodedQubit:
    """Z-measure component ``index``, drop it, and X-correct on outcome 1.

    The correction goes to the first remaining component.  ``outcome`` forces
    a result; otherwise it is sampled from ``rng``.
    """
    if q.width < 2:
        raise CodeError("measuring the only component destroys the logical qubit")
    if not 0 <= index < q.width:
        raise CodeError(f"component {index} out of range for width {q.width}")
    if q.register.qubit_count != q.width:
        raise CodeError("measurement needs a register holding only this encoded qubit")
    w = _work(q)
    bit = w.measure(q.components[index], outcome, rng)
    if bit:
        w.gate(X, w.groups["0"][0])
    return _finish(w, ["0"])[0]


def outcome_probabilities(q: EncodedQubit, index: int) -> tuple[float, float]:
    p1 = _work(q).prob_one(q.components[index])
    return 1.0 - p1, p1


def _measure_rest(
    w: _Work,
    name: str,
    outcomes: Optional[Sequence[int]],
    rng: Optional[RngStream],
) -> int:
    """Z-measure every component of group ``name`` except the first.

    Returns the parity of the outcomes.
    """
    rest = w.groups[name][1:]
    forced = list(outcomes) if outcomes is not None else [None] * len(rest)
    if len(forced) != len(rest):
        raise CodeError(f"expected {len(rest)} forced outcomes, got {len(forced)}")
    parity = 0
    for f in forced:
        parity ^= w.measure(w.groups[name][1], f, rng)
    return parity


def _reencode(w: _Work, name: str, width: int):
    """Grow group ``name`` from its single component back to ``width``."""
    seed = w.groups[name][0]
    for _ in range(width - 1):
        anc = w.add_plus()
        w.cnot(anc, seed)
        w.groups[name].append(anc)


def logical_cnot(
    control: EncodedQubit,
    target: EncodedQubit,
    outcomes: Optional[Sequence[int]] = None,
    rng: Optional[RngStream] = None,
) -> tuple[EncodedQubit, EncodedQubit]:
    """Encoded CNOT via a single physical CNOT and re-encoding.

    A physical CNOT acts from the first control component onto the first
    target component.  The other original control components are Z-measured
    and the control is re-encoded from the kept component to its full width.
    Odd measured parity means the kept component disagrees with the logical
    control value, so one control and one target component are bit-flipped.
    Measurement and re-encoding touch disjoint qubits and commute; measuring
    first lets the corrections act on a single component.

    The result shares one register; ``outcomes`` forces the ``w_c - 1``
    measurement results.
    """
    if control.register is target.register:
        w = _work(control, target)
    else:
        w = _work(*combine(control, target))
    c0, t0 = w.groups["0"][0], w.groups["1"][0]
    w.cnot(c0, t0)
    if _measure_rest(w, "0", outcomes, rng):
        w.gate(X, w.groups["0"][0])
        w.gate(X, w.groups["1"][0])
    _reencode(w, "0", control.width)
    return _finish(w, ["0", "1"])


def logical_z90(
    q: EncodedQubit,
    outcomes: Optional[Sequence[int]] = None,
    rng: Optional[RngStream] = None,
) -> EncodedQubit:
    """Encoded ``diag(1, i)``: rotate one component, re-encode, correct.

    Odd measured parity leaves the kept component bit-flipped with the
    rotation applied to the wrong logical value; an X and a Z on that
    component fix both before it is re-encoded.
    """
    w = _work(q)
    w.gate(Z90, w.groups["0"][0])
    if _measure_rest(w, "0", outcomes, rng):
        w.gate(X, w.groups["0"][0])
        w.gate(Z, w.groups["0"][0])
    _reencode(w, "0", q.width)
    return _finish(w, ["0"])[0]


# ------------------------------------------------------------ readout


def _parity(indices: np.ndarray, qubits, n: int) -> np.ndarray:
    out = np.zeros(indices.shape, dtype=np.int64)
    for k in qubits:
        out ^= (indices >> (n - 1 - k)) & 1
    return out


def logical_amplitudes(*qubits: EncodedQubit) -> np.ndarray:
    """Logical amplitudes of encoded qubits jointly filling one register.

    Returns an array of shape ``(2,) * len(qubits)``.  Raises
    :class:`CodeSpaceError` if the register state has a residual above
    ``1e-10`` outside the product code space.
    """
    if len({id(q.register) for q in qubits}) != 1:
        raise CodeError("encoded qubits must share one register")
    reg = qubits[0].register
    n = reg.qubit_count
    used = sorted(c for q in qubits for c in q.components)
    if used != list(range(n)):
        raise CodeError("encoded qubits must account for every register qubit")
    idx = np.arange(2**n)
    label = np.zeros(2**n, dtype=np.int64)
    for q in qubits:
        label = (label << 1) | _parity(idx, q.components, n)
    block = math.sqrt(2 ** (n - len(qubits)))
    k = len(qubits)
    amps = np.array([reg.vector[label == L].sum() for L in range(2**k)]) / block
    residual = reg.vector - amps[label] / block
    if np.linalg.norm(residual) > CODE_TOL:
        raise CodeSpaceError(
            f"state leaves the parity code space (residual {np.linalg.norm(residual):.3g})"
        )
    return amps.reshape((2,) * k)


def readout_logical(q: EncodedQubit) -> tuple[complex, complex]:
    """Recover ``(alpha, beta)`` from a register holding only ``q``."""
    a = logical_amplitudes(q)
    return complex(a[0]), complex(a[1])


def dump_register(reg: QubitRegister) -> str:
    """Same line format as :func:`loqc_parity.fock.dump_state`."""
    lines = []
    for bits, v in sorted(reg.amplitudes.items()):
        lines.append(f"{''.join(map(str, bits))}\t{v.real + 0.0!r}\t{v.imag + 0.0!r}")
    return "\n".join(lines) + "\n"

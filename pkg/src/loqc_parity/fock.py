"""Sparse multimode Fock states, post-selected linear optics and teleporter resources.

States map occupation tuples to amplitudes.  Amplitudes are Python complex
numbers, or exact sympy surds (``p/q * sqrt(r)``) when ``exact=True``; the
exact mode is what lets the elimination-circuit probability come out as the
rational 12/441 rather than a float close to it.

Beam-splitter convention (reflectivity ``eta``, ``r = sqrt(eta)``,
``t = sqrt(1 - eta)``) acting on creation operators::

    a_i^+  ->  t a_i^+ + r a_j^+
    a_j^+  ->  r a_i^+ - t a_j^+
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

import sympy

Mode = Union[int, str]
Occupation = tuple[int, ...]

PRUNE = 1e-14


class FockError(ValueError):
    pass


class CutoffError(FockError):
    """A transformation would put more photons in a mode than the cutoff allows."""


class ZeroNormError(FockError):
    pass


@dataclass(frozen=True, eq=False)
class FockState:
    amplitudes: Mapping[Occupation, object]
    labels: tuple[str, ...]
    cutoff: int
    exact: bool = False

    @property
    def mode_count(self) -> int:
        return len(self.labels)

    def index(self, mode: Mode) -> int:
        if isinstance(mode, str):
            try:
                return self.labels.index(mode)
            except ValueError:
                raise FockError(f"no mode labelled {mode!r} in {self.labels}") from None
        if not 0 <= mode < self.mode_count:
            raise FockError(f"mode index {mode} out of range")
        return mode

    def norm_sq(self):
        if self.exact:
            return sympy.nsimplify(
                sympy.expand(sum(a * sympy.conjugate(a) for a in self.amplitudes.values()))
            )
        return math.fsum(abs(a) ** 2 for a in self.amplitudes.values())

    def normalized(self) -> "FockState":
        n2 = self.norm_sq()
        if n2 == 0:
            raise ZeroNormError("cannot normalise a zero-norm state")
        scale = 1 / sympy.sqrt(n2) if self.exact else 1 / math.sqrt(n2)
        return self._with({k: scale * v for k, v in self.amplitudes.items()})

    def to_float(self) -> "FockState":
        if not self.exact:
            return self
        amps = {k: complex(sympy.N(v, 30)) for k, v in self.amplitudes.items()}
        return FockState(_prune(amps, False), self.labels, self.cutoff, False)

    def amplitude(self, occupation: Sequence[int]):
        return self.amplitudes.get(tuple(occupation), 0)

    def _with(self, amps, labels=None) -> "FockState":
        return FockState(_prune(amps, self.exact), labels or self.labels, self.cutoff, self.exact)

    def __repr__(self):
        terms = " + ".join(
            f"({v})|{''.join(map(str, k))}>" for k, v in sorted(self.amplitudes.items())
        )
        return f"FockState[{','.join(self.labels)}]({terms})"


def _prune(amps: dict, exact: bool) -> dict:
    if exact:
        out = {}
        for k, v in amps.items():
            v = sympy.expand(v)
            if v != 0:
                out[k] = v
        return out
    return {k: v for k, v in amps.items() if abs(v) >= PRUNE}


def _num(x, exact: bool):
    if exact:
        if isinstance(x, float):
            return sympy.nsimplify(x)
        return sympy.sympify(x)
    return complex(x)


def _sqrt(x, exact: bool):
    if exact:
        return sympy.sqrt(sympy.Rational(Fraction(x)) if not isinstance(x, sympy.Basic) else x)
    return math.sqrt(x)


def make_state(
    terms: Iterable[tuple[Sequence[int], object]],
    labels: Sequence[str] | None = None,
    cutoff: int | None = None,
    normalize: bool = True,
    exact: bool = False,
) -> FockState:
    """Build a state from ``(occupation, amplitude)`` pairs; duplicates are summed."""
    amps: dict[Occupation, object] = {}
    width = None
    for occ, amp in terms:
        occ = tuple(int(n) for n in occ)
        if width is None:
            width = len(occ)
        elif len(occ) != width:
            raise FockError("occupation vectors have inconsistent lengths")
        if any(n < 0 for n in occ):
            raise FockError("occupations must be non-negative")
        amps[occ] = amps.get(occ, 0) + _num(amp, exact)
    if width is None:
        raise FockError("a state needs at least one term")
    top = max(max(k) if k else 0 for k in amps)
    if cutoff is None:
        cutoff = max(max(sum(k) for k in amps), 1)
    elif top > cutoff:
        raise CutoffError(f"occupation {top} exceeds cutoff {cutoff}")
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(width))
    if len(labels) != width:
        raise FockError("label count does not match the number of modes")
    state = FockState(_prune(amps, exact), labels, cutoff, exact)
    if not state.amplitudes:
        raise ZeroNormError("terms cancel to a zero-norm state")
    return state.normalized() if normalize else state


def vacuum(labels: Sequence[str], cutoff: int = 1, exact: bool = False) -> FockState:
    return make_state([((0,) * len(labels), 1)], labels, cutoff, exact=exact)


def tensor(a: FockState, b: FockState) -> FockState:
    if a.exact != b.exact:
        raise FockError("cannot combine exact and floating-point states")
    if set(a.labels) & set(b.labels):
        raise FockError("mode labels must be distinct when combining states")
    amps = {ka + kb: va * vb for ka, va in a.amplitudes.items() for kb, vb in b.amplitudes.items()}
    return FockState(_prune(amps, a.exact), a.labels + b.labels, max(a.cutoff, b.cutoff), a.exact)


def permute_modes(state: FockState, order: Sequence[Mode]) -> FockState:
    """Reorder (all) modes; ``order`` lists the current modes in their new order."""
    idx = [state.index(m) for m in order]
    if sorted(idx) != list(range(state.mode_count)):
        raise FockError("order must be a permutation of all modes")
    amps = {tuple(k[i] for i in idx): v for k, v in state.amplitudes.items()}
    return state._with(amps, tuple(state.labels[i] for i in idx))


def relabel(state: FockState, labels: Sequence[str]) -> FockState:
    if len(labels) != state.mode_count:
        raise FockError("label count does not match the number of modes")
    return FockState(dict(state.amplitudes), tuple(labels), state.cutoff, state.exact)


@dataclass(frozen=True)
class BeamSplitterSpec:
    mode_i: Mode
    mode_j: Mode
    reflectivity: object

    def __post_init__(self):
        if self.mode_i == self.mode_j:
            raise FockError("beam splitter needs two distinct modes")
        if not 0 <= float(self.reflectivity) <= 1:
            raise FockError("reflectivity must lie in [0, 1]")


def apply_bs(state: FockState, bs: BeamSplitterSpec) -> FockState:
    i, j = state.index(bs.mode_i), state.index(bs.mode_j)
    if i == j:
        raise FockError("beam splitter needs two distinct modes")
    exact = state.exact
    r = _sqrt(bs.reflectivity, exact)
    t = _sqrt(1 - Fraction(bs.reflectivity) if exact else 1 - float(bs.reflectivity), exact)
    fact = math.factorial
    out: dict[Occupation, object] = {}
    for occ, amp in state.amplitudes.items():
        ni, nj = occ[i], occ[j]
        for k in range(ni + 1):
            ck = math.comb(ni, k) * t**k * r ** (ni - k)
            for l in range(nj + 1):
                c = ck * math.comb(nj, l) * r**l * (-t) ** (nj - l)
                a, b = k + l, ni + nj - k - l
                if a > state.cutoff or b > state.cutoff:
                    if c != 0:
                        raise CutoffError(
                            f"beam splitter output needs {max(a, b)} photons in one mode "
                            f"(cutoff {state.cutoff})"
                        )
                    continue
                c = c * _sqrt(Fraction(fact(a) * fact(b), fact(ni) * fact(nj)), exact)
                new = list(occ)
                new[i], new[j] = a, b
                new = tuple(new)
                out[new] = out.get(new, 0) + amp * c
    return state._with(out)


def beam_splitter(state: FockState, mode_i: Mode, mode_j: Mode, reflectivity) -> FockState:
    return apply_bs(state, BeamSplitterSpec(mode_i, mode_j, reflectivity))


def phase_shift(state: FockState, mode: Mode, phase) -> FockState:
    """Multiply each term by ``phase ** n`` where ``n`` is the occupation of ``mode``."""
    i = state.index(mode)
    phase = _num(phase, state.exact)
    return state._with({k: v * phase ** k[i] for k, v in state.amplitudes.items()})


def _drop_mode(occ: Occupation, i: int) -> Occupation:
    return occ[:i] + occ[i + 1 :]


def condition_count(
    state: FockState, mode: Mode, count: int, renormalize: bool = True
) -> tuple[Optional[FockState], object]:
    """Post-select ``count`` photons in ``mode`` and remove that mode.

    Returns the conditional state (renormalised unless ``renormalize`` is
    False, in which case it carries the event amplitude) and the probability
    of the event relative to the input norm.  A zero-probability outcome
    gives ``(None, 0)``.
    """
    i = state.index(mode)
    kept = {_drop_mode(k, i): v for k, v in state.amplitudes.items() if k[i] == count}
    labels = state.labels[:i] + state.labels[i + 1 :]
    total = state.norm_sq()
    if not kept:
        return None, 0
    out = FockState(_prune(kept, state.exact), labels, state.cutoff, state.exact)
    if not out.amplitudes:
        return None, 0
    prob = out.norm_sq() / total
    return (out.normalized() if renormalize else out), prob


def eliminate_11(
    state: FockState, qubit_b: Mode, qubit_c: Mode, renormalize: bool = True
) -> tuple[FockState, object]:
    """Remove every term with one photon in both ``qubit_b`` and ``qubit_c``."""
    b, c = state.index(qubit_b), state.index(qubit_c)
    for k in state.amplitudes:
        if k[b] > 1 or k[c] > 1:
            raise FockError("elimination needs at most one photon in each of the two modes")
    kept = {k: v for k, v in state.amplitudes.items() if not (k[b] == 1 and k[c] == 1)}
    if not kept:
        raise ZeroNormError("elimination removed every term")
    out = state._with(kept)
    prob = out.norm_sq() / state.norm_sq()
    return (out.normalized() if renormalize else out), prob


# ---------------------------------------------------------------- comparisons


def overlap(a: FockState, b: FockState) -> complex:
    if a.mode_count != b.mode_count:
        raise FockError("states have different numbers of modes")
    a, b = a.to_float(), b.to_float()
    return sum(v.conjugate() * b.amplitudes.get(k, 0) for k, v in a.amplitudes.items())


def fidelity(a: FockState, b: FockState) -> float:
    """``|<a|b>|`` between the normalised states."""
    a, b = a.to_float().normalized(), b.to_float().normalized()
    return abs(overlap(a, b))


def states_equal(a: FockState, b: FockState, tol: float = 1e-10) -> bool:
    """Equal up to global phase (and normalisation)."""
    return fidelity(a, b) >= 1 - tol


# ---------------------------------------------------------------- dump format


def _fmt(x: float) -> str:
    return repr(float(x) + 0.0)


def dump_state(state: FockState) -> str:
    """One ``occupation TAB re TAB im`` line per term, sorted by occupation."""
    s = state.to_float()
    sep = "" if s.cutoff < 10 else ","
    lines = []
    for occ in sorted(s.amplitudes):
        v = complex(s.amplitudes[occ])
        lines.append(f"{sep.join(map(str, occ))}\t{_fmt(v.real)}\t{_fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def parse_dump(text: str, labels: Sequence[str] | None = None) -> FockState:
    terms = []
    for line in text.splitlines():
        if not line.strip():
            continue
        occ, re_, im = line.split("\t")
        digits = occ.split(",") if "," in occ else list(occ)
        terms.append((tuple(int(d) for d in digits), complex(float(re_), float(im))))
    return make_state(terms, labels, normalize=False)


# ---------------------------------------------------------------- elimination circuit


def _single_rail_input(exact: bool) -> FockState:
    # Photons enter modes 3 and 4; modes 2 and 5 carry the ancilla photons.
    return make_state([((0, 1, 1, 1, 1, 0), 1)], labels="123456", exact=exact)


def _dual_rail_input(exact: bool) -> FockState:
    # a,b (c,d) flag which arm of the first (second) photon is occupied, so the
    # protocol on modes 2-5 runs exactly as in the single-rail case.
    r = _sqrt(Fraction(1, 7), exact)
    t = _sqrt(Fraction(6, 7), exact)
    first = make_state(
        [((1, 0, 0, 1, 1), t), ((0, 1, 1, 1, 0), r)], labels=("a", "b", "1", "2", "3"),
        normalize=False, exact=exact,
    )
    second = make_state(
        [((0, 1, 1, 1, 0), t), ((1, 0, 0, 1, 1), r)], labels=("c", "d", "4", "5", "6"),
        normalize=False, exact=exact,
    )
    return tensor(first, second)


def elimination_trace(rail: str = "single", exact: bool = False) -> dict[str, FockState]:
    """Every intermediate (unnormalised) state of the elimination recipe.

    Keys: ``split`` (after the 1/7 splitters), ``mixed`` (after the first
    1/2 splitter on modes 3,4), ``conditioned`` (one photon seen in each of
    modes 2 and 5), ``output`` (after the second 1/2 splitter and a pi phase
    on mode 3).  The squared norm of ``output`` is the success probability.
    """
    seventh = Fraction(1, 7)
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    trace = {}
    if rail == "single":
        s = _single_rail_input(exact)
        s = beam_splitter(s, "3", "1", seventh)
        s = beam_splitter(s, "4", "6", seventh)
    elif rail == "dual":
        s = _dual_rail_input(exact)
    else:
        raise FockError(f"rail must be 'single' or 'dual', got {rail!r}")
    trace["split"] = s
    s = beam_splitter(s, "3", "4", half)
    trace["mixed"] = s
    s = beam_splitter(s, "3", "2", third)
    s = beam_splitter(s, "4", "5", third)
    s, _ = condition_count(s, "2", 1, renormalize=False)
    s, _ = condition_count(s, "5", 1, renormalize=False)
    trace["conditioned"] = s
    s = beam_splitter(s, "4", "3", half)
    s = phase_shift(s, "3", -1)
    if rail == "dual":
        s = permute_modes(s, ["a", "b", "1", "3", "c", "d", "4", "6"])
    trace["output"] = s
    return trace


def elim_resource(rail: str = "single", exact: bool = False) -> tuple[FockState, object]:
    """Heralded ``T_{2/3}`` resource and the probability the heralding succeeds."""
    out = elimination_trace(rail, exact)["output"]
    return out.normalized(), out.norm_sq()


# ---------------------------------------------------------------- teleporter resources

TN_MAX = 8


def _check_order(n: int):
    if int(n) != n or not 1 <= n <= TN_MAX:
        raise FockError(f"teleporter order must be an integer in 1..{TN_MAX}, got {n}")


def tn_reference(n: int) -> FockState:
    """``sum_j |1>^j |0>^(n-j) |0>^j |1>^(n-j)`` over 2n modes, normalised."""
    _check_order(n)
    terms = [((1,) * j + (0,) * (n - j) + (0,) * j + (1,) * (n - j), 1) for j in range(n + 1)]
    labels = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)]
    return make_state(terms, labels, cutoff=1)


def bell_pair(a: str, b: str) -> FockState:
    return make_state([((0, 1), 1), ((1, 0), 1)], labels=(a, b), cutoff=1)


def grow_tn(tn: FockState) -> tuple[FockState, float]:
    """One combine-and-eliminate step ``|t_n> -> |t_{n+1}>``.

    A fresh Bell pair ``(A, B)`` is adjoined, terms with ``|11>`` on ``B`` and
    the first mode ``C`` of ``|t_n>`` are eliminated, and the modes are
    reordered to ``A, (first half of t_n), B, (second half of t_n)``.
    Returns the new state and the elimination survival probability.
    """
    n = tn.mode_count // 2
    k = n + 1
    a, b = f"A{k}", f"B{k}"
    combined = tensor(bell_pair(a, b), tn)
    c = tn.labels[0]
    kept, prob = eliminate_11(combined, b, c)
    first, second = list(tn.labels[:n]), list(tn.labels[n:])
    return permute_modes(kept, [a] + first + [b] + second), prob


def build_tn(n: int) -> FockState:
    """Build ``|t_n>`` from a Bell pair by ``n - 1`` elimination steps.

    Mode labels record the construction: ``A{k}``/``B{k}`` is the Bell pair
    adjoined at step ``k`` (``A1``/``B1`` is the seed pair).
    """
    _check_order(n)
    state = bell_pair("A1", "B1")
    for _ in range(n - 1):
        state, _ = grow_tn(state)
    return state

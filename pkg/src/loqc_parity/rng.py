"""Keyed counter-based random streams.

A draw is a pure function of ``(seed, domain, stream_id, counter)``, so every
Monte Carlo trial owns an independent stream addressed by its trial index and
any partition of trials across workers reproduces the serial results exactly.
The mixing function is the SplitMix64 finaliser applied in a two-level key
schedule; numpy's bit generators are stateful objects and cannot be
vectorised over 10^5 keys per step, which the lockstep simulator needs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_DOMAIN_SALT = np.uint64(0xD1B54A32D192ED03)
_TO_UNIT = 2.0**-53


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _u64(x: int) -> np.uint64:
    return np.uint64(int(x) & 0xFFFFFFFFFFFFFFFF)


def stream_keys(seed: int, stream_ids, domain: int = 0) -> np.ndarray:
    """Per-stream 64-bit keys for ``stream_ids`` under ``seed`` and ``domain``."""
    with np.errstate(over="ignore"):
        base = _mix64(_u64(seed) + _u64(domain) * _DOMAIN_SALT)
        ids = np.asarray(stream_ids, dtype=np.int64).astype(np.uint64)
        return _mix64(base ^ _mix64(ids * _GOLDEN + _GOLDEN))


def keyed_uniforms(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Uniform doubles in [0, 1) for draw ``counters`` of the streams ``keys``."""
    with np.errstate(over="ignore"):
        z = _mix64(keys + (np.asarray(counters, dtype=np.uint64) + np.uint64(1)) * _GOLDEN)
    return (z >> np.uint64(11)).astype(np.float64) * _TO_UNIT


@dataclass
class RngStream:
    """A single sequential stream ``(seed, stream_id)``.

    Monte Carlo routines treat ``stream_id`` as the index of the first trial:
    trial ``t`` of a run draws from stream ``stream_id + t``.
    """

    seed: int
    stream_id: int = 0
    domain: int = 0
    counter: int = field(default=0, compare=False)

    def random(self, size: int | None = None):
        n = 1 if size is None else size
        key = stream_keys(self.seed, [self.stream_id], self.domain)
        out = keyed_uniforms(np.repeat(key, n), np.arange(self.counter, self.counter + n))
        self.counter += n
        return float(out[0]) if size is None else out

    def spawn(self, domain: int) -> "RngStream":
        """Same seed and stream, separate domain (independent draws)."""
        return RngStream(self.seed, self.stream_id, domain)

"""Deterministic seed derivation for parallel simulation.

Every (master seed, cell id, repeat index) triple maps to its own 64-bit
seed through a splitmix64-style finalizer chain.  Each absorption step is a
bijection in the value absorbed, so two triples differing in exactly one
component can never collide.  Streams built from the derived seeds are
therefore independent of scheduling: a cell repeat draws the same numbers
whether it runs inline, in a process pool, or in a resumed run.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

RandomStream = np.random.Generator


def _mix64(z: int) -> int:
    # finalizer from splitmix64 (Steele, Lea & Flood 2014)
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, cell_id: int, repeat: int) -> int:
    """64-bit seed for one repeat of one cell under one master seed."""
    if repeat < 0:
        raise ValueError(f"repeat index must be >= 0, got {repeat}")
    h = _mix64((master + _GOLDEN) & _MASK64)
    h = _mix64((h + cell_id) & _MASK64)
    h = _mix64((h + repeat) & _MASK64)
    return h


def derive_seed_array(master: int, cell_id: int, repeats: np.ndarray) -> np.ndarray:
    """Vectorized :func:`derive_seed` over a uint64 array of repeat indices."""
    z = np.asarray(repeats, dtype=np.uint64)

    def mix(v: np.ndarray) -> np.ndarray:
        v = v.copy()
        v ^= v >> np.uint64(30)
        v *= np.uint64(0xBF58476D1CE4E5B9)
        v ^= v >> np.uint64(27)
        v *= np.uint64(0x94D049BB133111EB)
        v ^= v >> np.uint64(31)
        return v

    h0 = _mix64((master + _GOLDEN) & _MASK64)
    h1 = _mix64((h0 + cell_id) & _MASK64)
    return mix(np.uint64(h1) + z)


def make_stream(seed: int) -> RandomStream:
    """A PCG64 generator fully determined by ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))

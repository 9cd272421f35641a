"""Arithmetic modulo the Mersenne prime 2**61 - 1 and the constant schedule.

Vector helpers operate on ``uint64`` arrays whose entries are already
reduced into ``[0, P)``.  Products are formed from 32-bit limbs so nothing
overflows 64 bits.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

P = (1 << 61) - 1

_P64 = np.uint64(P)
_MASK32 = np.uint64(0xFFFFFFFF)
_MASK29 = np.uint64((1 << 29) - 1)
_S61 = np.uint64(61)
_S32 = np.uint64(32)
_S29 = np.uint64(29)
_THREE = np.uint64(3)


def reduce(z: np.ndarray) -> np.ndarray:
    """Reduce any uint64 values (< 2**64) into [0, P)."""
    r = (z & _P64) + (z >> _S61)
    return np.where(r >= _P64, r - _P64, r)


def add(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return reduce(x + y)


def sub(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return reduce(x + (_P64 - y))


def mul_scalar(x: np.ndarray, s: int) -> np.ndarray:
    """Multiply each entry of ``x`` by the field scalar ``s``."""
    s0 = np.uint64(s & 0xFFFFFFFF)
    s1 = np.uint64(s >> 32)
    x0 = x & _MASK32
    x1 = x >> _S32
    t00 = x0 * s0
    mid = x0 * s1 + x1 * s0
    t11 = x1 * s1
    # 2**64 == 8 and 2**61 == 1 (mod P)
    return reduce(
        (t11 << _THREE)
        + (mid >> _S29)
        + ((mid & _MASK29) << _S32)
        + (t00 & _P64)
        + (t00 >> _S61)
    )


def segment_sums(values: np.ndarray, starts: np.ndarray, nonempty: np.ndarray, n: int) -> np.ndarray:
    """Field sums of consecutive segments of ``values``.

    ``starts`` are the segment offsets of the non-empty segments and
    ``nonempty`` their positions in the length-``n`` output; empty segments
    sum to zero.
    """
    out = np.zeros(n, dtype=np.uint64)
    if values.size == 0:
        return out
    lo = np.add.reduceat(values & _MASK32, starts)
    hi = np.add.reduceat(values >> _S32, starts)
    out[nonempty] = add(reduce(lo), mul_scalar(reduce(hi), 1 << 32))
    return out


def _draw(key: bytes, tag: str, index: int, attempt: int) -> int:
    h = hashlib.blake2b(f"{tag}:{index}:{attempt}".encode(), key=key, digest_size=16)
    return int.from_bytes(h.digest(), "little") % P


def _seed_key(seed: int) -> bytes:
    return int(seed).to_bytes(16, "little", signed=True)


@dataclass(frozen=True)
class ConstantSchedule:
    """Every numeric constant of one matching run.

    ``scalars[l]`` is the quadruple ``(a, b, c, d)`` used by message round
    ``l + 1``.  ``gammas[k]`` is the value injected for the k-th matched pair.
    All values are nonzero and pairwise distinct.
    """

    seed: int
    alphas: tuple[int, ...]
    beta: int
    scalars: tuple[tuple[int, int, int, int], ...]
    gammas: tuple[int, ...]

    @property
    def max_iterations(self) -> int:
        return len(self.scalars)

    def gamma(self, k: int) -> int:
        if not 0 <= k < len(self.gammas):
            raise IndexError(f"pair key {k} outside schedule of {len(self.gammas)} gammas")
        return self.gammas[k]

    def all_values(self) -> list[int]:
        vals = list(self.alphas) + [self.beta] + list(self.gammas)
        for quad in self.scalars:
            vals.extend(quad)
        return vals


def derive_constants(seed: int, num_cells: int, max_iterations: int, max_pairs: int) -> ConstantSchedule:
    """Deterministically derive alphas, beta, round scalars and gammas from ``seed``.

    Each value is drawn from a keyed hash of ``(seed, role, index)`` and
    redrawn on collision with anything drawn before it (or with zero).
    """
    if num_cells < 0 or max_iterations < 0 or max_pairs < 0:
        raise ValueError("counts must be non-negative")
    key = _seed_key(seed)
    seen: set[int] = {0}

    def fresh(tag: str, index: int) -> int:
        attempt = 0
        while True:
            v = _draw(key, tag, index, attempt)
            if v not in seen:
                seen.add(v)
                return v
            attempt += 1

    alphas = tuple(fresh("alpha", r) for r in range(num_cells))
    beta = fresh("beta", 0)
    scalars = tuple(
        tuple(fresh(name, l) for name in ("a", "b", "c", "d")) for l in range(max_iterations)
    )
    gammas = tuple(fresh("gamma", k) for k in range(max_pairs))
    return ConstantSchedule(int(seed), alphas, beta, scalars, gammas)  # type: ignore[arg-type]

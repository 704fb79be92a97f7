"""Prime-field arithmetic and dense rank computation.

Every Hilbert-function query in the package reduces to the rank of a dense
matrix over ``F_p``.  The kernels here are numba-compiled and operate on
``uint64`` arrays.  Three multiplication paths are available:

* ``p = 2**61 - 1`` (the default): Mersenne reduction of a split 122-bit product;
* ``p < 2**32``: plain 64-bit product followed by ``%``;
* any other prime below ``2**63``: double-and-add (slow, correctness fallback).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numba import njit

MERSENNE61 = (1 << 61) - 1
MERSENNE31 = (1 << 31) - 1
DEFAULT_PRIME = MERSENNE61
SECOND_PRIME = MERSENNE31

_M61 = np.uint64(MERSENNE61)
_MASK32 = np.uint64(0xFFFFFFFF)
_MASK29 = np.uint64((1 << 29) - 1)
_S3 = np.uint64(3)
_S29 = np.uint64(29)
_S32 = np.uint64(32)
_S61 = np.uint64(61)
_ONE = np.uint64(1)

MODE_M61 = 0
MODE_SMALL = 1
MODE_GENERIC = 2


@lru_cache(maxsize=64)
def _is_prime(p: int) -> bool:
    if p in (MERSENNE61, MERSENNE31):
        return True
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class PrimeModulus:
    """A prime below 2**63 together with the multiplication path it selects."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        p = int(self.p)
        if p < 2 or p >= 1 << 63:
            raise ValueError(f"modulus {p} outside [2, 2**63)")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")

    @property
    def mode(self) -> int:
        if self.p == MERSENNE61:
            return MODE_M61
        if self.p < 1 << 32:
            return MODE_SMALL
        return MODE_GENERIC

    def __int__(self) -> int:
        return self.p


def as_modulus(p: int | PrimeModulus | None) -> PrimeModulus:
    if p is None:
        return PrimeModulus()
    if isinstance(p, PrimeModulus):
        return p
    return PrimeModulus(int(p))


@dataclass(frozen=True)
class RankResult:
    rank: int
    rows: int
    cols: int

    def __post_init__(self):
        if self.rank > min(self.rows, self.cols):
            raise ValueError("rank exceeds matrix dimensions")

    @property
    def full(self) -> bool:
        return self.rank == min(self.rows, self.cols)


# ---------------------------------------------------------------- kernels


@njit(inline="always", cache=True)
def _mul61(a, b):
    ah = a >> _S32
    al = a & _MASK32
    bh = b >> _S32
    bl = b & _MASK32
    lo = al * bl
    mid = ah * bl + al * bh
    hi = ah * bh
    # 2**64 = 8 and 2**61 = 1 modulo 2**61 - 1
    r = (hi << _S3) + (mid >> _S29) + ((mid & _MASK29) << _S32) + (lo & _M61) + (lo >> _S61)
    r = (r & _M61) + (r >> _S61)
    r = (r & _M61) + (r >> _S61)
    if r >= _M61:
        r -= _M61
    return r


@njit(inline="always", cache=True)
def _mul_generic(a, b, p):
    r = np.uint64(0)
    a = a % p
    while b > 0:
        if b & _ONE:
            r += a
            if r >= p:
                r -= p
        a += a
        if a >= p:
            a -= p
        b >>= _ONE
    return r


@njit(inline="always", cache=True)
def mulmod(a, b, p, mode):
    if mode == 0:
        return _mul61(a, b)
    elif mode == 1:
        return (a * b) % p
    return _mul_generic(a, b, p)


@njit(inline="always", cache=True)
def _addmod(a, b, p):
    r = a + b
    if r >= p:
        r -= p
    return r


@njit(cache=True)
def _invmod(a, p, mode):
    e = p - np.uint64(2)
    base = a
    inv = np.uint64(1)
    while e > 0:
        if e & _ONE:
            inv = mulmod(inv, base, p, mode)
        base = mulmod(base, base, p, mode)
        e >>= _ONE
    return inv


@njit(cache=True)
def _prefix_ranks(A, p, mode, checkpoints):
    # Row-insertion echelon: rows are reduced one at a time against the
    # basis found so far, so the rank of every row prefix comes for free.
    rows, cols = A.shape
    maxr = min(rows, cols)
    basis = np.zeros((max(maxr, 1), cols), dtype=np.uint64)
    pivrow = -np.ones(cols, dtype=np.int64)
    out = np.zeros(len(checkpoints), dtype=np.int64)
    w = np.zeros(cols, dtype=np.uint64)
    rank = 0
    ci = 0
    for i in range(rows):
        while ci < len(checkpoints) and checkpoints[ci] <= i:
            out[ci] = rank
            ci += 1
        if rank == cols:
            break
        w[:] = A[i]
        for c in range(cols):
            f = w[c]
            if f == 0:
                continue
            b = pivrow[c]
            if b >= 0:
                g = p - f
                row = basis[b]
                for cc in range(c, cols):
                    w[cc] = _addmod(w[cc], mulmod(g, row[cc], p, mode), p)
            else:
                inv = _invmod(f, p, mode)
                for cc in range(c, cols):
                    basis[rank, cc] = mulmod(w[cc], inv, p, mode)
                pivrow[c] = rank
                rank += 1
                break
    while ci < len(checkpoints):
        out[ci] = rank
        ci += 1
    return out


# ---------------------------------------------------------------- public API


def reduce_mod(m, p: int | PrimeModulus | None = None) -> np.ndarray:
    """Return ``m`` as a C-contiguous ``uint64`` array with entries in ``[0, p)``."""
    q = as_modulus(p).p
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    if arr.dtype == np.uint64:
        out = arr % np.uint64(q)
    elif arr.dtype.kind in "iu":
        out = np.mod(arr.astype(np.int64), np.int64(q)).astype(np.uint64)
    elif arr.dtype == object:
        out = np.array([[int(x) % q for x in row] for row in arr.tolist()], dtype=np.uint64).reshape(arr.shape)
    else:
        raise TypeError(f"unsupported dtype {arr.dtype}")
    return np.ascontiguousarray(out, dtype=np.uint64)


def prefix_ranks(m: np.ndarray, checkpoints: Sequence[int], p: int | PrimeModulus | None = None) -> list[int]:
    """Rank of the first ``k`` rows of ``m`` for each ``k`` in ``checkpoints``.

    ``m`` must already be a reduced ``uint64`` array (see :func:`reduce_mod`).
    Checkpoints must be nondecreasing.
    """
    mod = as_modulus(p)
    rows, cols = m.shape
    cps = np.asarray(checkpoints, dtype=np.int64)
    if np.any(np.diff(cps) < 0):
        raise ValueError("checkpoints must be nondecreasing")
    if rows == 0 or cols == 0:
        return [0] * len(cps)
    return [int(r) for r in _prefix_ranks(m, np.uint64(mod.p), mod.mode, cps)]


def rank(m, p: int | PrimeModulus | None = None) -> RankResult:
    """Exact rank of ``m`` over ``F_p``.

    >>> rank([[1, 2], [2, 4]], 1000003).rank
    1
    """
    arr = reduce_mod(m, p)
    rows, cols = arr.shape
    return RankResult(prefix_ranks(arr, [rows], p)[0], rows, cols)


def derive_seed(root: int, *keys: int) -> int:
    """Deterministic 63-bit seed derived from a root seed and integer keys."""
    entropy = [int(root) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)]
    state = np.random.SeedSequence(entropy).generate_state(2, np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])


def trial_seed(root: int, trial: int) -> int:
    """Seed of trial ``trial`` under root seed ``root``."""
    return derive_seed(root, trial)


def max_rank_over_trials(
    builder: Callable[[int], np.ndarray],
    trials: int,
    p: int | PrimeModulus | None = None,
    seed: int = 0,
    stop_at_full: bool = True,
) -> RankResult:
    """Maximum rank over ``trials`` matrices ``builder(trial_seed(seed, t))``.

    Rank at a random point lower-bounds the generic rank, so the maximum is
    the best certificate available.  Once a trial attains ``min(rows, cols)``
    no later trial can exceed it; ``stop_at_full`` skips those trials.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best: RankResult | None = None
    for t in range(trials):
        res = rank(builder(trial_seed(seed, t)), p)
        if best is None or res.rank > best.rank:
            best = res
        if stop_at_full and best.full:
            break
    return best

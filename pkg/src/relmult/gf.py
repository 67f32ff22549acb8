"""Dense linear algebra over a prime field GF(p) on int64 numpy arrays.

Entries are kept in [0, p).  Products of two entries must fit in a signed
64-bit integer, which caps the supported primes below 2**31.
"""

from __future__ import annotations

import numpy as np

MAX_PRIME = 2**31 - 1


def check_prime(p: int) -> int:
    p = int(p)
    if p < 2 or p > MAX_PRIME:
        raise ValueError(f"prime must lie in [2, {MAX_PRIME}], got {p}")
    if p > 3:
        if p % 2 == 0:
            raise ValueError(f"{p} is not prime")
        f = 3
        while f * f <= p:
            if p % f == 0:
                raise ValueError(f"{p} is not prime")
            f += 2
    return p


def inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, p - 2, p)


def rref(mat, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(p).

    Args:
        mat: 2-D array-like of integers (any sign).
        p: the field characteristic.

    Returns:
        (R, pivots): R holds only the nonzero rows, each with a leading 1 in
        its pivot column and zeros in every other pivot column.
    """
    A = np.array(mat, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    A %= p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        if inv != 1:
            A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit, c:] = (A[hit, c:] - np.outer(col[hit], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(mat, p: int) -> int:
    A = np.asarray(mat)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def row_space_contains(big: np.ndarray, small: np.ndarray, p: int) -> bool:
    """True when every row of ``small`` lies in the row space of ``big`` (an RREF)."""
    if small.shape[0] == 0:
        return True
    if big.shape[0] == 0:
        return not np.any(small % p)
    return rank(np.vstack([big, small]), p) == big.shape[0]

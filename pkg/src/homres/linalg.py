"""Dense linear algebra over the prime field GF(p).

Matrices are plain ``numpy`` integer arrays whose entries are residues in
``[0, p)``; the modulus travels alongside as an ``int``. Every routine here is
a pure function of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_PRIME = 2**31


def is_prime(p: int) -> bool:
    """Deterministic primality test, adequate for ``p < 2**31``."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _dtype(p: int):
    return np.int64 if p < MAX_PRIME else object


def as_matrix(a, p: int, shape=None) -> np.ndarray:
    m = np.array(a, dtype=np.int64 if p < MAX_PRIME else object)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return m % p


def zeros(rows: int, cols: int, p: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=_dtype(p))


def identity(n: int, p: int) -> np.ndarray:
    return np.eye(n, dtype=_dtype(p))


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 dot products overflow once inner * (p-1)^2 reaches 2^63
    inner = a.shape[1] if a.ndim == 2 else a.shape[-1]
    if inner and inner * (p - 1) ** 2 >= 2**63:
        return (a.astype(object) @ b.astype(object)) % p
    return (a @ b) % p


@dataclass(frozen=True)
class RREF:
    reduced: np.ndarray
    rank: int
    pivots: tuple[int, ...]


def rref(m: np.ndarray, p: int) -> RREF:
    """Reduced row echelon form of ``m`` over GF(p)."""
    a = np.array(m, dtype=_dtype(p)) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return RREF(a, r, tuple(pivots))


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return rref(m, p).rank


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ``{x : a x = 0}``; shape ``(cols, cols - rank)``.

    Free variables are set to unit vectors in increasing order, so the basis
    is the standard one read off the RREF.
    """
    rows, cols = a.shape
    if rows == 0:
        return identity(cols, p)
    red = rref(a, p)
    free = [c for c in range(cols) if c not in set(red.pivots)]
    k = zeros(cols, len(free), p)
    for j, f in enumerate(free):
        k[f, j] = 1
        for i, pc in enumerate(red.pivots):
            k[pc, j] = (-red.reduced[i, f]) % p
    return k


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """Solve ``a x = b`` for a one- or multi-column ``b``.

    Returns ``(particular, homogeneous)``. ``particular`` is ``None`` when the
    system is inconsistent; otherwise it is the solution with every free
    variable set to zero. ``homogeneous`` is :func:`kernel_basis` of ``a``.
    """
    b = np.asarray(b)
    single = b.ndim == 1
    b2 = b.reshape(-1, 1) if single else b
    rows, cols = a.shape
    if b2.shape[0] != rows:
        raise ValueError(f"row mismatch: a has {rows} rows, b has {b2.shape[0]}")
    nrhs = b2.shape[1]
    aug = np.concatenate([np.asarray(a, dtype=_dtype(p)) % p,
                          np.asarray(b2, dtype=_dtype(p)) % p], axis=1)
    red = rref(aug, p)
    if any(pc >= cols for pc in red.pivots):
        return None, kernel_basis(a, p)
    x = zeros(cols, nrhs, p)
    for i, pc in enumerate(red.pivots):
        x[pc] = red.reduced[i, cols:]
    homogeneous = kernel_basis(a, p) if rows else identity(cols, p)
    if single:
        x = x[:, 0]
    return x, homogeneous


def solve_particular(a: np.ndarray, b: np.ndarray, p: int):
    """Like :func:`solve` but skips the kernel; returns ``None`` if inconsistent."""
    b = np.asarray(b)
    single = b.ndim == 1
    b2 = b.reshape(-1, 1) if single else b
    cols = a.shape[1]
    aug = np.concatenate([np.asarray(a, dtype=_dtype(p)) % p,
                          np.asarray(b2, dtype=_dtype(p)) % p], axis=1)
    red = rref(aug, p)
    if any(pc >= cols for pc in red.pivots):
        return None
    x = zeros(cols, b2.shape[1], p)
    for i, pc in enumerate(red.pivots):
        x[pc] = red.reduced[i, cols:]
    return x[:, 0] if single else x


def column_basis(a: np.ndarray, p: int) -> np.ndarray:
    """An independent subset of the columns of ``a`` spanning its column space."""
    if a.shape[1] == 0:
        return a.copy()
    red = rref(a, p)
    return a[:, list(red.pivots)] % p


def complement_indices(basis: np.ndarray, p: int) -> list[int]:
    """Standard basis indices completing the columns of ``basis`` to a basis."""
    n = basis.shape[0]
    red = rref(np.concatenate([basis % p, identity(n, p)], axis=1), p)
    k = basis.shape[1]
    return [c - k for c in red.pivots if c >= k]


def left_inverse(basis: np.ndarray, p: int) -> np.ndarray:
    """``L`` with ``L @ basis = I`` for a full-column-rank ``basis``."""
    n, k = basis.shape
    if k == 0:
        return zeros(0, n, p)
    comp = complement_indices(basis, p)
    square = np.concatenate([basis, identity(n, p)[:, comp]], axis=1)
    inv = inverse(square, p)
    return inv[:k]


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return zeros(0, 0, p)
    red = rref(np.concatenate([a % p, identity(n, p)], axis=1), p)
    if red.rank < n or red.pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return red.reduced[:, n:]


def same_column_space(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    ra, rb = rank(a, p), rank(b, p)
    if ra != rb:
        return False
    return rank(np.concatenate([a, b], axis=1), p) == ra


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorisation, so ``vec(A X B) = kron(B.T, A) vec(X)``."""
    return m.reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v).reshape((rows, cols), order="F")

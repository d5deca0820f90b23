"""Vectorized exact arithmetic mod p on numpy int64 arrays.

These are the hot-path counterparts of :mod:`linalg` for prime fields:
batches of candidate matrices are filtered with tensor contractions and
explicit ``% p`` reductions.  Entries stay below 2^16 and dimensions
below ~16, so int64 products and sums never overflow.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """inverse_table(p)[a] = a^-1 mod p for a in 1..p-1 (index 0 unused)."""
    table = np.zeros(p, dtype=np.int64)
    table[1:] = [pow(a, p - 2, p) for a in range(1, p)]
    return table


def structure_tensor(algebra) -> np.ndarray:
    """Dense T[i, j, k] with [e_i, e_j]_k = T[i, j, k] (prime field only)."""
    if not algebra.field.is_prime:
        raise ValueError("structure tensor fast path needs a prime field")
    n = algebra.dim
    T = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), terms in algebra.sc.items():
        for k, c in terms:
            T[i, j, k] = c
            T[j, i, k] = (-c) % algebra.field.p
    return T


def matrix_to_array(m) -> np.ndarray:
    return np.array([list(r) for r in m.rows], dtype=np.int64)


def subspace_constraints(s) -> np.ndarray:
    """Rows C with s = {x : C x = 0}; shape (n - dim, n)."""
    ann = s.annihilator()
    if not ann.rows:
        return np.zeros((0, s.ambient_dim), dtype=np.int64)
    return matrix_to_array(ann)


def batch_invertible(mats: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of invertibility for a (B, n, n) batch, Gaussian mod p."""
    A = (mats % p).astype(np.int64).copy()
    B, n, _ = A.shape
    if B == 0:
        return np.zeros(0, dtype=bool)
    ok = np.ones(B, dtype=bool)
    inv = inverse_table(p)
    idx = np.arange(B)
    for c in range(n):
        col = A[:, c:, c]
        nz = col != 0
        ok &= nz.any(axis=1)
        piv = c + np.argmax(nz, axis=1)
        rows_c = A[idx, c, :].copy()
        A[idx, c, :] = A[idx, piv, :]
        A[idx, piv, :] = rows_c
        pivval = A[:, c, c]
        scale = inv[np.where(pivval == 0, 1, pivval)]
        A[:, c, :] = (A[:, c, :] * scale[:, None]) % p
        if c + 1 < n:
            factors = A[:, c + 1 :, c]
            A[:, c + 1 :, :] = (A[:, c + 1 :, :] - factors[:, :, None] * A[:, c, None, :]) % p
    return ok


def batch_compose(outer: np.ndarray, inner: np.ndarray, p: int) -> np.ndarray:
    """Matrices of outer∘inner for aligned batches (apply inner first)."""
    return np.matmul(outer, inner) % p


def batch_is_homomorphism(mats: np.ndarray, T: np.ndarray, p: int) -> np.ndarray:
    """Mask of f([e_i,e_j]) == [f(e_i), f(e_j)] over all basis pairs."""
    lhs = np.einsum("ijl,brl->bijr", T, mats)
    rhs = np.einsum("bli,bmj,lmr->bijr", mats, mats, T)
    return (((lhs - rhs) % p) == 0).all(axis=(1, 2, 3))


def batch_commuting_form(mats: np.ndarray, T: np.ndarray, p: int) -> np.ndarray:
    """S[b,i,j,:] = [f(e_i), e_j]; f commuting iff S + S^T(i<->j) vanishes."""
    return np.einsum("bli,ljr->bijr", mats, T) % p


def batch_is_commuting(mats: np.ndarray, T: np.ndarray, p: int) -> np.ndarray:
    S = batch_commuting_form(mats, T, p)
    sym = (S + S.transpose(0, 2, 1, 3)) % p
    # for odd p the symmetrized condition subsumes the diagonal [f(e_i), e_i] = 0
    return (sym == 0).all(axis=(1, 2, 3))


def batch_in_subspace(columns: np.ndarray, constraints: np.ndarray, p: int) -> np.ndarray:
    """Mask over batch: every column of each matrix satisfies C x = 0."""
    if constraints.shape[0] == 0:
        return np.ones(columns.shape[0], dtype=bool)
    res = np.einsum("cn,bnk->bck", constraints, columns) % p
    return (res == 0).all(axis=(1, 2))

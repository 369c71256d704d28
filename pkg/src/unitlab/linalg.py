"""Gauss-Jordan elimination over F_p on integer numpy arrays."""

from __future__ import annotations

import numpy as np


def rref(mat, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
    A = np.array(mat, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        f = A[:, c].copy()
        f[r] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            A[hit] = (A[hit] - np.outer(f[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(mat, p: int) -> int:
    return len(rref(mat, p)[1])


def nullspace(mat, p: int) -> np.ndarray:
    """Basis (as rows) of {v : mat @ v = 0 mod p}."""
    A = np.array(mat, dtype=np.int64)
    n = A.shape[1]
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-R[row, f]) % p
    return basis


class Subspace:
    """Row space over F_p kept in reduced echelon form."""

    def __init__(self, rows, p: int, ncols: int | None = None):
        rows = np.array(rows, dtype=np.int64)
        if rows.size == 0:
            if ncols is None and rows.ndim == 2:
                ncols = rows.shape[1]
            if ncols is None:
                raise ValueError("ncols is required for an empty spanning set")
            rows = np.zeros((0, ncols), dtype=np.int64)
        self.p = p
        self.basis, self.pivots = rref(rows, p)
        self.ncols = rows.shape[1]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> np.ndarray:
        """Remainder of v after clearing every pivot column."""
        v = np.array(v, dtype=np.int64) % self.p
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace(np.vstack([self.basis, other.basis]), self.p, self.ncols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.basis, other.basis)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ncols={self.ncols}, p={self.p})"

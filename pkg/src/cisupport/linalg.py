"""Dense linear algebra over a prime field, on int64 numpy arrays.

All routines return fresh arrays with entries in ``[0, p)``.  The prime is
assumed below 2**31 so that a single product fits comfortably in int64.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 4096


def as_mod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


_EXACT = 2.0 ** 53


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p``.

    Goes through float64 BLAS when every partial sum is below ``2**53`` (then
    the result is exact), otherwise through int64 with the inner dimension chunked.
    """
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    if a.shape[1] * float(p - 1) ** 2 < _EXACT:
        prod = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return prod.astype(np.int64) % p
    if a.shape[1] <= _CHUNK:
        return (a @ b) % p
    out = zeros(a.shape[0], b.shape[1])
    for k in range(0, a.shape[1], _CHUNK):
        out = (out + a[:, k:k + _CHUNK] @ b[k:k + _CHUNK]) % p
    return out


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns.

    Row updates are not reduced as they happen: each adds less than ``p**2`` in
    absolute value, so int64 absorbs far more updates than there are pivots.
    Only the pivot row and the column being searched are reduced eagerly.
    """
    A = np.array(mat, dtype=np.int64) % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c] % p)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        prow = A[r, c:] % p
        prow = (prow * pow(int(prow[0]), -1, p)) % p
        A[r, c:] = prow
        col = A[:, c] % p
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit, c:] -= np.outer(col[hit], prow)
        pivots.append(c)
        r += 1
    return A[:r] % p, pivots


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    return len(rref(mat, p)[1])


def nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : mat @ x = 0}``."""
    cols = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(mat, p)
    free = [j for j in range(cols) if j not in set(piv)]
    N = zeros(len(free), cols)
    if not free:
        return N
    N[np.arange(len(free)), free] = 1
    if piv:
        N[:, piv] = (-R[:, free].T) % p
    return N


def row_basis(rows: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    if rows.shape[0] == 0:
        return rows.reshape(0, rows.shape[1]), []
    return rref(rows, p)


def reduce_rows(vecs: np.ndarray, R: np.ndarray, piv: list[int], p: int) -> np.ndarray:
    """Reduce row vectors modulo the span of an RREF basis ``R``."""
    if not piv or vecs.shape[0] == 0:
        return vecs % p
    return (vecs - matmul(vecs[:, piv] % p, R, p)) % p


def independent_mod(candidates: np.ndarray, R: np.ndarray, piv: list[int], p: int) -> list[int]:
    """Indices of a maximal subset of candidate rows independent modulo span(R).

    The first independent candidates (in order) are chosen.
    """
    if candidates.shape[0] == 0:
        return []
    red = reduce_rows(candidates, R, piv, p)
    _, cpiv = rref(red.T, p)
    return list(cpiv)


def quotient_basis(R: np.ndarray, piv: list[int], dim: int) -> list[int]:
    """Coordinates spanning a complement of span(R) (the non-pivot columns)."""
    s = set(piv)
    return [j for j in range(dim) if j not in s]


def coordinates(basis: np.ndarray, vecs: np.ndarray, p: int) -> np.ndarray:
    """Solve ``X @ basis = vecs`` for independent rows ``basis``.

    Raises ValueError if some vector is outside the span.
    """
    k = basis.shape[0]
    m = vecs.shape[0]
    if m == 0:
        return zeros(0, k)
    if k == 0:
        if np.any(vecs % p):
            raise ValueError("vector outside span")
        return zeros(m, 0)
    aug = np.hstack([basis.T % p, vecs.T % p])
    R, piv = rref(aug, p)
    if piv[:k] != list(range(k)) or any(c >= k for c in piv):
        raise ValueError("vector outside span or dependent basis")
    return R[:k, k:].T.copy()


def inverse(mat: np.ndarray, p: int) -> np.ndarray:
    n = mat.shape[0]
    R, piv = rref(np.hstack([mat % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return R[:n, n:].copy()


class SpanSolver:
    """Repeated ``X @ basis = vecs`` solves against fixed independent rows ``basis``."""

    def __init__(self, basis: np.ndarray, p: int):
        self.basis = basis % p
        self.p = p
        k = basis.shape[0]
        if k:
            _, piv = rref(self.basis, p)
            if len(piv) != k:
                raise ValueError("dependent basis")
            self.piv = piv
            self.inv = inverse(self.basis[:, piv], p)

    def solve(self, vecs: np.ndarray) -> np.ndarray:
        k = self.basis.shape[0]
        if vecs.shape[0] == 0 or k == 0:
            if k == 0 and np.any(vecs % self.p):
                raise ValueError("vector outside span")
            return zeros(vecs.shape[0], k)
        X = matmul(vecs[:, self.piv] % self.p, self.inv, self.p)
        if not np.array_equal(matmul(X, self.basis, self.p), vecs % self.p):
            raise ValueError("vector outside span")
        return X


def in_span(R: np.ndarray, piv: list[int], vecs: np.ndarray, p: int) -> bool:
    return not np.any(reduce_rows(vecs, R, piv, p))


def intersect_rowspaces(U: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    """Basis rows of span(U) ∩ span(V)."""
    if U.shape[0] == 0 or V.shape[0] == 0:
        return zeros(0, U.shape[1])
    # x U = y V  <=>  [x, -y] in left kernel of [U; V]
    K = nullspace(np.vstack([U, V]).T, p)
    if K.shape[0] == 0:
        return zeros(0, U.shape[1])
    W = matmul(K[:, : U.shape[0]], U % p, p)
    R, _ = row_basis(W, p)
    return R

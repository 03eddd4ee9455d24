"""Matrix helpers shared by exact (object dtype) and floating (complex) paths.

Exact matrices are numpy object arrays holding :class:`~pftori.scalars.QI`,
Fractions or ints; numpy's ``@``/``+``/``.T`` already work on them.  What
numpy lacks for object arrays (inverse, rank, determinant, real/imag parts)
lives here.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalars import QI, PiLinear, is_exact

DEFAULT_TOL = 1e-12


def is_exact_array(M) -> bool:
    M = np.asarray(M)
    return M.dtype == object and all(is_exact(x) for x in M.flat)


def exact_array(rows) -> np.ndarray:
    """Object array of QI from nested lists of ints/Fractions/QI."""
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = x if isinstance(x, (QI, PiLinear)) else QI(x)
    return out


def rational_array(rows) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Fraction(x)
    return out


def to_numeric(M) -> np.ndarray:
    M = np.asarray(M)
    if M.dtype == object:
        return np.vectorize(complex, otypes=[complex])(M) if M.size else M.astype(complex)
    return M.astype(complex)


def real_part(M):
    M = np.asarray(M)
    if M.dtype == object:
        return np.vectorize(lambda x: x.real if not isinstance(x, int) else x, otypes=[object])(M)
    return np.real(M)


def imag_part(M):
    M = np.asarray(M)
    if M.dtype == object:
        return np.vectorize(lambda x: x.imag if not isinstance(x, int) else 0, otypes=[object])(M)
    return np.imag(M)


def conj(M):
    M = np.asarray(M)
    if M.dtype == object:
        return np.vectorize(lambda x: x.conjugate(), otypes=[object])(M)
    return np.conj(M)


def identity_like(M, n=None):
    M = np.asarray(M)
    n = M.shape[0] if n is None else n
    if M.dtype == object:
        return exact_array(np.eye(n, dtype=int).tolist())
    return np.eye(n, dtype=complex)


def is_zero(x, tol=None) -> bool:
    if tol is None:
        return x == 0
    return abs(x) <= tol


def all_zero(M, tol=None) -> bool:
    M = np.asarray(M)
    if M.dtype == object and tol is None:
        return all(x == 0 for x in M.flat)
    if M.size == 0:
        return True
    return float(np.max(np.abs(to_numeric(M)))) <= (tol if tol is not None else 0.0)


def max_abs(M) -> float:
    M = to_numeric(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def tol_for(*arrays):
    """``None`` (exact comparison) when every input is exact, else the default float tolerance."""
    return None if all(is_exact_array(a) for a in arrays) else DEFAULT_TOL


def _pivot_row(M, col, start, exact):
    rows = range(start, M.shape[0])
    if exact:
        for i in rows:
            if M[i, col] != 0:
                return i
        return None
    best = max(rows, key=lambda i: abs(M[i, col]), default=None)
    if best is None or abs(M[best, col]) <= 1e-300:
        return None
    return best


def inv(M):
    """Inverse; Gauss-Jordan over the exact field for object arrays."""
    M = np.asarray(M)
    n, m = M.shape
    if n != m:
        raise ValueError("inverse of non-square matrix")
    if M.dtype != object:
        return np.linalg.inv(M)
    aug = np.empty((n, 2 * n), dtype=object)
    aug[:, :n] = M
    aug[:, n:] = identity_like(M)
    for col in range(n):
        piv = _pivot_row(aug, col, col, exact=True)
        if piv is None:
            raise np.linalg.LinAlgError("singular matrix")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        p = aug[col, col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i, col] != 0:
                f = aug[i, col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return aug[:, n:]


def det(M):
    M = np.asarray(M)
    if M.dtype != object:
        return np.linalg.det(M)
    A = M.copy()
    n = A.shape[0]
    out = QI(1)
    for col in range(n):
        piv = _pivot_row(A, col, col, exact=True)
        if piv is None:
            return QI(0)
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            out = -out
        p = A[col, col]
        out = out * p
        for i in range(col + 1, n):
            if A[i, col] != 0:
                f = A[i, col] / p
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return out


def rref(M, tol=None):
    """Reduced row echelon form and pivot columns.

    Exact when ``tol`` is None (pivot = first nonzero entry in the column),
    otherwise partial pivoting with entries below ``tol`` treated as zero.
    """
    A = np.array(M, dtype=object if tol is None else complex, copy=True)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        if tol is None:
            piv = next((i for i in range(r, rows) if A[i, c] != 0), None)
        else:
            cand = max(range(r, rows), key=lambda i: abs(A[i, c]))
            piv = cand if abs(A[cand, c]) > tol else None
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        p = A[r, c]
        A[r] = [x / p for x in A[r]] if tol is None else A[r] / p
        for i in range(rows):
            if i != r and not is_zero(A[i, c], tol):
                f = A[i, c]
                if tol is None:
                    A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                else:
                    A[i] = A[i] - f * A[r]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M, tol=None) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if tol is not None:
        s = np.linalg.svd(to_numeric(M), compute_uv=False)
        return int(np.sum(s > tol))
    return len(rref(M)[1])


def is_symmetric(M, tol=None) -> bool:
    M = np.asarray(M)
    return all_zero(M - M.T, tol)


def leading_minors(M):
    """Leading principal minors ``det(M[:k,:k])`` for k = 1..n."""
    M = np.asarray(M)
    return [det(M[:k, :k]) for k in range(1, M.shape[0] + 1)]

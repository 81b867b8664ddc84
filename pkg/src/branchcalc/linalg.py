"""Dense complex linear algebra primitives and brute-force oracles.

Everything here works on plain ``numpy`` arrays interpreted as square
complex matrices (the carrier type for all abstract operators in this
package).  Matrices stay small (desk scale, dim <= 64), so the routines
favour transparency over asymptotic speed.
"""

from __future__ import annotations

import numpy as np

from .errors import MatrixExpOverflowError, SingularMatrixError


def as_complex_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a square complex 2-d array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError("matrix entries must be finite")
    return m


def lu_solve(a, rhs) -> np.ndarray:
    """Solve ``a @ x = rhs`` by LU factorization with partial pivoting.

    Raises :class:`SingularMatrixError` when a pivot magnitude falls below
    ``dim * eps * max_row_norm``, the standard backward-stable threshold.
    ``rhs`` may be a vector or a matrix with matching leading dimension.
    """
    a = as_complex_matrix(a)
    n = a.shape[0]
    b = np.asarray(rhs, dtype=complex)
    vector_rhs = b.ndim == 1
    if vector_rhs:
        b = b[:, None]
    if b.shape[0] != n:
        raise ValueError(f"rhs has {b.shape[0]} rows, expected {n}")

    lu = a.copy()
    b = b.copy()
    row_norm = np.max(np.sum(np.abs(a), axis=1)) if n else 0.0
    tiny = n * np.finfo(float).eps * max(row_norm, 1e-300)

    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if np.abs(lu[p, k]) <= tiny:
            raise SingularMatrixError(
                f"pivot {np.abs(lu[p, k]):.3e} below threshold {tiny:.3e} "
                f"at column {k}"
            )
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = lu[k + 1 :, k] / lu[k, k]
        lu[k + 1 :, k] = factors
        lu[k + 1 :, k + 1 :] -= np.outer(factors, lu[k, k + 1 :])

    # forward substitution with the unit-lower factor, then back substitution
    for k in range(n):
        b[k + 1 :] -= np.outer(lu[k + 1 :, k], b[k])
    for k in range(n - 1, -1, -1):
        b[k] /= lu[k, k]
        b[:k] -= np.outer(lu[:k, k], b[k])

    return b[:, 0] if vector_rhs else b


def opnorm2(a, rel_tol: float = 1e-12, max_iter: int = 1000) -> float:
    """Spectral norm of ``a`` by power iteration on ``a* a``.

    Deterministic start vector; returns 0.0 for the zero matrix.  The
    Rayleigh estimate converges to the top singular value even when the
    iteration vector itself wanders inside a tied top singular space.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError("opnorm2 expects a 2-d array")
    m, n = a.shape
    if m == 0 or n == 0 or not np.any(a):
        return 0.0

    rng = np.random.default_rng(0xB5EC)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = a @ v
        estimate = np.linalg.norm(w)  # = sqrt(v* A*A v) for unit v
        if estimate == 0.0:
            return 0.0
        u = a.conj().T @ w
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return float(estimate)
        v = u / nu
        if abs(estimate - sigma) <= rel_tol * max(estimate, 1e-300):
            return float(estimate)
        sigma = estimate
    return float(sigma)


def matexp_oracle(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring of the power series.

    Used as an independent oracle: ``matexp_oracle(log(A))`` must recover
    ``A``.  Relative accuracy is ~1e-10 for ``norm(A) <= 1e3``.  Raises
    :class:`MatrixExpOverflowError` if the result leaves double range.
    """
    a = as_complex_matrix(a)
    n = a.shape[0]
    norm = np.max(np.sum(np.abs(a), axis=1)) if n else 0.0
    s = 0 if norm <= 0.5 else int(np.ceil(np.log2(norm / 0.5)))
    if s > 80:
        raise MatrixExpOverflowError(f"norm {norm:.3e} beyond representable scaling")
    b = a / (2.0**s)

    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 60):
        term = term @ b / k
        result += term
        if np.max(np.abs(term)) <= 1e-20 * max(1.0, np.max(np.abs(result))):
            break
    for _ in range(s):
        result = result @ result
    if not np.all(np.isfinite(result.view(float))):
        raise MatrixExpOverflowError("matrix exponential overflowed")
    return result

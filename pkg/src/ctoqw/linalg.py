"""Dense complex-matrix kernels shared by the rest of the package.

Conventions used everywhere:

* ``vec`` is COLUMN-stacking, so ``vec(L @ rho @ R) = kron(R.T, L) @ vec(rho)``.
  All superoperator matrices in this package rely on that one identity.
* Matrices are ``numpy.ndarray`` of ``complex128``; no wrapper classes.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "mat_exp",
    "hermitian_eig",
    "null_space",
    "superop_matrix",
    "vec",
    "unvec",
]

# Pade-13 coefficients for the scaling-and-squaring exponential.
_PADE13_B = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
# 1-norm threshold below which the degree-13 approximant reaches machine
# precision without scaling (Higham 2005).
_PADE13_THETA = 5.371920351148152


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("matrix has non-finite entries")
    return a


def mat_exp(m, t: float = 1.0) -> np.ndarray:
    """Matrix exponential e^{t m} by scaling-and-squaring with a Pade-13 core.

    Relative accuracy is at machine-precision level for any square input;
    the scaling power is chosen from the 1-norm of ``t*m``.
    """
    a = _as_square(m) * t
    n = a.shape[0]
    ident = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a, 1)
    if norm == 0.0:
        return ident.copy()
    s = max(0, int(np.ceil(np.log2(norm / _PADE13_THETA))))
    a = a / (2.0**s)

    b = _PADE13_B
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (
        a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
        + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident
    )
    v = (
        a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
        + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    )
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def hermitian_eig(m, tol: float = 1e-10):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    eigenvector columns ``v``. The input is symmetrized internally; a
    Hermiticity defect beyond ``tol`` (relative to the largest entry) is
    rejected as a likely caller error.
    """
    a = _as_square(m)
    scale = max(1.0, float(np.abs(a).max()))
    defect = float(np.abs(a - a.conj().T).max())
    if defect > tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.1e} * {scale:.3e}"
        )
    w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    return w, v


def null_space(m, rel_tol: float = 1e-10) -> list[np.ndarray]:
    """Orthonormal basis of the right kernel of ``m``.

    Kernel directions are the right-singular vectors whose singular value is
    below ``rel_tol * sigma_max``. A zero matrix yields the full space.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if not (0.0 < rel_tol < 1.0):
        raise ValueError("rel_tol must lie in (0, 1)")
    _, s, vh = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return [vh[i].conj() for i in range(a.shape[1])]
    cols = a.shape[1]
    out = []
    for i in range(cols):
        sigma = s[i] if i < s.size else 0.0
        if sigma < rel_tol * smax:
            out.append(vh[i].conj())
    return out


def superop_matrix(left_right_pairs) -> np.ndarray:
    """Matrix of ``rho -> sum_k L_k rho R_k`` in the column-stacking vec basis.

    Returns the d^2 x d^2 matrix ``S`` with ``S @ vec(rho) = vec(sum L rho R)``
    via the identity ``vec(L rho R) = kron(R.T, L) vec(rho)``.
    """
    pairs = [( _as_square(l), _as_square(r)) for l, r in left_right_pairs]
    if not pairs:
        raise ValueError("need at least one (L, R) pair")
    d = pairs[0][0].shape[0]
    for l, r in pairs:
        if l.shape[0] != d or r.shape[0] != d:
            raise ValueError("all pairs must share one dimension")
    s = np.zeros((d * d, d * d), dtype=complex)
    for l, r in pairs:
        s += np.kron(r.T, l)
    return s


def vec(m) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v, d: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec` for a square matrix."""
    a = np.asarray(v, dtype=complex).ravel()
    if d is None:
        d = int(round(np.sqrt(a.size)))
    if d * d != a.size:
        raise ValueError(f"length {a.size} is not a square")
    return a.reshape(d, d, order="F")

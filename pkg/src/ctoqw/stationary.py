"""Internal-state generator: stationary states, drift, and shared eigenbases.

Ignoring position, the internal d-dimensional state of the walk evolves under

    L(rho) = -i[H, rho] - {C*C + A*A, rho}/2 + C rho C* + A rho A*,

a trace-annihilating Lindblad generator built from the coin. Its kernel holds
the stationary internal states; when that kernel is one-dimensional the walk
has a well-defined net velocity

    m = Tr(A rho_inv A*) - Tr(C rho_inv C*),

and the centered observable admits a drift operator J solving
L*(J) = -(A*A - C*C - m I), unique up to multiples of the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .linalg import null_space, superop_matrix, unvec, vec
from .model import Coin, no_jump_generator

# Singular values below KERNEL_RTOL * sigma_max count as kernel directions.
KERNEL_RTOL = 1e-10
# A candidate stationary state may not dip below this eigenvalue.
PSD_FLOOR = -1e-10
# Kernel elements with |trace| below this cannot be normalized to a state.
TRACE_FLOOR = 1e-10
# Relative Frobenius tolerances for the shared-eigenbasis test.
NORMALITY_RTOL = 1e-10
COMMUTE_RTOL = 1e-10

# tau values with irrational pairwise ratios; two suffice in exact arithmetic.
_TAUS = (0.6180339887498949, 0.41421356237309515, 1.7320508075688772, 0.3183098861837907)


@dataclass(frozen=True)
class StationaryAnalysis:
    """Kernel of the internal generator, reduced to its Hermitian part."""

    kernel_dim: int
    stationary_basis: list
    unique_stationary: bool
    rho_inv: np.ndarray | None = None
    degenerate: bool = False
    note: str = ""


def internal_lindblad(coin: Coin, rho) -> np.ndarray:
    """Apply L to a Hermitian matrix directly (no superoperator)."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (coin.dim, coin.dim):
        raise ValueError(f"state shape {r.shape} does not match coin dimension {coin.dim}")
    c, a, h = coin.left, coin.right, coin.ham
    rate = coin.rate_operator()
    out = -1j * (h @ r - r @ h)
    out -= 0.5 * (rate @ r + r @ rate)
    out += c @ r @ c.conj().T
    out += a @ r @ a.conj().T
    return out


def internal_lindblad_matrix(coin: Coin) -> np.ndarray:
    """d^2 x d^2 matrix S with S @ vec(rho) = vec(L(rho))."""
    g0 = no_jump_generator(coin)
    eye = np.eye(coin.dim)
    return superop_matrix(
        [
            (g0, eye),
            (eye, g0.conj().T),
            (coin.left, coin.left.conj().T),
            (coin.right, coin.right.conj().T),
        ]
    )


def _hermitian_kernel_basis(kernel_vecs: list, d: int) -> list:
    """Orthonormal Hermitian basis of the *-closed span of kernel vectors.

    L commutes with the adjoint, so its kernel is closed under X -> X* and is
    spanned by the Hermitian and anti-Hermitian parts of any basis. Those
    parts are collected and reduced to an orthonormal real basis by SVD; the
    real dimension of that span equals the complex kernel dimension.
    """
    if not kernel_vecs:
        return []
    cands = []
    for v in kernel_vecs:
        x = unvec(v, d)
        cands.append((x + x.conj().T) / 2.0)
        cands.append((x - x.conj().T) / 2.0j)
    # Hermitian matrices form a real vector space; coordinates are the real
    # and imaginary entry grids stacked side by side.
    rows = np.array([np.concatenate([m.real.ravel(), m.imag.ravel()]) for m in cands])
    u, s, vh = np.linalg.svd(rows, full_matrices=False)
    keep = s > KERNEL_RTOL * max(s[0], 1e-300)
    basis = []
    for row in vh[keep]:
        m = row[: d * d].reshape(d, d) + 1j * row[d * d :].reshape(d, d)
        m = (m + m.conj().T) / 2.0
        basis.append(m / np.linalg.norm(m))
    return basis


def stationary_states(coin: Coin) -> StationaryAnalysis:
    """Kernel of L, and the stationary density when it is unique.

    The complex kernel of the superoperator matrix is projected to Hermitian
    matrices. If the Hermitian kernel is one-dimensional, its element is
    normalized by trace to the stationary density; a near-zero trace is
    flagged as numerical degeneracy instead of dividing.
    """
    s = internal_lindblad_matrix(coin)
    kernel = null_space(s, rel_tol=KERNEL_RTOL)
    if not kernel:
        raise ArithmeticError(
            "empty stationary kernel: a finite-dimensional Lindblad semigroup "
            "always has a stationary state, so this is a numerical failure"
        )
    basis = _hermitian_kernel_basis(kernel, coin.dim)
    kdim = len(basis)
    if kdim != 1:
        return StationaryAnalysis(
            kernel_dim=kdim,
            stationary_basis=basis,
            unique_stationary=False,
            note=f"{kdim} independent stationary directions",
        )
    b = basis[0]
    tr = float(np.trace(b).real)
    if abs(tr) < TRACE_FLOOR:
        return StationaryAnalysis(
            kernel_dim=1,
            stationary_basis=basis,
            unique_stationary=False,
            degenerate=True,
            note="one-dimensional kernel with near-zero trace; cannot normalize",
        )
    rho = b / tr
    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < PSD_FLOOR:
        return StationaryAnalysis(
            kernel_dim=1,
            stationary_basis=basis,
            unique_stationary=False,
            degenerate=True,
            note=f"normalized kernel element has eigenvalue {lo:.3e}",
        )
    return StationaryAnalysis(
        kernel_dim=1,
        stationary_basis=basis,
        unique_stationary=True,
        rho_inv=rho,
    )


def drift(coin: Coin, rho_inv) -> float:
    """Net velocity m = Tr(A rho A*) - Tr(C rho C*) at a stationary state."""
    rho = np.asarray(rho_inv, dtype=complex)
    resid = float(np.linalg.norm(internal_lindblad(coin, rho)))
    if resid > 1e-8:
        raise ValueError(f"state is not stationary: |L(rho)| = {resid:.3e}")
    a, c = coin.right, coin.left
    m = np.trace(a @ rho @ a.conj().T) - np.trace(c @ rho @ c.conj().T)
    if abs(m.imag) > 1e-12:
        raise ArithmeticError(f"drift has imaginary part {m.imag:.3e}")
    return float(m.real)


def solve_drift_operator(coin: Coin, m: float) -> tuple[np.ndarray, float]:
    """Least-squares J with L*(J) = -(A*A - C*C - m I), gauge Tr(J) = 0.

    The adjoint acts as the conjugate transpose of the superoperator matrix.
    Solutions differ by multiples of the identity (which L* annihilates), so
    the returned J is the trace-free representative. The residual
    |L*(J) + (A*A - C*C - m I)| is reported always; it is small exactly when
    a true solution exists.
    """
    d = coin.dim
    s_adj = internal_lindblad_matrix(coin).conj().T
    rhs = -(
        coin.right.conj().T @ coin.right
        - coin.left.conj().T @ coin.left
        - m * np.eye(d)
    )
    x, *_ = np.linalg.lstsq(s_adj, vec(rhs), rcond=None)
    j = unvec(x, d)
    j = (j + j.conj().T) / 2.0
    j = j - (np.trace(j) / d) * np.eye(d)
    residual = float(np.linalg.norm(unvec(s_adj @ vec(j), d) - rhs))
    return j, residual


def _is_normal(m: np.ndarray) -> bool:
    n2 = float(np.linalg.norm(m)) ** 2
    if n2 == 0.0:
        return True
    return float(np.linalg.norm(m @ m.conj().T - m.conj().T @ m)) <= NORMALITY_RTOL * n2


def common_eigenstructure(c, a) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
    """Shared orthonormal eigenbasis of a commuting normal pair (d = 2 only).

    Returns (U, c_diag, a_diag) with U unitary and U* C U, U* A U diagonal,
    or None when the pair is not normal-and-commuting at tolerance. The basis
    is found by diagonalizing C + tau A for an irrational tau, retrying with
    a fresh tau if that combination has a degenerate spectrum.
    """
    cm = np.asarray(c, dtype=complex)
    am = np.asarray(a, dtype=complex)
    if cm.shape != (2, 2) or am.shape != (2, 2):
        raise ValueError("shared-eigenbasis extraction is defined for 2x2 pairs only")
    if not (_is_normal(cm) and _is_normal(am)):
        return None
    nc, na = np.linalg.norm(cm), np.linalg.norm(am)
    if float(np.linalg.norm(cm @ am - am @ cm)) > COMMUTE_RTOL * max(nc * na, 1e-300):
        return None

    scale = max(nc, na, 1e-300)
    last = None
    for tau in _TAUS:
        t, u = scipy.linalg.schur(cm + tau * am, output="complex")
        cd = u.conj().T @ cm @ u
        ad = u.conj().T @ am @ u
        off = max(abs(cd[0, 1]), abs(cd[1, 0]), abs(ad[0, 1]), abs(ad[1, 0]))
        last = (u, np.diag(cd).copy(), np.diag(ad).copy(), off)
        if off <= 1e-8 * scale and abs(t[0, 0] - t[1, 1]) > 1e-12 * scale:
            return last[:3]
    # Degenerate spectra for every tau means C and A are both (near) scalar,
    # in which case any orthonormal basis that passed the off-diagonal check
    # serves as the shared basis.
    if last is not None and last[3] <= 1e-8 * scale:
        return last[:3]
    return None

"""Domain types for walks on the integer line with an internal degree of freedom.

A walk is specified by a *coin*: a triple of d x d complex matrices
``(left, right, ham)`` where ``left`` is the rate operator for jumps to the
neighbouring site on the left, ``right`` the one for jumps to the right, and
``ham`` an on-site Hamiltonian. Between jumps the (unnormalized) internal
state evolves by the contraction semigroup generated by

    G0 = -i ham - (left* left + right* right) / 2,

which satisfies G0 + G0* = -(left* left + right* right).
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Coin",
    "validate_coin",
    "no_jump_generator",
    "density_from_pure",
    "check_density",
    "coin_from_dict",
    "coin_to_dict",
    "load_coin",
    "save_coin",
]

# Hermiticity handling for the supplied Hamiltonian: defects below the silent
# tolerance are rounding noise, defects up to the warn tolerance are fixed
# with a warning, anything larger is rejected as a likely user error.
HAM_SILENT_TOL = 1e-10
HAM_WARN_TOL = 1e-6


@dataclass(frozen=True)
class Coin:
    """Immutable walk specification (left/right jump operators, Hamiltonian)."""

    left: np.ndarray
    right: np.ndarray
    ham: np.ndarray
    dim: int
    ham_defect: float = 0.0

    def __post_init__(self):
        for a in (self.left, self.right, self.ham):
            a.setflags(write=False)

    def rate_operator(self) -> np.ndarray:
        """left*left + right*right, the total jump-rate operator."""
        return self.left.conj().T @ self.left + self.right.conj().T @ self.right


def _square(a, name: str, d: int | None) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if d is not None and m.shape[0] != d:
        raise ValueError(f"{name} is {m.shape[0]}x{m.shape[0]}, expected d={d}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValueError(f"{name} has non-finite entries")
    return m


def validate_coin(left, right, ham, d: int | None = None) -> Coin:
    """Validate raw matrices and build a :class:`Coin`.

    The Hamiltonian is symmetrized to (ham + ham*)/2; the defect magnitude is
    recorded on the coin. A coin whose jump operators are both zero never
    moves and is rejected.
    """
    c = _square(left, "left", d)
    d = c.shape[0]
    a = _square(right, "right", d)
    h = _square(ham, "ham", d)

    scale = max(1.0, float(np.abs(h).max()))
    defect = float(np.abs(h - h.conj().T).max())
    if defect > HAM_WARN_TOL * scale:
        raise ValueError(
            f"ham is not Hermitian: defect {defect:.3e} (tolerance {HAM_WARN_TOL:.1e})"
        )
    if defect > HAM_SILENT_TOL * scale:
        warnings.warn(
            f"ham had Hermiticity defect {defect:.3e}; symmetrized", stacklevel=2
        )
    h = (h + h.conj().T) / 2.0

    if np.abs(c).max() == 0.0 and np.abs(a).max() == 0.0:
        raise ValueError("left and right jump operators are both zero; the walk never moves")

    return Coin(left=c, right=a, ham=h, dim=d, ham_defect=defect)


def no_jump_generator(coin: Coin) -> np.ndarray:
    """G0 = -i ham - (left*left + right*right)/2, the between-jump generator."""
    return -1j * coin.ham - 0.5 * coin.rate_operator()


def density_from_pure(v) -> np.ndarray:
    """Normalized rank-one density |v><v| / <v|v>."""
    x = np.asarray(v, dtype=complex).ravel()
    n2 = float(np.vdot(x, x).real)
    if n2 == 0.0:
        raise ValueError("zero vector has no associated state")
    return np.outer(x, x.conj()) / n2


def check_density(rho, herm_tol: float = 1e-10, eig_floor: float = -1e-10,
                  trace_tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix (Hermitian, PSD up to floor, unit trace).

    Returns the Hermitian-projected matrix; raises ``ValueError`` on violation.
    """
    m = _square(rho, "rho", None)
    scale = max(1.0, float(np.abs(m).max()))
    defect = float(np.abs(m - m.conj().T).max())
    if defect > herm_tol * scale:
        raise ValueError(f"density is not Hermitian: defect {defect:.3e}")
    m = (m + m.conj().T) / 2.0
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density trace {tr!r} differs from 1 beyond {trace_tol:.1e}")
    lo = float(np.linalg.eigvalsh(m).min())
    if lo < eig_floor:
        raise ValueError(f"density has eigenvalue {lo:.3e} below floor {eig_floor:.1e}")
    return m


# ---------------------------------------------------------------------------
# Coin file format: {"d": int, "C": [[[re,im],...],...], "A": ..., "H": ...}
# matrices row-major, complex scalars as [re, im] pairs. The keys C/A/H match
# the left/right/ham fields in that order.

def _matrix_to_pairs(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _pairs_to_matrix(rows, name: str) -> np.ndarray:
    try:
        m = np.array([[complex(z[0], z[1]) for z in row] for row in rows])
    except (TypeError, IndexError) as exc:
        raise ValueError(f"{name} must be a matrix of [re, im] pairs") from exc
    return m


def coin_to_dict(coin: Coin) -> dict:
    return {
        "d": coin.dim,
        "C": _matrix_to_pairs(coin.left),
        "A": _matrix_to_pairs(coin.right),
        "H": _matrix_to_pairs(coin.ham),
    }


def coin_from_dict(doc: dict) -> Coin:
    try:
        d = int(doc["d"])
        raw = {k: doc[k] for k in ("C", "A", "H")}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("coin document needs keys d, C, A, H") from exc
    mats = {k: _pairs_to_matrix(v, k) for k, v in raw.items()}
    return validate_coin(mats["C"], mats["A"], mats["H"], d=d)


def load_coin(path) -> Coin:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed coin JSON in {path}: {exc}") from exc
    return coin_from_dict(doc)


def save_coin(coin: Coin, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(coin_to_dict(coin), fh, indent=2)
        fh.write("\n")

"""Gallery of example coins with known behavior.

These families exercise every classification branch and carry closed-form
stationary states or drifts where available; they back the demo scripts, the
CLI ``verify`` command, and the test suite.
"""

from __future__ import annotations

import numpy as np

from .model import Coin, validate_coin

SQRT2 = float(np.sqrt(2.0))
SQRT71 = float(np.sqrt(71.0))


def scalar_coin(a: float = 1.0, c: float = 1.0, h: float = 0.0) -> Coin:
    """Dimension-1 coin: a classical birth-death walk with rates |a|^2, |c|^2."""
    return validate_coin([[c]], [[a]], [[h]])


def diagonal_jumps_coin(a: complex = 2.0 * SQRT2) -> Coin:
    """Diagonal jump rates with a mixing Hamiltonian (d=2).

    The mixing makes the stationary state unique (I/2), so the walk is
    recurrent exactly when the summed squared rates balance:
    2 + 11 = 5 + |a|^2, i.e. |a| = 2*sqrt(2).
    """
    c = np.diag([np.sqrt(2.0), np.sqrt(11.0)])
    av = np.diag([-np.sqrt(5.0), a])
    h = np.array([[1.0, 1.0 - 2.0j], [1.0 + 2.0j, 1.0]])
    return validate_coin(c, av, h)


def shared_eigenbasis_coin(a: complex, c: complex, ham=None) -> Coin:
    """Commuting normal pair with eigenvectors u1 = (-i,1)/sqrt2, u2 = (i,1)/sqrt2.

    C has eigenvalues (1, c) and A has (a, 2) on (u1, u2). With the default
    Hamiltonian (identity) the shared basis decouples and the per-eigenvector
    rate comparison |a| vs 1 and |c| vs 2 decides recurrence branch by
    branch, including the partially recurrent cases.
    """
    cm = 0.5 * np.array([[1 + c, 1j * (-1 + c)], [1j * (1 - c), 1 + c]])
    am = 0.5 * np.array([[2 + a, 1j * (2 - a)], [1j * (-2 + a), 2 + a]])
    if ham is None:
        ham = np.eye(2)
    return validate_coin(cm, am, ham)


def shared_basis_vectors() -> np.ndarray:
    """Columns u1, u2 of the shared eigenbasis used by shared_eigenbasis_coin."""
    return np.array([[-1j, 1j], [1.0, 1.0]]) / SQRT2


def tilted_pair_coin(y: float, h: float) -> Coin:
    """Non-normal pair sharing one eigenvector at y=0 and none otherwise (d=2).

    The stationary state is unique for generic (y, h); the drift has the
    closed form m = 2h(3h-4)/(4h^2+6h+7) at y = 0, so the walk is recurrent
    there exactly for h in {0, 4/3}. For y != 0 the recurrence boundary in h
    solves a quadratic; see :func:`tilted_pair_boundary`.
    """
    c = np.array([[-1.0, 1.0], [2.0 * y, 1.0]])
    a = np.array([[1.0, 1.0], [y, 2.0]])
    hm = np.array([[0.0, 1j * h], [-1j * h, 0.0]])
    return validate_coin(c, a, hm)


def tilted_pair_boundary(y: float) -> tuple[float, float]:
    """The two h values where tilted_pair_coin(y, h) has zero drift (|y| != 1)."""
    disc = (
        415.0 * y**4 - 332.0 * y**2 - 48.0 * y**3 - 162.0 * y**5
        + 16.0 + 120.0 * y + 135.0 * y**6
    )
    if disc < 0:
        raise ValueError(f"no real zero-drift boundary at y={y}")
    root = np.sqrt(disc)
    base = y**2 - 4.0 + 3.0 * y + 12.0 * y**3
    den = 6.0 * (y**2 - 1.0)
    return (base + root) / den, (base - root) / den


def three_level_coin(c: float) -> Coin:
    """Dimension-3 coin with a rank-deficient left jump operator.

    At c=0 the stationary state is (1/53)[[21, -19-2i, 0], [-19+2i, 32, 0],
    [0, 0, 0]] with drift m = -6/53 (transient); at c=1 it is diag(1,1,0)/2
    with m = 0 (recurrent).
    """
    cm = np.array([[c, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    am = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]])
    hm = np.array([[1.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    return validate_coin(cm, am, hm)


def three_level_stationary(c: float) -> np.ndarray:
    """Closed-form stationary state of three_level_coin for c in {0, 1}."""
    if c == 0:
        return np.array(
            [[21.0, -19.0 - 2.0j, 0.0], [-19.0 + 2.0j, 32.0, 0.0], [0.0, 0.0, 0.0]]
        ) / 53.0
    if c == 1:
        return np.diag([0.5, 0.5, 0.0]).astype(complex)
    raise ValueError("closed form known only for c in {0, 1}")


def verify_cases() -> list:
    """(name, coin, expectations) rows for the built-in verification suite.

    Expectation keys: ``verdict`` (string), optional ``m`` (value, abs tol),
    optional ``rho_inv`` (matrix, entrywise tol), optional
    ``transient_state`` (matrix, entrywise tol).
    """
    u = shared_basis_vectors()
    proj = [np.outer(u[:, k], u[:, k].conj()) for k in (0, 1)]
    h_plus, h_minus = (2.0 + SQRT71) / 12.0, (2.0 - SQRT71) / 12.0
    return [
        ("diagonal-jumps a=2*sqrt(2)", diagonal_jumps_coin(2.0 * SQRT2),
         {"verdict": "Recurrent", "m": (0.0, 1e-9)}),
        ("diagonal-jumps a=3", diagonal_jumps_coin(3.0),
         {"verdict": "Transient", "m": (0.5, 1e-9)}),
        ("shared-basis both-unequal a=1.5 c=1", shared_eigenbasis_coin(1.5, 1.0),
         {"verdict": "Transient"}),
        ("shared-basis both-equal a=1 c=2", shared_eigenbasis_coin(1.0, 2.0),
         {"verdict": "Recurrent"}),
        ("shared-basis first-unequal a=1.7 c=2", shared_eigenbasis_coin(1.7, 2.0),
         {"verdict": "PartiallyRecurrent", "transient_state": (proj[0], 1e-8)}),
        ("shared-basis second-unequal a=1 c=2.6", shared_eigenbasis_coin(1.0, 2.6),
         {"verdict": "PartiallyRecurrent", "transient_state": (proj[1], 1e-8)}),
        ("shared-basis scalar pair, mixing ham",
         shared_eigenbasis_coin(2.0, 1.0, ham=np.array([[1.0, 0.3], [0.3, 1.0]])),
         {"verdict": "Transient"}),
        ("tilted-pair y=0 h=1", tilted_pair_coin(0.0, 1.0),
         {"verdict": "Transient", "m": (-2.0 / 17.0, 1e-9)}),
        ("tilted-pair y=0 h=4/3", tilted_pair_coin(0.0, 4.0 / 3.0),
         {"verdict": "Recurrent", "m": (0.0, 1e-9)}),
        ("tilted-pair y=1/2 boundary+", tilted_pair_coin(0.5, h_plus),
         {"verdict": "Recurrent"}),
        ("tilted-pair y=1/2 boundary-", tilted_pair_coin(0.5, h_minus),
         {"verdict": "Recurrent"}),
        ("tilted-pair y=1/2 off-boundary", tilted_pair_coin(0.5, h_plus + 0.1),
         {"verdict": "Transient"}),
        ("three-level c=0", three_level_coin(0.0),
         {"verdict": "Transient", "m": (-6.0 / 53.0, 1e-9),
          "rho_inv": (three_level_stationary(0.0), 1e-9)}),
        ("three-level c=1", three_level_coin(1.0),
         {"verdict": "Recurrent", "m": (0.0, 1e-9),
          "rho_inv": (three_level_stationary(1.0), 1e-9)}),
        ("scalar symmetric a=c=1", scalar_coin(1.0, 1.0),
         {"verdict": "Recurrent", "m": (0.0, 1e-12)}),
        ("scalar biased a=2 c=1", scalar_coin(2.0, 1.0),
         {"verdict": "Transient", "m": (3.0, 1e-12)}),
    ]

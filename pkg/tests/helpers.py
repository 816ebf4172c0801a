"""Shared helpers for the test suite: random coin factories and matrix probes."""

import numpy as np

from ctoqw import Coin, validate_coin


def random_hermitian(rng, d: int, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (m + m.conj().T) / 2.0


def random_matrix(rng, d: int, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))


def random_unitary(rng, d: int) -> np.ndarray:
    q, r = np.linalg.qr(random_matrix(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_coin(rng, d: int, ham_scale: float = 1.0) -> Coin:
    return validate_coin(
        random_matrix(rng, d, 0.8),
        random_matrix(rng, d, 0.8),
        random_hermitian(rng, d, ham_scale),
    )


def random_diagonal_coin(rng, d: int = 2, diagonal_ham: bool = False) -> Coin:
    c = np.diag(rng.uniform(0.2, 1.5, size=d) * np.exp(2j * np.pi * rng.random(d)))
    a = np.diag(rng.uniform(0.2, 1.5, size=d) * np.exp(2j * np.pi * rng.random(d)))
    if diagonal_ham:
        h = np.diag(rng.uniform(-1.0, 1.0, size=d)).astype(complex)
    else:
        h = random_hermitian(rng, d)
    return validate_coin(c, a, h)


def random_density(rng, d: int) -> np.ndarray:
    m = random_matrix(rng, d)
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def same_projector(p, q, tol: float = 1e-8) -> bool:
    return np.max(np.abs(np.asarray(p) - np.asarray(q))) < tol

"""Monte Carlo unraveling of the walk: jump sampling and drift estimation.

Between jumps the (unnormalized) internal state follows the linear flow
sigma_t = e^{G0 t} rho e^{G0* t}, whose trace S(t) is exactly the
no-jump-yet probability. A jump time is drawn by solving S(t) = u for
uniform u; the jump goes right with probability proportional to
Tr(A sigma A*) and left with Tr(C sigma C*), and the state restarts from the
normalized post-jump density. Averaging X_T / T over many independent paths
estimates the net velocity m.

Sampling uses the linear unnormalized evolution rather than the nonlinear
normalized ODE; the two are equivalent (the normalization cancels in every
sampled probability) and the linear form needs only d x d exponentials. When
G0 is safely diagonalizable the survival function and its derivative are
evaluated from cached spectral data, otherwise each evaluation falls back to
a fresh matrix exponential.

Reproducibility: every path k of a run with seed s draws from its own
counter-based stream keyed by (s, k), so results do not depend on scheduling
and any path can be regenerated in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import mat_exp
from .model import Coin, check_density, no_jump_generator

REL_TIME_TOL = 1e-10
MAX_JUMPS = 10 ** 6
# Condition-number ceiling for trusting the eigendecomposition of G0.
_EIG_COND_CAP = 1e8
# Bracket-doubling guard, in units of the fastest jump timescale.
_GUARD_FACTOR = 1e9


@dataclass
class TrajectoryPath:
    """One sampled path: jump times plus site/state history.

    ``sites`` and ``states`` carry the pre-jump starting values first, so
    they are one longer than ``jump_times``: sites[k] is the position after
    the k-th jump and states[k] the internal density right after it.
    """

    jump_times: np.ndarray
    sites: np.ndarray
    states: list
    horizon: float


@dataclass
class DriftEstimate:
    mean: float
    stderr: float
    n_paths: int
    horizon: float
    seed: int


class JumpSampler:
    """Per-coin cached machinery for drawing jumps from any current state."""

    def __init__(self, coin: Coin):
        self.coin = coin
        self._g0 = no_jump_generator(coin)
        rate = coin.rate_operator()
        lam = float(np.linalg.eigvalsh(rate).max())
        if lam <= 0.0:
            raise ValueError("total jump rate vanishes; the coin never jumps")
        self.rate_scale = lam

        w, v = np.linalg.eig(self._g0)
        cond = float(np.linalg.cond(v))
        self._spectral = bool(np.isfinite(cond) and cond < _EIG_COND_CAP)
        if self._spectral:
            self._w = w
            self._v = v
            self._vi = np.linalg.inv(v)
            self._q_t = (v.conj().T @ v).T
            self._z = w[:, None] + w.conj()[None, :]

    def _state_cache(self, rho: np.ndarray):
        if self._spectral:
            p = self._vi @ rho @ self._vi.conj().T
            return p * self._q_t, p
        return None

    def _survival_slope(self, cache, rho, t: float):
        """S(t) = Tr e^{G0 t} rho e^{G0* t} and dS/dt."""
        if self._spectral:
            weights, _ = cache
            e = np.exp(self._z * t)
            s = float(np.sum(weights * e).real)
            ds = float(np.sum(weights * self._z * e).real)
            return s, ds
        et = mat_exp(self._g0, t)
        sigma = et @ rho @ et.conj().T
        s = float(np.trace(sigma).real)
        ds = 2.0 * float(np.trace(self._g0 @ sigma).real)
        return s, ds

    def _sigma(self, cache, rho, t: float) -> np.ndarray:
        if self._spectral:
            _, p = cache
            return self._v @ (p * np.exp(self._z * t)) @ self._v.conj().T
        et = mat_exp(self._g0, t)
        return et @ rho @ et.conj().T

    def next_jump(self, rho: np.ndarray, rng, t_cap: float | None = None):
        """Draw (dt, direction, rho_after), or None if no jump before t_cap.

        Uniform variates are consumed in a fixed order: first the jump time,
        then (when a jump happens) the direction.
        """
        cache = self._state_cache(rho)
        u = rng.random()

        def surv(t):
            return self._survival_slope(cache, rho, t)

        if t_cap is not None:
            if t_cap <= 0.0 or surv(t_cap)[0] > u:
                return None

        # Bracket [lo, hi] with S(lo) > u >= S(hi).
        lo, hi = 0.0, 1.0 / self.rate_scale
        if t_cap is not None:
            hi = min(hi, t_cap)
        guard = _GUARD_FACTOR / self.rate_scale
        while surv(hi)[0] > u:
            lo = hi
            hi *= 2.0
            if t_cap is not None:
                hi = min(hi, t_cap)
            if hi > guard:
                raise RuntimeError(
                    "survival never crossed the target within the guard "
                    "horizon; the jump rate may vanish on a trapped subspace"
                )

        x = 0.5 * (lo + hi)
        for _ in range(200):
            s, ds = surv(x)
            if s > u:
                lo = x
            else:
                hi = x
            if hi - lo <= REL_TIME_TOL * max(hi, 1e-300):
                break
            step = x - (s - u) / ds if ds < 0 else math.nan
            x = step if lo < step < hi else 0.5 * (lo + hi)
        dt = 0.5 * (lo + hi)

        sigma = self._sigma(cache, rho, dt)
        a, c = self.coin.right, self.coin.left
        w_right = float(np.trace(a @ sigma @ a.conj().T).real)
        w_left = float(np.trace(c @ sigma @ c.conj().T).real)
        total = w_right + w_left
        if not (total > 0.0):
            raise ArithmeticError("zero total jump weight at the sampled time")
        direction = 1 if rng.random() < w_right / total else -1
        k = a if direction == 1 else c
        post = k @ sigma @ k.conj().T
        post = (post + post.conj().T) / 2.0
        tr = float(np.trace(post).real)
        if tr <= 0.0:
            raise ArithmeticError("post-jump state has nonpositive trace")
        return dt, direction, post / tr


def sample_next_jump(coin: Coin, rho, rng):
    """One jump from a fresh sampler: (dt, direction, rho_after)."""
    return JumpSampler(coin).next_jump(check_density(rho), rng)


def _simulate(sampler: JumpSampler, i0: int, rho0, horizon: float, rng) -> TrajectoryPath:
    rho = check_density(rho0)
    t = 0.0
    site = int(i0)
    jump_times: list[float] = []
    sites = [site]
    states = [rho]
    while True:
        drawn = sampler.next_jump(rho, rng, t_cap=horizon - t)
        if drawn is None:
            break
        dt, direction, rho = drawn
        t += dt
        site += direction
        jump_times.append(t)
        sites.append(site)
        states.append(rho)
        if len(jump_times) >= MAX_JUMPS:
            raise RuntimeError(
                f"exceeded {MAX_JUMPS} jumps before the horizon; the walk "
                f"should not explode, so this indicates a bug or a "
                f"pathological coin"
            )
    return TrajectoryPath(
        jump_times=np.array(jump_times),
        sites=np.array(sites, dtype=int),
        states=states,
        horizon=float(horizon),
    )


def simulate_path(coin: Coin, i0: int, rho0, horizon: float, rng) -> TrajectoryPath:
    """Sample one trajectory up to the horizon."""
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    return _simulate(JumpSampler(coin), i0, rho0, horizon, rng)


def path_rng(seed: int, path_index: int) -> np.random.Generator:
    """The deterministic sub-stream for one path of a seeded run."""
    return np.random.Generator(np.random.Philox(key=[seed, path_index]))


def estimate_drift(coin: Coin, rho0, horizon: float, n_paths: int, seed: int,
                   i0: int = 0) -> DriftEstimate:
    """Mean of X_T / T over independent paths, with its standard error.

    Path k draws from the stream keyed by (seed, k); the estimate is
    reproducible for a fixed seed and unchanged by evaluation order.
    """
    if horizon < 100:
        raise ValueError("drift estimation needs horizon >= 100 (drift regime)")
    if n_paths < 100:
        raise ValueError("drift estimation needs at least 100 paths")
    sampler = JumpSampler(coin)
    rho = check_density(rho0)
    vals = []
    for k in range(n_paths):
        path = _simulate(sampler, i0, rho, horizon, path_rng(seed, k))
        vals.append((path.sites[-1] - i0) / horizon)
    mean = math.fsum(vals) / n_paths
    var = math.fsum((v - mean) ** 2 for v in vals) / (n_paths - 1)
    return DriftEstimate(
        mean=mean,
        stderr=math.sqrt(var / n_paths),
        n_paths=n_paths,
        horizon=float(horizon),
        seed=int(seed),
    )


def survival_probability(coin: Coin, rho, t: float) -> float:
    """No-jump probability Tr(e^{G0 t} rho e^{G0* t}) from a given state."""
    sampler = JumpSampler(coin)
    r = check_density(rho)
    s, _ = sampler._survival_slope(sampler._state_cache(r), r, float(t))
    return s


def write_path_csv(f, path: TrajectoryPath) -> None:
    """CSV export with header jump_index,time,site; row 0 is the start."""
    f.write("jump_index,time,site\n")
    f.write(f"0,0,{int(path.sites[0])}\n")
    for k, (t, s) in enumerate(zip(path.jump_times, path.sites[1:]), start=1):
        f.write(f"{k},{float(t):.17g},{int(s)}\n")


def drift_to_dict(est: DriftEstimate) -> dict:
    return {
        "mean": est.mean,
        "stderr": est.stderr,
        "n_paths": est.n_paths,
        "horizon": est.horizon,
        "seed": est.seed,
    }

"""Time-domain propagation: matrix exponentials, stochastic telegraph
averaging, and the fast-switching effective generator.

The Monte Carlo path is deliberately independent of the doubled-space
machinery: it draws explicit +/-1 noise trajectories, integrates the
piecewise-constant generator exactly between switching events, and averages.
Agreement with the doubled-generator solution is therefore a genuine
cross-check of the closure, not a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .exceptions import ConfigurationError, DimensionMismatchError
from .lindblad import (
    JumpChannel,
    build_liouvillian,
    population_trace,
    vectorize,
)
from .policy import DEFAULT_POLICY, NumericPolicy
from .telegraph import RtnSpec, coupling_matrix

__all__ = [
    "TimeGrid",
    "Trajectory",
    "McConfig",
    "propagate_expm",
    "propagate_montecarlo",
    "white_noise_generator",
    "sample_telegraph",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid on [t_start, t_end] with num_points samples."""

    t_start: float
    t_end: float
    num_points: int

    def __post_init__(self):
        if self.t_start < 0:
            raise ConfigurationError(f"t_start must be >= 0, got {self.t_start}")
        if self.t_end <= self.t_start:
            raise ConfigurationError(
                f"t_end ({self.t_end}) must exceed t_start ({self.t_start})"
            )
        if self.num_points < 2:
            raise ConfigurationError(
                f"num_points must be >= 2, got {self.num_points}"
            )

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.num_points)

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / (self.num_points - 1)


@dataclass(frozen=True)
class Trajectory:
    """States sampled on a uniform grid, tagged with the producing method."""

    times: TimeGrid
    states: np.ndarray  # (num_points, n) or (num_points, 2n), complex
    method: str  # spectral | expm | montecarlo | whitenoise
    meta: dict = field(default_factory=dict)

    def validate(self, *, policy: NumericPolicy = DEFAULT_POLICY,
                 trace_tol: float | None = None) -> None:
        """Check unit population trace at every sample.

        Statistical methods pass a looser trace_tol.
        """
        tol = trace_tol if trace_tol is not None else 1e-8
        traces = np.array([population_trace(s) for s in self.states])
        worst = float(np.abs(traces - 1.0).max())
        if worst > tol:
            raise ConfigurationError(
                f"trajectory trace drifts by {worst:.3e} (tolerance {tol:g})"
            )


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings.

    flip_rate defaults to nu/2 (the switching rate that produces the
    exp(-nu|t-s|) autocorrelation); n_batches controls the batch-mean
    standard-error estimate attached to the result.
    """

    num_trajectories: int
    seed: int
    dt: float
    flip_rate: float | None = None
    n_batches: int = 20

    def __post_init__(self):
        if self.num_trajectories < 1:
            raise ConfigurationError("num_trajectories must be >= 1")
        if self.dt <= 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.n_batches < 1:
            raise ConfigurationError("n_batches must be >= 1")


def propagate_expm(
    A: np.ndarray,
    x0: np.ndarray,
    grid: TimeGrid,
    *,
    method: str = "expm",
) -> Trajectory:
    """x(t_i) = exp(A t_i) x0 on a uniform grid.

    One scaling-and-squaring exponential of the step matrix is reused for
    every interval; the start offset gets its own exponential if nonzero.
    """
    A = np.asarray(A, dtype=complex)
    x0 = np.asarray(x0, dtype=complex).ravel()
    if A.shape != (x0.size, x0.size):
        raise DimensionMismatchError(
            f"generator shape {A.shape} does not match state length {x0.size}"
        )
    step = expm(A * grid.dt)
    cur = x0 if grid.t_start == 0 else expm(A * grid.t_start) @ x0
    out = np.empty((grid.num_points, x0.size), dtype=complex)
    for i in range(grid.num_points):
        out[i] = cur
        if i + 1 < grid.num_points:
            cur = step @ cur
    return Trajectory(times=grid, states=out, method=method)


def _trajectory_rng(seed: int, index: int) -> np.random.Generator:
    # counter-based stream keyed by (seed, trajectory index); reduction in
    # index order makes the ensemble average bitwise reproducible
    key = (int(seed) << 64) | int(index)
    return np.random.Generator(np.random.Philox(key=key))


def _draw_flips(rng: np.random.Generator, flip_rate: float, horizon: float):
    """Initial sign and the exact exponential flip times up to the horizon."""
    eta0 = 1 if rng.random() < 0.5 else -1
    flips: list[float] = []
    if flip_rate > 0:
        t = rng.exponential(1.0 / flip_rate)
        while t < horizon:
            flips.append(t)
            t += rng.exponential(1.0 / flip_rate)
    return eta0, flips


def propagate_montecarlo(
    H0: np.ndarray,
    channels: list[JumpChannel] | tuple[JumpChannel, ...],
    spec: RtnSpec,
    rho0: np.ndarray,
    grid: TimeGrid,
    cfg: McConfig,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
    allow_nonphysical: bool = False,
) -> Trajectory:
    """Average explicit telegraph-noise trajectories of the Lindblad system.

    Each trajectory draws eta(0) = +/-1 with equal probability and flips it
    at exponential waiting times of rate nu/2; between flips the generator
    is constant (W0 +/- coupling) and segments are propagated by exact
    matrix exponentials, so the only sampling error is statistical.
    """
    if abs(grid.dt - cfg.dt) > 1e-12 * max(1.0, cfg.dt):
        raise ConfigurationError(
            f"McConfig.dt ({cfg.dt}) must equal the grid spacing ({grid.dt})"
        )
    if spec.nu > 0 and cfg.dt > 0.1 / spec.nu:
        raise ConfigurationError(
            f"dt = {cfg.dt} too coarse for nu = {spec.nu}; require dt <= 0.1/nu"
        )
    W0 = build_liouvillian(H0, channels, policy=policy)
    if np.any(np.abs(np.linalg.eigvals(W0)) * cfg.dt >= 0.1):
        raise ConfigurationError(
            "dt times the spectral radius of the generator must stay below 0.1"
        )
    if cfg.num_trajectories % cfg.n_batches != 0:
        raise ConfigurationError(
            f"num_trajectories ({cfg.num_trajectories}) must be divisible by "
            f"n_batches ({cfg.n_batches})"
        )

    delta = coupling_matrix(spec)
    W_plus, W_minus = W0 + delta, W0 - delta
    E_plus, E_minus = expm(W_plus * grid.dt), expm(W_minus * grid.dt)

    p0 = vectorize(rho0, policy=policy, allow_nonphysical=allow_nonphysical)
    n = p0.size
    N = cfg.num_trajectories
    flip_rate = cfg.flip_rate if cfg.flip_rate is not None else spec.nu / 2.0

    horizon = grid.t_end
    eta = np.empty(N, dtype=np.int8)
    flip_times: list[list[float]] = []
    for i in range(N):
        eta0, flips = _draw_flips(_trajectory_rng(cfg.seed, i), flip_rate, horizon)
        eta[i] = eta0
        flip_times.append(flips)
    next_flip = np.array(
        [ft[0] if ft else np.inf for ft in flip_times], dtype=float
    )
    flip_pos = np.zeros(N, dtype=np.int64)

    states = np.tile(p0, (N, 1))
    times = grid.times
    batch = N // cfg.n_batches
    means = np.empty((grid.num_points, n), dtype=complex)
    batch_means = np.empty((grid.num_points, cfg.n_batches, n), dtype=complex)

    def record(idx: int) -> None:
        grouped = states.reshape(cfg.n_batches, batch, n).mean(axis=1)
        batch_means[idx] = grouped
        means[idx] = grouped.mean(axis=0)

    if grid.t_start != 0:
        raise ConfigurationError("Monte Carlo propagation must start at t = 0")
    record(0)
    t_prev = 0.0
    for step_idx in range(1, grid.num_points):
        t_next = times[step_idx]
        flip_mask = next_flip < t_next
        flipping = np.flatnonzero(flip_mask)
        for j in flipping:
            t_cur = t_prev
            v = states[j]
            while next_flip[j] < t_next:
                seg = next_flip[j] - t_cur
                gen = W_plus if eta[j] > 0 else W_minus
                v = expm(gen * seg) @ v
                t_cur = next_flip[j]
                eta[j] = -eta[j]
                flip_pos[j] += 1
                ft = flip_times[j]
                next_flip[j] = (
                    ft[flip_pos[j]] if flip_pos[j] < len(ft) else np.inf
                )
            gen = W_plus if eta[j] > 0 else W_minus
            states[j] = expm(gen * (t_next - t_cur)) @ v
        steady = np.flatnonzero(~flip_mask)
        plus = steady[eta[steady] > 0]
        minus = steady[eta[steady] < 0]
        if plus.size:
            states[plus] = states[plus] @ E_plus.T
        if minus.size:
            states[minus] = states[minus] @ E_minus.T
        record(step_idx)
        t_prev = t_next

    return Trajectory(
        times=grid,
        states=means,
        method="montecarlo",
        meta={
            "delta1": spec.delta1,
            "nu": spec.nu,
            "seed": cfg.seed,
            "num_trajectories": N,
            "batch_means": batch_means,
        },
    )


def white_noise_generator(W0: np.ndarray, spec: RtnSpec) -> np.ndarray:
    """Effective generator in the fast-switching limit.

    For nu much larger than every system rate the telegraph perturbation
    acts like white noise and contributes the double-commutator dissipator
    -(delta1^2/nu) [J, [J, .]]; in vectorized form W0 + (delta1^2/nu) M^2
    with M the unit-strength coupling block.
    """
    if spec.nu <= 0:
        raise ConfigurationError("white-noise limit requires nu > 0")
    W0 = np.asarray(W0, dtype=complex)
    unit = RtnSpec(J=spec.J, delta1=1.0, nu=spec.nu)
    M = coupling_matrix(unit)
    if W0.shape != M.shape:
        raise DimensionMismatchError(
            f"W0 shape {W0.shape} does not match coupling shape {M.shape}"
        )
    return W0 + (spec.delta1 ** 2 / spec.nu) * (M @ M)


def sample_telegraph(
    spec: RtnSpec,
    grid: TimeGrid,
    num_trajectories: int,
    seed: int,
) -> np.ndarray:
    """Sampled +/-1 noise signals on the grid, shape (num_trajectories, T).

    Useful for checking the autocorrelation exp(-nu|t-s|) directly.
    """
    times = grid.times
    out = np.empty((num_trajectories, times.size), dtype=np.int8)
    rate = spec.nu / 2.0
    for i in range(num_trajectories):
        rng = _trajectory_rng(seed, i)
        eta, flips = _draw_flips(rng, rate, grid.t_end)
        pos = 0
        for k, t in enumerate(times):
            while pos < len(flips) and flips[pos] <= t:
                eta = -eta
                pos += 1
            out[i, k] = eta
    return out

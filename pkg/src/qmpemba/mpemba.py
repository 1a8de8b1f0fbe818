"""Distance-to-equilibrium measures, crossing detection and classification,
coherence relative entropy, and log-linear tail fitting."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dynamics import TimeGrid, Trajectory
from .exceptions import DimensionMismatchError, NonPhysicalStateError
from .lindblad import devectorize
from .policy import DEFAULT_POLICY, NumericPolicy
from .telegraph import project

__all__ = [
    "NORM_KINDS",
    "DistanceSeries",
    "CoherenceSeries",
    "CrossingReport",
    "distance",
    "distance_series",
    "detect_crossings",
    "classify_case",
    "coherence_entropy",
    "coherence_series",
    "fit_tail_rate",
    "turning_point",
    "positive_prefix",
]

NORM_KINDS = ("frobenius_full", "unique_elements", "trace_distance")

CASE_LABELS = (
    "none",
    "case1_weak_induce",
    "case2_strong_induce",
    "case3_eliminate",
    "case4_eliminate",
)


def _unique_weights(n: int) -> np.ndarray:
    # populations count once; of each coherence pair (ij), (ji) only the
    # first slot counts
    d = round(np.sqrt(n))
    w = np.zeros(n)
    w[:d] = 1.0
    w[d::2] = 1.0
    return w


def distance(p: np.ndarray, pss: np.ndarray, kind: str = "frobenius_full") -> float:
    """Distance between a state vector and the steady state.

    frobenius_full: Euclidean norm of the full element-vector difference
    (equals the Frobenius norm of the matrix difference).
    unique_elements: same, but each off-diagonal pair counts once.
    trace_distance: half the sum of absolute eigenvalues of the
    (Hermitized) matrix difference.
    """
    p = np.asarray(p, dtype=complex).ravel()
    pss = np.asarray(pss, dtype=complex).ravel()
    if p.size != pss.size:
        raise DimensionMismatchError(
            f"state lengths differ: {p.size} vs {pss.size}"
        )
    dv = p - pss
    if kind == "frobenius_full":
        return float(np.linalg.norm(dv))
    if kind == "unique_elements":
        w = _unique_weights(p.size)
        return float(np.sqrt((np.abs(dv) ** 2 * w).sum()))
    if kind == "trace_distance":
        diff = devectorize(dv)
        diff = 0.5 * (diff + diff.conj().T)
        return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())
    raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")


@dataclass(frozen=True)
class DistanceSeries:
    times: TimeGrid
    values: np.ndarray
    norm_kind: str


@dataclass(frozen=True)
class CoherenceSeries:
    times: TimeGrid
    values: np.ndarray  # nats


def distance_series(
    traj: Trajectory, pss: np.ndarray, kind: str = "frobenius_full"
) -> DistanceSeries:
    """Distance trajectory; doubled-space states are projected first."""
    pss = np.asarray(pss, dtype=complex).ravel()
    states = traj.states
    if states.shape[1] == 2 * pss.size:
        states = states[:, : pss.size]
    vals = np.array([distance(s, pss, kind) for s in states])
    return DistanceSeries(times=traj.times, values=vals, norm_kind=kind)


@dataclass(frozen=True)
class CrossingReport:
    crossing_times: tuple[float, ...]
    final_order: str  # "a_farther" | "b_farther" | "tied"
    case_label: str = "none"


def _interp_log(t0, t1, v0, v1, t):
    # exponential (log-linear) interpolation with a linear fallback for
    # nonpositive samples
    if v0 > 0 and v1 > 0:
        lv = np.log(v0) + (np.log(v1) - np.log(v0)) * (t - t0) / (t1 - t0)
        return np.exp(lv)
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


def detect_crossings(
    a: DistanceSeries,
    b: DistanceSeries,
    *,
    noise_floor: float = 1e-10,
    refine_tol: float = 1e-4,
) -> CrossingReport:
    """Sign changes of a - b, refined by bisection on exponentially
    interpolated segments.

    Sign changes whose bracketing gap never exceeds the noise floor are
    ignored as numerical chatter.
    """
    ta, tb = a.times.times, b.times.times
    if a.times != b.times:
        raise DimensionMismatchError("distance series are on different grids")
    diff = a.values - b.values
    crossings: list[float] = []
    for i in range(diff.size - 1):
        d0, d1 = diff[i], diff[i + 1]
        if d0 == 0.0:
            continue
        if d0 * d1 < 0 and max(abs(d0), abs(d1)) > noise_floor:
            lo, hi = ta[i], ta[i + 1]
            flo = d0
            while hi - lo > refine_tol:
                mid = 0.5 * (lo + hi)
                fmid = _interp_log(ta[i], ta[i + 1], a.values[i], a.values[i + 1], mid) \
                    - _interp_log(tb[i], tb[i + 1], b.values[i], b.values[i + 1], mid)
                if flo * fmid <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            crossings.append(0.5 * (lo + hi))
    gap = diff[-1]
    if abs(gap) <= noise_floor:
        order = "tied"
    else:
        order = "a_farther" if gap > 0 else "b_farther"
    return CrossingReport(crossing_times=tuple(crossings), final_order=order)


def classify_case(
    a_alpha: complex,
    a_beta: complex,
    c_alpha: complex,
    c_beta: complex,
    *,
    zero_tol: float = 1e-10,
) -> str:
    """Classify how the noise-induced slow mode rearranges a two-state race.

    Arguments are the slow-mode amplitudes (a) and the noise-mode mixing
    weights (C) of the two states, with the initially farther state passed
    first ("alpha").  With that ordering |a_alpha| > |a_beta| means the
    farther state also relaxes slower, so no anomalous crossing exists
    without noise, and the noise can only create one; |a_alpha| < |a_beta|
    means the crossing already exists and the noise can remove it:

      no unperturbed crossing:  C_a = 0, C_b != 0        -> strong induce
                                0 < |C_a| < |C_b|        -> weak induce
      unperturbed crossing:     C_a != 0, C_b = 0        -> eliminate
                                |C_a| > |C_b| > 0        -> eliminate

    Anything else (including all-zero C) leaves the verdict "none".  Only
    magnitudes and zero patterns matter, so the label is invariant under a
    common rescaling of all four coefficients.
    """
    za = abs(c_alpha) < zero_tol
    zb = abs(c_beta) < zero_tol
    if za and zb:
        return "none"
    if abs(a_alpha) > abs(a_beta):
        if za and not zb:
            return "case2_strong_induce"
        if not za and not zb and abs(c_alpha) < abs(c_beta):
            return "case1_weak_induce"
        return "none"
    if abs(a_alpha) < abs(a_beta):
        if not za and zb:
            return "case3_eliminate"
        if not za and not zb and abs(c_alpha) > abs(c_beta):
            return "case4_eliminate"
        return "none"
    return "none"


def _entropy(eigs: np.ndarray) -> float:
    ev = eigs[eigs > 1e-14]
    return float(-(ev * np.log(ev)).sum())


def coherence_entropy(
    rho: np.ndarray,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
    allow_nonphysical: bool = False,
) -> float:
    """Relative entropy of coherence S(diag rho) - S(rho), in nats.

    Zero exactly for diagonal states.  Eigenvalues slightly below zero
    (within policy.psd_floor) are clamped; anything lower is rejected
    unless allow_nonphysical.
    """
    rho = np.asarray(rho, dtype=complex)
    herm = 0.5 * (rho + rho.conj().T)
    eigs = np.linalg.eigvalsh(herm)
    if eigs.min() < policy.psd_floor and not allow_nonphysical:
        raise NonPhysicalStateError(
            f"density matrix eigenvalue {eigs.min():.3e} below "
            f"{policy.psd_floor:g}; entropy undefined"
        )
    eigs = np.clip(eigs, 0.0, None)
    diag = np.clip(np.diag(herm).real, 0.0, None)
    c = _entropy(np.sort(diag)) - _entropy(eigs)
    if -1e-12 < c < 0.0:
        c = 0.0
    return c


def coherence_series(
    traj: Trajectory,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
    allow_nonphysical: bool = True,
) -> CoherenceSeries:
    """Coherence relative entropy along a trajectory.

    Evolved states can dip a hair below positivity, so clamping is allowed
    by default here (construction-time validation already happened).
    """
    states = traj.states
    n = states.shape[1]
    if round(np.sqrt(n)) ** 2 != n:  # doubled space
        states = states[:, : n // 2]
    vals = np.array([
        coherence_entropy(
            devectorize(s), policy=policy, allow_nonphysical=allow_nonphysical
        )
        for s in states
    ])
    return CoherenceSeries(times=traj.times, values=vals)


def fit_tail_rate(
    series: DistanceSeries | CoherenceSeries,
    window: float = 0.25,
) -> float:
    """Least-squares slope of log(values) over the trailing window fraction."""
    if not 0 < window <= 1:
        raise ValueError(f"window must be in (0, 1], got {window}")
    vals = series.values
    times = series.times.times
    start = int(np.ceil(len(times) * (1.0 - window)))
    start = min(start, len(times) - 2)
    v = vals[start:]
    if np.any(v <= 0):
        raise ValueError(
            "tail window contains nonpositive values; shrink the window or "
            "truncate with positive_prefix first"
        )
    t = times[start:]
    slope, _ = np.polyfit(t, np.log(v), 1)
    return float(slope)


def positive_prefix(
    series: DistanceSeries | CoherenceSeries,
    floor: float = 1e-12,
) -> DistanceSeries | CoherenceSeries:
    """Truncate a series at the last sample above the floor.

    Keeps log-domain fits away from the numerical noise floor where decayed
    values lose all significance.
    """
    vals = series.values
    above = np.flatnonzero(vals > floor)
    if above.size < 2:
        raise ValueError(f"fewer than two samples above floor {floor:g}")
    last = int(above[-1])
    times = series.times.times
    grid = TimeGrid(times[0], times[last], last + 1)
    return replace(series, times=grid, values=vals[: last + 1])


def turning_point(
    series: DistanceSeries | CoherenceSeries,
    *,
    early_window: float = 0.1,
    tail_window: float = 0.25,
    floor: float = 1e-12,
) -> float:
    """Time where the early-time log-slope hands over to the tail slope.

    Fits straight lines to log(values) on the leading and trailing windows
    of the above-floor prefix and returns their intersection; NaN when the
    two slopes are indistinguishable.
    """
    trimmed = positive_prefix(series, floor)
    t = trimmed.times.times
    v = np.log(trimmed.values)
    ne = max(3, int(len(t) * early_window))
    early = np.polyfit(t[:ne], v[:ne], 1)
    ms = min(int(np.ceil(len(t) * (1.0 - tail_window))), len(t) - 3)
    tail = np.polyfit(t[ms:], v[ms:], 1)
    if abs(early[0] - tail[0]) < 1e-9:
        return float("nan")
    return float((tail[1] - early[1]) / (early[0] - tail[0]))

"""Reference three-level cascade: closed-form generators, the four named
initial states, and scenario presets.

The system: levels 1 < 2 < 3 with splittings omega2, omega3 (hbar = 1),
zero-temperature decay channels 2->1, 3->2, 3->1, and a telegraph-modulated
exchange coupling between levels 2 and 3.  The closed-form generator blocks
below double as a regression guard: the generic construction must reproduce
them entrywise, otherwise the element-ordering conventions have drifted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import TimeGrid, Trajectory
from .exceptions import ConfigurationError, ConventionMismatchError
from .lindblad import JumpChannel, build_liouvillian, vectorize
from .mpemba import (
    CoherenceSeries,
    DistanceSeries,
    coherence_series,
    detect_crossings,
    classify_case,
    distance,
    distance_series,
    fit_tail_rate,
    positive_prefix,
    turning_point,
)
from .perturbation import mixing_coefficient
from .policy import DEFAULT_POLICY, NumericPolicy
from .spectral import (
    decompose,
    propagate_spectral,
    steady_state,
    unit_left_overlaps,
)
from .telegraph import RtnSpec, coupling_matrix, embed, extended_generator

__all__ = [
    "ThreeLevelParams",
    "NamedState",
    "STATE_LABELS",
    "hamiltonian",
    "channels",
    "rtn_spec",
    "reference_population_block",
    "reference_coherence_block",
    "reference_coupling",
    "reference_generator",
    "build_reference_system",
    "initial_state",
    "initial_states",
    "coherence_mixing_prefactor_closed_form",
    "population_shift_closed_form",
    "SCENARIOS",
    "spectrum_rows",
    "run_scenario",
]

STATE_LABELS = ("alpha", "beta", "phi", "psi", "psi_corrected")


@dataclass(frozen=True)
class ThreeLevelParams:
    """Decay rates, level splittings, and noise parameters (all rates >= 0)."""

    gamma21: float = 1.0
    gamma31: float = 8.0
    gamma32: float = 1.0
    omega2: float = 1.0
    omega3: float = 2.0
    delta1: float = 0.4
    nu: float = 0.1

    def __post_init__(self):
        for name in ("gamma21", "gamma31", "gamma32", "delta1", "nu"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be nonnegative")


def hamiltonian(params: ThreeLevelParams) -> np.ndarray:
    return np.diag([0.0, params.omega2, params.omega3]).astype(complex)


def channels(params: ThreeLevelParams) -> tuple[JumpChannel, ...]:
    def lower(i: int, j: int) -> np.ndarray:
        op = np.zeros((3, 3), dtype=complex)
        op[i, j] = 1.0
        return op

    return (
        JumpChannel(lower(0, 1), params.gamma21),
        JumpChannel(lower(1, 2), params.gamma32),
        JumpChannel(lower(0, 2), params.gamma31),
    )


def rtn_spec(params: ThreeLevelParams) -> RtnSpec:
    J = np.zeros((3, 3), dtype=complex)
    J[1, 2] = J[2, 1] = 1.0
    return RtnSpec(J=J, delta1=params.delta1, nu=params.nu)


def reference_population_block(params: ThreeLevelParams) -> np.ndarray:
    """Closed-form population generator (basis rho_11, rho_22, rho_33)."""
    g21, g31, g32 = params.gamma21, params.gamma31, params.gamma32
    return np.array(
        [
            [0.0, g21, g31],
            [0.0, -g21, g32],
            [0.0, 0.0, -g32 - g31],
        ],
        dtype=complex,
    )


def reference_coherence_block(params: ThreeLevelParams) -> np.ndarray:
    """Closed-form coherence generator (basis rho_12, rho_21, rho_13,
    rho_31, rho_23, rho_32): each coherence decays at half the total
    outflow of its two levels plus the bare phase rotation."""
    g21, g31, g32 = params.gamma21, params.gamma31, params.gamma32
    w2, w3 = params.omega2, params.omega3
    return np.diag(
        [
            -0.5 * g21 + 1j * w2,
            -0.5 * g21 - 1j * w2,
            -0.5 * (g31 + g32) + 1j * w3,
            -0.5 * (g31 + g32) - 1j * w3,
            -0.5 * (g21 + g31 + g32) + 1j * (w3 - w2),
            -0.5 * (g21 + g31 + g32) - 1j * (w3 - w2),
        ]
    ).astype(complex)


def reference_coupling(params: ThreeLevelParams) -> np.ndarray:
    """Closed-form noise-coupling block for the 2<->3 exchange."""
    pattern = np.array(
        [
            [0, 0, 0, 0, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, 0, 1, -1],
            [0, 0, 0, 0, 0, 0, 0, -1, 1],
            [0, 0, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 0, 0, -1, 0, 0],
            [0, 0, 0, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, -1, 0, 0, 0, 0],
            [0, 1, -1, 0, 0, 0, 0, 0, 0],
            [0, -1, 1, 0, 0, 0, 0, 0, 0],
        ],
        dtype=float,
    )
    return 1j * params.delta1 * pattern


def reference_generator(params: ThreeLevelParams) -> np.ndarray:
    W0 = np.zeros((9, 9), dtype=complex)
    W0[:3, :3] = reference_population_block(params)
    W0[3:, 3:] = reference_coherence_block(params)
    return W0


def build_reference_system(
    params: ThreeLevelParams = ThreeLevelParams(),
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(W0, coupling, extended W) built generically and checked entrywise
    against the closed forms."""
    W0 = build_liouvillian(hamiltonian(params), channels(params), policy=policy)
    spec = rtn_spec(params)
    delta = coupling_matrix(spec)

    ref_w0 = reference_generator(params)
    ref_delta = reference_coupling(params)
    for built, ref, name in ((W0, ref_w0, "W0"), (delta, ref_delta, "coupling")):
        worst = float(np.abs(built - ref).max())
        if worst > policy.construction_tol:
            raise ConventionMismatchError(
                f"generic {name} deviates from the closed form by {worst:.3e}; "
                "element-ordering conventions are inconsistent"
            )
    W = extended_generator(W0, spec, policy=policy)
    return W0, delta, W


_SQ3_4 = math.sqrt(3.0) / 4.0


def initial_state(label: str) -> np.ndarray:
    """Density matrix of a named initial state.

    ``psi`` carries a slight positivity defect (one eigenvalue is about
    -0.047) and is kept verbatim for reproducibility; ``psi_corrected`` is
    the nearest pure state, with coherence 2*sqrt(2)/9 instead of
    2*sqrt(3)/9.
    """
    if label == "alpha":
        return np.diag([0.3, 0.7, 0.0]).astype(complex)
    if label == "beta":
        return np.array(
            [[0.75, 0, _SQ3_4], [0, 0, 0], [_SQ3_4, 0, 0.25]], dtype=complex
        )
    if label == "phi":
        return np.diag([0.8, 0.1, 0.1]).astype(complex)
    if label == "psi":
        c = 2.0 * math.sqrt(3.0) / 9.0
        return np.array([[8 / 9, 0, c], [0, 0, 0], [c, 0, 1 / 9]], dtype=complex)
    if label == "psi_corrected":
        c = 2.0 * math.sqrt(2.0) / 9.0
        return np.array([[8 / 9, 0, c], [0, 0, 0], [c, 0, 1 / 9]], dtype=complex)
    raise ConfigurationError(f"unknown state label {label!r}; expected {STATE_LABELS}")


@dataclass(frozen=True)
class NamedState:
    label: str
    rho: np.ndarray


def initial_states() -> dict[str, NamedState]:
    return {lbl: NamedState(lbl, initial_state(lbl)) for lbl in STATE_LABELS}


def coherence_mixing_prefactor_closed_form(params: ThreeLevelParams) -> complex:
    """Single-term closed form for the prefactor of the slow coherence
    mode's shifted-partner left correction.

    A variant algebraic form kept for magnitude cross-checks: it places nu
    inside the half-rate combination and flips the sign of the imaginary
    part relative to the generic first-order evaluation, so only |.| is
    comparable (they agree to about a percent at nu = 0.1)."""
    g21, g31, g32 = params.gamma21, params.gamma31, params.gamma32
    den = 0.5 * (g31 + g32 - g21 - params.nu) + 1j * (params.omega3 - params.omega2)
    return -1j * params.delta1 / den


def population_shift_closed_form(params: ThreeLevelParams) -> complex:
    """Single-intermediate closed form for the second-order shift of the
    rate-gamma21 population mode.

    An approximation: it keeps one intermediate mode and drops the small
    component of the left vector, so it reproduces the sign and rough size
    of the exact shift but not its value; use second_order_eigenvalue for
    the quantitative result."""
    g21, g31, g32 = params.gamma21, params.gamma31, params.gamma32
    den = 0.5 * (g31 + g32 - g21 + 2 * params.nu) + 1j * (
        params.omega2 - params.omega3
    )
    return -params.delta1 ** 2 / den


# ---------------------------------------------------------------------------
# scenario presets

DEFAULT_GRID = TimeGrid(0.0, 20.0, 2001)

SCENARIOS = ("fig1a", "fig1b", "fig2", "table2")

_FIG2_SETTINGS = (
    ("nonoise", 0.0, None),
    ("d040_nu010", 0.4, 0.1),
    ("d040_nu005", 0.4, 0.05),
    ("d060_nu010", 0.6, 0.1),
)


@dataclass(frozen=True)
class ScenarioBundle:
    """Everything a scenario produced: trajectories, per-curve series,
    spectra, and the JSON-ready report."""

    name: str
    trajectories: dict[str, Trajectory]
    distances: dict[str, DistanceSeries]
    coherences: dict[str, CoherenceSeries]
    spectrum_rows: list[dict]
    report: dict


def spectrum_rows(W0: np.ndarray, W: np.ndarray, nu: float,
                   policy: NumericPolicy) -> list[dict]:
    """Eigenvalues of the bare and doubled generators with block tags.

    Doubled-generator eigenvalues are tagged by the nearer of the bare
    eigenvalue sets {lambda_k} / {lambda_k - nu}; a value about equally
    close to both (or far from either) is tagged mixed.
    """
    lam0 = decompose(W0, policy=policy).eigenvalues
    bare = lam0.copy()
    rows = []
    for k, lam in enumerate(lam0, start=1):
        rows.append(
            {"k": k, "re_lambda": lam.real, "im_lambda": lam.imag, "block": "original"}
        )
    lamW = decompose(W, policy=policy).eigenvalues
    for k, lam in enumerate(lamW, start=1):
        d_orig = np.abs(bare - lam).min()
        d_shift = np.abs(bare - nu - lam).min()
        near, far = sorted((d_orig, d_shift))
        if far < 2 * near and near > 1e-9:
            block = "mixed"
        else:
            block = "original" if d_orig <= d_shift else "shifted"
        rows.append(
            {"k": k, "re_lambda": lam.real, "im_lambda": lam.imag, "block": block}
        )
    return rows


def _pair_report(
    label_a: str,
    label_b: str,
    free: dict[str, DistanceSeries],
    noisy: dict[str, DistanceSeries],
    coeffs: dict[str, tuple[complex, complex]],
    norm_kind: str,
) -> dict:
    """Crossing counts for the noise-free and noisy races plus the case
    label, with states ordered farther-first as the classifier requires."""
    if free[label_a].values[0] < free[label_b].values[0]:
        label_a, label_b = label_b, label_a
    rep_free = detect_crossings(free[label_a], free[label_b])
    rep_noisy = detect_crossings(noisy[label_a], noisy[label_b])
    (a_a, c_a), (a_b, c_b) = coeffs[label_a], coeffs[label_b]
    label = classify_case(a_a, a_b, c_a, c_b)
    return {
        "pair": [label_a, label_b],
        "norm_kind": norm_kind,
        "crossings": {
            "free": list(rep_free.crossing_times),
            "rtn": list(rep_noisy.crossing_times),
        },
        "final_order": {"free": rep_free.final_order, "rtn": rep_noisy.final_order},
        "case": label,
        "coefficients": {
            label_a: {"a_slow": abs(a_a), "abs_C": abs(c_a)},
            label_b: {"a_slow": abs(a_b), "abs_C": abs(c_b)},
        },
    }


def _slow_mode_pair_coefficients(
    data0, delta, nu, states: dict[str, np.ndarray], pss: np.ndarray,
    labels: tuple[str, str],
) -> dict[str, tuple[complex, complex]]:
    """(slow-mode amplitude, noise-mode weight) per state.

    The amplitude is the unit-left overlap on the slowest bare mode either
    state populates; the weight is the mixing coefficient of the slowest
    shifted mode either state excites.
    """
    overlaps = {
        lbl: unit_left_overlaps(data0, states[lbl], pss) for lbl in labels
    }
    n = data0.size
    amp_tol, mix_tol = 1e-10, 1e-10
    k_slow = next(
        k for k in range(1, n)
        if any(abs(overlaps[lbl][k]) > amp_tol for lbl in labels)
    )
    mix = {
        lbl: [
            mixing_coefficient(data0, delta, nu, embed(states[lbl]), k)
            for k in range(n)
        ]
        for lbl in labels
    }
    k_mix = next(
        (k for k in range(n)
         if any(abs(mix[lbl][k]) > mix_tol for lbl in labels)),
        None,
    )
    out = {}
    for lbl in labels:
        c = mix[lbl][k_mix] if k_mix is not None else 0.0
        out[lbl] = (complex(overlaps[lbl][k_slow]), complex(c))
    return out


def run_scenario(
    name: str,
    params: ThreeLevelParams = ThreeLevelParams(),
    *,
    grid: TimeGrid = DEFAULT_GRID,
    norm_kind: str = "frobenius_full",
    tail_window: float = 0.25,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> ScenarioBundle:
    """Run one of the shipped presets and collect its series and report.

    fig1a: alpha/beta distance race with and without noise.
    fig1b: phi/psi race (verbatim psi), same structure.
    fig2: coherence relative entropy of beta over a small (delta1, nu) grid.
    table2: per-state slow-mode overlaps, mixing weights, and distances.
    """
    if name not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {name!r}; expected {SCENARIOS}")

    W0, delta, W = build_reference_system(params, policy=policy)
    spec = rtn_spec(params)
    data0 = decompose(W0, policy=policy)
    dataW = decompose(W, policy=policy)
    pss = steady_state(W0, policy=policy)
    pss_ext = np.concatenate([pss, np.zeros_like(pss)])
    spectrum = spectrum_rows(W0, W, params.nu, policy)

    def free_traj(p0: np.ndarray) -> Trajectory:
        states = propagate_spectral(data0, p0, pss, grid.times, policy=policy)
        return Trajectory(times=grid, states=states, method="spectral",
                          meta={"delta1": 0.0, "nu": params.nu})

    def noisy_traj(p0: np.ndarray, data=None) -> Trajectory:
        states = propagate_spectral(
            data if data is not None else dataW,
            embed(p0), pss_ext, grid.times, policy=policy,
        )
        return Trajectory(times=grid, states=states, method="spectral",
                          meta={"delta1": params.delta1, "nu": params.nu})

    if name in ("fig1a", "fig1b"):
        labels = ("alpha", "beta") if name == "fig1a" else ("phi", "psi")
        states = {
            lbl: vectorize(initial_state(lbl), policy=policy,
                           allow_nonphysical=(lbl == "psi"))
            for lbl in labels
        }
        trajectories, dists, cohs = {}, {}, {}
        for lbl, p0 in states.items():
            trajectories[f"{lbl}_nonoise"] = free_traj(p0)
            trajectories[f"{lbl}_noise"] = noisy_traj(p0)
        for key, traj in trajectories.items():
            dists[key] = distance_series(traj, pss, norm_kind)
            cohs[key] = coherence_series(traj, policy=policy)
        coeffs = _slow_mode_pair_coefficients(
            data0, delta, params.nu, states, pss, labels
        )
        free = {lbl: dists[f"{lbl}_nonoise"] for lbl in labels}
        noisy = {lbl: dists[f"{lbl}_noise"] for lbl in labels}
        report = _pair_report(labels[0], labels[1], free, noisy, coeffs, norm_kind)
        report["tail_rates"] = {
            key: fit_tail_rate(positive_prefix(series, 1e-13), tail_window)
            for key, series in dists.items()
        }
        return ScenarioBundle(name, trajectories, dists, cohs, spectrum, report)

    if name == "fig2":
        p0 = vectorize(initial_state("beta"), policy=policy)
        trajectories, cohs, dists = {}, {}, {}
        tails, turns = {}, {}
        for label, d1, nu in _FIG2_SETTINGS:
            if d1 == 0.0:
                traj = free_traj(p0)
            else:
                pset = replace(params, delta1=d1, nu=nu)
                _, _, Wn = build_reference_system(pset, policy=policy)
                traj = noisy_traj(p0, decompose(Wn, policy=policy))
            trajectories[label] = traj
            cohs[label] = coherence_series(traj, policy=policy)
            dists[label] = distance_series(traj, pss, norm_kind)
            trimmed = positive_prefix(cohs[label], 1e-12)
            tails[label] = fit_tail_rate(trimmed, tail_window)
            turns[label] = turning_point(cohs[label])
        report = {
            "norm_kind": norm_kind,
            "curves": [lbl for lbl, _, _ in _FIG2_SETTINGS],
            "tail_rates": tails,
            "turning_points": turns,
            "crossings": {},
        }
        return ScenarioBundle(name, trajectories, dists, cohs, spectrum, report)

    # table2
    labels = ("alpha", "beta", "phi", "psi")
    states = {
        lbl: vectorize(initial_state(lbl), policy=policy,
                       allow_nonphysical=(lbl == "psi"))
        for lbl in labels
    }
    k_slow = int(np.argmin(np.abs(data0.eigenvalues - (-params.gamma21))))
    rows = {}
    trajectories, dists, cohs = {}, {}, {}
    coeff_rows = []
    for lbl, p0 in states.items():
        overlaps = unit_left_overlaps(data0, p0, pss)
        mix = [
            mixing_coefficient(data0, delta, params.nu, embed(p0), k)
            for k in range(data0.size)
        ]
        k_mix = 1  # slowest nonsteady mode of the shifted family
        rows[lbl] = {
            "a_slow_unit": abs(overlaps[k_slow]),
            "abs_C_slow": abs(mix[k_mix]),
            "D_frobenius_full": distance(p0, pss, "frobenius_full"),
            "D_unique_elements": distance(p0, pss, "unique_elements"),
            "D_trace_distance": distance(p0, pss, "trace_distance"),
        }
        for k, c in enumerate(mix, start=1):
            coeff_rows.append(
                {"state": lbl, "k": k, "re_C": c.real, "im_C": c.imag,
                 "abs_C": abs(c)}
            )
        traj = noisy_traj(p0)
        trajectories[lbl] = traj
        dists[lbl] = distance_series(traj, pss, norm_kind)
        cohs[lbl] = coherence_series(traj, policy=policy)
    report = {
        "norm_kind": norm_kind,
        "states": rows,
        "coefficients": coeff_rows,
        "crossings": {},
    }
    return ScenarioBundle(name, trajectories, dists, cohs, spectrum, report)

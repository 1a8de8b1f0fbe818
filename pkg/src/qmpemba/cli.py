"""Command-line entry point.

Subcommands mirror the pipeline stages: ``spectrum`` dumps sorted
eigenvalues of both generators, ``evolve`` writes per-state distance and
coherence series by a chosen propagation method, ``mpemba`` analyzes a
two-state race, and ``scenario`` runs one of the shipped presets.  All
commands are deterministic for a fixed config and seed; failures print a
machine-readable JSON error to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, load_config
from .dynamics import (
    Trajectory,
    propagate_expm,
    propagate_montecarlo,
    white_noise_generator,
)
from .exceptions import ConfigurationError, QmpembaError
from .lindblad import build_liouvillian, vectorize
from .mpemba import (
    NORM_KINDS,
    coherence_series,
    detect_crossings,
    classify_case,
    distance_series,
    fit_tail_rate,
    positive_prefix,
)
from .perturbation import mixing_coefficient
from .reporting import (
    write_coefficients_csv,
    write_report_json,
    write_series_csv,
    write_spectrum_csv,
    write_trajectory_csv,
)
from .spectral import decompose, propagate_spectral, steady_state, unit_left_overlaps
from .telegraph import coupling_matrix, embed, extended_generator
from .threelevel import SCENARIOS, run_scenario, spectrum_rows
from .policy import DEFAULT_POLICY

METHODS = ("spectral", "expm", "mc", "whitenoise")


def _error_exit(exc: Exception) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(payload), file=sys.stderr)
    return 2


NORM_CHOICES = NORM_KINDS + ("trace",)  # "trace" abbreviates trace_distance


def _resolve_norm(name: str) -> str:
    return "trace_distance" if name == "trace" else name


def _apply_overrides(config: ScenarioConfig, args) -> ScenarioConfig:
    analysis = config.analysis
    if getattr(args, "norm", None):
        analysis = dataclasses.replace(
            analysis, norm_kind=_resolve_norm(args.norm)
        )
    if getattr(args, "seed", None) is not None and analysis.mc is not None:
        analysis = dataclasses.replace(
            analysis, mc=dataclasses.replace(analysis.mc, seed=args.seed)
        )
    return dataclasses.replace(config, analysis=analysis)


def _generators(config: ScenarioConfig):
    W0 = build_liouvillian(config.hamiltonian, list(config.channels))
    W = extended_generator(W0, config.noise)
    return W0, W


def _state_vectors(config: ScenarioConfig) -> dict[str, np.ndarray]:
    return {
        name: vectorize(
            rho, allow_nonphysical=config.analysis.allow_nonphysical
        )
        for name, rho in config.states.items()
    }


def cmd_spectrum(config: ScenarioConfig, out_dir: Path) -> None:
    W0, W = _generators(config)
    rows = spectrum_rows(W0, W, config.noise.nu, DEFAULT_POLICY)
    write_spectrum_csv(out_dir / "spectrum.csv", rows)


def _evolve_trajectories(
    config: ScenarioConfig, method: str
) -> tuple[dict[str, Trajectory], np.ndarray]:
    W0, W = _generators(config)
    pss = steady_state(W0)
    grid = config.grid
    states = _state_vectors(config)
    noisy = config.noise.delta1 > 0

    trajectories: dict[str, Trajectory] = {}
    if method == "spectral":
        data = decompose(W if noisy else W0)
        pss_full = np.concatenate([pss, np.zeros_like(pss)]) if noisy else pss
        for name, p0 in states.items():
            x0 = embed(p0) if noisy else p0
            arr = propagate_spectral(data, x0, pss_full, grid.times)
            trajectories[name] = Trajectory(times=grid, states=arr, method="spectral")
    elif method == "expm":
        for name, p0 in states.items():
            if noisy:
                trajectories[name] = propagate_expm(W, embed(p0), grid)
            else:
                trajectories[name] = propagate_expm(W0, p0, grid)
    elif method == "mc":
        if config.analysis.mc is None:
            raise ConfigurationError(
                "method=mc requires an [analysis.mc] table in the config"
            )
        for name, rho in config.states.items():
            trajectories[name] = propagate_montecarlo(
                config.hamiltonian,
                list(config.channels),
                config.noise,
                rho,
                grid,
                config.analysis.mc,
                allow_nonphysical=config.analysis.allow_nonphysical,
            )
    elif method == "whitenoise":
        W_eff = white_noise_generator(W0, config.noise)
        for name, p0 in states.items():
            traj = propagate_expm(W_eff, p0, grid)
            trajectories[name] = dataclasses.replace(traj, method="whitenoise")
    else:
        raise ConfigurationError(f"unknown method {method!r}; expected {METHODS}")
    return trajectories, pss


def cmd_evolve(config: ScenarioConfig, method: str, out_dir: Path) -> None:
    trajectories, pss = _evolve_trajectories(config, method)
    kinds = dict.fromkeys((config.analysis.norm_kind, "frobenius_full",
                           "unique_elements"))
    dists = {}
    cohs = {}
    for name, traj in trajectories.items():
        for kind in kinds:
            dists[f"{name}_{kind}"] = distance_series(traj, pss, kind)
        cohs[name] = coherence_series(traj)
        write_trajectory_csv(out_dir / f"trajectory_{name}.csv", traj)
    write_series_csv(out_dir / "distances.csv", dists)
    write_series_csv(out_dir / "coherence.csv", cohs)


def cmd_mpemba(config: ScenarioConfig, out_dir: Path) -> None:
    pair = config.analysis.pair or tuple(config.states)
    if len(pair) != 2:
        raise ConfigurationError(
            f"mpemba analysis needs exactly two states, got {len(pair)} "
            f"({', '.join(pair)}); set analysis.pair"
        )
    W0, W = _generators(config)
    data0 = decompose(W0)
    pss = steady_state(W0)
    grid = config.grid
    kind = config.analysis.norm_kind
    noisy = config.noise.delta1 > 0
    states = {k: v for k, v in _state_vectors(config).items() if k in pair}

    if noisy:
        dataW = decompose(W)
        pss_full = np.concatenate([pss, np.zeros_like(pss)])
    series = {}
    for name in pair:
        if noisy:
            arr = propagate_spectral(dataW, embed(states[name]), pss_full, grid.times)
        else:
            arr = propagate_spectral(data0, states[name], pss, grid.times)
        traj = Trajectory(times=grid, states=arr, method="spectral")
        series[name] = distance_series(traj, pss, kind)

    # farther-first ordering for the classifier
    a_lbl, b_lbl = pair
    if series[a_lbl].values[0] < series[b_lbl].values[0]:
        a_lbl, b_lbl = b_lbl, a_lbl
    crossings = detect_crossings(series[a_lbl], series[b_lbl])

    delta = coupling_matrix(config.noise)
    overlaps = {
        lbl: unit_left_overlaps(data0, states[lbl], pss) for lbl in pair
    }
    k_slow = next(
        (k for k in range(1, data0.size)
         if any(abs(overlaps[lbl][k]) > 1e-10 for lbl in pair)),
        1,
    )
    mixes = {
        lbl: [
            mixing_coefficient(data0, delta, config.noise.nu, embed(states[lbl]), k)
            for k in range(data0.size)
        ]
        for lbl in pair
    }
    k_mix = next(
        (k for k in range(data0.size)
         if any(abs(mixes[lbl][k]) > 1e-10 for lbl in pair)),
        None,
    )
    coeff = {
        lbl: (
            complex(overlaps[lbl][k_slow]),
            mixes[lbl][k_mix] if k_mix is not None else 0.0,
        )
        for lbl in pair
    }
    case = classify_case(
        coeff[a_lbl][0], coeff[b_lbl][0], coeff[a_lbl][1], coeff[b_lbl][1]
    )
    report = {
        "pair": [a_lbl, b_lbl],
        "norm_kind": kind,
        "crossings": {"rtn" if noisy else "free": list(crossings.crossing_times)},
        "final_order": crossings.final_order,
        "case": case,
        "coefficients": {
            lbl: {
                "a_slow": abs(coeff[lbl][0]),
                "re_C": complex(coeff[lbl][1]).real,
                "im_C": complex(coeff[lbl][1]).imag,
                "abs_C": abs(coeff[lbl][1]),
            }
            for lbl in pair
        },
        "tail_rates": {
            lbl: fit_tail_rate(
                positive_prefix(series[lbl], 1e-13), config.analysis.tail_window
            )
            for lbl in pair
        },
    }
    write_report_json(out_dir / "report.json", report)
    write_series_csv(out_dir / "distances.csv", dict(series))


def cmd_scenario(name: str, out_dir: Path, norm: str | None) -> None:
    bundle = run_scenario(name, norm_kind=norm or "frobenius_full")
    target = out_dir / name
    write_series_csv(target / "distances.csv", dict(bundle.distances))
    write_series_csv(target / "coherence.csv", dict(bundle.coherences))
    write_spectrum_csv(target / "spectrum.csv", bundle.spectrum_rows)
    write_report_json(target / "report.json", bundle.report)
    if "coefficients" in bundle.report and isinstance(
        bundle.report["coefficients"], list
    ):
        write_coefficients_csv(
            target / "coefficients.csv", bundle.report["coefficients"]
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmpemba",
        description="Open-system telegraph-noise dynamics and Mpemba analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", type=Path, required=config_required,
                       help="scenario TOML file")
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output directory (default: out)")
        p.add_argument("--norm", choices=NORM_CHOICES, default=None,
                       help="override the configured distance norm")
        p.add_argument("--seed", type=int, default=None,
                       help="override the Monte Carlo seed")

    p_spec = sub.add_parser("spectrum", help="dump sorted eigenvalues")
    common(p_spec)

    p_evolve = sub.add_parser("evolve", help="propagate all configured states")
    common(p_evolve)
    p_evolve.add_argument("--method", choices=METHODS, default="spectral")

    p_mp = sub.add_parser("mpemba", help="two-state crossing analysis")
    common(p_mp)

    p_scn = sub.add_parser("scenario", help="run a shipped preset")
    p_scn.add_argument("--scenario", choices=SCENARIOS, required=True)
    p_scn.add_argument("--out", type=Path, default=Path("out"))
    p_scn.add_argument("--norm", choices=NORM_CHOICES, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "scenario":
            norm = _resolve_norm(args.norm) if args.norm else None
            cmd_scenario(args.scenario, args.out, norm)
            return 0
        config = _apply_overrides(load_config(args.config), args)
        out_dir = args.out
        if args.command == "spectrum":
            cmd_spectrum(config, out_dir)
        elif args.command == "evolve":
            cmd_evolve(config, args.method, out_dir)
        elif args.command == "mpemba":
            cmd_mpemba(config, out_dir)
        return 0
    except (QmpembaError, OSError, ValueError) as exc:
        return _error_exit(exc)


if __name__ == "__main__":
    sys.exit(main())

"""Scenario configuration: a TOML file with nested tables, validated against
a JSON schema.  Complex numbers are written as [re, im] pairs; matrices as
row-major arrays of such pairs."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dynamics import McConfig, TimeGrid
from .exceptions import ConfigurationError
from .lindblad import JumpChannel, check_density_matrix
from .mpemba import NORM_KINDS
from .policy import DEFAULT_POLICY, NumericPolicy
from .telegraph import RtnSpec

__all__ = ["ScenarioConfig", "AnalysisOptions", "load_config", "complex_matrix"]

_COMPLEX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}
_CMATRIX = {
    "type": "array",
    "minItems": 2,
    "items": {"type": "array", "minItems": 2, "items": _COMPLEX},
}

SCHEMA = {
    "type": "object",
    "required": ["system", "noise", "states", "grid"],
    "additionalProperties": False,
    "properties": {
        "system": {
            "type": "object",
            "required": ["hamiltonian"],
            "additionalProperties": False,
            "properties": {
                "hamiltonian": _CMATRIX,
                "channels": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["operator", "rate"],
                        "additionalProperties": False,
                        "properties": {
                            "operator": _CMATRIX,
                            "rate": {"type": "number", "minimum": 0},
                        },
                    },
                },
            },
        },
        "noise": {
            "type": "object",
            "required": ["J", "delta1", "nu"],
            "additionalProperties": False,
            "properties": {
                "J": _CMATRIX,
                "delta1": {"type": "number", "minimum": 0},
                "nu": {"type": "number", "minimum": 0},
            },
        },
        "states": {
            "type": "object",
            "minProperties": 1,
            "additionalProperties": _CMATRIX,
        },
        "grid": {
            "type": "object",
            "required": ["t_start", "t_end", "num_points"],
            "additionalProperties": False,
            "properties": {
                "t_start": {"type": "number", "minimum": 0},
                "t_end": {"type": "number"},
                "num_points": {"type": "integer", "minimum": 2},
            },
        },
        "analysis": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "norm_kind": {"enum": list(NORM_KINDS)},
                "tail_window": {
                    "type": "number", "exclusiveMinimum": 0, "maximum": 1,
                },
                "pair": {
                    "type": "array", "items": {"type": "string"},
                },
                "allow_nonphysical": {"type": "boolean"},
                "mc": {
                    "type": "object",
                    "required": ["num_trajectories", "seed", "dt"],
                    "additionalProperties": False,
                    "properties": {
                        "num_trajectories": {"type": "integer", "minimum": 1},
                        "seed": {"type": "integer", "minimum": 0},
                        "dt": {"type": "number", "exclusiveMinimum": 0},
                        "flip_rate": {"type": "number", "minimum": 0},
                        "n_batches": {"type": "integer", "minimum": 1},
                    },
                },
            },
        },
    },
}


def complex_matrix(rows) -> np.ndarray:
    """[[ [re, im], ... ], ...] -> complex ndarray."""
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ConfigurationError(
            f"expected a matrix of [re, im] pairs, got shape {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass(frozen=True)
class AnalysisOptions:
    norm_kind: str = "frobenius_full"
    tail_window: float = 0.25
    pair: tuple[str, ...] | None = None
    allow_nonphysical: bool = False
    mc: McConfig | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    hamiltonian: np.ndarray
    channels: tuple[JumpChannel, ...]
    noise: RtnSpec
    states: dict[str, np.ndarray]
    grid: TimeGrid
    analysis: AnalysisOptions


def load_config(
    path: str | Path,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> ScenarioConfig:
    """Parse and validate a scenario file.

    Schema violations, dimension mismatches and unphysical states (without
    the override) all raise ConfigurationError subtypes with the offending
    location in the message.
    """
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigurationError(
            f"config schema violation at {list(exc.absolute_path)}: {exc.message}"
        ) from exc

    H = complex_matrix(raw["system"]["hamiltonian"])
    d = H.shape[0]
    if H.shape != (d, d):
        raise ConfigurationError(f"hamiltonian must be square, got {H.shape}")
    channels = []
    for idx, ch in enumerate(raw["system"].get("channels", [])):
        op = complex_matrix(ch["operator"])
        if op.shape != (d, d):
            raise ConfigurationError(
                f"channel {idx} operator shape {op.shape} != system dimension {d}"
            )
        channels.append(JumpChannel(op, float(ch["rate"])))

    J = complex_matrix(raw["noise"]["J"])
    if J.shape != (d, d):
        raise ConfigurationError(f"noise J shape {J.shape} != system dimension {d}")
    noise = RtnSpec(J=J, delta1=float(raw["noise"]["delta1"]),
                    nu=float(raw["noise"]["nu"]))

    ana = raw.get("analysis", {})
    options = AnalysisOptions(
        norm_kind=ana.get("norm_kind", "frobenius_full"),
        tail_window=float(ana.get("tail_window", 0.25)),
        pair=tuple(ana["pair"]) if "pair" in ana else None,
        allow_nonphysical=bool(ana.get("allow_nonphysical", False)),
        mc=McConfig(**ana["mc"]) if "mc" in ana else None,
    )

    states = {}
    for name, rows in raw["states"].items():
        rho = complex_matrix(rows)
        if rho.shape != (d, d):
            raise ConfigurationError(
                f"state {name!r} shape {rho.shape} != system dimension {d}"
            )
        check_density_matrix(
            rho, policy=policy, allow_nonphysical=options.allow_nonphysical
        )
        states[name] = rho
    if options.pair is not None:
        missing = [s for s in options.pair if s not in states]
        if missing:
            raise ConfigurationError(f"analysis.pair names unknown states {missing}")

    grid = TimeGrid(
        t_start=float(raw["grid"]["t_start"]),
        t_end=float(raw["grid"]["t_end"]),
        num_points=int(raw["grid"]["num_points"]),
    )
    return ScenarioConfig(
        hamiltonian=H,
        channels=tuple(channels),
        noise=noise,
        states=states,
        grid=grid,
        analysis=options,
    )

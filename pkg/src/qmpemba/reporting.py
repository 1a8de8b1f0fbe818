"""CSV and JSON writers for the fixed output vocabulary.

All CSVs are comma-separated with a header row, '.' decimal separator and
LF line endings; floats use Python's shortest round-trip representation so
reruns with identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dynamics import Trajectory
from .mpemba import CoherenceSeries, DistanceSeries

__all__ = [
    "write_csv",
    "write_spectrum_csv",
    "write_series_csv",
    "write_trajectory_csv",
    "write_report_json",
    "write_coefficients_csv",
]


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")


def write_spectrum_csv(path: Path, rows: list[dict]) -> None:
    """Rows carry k, re_lambda, im_lambda and a block tag; the bare
    generator's rows come first, then the doubled generator's (the k
    counter restarting marks the boundary)."""
    write_csv(
        path,
        ["k", "re_lambda", "im_lambda", "block"],
        ([r["k"], r["re_lambda"], r["im_lambda"], r["block"]] for r in rows),
    )


def write_series_csv(
    path: Path,
    series: dict[str, DistanceSeries | CoherenceSeries],
) -> None:
    """Column per labeled series over a shared time grid."""
    labels = list(series)
    if not labels:
        write_csv(path, ["t"], [])
        return
    times = series[labels[0]].times.times
    for lbl in labels[1:]:
        if series[lbl].times != series[labels[0]].times:
            raise ValueError(f"series {lbl!r} is on a different grid")
    rows = (
        [times[i]] + [series[lbl].values[i] for lbl in labels]
        for i in range(times.size)
    )
    write_csv(path, ["t"] + labels, rows)


def write_trajectory_csv(path: Path, traj: Trajectory) -> None:
    """Times plus re/im of every state entry, method tag in a header comment."""
    path.parent.mkdir(parents=True, exist_ok=True)
    n = traj.states.shape[1]
    header = ["t"]
    for k in range(n):
        header += [f"re_p{k + 1}", f"im_p{k + 1}"]
    lines = [f"# method={traj.method}", ",".join(header)]
    times = traj.times.times
    for i in range(times.size):
        row = [times[i]]
        for k in range(n):
            row += [traj.states[i, k].real, traj.states[i, k].imag]
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")


def write_coefficients_csv(path: Path, rows: list[dict]) -> None:
    write_csv(
        path,
        ["state", "k", "re_C", "im_C", "abs_C"],
        ([r["state"], r["k"], r["re_C"], r["im_C"], r["abs_C"]] for r in rows),
    )


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_report_json(path: Path, report: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(_jsonify(report), indent=2, sort_keys=True) + "\n",
        newline="\n",
    )

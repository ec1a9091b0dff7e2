"""Deterministic CSV export.

Numbers are written in the shortest decimal form that round-trips to the same
float (Python repr), so identical inputs always produce byte-identical files.
Headers are fixed; rows are emitted in a documented deterministic order.
"""

from __future__ import annotations

from pathlib import Path

TRAJECTORY_HEADER = ["series", "phi0", "time", "x", "y", "u", "v", "F_speed"]
FIELD_HEADER = ["x", "y", "W1", "W2", "W_norm", "U", "margin"]
INDICATRIX_HEADER = ["kind", "series", "t", "phi", "status", "x", "y"]
COMPARE_HEADER = ["p0_x", "p0_y", "target_x", "target_y",
                  "T_classical", "T_generalized", "gap", "flag"]
DECOMPOSITION_HEADER = ["x", "y", "a11", "a12", "a22", "b1", "b2", "lam"]


def fmt(value) -> str:
    """Shortest round-trip decimal form of a float; strings pass through."""
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    return repr(float(value))


def write_csv(path: str | Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def trajectory_rows(traj, series: str, phi0: float):
    """Rows for one trajectory, in time order (TRAJECTORY_HEADER)."""
    for state, f in zip(traj.states, traj.f_speeds):
        yield (series, phi0, state.time, state.p.x, state.p.y,
               state.t.u, state.t.v, f)


def decomposition_rows(metric, points):
    """Rows of norm decompositions at the given points (DECOMPOSITION_HEADER)."""
    for p in points:
        d = metric.decompose(p)
        yield (p.x, p.y, d.a11, d.a12, d.a22, d.b1, d.b2, d.lam)

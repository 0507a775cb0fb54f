"""Text serialization for grids and derived tables.

Grid files use the "wigner-grid v1" layout: a tag line, a header line
`nx,np,xmin,xmax,pmin,pmax`, then np rows of nx comma-separated values with p
ascending by line and x ascending within a line. Floats are written with
repr(), the shortest decimal that round-trips, so a written file re-read and
re-written is byte-identical.
"""

from __future__ import annotations

import numpy as np

from .grid import MarginalSamples, WignerGrid

GRID_TAG = "# wigner-grid v1"
MARGINAL_HEADER = "# coordinate,probability_density"

__all__ = [
    "GRID_TAG",
    "grid_to_text",
    "grid_from_text",
    "marginal_to_text",
    "marginal_from_text",
    "surface_to_text",
    "eps_table_to_text",
]


def grid_to_text(grid: WignerGrid) -> str:
    lines = [
        GRID_TAG,
        f"{grid.nx},{grid.np},{grid.xmin!r},{grid.xmax!r},{grid.pmin!r},{grid.pmax!r}",
    ]
    v = grid.values
    for j in range(grid.np):
        lines.append(",".join(repr(float(x)) for x in v[:, j]))
    return "\n".join(lines) + "\n"


def grid_from_text(text: str) -> WignerGrid:
    lines = text.splitlines()
    if not lines or lines[0].strip() != GRID_TAG:
        raise ValueError(f'grid file: missing "{GRID_TAG}" tag line')
    head = lines[1].split(",")
    if len(head) != 6:
        raise ValueError("grid file: header must be nx,np,xmin,xmax,pmin,pmax")
    nx, np_ = int(head[0]), int(head[1])
    xmin, xmax, pmin, pmax = (float(s) for s in head[2:])
    rows = lines[2 : 2 + np_]
    if len(rows) != np_:
        raise ValueError(f"grid file: expected {np_} value rows, found {len(rows)}")
    values = np.empty((nx, np_))
    for j, row in enumerate(rows):
        parts = row.split(",")
        if len(parts) != nx:
            raise ValueError(f"grid file: row {j} has {len(parts)} values, expected {nx}")
        values[:, j] = [float(s) for s in parts]
    return WignerGrid(nx, np_, xmin, xmax, pmin, pmax, values)


def marginal_to_text(marg: MarginalSamples) -> str:
    lines = [MARGINAL_HEADER]
    for c, d in zip(marg.coords, marg.density):
        lines.append(f"{float(c)!r},{float(d)!r}")
    return "\n".join(lines) + "\n"


def marginal_from_text(text: str) -> MarginalSamples:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("marginal file: missing header line")
    coords = []
    density = []
    for ln in lines[1:]:
        cs, ds = ln.split(",")
        coords.append(float(cs))
        density.append(float(ds))
    return MarginalSamples(np.asarray(coords), np.asarray(density))


def surface_to_text(rows) -> str:
    """rows: iterable of (sigma_x, r, exponent)."""
    lines = ["sigma_x,r,exponent"]
    for sigma_x, r, exponent in rows:
        lines.append(f"{float(sigma_x)!r},{float(r)!r},{float(exponent)!r}")
    return "\n".join(lines) + "\n"


def eps_table_to_text(rows) -> str:
    """rows: iterable of (eps, deficit)."""
    lines = ["eps,deficit"]
    for eps, deficit in rows:
        lines.append(f"{float(eps)!r},{float(deficit)!r}")
    return "\n".join(lines) + "\n"

"""Uniform periodic grids on flat tori (1-3 dimensions) and fields on them.

Grid points sit at x_i = j * h_i, j = 0 .. N_i - 1, with h_i = L_i / N_i;
storage is row-major with the last axis fastest.  The differential
operators are plain second-order central stencils with periodic
wraparound, so their error is a transparent O(h^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TorusGrid",
    "ScalarField",
    "laplacian",
    "gradient_sq",
    "geodesic_distance",
    "write_field",
    "read_field",
    "MAX_TOTAL_POINTS",
]

MAX_TOTAL_POINTS = 2**27


@dataclass(frozen=True)
class TorusGrid:
    """Periodic uniform grid on a flat torus T^dim."""

    lengths: tuple[float, ...]
    points: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(float(L) for L in self.lengths))
        object.__setattr__(self, "points", tuple(int(N) for N in self.points))
        if not 1 <= len(self.lengths) <= 3:
            raise ValueError(f"torus dimension must be 1, 2 or 3, got {len(self.lengths)}")
        if len(self.points) != len(self.lengths):
            raise ValueError("lengths and points must have the same dimension")
        if any(L <= 0.0 for L in self.lengths):
            raise ValueError(f"periods must be positive, got {self.lengths}")
        if any(N < 8 for N in self.points):
            raise ValueError(f"need at least 8 points per axis, got {self.points}")
        if math.prod(self.points) > MAX_TOTAL_POINTS:
            raise ValueError(
                f"total point count {math.prod(self.points)} exceeds cap {MAX_TOTAL_POINTS}"
            )

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / N for L, N in zip(self.lengths, self.points))

    @property
    def total_points(self) -> int:
        return math.prod(self.points)

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    def axis_coords(self, axis: int) -> np.ndarray:
        h = self.spacing[axis]
        return np.arange(self.points[axis]) * h


@dataclass(frozen=True)
class ScalarField:
    """Real scalar sample on a TorusGrid; treated as immutable."""

    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != self.grid.points:
            vals = vals.reshape(self.grid.points)
        object.__setattr__(self, "values", vals)
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())


def laplacian(f: ScalarField) -> ScalarField:
    """Second-order periodic stencil: sum over axes of (f_+ - 2f + f_-)/h^2."""
    v = f.values
    out = np.zeros_like(v)
    for ax, h in enumerate(f.grid.spacing):
        out += (np.roll(v, -1, axis=ax) - 2.0 * v + np.roll(v, 1, axis=ax)) * (1.0 / (h * h))
    return ScalarField(f.grid, out)


def gradient_sq(f: ScalarField) -> ScalarField:
    """Squared gradient via central differences: sum of ((f_+ - f_-)/(2h))^2."""
    v = f.values
    out = np.zeros_like(v)
    for ax, h in enumerate(f.grid.spacing):
        d = (np.roll(v, -1, axis=ax) - np.roll(v, 1, axis=ax)) * (0.5 / h)
        out += d * d
    return ScalarField(f.grid, out)


def geodesic_distance(
    g: TorusGrid, x1: tuple[int, ...] | int, x2: tuple[int, ...] | int
) -> float:
    """Torus geodesic distance between two grid points given by index."""
    i1 = (x1,) if isinstance(x1, int) else tuple(x1)
    i2 = (x2,) if isinstance(x2, int) else tuple(x2)
    if len(i1) != g.dim or len(i2) != g.dim:
        raise ValueError(f"point indices must have {g.dim} components")
    s = 0.0
    for j1, j2, h, L, N in zip(i1, i2, g.spacing, g.lengths, g.points):
        if not (0 <= j1 < N and 0 <= j2 < N):
            raise ValueError(f"index out of range on axis with {N} points")
        delta = abs(j1 - j2) * h
        delta = min(delta, L - delta)
        s += delta * delta
    return math.sqrt(s)


# --- "AC-FIELD v1" snapshot format -----------------------------------------
#
# One ASCII header line
#   AC-FIELD v1 dim=<d> N=<N1[,N2[,N3]]> L=<L1[,L2[,L3]]> t=<time>
# followed by one %.17g decimal per line, row-major (last axis fastest).


def _fmt(x: float) -> str:
    return "%.17g" % x


def write_field(path, f: ScalarField, t: float) -> None:
    g = f.grid
    header = "AC-FIELD v1 dim=%d N=%s L=%s t=%s" % (
        g.dim,
        ",".join(str(N) for N in g.points),
        ",".join(_fmt(L) for L in g.lengths),
        _fmt(t),
    )
    with open(path, "w") as fh:
        fh.write(header + "\n")
        fh.write("\n".join(_fmt(x) for x in f.values.ravel()))
        fh.write("\n")


def read_field(path) -> tuple[ScalarField, float]:
    with open(path) as fh:
        header = fh.readline().strip()
        parts = header.split()
        if parts[:2] != ["AC-FIELD", "v1"]:
            raise ValueError(f"{path}: not an AC-FIELD v1 file")
        kv = dict(p.split("=", 1) for p in parts[2:])
        dim = int(kv["dim"])
        points = tuple(int(s) for s in kv["N"].split(","))
        lengths = tuple(float(s) for s in kv["L"].split(","))
        t = float(kv["t"])
        if len(points) != dim or len(lengths) != dim:
            raise ValueError(f"{path}: header dim mismatch")
        values = np.loadtxt(fh, dtype=np.float64, ndmin=1)
    if values.size != math.prod(points):
        raise ValueError(f"{path}: expected {math.prod(points)} values, got {values.size}")
    grid = TorusGrid(lengths, points)
    return ScalarField(grid, values.reshape(points)), t

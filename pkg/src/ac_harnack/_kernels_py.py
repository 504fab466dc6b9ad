"""Pure-numpy reference implementation of the explicit-stepping kernel.

Semantics match ac_harnack._kernels exactly: advance `n_steps` explicit
Euler steps of f_t = lap(f) + f - f^3 with the periodic 3-point stencil per
axis, track the min/max over every produced field, and stop after the
first step whose field leaves [lo, hi].

Returns (result, vmin, vmax, breach_step) with breach_step the 1-based
index of the offending step, or -1 if none.  The input array is never
mutated.
"""

from __future__ import annotations

import numpy as np


def _lap(v: np.ndarray, inv_h2: tuple[float, ...]) -> np.ndarray:
    out = (np.roll(v, -1, axis=0) - 2.0 * v + np.roll(v, 1, axis=0)) * inv_h2[0]
    for ax in range(1, v.ndim):
        out = out + (np.roll(v, -1, axis=ax) - 2.0 * v + np.roll(v, 1, axis=ax)) * inv_h2[ax]
    return out


def explicit_run(
    values: np.ndarray,
    inv_h2: tuple[float, ...],
    dt: float,
    n_steps: int,
    lo: float,
    hi: float,
):
    cur = np.array(values, dtype=np.float64, copy=True)
    vmin = np.inf
    vmax = -np.inf
    for step in range(1, n_steps + 1):
        cur = cur + dt * (_lap(cur, inv_h2) + cur - cur * cur * cur)
        mn = float(cur.min())
        mx = float(cur.max())
        vmin = min(vmin, mn)
        vmax = max(vmax, mx)
        if mn < lo or mx > hi or not (np.isfinite(mn) and np.isfinite(mx)):
            return cur, vmin, vmax, step
    return cur, vmin, vmax, -1

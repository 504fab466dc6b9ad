# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled explicit-stepping kernel (hot loop of the Allen-Cahn solver).

Drop-in replacement for ac_harnack._kernels_py: same explicit_run()
signature, same floating-point operation order (so the two backends agree
to the last bit), same min/max confinement tracking.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

__all__ = ["explicit_run"]


def _run_1d(cnp.ndarray[cnp.float64_t, ndim=1] f0,
            double ih0, double dt, long n_steps, double lo, double hi):
    cdef Py_ssize_t n = f0.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr_a = f0.copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr_b = np.empty_like(arr_a)
    cdef double[::1] a = arr_a
    cdef double[::1] b = arr_b
    cdef double[::1] tmp
    cdef double vmin = np.inf, vmax = -np.inf
    cdef double mn, mx, c, lap, v
    cdef Py_ssize_t i
    cdef long step, breach = -1
    cdef bint in_a = True

    for step in range(1, n_steps + 1):
        mn = np.inf
        mx = -np.inf
        # i = 0 (wraps to n-1 on the left)
        c = a[0]
        lap = (a[1] - 2.0 * c + a[n - 1]) * ih0
        v = c + dt * ((lap + c) - c * c * c)
        b[0] = v
        if v < mn: mn = v
        if v > mx: mx = v
        for i in range(1, n - 1):
            c = a[i]
            lap = (a[i + 1] - 2.0 * c + a[i - 1]) * ih0
            v = c + dt * ((lap + c) - c * c * c)
            b[i] = v
            if v < mn: mn = v
            if v > mx: mx = v
        # i = n-1 (wraps to 0 on the right)
        c = a[n - 1]
        lap = (a[0] - 2.0 * c + a[n - 2]) * ih0
        v = c + dt * ((lap + c) - c * c * c)
        b[n - 1] = v
        if v < mn: mn = v
        if v > mx: mx = v

        tmp = a; a = b; b = tmp
        in_a = not in_a
        if mn < vmin: vmin = mn
        if mx > vmax: vmax = mx
        if mn < lo or mx > hi:
            breach = step
            break

    return (arr_a if in_a else arr_b), vmin, vmax, breach


def _run_2d(cnp.ndarray[cnp.float64_t, ndim=2] f0,
            double ih0, double ih1, double dt, long n_steps, double lo, double hi):
    cdef Py_ssize_t nx = f0.shape[0], ny = f0.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr_a = np.ascontiguousarray(f0).copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr_b = np.empty_like(arr_a)
    cdef double[:, ::1] a = arr_a
    cdef double[:, ::1] b = arr_b
    cdef double[:, ::1] tmp
    cdef double vmin = np.inf, vmax = -np.inf
    cdef double mn, mx, c, lap, v
    cdef Py_ssize_t i, j, im, ip
    cdef long step, breach = -1
    cdef bint in_a = True

    for step in range(1, n_steps + 1):
        mn = np.inf
        mx = -np.inf
        for i in range(nx):
            im = i - 1 if i > 0 else nx - 1
            ip = i + 1 if i < nx - 1 else 0
            # j = 0
            c = a[i, 0]
            lap = (a[ip, 0] - 2.0 * c + a[im, 0]) * ih0 \
                + (a[i, 1] - 2.0 * c + a[i, ny - 1]) * ih1
            v = c + dt * ((lap + c) - c * c * c)
            b[i, 0] = v
            if v < mn: mn = v
            if v > mx: mx = v
            for j in range(1, ny - 1):
                c = a[i, j]
                lap = (a[ip, j] - 2.0 * c + a[im, j]) * ih0 \
                    + (a[i, j + 1] - 2.0 * c + a[i, j - 1]) * ih1
                v = c + dt * ((lap + c) - c * c * c)
                b[i, j] = v
                if v < mn: mn = v
                if v > mx: mx = v
            # j = ny-1
            c = a[i, ny - 1]
            lap = (a[ip, ny - 1] - 2.0 * c + a[im, ny - 1]) * ih0 \
                + (a[i, 0] - 2.0 * c + a[i, ny - 2]) * ih1
            v = c + dt * ((lap + c) - c * c * c)
            b[i, ny - 1] = v
            if v < mn: mn = v
            if v > mx: mx = v

        tmp = a; a = b; b = tmp
        in_a = not in_a
        if mn < vmin: vmin = mn
        if mx > vmax: vmax = mx
        if mn < lo or mx > hi:
            breach = step
            break

    return (arr_a if in_a else arr_b), vmin, vmax, breach


def _run_3d(cnp.ndarray[cnp.float64_t, ndim=3] f0,
            double ih0, double ih1, double ih2,
            double dt, long n_steps, double lo, double hi):
    cdef Py_ssize_t nx = f0.shape[0], ny = f0.shape[1], nz = f0.shape[2]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] arr_a = np.ascontiguousarray(f0).copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=3] arr_b = np.empty_like(arr_a)
    cdef double[:, :, ::1] a = arr_a
    cdef double[:, :, ::1] b = arr_b
    cdef double[:, :, ::1] tmp
    cdef double vmin = np.inf, vmax = -np.inf
    cdef double mn, mx, c, lap, v
    cdef Py_ssize_t i, j, k, im, ip, jm, jp, km, kp
    cdef long step, breach = -1
    cdef bint in_a = True

    for step in range(1, n_steps + 1):
        mn = np.inf
        mx = -np.inf
        for i in range(nx):
            im = i - 1 if i > 0 else nx - 1
            ip = i + 1 if i < nx - 1 else 0
            for j in range(ny):
                jm = j - 1 if j > 0 else ny - 1
                jp = j + 1 if j < ny - 1 else 0
                for k in range(nz):
                    km = k - 1 if k > 0 else nz - 1
                    kp = k + 1 if k < nz - 1 else 0
                    c = a[i, j, k]
                    lap = ((a[ip, j, k] - 2.0 * c + a[im, j, k]) * ih0
                           + (a[i, jp, k] - 2.0 * c + a[i, jm, k]) * ih1) \
                        + (a[i, j, kp] - 2.0 * c + a[i, j, km]) * ih2
                    v = c + dt * ((lap + c) - c * c * c)
                    b[i, j, k] = v
                    if v < mn: mn = v
                    if v > mx: mx = v

        tmp = a; a = b; b = tmp
        in_a = not in_a
        if mn < vmin: vmin = mn
        if mx > vmax: vmax = mx
        if mn < lo or mx > hi:
            breach = step
            break

    return (arr_a if in_a else arr_b), vmin, vmax, breach


def explicit_run(values, inv_h2, double dt, long n_steps, double lo, double hi):
    """Advance n_steps explicit Euler steps; see ac_harnack._kernels_py."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if n_steps <= 0:
        return arr.copy(), np.inf, -np.inf, -1
    if arr.ndim == 1:
        return _run_1d(arr, inv_h2[0], dt, n_steps, lo, hi)
    if arr.ndim == 2:
        return _run_2d(arr, inv_h2[0], inv_h2[1], dt, n_steps, lo, hi)
    if arr.ndim == 3:
        return _run_3d(arr, inv_h2[0], inv_h2[1], inv_h2[2], dt, n_steps, lo, hi)
    raise ValueError(f"unsupported dimension {arr.ndim}")

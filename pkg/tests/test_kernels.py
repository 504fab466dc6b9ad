"""Backend equivalence: the compiled kernel must match the numpy reference."""

import numpy as np
import pytest

from ac_harnack import kernels
from ac_harnack import _kernels_py

compiled = pytest.importorskip("ac_harnack._kernels")

CASES = [
    ((64,), (64.0**2,)),
    ((512,), (512.0**2,)),
    ((16, 16), (256.0, 256.0)),
    ((32, 48), (1024.0, 2304.0)),
    ((8, 8, 8), (64.0, 64.0, 64.0)),
]


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "python")
    assert kernels.get_backend("python") is _kernels_py
    with pytest.raises(ValueError):
        kernels.get_backend("rust")


@pytest.mark.parametrize("shape,inv_h2", CASES)
def test_bit_identical_results(shape, inv_h2):
    rng = np.random.default_rng(hash(shape) % 2**32)
    v = rng.uniform(0.15, 0.85, size=shape)
    out_c, mn_c, mx_c, br_c = compiled.explicit_run(v, inv_h2, 1e-5, 400, 1e-12, 1 - 1e-12)
    out_p, mn_p, mx_p, br_p = _kernels_py.explicit_run(v, inv_h2, 1e-5, 400, 1e-12, 1 - 1e-12)
    assert np.array_equal(out_c, out_p)
    assert mn_c == mn_p and mx_c == mx_p and br_c == br_p == -1


def test_input_not_mutated():
    v = np.full(64, 0.5)
    before = v.copy()
    compiled.explicit_run(v, (64.0**2,), 1e-4, 10, 0.0, 1.0)
    _kernels_py.explicit_run(v, (64.0**2,), 1e-4, 10, 0.0, 1.0)
    assert np.array_equal(v, before)


def test_breach_step_identical():
    # constant 0.4 grows under the reaction; both backends must stop at the
    # same step with the same extrema when the band is artificially tight
    v = np.full(32, 0.4)
    args = ((32.0**2,), 1e-3, 1000, 0.0, 0.41)
    out_c, mn_c, mx_c, br_c = compiled.explicit_run(v, *args)
    out_p, mn_p, mx_p, br_p = _kernels_py.explicit_run(v, *args)
    assert br_c == br_p > 0
    assert mx_c == mx_p > 0.41
    assert np.array_equal(out_c, out_p)


def test_zero_steps():
    v = np.linspace(0.2, 0.8, 16)
    out, mn, mx, br = compiled.explicit_run(v, (16.0**2,), 1e-4, 0, 0.0, 1.0)
    assert np.array_equal(out, v) and br == -1
    assert mn == np.inf and mx == -np.inf


def test_long_run_agreement():
    # drift over many steps stays nil because both backends round identically
    rng = np.random.default_rng(9)
    v = rng.uniform(0.2, 0.8, size=128)
    inv = (128.0**2,)
    out_c, *_ = compiled.explicit_run(v, inv, 2e-5, 20000, 1e-12, 1 - 1e-12)
    out_p, *_ = _kernels_py.explicit_run(v, inv, 2e-5, 20000, 1e-12, 1 - 1e-12)
    assert np.array_equal(out_c, out_p)

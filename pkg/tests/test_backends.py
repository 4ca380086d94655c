"""The numba kernels and their numpy fallbacks must agree."""
import numpy as np
import pytest

from gaussmax import _kernels as K
from gaussmax.functions import TestFunction
from gaussmax.quadrature import hermite_1d

pytestmark = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("d", [1, 2, 3])
def test_log_ball_mass(d):
    rng = np.random.default_rng(d)
    m2 = rng.uniform(0, 12, 3000) ** 2
    r2 = rng.uniform(1e-3, 12, 3000) ** 2
    a, b = K.log_ball_mass_nb(m2, r2, d), K.log_ball_mass_np(m2, r2, d)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("u", [
    TestFunction.polynomial(np.arange(9.0).reshape(3, 3)),
    TestFunction.bump((0.3, -0.2, 0.1), 0.5),
    TestFunction.hermite((2, 0, 1)),
    TestFunction.ball((0.5, 0.0), 1.0),
])
def test_gh_tensor(u):
    rng = np.random.default_rng(0)
    z, w = hermite_1d(12)
    ys = rng.uniform(-2, 2, (40, u.dim))
    for absolute in (False, True):
        a = K.gh_tensor_nb(u.code, u.packed(), ys, 0.7, 0.71, z, w, absolute)
        b = K.gh_tensor_np(u.code, u.packed(), ys, 0.7, 0.71, z, w, absolute)
        assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("d, mode", [(1, 0), (1, 1), (2, 0), (2, 1), (3, 0)])
def test_region(d, mode):
    bump = TestFunction.bump([0.3, -0.2, 0.1][:d], 0.5)
    inc = np.array([[0.0] * d + [1.5], list(bump.center) + [bump.support_extent]])
    exc = np.array([0.1] * d + [0.3])
    y = np.array([0.4, 0.1, -0.3][:d])
    args = (inc, exc, mode, 0.3, y, bump.code, bump.packed(), False, 1e-8)
    a, b = K.region_nb(*args), K.region_np(*args)
    assert abs(a[0] - b[0]) <= 1e-12
    assert a[3] == b[3]

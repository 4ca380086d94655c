import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import ncx2

from gaussmax.functions import TestFunction
from gaussmax.geometry import BallSpec
from gaussmax.quadrature import (MAX_ORDER, ToleranceUnreachable, gamma_ball, gamma_ball_erf,
                                 hermite_1d, hermite_1d_extended, hermite_rule, integrate_ball,
                                 integrate_gamma, integrate_region, log_gamma_ball,
                                 log_gamma_shell)


@pytest.mark.parametrize("order", [1, 2, 3, 10, 40, 100, 200])
def test_rule_against_hermgauss(order):
    x, w = hermite_1d(order)
    xr, wr = np.polynomial.hermite.hermgauss(order)
    assert np.allclose(x, xr, rtol=0, atol=1e-13 * max(1.0, abs(xr).max()))
    big = wr > 1e-200
    assert np.allclose(w[big], wr[big] / math.sqrt(math.pi), rtol=1e-11, atol=0)
    assert abs(w.sum() - 1.0) <= 1e-14
    assert np.all(w > 0)
    assert np.array_equal(x, -x[::-1])


def test_rule_small_examples():
    x, w = hermite_1d(1)
    assert x.tolist() == [0.0] and w.tolist() == [1.0]
    x, w = hermite_1d(2)
    assert x == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)], abs=1e-16)
    assert w == pytest.approx([0.5, 0.5], abs=1e-16)


def test_rule_bounds():
    for bad in (0, MAX_ORDER + 1):
        with pytest.raises(ValueError):
            hermite_1d(bad)
    with pytest.raises(ValueError):
        hermite_rule(3, 4)


def test_extended_rule_is_consistent():
    x, w = hermite_1d(30)
    xe, we = hermite_1d_extended(30)
    assert xe.dtype == np.longdouble
    assert np.allclose(x, xe.astype(float), atol=1e-14)
    assert abs(float(we.sum()) - 1) < 1e-17


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_tensor_rule(dim):
    rule = hermite_rule(6, dim)
    assert rule.nodes.shape == (6 ** dim, dim)
    assert abs(rule.weights.sum() - 1) <= 1e-14


def test_integrate_gamma_moments():
    r = hermite_rule(10, 1)
    assert integrate_gamma(lambda p: np.ones(len(p)), r) == pytest.approx(1, abs=1e-15)
    assert integrate_gamma(lambda p: p[:, 0] ** 2, r) == pytest.approx(0.5, abs=1e-15)
    assert integrate_gamma(lambda p: 4 * p[:, 0] ** 2, r) == pytest.approx(2, abs=1e-14)
    # Hermite norms 2^n n!
    for n in range(8):
        h = TestFunction.hermite(n)
        assert integrate_gamma(lambda p: h(p) ** 2, r) == pytest.approx(2 ** n * math.factorial(n),
                                                                        rel=1e-12)
    r2 = hermite_rule(8, 2)
    assert integrate_gamma(lambda p: p[:, 0] ** 2 * p[:, 1] ** 2, r2) == pytest.approx(0.25)
    with pytest.raises(FloatingPointError):
        integrate_gamma(lambda p: np.full(len(p), np.nan), r)


def test_ball_examples():
    assert gamma_ball(BallSpec((0.0,), 1.0)).gamma_mass == pytest.approx(0.8427007929, abs=1e-10)
    assert gamma_ball(BallSpec((1.0,), 1.0)).gamma_mass == pytest.approx(math.erf(2) / 2, abs=1e-15)
    for d in (1, 2, 3):
        assert gamma_ball(BallSpec((0.5,) * d, 60.0)).gamma_mass == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_ball_against_ncx2(d):
    rng = np.random.default_rng(d)
    m = rng.uniform(0, 5, 400)
    r = rng.uniform(1e-3, 5, 400)
    centers = np.zeros((400, d))
    centers[:, 0] = m
    got = np.exp(log_gamma_ball(centers, r))
    ref = ncx2.cdf(2 * r ** 2, d, 2 * m ** 2)
    assert np.max(np.abs(got - ref)) < 1e-12


@given(st.floats(-8, 8), st.floats(1e-4, 8))
def test_ball_against_erf(c, r):
    got = gamma_ball(BallSpec((c,), r)).gamma_mass
    assert abs(got - gamma_ball_erf([c], r)) < 1e-13


def test_ball_log_far_tail():
    # far from the origin the mass is tiny but its log is still finite
    lm = float(log_gamma_ball(np.array([[30.0]]), 1.0)[0])
    ref = float(mpmath.log((mpmath.erf(31) - mpmath.erf(29)) / 2))
    assert lm == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_shell_mass_matches_ball_difference(d):
    rng = np.random.default_rng(10 + d)
    for _ in range(20):
        c = rng.uniform(-2, 2, d)
        r0 = rng.uniform(0.1, 2)
        r1 = r0 + rng.uniform(0.1, 2)
        diff = (math.exp(log_gamma_ball(c[None], r1)[0]) - math.exp(log_gamma_ball(c[None], r0)[0]))
        assert math.exp(log_gamma_shell(c, r0, r1)) == pytest.approx(diff, rel=1e-9, abs=1e-15)


def test_shell_mass_far_shell_no_cancellation():
    # both balls hold essentially all mass; the shell mass is e^{-k}-small
    ls = log_gamma_shell(np.array([0.0]), 8.0, 16.0)
    ref = float(mpmath.log(mpmath.erfc(8)))
    assert ls == pytest.approx(ref, rel=1e-10)


def test_integrate_ball_examples():
    one = TestFunction.constant(1.0, 1)
    ball = BallSpec((0.0,), 1.0)
    assert integrate_ball(one, ball) == pytest.approx(math.erf(1), abs=1e-10)
    sq = TestFunction.polynomial([0.0, 0.0, 1.0])
    ref = math.erf(1) / 2 - math.exp(-1) / math.sqrt(math.pi)
    assert integrate_ball(sq, ball, 1e-12) == pytest.approx(ref, abs=1e-12)
    assert ref == pytest.approx(0.2137, abs=1e-4)
    far = TestFunction.ball(5.0, 0.5)
    assert integrate_ball(far, ball) == 0.0


@pytest.mark.parametrize("d, tol", [(1, 1e-10), (2, 1e-9), (3, 1e-8)])
def test_integrate_ball_constant_matches_mass(d, tol):
    rng = np.random.default_rng(d)
    for _ in range(4):
        ball = BallSpec(tuple(rng.uniform(-2, 2, d)), float(rng.uniform(0.2, 2.5)))
        got = integrate_ball(TestFunction.constant(1.0, d), ball, tol)
        assert abs(got - gamma_ball(ball).gamma_mass) <= tol


def test_integrate_ball_validates():
    with pytest.raises(ValueError):
        integrate_ball(TestFunction.constant(1.0, 2), BallSpec((0.0,), 1.0))
    with pytest.raises(ValueError):
        integrate_ball(TestFunction.constant(1.0, 1), BallSpec((0.0,), 1.0), tol=1e-14)


def test_region_with_exclusion_is_a_shell():
    c = (0.3, -0.2)
    outer, inner = BallSpec(c, 1.5), BallSpec(c, 0.6)
    val, err = integrate_region([outer], inner, tol=1e-10)
    ref = math.exp(log_gamma_shell(np.array(c), 0.6, 1.5))
    assert abs(val - ref) <= 1e-10 and err <= 1e-10


def test_region_bump_mpmath_d1():
    u = TestFunction.bump(0.4, 0.3)
    val, _ = integrate_region([BallSpec((0.0,), 1.0)], u=u, tol=1e-12)
    f = lambda z: mpmath.exp(-z * z - (z - 0.4) ** 2 / (2 * 0.09)) / mpmath.sqrt(mpmath.pi)
    assert val == pytest.approx(float(mpmath.quad(f, [-1, 0.4, 1])), abs=1e-12)


def test_region_narrow_kernel_is_resolved():
    # a narrow kernel peak inside a wide support must not fool the first estimate
    u = TestFunction.bump(0.0, 0.5)
    y, t = 2.6457484938575657, 0.406915039405726
    s = t * t
    sig = math.sqrt(-math.expm1(-2 * s))
    inc = [BallSpec((math.exp(-s) * y,), 10 * sig), BallSpec((0.0,), u.support_extent)]
    coarse, _ = integrate_region(inc, u=u, kernel=(s, [y]), tol=1e-6, absolute=True)
    fine, _ = integrate_region(inc, u=u, kernel=(s, [y]), tol=1e-13, absolute=True)
    assert abs(coarse - fine) <= 1e-6


def test_region_unreachable_tolerance():
    # gives up at the evaluation budget instead of splitting forever
    with pytest.raises(ToleranceUnreachable):
        integrate_region([BallSpec((0.0, 0.0, 0.0), 1.0)], tol=1e-300)

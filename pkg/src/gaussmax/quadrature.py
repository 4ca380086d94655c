"""Integration against the Gaussian measure d gamma = pi^{-d/2} e^{-|x|^2} dx."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .functions import TestFunction
from .geometry import BallSpec, as_point

MAX_ORDER = 200


class ToleranceUnreachable(RuntimeError):
    """The adaptive integrator could not certify the requested tolerance."""


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray    # (n, dim)
    weights: np.ndarray  # (n,), sums to 1
    order: int
    dim: int


@dataclass(frozen=True)
class BallMeasure:
    ball: BallSpec
    gamma_mass: float
    log_mass: float


@lru_cache(maxsize=None)
def hermite_1d(order):
    """Gauss-Hermite nodes and gamma-normalised weights.

    Golub-Welsch eigenvalues of the Jacobi matrix, polished by Newton on the
    orthonormal recurrence; weights are Christoffel numbers 1 / sum q_k^2.
    """
    x, w = _gauss_hermite(order, np.float64)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def hermite_1d_extended(order):
    """``hermite_1d`` in ``np.longdouble``, polished in that precision.

    Used where the sum cancels heavily (polynomial integrands whose
    expectation is far below their typical size).
    """
    x, w = _gauss_hermite(order, np.longdouble)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _gauss_hermite(order, dtype):
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in [1, {MAX_ORDER}]")
    k = np.arange(1, order)
    jac = np.diag(np.sqrt(k / 2.0), 1)
    x = np.linalg.eigvalsh(jac + jac.T).astype(dtype)
    for _ in range(4):
        q, dq = _orthonormal_hermite(order, x)
        x = x - q[-1] / dq
    q, _ = _orthonormal_hermite(order, x)
    w = 1 / np.sum(q[:-1] ** 2, axis=0)
    # enforce exact mirror symmetry
    x = (x - x[::-1]) / 2
    w = (w + w[::-1]) / 2
    if order % 2:
        x[order // 2] = 0
    return x, w


def _orthonormal_hermite(n, x):
    """q_0..q_n orthonormal under gamma, and q_n'."""
    one = x.dtype.type(1)
    q = np.empty((n + 1, x.size), dtype=x.dtype)
    q[0] = one
    rt2 = np.sqrt(2 * one)
    if n >= 1:
        q[1] = rt2 * x
    for j in range(1, n):
        q[j + 1] = (rt2 * x * q[j] - np.sqrt(j * one) * q[j - 1]) / np.sqrt((j + 1) * one)
    dq = np.sqrt(2 * n * one) * q[n - 1]
    return q, dq


def hermite_rule(order, dim=1):
    """Tensor Gauss-Hermite rule against gamma on R^dim."""
    if not 1 <= dim <= 3:
        raise ValueError("dim must be 1, 2 or 3")
    x, w = hermite_1d(order)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return QuadratureRule(nodes, weights, order, dim)


def integrate_gamma(f, rule):
    """Sum of w_i f(node_i)."""
    vals = np.asarray(f(rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand value at a quadrature node")
    return float(math.fsum(rule.weights * vals))


def log_gamma_ball(center, radius):
    """log gamma(B_r(c)) for arrays of centers ``(n, d)`` and radii ``(n,)``."""
    center = np.atleast_2d(np.asarray(center, dtype=float))
    radius = np.broadcast_to(np.asarray(radius, dtype=float), center.shape[:1])
    c2 = np.sum(center * center, axis=-1)
    return _kernels.log_ball_mass(np.ascontiguousarray(c2), np.ascontiguousarray(radius ** 2),
                                  center.shape[1])


def gamma_ball(ball):
    """Exact Gaussian mass of a Euclidean ball.

    ``2 |W - x|^2`` is noncentral chi-square with ``d`` degrees of freedom and
    noncentrality ``2 |x|^2`` when ``W ~ gamma``; the mass is its Poisson
    mixture of regularised incomplete gamma functions.
    """
    lm = float(log_gamma_ball(np.asarray(ball.center)[None, :], ball.radius)[0])
    return BallMeasure(ball, math.exp(lm), lm)


def _log_angular(z, d):
    """log of the angular average factor times e^{-z}, z = 2 rho |c| >= 0."""
    z = np.asarray(z, dtype=float)
    if d == 1:
        return np.log1p(np.exp(-2.0 * z)) - math.log(2.0)
    if d == 3:
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.log(-np.expm1(-2.0 * z)) - np.log(2.0 * z)
        return np.where(z < 1e-8, 0.0, v)
    # d == 2: log(I_0(z) e^{-z})
    out = np.empty_like(z)
    small = z < 50.0
    zs = z[small]
    term = np.ones_like(zs)
    acc = np.ones_like(zs)
    q = zs * zs / 4.0
    for k in range(1, 160):
        term = term * q / (k * k)
        acc = acc + term
    out[small] = np.log(acc) - zs
    zl = z[~small]
    # large-argument expansion, coefficients ((2k-1)!!)^2 / (k! 8^k)
    series = np.ones_like(zl)
    coef = 1.0
    for k in range(1, 12):
        coef *= (2 * k - 1) ** 2 / (8.0 * k)
        series = series + coef / zl ** k
    out[~small] = np.log(series) - 0.5 * np.log(2.0 * math.pi * zl)
    return out


_SHELL_PANEL = 0.25
_SHELL_WINDOW = 40.0


def log_gamma_shell(center, r_in, r_out):
    """log gamma({r_in <= |xi - c| < r_out}) without cancellation.

    Integrates the radial profile ``rho^{d-1} e^{-(rho - |c|)^2}`` times the
    closed-form spherical average of ``e^{-2 rho <c, theta>}``, in logs.
    """
    c = np.atleast_1d(np.asarray(center, dtype=float))
    d = c.size
    if not 0.0 <= r_in < r_out:
        raise ValueError("need 0 <= r_in < r_out")
    m = float(np.linalg.norm(c))
    peak = min(max(m, r_in), r_out)
    lo = max(r_in, peak - _SHELL_WINDOW)
    hi = min(r_out, peak + _SHELL_WINDOW)
    npan = max(1, int(math.ceil((hi - lo) / _SHELL_PANEL)))
    x, w = _legendre16()
    edges = np.linspace(lo, hi, npan + 1)
    half = 0.5 * np.diff(edges)
    rho = (edges[:-1, None] + half[:, None] * (x[None, :] + 1.0)).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    area = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}[d]
    with np.errstate(divide="ignore"):
        logf = (math.log(area) - 0.5 * d * math.log(math.pi) - (rho - m) ** 2
                + (d - 1) * np.log(rho) + _log_angular(2.0 * rho * m, d) + np.log(wt))
    top = float(np.max(logf))
    return min(top + math.log(math.fsum(np.exp(logf - top))), 0.0)


@lru_cache(maxsize=None)
def _legendre16():
    return np.polynomial.legendre.leggauss(16)


def gamma_ball_erf(center, radius):
    """One-dimensional closed form (erf(|x| + r) - erf(|x| - r)) / 2."""
    m = abs(float(np.atleast_1d(center)[0]))
    return 0.5 * (math.erf(m + radius) - math.erf(m - radius))


def integrate_region(includes, exclude=None, *, u=None, kernel=None, tol=1e-8,
                     absolute=False):
    """Integrate ``u dgamma`` (optionally weighted by a Mehler kernel) over a region.

    The region is the intersection of the ``includes`` balls minus the open
    ``exclude`` ball. ``kernel`` is ``(s, y)`` to integrate
    ``M_s(y, .) u dgamma``. Returns ``(value, error_estimate)`` and raises
    :class:`ToleranceUnreachable` if the estimate exceeds ``tol``.
    """
    includes = list(includes)
    dim = includes[0].dim
    u = u if u is not None else TestFunction.constant(1.0, dim)
    if u.kind == "ball":
        includes.append(BallSpec(u.center, u.radius))
        code, params = _kernels.CONST, np.array([1.0])
    else:
        code, params = u.code, u.packed()
    inc = np.array([list(b.center) + [b.radius] for b in includes], dtype=float)
    exc = np.zeros(dim + 1)
    if exclude is not None:
        exc[:] = list(exclude.center) + [exclude.radius]
    lo = np.max(inc[:, :dim] - inc[:, dim:], axis=0)
    hi = np.min(inc[:, :dim] + inc[:, dim:], axis=0)
    if np.any(hi <= lo):
        return 0.0, 0.0
    mode, s, y = 0, 0.0, np.zeros(dim)
    if kernel is not None:
        mode, s = 1, float(kernel[0])
        y = as_point(kernel[1], dim)
    val, err, _forced, _evals = _kernels.region(inc, exc, mode, s, y, code,
                                                np.asarray(params, dtype=float),
                                                bool(absolute), float(tol))
    if not math.isfinite(val):
        raise FloatingPointError("non-finite value from the region integrator")
    if err > tol:
        raise ToleranceUnreachable(f"error estimate {err:.3e} exceeds tolerance {tol:.3e}")
    return float(val), float(err)


def integrate_ball(f, ball, tol=1e-10):
    """Integral of ``f`` over ``ball`` against gamma, absolute error <= tol."""
    if not tol >= 1e-12:
        raise ValueError("tol must be at least 1e-12")
    if f.dim != ball.dim:
        raise ValueError("dimension mismatch between function and ball")
    includes = [ball]
    if math.isfinite(f.support_extent) and f.kind != "ball":
        includes.append(BallSpec(tuple(f.support_center), f.support_extent))
    val, _ = integrate_region(includes, u=f.unscaled(), tol=tol / f.scale)
    return f.scale * val

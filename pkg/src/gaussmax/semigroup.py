"""The Ornstein-Uhlenbeck semigroup e^{sL}, L = (1/2) Delta - <x, grad>.

Two evaluation paths:

* substitution (primary): ``e^{sL}u(y) = E u(e^{-s} y + sigma W)`` with
  ``sigma = sqrt(1 - e^{-2s})`` and ``W ~ gamma``, summed by a Gauss-Hermite
  rule. Ball indicators have a closed form through the Gaussian ball mass.
* kernel: adaptive integration of ``M_s(y, .) u dgamma`` over the support
  of ``u`` intersected with a ball of radius ``10 sigma`` around ``e^{-s} y``,
  outside of which the kernel measure has mass below ``e^{-100}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import hermite as H
from numpy.polynomial import polynomial as P

from . import _kernels
from .functions import TestFunction
from .geometry import BallSpec, as_point
from .kernel import mehler_log
from .quadrature import (MAX_ORDER, hermite_1d, hermite_1d_extended, integrate_region,
                         log_gamma_ball)

IDENTITY_S = 1e-8
DEFAULT_ORDER = 40
DEFAULT_TOL = 1e-10
KERNEL_REACH = 10.0

__all__ = [
    "Method", "SemigroupEval", "TestFunction", "ou_apply", "substitution_values",
    "expectation", "hermite_poly", "ou_generator", "generator_function",
    "chapman_kolmogorov",
]


class Method(str, Enum):
    SUBSTITUTION = "substitution"
    KERNEL = "kernel"


@dataclass(frozen=True)
class SemigroupEval:
    value: float
    s: float
    y: tuple
    method: Method
    est_error: float

    def to_dict(self):
        return {"value": self.value, "s": self.s, "y": list(self.y),
                "method": Method(self.method).value, "est_error": self.est_error}


def _spread(s):
    return np.exp(-s), np.sqrt(-np.expm1(-2.0 * s))


def substitution_values(u, s, ys, order=DEFAULT_ORDER, absolute=False):
    """Vectorised substitution path for the unscaled shape of ``u``.

    ``ys`` is ``(n, d)``; ``s`` is a scalar or an ``(n,)`` array of positive
    times. Entries with ``s < 1e-8`` return ``u(y)``. The result is **not**
    multiplied by ``u.scale``.
    """
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    n, d = ys.shape
    if d != u.dim:
        raise ValueError("dimension mismatch between function and points")
    s = np.broadcast_to(np.asarray(s, dtype=float), (n,)).copy()
    if np.any(~(s > 0)):
        raise ValueError("s must be positive")
    out = np.empty(n)
    small = s < IDENTITY_S
    if small.any():
        v = u.base(ys[small])
        out[small] = np.abs(v) if absolute else v
    big = ~small
    if big.any():
        out[big] = _substitute(u, s[big], ys[big], order, absolute)
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite value in the substitution sum")
    return out


def _substitute(u, s, ys, order, absolute):
    decay, sigma = _spread(s)
    if u.kind == "ball":
        c = np.asarray(u.center)
        centers = (c[None, :] - decay[:, None] * ys) / sigma[:, None]
        return np.exp(log_gamma_ball(centers, u.radius / sigma))
    z, w = hermite_1d(order)
    if u.kind == "constant":
        v = np.full(ys.shape[0], u.value)
        return np.abs(v) if absolute else v
    if u.kind == "hermite":
        return _hermite_product(u.degrees, decay, ys, order, absolute)
    if u.separable:
        out = np.ones(ys.shape[0])
        for ax in range(u.dim):
            arg = decay[:, None] * ys[:, ax, None] + sigma[:, None] * z[None, :]
            out *= np.exp(-0.5 * (arg - u.center[ax]) ** 2 / u.width ** 2) @ w
        return out
    # non-separable: full tensor rule, one call per distinct time
    out = np.empty(ys.shape[0])
    params = u.packed()
    for sv in np.unique(s):
        rows = s == sv
        dv, sg = _spread(sv)
        out[rows] = _kernels.gh_tensor(u.code, params, np.ascontiguousarray(ys[rows]),
                                       float(dv), float(sg), z, w, bool(absolute))
    return out


def _hermite_product(degrees, decay, ys, order, absolute):
    # e^{-ns} H_n(y) is tiny against the summands for large n s, so the
    # whole sum runs in extended precision
    z, w = hermite_1d_extended(order)
    dec = decay.astype(np.longdouble)
    sig = np.sqrt(1 - dec * dec)
    out = np.ones(ys.shape[0], dtype=np.longdouble)
    for ax, n in enumerate(degrees):
        arg = dec[:, None] * ys[:, ax, None].astype(np.longdouble) + sig[:, None] * z[None, :]
        h_prev, h = np.ones_like(arg), 2 * arg
        if n == 0:
            h = h_prev
        for k in range(1, n):
            h_prev, h = h, 2 * arg * h - 2 * k * h_prev
        if absolute:
            h = np.abs(h)
        out *= h @ w
    return out.astype(float)


def expectation(f, s, y, order=DEFAULT_ORDER):
    """Substitution path for an arbitrary vectorised callable ``f(points)``."""
    y = as_point(y)
    decay, sigma = _spread(float(s))
    z, w = hermite_1d(order)
    d = y.size
    grids = np.meshgrid(*([z] * d), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wt = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * d), indexing="ij")], axis=-1),
                 axis=-1)
    vals = np.asarray(f(decay * y + sigma * nodes), dtype=float)
    return math.fsum(wt * vals)


def ou_apply(u, s, y, method=Method.SUBSTITUTION, order=DEFAULT_ORDER, tol=DEFAULT_TOL,
             absolute=False):
    """Evaluate ``e^{sL}u(y)`` (or ``e^{sL}|u|(y)`` with ``absolute``)."""
    if not s > 0:
        raise ValueError("s must be positive")
    method = Method(method)
    y = as_point(y, u.dim)
    s = float(s)
    if s < IDENTITY_S:
        value, err = _identity_limit(u, s, y, absolute)
        return SemigroupEval(u.scale * value, s, tuple(float(v) for v in y), method, u.scale * err)
    if method is Method.SUBSTITUTION:
        if not 1 <= order <= MAX_ORDER:
            raise ValueError(f"order must lie in [1, {MAX_ORDER}]")
        value, err = _substitution_single(u, s, y, order, absolute)
    else:
        value, err = _kernel_single(u, s, y, tol / u.scale, absolute)
    return SemigroupEval(u.scale * value, s, tuple(float(v) for v in y), method, u.scale * err)


def _identity_limit(u, s, y, absolute):
    value = float(u.base(y[None, :])[0])
    if absolute:
        value = abs(value)
    if u.kind == "ball":
        _, sigma = _spread(s)
        gap = abs(float(np.linalg.norm(y - np.asarray(u.center))) - u.radius)
        return value, (0.0 if gap > KERNEL_REACH * sigma else 1.0)
    return value, s * abs(float(ou_generator(u.unscaled(), y)))


def _substitution_single(u, s, y, order, absolute):
    base = u.unscaled()
    v = float(substitution_values(base, s, y[None, :], order, absolute)[0])
    if base.kind == "ball":
        return v, 1e-13 * v + 1e-300
    # a nearby order underestimates the error of an unresolved feature
    check = 2 * order if 2 * order <= MAX_ORDER else max(1, order // 2)
    v2 = float(substitution_values(base, s, y[None, :], check, absolute)[0])
    return v, 2.0 * abs(v - v2) + 4e-16 * max(abs(v), 1.0) * (1 + u.dim)


def _kernel_single(u, s, y, tol, absolute):
    decay, sigma = _spread(s)
    base = u.unscaled()
    includes = [BallSpec(tuple(decay * y), KERNEL_REACH * sigma)]
    if math.isfinite(base.support_extent) and base.kind != "ball":
        includes.append(BallSpec(tuple(base.support_center), base.support_extent))
    return integrate_region(includes, u=base, kernel=(s, y), tol=tol, absolute=absolute)


def hermite_poly(n, s):
    """Physicists' Hermite polynomial H_n(s) by the three-term recurrence."""
    if not 0 <= n <= 12:
        raise ValueError("n must lie in [0, 12]")
    if n == 0:
        return 1.0
    h_prev, h = 1.0, 2.0 * s
    for k in range(1, n):
        h_prev, h = h, 2.0 * s * h - 2.0 * k * h_prev
    return h


def ou_generator(u, x):
    """``(1/2) Delta u - <x, grad u>`` from closed-form derivatives.

    ``x`` may be a single point or an ``(n, d)`` array.
    """
    if not u.smooth:
        raise ValueError(f"{u.kind} functions have no classical generator")
    p = np.asarray(x, dtype=float)
    single = p.ndim == 1
    p = np.atleast_2d(p)
    if p.shape[-1] != u.dim:
        raise ValueError("dimension mismatch between function and point")
    if u.kind == "constant":
        out = np.zeros(p.shape[0])
    elif u.kind == "hermite":
        out = -sum(u.degrees) * u.base(p)
    elif u.kind == "bump":
        c = np.asarray(u.center)
        w2 = u.width ** 2
        r2 = np.sum((p - c) ** 2, axis=-1)
        drift = np.sum(p * (p - c), axis=-1)
        out = u.base(p) * (0.5 * (r2 / w2 ** 2 - u.dim / w2) + drift / w2)
    else:
        out = generator_function(u.unscaled()).base(p)
    out = u.scale * out
    return float(out[0]) if single else out


def _times_x(c, axis):
    shape = list(c.shape)
    shape[axis] += 1
    out = np.zeros(shape)
    idx = [slice(None)] * c.ndim
    idx[axis] = slice(1, None)
    out[tuple(idx)] = c
    return out


def _poly_coeffs(u):
    if u.kind == "polynomial":
        return u.coeff_array
    if u.kind == "constant":
        return np.full((1,) * u.dim, u.value)
    if u.kind == "hermite":
        out = np.ones((1,) * 0)
        for n in u.degrees:
            out = np.multiply.outer(out, H.herm2poly([0] * n + [1]))
        return out
    raise ValueError(f"{u.kind} is not a polynomial kind")


def generator_function(u):
    """``L u`` as a polynomial test function, for polynomial-type kinds."""
    c = _poly_coeffs(u)
    deg = max(c.shape) - 1
    acc = np.zeros((deg + 1,) * u.dim)
    for ax in range(u.dim):
        lap = P.polyder(c, m=2, axis=ax)
        drift = _times_x(P.polyder(c, axis=ax), ax)
        for term, factor in ((lap, 0.5), (drift, -1.0)):
            if term.size == 0:
                continue
            sl = tuple(slice(0, min(n, deg + 1)) for n in term.shape)
            acc[sl] += factor * term[sl]
    return TestFunction.polynomial(u.scale * acc)


def chapman_kolmogorov(s, t, x, y, order=160):
    """``(int M_s(x, z) M_t(z, y) dgamma(z), M_{s+t}(x, y))``.

    The narrower kernel supplies the integrating measure, a Gaussian with
    mean ``e^{-r} p`` and covariance ``(1 - e^{-2r}) / 2``, so the other
    factor is smooth on the scale of the rule.
    """
    x = as_point(x)
    y = as_point(y, x.size)
    if s > t:
        s, t, x, y = t, s, y, x
    lhs = expectation(lambda z: np.exp(mehler_log(t, z, y)), s, x, order)
    return lhs, math.exp(mehler_log(s + t, x, y))

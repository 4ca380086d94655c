"""Centered Gaussian Hardy-Littlewood and non-tangential maximal functions.

Both suprema are found by a coarse grid followed by local refinement. The
incumbent is the first maximiser found and is only replaced by a strictly
larger value, so results do not depend on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .functions import TestFunction
from .geometry import BallSpec, ConeSpec, as_point
from .quadrature import integrate_region, log_gamma_ball
from .semigroup import DEFAULT_ORDER, substitution_values

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
CONVERGED = 1e-4
MAX_EXTRA_ROUNDS = 12
LOCAL_POINTS = 7
# nt refinement keeps polishing until its local box is this small
POLISH_STEP = 1e-8
MAX_POLISH_ROUNDS = 30
# relative tolerance of the numerator against the ball mass
AVERAGE_TOL = 1e-9
# keeps lattice points strictly inside |x - y| < A t
OPEN_SHRINK = 1.0 - 1e-12


@dataclass(frozen=True)
class SearchParams:
    coarse_grid: int = 32
    refine_rounds: int = 6
    shrink: float = 0.35
    t_floor: float = 1e-4

    def __post_init__(self):
        if self.coarse_grid < 8:
            raise ValueError("coarse_grid must be at least 8")
        if self.refine_rounds < 2:
            raise ValueError("refine_rounds must be at least 2")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink must lie in (0, 1)")
        if not 0.0 < self.t_floor <= 1e-3:
            raise ValueError("t_floor must lie in (0, 1e-3]")

    def doubled(self):
        return SearchParams(2 * self.coarse_grid, self.refine_rounds, self.shrink, self.t_floor)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class MaximalResult:
    value: float
    argmax: object  # radius (hl) or {"y": [...], "t": t} (nt)
    grid_diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {"value": self.value, "argmax": self.argmax,
                "grid_diagnostics": self.grid_diagnostics}


class _Best:
    """Incumbent with strict-improvement replacement."""

    def __init__(self):
        self.value = -math.inf
        self.arg = None

    def offer(self, values, args):
        i = int(np.argmax(values))
        if values[i] > self.value:
            self.value = float(values[i])
            self.arg = args[i]
            return True
        return False


def _needs_more(deltas, value, done, budget):
    if done < budget:
        return True
    return deltas[-1] > CONVERGED * (1.0 + value) and done < budget + MAX_EXTRA_ROUNDS


# ---------------------------------------------------------------------------
# Hardy-Littlewood
# ---------------------------------------------------------------------------

def ball_average(u, x, r, rel_tol=AVERAGE_TOL):
    """``gamma(B_r(x))^{-1} int_{B_r(x)} |u| dgamma`` for the unscaled shape of ``u``."""
    x = as_point(x, u.dim)
    log_den = float(log_gamma_ball(x[None, :], r)[0])
    den = math.exp(log_den)
    includes = [BallSpec(tuple(x), r)]
    base = u.unscaled()
    if base.kind != "ball" and math.isfinite(base.support_extent):
        includes.append(BallSpec(tuple(base.support_center), base.support_extent))
    num, _ = integrate_region(includes, u=base, tol=rel_tol * den, absolute=True)
    return min(num / den, base.sup_abs)


def hl_maximal(u, x, search=None, rel_tol=AVERAGE_TOL):
    """sup over r > 0 of gamma-averages of |u| on B_r(x).

    For r beyond ``r* = |x - c| + extent`` (the support ball around ``c``)
    the numerator is constant and the denominator increases, so the search
    runs over ``(t_floor r*, r*]``: a geometric grid, then golden-section
    rounds in log r around the incumbent.
    """
    search = search or SearchParams()
    if not math.isfinite(u.support_radius):
        raise ValueError("hl_maximal needs a function of finite support")
    x = as_point(x, u.dim)
    base = u.unscaled()
    r_star = float(np.linalg.norm(x - base.support_center)) + base.support_extent
    n = search.coarse_grid
    lo = math.log(search.t_floor * r_star)
    hi = math.log(r_star)
    logs = lo + (hi - lo) * np.arange(1, n + 1) / n
    evals = 0

    def avg(logr):
        nonlocal evals
        evals += 1
        return ball_average(base, x, math.exp(logr), rel_tol)

    best = _Best()
    vals = np.array([avg(v) for v in logs])
    best.offer(vals, list(logs))
    coarse = best.value
    i = int(np.argmax(vals))
    a = logs[i - 1] if i > 0 else lo
    b = logs[i + 1] if i + 1 < n else hi
    deltas = []
    rounds = 0
    while _needs_more(deltas, best.value, rounds, search.refine_rounds):
        before = best.value
        a, b = _golden_round(avg, a, b, best, search.shrink)
        deltas.append(best.value - before)
        rounds += 1
    limit_used = False
    if base.continuous_at(x):
        lim = abs(float(base.base(x[None, :])[0]))
        if lim > best.value:
            best.value, best.arg, limit_used = lim, -math.inf, True
    radius = 0.0 if best.arg == -math.inf else math.exp(best.arg)
    diag = {"coarse_value": u.scale * coarse, "deltas": [u.scale * d for d in deltas],
            "rounds": rounds, "evaluations": evals, "r_star": r_star,
            "limit_used": limit_used}
    return MaximalResult(u.scale * best.value, radius, diag)


def _golden_round(f, a, b, best, shrink):
    """Golden-section steps on [a, b] until its width shrinks by ``shrink``."""
    width = b - a
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    best.offer(np.array([fc, fd]), [c, d])
    while b - a > shrink * width:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
            best.offer(np.array([fc]), [c])
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
            best.offer(np.array([fd]), [d])
    return a, b


# ---------------------------------------------------------------------------
# non-tangential
# ---------------------------------------------------------------------------

def _lattice(n, d):
    g = np.linspace(-1.0, 1.0, n)
    mesh = np.meshgrid(*([g] * d), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    return pts[np.sum(pts * pts, axis=1) < 1.0 + 1e-15] if d > 1 else pts


def _clip_unit(v):
    norm = np.linalg.norm(v, axis=1)
    scale = np.where(norm > 1.0, 1.0 / np.where(norm > 0, norm, 1.0), 1.0)
    return v * scale[:, None]


def nt_maximal(u, x, cone=None, search=None, order=DEFAULT_ORDER):
    """sup of |e^{t^2 L} u(y)| over the cone at ``x``.

    Coarse stage: geometric t-grid on ``[t_floor, a m(x)]`` times a lattice
    of y in ``B_{At}(x)``, written as ``y = x + A t v`` with ``|v| < 1``.
    Refinement: a local grid in ``(v, log t)`` around the incumbent whose
    box shrinks by ``search.shrink`` each round, clipped to the cone, until
    the box is below ``POLISH_STEP`` and the last delta has converged. The
    t -> 0 limit contributes ``|u(x)|`` when u is continuous at x.
    """
    cone = cone or ConeSpec()
    search = search or SearchParams()
    x = as_point(x, u.dim)
    d = u.dim
    base = u.unscaled()
    A = cone.aperture
    t_hi = cone.height(x)
    t_lo = min(search.t_floor, 0.5 * t_hi)
    n = search.coarse_grid
    evals = 0

    def values(vs, ls):
        nonlocal evals
        evals += ls.size
        ts = np.minimum(np.exp(ls), t_hi)
        ys = x + (A * OPEN_SHRINK) * ts[:, None] * vs
        return np.abs(substitution_values(base, ts * ts, ys, order))

    l_lo, l_hi = math.log(t_lo), math.log(t_hi)
    lt = np.linspace(l_lo, l_hi, n)
    unit = _lattice(n, d)
    ls = np.repeat(lt, unit.shape[0])
    vs = np.tile(unit, (n, 1))
    best = _Best()
    best.offer(values(vs, ls), list(zip(vs, ls)))
    coarse = best.value

    h_t = lt[1] - lt[0]
    h_v = 2.0 / (n - 1)
    local = np.linspace(-1.0, 1.0, LOCAL_POINTS)
    box = np.meshgrid(*([local] * (d + 1)), indexing="ij")
    box = np.stack([m.ravel() for m in box], axis=-1)
    deltas = []
    rounds = 0
    while (_needs_more(deltas, best.value, rounds, search.refine_rounds)
           or (max(h_t, h_v) > POLISH_STEP and rounds < search.refine_rounds + MAX_POLISH_ROUNDS)):
        before = best.value
        v0, l0 = best.arg
        cl = np.clip(l0 + h_t * box[:, 0], l_lo, l_hi)
        cv = _clip_unit(v0 + h_v * box[:, 1:])
        best.offer(values(cv, cl), list(zip(cv, cl)))
        deltas.append(best.value - before)
        h_t *= search.shrink
        h_v *= search.shrink
        rounds += 1

    limit_used = False
    v_best, l_best = best.arg
    t_best = min(math.exp(l_best), t_hi)
    y_best = x + (A * OPEN_SHRINK) * t_best * v_best
    if base.continuous_at(x):
        lim = abs(float(base.base(x[None, :])[0]))
        if lim > best.value:
            best.value, limit_used = lim, True
            y_best, t_best = x, 0.0
    diag = {"coarse_value": u.scale * coarse, "deltas": [u.scale * v for v in deltas],
            "rounds": rounds, "evaluations": evals, "t_range": [t_lo, t_hi],
            "limit_used": limit_used}
    argmax = {"y": [float(v) for v in y_best], "t": float(t_best)}
    return MaximalResult(u.scale * best.value, argmax, diag)


__all__ = ["SearchParams", "MaximalResult", "hl_maximal", "nt_maximal", "ball_average",
           "TestFunction"]

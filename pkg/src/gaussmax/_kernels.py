"""Hot numeric kernels.

Each kernel has a numba implementation (``*_nb``) and a vectorised numpy
implementation (``*_np``). The public names at the bottom of the module
point at one of the two according to :data:`gaussmax._accel.USE_NUMBA`.
Both variants are always importable so they can be compared against each
other (see ``benchmarks/bench_kernels.py``).
"""
import math

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit

CONST, HERMITE, BUMP, BALL, POLY = 0, 1, 2, 3, 4

LOG_PI = math.log(math.pi)
LN2 = math.log(2.0)
LN10 = math.log(10.0)

# series regime for the Gaussian ball mass; outside it the sectional
# quadrature takes over
SERIES_MAX_CENTER2 = 400.0
SERIES_MAX_RADIUS2 = 600.0

# sectional quadrature layout
_SECT_UNIFORM = 24
_SECT_GRADED = 20
_SECT_WINDOW = 12.0


def _sectional_panels():
    inner = np.linspace(0.0, 1.0, _SECT_UNIFORM + 1)
    first = inner[1]
    graded = first * 2.0 ** -np.arange(1, _SECT_GRADED + 1)
    brk = np.unique(np.concatenate([inner, graded, 1.0 - graded]))
    x, w = np.polynomial.legendre.leggauss(16)
    a, b = brk[:-1, None], brk[1:, None]
    tau = (0.5 * (b - a) * (x + 1.0) + a).ravel()
    wt = (0.5 * (b - a) * w).ravel()
    # smoothing map w = lo + (hi - lo) * tau^2 (3 - 2 tau)
    phi = tau * tau * (3.0 - 2.0 * tau)
    dphi = 6.0 * tau * (1.0 - tau)
    return phi, wt * dphi


SECT_PHI, SECT_W = _sectional_panels()


# ---------------------------------------------------------------------------
# scalar helpers (numba-compiled when available)
# ---------------------------------------------------------------------------

@njit
def log1mexp_scalar(s):
    if s <= LN2:
        return math.log(-math.expm1(-s))
    return math.log1p(-math.exp(-s))


@njit
def mehler_sym_scalar(s, x, y):
    d = x.shape[0]
    dxy2 = 0.0
    ip = 0.0
    for i in range(d):
        dxy2 += (x[i] - y[i]) ** 2
        ip += x[i] * y[i]
    out = -dxy2 / math.expm1(2.0 * s) + 2.0 * ip / (math.exp(s) + 1.0)
    out -= 0.5 * d * (log1mexp_scalar(s) + math.log1p(math.exp(-s)))
    return out


@njit
def _hermite_scalar(n, s):
    if n == 0:
        return 1.0
    h_prev = 1.0
    h = 2.0 * s
    for k in range(1, n):
        h_prev, h = h, 2.0 * s * h - 2.0 * k * h_prev
    return h


@njit
def eval_base_scalar(code, params, p):
    d = p.shape[0]
    if code == CONST:
        return params[0]
    if code == HERMITE:
        out = 1.0
        for i in range(d):
            out *= _hermite_scalar(int(params[i]), p[i])
        return out
    if code == BUMP or code == BALL:
        r2 = 0.0
        for i in range(d):
            r2 += (p[i] - params[i]) ** 2
        if code == BUMP:
            return math.exp(-0.5 * r2 / params[d] ** 2)
        return 1.0 if r2 < params[d] ** 2 else 0.0
    # dense polynomial, C-order coefficient tensor
    deg = int(params[0])
    m = deg + 1
    total = 0.0
    ncoef = m ** d
    for flat in range(ncoef):
        c = params[1 + flat]
        if c == 0.0:
            continue
        term = c
        idx = flat
        for ax in range(d - 1, -1, -1):
            e = idx % m
            idx //= m
            term *= p[ax] ** e
        total += term
    return total


# ---------------------------------------------------------------------------
# log Gaussian ball mass
# ---------------------------------------------------------------------------

@njit
def _series_log_mass(mu, z, d):
    """log P(|W - c|^2 < z) for W ~ gamma, |c|^2 = mu, via the Poisson mixture."""
    a = 0.5 * d
    jtop = int(math.ceil(mu + 15.0 * math.sqrt(mu) + 40.0)) if mu > 0.0 else 0
    b = a + jtop
    # S(b) = sum_n z^n / ((b+1)...(b+n))
    term = 1.0
    ssum = 1.0
    n = 1
    while True:
        term *= z / (b + n)
        ssum += term
        if term < 1e-17 * ssum and z < b + n:
            break
        n += 1
    # S_j for j = jtop..0 by the downward recursion
    sj = np.empty(jtop + 1)
    sj[jtop] = ssum
    for j in range(jtop - 1, -1, -1):
        sj[j] = 1.0 + z * sj[j + 1] / (a + j + 1.0)
    # upward sum of Poisson(j; mu) P(a + j, z), relative to the j = 0 term
    log_t0 = a * math.log(z) - z - math.lgamma(a + 1.0) + math.log(sj[0]) - mu
    acc = 1.0
    cur = 1.0
    offset = 0.0
    for j in range(jtop):
        cur *= (z / (a + j + 1.0)) * (mu / (j + 1.0)) * (sj[j + 1] / sj[j])
        acc += cur
        if acc > 1e280:
            acc *= 1e-280
            cur *= 1e-280
            offset += 280.0 * LN10
    return min(log_t0 + offset + math.log(acc), 0.0)


@njit
def _sectional_log_mass(m2, r2, d):
    """Same quantity by integrating along the center direction."""
    m = math.sqrt(m2)
    r = math.sqrt(r2)
    if d == 1:
        if m - r > 0.0:
            v = 0.5 * (math.erfc(m - r) - math.erfc(m + r))
        else:
            v = 0.5 * (math.erf(m + r) - math.erf(m - r))
        return math.log(v) if v > 0.0 else -math.inf
    lo_raw = m - r
    hi_raw = m + r
    w0 = min(max(0.0, lo_raw), hi_raw)
    lo = max(lo_raw, w0 - _SECT_WINDOW)
    hi = min(hi_raw, w0 + _SECT_WINDOW)
    span = hi - lo
    acc = 0.0
    for i in range(SECT_PHI.shape[0]):
        w = lo + span * SECT_PHI[i]
        q = r2 - (w - m) ** 2
        if q <= 0.0:
            continue
        if d == 2:
            g = math.erf(math.sqrt(q))
        else:
            g = -math.expm1(-q)
        acc += SECT_W[i] * math.exp(w0 * w0 - w * w) * g
    acc *= span / math.sqrt(math.pi)
    if acc <= 0.0:
        return -math.inf
    return min(math.log(acc) - w0 * w0, 0.0)


@njit
def log_ball_mass_nb(center2, radius2, d):
    n = center2.shape[0]
    out = np.empty(n)
    for i in range(n):
        m2 = center2[i]
        r2 = radius2[i]
        if r2 <= 0.0:
            out[i] = -math.inf
        elif r2 == math.inf:
            out[i] = 0.0
        elif m2 <= SERIES_MAX_CENTER2 and r2 <= SERIES_MAX_RADIUS2:
            out[i] = _series_log_mass(m2, r2, d)
        else:
            out[i] = _sectional_log_mass(m2, r2, d)
    return out


_erf_np = np.vectorize(math.erf, otypes=[float])
_erfc_np = np.vectorize(math.erfc, otypes=[float])
_lgamma_np = np.vectorize(math.lgamma, otypes=[float])


def _series_log_mass_np(mu, z, d):
    a = 0.5 * d
    jtop = np.where(mu > 0, np.ceil(mu + 15.0 * np.sqrt(mu) + 40.0), 0.0)
    jmax = int(jtop.max()) if jtop.size else 0
    b = a + jtop
    term = np.ones_like(z)
    ssum = np.ones_like(z)
    n = 1
    active = np.ones(z.shape, dtype=bool)
    while active.any():
        term = np.where(active, term * z / (b + n), term)
        ssum = np.where(active, ssum + term, ssum)
        active &= ~((term < 1e-17 * ssum) & (z < b + n))
        n += 1
    log_z = np.log(z)
    with np.errstate(divide="ignore"):
        log_mu = np.where(mu > 0, np.log(np.where(mu > 0, mu, 1.0)), 0.0)
    best = np.full(z.shape, -np.inf)
    acc = np.zeros_like(z)
    sj = ssum.copy()
    for j in range(jmax, -1, -1):
        live = j <= jtop
        bj = a + j
        upd = live & (j < jtop)
        sj = np.where(upd, 1.0 + z * sj / (bj + 1.0), sj)
        log_p = bj * log_z - z - math.lgamma(bj + 1.0) + np.log(sj)
        log_w = np.where(mu > 0, -mu + j * log_mu - math.lgamma(j + 1.0),
                         0.0 if j == 0 else -np.inf)
        t = np.where(live, log_p + log_w, -np.inf)
        finite = np.isfinite(t)
        grow = finite & (t > best)
        with np.errstate(invalid="ignore", over="ignore"):
            acc = np.where(grow, acc * np.exp(best - t) + 1.0,
                           np.where(finite, acc + np.exp(t - best), acc))
        best = np.where(grow, t, best)
    return np.minimum(best + np.log(acc), 0.0)


def _sectional_log_mass_np(m2, r2, d):
    m = np.sqrt(m2)
    r = np.sqrt(r2)
    if d == 1:
        far = m - r > 0
        v = np.where(far, 0.5 * (_erfc_np(m - r) - _erfc_np(m + r)),
                     0.5 * (_erf_np(m + r) - _erf_np(m - r)))
        with np.errstate(divide="ignore"):
            return np.where(v > 0, np.log(np.where(v > 0, v, 1.0)), -np.inf)
    lo_raw, hi_raw = m - r, m + r
    w0 = np.minimum(np.maximum(0.0, lo_raw), hi_raw)
    lo = np.maximum(lo_raw, w0 - _SECT_WINDOW)
    hi = np.minimum(hi_raw, w0 + _SECT_WINDOW)
    span = hi - lo
    w = lo[:, None] + span[:, None] * SECT_PHI[None, :]
    q = r2[:, None] - (w - m[:, None]) ** 2
    qpos = np.maximum(q, 0.0)
    g = _erf_np(np.sqrt(qpos)) if d == 2 else -np.expm1(-qpos)
    acc = np.sum(SECT_W * np.exp(w0[:, None] ** 2 - w * w) * g, axis=1)
    acc *= span / math.sqrt(math.pi)
    with np.errstate(divide="ignore"):
        out = np.where(acc > 0, np.log(np.where(acc > 0, acc, 1.0)) - w0 * w0, -np.inf)
    return np.minimum(out, 0.0)


def log_ball_mass_np(center2, radius2, d):
    center2 = np.asarray(center2, dtype=float)
    radius2 = np.asarray(radius2, dtype=float)
    out = np.empty(center2.shape)
    zero = radius2 <= 0
    full = np.isinf(radius2)
    series = ~zero & ~full & (center2 <= SERIES_MAX_CENTER2) & (radius2 <= SERIES_MAX_RADIUS2)
    sect = ~zero & ~full & ~series
    out[zero] = -np.inf
    out[full] = 0.0
    if series.any():
        out[series] = _series_log_mass_np(center2[series], radius2[series], d)
    if sect.any():
        out[sect] = _sectional_log_mass_np(center2[sect], radius2[sect], d)
    return out


# ---------------------------------------------------------------------------
# tensor Gauss-Hermite semigroup sums
# ---------------------------------------------------------------------------

@njit
def gh_tensor_nb(code, params, ys, decay, sigma, nodes, weights, absolute):
    n, d = ys.shape
    order = nodes.shape[0]
    total_nodes = order ** d
    out = np.zeros(n)
    p = np.empty(d)
    for i in range(n):
        acc = 0.0
        for flat in range(total_nodes):
            idx = flat
            w = 1.0
            for ax in range(d - 1, -1, -1):
                j = idx % order
                idx //= order
                p[ax] = decay * ys[i, ax] + sigma * nodes[j]
                w *= weights[j]
            v = eval_base_scalar(code, params, p)
            if absolute:
                v = abs(v)
            acc += w * v
        out[i] = acc
    return out


def eval_base_np(code, params, pts):
    """Vectorised twin of :func:`eval_base_scalar` for points ``(..., d)``."""
    d = pts.shape[-1]
    if code == CONST:
        return np.full(pts.shape[:-1], params[0])
    if code == HERMITE:
        out = np.ones(pts.shape[:-1])
        for i in range(d):
            n = int(params[i])
            s = pts[..., i]
            h_prev, h = np.ones_like(s), 2.0 * s
            if n == 0:
                h = h_prev
            for k in range(1, n):
                h_prev, h = h, 2.0 * s * h - 2.0 * k * h_prev
            out = out * h
        return out
    if code in (BUMP, BALL):
        r2 = np.sum((pts - params[:d]) ** 2, axis=-1)
        if code == BUMP:
            return np.exp(-0.5 * r2 / params[d] ** 2)
        return (r2 < params[d] ** 2).astype(float)
    deg = int(params[0])
    coef = params[1:].reshape((deg + 1,) * d)
    out = np.zeros(pts.shape[:-1])
    for multi in np.ndindex(*coef.shape):
        c = coef[multi]
        if c == 0.0:
            continue
        term = np.full(pts.shape[:-1], c)
        for ax, e in enumerate(multi):
            term = term * pts[..., ax] ** e
        out = out + term
    return out


def gh_tensor_np(code, params, ys, decay, sigma, nodes, weights, absolute):
    n, d = ys.shape
    grids = np.meshgrid(*([nodes] * d), indexing="ij")
    z = np.stack([g.ravel() for g in grids], axis=-1)
    wg = np.meshgrid(*([weights] * d), indexing="ij")
    w = np.prod(np.stack([g.ravel() for g in wg], axis=-1), axis=-1)
    out = np.empty(n)
    chunk = max(1, 2_000_000 // max(1, z.shape[0]))
    for start in range(0, n, chunk):
        pts = decay * ys[start:start + chunk, None, :] + sigma * z[None, :, :]
        v = eval_base_np(code, params, pts)
        if absolute:
            v = np.abs(v)
        out[start:start + chunk] = v @ w
    return out


from ._cubature import region_nb, region_np  # noqa: E402


if USE_NUMBA:
    log_ball_mass = log_ball_mass_nb
    gh_tensor = gh_tensor_nb
    region = region_nb
else:
    log_ball_mass = log_ball_mass_np
    gh_tensor = gh_tensor_np
    region = region_np

BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = [
    "BACKEND", "HAVE_NUMBA", "log_ball_mass", "gh_tensor",
    "log_ball_mass_nb", "log_ball_mass_np", "gh_tensor_nb", "gh_tensor_np",
    "region", "region_nb", "region_np", "eval_base_np", "eval_base_scalar",
]

"""Adaptive integration over intersections of balls, by exact slicing.

The region is ``(B_1 ∩ ... ∩ B_m) \\ E`` for Euclidean balls ``B_k`` and an
optional open ball ``E``. Integration is nested along the coordinate axes.
On the last axis a slice of the region is at most two intervals, which are
integrated directly. On the outer axes the slice integral is smooth except
at known breakpoints: the extents of every ball slice and the projections
of every pairwise sphere intersection. Between breakpoints the map
``q = A + (B - A) tau^2 (3 - 2 tau)`` absorbs the square-root edges, and
``tau`` is integrated by adaptive bisection of 10-point Gauss-Legendre
panels. No initial panel is wider than ``2 sqrt 2`` standard deviations of
the narrowest Gaussian factor (weight, kernel or bump), so a narrow peak
cannot hide between the nodes of a coarse first estimate.

Two variants share that scheme: ``region_nb`` walks intervals depth-first
under numba; ``region_np`` processes every level breadth-first in batches.
"""
import math

import numpy as np

from ._accel import njit
# _kernels imports this module at its end, after these are defined
from ._kernels import eval_base_np, eval_base_scalar, mehler_sym_scalar

GLX, GLW = np.polynomial.legendre.leggauss(10)
LOG_PI = math.log(math.pi)
STACK = 4096
MIN_WIDTH = 1e-13
# past this many integrand evaluations every panel is accepted as is
MAX_EVALS = 20_000_000
PANEL_STDS = 2.0 * math.sqrt(2.0)
BUMP = 2

# status[0]: forced acceptances (width floor, stack limit or budget)
# status[1]: integrand evaluations


@njit
def _feature_scale(d, mode, s, code, params):
    """Widest allowed initial panel."""
    h = PANEL_STDS * math.sqrt(0.5)
    if mode == 1:
        h = min(h, PANEL_STDS * math.sqrt(-0.5 * math.expm1(-2.0 * s)))
    if code == BUMP:
        h = min(h, PANEL_STDS * params[d])
    return h


@njit
def _split_gaps(bp, n, h):
    """Copy of ``bp[:n]`` with every gap cut into pieces no wider than h."""
    extra = 0
    for i in range(n - 1):
        extra += int(math.ceil((bp[i + 1] - bp[i]) / h))
    out = np.empty(extra + 1)
    out[0] = bp[0]
    k = 1
    for i in range(n - 1):
        m = int(math.ceil((bp[i + 1] - bp[i]) / h))
        for j in range(1, m):
            out[k] = bp[i] + (bp[i + 1] - bp[i]) * j / m
            k += 1
        out[k] = bp[i + 1]
        k += 1
    return out, k


@njit
def _f(q, mode, s, y, code, params, absolute):
    d = q.shape[0]
    r2 = 0.0
    for i in range(d):
        r2 += q[i] * q[i]
    lg = -0.5 * d * LOG_PI - r2
    if mode == 1:
        lg += mehler_sym_scalar(s, y, q)
    v = eval_base_scalar(code, params, q)
    if absolute:
        v = abs(v)
    return math.exp(lg) * v


@njit
def _gl_line(q, a, b, mode, s, y, code, params, absolute, status):
    last = q.shape[0] - 1
    half = 0.5 * (b - a)
    acc = 0.0
    for j in range(GLX.shape[0]):
        q[last] = a + half * (GLX[j] + 1.0)
        acc += GLW[j] * _f(q, mode, s, y, code, params, absolute)
    status[1] += GLX.shape[0]
    return half * acc


@njit
def _adapt_line(q, a, b, tol, mode, s, y, code, params, absolute, status):
    sa = np.empty(STACK)
    sb = np.empty(STACK)
    se = np.empty(STACK)
    length = b - a
    sa[0] = a
    sb[0] = b
    se[0] = _gl_line(q, a, b, mode, s, y, code, params, absolute, status)
    top = 1
    total = 0.0
    err = 0.0
    while top > 0:
        top -= 1
        a0 = sa[top]
        b0 = sb[top]
        est = se[top]
        m = 0.5 * (a0 + b0)
        left = _gl_line(q, a0, m, mode, s, y, code, params, absolute, status)
        right = _gl_line(q, m, b0, mode, s, y, code, params, absolute, status)
        diff = abs(left + right - est)
        if diff <= tol * (b0 - a0) / length:
            total += left + right
            err += diff
        elif (b0 - a0) < MIN_WIDTH * length or top + 2 > STACK or status[1] > MAX_EVALS:
            total += left + right
            err += diff
            status[0] += 1
        else:
            sa[top] = a0
            sb[top] = m
            se[top] = left
            sa[top + 1] = m
            sb[top + 1] = b0
            se[top + 1] = right
            top += 2
    return total, err


@njit
def _line(q, inc, exc, tol, hmax, mode, s, y, code, params, absolute, status):
    """Integral along the last axis with the leading coordinates of q fixed."""
    d = q.shape[0]
    last = d - 1
    a = -math.inf
    b = math.inf
    for k in range(inc.shape[0]):
        h2 = inc[k, d] ** 2
        for ax in range(last):
            h2 -= (q[ax] - inc[k, ax]) ** 2
        if h2 <= 0.0:
            return 0.0, 0.0
        h = math.sqrt(h2)
        a = max(a, inc[k, last] - h)
        b = min(b, inc[k, last] + h)
    if b <= a:
        return 0.0, 0.0
    a1, b1, a2, b2 = a, b, 0.0, 0.0
    if exc[d] > 0.0:
        h2 = exc[d] ** 2
        for ax in range(last):
            h2 -= (q[ax] - exc[ax]) ** 2
        if h2 > 0.0:
            h = math.sqrt(h2)
            b1 = min(b, exc[last] - h)
            a2 = max(a, exc[last] + h)
            b2 = b
    total_len = max(b1 - a1, 0.0) + max(b2 - a2, 0.0)
    val = 0.0
    err = 0.0
    for piece in range(2):
        lo, hi = (a1, b1) if piece == 0 else (a2, b2)
        if hi <= lo:
            continue
        m = int(math.ceil((hi - lo) / hmax))
        for j in range(m):
            pa = lo + (hi - lo) * j / m
            pb = hi if j == m - 1 else lo + (hi - lo) * (j + 1) / m
            v, e = _adapt_line(q, pa, pb, tol * (pb - pa) / total_len, mode, s, y,
                               code, params, absolute, status)
            val += v
            err += e
    return val, err


@njit
def _breakpoints(q, ax, inc, exc, bp):
    """Sorted breakpoints of the slice integral along axis ``ax``.

    Returns the count written into ``bp`` (0 for an empty slice); bp[0] and
    bp[count-1] are the ends of the integration range.
    """
    d = q.shape[0]
    m = inc.shape[0]
    nb = m + (1 if exc[d] > 0.0 else 0)
    cen = np.empty((nb, d))
    rho = np.empty(nb)
    live = np.ones(nb, dtype=np.bool_)
    for k in range(nb):
        row = inc[k] if k < m else exc
        r2 = row[d] ** 2
        for i in range(ax):
            r2 -= (q[i] - row[i]) ** 2
        for i in range(d):
            cen[k, i] = row[i]
        if r2 <= 0.0:
            if k < m:
                return 0
            live[k] = False
            rho[k] = 0.0
        else:
            rho[k] = math.sqrt(r2)
    lo = -math.inf
    hi = math.inf
    for k in range(m):
        lo = max(lo, cen[k, ax] - rho[k])
        hi = min(hi, cen[k, ax] + rho[k])
    if hi <= lo:
        return 0
    cnt = 0
    cand = np.empty(2 * nb + nb * nb)
    for k in range(nb):
        if live[k]:
            cand[cnt] = cen[k, ax] - rho[k]
            cand[cnt + 1] = cen[k, ax] + rho[k]
            cnt += 2
    for i in range(nb):
        if not live[i]:
            continue
        for j in range(i + 1, nb):
            if not live[j]:
                continue
            dist2 = 0.0
            for c in range(ax, d):
                dist2 += (cen[j, c] - cen[i, c]) ** 2
            dist = math.sqrt(dist2)
            if dist <= abs(rho[i] - rho[j]) or dist >= rho[i] + rho[j] or dist == 0.0:
                continue
            ell = (dist2 + rho[i] ** 2 - rho[j] ** 2) / (2.0 * dist)
            rr2 = rho[i] ** 2 - ell * ell
            if rr2 <= 0.0:
                continue
            n0 = (cen[j, ax] - cen[i, ax]) / dist
            p0 = cen[i, ax] + ell * n0
            off = math.sqrt(rr2) * math.sqrt(max(0.0, 1.0 - n0 * n0))
            cand[cnt] = p0 - off
            cand[cnt + 1] = p0 + off
            cnt += 2
    vals = np.sort(cand[:cnt])
    bp[0] = lo
    out = 1
    for i in range(cnt):
        v = vals[i]
        if v > bp[out - 1] and v < hi:
            bp[out] = v
            out += 1
    bp[out] = hi
    return out + 1


@njit
def _outer_piece_node(q, ax, A, B, tau):
    phi = tau * tau * (3.0 - 2.0 * tau)
    q[ax] = A + (B - A) * phi
    return (B - A) * 6.0 * tau * (1.0 - tau)


@njit
def _gl_outer_inner(q, ax, A, B, ta, tb, inc, exc, tol_in, hmax, mode, s, y, code, params,
                    absolute, status):
    half = 0.5 * (tb - ta)
    acc = 0.0
    eacc = 0.0
    for j in range(GLX.shape[0]):
        jac = _outer_piece_node(q, ax, A, B, ta + half * (GLX[j] + 1.0))
        v, e = _line(q, inc, exc, tol_in, hmax, mode, s, y, code, params, absolute, status)
        acc += GLW[j] * jac * v
        eacc += GLW[j] * jac * e
    return half * acc, half * eacc


@njit
def _outer_inner(q, ax, inc, exc, tol, hmax, mode, s, y, code, params, absolute, status):
    """Slice integral along ``ax`` when the next level is the last axis."""
    bp = np.empty(4 * (inc.shape[0] + 1) ** 2 + 8)
    n = _breakpoints(q, ax, inc, exc, bp)
    if n < 2:
        return 0.0, 0.0
    bp, n = _split_gaps(bp, n, hmax)
    span = bp[n - 1] - bp[0]
    tol_in = 0.25 * tol / span
    tol_piece = 0.5 * tol / (n - 1)
    sa = np.empty(STACK)
    sb = np.empty(STACK)
    se = np.empty(STACK)
    total = 0.0
    err = 0.0
    for p in range(n - 1):
        A = bp[p]
        B = bp[p + 1]
        v0, e0 = _gl_outer_inner(q, ax, A, B, 0.0, 1.0, inc, exc, tol_in, hmax, mode, s, y,
                                 code, params, absolute, status)
        sa[0] = 0.0
        sb[0] = 1.0
        se[0] = v0
        top = 1
        while top > 0:
            top -= 1
            ta = sa[top]
            tb = sb[top]
            est = se[top]
            tm = 0.5 * (ta + tb)
            lv, le = _gl_outer_inner(q, ax, A, B, ta, tm, inc, exc, tol_in, hmax, mode, s, y,
                                     code, params, absolute, status)
            rv, re = _gl_outer_inner(q, ax, A, B, tm, tb, inc, exc, tol_in, hmax, mode, s, y,
                                     code, params, absolute, status)
            diff = abs(lv + rv - est)
            if diff <= tol_piece * (tb - ta):
                total += lv + rv
                err += diff + le + re
            elif (tb - ta) < 1e-9 or top + 2 > STACK or status[1] > MAX_EVALS:
                total += lv + rv
                err += diff + le + re
                status[0] += 1
            else:
                sa[top] = ta
                sb[top] = tm
                se[top] = lv
                sa[top + 1] = tm
                sb[top + 1] = tb
                se[top + 1] = rv
                top += 2
    return total, err


@njit
def _gl_outer_top(q, ax, A, B, ta, tb, inc, exc, tol_in, hmax, mode, s, y, code, params,
                  absolute, status):
    half = 0.5 * (tb - ta)
    acc = 0.0
    eacc = 0.0
    for j in range(GLX.shape[0]):
        jac = _outer_piece_node(q, ax, A, B, ta + half * (GLX[j] + 1.0))
        v, e = _outer_inner(q, ax + 1, inc, exc, tol_in, hmax, mode, s, y, code, params,
                            absolute, status)
        acc += GLW[j] * jac * v
        eacc += GLW[j] * jac * e
    return half * acc, half * eacc


@njit
def _outer_top(q, ax, inc, exc, tol, hmax, mode, s, y, code, params, absolute, status):
    """Slice integral along ``ax`` when the next level is another outer axis."""
    bp = np.empty(4 * (inc.shape[0] + 1) ** 2 + 8)
    n = _breakpoints(q, ax, inc, exc, bp)
    if n < 2:
        return 0.0, 0.0
    bp, n = _split_gaps(bp, n, hmax)
    span = bp[n - 1] - bp[0]
    tol_in = 0.25 * tol / span
    tol_piece = 0.5 * tol / (n - 1)
    sa = np.empty(STACK)
    sb = np.empty(STACK)
    se = np.empty(STACK)
    total = 0.0
    err = 0.0
    for p in range(n - 1):
        A = bp[p]
        B = bp[p + 1]
        v0, e0 = _gl_outer_top(q, ax, A, B, 0.0, 1.0, inc, exc, tol_in, hmax, mode, s, y,
                               code, params, absolute, status)
        sa[0] = 0.0
        sb[0] = 1.0
        se[0] = v0
        top = 1
        while top > 0:
            top -= 1
            ta = sa[top]
            tb = sb[top]
            est = se[top]
            tm = 0.5 * (ta + tb)
            lv, le = _gl_outer_top(q, ax, A, B, ta, tm, inc, exc, tol_in, hmax, mode, s, y,
                                   code, params, absolute, status)
            rv, re = _gl_outer_top(q, ax, A, B, tm, tb, inc, exc, tol_in, hmax, mode, s, y,
                                   code, params, absolute, status)
            diff = abs(lv + rv - est)
            if diff <= tol_piece * (tb - ta):
                total += lv + rv
                err += diff + le + re
            elif (tb - ta) < 1e-9 or top + 2 > STACK or status[1] > MAX_EVALS:
                total += lv + rv
                err += diff + le + re
                status[0] += 1
            else:
                sa[top] = ta
                sb[top] = tm
                se[top] = lv
                sa[top + 1] = tm
                sb[top + 1] = tb
                se[top + 1] = rv
                top += 2
    return total, err


@njit
def region_nb(inc, exc, mode, s, y, code, params, absolute, tol):
    """Returns ``(value, error_estimate, forced, evaluations)``."""
    d = inc.shape[1] - 1
    q = np.zeros(d)
    status = np.zeros(2, dtype=np.int64)
    hmax = _feature_scale(d, mode, s, code, params)
    if d == 1:
        v, e = _line(q, inc, exc, tol, hmax, mode, s, y, code, params, absolute, status)
    elif d == 2:
        v, e = _outer_inner(q, 0, inc, exc, tol, hmax, mode, s, y, code, params, absolute, status)
    else:
        v, e = _outer_top(q, 0, inc, exc, tol, hmax, mode, s, y, code, params, absolute, status)
    return v, e, status[0], status[1]


# ---------------------------------------------------------------------------
# breadth-first numpy variant
# ---------------------------------------------------------------------------

def _f_np(pts, ctx):
    mode, s, y, code, params, absolute, _h = ctx
    d = pts.shape[-1]
    lg = -0.5 * d * LOG_PI - np.sum(pts * pts, axis=-1)
    if mode == 1:
        dxy2 = np.sum((y - pts) ** 2, axis=-1)
        ip = np.sum(y * pts, axis=-1)
        lm = math.log(-math.expm1(-s)) if s <= math.log(2.0) else math.log1p(-math.exp(-s))
        lg = lg + (-dxy2 / math.expm1(2.0 * s) + 2.0 * ip / (math.exp(s) + 1.0)
                   - 0.5 * d * (lm + math.log1p(math.exp(-s))))
    v = eval_base_np(code, params, pts)
    if absolute:
        v = np.abs(v)
    return np.exp(lg) * v


def _bfs(nrows, rows, A, B, tol_density, node_values, mapped, status, min_width):
    """Adaptive bisection of many independent intervals at once.

    ``node_values(rows, coords)`` returns ``(values, errors)`` at points of
    the integration coordinate; with ``mapped`` the intervals live in tau
    and the coordinate is ``A + (B - A) phi(tau)``.
    """
    out_v = np.zeros(nrows)
    out_e = np.zeros(nrows)

    def panel(r, pa, pb, ta, tb):
        half = 0.5 * (tb - ta)
        u = ta[:, None] + half[:, None] * (GLX + 1.0)
        if mapped:
            coord = pa[:, None] + (pb - pa)[:, None] * u * u * (3.0 - 2.0 * u)
            jac = (pb - pa)[:, None] * 6.0 * u * (1.0 - u)
        else:
            coord = u
            jac = np.ones_like(u)
        v, e = node_values(np.repeat(r, GLX.size), coord.ravel())
        v = v.reshape(coord.shape)
        e = e.reshape(coord.shape)
        return half * np.sum(GLW * jac * v, axis=1), half * np.sum(GLW * jac * e, axis=1)

    ta = np.zeros(rows.size) if mapped else A.copy()
    tb = np.ones(rows.size) if mapped else B.copy()
    est, _ = panel(rows, A, B, ta, tb)
    full = tb - ta
    while rows.size:
        tm = 0.5 * (ta + tb)
        lv, le = panel(rows, A, B, ta, tm)
        rv, re = panel(rows, A, B, tm, tb)
        diff = np.abs(lv + rv - est)
        width = tb - ta
        ok = diff <= tol_density * width
        forced = ~ok & ((width < min_width * full) | (status[1] > MAX_EVALS))
        status[0] += int(forced.sum())
        acc = ok | forced
        np.add.at(out_v, rows[acc], (lv + rv)[acc])
        np.add.at(out_e, rows[acc], (diff + le + re)[acc])
        keep = ~acc
        rows = np.concatenate([rows[keep], rows[keep]])
        A = np.concatenate([A[keep], A[keep]])
        B = np.concatenate([B[keep], B[keep]])
        tol_density = np.concatenate([tol_density[keep], tol_density[keep]])
        full = np.concatenate([full[keep], full[keep]])
        ta, tb = np.concatenate([ta[keep], tm[keep]]), np.concatenate([tm[keep], tb[keep]])
        est = np.concatenate([lv[keep], rv[keep]])
    return out_v, out_e


def _split_np(rows, A, B, h):
    m = np.ceil((B - A) / h).astype(np.int64)
    rows = np.repeat(rows, m)
    j = np.concatenate([np.arange(k) for k in m]) if m.size else np.zeros(0, dtype=np.int64)
    mm = np.repeat(m, m)
    a0 = np.repeat(A, m)
    w = np.repeat(B - A, m)
    lo = a0 + w * j / mm
    hi = np.where(j == mm - 1, np.repeat(B, m), a0 + w * (j + 1) / mm)
    return rows, lo, hi


def _line_np(prefix, inc, exc, tol, ctx, status):
    n, last = prefix.shape
    d = last + 1
    a = np.full(n, -np.inf)
    b = np.full(n, np.inf)
    ok = np.ones(n, dtype=bool)
    for k in range(inc.shape[0]):
        h2 = inc[k, d] ** 2 - np.sum((prefix - inc[k, :last]) ** 2, axis=1)
        ok &= h2 > 0
        h = np.sqrt(np.maximum(h2, 0.0))
        a = np.maximum(a, inc[k, last] - h)
        b = np.minimum(b, inc[k, last] + h)
    ok &= b > a
    a1, b1 = a.copy(), b.copy()
    a2, b2 = np.zeros(n), np.zeros(n)
    if exc[d] > 0:
        h2 = exc[d] ** 2 - np.sum((prefix - exc[:last]) ** 2, axis=1)
        cut = h2 > 0
        h = np.sqrt(np.maximum(h2, 0.0))
        b1 = np.where(cut, np.minimum(b, exc[last] - h), b)
        a2 = np.where(cut, np.maximum(a, exc[last] + h), 0.0)
        b2 = np.where(cut, b, 0.0)
    l1 = np.where(ok, np.maximum(b1 - a1, 0.0), 0.0)
    l2 = np.where(ok, np.maximum(b2 - a2, 0.0), 0.0)
    total = l1 + l2
    rows = np.concatenate([np.nonzero(l1 > 0)[0], np.nonzero(l2 > 0)[0]])
    A = np.concatenate([a1[l1 > 0], a2[l2 > 0]])
    B = np.concatenate([b1[l1 > 0], b2[l2 > 0]])
    if rows.size == 0:
        return np.zeros(n), np.zeros(n)
    rows, A, B = _split_np(rows, A, B, ctx[-1])
    tol_density = tol[rows] / total[rows]

    def node_values(r, z):
        pts = np.concatenate([prefix[r], z[:, None]], axis=1)
        status[1] += z.size
        return _f_np(pts, ctx), np.zeros(z.size)

    return _bfs(n, rows, A, B, tol_density, node_values, False, status, MIN_WIDTH)


def _breakpoints_np(prefix, ax, inc, exc):
    """Per-row sorted breakpoints, NaN padded: ``(n, K)``, and range ends."""
    n = prefix.shape[0]
    d = inc.shape[1] - 1
    balls = [inc[k] for k in range(inc.shape[0])]
    has_exc = exc[d] > 0
    if has_exc:
        balls.append(exc)
    m = inc.shape[0]
    rho2 = np.stack([row[d] ** 2 - np.sum((prefix - row[:ax]) ** 2, axis=1) for row in balls], axis=1)
    empty = np.any(rho2[:, :m] <= 0, axis=1)
    live = rho2 > 0
    rho = np.sqrt(np.maximum(rho2, 0.0))
    cen = np.array([row[:d] for row in balls])
    lo = np.max(cen[None, :m, ax] - rho[:, :m], axis=1)
    hi = np.min(cen[None, :m, ax] + rho[:, :m], axis=1)
    empty |= hi <= lo
    cands = []
    for k in range(len(balls)):
        cands.append(np.where(live[:, k], cen[k, ax] - rho[:, k], np.nan))
        cands.append(np.where(live[:, k], cen[k, ax] + rho[:, k], np.nan))
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            dvec = cen[j, ax:] - cen[i, ax:]
            dist2 = float(np.sum(dvec ** 2))
            dist = math.sqrt(dist2)
            if dist == 0.0:
                continue
            ri, rj = rho[:, i], rho[:, j]
            good = live[:, i] & live[:, j] & (dist > np.abs(ri - rj)) & (dist < ri + rj)
            ell = (dist2 + ri ** 2 - rj ** 2) / (2.0 * dist)
            rr2 = ri ** 2 - ell ** 2
            good &= rr2 > 0
            n0 = dvec[0] / dist
            p0 = cen[i, ax] + ell * n0
            off = np.sqrt(np.maximum(rr2, 0.0)) * math.sqrt(max(0.0, 1.0 - n0 * n0))
            cands.append(np.where(good, p0 - off, np.nan))
            cands.append(np.where(good, p0 + off, np.nan))
    c = np.stack(cands, axis=1)
    c = np.where((c > lo[:, None]) & (c < hi[:, None]), c, np.nan)
    c = np.concatenate([lo[:, None], c, hi[:, None]], axis=1)
    c = np.sort(c, axis=1)  # NaN sorts last
    c[empty] = np.nan
    return c


def _outer_np(prefix, ax, inc, exc, tol, ctx, status):
    n = prefix.shape[0]
    d = inc.shape[1] - 1
    bp = _breakpoints_np(prefix, ax, inc, exc)
    A_all = bp[:, :-1]
    B_all = bp[:, 1:]
    valid = np.isfinite(A_all) & np.isfinite(B_all) & (B_all > A_all)
    npieces = valid.sum(axis=1)
    first = bp[:, 0]
    lastv = np.array([row[np.isfinite(row)][-1] if np.isfinite(row).any() else np.nan for row in bp])
    span = lastv - first
    rows_idx, piece_idx = np.nonzero(valid)
    if rows_idx.size == 0:
        return np.zeros(n), np.zeros(n)
    A = A_all[rows_idx, piece_idx]
    B = B_all[rows_idx, piece_idx]
    rows_idx, A, B = _split_np(rows_idx, A, B, ctx[-1])
    npieces = np.bincount(rows_idx, minlength=n)
    tol_in_row = 0.25 * tol / np.where(span > 0, span, 1.0)
    tol_density = 0.5 * tol[rows_idx] / npieces[rows_idx]

    def node_values(r, coord):
        pre = np.concatenate([prefix[r], coord[:, None]], axis=1)
        if ax + 1 == d - 1:
            return _line_np(pre, inc, exc, tol_in_row[r], ctx, status)
        return _outer_np(pre, ax + 1, inc, exc, tol_in_row[r], ctx, status)

    return _bfs(n, rows_idx, A, B, tol_density, node_values, True, status, 1e-9)


def region_np(inc, exc, mode, s, y, code, params, absolute, tol):
    d = inc.shape[1] - 1
    ctx = (mode, s, y, code, params, absolute, _feature_scale(d, mode, s, code, params))
    status = [0, 0]
    prefix = np.zeros((1, 0))
    tol_arr = np.array([tol])
    if d == 1:
        v, e = _line_np(prefix, inc, exc, tol_arr, ctx, status)
    else:
        v, e = _outer_np(prefix, 0, inc, exc, tol_arr, ctx, status)
    return float(v[0]), float(e[0]), status[0], status[1]

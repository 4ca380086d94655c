"""Sampled checks of the kernel and cone estimates, the annulus
decomposition, the explicit domination constant and the ratio scan."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .functions import TestFunction
from .geometry import BallSpec, ConeSpec, Variant, admissibility_many, sample_ball, switch_index
from .kernel import annulus_bound_log, mehler_log, proof_coefficient
from .maximal import SearchParams, hl_maximal, nt_maximal
from .quadrature import integrate_region, log_gamma_ball, log_gamma_shell
from .semigroup import Method, ou_apply

SLACK = 1e-12
X_RADIUS = 5.0
K_MAX = 20
CHUNK = 25_000
SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}
TAIL_CUTOFF = math.log(1e-16)


class LemmaId(str, Enum):
    L1a = "L1a"
    L1b = "L1b"
    L2 = "L2"
    L3 = "L3"
    L3shift = "L3shift"
    L4 = "L4"


@dataclass(frozen=True)
class LemmaReport:
    lemma_id: LemmaId
    samples: int
    violations: int
    worst_margin: float
    seed: int

    @property
    def passed(self):
        return self.violations == 0

    def to_dict(self):
        return {"lemma_id": LemmaId(self.lemma_id).value, "samples": self.samples,
                "violations": self.violations, "worst_margin": self.worst_margin,
                "seed": self.seed}


# ---------------------------------------------------------------------------
# margins: bound minus quantity, vectorised
# ---------------------------------------------------------------------------

def _m(p):
    return admissibility_many(p)


def margin_l1a(x, y, t, A, a):
    """``a(1 + aA) m(y) - t`` under ``|x - y| < At``, ``t <= a m(x)``."""
    return a * (1.0 + a * A) * _m(y) - t


def margin_l1b(x, y, A):
    """Both cone comparisons of m under ``|x - y| < A m(x)``."""
    mx, my = _m(x), _m(y)
    return np.minimum((1.0 + A) * my - mx, 2.0 * (1.0 + A) * mx - my)


def margin_l2(x, y, alpha):
    """Log-space margins of both exponential comparisons under ``|x - y| <= alpha m(x)``."""
    x2 = np.sum(np.atleast_2d(x) ** 2, axis=-1)
    y2 = np.sum(np.atleast_2d(y) ** 2, axis=-1)
    lower = x2 + alpha ** 2 + 2.0 * alpha - y2
    upper = alpha ** 2 * (1.0 + alpha) ** 2 + 2.0 * alpha * (1.0 + alpha) + y2 - x2
    return np.minimum(lower, upper)


def margin_l3(x, t):
    """``log(S_d t^d e^{2t|x|} e^{-|x|^2} / (d pi^{d/2})) - log gamma(B_t(x))``."""
    x = np.atleast_2d(x)
    d = x.shape[1]
    nx = np.linalg.norm(x, axis=1)
    bound = (math.log(SPHERE_AREA[d] / d) - 0.5 * d * math.log(math.pi) + d * np.log(t)
             + 2.0 * t * nx - nx ** 2)
    return bound - log_gamma_ball(x, t)


def margin_l3shift(x, t):
    """``log(e^{2t|x|} e^{-|x|^2} gamma(B_t(0))) - log gamma(B_t(x))``."""
    x = np.atleast_2d(x)
    nx = np.linalg.norm(x, axis=1)
    return (2.0 * t * nx - nx ** 2 + log_gamma_ball(np.zeros_like(x), t)
            - log_gamma_ball(x, t))


def margin_l4(y, t, xi, k):
    """Shell bound minus ``log M_{t^2}(y, xi)`` for xi in ``C_k(B_t(y))``."""
    return annulus_bound_log(t, y, k) - mehler_log(t * t, y, xi)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def _sample_x(rng, n, d):
    return sample_ball(rng, n, np.zeros(d), X_RADIUS, d)


def _open_unit(rng, n):
    # uniform on (0, 1]
    return 1.0 - rng.random(n)


def _shell(rng, n, center, inner, outer, d):
    """Uniform samples in the shells inner <= |xi - center| < outer."""
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1)[:, None]
    u = rng.random(n)
    rad = (inner ** d + u * (outer ** d - inner ** d)) ** (1.0 / d)
    rad = np.clip(rad, inner, np.nextafter(outer, 0.0))
    return center + rad[:, None] * g


def _chunk_margins(lemma, n, rng, params):
    d = int(params.get("d", 1))
    A = float(params.get("A", 1.0))
    a = float(params.get("a", 1.0))
    alpha = float(params.get("alpha", 1.0))
    x = _sample_x(rng, n, d)
    if lemma is LemmaId.L1a or lemma is LemmaId.L4:
        t = a * _m(x) * _open_unit(rng, n)
        y = sample_ball(rng, n, x, A * t, d)
        if lemma is LemmaId.L1a:
            return margin_l1a(x, y, t, A, a)
        k = rng.integers(1, K_MAX + 1, size=n)
        xi = _shell(rng, n, y, np.ldexp(t, k), np.ldexp(t, k + 1), d)
        return margin_l4(y, t, xi, k)
    if lemma is LemmaId.L1b:
        return margin_l1b(x, sample_ball(rng, n, x, A * _m(x), d), A)
    if lemma is LemmaId.L2:
        return margin_l2(x, sample_ball(rng, n, x, alpha * _m(x), d), alpha)
    t = a * _open_unit(rng, n)
    if lemma is LemmaId.L3:
        return margin_l3(x, t)
    return margin_l3shift(x, t)


def _run_chunk(job):
    lemma, n, seq, params = job
    m = _chunk_margins(lemma, n, np.random.default_rng(seq), params)
    if not np.all(np.isfinite(m)):
        raise FloatingPointError(f"non-finite margin in {lemma.value}")
    return int(np.count_nonzero(m < -SLACK)), float(np.min(m))


def verify_lemma(lemma_id, samples=100_000, seed=1, params=None, workers=1):
    """Sample a lemma's hypothesis set and count violations of its conclusion.

    ``params`` may hold ``A``, ``a``, ``alpha`` and ``d``. Samples are drawn
    in fixed-size chunks from independent child streams of ``seed``, so the
    report does not depend on ``workers``.
    """
    lemma = LemmaId(lemma_id)
    if samples < 1000:
        raise ValueError("at least 1000 samples are required")
    params = dict(params or {})
    for key in ("A", "a", "alpha"):
        if key in params and not params[key] > 0:
            raise ValueError(f"{key} must be positive")
    if int(params.get("d", 1)) not in (1, 2, 3):
        raise ValueError("d must be 1, 2 or 3")
    sizes = [CHUNK] * (samples // CHUNK) + ([samples % CHUNK] if samples % CHUNK else [])
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(lemma, n, sq, params) for n, sq in zip(sizes, seqs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    return LemmaReport(lemma, samples, sum(p[0] for p in parts), min(p[1] for p in parts), seed)


# ---------------------------------------------------------------------------
# annulus decomposition
# ---------------------------------------------------------------------------

def _support(u):
    if not math.isfinite(u.support_extent):
        raise ValueError("annulus decomposition needs a function of finite support")
    return BallSpec(tuple(u.support_center), u.support_extent)


def annulus_decomposition(u, y, t, kmax, tol=1e-6):
    """``I_k = int_{C_k} M_{t^2}(y, .) |u| dgamma`` for k = 0..kmax.

    Each term is integrated to ``tol / (kmax + 1)`` so the sum is within
    ``tol``. The shells must cover the support of u.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    supp = _support(u)
    reach = float(np.linalg.norm(y - np.asarray(supp.center))) + supp.radius
    if math.ldexp(t, kmax + 1) < reach:
        raise ValueError("kmax too small: the shells do not cover the support")
    base = u.unscaled()
    per = tol / (kmax + 1) / u.scale
    includes_extra = [] if base.kind == "ball" else [supp]
    out = []
    for k in range(kmax + 1):
        outer = BallSpec(tuple(y), math.ldexp(t, k + 1))
        inner = BallSpec(tuple(y), math.ldexp(t, k)) if k else None
        val, _ = integrate_region([outer] + includes_extra, inner, u=base,
                                  kernel=(t * t, y), tol=per, absolute=True)
        out.append(u.scale * val)
    return out


def annulus_bounds(u, y, t, kmax):
    """``sup|u| gamma(C_k) exp(shell bound)`` for k = 1..kmax (index 0 is None)."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = [None]
    for k in range(1, kmax + 1):
        log_shell = log_gamma_shell(y, math.ldexp(t, k), math.ldexp(t, k + 1))
        out.append(u.sup_abs * math.exp(log_shell + annulus_bound_log(t, y, k)))
    return out


def minimal_kmax(u, y, t):
    y = np.atleast_1d(np.asarray(y, dtype=float))
    reach = float(np.linalg.norm(y - np.asarray(u.support_center))) + u.support_extent
    k = 0
    while math.ldexp(t, k + 1) < reach:
        k += 1
    return k


def whole_space(u, y, t, tol=1e-6):
    return ou_apply(u, t * t, y, Method.KERNEL, tol=tol, absolute=True).value


# ---------------------------------------------------------------------------
# the explicit constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofConstants:
    A: float
    a: float
    d: int
    alpha: float
    lemma2_factor: float
    K: int
    head_terms: list
    tail_sum: float
    geometry_factor: float
    C_total: float
    log_C_total: float
    log_tail_sum: float
    i0_term: float
    head_contributions: list = field(default_factory=list)
    tail_terms: int = 0

    def to_dict(self):
        def fin(v):
            return v if math.isfinite(v) else None
        return {"A": self.A, "a": self.a, "d": self.d, "alpha": self.alpha,
                "lemma2_factor": fin(self.lemma2_factor), "K": self.K,
                "head_terms": [fin(v) for v in self.head_terms],
                "tail_sum": fin(self.tail_sum), "log_tail_sum": self.log_tail_sum,
                "geometry_factor": fin(self.geometry_factor), "i0_term": fin(self.i0_term),
                "head_contributions": [fin(v) for v in self.head_contributions],
                "tail_terms": self.tail_terms,
                "C_total": fin(self.C_total), "log_C_total": self.log_C_total}


def _exp(v):
    return math.exp(v) if v < 709.0 else math.inf


def _logsumexp(vals):
    m = max(vals)
    if m == -math.inf:
        return m
    return m + math.log(math.fsum(math.exp(v - m) for v in vals))


def log_tail_term(k, A, a, d):
    """Log of the k-th tail term: the larger of the re-derived and displayed forms."""
    log_ck = proof_coefficient(k, A, a).log_ck
    derived = log_ck + d * math.log(4.0) + k * d * math.log(2.0) + math.ldexp(a, k + 3)
    displayed = (k * d * math.log(2.0) + math.ldexp(1.0 + 2.0 * a + a * A, k + 1)
                 - math.ldexp(1.0, 2 * k) / (2.0 * math.exp(2.0 * a * a)))
    return max(derived, displayed)


def log_head_term(k, A, a, d):
    return proof_coefficient(k, A, a).log_ck + d * math.log(2.0 * A) + 4.0 * A * a


def log_i0_term(A, a, d, K):
    beta = 4.0 if K == 0 else 2.0 * A
    log_c0 = 2.0 * a * (1.0 + a * A)
    term = log_c0 + d * math.log(beta) + 2.0 * beta * a
    if K == 0:
        # the displayed series starts at k = K = 0
        term = max(term, math.ldexp(1.0 + 2.0 * a + a * A, 1) - 1.0 / (2.0 * math.exp(2.0 * a * a)))
    return term


def proof_constant(A, a, d):
    """Every implicit constant of the domination proof as an explicit factor.

    ``C = e^{alpha^2 + 2 alpha} * G S_d / (d pi^{d/2}) * (I0 + sum head + tail)``
    with ``alpha = aA`` and ``G = a^d / (1 - e^{-2a^2})^{d/2}``. Everything is
    accumulated in logs; ``C_total`` overflows to ``inf`` for large ``a``.
    """
    if d not in (1, 2, 3):
        raise ValueError("d must be 1, 2 or 3")
    if not (A > 0 and a > 0):
        raise ValueError("A and a must be positive")
    A, a = float(A), float(a)
    alpha = a * A
    log_l2 = alpha * alpha + 2.0 * alpha
    log_geo = (d * math.log(a) - 0.5 * d * math.log(-math.expm1(-2.0 * a * a))
               + math.log(SPHERE_AREA[d] / d) - 0.5 * d * math.log(math.pi))
    K = switch_index(A)
    heads = [log_head_term(k, A, a, d) for k in range(1, K)]
    log_i0 = log_i0_term(A, a, d, K)
    k = max(K, 1)
    logs = []
    prev = math.inf
    while True:
        lt = log_tail_term(k, A, a, d)
        logs.append(lt)
        partial = _logsumexp(logs)
        if lt < prev and lt < partial + TAIL_CUTOFF:
            break
        prev = lt
        k += 1
        if k > 400:
            raise RuntimeError("tail series did not reach its cutoff")
    log_tail = _logsumexp(logs)
    log_total = log_l2 + log_geo + _logsumexp([log_i0] + heads + [log_tail])
    return ProofConstants(
        A=A, a=a, d=d, alpha=alpha, lemma2_factor=_exp(log_l2), K=K,
        head_terms=[_exp(proof_coefficient(j, A, a).log_ck) for j in range(1, K)],
        tail_sum=_exp(log_tail), geometry_factor=_exp(log_geo), C_total=_exp(log_total),
        log_C_total=log_total, log_tail_sum=log_tail, i0_term=_exp(log_i0),
        head_contributions=[_exp(h) for h in heads], tail_terms=len(logs))


def cone_constant(cone, d):
    """The constant for a cone; the reduced cone sits inside the (1, 1) cone."""
    if cone.variant is Variant.REDUCED:
        return proof_constant(1.0, 1.0, d)
    return proof_constant(cone.aperture, cone.cutoff, d)


# ---------------------------------------------------------------------------
# ratio scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioReport:
    function_id: str
    cone: ConeSpec
    points: list
    max_ratio: float
    proof_constant: float
    passed: bool
    log_proof_constant: float = 0.0

    def to_dict(self):
        pc = self.proof_constant if math.isfinite(self.proof_constant) else None
        return {"function_id": self.function_id, "cone": self.cone.to_dict(),
                "points": self.points, "max_ratio": self.max_ratio,
                "proof_constant": pc, "log_proof_constant": self.log_proof_constant,
                "passed": self.passed}


def scan_cell(job):
    u, x, cone, search = job
    nt = nt_maximal(u, x, cone, search)
    hl = hl_maximal(u, x, search)
    ratio = nt.value / hl.value if hl.value > 0 else math.inf
    return {"x": [float(v) for v in np.atleast_1d(x)], "nt_value": nt.value,
            "hl_value": hl.value, "ratio": ratio, "nt_argmax": nt.argmax,
            "hl_argmax": hl.argmax}


def ratio_scan(corpus, xs, cone=None, search=None, workers=1, executor=None):
    """nt / hl at every (u, x); one report per function of the corpus."""
    cone = cone or ConeSpec()
    search = search or SearchParams()
    corpus = list(corpus)
    xs = [np.atleast_1d(np.asarray(x, dtype=float)) for x in xs]
    jobs = [(u, x, cone, search) for u in corpus for x in xs]
    if executor is not None:
        cells = list(executor.map(scan_cell, jobs))
    elif workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            cells = list(pool.map(scan_cell, jobs))
    else:
        cells = [scan_cell(j) for j in jobs]
    reports = []
    for i, u in enumerate(corpus):
        pts = cells[i * len(xs):(i + 1) * len(xs)]
        dim = u.dim
        pc = cone_constant(cone, dim)
        ratios = [p["ratio"] for p in pts]
        max_ratio = max(ratios)
        ok_hl = all(p["hl_value"] > 0 for p in pts)
        within = math.log(max_ratio) <= pc.log_C_total if max_ratio > 0 else True
        passed = bool(ok_hl and all(math.isfinite(r) for r in ratios) and within)
        reports.append(RatioReport(str(u), cone, pts, max_ratio, pc.C_total, passed,
                                   pc.log_C_total))
    return reports


__all__ = [
    "LemmaId", "LemmaReport", "verify_lemma", "margin_l1a", "margin_l1b", "margin_l2",
    "margin_l3", "margin_l3shift", "margin_l4", "annulus_decomposition", "annulus_bounds",
    "minimal_kmax", "whole_space", "ProofConstants", "proof_constant", "cone_constant",
    "RatioReport", "ratio_scan", "scan_cell", "TestFunction",
]

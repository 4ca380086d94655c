"""Log-space Mehler kernel and the annulus estimates built on it.

All magnitudes are natural logarithms; ``exp(|y|^2)`` overflows double
precision near ``|y| = 27``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

LN2 = math.log(2.0)


class Form(str, Enum):
    EXPLICIT = "explicit"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class ProofCoefficient:
    k: int
    A: float
    a: float
    log_ck: float


def log1mexp(s):
    """log(1 - exp(-s)) for s > 0, accurate to a few ulps.

    Uses ``log(-expm1(-s))`` below ``log 2`` and ``log1p(-exp(-s))`` above.
    Accepts scalars or arrays.
    """
    s = np.asarray(s, dtype=float)
    if np.any(~(s > 0)):
        raise ValueError("log1mexp needs s > 0")
    small = s <= LN2
    with np.errstate(divide="ignore"):
        out = np.where(small, np.log(-np.expm1(-np.where(small, s, 1.0))),
                       np.log1p(-np.exp(-np.where(small, 1.0, s))))
    return out if out.ndim else float(out)


def mehler_log(t, x, y, form=Form.SYMMETRIC):
    """log M_t(x, y).

    ``t`` may be a scalar or an array broadcasting against the leading axes
    of the ``(..., d)`` point arrays ``x`` and ``y``. The symmetric form is
    the default evaluation path; the explicit form exists to cross-check it.
    """
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise ValueError("t must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape[-1] != y.shape[-1]:
        raise ValueError("dimension mismatch between x and y")
    d = x.shape[-1]
    if Form(form) is Form.SYMMETRIC:
        dxy2 = np.sum((x - y) ** 2, axis=-1)
        ip = np.sum(x * y, axis=-1)
        out = (-dxy2 / np.expm1(2.0 * t) + 2.0 * ip / (np.exp(t) + 1.0)
               - 0.5 * d * (log1mexp(t) + np.log1p(np.exp(-t))))
    else:
        decay = np.exp(-t)[..., None] if t.ndim else np.exp(-t)
        shifted = np.sum((decay * x - y) ** 2, axis=-1)
        out = (shifted / np.expm1(-2.0 * t) - 0.5 * d * log1mexp(2.0 * t)
               + np.sum(y * y, axis=-1))
    return out if np.ndim(out) else float(out)


def annulus_bound_log(t, y, k, d=None):
    """Log of the bound for M_{t^2}(y, .) on the k-th dyadic shell, k >= 1.

    ``t``, ``k`` and the rows of ``y`` broadcast together.
    """
    k = np.asarray(k)
    t = np.asarray(t, dtype=float)
    if np.any(k < 1):
        raise ValueError("the shell bound is stated for k >= 1")
    if np.any(~(t > 0)):
        raise ValueError("t must be positive")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if d is None:
        d = y.shape[-1]
    ny = np.linalg.norm(y, axis=-1)
    s = t * t
    out = (ny ** 2 - 0.5 * d * log1mexp(2.0 * s) + 2.0 ** (k + 1) * t * ny
           - 4.0 ** k / (2.0 * np.exp(2.0 * s)))
    return out if np.ndim(out) else float(out)


def proof_coefficient(k, A, a):
    """c_k = exp(2^{k+1} a (1 + aA) - 4^k / (2 e^{2a^2})), kept as its log."""
    if k < 1:
        raise ValueError("c_k is defined for k >= 1")
    log_ck = math.ldexp(a * (1.0 + a * A), k + 1) - math.ldexp(1.0, 2 * k) / (2.0 * math.exp(2.0 * a * a))
    return ProofCoefficient(k, float(A), float(a), log_ck)


def coefficient_crossover(A, a):
    """Smallest k >= 1 with log c_k < 0."""
    k = 1
    while proof_coefficient(k, A, a).log_ck >= 0:
        k += 1
    return k

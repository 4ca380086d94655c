"""Points, admissibility, Gaussian cones, dyadic annuli and enclosing balls."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

MAX_DIM = 3


class Variant(str, Enum):
    FULL = "full"
    REDUCED = "reduced"


def as_point(x, dim=None):
    """Validate and convert ``x`` to a 1-d float array of length 1..3."""
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1 or not 1 <= p.size <= MAX_DIM:
        raise ValueError(f"a point needs 1 to {MAX_DIM} coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {p.size}")
    return p


@dataclass(frozen=True)
class ConeSpec:
    aperture: float = 1.0
    cutoff: float = 1.0
    variant: Variant = Variant.FULL

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant is Variant.REDUCED:
            object.__setattr__(self, "aperture", 1.0)
            object.__setattr__(self, "cutoff", 1.0)
        if not (self.aperture > 0 and self.cutoff > 0):
            raise ValueError("aperture and cutoff must be positive")

    @classmethod
    def reduced(cls):
        return cls(1.0, 1.0, Variant.REDUCED)

    def height(self, x):
        """Largest admissible t at vertex ``x``."""
        return self.cutoff * admissibility(x, self.variant)

    def to_dict(self):
        return {"aperture": self.aperture, "cutoff": self.cutoff, "variant": self.variant.value}


@dataclass(frozen=True)
class BallSpec:
    center: tuple
    radius: float

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", tuple(float(v) for v in c))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self):
        return len(self.center)

    def to_dict(self):
        return {"center": list(self.center), "radius": self.radius}


def admissibility(x, variant=Variant.FULL):
    """m(x) = min(1, 1/|x|), or min(1/2, 1/|x|) for the reduced cone."""
    cap = 0.5 if Variant(variant) is Variant.REDUCED else 1.0
    r = float(np.linalg.norm(as_point(x)))
    if r == 0.0:
        return cap
    return min(cap, 1.0 / r)


def admissibility_many(xs):
    """Vectorised m over an ``(n, d)`` array (full variant)."""
    r = np.linalg.norm(np.asarray(xs, dtype=float), axis=-1)
    with np.errstate(divide="ignore"):
        return np.minimum(1.0, 1.0 / r)


def cone_contains(cone, x, y, t):
    x = as_point(x)
    y = as_point(y, x.size)
    if not t > 0:
        raise ValueError("t must be positive")
    dist = float(np.linalg.norm(x - y))
    return dist < cone.aperture * t and t <= cone.height(x)


def annulus_index(y, t, xi):
    """k with xi in C_k(B_t(y)); half-open dyadic shells [2^k t, 2^{k+1} t)."""
    y = as_point(y)
    xi = as_point(xi, y.size)
    if not t > 0:
        raise ValueError("t must be positive")
    rho = float(np.linalg.norm(y - xi))
    if rho < 2.0 * t:
        return 0
    k = max(1, int(math.floor(math.log2(rho / t))))
    # repair floating log2 at shell boundaries
    while k > 1 and rho < math.ldexp(t, k):
        k -= 1
    while rho >= math.ldexp(t, k + 1):
        k += 1
    return k


def switch_index(aperture):
    """Smallest K with 2^{k+1} >= A for every k >= K."""
    if not aperture > 0:
        raise ValueError("aperture must be positive")
    k = 0
    while 2 ** (k + 1) < aperture:
        k += 1
    return k


def enclosing_ball(x, t, k, aperture):
    """D_k: a ball around x holding C_k whenever (y, t) lies in the cone."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    x = as_point(x)
    if k >= switch_index(aperture):
        radius = math.ldexp(t, k + 2)
    else:
        radius = 2.0 * aperture * t
    return BallSpec(tuple(x), radius)


def sample_ball(rng, n, center, radius, dim):
    """Uniform samples in balls by rejection from the bounding cube.

    ``center`` may be ``(dim,)`` or ``(n, dim)``; ``radius`` scalar or ``(n,)``.
    """
    center = np.broadcast_to(np.asarray(center, dtype=float), (n, dim))
    radius = np.broadcast_to(np.asarray(radius, dtype=float), (n,))
    out = np.empty((n, dim))
    todo = np.arange(n)
    while todo.size:
        u = rng.uniform(-1.0, 1.0, size=(todo.size, dim))
        keep = np.sum(u * u, axis=1) < 1.0
        idx = todo[keep]
        out[idx] = center[idx] + radius[idx, None] * u[keep]
        todo = todo[~keep]
    return out

"""Corpus of test functions with exact evaluation.

Every function carries a positive ``scale`` that multiplies the base shape.
Numerical routines evaluate the unscaled shape and apply the scale once at
the end, which keeps maximal operators exactly positively homogeneous.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

CONST, HERMITE, BUMP, BALL, POLY = 0, 1, 2, 3, 4

KINDS = {"constant": CONST, "hermite": HERMITE, "bump": BUMP, "ball": BALL, "polynomial": POLY}

# exp(-r^2 / (2 w^2)) < 1e-16 beyond this many widths
BUMP_CUTOFF = math.sqrt(2.0 * math.log(1e16))


def _hermite_values(n, s):
    s = np.asarray(s, dtype=float)
    h_prev = np.ones_like(s)
    if n == 0:
        return h_prev
    h = 2.0 * s
    for k in range(1, n):
        h_prev, h = h, 2.0 * s * h - 2.0 * k * h_prev
    return h


@dataclass(frozen=True)
class TestFunction:
    """A compactly supported or polynomial function on R^d.

    Use the classmethod constructors rather than the raw fields.
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str
    dim: int
    center: tuple = ()
    width: float = 0.0
    radius: float = 0.0
    degrees: tuple = ()
    coeffs: tuple = ()
    value: float = 0.0
    scale: float = 1.0
    label: str = field(default="", compare=False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c=1.0, dim=1):
        return cls("constant", dim, value=float(c), label=f"const:{c:g}")

    @classmethod
    def hermite(cls, degrees, dim=None):
        degrees = (degrees,) if np.isscalar(degrees) else tuple(degrees)
        dim = dim or len(degrees)
        degrees = tuple(int(n) for n in degrees) + (0,) * (dim - len(degrees))
        if any(n < 0 or n > 12 for n in degrees):
            raise ValueError("Hermite degrees must lie in [0, 12]")
        return cls("hermite", dim, degrees=degrees,
                   label="hermite:" + ",".join(map(str, degrees)))

    @classmethod
    def bump(cls, center, width, dim=None):
        center = _as_center(center, dim)
        if width <= 0:
            raise ValueError("bump width must be positive")
        return cls("bump", len(center), center=center, width=float(width),
                   label="bump:" + ",".join(f"{c:g}" for c in center) + f",{width:g}")

    @classmethod
    def ball(cls, center, radius, dim=None):
        center = _as_center(center, dim)
        if radius <= 0:
            raise ValueError("ball radius must be positive")
        return cls("ball", len(center), center=center, radius=float(radius),
                   label="ball:" + ",".join(f"{c:g}" for c in center) + f",{radius:g}")

    @classmethod
    def polynomial(cls, coeffs):
        """Dense coefficients: ``coeffs[i, j, ...]`` multiplies x^i y^j ..."""
        arr = np.atleast_1d(np.asarray(coeffs, dtype=float))
        dim = arr.ndim
        deg = max(arr.shape) - 1
        full = np.zeros((deg + 1,) * dim)
        full[tuple(slice(0, n) for n in arr.shape)] = arr
        return cls("polynomial", dim, degrees=(deg,), coeffs=tuple(full.ravel()),
                   label="poly:" + ",".join(f"{c:g}" for c in full.ravel()))

    # -- basic properties --------------------------------------------------

    @property
    def code(self):
        return KINDS[self.kind]

    @property
    def coeff_array(self):
        deg = self.degrees[0]
        return np.asarray(self.coeffs).reshape((deg + 1,) * self.dim)

    @property
    def smooth(self):
        return self.kind != "ball"

    @property
    def separable(self):
        return self.kind in ("constant", "hermite", "bump")

    @property
    def support_center(self):
        if self.kind in ("ball", "bump"):
            return np.asarray(self.center)
        return np.zeros(self.dim)

    @property
    def support_extent(self):
        """Radius of the support ball around ``support_center``."""
        if self.kind == "ball":
            return self.radius
        if self.kind == "bump":
            return BUMP_CUTOFF * self.width
        return math.inf

    @property
    def support_radius(self):
        """Radius of the smallest origin-centred ball holding the support."""
        return float(np.linalg.norm(self.support_center)) + self.support_extent

    @property
    def sup_abs(self):
        if self.kind == "constant":
            return abs(self.value) * self.scale
        if self.kind in ("bump", "ball"):
            return self.scale
        return math.inf

    def packed(self):
        """Flat float64 parameter vector consumed by the compiled kernels."""
        if self.kind == "constant":
            return np.array([self.value])
        if self.kind == "hermite":
            return np.asarray(self.degrees, dtype=float)
        if self.kind == "bump":
            return np.array(self.center + (self.width,))
        if self.kind == "ball":
            return np.array(self.center + (self.radius,))
        return np.array((float(self.degrees[0]),) + self.coeffs)

    def scaled(self, c):
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return replace(self, scale=self.scale * c)

    def unscaled(self):
        return replace(self, scale=1.0)

    # -- evaluation --------------------------------------------------------

    def __call__(self, points):
        return self.scale * self.base(points)

    def base(self, points):
        """Evaluate the unscaled shape at points of shape ``(..., dim)``."""
        p = np.asarray(points, dtype=float)
        if p.shape[-1] != self.dim:
            raise ValueError(f"expected points of dimension {self.dim}, got {p.shape[-1]}")
        if self.kind == "constant":
            return np.full(p.shape[:-1], self.value)
        if self.kind == "hermite":
            out = np.ones(p.shape[:-1])
            for i, n in enumerate(self.degrees):
                out = out * _hermite_values(n, p[..., i])
            return out
        if self.kind == "bump":
            r2 = np.sum((p - np.asarray(self.center)) ** 2, axis=-1)
            return np.exp(-0.5 * r2 / self.width ** 2)
        if self.kind == "ball":
            r2 = np.sum((p - np.asarray(self.center)) ** 2, axis=-1)
            return (r2 < self.radius ** 2).astype(float)
        return _polyval(self.coeff_array, p)

    def continuous_at(self, x):
        if self.kind != "ball":
            return True
        dist = float(np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(self.center)))
        return dist != self.radius

    def __str__(self):
        prefix = "" if self.scale == 1.0 else f"{self.scale:g}*"
        return prefix + self.label


def _polyval(c, p):
    from numpy.polynomial import polynomial as P
    if c.ndim == 1:
        return P.polyval(p[..., 0], c)
    if c.ndim == 2:
        return P.polyval2d(p[..., 0], p[..., 1], c)
    return P.polyval3d(p[..., 0], p[..., 1], p[..., 2], c)


def _as_center(center, dim):
    center = (float(center),) if np.isscalar(center) else tuple(float(c) for c in center)
    if dim is not None:
        if len(center) > dim:
            raise ValueError("center has more coordinates than dim")
        center = center + (0.0,) * (dim - len(center))
    if not 1 <= len(center) <= 3:
        raise ValueError("dimension must be 1, 2 or 3")
    return center


def default_corpus(dim=1):
    """The five compactly supported functions used by ratio scans."""
    return [
        TestFunction.ball(0.0, 1.0, dim=dim),
        TestFunction.ball(2.0, 0.5, dim=dim),
        TestFunction.bump(0.0, 0.5, dim=dim),
        TestFunction.bump(1.5, 0.3, dim=dim),
        TestFunction.bump(-1.0, 1.0, dim=dim),
    ]


def parse_function(text, dim=1):
    """Parse the ``[scale*]kind:params`` mini-language.

    ``bump:c...,w``, ``ball:c...,r``, ``hermite:n...``, ``const:c``,
    ``poly:c0,c1,...`` (one-dimensional, ascending powers). Missing center
    coordinates are padded with zeros.
    """
    scale = 1.0
    if "*" in text:
        head, text = text.split("*", 1)
        scale = float(head)
    kind, _, rest = text.partition(":")
    vals = [float(v) for v in rest.split(",")] if rest else []
    kind = kind.strip().lower()
    if kind == "bump":
        if len(vals) < 2:
            raise ValueError("bump needs center and width")
        u = TestFunction.bump(vals[:-1], vals[-1], dim=dim)
    elif kind == "ball":
        if len(vals) < 2:
            raise ValueError("ball needs center and radius")
        u = TestFunction.ball(vals[:-1], vals[-1], dim=dim)
    elif kind == "hermite":
        u = TestFunction.hermite([int(v) for v in vals] or [0], dim=dim)
    elif kind in ("const", "constant"):
        u = TestFunction.constant(vals[0] if vals else 1.0, dim=dim)
    elif kind in ("poly", "polynomial"):
        if dim != 1:
            raise ValueError("poly: syntax is one-dimensional")
        u = TestFunction.polynomial(vals or [0.0])
    else:
        raise ValueError(f"unknown function kind {kind!r}")
    return u.scaled(scale) if scale != 1.0 else u

"""Generalized Laguerre polynomials, log-gamma and radial quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LaguerreSpec:
    degree: int
    upper_index: float

    def __post_init__(self):
        if self.degree < 0 or int(self.degree) != self.degree:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree!r}")
        if not self.upper_index >= 0:
            raise ValueError(f"upper_index must be >= 0, got {self.upper_index!r}")


def _laguerre(n, k, z):
    # upward three-term recurrence in the degree; works on scalars and arrays
    if n < 0:
        return 0.0 * z
    prev = 1.0 + 0.0 * z
    if n == 0:
        return prev
    cur = 1.0 + k - z
    for i in range(2, n + 1):
        prev, cur = cur, ((2 * i - 1 + k - z) * cur - (i - 1 + k) * prev) / i
    return cur


def laguerre(spec: LaguerreSpec, z):
    """L_n^k(z) by the upward recurrence in n.

    ``z`` may be a float or a numpy array.
    """
    return _laguerre(spec.degree, spec.upper_index, z)


def laguerre_derivative(spec: LaguerreSpec, z, order: int = 1):
    """d^order/dz^order L_n^k(z) = (-1)^order L_{n-order}^{k+order}(z)."""
    n, k = spec.degree, spec.upper_index
    if order > n:
        return 0.0 * z
    return (-1) ** order * _laguerre(n - order, k + order, z)


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


@lru_cache(maxsize=16)
def _legendre_rule(node_count):
    x, w = roots_legendre(node_count)
    return 0.5 * (x + 1.0), 0.5 * w


def _origin_panels(refine=10):
    # geometric refinement of [0, 1] handles fractional powers of rho
    return [0.0] + [2.0**-j for j in range(refine, -1, -1)]


def integrate_radial(f, p: float, node_count: int = 32) -> float:
    """Integral of f over (0, inf) for integrands decaying like exp(-2 p rho^2).

    Works in the scaled variable t = rho*sqrt(2p) (so z = 2p rho^2 = t^2)
    with Gauss-Legendre panels of unit width, geometrically refined near
    the origin. Panels are added until the tail is negligible.
    ``f`` must accept a numpy array of radii.
    """
    if node_count < 16:
        raise ValueError("node_count must be at least 16")
    if not p > 0:
        raise ValueError(f"p must be positive, got {p!r}")
    scale = 1.0 / math.sqrt(2.0 * p)
    x, w = _legendre_rule(node_count)

    total = 0.0
    peak = 0.0
    quiet = 0
    edges = _origin_panels()
    a_all, b_all = edges[:-1], edges[1:]
    i = 0
    t_hi = edges[-1]
    while True:
        if i == len(a_all):
            if (quiet >= 3 and t_hi >= 8.0) or t_hi >= 200.0:
                break
            a_all.append(t_hi)
            t_hi += 1.0
            b_all.append(t_hi)
        a, b = a_all[i], b_all[i]
        i += 1
        rho = scale * (a + (b - a) * x)
        vals = np.asarray(f(rho), dtype=float)
        if vals.shape != rho.shape:
            vals = np.broadcast_to(vals, rho.shape)
        if not np.all(np.isfinite(vals)):
            raise QuadratureError(f"non-finite integrand on t in [{a}, {b}]")
        piece = scale * (b - a) * float(np.dot(w, vals))
        total += piece
        peak = max(peak, float(np.max(np.abs(vals))) * (b - a))
        if b > 1.0 and abs(piece) <= 1e-18 * max(abs(total), peak, 1e-300):
            quiet += 1
        elif b > 1.0:
            quiet = 0
    return total

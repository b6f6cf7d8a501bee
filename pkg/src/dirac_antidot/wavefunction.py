"""Radial spinor components and probability-density profiles.

The upper component is

    F(rho) = C exp(-p rho^2) rho^((1+gamma)/2) L_n^(gamma/2)(2 p rho^2)

and the lower component follows from the first-order coupling

    G = -[F' - (m + 1/2) F / rho + W F] / (chi + 1),
    W(rho) = -(omega/2) rho - alpha / rho,

where W collects the tensor (oscillator) and vector-potential terms in
natural units. All radii are in units of hbar/(m* c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import DerivedLambdas, DimensionlessConfig, QuantumNumbers, derived_lambdas
from .special import LaguerreSpec, integrate_radial, laguerre, laguerre_derivative, log_gamma
from .spectrum import EnergySolution


class GridError(ValueError):
    """Sampling grid does not cover the support of the density."""


def _upper_terms(lams: DerivedLambdas, n: int, rho, log_norm: float = 0.0):
    """F, F', F'' and the magnitude of the largest summand in F''.

    The prefactor is evaluated in log form so that very wide states
    (small omega, large gamma) neither overflow nor underflow.
    """
    rho = np.asarray(rho, dtype=float)
    p, s = lams.p, 0.5 * (1.0 + lams.gamma)
    spec = LaguerreSpec(n, lams.k)
    z = 2.0 * p * rho * rho
    pref = np.exp(log_norm + s * np.log(rho) - p * rho * rho)

    y = laguerre(spec, z)
    dz = 4.0 * p * rho
    ly1 = laguerre_derivative(spec, z, 1)
    y1 = ly1 * dz
    y2 = laguerre_derivative(spec, z, 2) * dz * dz + ly1 * 4.0 * p

    g1 = -2.0 * p * rho + s / rho
    g2 = -2.0 * p - s / (rho * rho)
    f0 = pref * y
    f1 = pref * (g1 * y + y1)
    parts = ((g1 * g1 + g2) * y, 2.0 * g1 * y1, y2)
    f2 = pref * sum(parts)
    scale = np.abs(pref) * np.maximum.reduce([np.abs(t) for t in parts])
    return f0, f1, f2, scale


def _coupling(cfg: DimensionlessConfig, rho):
    w_term = -0.5 * cfg.w * rho - cfg.alpha / rho
    w_prime = -0.5 * cfg.w + cfg.alpha / (rho * rho)
    return w_term, w_prime


def _lower_terms(lams, cfg, qn, chi, rho, log_norm=0.0):
    rho = np.asarray(rho, dtype=float)
    f0, f1, f2, _ = _upper_terms(lams, qn.n, rho, log_norm)
    a = qn.m + 0.5
    w_term, w_prime = _coupling(cfg, rho)
    g0 = -(f1 - a * f0 / rho + w_term * f0) / (chi + 1.0)
    g1 = -(f2 - a * f1 / rho + a * f0 / (rho * rho) + w_prime * f0 + w_term * f1) / (chi + 1.0)
    return f0, f1, f2, g0, g1


def upper_shape(lams: DerivedLambdas, n: int, rho):
    """Unnormalized F (C = 1)."""
    return _upper_terms(lams, n, rho)[0]


def closed_form_log_norm(lams: DerivedLambdas, n: int) -> float:
    """log C from  int_0^inf e^-z z^k [L_n^k]^2 dz = Gamma(n+k+1)/n!.

    Valid for F alone; C^2 = 2 (2p)^(k+1) n! / Gamma(n+k+1).
    """
    k = lams.k
    return 0.5 * (
        math.log(2.0)
        + (k + 1.0) * math.log(2.0 * lams.p)
        + log_gamma(n + 1.0)
        - log_gamma(n + k + 1.0)
    )


def quadrature_log_norm(
    lams: DerivedLambdas,
    qn: QuantumNumbers,
    cfg: Optional[DimensionlessConfig] = None,
    chi: Optional[float] = None,
    include_lower: bool = False,
    node_count: int = 32,
) -> float:
    """log C such that int F^2 (+ G^2) drho = 1, by quadrature.

    The closed form is only used to pre-scale the integrand to O(1).
    """
    base = closed_form_log_norm(lams, qn.n)
    if include_lower:
        if cfg is None or chi is None:
            raise ValueError("cfg and chi are required for the lower component")

        def integrand(r):
            f0, _, _, g0, _ = _lower_terms(lams, cfg, qn, chi, r, base)
            return f0 * f0 + g0 * g0
    else:

        def integrand(r):
            f0 = _upper_terms(lams, qn.n, r, base)[0]
            return f0 * f0

    total = integrate_radial(integrand, lams.p, node_count)
    return base - 0.5 * math.log(total)


def radial_upper(lams: DerivedLambdas, qn: QuantumNumbers, rho, log_norm: Optional[float] = None):
    """Normalized upper component F at ``rho`` (float or array, rho > 0).

    Without ``log_norm`` the constant is fixed by quadrature so that
    int F^2 drho = 1.
    """
    if log_norm is None:
        log_norm = quadrature_log_norm(lams, qn)
    return _upper_terms(lams, qn.n, rho, log_norm)[0]


def radial_upper_derivative(lams, qn, rho, log_norm=None):
    if log_norm is None:
        log_norm = quadrature_log_norm(lams, qn)
    return _upper_terms(lams, qn.n, rho, log_norm)[1]


def radial_lower(
    lams: DerivedLambdas,
    cfg: DimensionlessConfig,
    qn: QuantumNumbers,
    chi: float,
    rho,
    log_norm: Optional[float] = None,
):
    """Lower component G recovered from F through the first-order coupling."""
    if not chi > -1:
        raise ValueError(f"chi must exceed -1, got {chi!r}")
    if log_norm is None:
        log_norm = quadrature_log_norm(lams, qn)
    return _lower_terms(lams, cfg, qn, chi, rho, log_norm)[3]


def radial_ode_residual(lams: DerivedLambdas, qn: QuantumNumbers, rho):
    """Relative residual of F'' - 4L1 rho^2 F - 4L3 F/rho^2 + 4L2 F = 0.

    Each point is scaled by the largest term entering the equation,
    including the individual summands of the analytic F''.
    """
    rho = np.asarray(rho, dtype=float)
    f0, _, f2, f2_scale = _upper_terms(lams, qn.n, rho, quadrature_log_norm(lams, qn))
    terms = (
        f2,
        -4.0 * lams.lambda1 * rho * rho * f0,
        -4.0 * lams.lambda3 * f0 / (rho * rho),
        4.0 * lams.lambda2 * f0,
    )
    scale = np.maximum.reduce([f2_scale] + [np.abs(t) for t in terms])
    return np.abs(sum(terms)) / scale


def lower_equation_residual(
    lams: DerivedLambdas,
    cfg: DimensionlessConfig,
    qn: QuantumNumbers,
    chi: float,
    rho,
):
    """Relative residual of the second coupled equation,

        G' + (m + 1/2) G / rho - W G = (chi - 1 - Sigma) F,  Sigma = b^2 / (2 rho^2),

    for the pair (F, G) built by :func:`radial_lower`.
    """
    rho = np.asarray(rho, dtype=float)
    log_norm = quadrature_log_norm(lams, qn)
    f0, f1, f2, g0, g1 = _lower_terms(lams, cfg, qn, chi, rho, log_norm)
    a = qn.m + 0.5
    w_term, _ = _coupling(cfg, rho)
    sigma = 0.5 * cfg.b_squared / (rho * rho)
    terms = (g1, a * g0 / rho, -w_term * g0, -(chi - 1.0) * f0, sigma * f0)
    scale = np.maximum.reduce([np.abs(t) for t in terms])
    return np.abs(sum(terms)) / scale


@dataclass(frozen=True)
class RadialProfile:
    grid: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    density: np.ndarray
    norm_constant: float
    log_norm: float
    includes_lower: bool
    qn: QuantumNumbers
    solution: EnergySolution
    lambdas: DerivedLambdas
    config: DimensionlessConfig

    def density_at(self, rho):
        """P at arbitrary radii, with the profile's normalization."""
        chi = state_chi(self.solution)
        f0, _, _, g0, _ = _lower_terms(self.lambdas, self.config, self.qn, chi, rho, self.log_norm)
        return f0 * f0 + g0 * g0 if self.includes_lower else f0 * f0

    def peak_location(self) -> float:
        return float(self.grid[int(np.argmax(self.density))])

    def onset_radius(self, fraction: float = 0.01) -> float:
        """First grid radius where the density exceeds ``fraction`` of its peak."""
        idx = int(np.argmax(self.density >= fraction * self.density.max()))
        return float(self.grid[idx])


def state_chi(solution: EnergySolution) -> float:
    # nonrelativistic solutions carry no chi; their gamma uses chi + 1 -> 2
    return 1.0 if solution.chi is None else solution.chi


def default_grid(lams: DerivedLambdas, n: int, count: int = 2000):
    """(rho_min, rho_max, count) covering the density support of level n."""
    z_max = 2.0 * (lams.k + 2 * n + 1) + 80.0
    rho_max = math.sqrt(z_max / (2.0 * lams.p))
    return rho_max / (10.0 * count), rho_max, count


def build_profile(
    cfg: DimensionlessConfig,
    qn: QuantumNumbers,
    solution: EnergySolution,
    grid_spec=None,
    include_lower: bool = True,
) -> RadialProfile:
    """Sample F, G and P = F^2 + G^2 on a uniform grid.

    ``grid_spec`` is ``(rho_min, rho_max, count)``; by default the grid is
    chosen from the Gaussian support of the state. With ``include_lower``
    false, G is still reported but neither normalized nor added to P.
    """
    chi = state_chi(solution)
    lams = derived_lambdas(cfg, qn, chi)
    if grid_spec is None:
        grid_spec = default_grid(lams, qn.n)
    rho_min, rho_max, count = grid_spec
    count = int(count)
    if not (0 < rho_min < rho_max) or count < 2:
        raise GridError(f"invalid grid {grid_spec!r}")

    log_norm = quadrature_log_norm(lams, qn, cfg, chi, include_lower)
    grid = np.linspace(rho_min, rho_max, count)
    f0, _, _, g0, _ = _lower_terms(lams, cfg, qn, chi, grid, log_norm)
    density = f0 * f0 + g0 * g0 if include_lower else f0 * f0
    peak = float(density.max())
    if not peak > 0 or density[-1] >= 1e-12 * peak:
        raise GridError(
            f"grid ending at rho = {rho_max:g} does not cover the density support"
        )
    return RadialProfile(
        grid=grid,
        upper=f0,
        lower=g0,
        density=density,
        norm_constant=math.exp(log_norm),
        log_norm=log_norm,
        includes_lower=include_lower,
        qn=qn,
        solution=solution,
        lambdas=lams,
        config=cfg,
    )

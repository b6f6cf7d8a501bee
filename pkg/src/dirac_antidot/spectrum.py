"""Landau, nonrelativistic and relativistic energy levels.

Energies of the nonrelativistic regimes are returned in units of hbar*omega
(hbar*omega_c for :func:`landau_level`). Relativistic levels are returned as
chi = E/(m* c^2) on the positive-energy branch chi > 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .params import DimensionlessConfig, ParameterError, QuantumNumbers


_EPS = 2.0**-52


class Regime(str, Enum):
    LANDAU = "landau"
    NONRELATIVISTIC = "nonrelativistic"
    RELATIVISTIC = "relativistic"


class NoBoundStateError(ValueError):
    """No positive-energy bound state exists for the requested state."""


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class EnergySolution:
    """One energy level.

    ``chi`` is None for the nonrelativistic regimes, where ``eta`` is set
    equal to ``epsilon_over_homega``.
    """

    chi: Optional[float]
    epsilon_over_homega: float
    eta: float
    regime: Regime
    residual: float = 0.0


def landau_level(qn: QuantumNumbers) -> float:
    return qn.n + (abs(qn.m) + qn.m + 1) / 2


def nonrel_energy(cfg: DimensionlessConfig, qn: QuantumNumbers) -> float:
    shift = qn.m + cfg.alpha
    return qn.n + 0.5 + 0.5 * math.sqrt(shift * shift + cfg.b_squared) + 0.5 * shift


def fock_darwin_level(qn: QuantumNumbers) -> float:
    """Zero-field (alpha = 0, omega_c = 0) limit of :func:`nonrel_energy` at b = 0."""
    return qn.n + 0.5 + 0.5 * abs(qn.m) + 0.5 * qn.m


def rel_rhs(cfg: DimensionlessConfig, qn: QuantumNumbers, chi: float) -> float:
    """Right-hand side of chi^2 - 1 = w[2n + 1 + sqrt(...)] + w(m + alpha)."""
    shift = qn.m + cfg.alpha
    root = math.sqrt(shift * shift + 0.5 * (chi + 1.0) * cfg.b_squared)
    return cfg.w * (2 * qn.n + 1 + root + shift)


def _defect(cfg, qn, u):
    # written in u = chi - 1 so that chi^2 - 1 = u(u + 2) keeps full precision
    # for nearly nonrelativistic states
    lhs = u * (u + 2.0)
    rhs = rel_rhs(cfg, qn, 1.0 + u)
    return lhs - rhs, max(lhs, abs(rhs))


def rel_energy(
    cfg: DimensionlessConfig,
    qn: QuantumNumbers,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> EnergySolution:
    """Solve the relativistic quantization condition for chi > 1.

    Uses a secant step safeguarded by bisection on a bracket [0, u_hi] in
    u = chi - 1. The defect u(u+2) - RHS is convex in u (RHS is concave),
    so a negative value at u = 0 guarantees exactly one root above it.
    """
    f_lo, _ = _defect(cfg, qn, 0.0)
    if f_lo == 0.0:
        return _rel_solution(cfg, 0.0, 0.0)
    if f_lo > 0.0:
        # RHS >= w(2n+1) > 0 for b^2 >= 0, so this is unreachable for valid configs
        raise NoBoundStateError(f"no chi > 1 root for {qn}")

    lo, hi = 0.0, 1.0
    f_hi, _ = _defect(cfg, qn, hi)
    while f_hi <= 0.0:
        lo, f_lo = hi, f_hi
        hi *= 2.0
        if hi > 1e300:
            raise ConvergenceError("could not bracket the relativistic root")
        f_hi, _ = _defect(cfg, qn, hi)

    # secant through the two latest iterates, replaced by bisection whenever
    # it leaves the bracket or the bracket stops halving
    u0, f0 = lo, f_lo
    u, f_u = hi, f_hi
    width = hi - lo
    for _ in range(max_iter):
        cand = u - f_u * (u - u0) / (f_u - f0) if f_u != f0 else lo
        if not (lo < cand < hi) or (hi - lo) > 0.5 * width:
            width = hi - lo
            cand = 0.5 * (lo + hi)
        u0, f0 = u, f_u
        u = cand
        f_u, scale = _defect(cfg, qn, u)
        if abs(f_u) <= 4.0 * _EPS * scale:
            break
        if f_u < 0.0:
            lo = u
        else:
            hi = u
        if hi - lo <= 4.0 * math.ulp(hi):
            break
    else:
        raise ConvergenceError(f"rel_energy did not converge for {qn}")

    chi = 1.0 + u
    residual = abs(f_u) / max(1.0, chi * chi)
    if residual > tol:
        raise ConvergenceError(f"residual {residual:.3e} above tolerance for {qn}")
    return _rel_solution(cfg, u, residual)


def _rel_solution(cfg, u, residual):
    eta = u * (u + 2.0) / (2.0 * cfg.w)
    return EnergySolution(
        chi=1.0 + u,
        epsilon_over_homega=u / cfg.w,
        eta=eta,
        regime=Regime.RELATIVISTIC,
        residual=residual,
    )


def solve(cfg: DimensionlessConfig, qn: QuantumNumbers, regime) -> EnergySolution:
    regime = Regime(regime)
    if regime is Regime.RELATIVISTIC:
        return rel_energy(cfg, qn)
    value = landau_level(qn) if regime is Regime.LANDAU else nonrel_energy(cfg, qn)
    return EnergySolution(chi=None, epsilon_over_homega=value, eta=value, regime=regime)


@dataclass(frozen=True)
class SpectrumEntry:
    qn: QuantumNumbers
    solution: Optional[EnergySolution]
    error: Optional[str] = None


def _entry(cfg, regime, qn):
    try:
        return SpectrumEntry(qn, solve(cfg, qn, regime))
    except (ParameterError, NoBoundStateError, ConvergenceError) as exc:
        return SpectrumEntry(qn, None, f"{type(exc).__name__}: {exc}")


def spectrum_table(
    cfg: DimensionlessConfig,
    n_range: Iterable[int],
    m_range: Iterable[int],
    regime,
    workers: int = 1,
) -> list[SpectrumEntry]:
    """Energies for every (n, m), n outer and m inner.

    Per-state failures are returned as entries carrying ``error`` instead of
    aborting the sweep. Ordering does not depend on ``workers``.
    """
    m_values = list(m_range)
    states = [QuantumNumbers(n, m) for n in n_range for m in m_values]
    if workers <= 1 or len(states) < 2:
        return [_entry(cfg, regime, qn) for qn in states]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda qn: _entry(cfg, regime, qn), states))

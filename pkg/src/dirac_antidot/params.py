"""Physical inputs, reduced parameters and per-state derived quantities.

Everything downstream of this module works in natural units
(hbar = c = m* = 1). Lengths are then measured in reduced Compton
wavelengths hbar/(m* c), frequencies in m* c^2/hbar and energies in m* c^2.
:func:`build_dimensionless` is the only place raw physical units appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised for inputs outside the supported parameter domain."""


@dataclass(frozen=True)
class PhysicalConfig:
    effective_mass: float
    magnetic_field: float = 0.0
    oscillator_frequency: float = 0.0
    antidot_strength: float = 0.0
    ab_flux: float = 0.0
    hbar: float = 1.0
    light_speed: float = 1.0
    charge: float = 1.0

    def __post_init__(self):
        for name in ("effective_mass", "hbar", "light_speed"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value!r}")
        if not self.oscillator_frequency >= 0:
            raise ParameterError("oscillator_frequency must be >= 0")
        if not self.antidot_strength >= 0:
            raise ParameterError("antidot_strength must be >= 0")


@dataclass(frozen=True)
class DimensionlessConfig:
    """Reduced parameters consumed by the spectrum and wavefunction code.

    ``omega_c`` and ``omega`` are stored in units of m* c^2/hbar, so
    ``omega`` and ``w`` coincide; both names are kept because the formulas
    read more naturally with one or the other.
    """

    alpha: float
    b_squared: float
    w: float
    omega_c: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.b_squared)):
            raise ParameterError("alpha and b_squared must be finite")
        if self.b_squared < 0:
            raise ParameterError(f"b_squared must be >= 0, got {self.b_squared!r}")
        if not (math.isfinite(self.w) and self.w > 0):
            raise ParameterError(
                f"omega_c + 2*omega_0 must be positive (w = {self.w!r})"
            )
        if not self.omega_c <= self.w:
            raise ParameterError("omega_c > w implies a negative oscillator frequency")

    @classmethod
    def reduced(cls, alpha=0.0, b=0.0, w=1.0, omega_c=None):
        """Build from the figure-level parameters alpha, b and w.

        ``omega_c`` defaults to ``w``, i.e. no oscillator term.
        """
        return cls(
            alpha=float(alpha),
            b_squared=float(b) ** 2,
            w=float(w),
            omega_c=float(w if omega_c is None else omega_c),
        )

    @property
    def omega(self) -> float:
        return self.w

    @property
    def b(self) -> float:
        return math.sqrt(self.b_squared)

    @property
    def omega0(self) -> float:
        return 0.5 * (self.w - self.omega_c)


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    m: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m:
            raise ParameterError("quantum numbers must be integers")
        if self.n < 0:
            raise ParameterError(f"n must be >= 0, got {self.n}")


@dataclass(frozen=True)
class DerivedLambdas:
    lambda1: float
    lambda2: float
    lambda3: float
    gamma: float
    p: float
    q: float
    k: float


def build_dimensionless(phys: PhysicalConfig) -> DimensionlessConfig:
    hbar, c, mass, e = phys.hbar, phys.light_speed, phys.effective_mass, phys.charge
    alpha = e * phys.ab_flux / (2.0 * math.pi * hbar * c)
    b_squared = 2.0 * mass * phys.antidot_strength / hbar**2
    omega_c = e * phys.magnetic_field / (mass * c)
    omega = omega_c + 2.0 * phys.oscillator_frequency
    if not omega > 0:
        raise ParameterError(
            f"omega_c + 2*omega_0 = {omega!r} <= 0 is not supported"
        )
    to_natural = hbar / (mass * c**2)
    return DimensionlessConfig(
        alpha=alpha,
        b_squared=b_squared,
        w=omega * to_natural,
        omega_c=omega_c * to_natural,
    )


def gamma_of(cfg: DimensionlessConfig, m: int, chi: float) -> float:
    """gamma = 2 sqrt((m+alpha)^2 + (chi+1) b^2/2)."""
    antidot = 0.5 * (chi + 1.0) * cfg.b_squared
    if antidot < 0:
        raise ParameterError("negative radicand in gamma")
    # hypot: no underflow of (m+alpha)^2 for tiny fractional flux
    return 2.0 * math.hypot(m + cfg.alpha, math.sqrt(antidot))


def derived_lambdas(cfg: DimensionlessConfig, qn: QuantumNumbers, chi: float) -> DerivedLambdas:
    if not chi > -1:
        raise ParameterError(f"chi must exceed -1, got {chi!r}")
    shift = qn.m + cfg.alpha
    lambda1 = (cfg.w / 4.0) ** 2
    lambda2 = 0.25 * (chi * chi - 1.0) - 0.25 * shift * cfg.w
    lambda3 = 0.25 * shift * shift - 1.0 / 16.0 + (chi + 1.0) * cfg.b_squared / 8.0
    # gamma from the unexpanded radicand keeps gamma = 2|m+alpha| exact at b = 0
    gamma = gamma_of(cfg, qn.m, chi)
    p = cfg.w / 4.0
    q = 0.25 * (1.0 + gamma)
    return DerivedLambdas(
        lambda1=lambda1,
        lambda2=lambda2,
        lambda3=lambda3,
        gamma=gamma,
        p=p,
        q=q,
        k=0.5 * gamma,
    )

"""Spectra and radial wavefunctions of the 2D Dirac oscillator with an
antidot potential in a uniform magnetic field and Aharonov-Bohm flux."""

from .params import (
    DerivedLambdas,
    DimensionlessConfig,
    ParameterError,
    PhysicalConfig,
    QuantumNumbers,
    build_dimensionless,
    derived_lambdas,
)
from .spectrum import (
    EnergySolution,
    Regime,
    landau_level,
    nonrel_energy,
    rel_energy,
    spectrum_table,
)
from .wavefunction import RadialProfile, build_profile, radial_lower, radial_upper

__version__ = "0.1.0"

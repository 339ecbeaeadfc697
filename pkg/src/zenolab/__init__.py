"""zenolab: arrival-time laboratory for wavepackets under complex absorbing
potentials.

Subpackages follow the pipeline: qcore (grids, states, potentials,
transforms) -> evolve (split-operator propagation, survival, crossing
densities) -> arrival (ideal free-evolution distributions) -> pdx
(propagator kernels and strong-absorber identities) -> cli (runs, sweeps,
verification suites).
"""

from .qcore import (
    AbsorbingPotential,
    GaussianPacketSpec,
    PhysicalConstants,
    Profile,
    SpatialGrid,
    WaveFunction,
    make_gaussian,
    make_profile,
    observables,
    spectral_transform,
)
from .series import TimeSeries
from .evolve import EvolutionConfig, evolve, reflection_probability
from .stepper import BACKEND as STEPPER_BACKEND

__version__ = "0.1.0"

__all__ = [
    "AbsorbingPotential",
    "EvolutionConfig",
    "GaussianPacketSpec",
    "PhysicalConstants",
    "Profile",
    "SpatialGrid",
    "TimeSeries",
    "WaveFunction",
    "STEPPER_BACKEND",
    "evolve",
    "make_gaussian",
    "make_profile",
    "observables",
    "reflection_probability",
    "spectral_transform",
    "__version__",
]

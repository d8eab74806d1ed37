"""Quantized fluctuational electrodynamics in planar layered media."""

__version__ = "0.1.0"

from .coefficients import ResonanceError, build_ladder, cumulative_transmission, fresnel
from .config import ConfigError, RunConfig, parse_config, serialize_config
from .dos import DegenerateError, PreconditionError, ifdos, ldos, ldos_integral, ldos_profile, nldos
from .greens import LayeredGreens, greens_tensor, xi
from .model import CONSTANTS, Layer, PhysicalConstants, Stack, bose_einstein, frequency_sample, locate
from .observables import (
    SpectralPoint, fluctuations, ladder_kernel, net_emission, photon_number, poynting, steady_state_temperature,
)
from .quadrature import QuadratureError, QuadratureSpec
from .sweep import ResultTable, SweepError, emit, run_sweep
from .verify import (
    CheckReport, check_equilibrium, check_green_identity, check_ifdos_zero, check_poynting_continuity,
    check_reciprocity, run_battery,
)

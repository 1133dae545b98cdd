"""Thermal light in a quasi-1D waveguide as a statistical mixture of sets of
localized coherent pulses.

The package builds the Gaussian mixture over pulse-site amplitudes (the scale
factor Gamma and the Hermitian Toeplitz kernel Lambda), samples typical and
fully random pulse sets, evaluates mean field envelopes, and verifies by
Monte Carlo that the mixture reproduces exact thermal mode statistics.
"""

from .modes import SpectralWindow, SiteIndexSet, chi, w_site, transform_matrix, to_site_amplitudes
from .thermal import (
    Dispersion,
    ThermalContext,
    GammaValue,
    LambdaMatrix,
    mean_occupation,
    gamma_discrete,
    gamma_continuum,
    lambda_discrete,
    lambda_continuum,
    refine,
)
from .sampler import (
    EigenSystem,
    EtaVector,
    PulseSet,
    diagonalize,
    typical_pulse_set,
    atypical_pulse_set,
    random_pulse_set,
)
from .fields import (
    FieldGrid,
    FieldProfile,
    wannier,
    single_pulse_field,
    pulse_set_field,
    planck_weight,
)
from .verify import MomentReport, verify_moments, verify_invariants

__all__ = [
    "SpectralWindow",
    "SiteIndexSet",
    "chi",
    "w_site",
    "transform_matrix",
    "to_site_amplitudes",
    "Dispersion",
    "ThermalContext",
    "GammaValue",
    "LambdaMatrix",
    "mean_occupation",
    "gamma_discrete",
    "gamma_continuum",
    "lambda_discrete",
    "lambda_continuum",
    "refine",
    "EigenSystem",
    "EtaVector",
    "PulseSet",
    "diagonalize",
    "typical_pulse_set",
    "atypical_pulse_set",
    "random_pulse_set",
    "FieldGrid",
    "FieldProfile",
    "wannier",
    "single_pulse_field",
    "pulse_set_field",
    "planck_weight",
    "MomentReport",
    "verify_moments",
    "verify_invariants",
]

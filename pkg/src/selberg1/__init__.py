"""Numerical toolkit for degree-one elements of the Selberg class.

Evaluates the critical-line transform F(alpha, T), detects the conductor
and periodic coefficients from its limit, and identifies the element as a
shifted Dirichlet L-function.
"""

from .asymptotics import StirlingConstants, stirling_constants, verify_eq1_residual
from .characters import (
    DirichletCharacter,
    build_L_element,
    conductor_and_inducer,
    enumerate_characters,
    gauss_sum,
    l_value,
    primitive_characters,
)
from .detector import DetectionReport, detect, detect_q, extract_coeffs, periodicity_check, scan_support
from .errors import *  # noqa: F401,F403
from .identifier import Identification, convention_probe, identify, match_character, verify_H_constant
from .oscillatory import (
    OscIntegralResult,
    adaptive_osc_quadrature,
    power_kernel_integral,
    stationary_kernel,
    stationary_main_term,
)
from .selberg import (
    CoefficientSource,
    FunctionalEquation,
    GammaFactorTerm,
    SelbergElement,
    load_element,
    validate_axioms,
)
from .smoothing import extrapolated_value, lemma_error_probe, smoothed_value
from .transform import (
    LimitEstimate,
    TransformSample,
    eq5_invert,
    eq5_predict,
    limit_estimate,
    transform_expsum,
    transform_quadrature,
)

__version__ = "0.1.0"

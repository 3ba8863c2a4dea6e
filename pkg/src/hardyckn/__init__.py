"""Numerical verification of weighted Hardy identities under anisotropic
dilations, with sharp-constant exploration.

The package treats R^n equipped with a one-parameter family of anisotropic
dilations and a compatible homogeneous gauge.  Its core result under test is
an exact remainder identity for the radial (Euler) derivative: the weighted
Dirichlet term minus the sharp multiple of the weighted Hardy term equals a
nonnegative remainder, for every admissible complex field and every real
weight exponent.  Everything else follows: the inequality with its sharp
never-attained constant, the integrated uncertainty bound, and the window
scans showing the constant is approached but never reached.

Main entry points:
    GroupSpec, QuasiNorm          dilation structures and homogeneous gauges
    radial_bump, product_field    admissible test fields
    weighted_norm_triple          the three weighted norms (A, B, C)
    verify_remainder_identity     A - mu^2 B = C with structured residuals
    verify_ckn_inequality         |mu| sqrt(B) <= sqrt(A), strictness flagged
    sharpness_scan                window ladder driving the quotient to mu^2
    extremizer_quotients          plateau family climbing toward the constant
    cli.main                      the `hardyckn` command-line interface
"""

from .errors import (ConfigError, EigensolverError, HardycknError,
                     HypothesisViolationError, IncompatibleNormError,
                     QuadratureDomainError, QuadratureInconsistencyError)
from .tolerances import DEFAULT_TOLERANCES, ToleranceProfile
from .groups import (GroupSpec, HomogeneityReport, QuasiNorm,
                     check_homogeneity, dilate, dilation_jacobian,
                     euler_apply, euler_finite_difference,
                     homogeneous_dimension, quasi_norm, radial_derivative)
from .fields import (GradientCheckReport, RadialPart, RadialProfile,
                     ScalarField, annulus_samples, bump_profile,
                     complex_phase_wrap, dilate_field, extremizer_member,
                     gradient_selfcheck, monomial_field, phase_wrapped_bump,
                     power_of_norm_field, product_field, radial_bump,
                     zero_field)
from .quadrature import (DEFAULT_SETTINGS, MCResult, QuadratureSettings,
                         SphereMeasureConstant, box_covers_ball,
                         derive_sphere_constant, integrate_cartesian,
                         integrate_radial, mc_integrate, sphere_constant)
from .identities import (IdentityReport, WeightedNormTriple, build_fingerprint,
                         coefficient_mu, norm_quantities,
                         verify_alpha_one_inequality,
                         verify_alpha_zero_identity, verify_ckn_inequality,
                         verify_ibp_identity, verify_product_rule,
                         verify_remainder_identity, verify_schwarz_step,
                         verify_uncertainty, weighted_norm_triple)
from .sharpness import (ExtremizerSequenceResult, MinimizationResult,
                        RayleighProblem, SharpnessScanResult,
                        extremizer_quotients, minimize_rayleigh,
                        rayleigh_quotient, reference_minimizer_profile,
                        sharpness_scan, window_infimum)
from .reporting import (BUNDLE_SCHEMA, ReportBundle, ReportRow, ScanRecord,
                        load_bundle, render_bundle_summary, write_bundle,
                        write_extremizer_csv, write_reports_csv,
                        write_scan_csv)
from .config import (ExtremizerConfig, FieldConfig, GroupConfig, NormConfig,
                     SampleSettings, ScanConfig, VerifyConfig, build_field,
                     build_group, build_norm, default_config_text,
                     load_config, load_default_config, parse_config_text)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "HardycknError", "HypothesisViolationError", "IncompatibleNormError",
    "QuadratureDomainError", "QuadratureInconsistencyError",
    "EigensolverError", "ConfigError",
    # tolerances
    "ToleranceProfile", "DEFAULT_TOLERANCES",
    # groups
    "GroupSpec", "QuasiNorm", "HomogeneityReport", "homogeneous_dimension",
    "dilate", "dilation_jacobian", "quasi_norm", "euler_apply",
    "radial_derivative", "euler_finite_difference", "check_homogeneity",
    # fields
    "ScalarField", "RadialPart", "RadialProfile", "GradientCheckReport",
    "bump_profile", "radial_bump", "complex_phase_wrap", "phase_wrapped_bump",
    "product_field", "extremizer_member", "monomial_field",
    "power_of_norm_field", "zero_field", "dilate_field", "gradient_selfcheck",
    "annulus_samples",
    # quadrature
    "QuadratureSettings", "DEFAULT_SETTINGS", "MCResult",
    "SphereMeasureConstant", "integrate_radial", "integrate_cartesian",
    "box_covers_ball", "mc_integrate", "derive_sphere_constant",
    "sphere_constant",
    # identities
    "coefficient_mu", "WeightedNormTriple", "IdentityReport",
    "norm_quantities", "weighted_norm_triple", "build_fingerprint",
    "verify_remainder_identity", "verify_alpha_zero_identity",
    "verify_ibp_identity", "verify_product_rule", "verify_ckn_inequality",
    "verify_uncertainty", "verify_schwarz_step",
    "verify_alpha_one_inequality",
    # sharpness
    "RayleighProblem", "MinimizationResult", "SharpnessScanResult",
    "ExtremizerSequenceResult", "window_infimum", "minimize_rayleigh",
    "rayleigh_quotient", "reference_minimizer_profile", "sharpness_scan",
    "extremizer_quotients",
    # reporting
    "BUNDLE_SCHEMA", "ReportRow", "ScanRecord", "ReportBundle",
    "write_bundle", "load_bundle", "write_reports_csv", "write_scan_csv",
    "write_extremizer_csv", "render_bundle_summary",
    # config
    "VerifyConfig", "GroupConfig", "NormConfig", "FieldConfig", "ScanConfig",
    "ExtremizerConfig", "SampleSettings", "load_config", "parse_config_text",
    "load_default_config", "default_config_text", "build_group", "build_norm",
    "build_field",
]

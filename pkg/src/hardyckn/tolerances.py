"""Tolerance policy shared by the verification operations.

All checks receive their thresholds from a ToleranceProfile owned by the
caller; nothing below hard-codes a tolerance at the call site.  The defaults
encode the intended accuracy split between the two integration routes: the
one-dimensional radial route is quadrature-limited (1e-8 relative), the
tensor-grid cartesian route is resolution-limited (1e-4 relative).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceProfile:
    """Thresholds used by verification checks and self-tests."""

    # pointwise operator identities (exact up to rounding)
    pointwise: float = 1e-10
    # relative residual of integral identities, per route
    identity_radial: float = 1e-8
    identity_cartesian: float = 1e-4
    # inequality checks: ratio may exceed 1 by at most this much
    inequality_slack: float = 1e-8
    # ratio must stay below 1 - margin to count as strictly attained
    strictness_margin: float = 1e-10
    # finite-difference limited pointwise checks
    product_rule: float = 1e-6
    schwarz_pointwise: float = 1e-12
    # central finite differences: step, sweep window, minimal observed order
    fd_step: float = 1e-5
    fd_window: tuple[float, float] = (1e-6, 1e-2)
    fd_order_min: float = 1.8
    # denominator floor for relative residuals near lhs = 0
    residual_floor: float = 1e-30
    # consistency of the two reference fields in the sphere-constant ratio
    sphere_discrepancy: float = 1e-4
    # cartesian vs sphere-scaled radial integrals
    polar_consistency: float = 1e-4
    # samples closer than band * |x|^nu_k to a coordinate hyperplane are
    # skipped when the quasi-norm is not smooth there
    exclusion_band: float = 1e-8


DEFAULT_TOLERANCES = ToleranceProfile()

"""Weighted-norm identities and inequalities for the radial derivative.

For a dilation structure with homogeneous dimension Q >= 3, a gauge |.|, a
weight exponent alpha and mu = (Q - 2 - 2 alpha) / 2, define for admissible f

    A = || |x|^(-alpha) R f ||_L2^2
    B = || f / |x|^(alpha+1) ||_L2^2
    C = || |x|^(-alpha) R f + mu f / |x|^(alpha+1) ||_L2^2 .

The exact remainder identity A - mu^2 B = C holds for every complex f that is
smooth and compactly supported away from the origin, for every real alpha.
Dropping the nonnegative remainder C yields the weighted Hardy / CKN
inequality mu^2 B <= A with sharp constant |mu| = |Q - 2 - 2 alpha| / 2,
never attained by a nonzero admissible f.  The checks below verify the
identity and its consequences numerically along two independent integration
routes and report structured residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from .errors import (HypothesisViolationError, IncompatibleNormError,
                     QuadratureInconsistencyError)
from .fields import ScalarField
from .groups import GroupSpec, QuasiNorm, _as_points, dilate
from .quadrature import (DEFAULT_SETTINGS, QuadratureSettings,
                         integrate_cartesian, integrate_radial, sphere_constant)
from .tolerances import DEFAULT_TOLERANCES, ToleranceProfile

Array = np.ndarray


def coefficient_mu(Q: float, alpha: float) -> float:
    """mu = (Q - 2 - 2 alpha) / 2; its square is the sharp Hardy constant."""
    return (Q - 2.0 - 2.0 * alpha) / 2.0


def _require_hypotheses(spec: GroupSpec, qn: QuasiNorm) -> None:
    if qn.group != spec:
        raise IncompatibleNormError("quasi-norm belongs to a different dilation structure")
    if spec.Q < 3.0:
        raise HypothesisViolationError(
            f"weighted identities require homogeneous dimension Q >= 3, got Q = {spec.Q}")


def _radial_spacing(a: float, b: float) -> str:
    return "log" if b / a > 50.0 else "linear"


# -- fused quantity engine ------------------------------------------------------
#
# Integral checks need several weighted norms of the same field.  The engines
# below evaluate the field (and its radial derivative) once per quadrature
# node and fold in all requested weights, so a full alpha grid costs one grid
# sweep.  Keys: ("A"|"B"|"C", alpha) and the extras
#   "l2"        = ||f||^2
#   "x2l2"      = || |x| f ||^2
#   "ibp_cross" = Re integral of (f / |x|) conj(R f)
#   "grad2"     = || |grad f| ||^2   (cartesian or euclidean-radial only)


def _radial_quantities(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                       settings: QuadratureSettings,
                       keys: Sequence, sphere: float) -> dict:
    a, b = f.support
    Q = spec.Q
    phi, dphi = f.radial.phi, f.radial.dphi
    spacing = _radial_spacing(a, b)

    def integ(g, w):
        return sphere * integrate_radial(g, (a, b), w, settings, spacing=spacing)

    out: dict = {}
    for key in keys:
        if isinstance(key, tuple):
            kind, alpha = key
            mu = coefficient_mu(Q, alpha)
            if kind == "A":
                out[key] = integ(lambda r: np.abs(dphi(r)) ** 2, Q - 1.0 - 2.0 * alpha)
            elif kind == "B":
                out[key] = integ(lambda r: np.abs(phi(r)) ** 2, Q - 3.0 - 2.0 * alpha)
            elif kind == "C":
                out[key] = integ(
                    lambda r: np.abs(np.asarray(dphi(r))
                                     + mu * np.asarray(phi(r)) / np.asarray(r, dtype=float)) ** 2,
                    Q - 1.0 - 2.0 * alpha)
            else:
                raise KeyError(key)
        elif key == "l2":
            out[key] = integ(lambda r: np.abs(phi(r)) ** 2, Q - 1.0)
        elif key == "x2l2":
            out[key] = integ(lambda r: np.abs(phi(r)) ** 2, Q + 1.0)
        elif key == "ibp_cross":
            out[key] = integ(
                lambda r: np.real(np.asarray(phi(r)) * np.conj(np.asarray(dphi(r)))),
                Q - 2.0)
        elif key == "grad2":
            if not qn.is_euclidean_equivalent:
                raise IncompatibleNormError(
                    "|grad f| is not gauge-radial for a non-euclidean gauge")
            out[key] = integ(lambda r: np.abs(dphi(r)) ** 2, Q - 1.0)
        else:
            raise KeyError(key)
    return out


def _field_point_data(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                      pts: Array, need_grad: bool):
    """Values, radial derivative, and optionally |grad f|^2 at points."""
    r = np.asarray(qn.value(pts))
    vals = np.asarray(f.evaluate(pts))
    if f.radial is not None and f.radial.norm == qn:
        rf = np.asarray(f.radial.dphi(r), dtype=complex)
        parts = np.asarray(f.partials(pts)) if need_grad else None
    else:
        parts = np.asarray(f.partials(pts))
        coeff = spec.nu_array() * pts
        with np.errstate(invalid="ignore"):
            terms = np.where(coeff == 0.0, 0.0, coeff * parts)
        ef = np.sum(terms, axis=-1)
        rf = np.where(r > 0.0, ef / np.where(r > 0.0, r, 1.0), 0.0)
    grad2 = np.sum(np.abs(parts) ** 2, axis=-1) if need_grad else None
    return r, vals, rf, grad2


def _cartesian_quantities(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                          settings: QuadratureSettings,
                          keys: Sequence) -> dict:
    a, b = f.support
    Q = spec.Q
    box = [(-e, e) for e in qn.ball_extents(b)]
    if spec.n > 3:
        raise IncompatibleNormError("cartesian route is guarded to n <= 3")
    need_grad = "grad2" in keys
    a_safe = a * (1.0 - 1e-12)

    accum = {key: [] for key in keys}
    from .quadrature import _axis_rule, _CHUNK  # shared node machinery

    rules = [_axis_rule(lo, hi, settings.cartesian_resolution) for lo, hi in box]
    nodes = [rule[0] for rule in rules]
    weights = [rule[1] for rule in rules]
    rest = int(np.prod([len(x) for x in nodes[1:]])) if len(nodes) > 1 else 1
    chunk_rows = max(1, _CHUNK // max(rest, 1))

    for start in range(0, len(nodes[0]), chunk_rows):
        sl = slice(start, start + chunk_rows)
        axes = [nodes[0][sl]] + nodes[1:]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], axis=-1)
        wt = weights[0][sl]
        for wk in weights[1:]:
            wt = np.multiply.outer(wt, wk)
        wt = wt.reshape(-1)

        r, vals, rf, grad2 = _field_point_data(spec, qn, f, pts, need_grad)
        inside = r >= a_safe
        f2 = np.abs(vals) ** 2
        rf2 = np.abs(rf) ** 2

        def weight_pow(expo):
            w = np.zeros_like(r)
            w[inside] = r[inside] ** expo
            return w

        for key in keys:
            if isinstance(key, tuple):
                kind, alpha = key
                mu = coefficient_mu(Q, alpha)
                if kind == "A":
                    integrand = weight_pow(-2.0 * alpha) * rf2
                elif kind == "B":
                    integrand = weight_pow(-2.0 * alpha - 2.0) * f2
                else:  # "C"
                    rsafe = np.where(inside, r, 1.0)
                    comb = np.abs(rf + mu * vals / rsafe) ** 2
                    integrand = weight_pow(-2.0 * alpha) * comb
            elif key == "l2":
                integrand = f2
            elif key == "x2l2":
                integrand = r * r * f2
            elif key == "ibp_cross":
                integrand = weight_pow(-1.0) * np.real(vals * np.conj(rf))
            elif key == "grad2":
                integrand = grad2
            else:
                raise KeyError(key)
            accum[key].append(float(np.dot(wt, integrand)))

    return {key: math.fsum(parts) for key, parts in accum.items()}


def norm_quantities(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                    settings: QuadratureSettings = DEFAULT_SETTINGS,
                    keys: Sequence = (), route: str = "auto",
                    sphere: float | None = None) -> tuple[dict, str]:
    """Evaluate a batch of weighted norms of f; returns (values, route used)."""
    _require_hypotheses(spec, qn)
    if f.support is None:
        raise ValueError("integral quantities require a compactly supported field")
    radial_ok = f.radial is not None and f.radial.norm == qn
    if route == "auto":
        route = "radial" if radial_ok else "cartesian"
    if route == "radial":
        if not radial_ok:
            raise ValueError("radial route requires an exact radial decomposition in this gauge")
        s = sphere if sphere is not None else sphere_constant(spec, qn, settings)
        return _radial_quantities(spec, qn, f, settings, keys, s), "radial"
    if route == "cartesian":
        return _cartesian_quantities(spec, qn, f, settings, keys), "cartesian"
    raise ValueError(f"unknown route {route!r}")


# -- report types ----------------------------------------------------------------


@dataclass(frozen=True)
class WeightedNormTriple:
    """The three weighted norms (A, B, C) at one weight exponent."""

    A: float
    B: float
    C: float
    alpha: float
    Q: float
    route: str
    sphere_constant: float | None

    @property
    def mu(self) -> float:
        return coefficient_mu(self.Q, self.alpha)

    @property
    def remainder_ratio(self) -> float:
        """C / B, the normalized remainder; tends to 0 along extremizing sequences."""
        if self.B == 0.0:
            return math.nan
        return self.C / self.B


@dataclass(frozen=True)
class IdentityReport:
    """Structured outcome of one verification check.

    For identity checks residual = |lhs - rhs| and relative_residual divides
    by max(|lhs|, floor).  For inequality checks ratio stores the normalized
    quotient (at most 1 in exact arithmetic) and relative_residual =
    max(0, ratio - 1).  In both cases passed == (relative_residual <=
    tolerance).
    """

    check_name: str
    lhs: float
    rhs: float
    residual: float
    relative_residual: float
    tolerance: float
    passed: bool
    route: str
    fingerprint: str
    ratio: float | None = None
    strict: bool | None = None
    vacuous: bool = False
    details: dict = dc_field(default_factory=dict)


def build_fingerprint(check: str, spec: GroupSpec, qn: QuasiNorm | None,
                      field_label: str, alpha: float | None,
                      settings: QuadratureSettings) -> str:
    norm_part = "none"
    if qn is not None:
        norm_part = qn.family if qn.p is None else f"{qn.family}:p={qn.p:g}"
    alpha_part = "-" if alpha is None else f"{alpha:.17g}"
    nu_part = ",".join(f"{v:g}" for v in spec.nu)
    return (f"check={check}|nu={nu_part}|norm={norm_part}|field={field_label}"
            f"|alpha={alpha_part}|panels={settings.panels}"
            f"|nodes={settings.nodes_per_panel}|cart={settings.cartesian_resolution}"
            f"|mc={settings.mc_samples}|seed={settings.mc_seed}")


def _identity_report(check: str, lhs: float, rhs: float, tol: float, route: str,
                     fingerprint: str, floor: float, vacuous: bool = False,
                     details: dict | None = None) -> IdentityReport:
    residual = abs(lhs - rhs)
    rel = residual / max(abs(lhs), floor)
    return IdentityReport(
        check_name=check, lhs=lhs, rhs=rhs, residual=residual,
        relative_residual=rel, tolerance=tol, passed=rel <= tol,
        route=route, fingerprint=fingerprint, vacuous=vacuous,
        details=details or {},
    )


def _inequality_report(check: str, lhs: float, rhs: float, ratio: float | None,
                       tol: float, strict_margin: float, route: str,
                       fingerprint: str, vacuous: bool,
                       details: dict | None = None) -> IdentityReport:
    if vacuous or ratio is None:
        rel = 0.0
        strict = None
    else:
        rel = max(0.0, ratio - 1.0)
        strict = ratio < 1.0 - strict_margin
    return IdentityReport(
        check_name=check, lhs=lhs, rhs=rhs, residual=max(0.0, lhs - rhs),
        relative_residual=rel, tolerance=tol, passed=rel <= tol,
        route=route, fingerprint=fingerprint, ratio=ratio, strict=strict,
        vacuous=vacuous, details=details or {},
    )


# -- the checks -------------------------------------------------------------------


def weighted_norm_triple(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                         alpha: float,
                         settings: QuadratureSettings = DEFAULT_SETTINGS,
                         route: str = "auto",
                         sphere: float | None = None) -> WeightedNormTriple:
    """Compute (A, B, C) for one field and weight exponent."""
    alpha = float(alpha)
    keys = [("A", alpha), ("B", alpha), ("C", alpha)]
    vals, used = norm_quantities(spec, qn, f, settings, keys, route, sphere)
    s = sphere
    if used == "radial" and s is None:
        s = sphere_constant(spec, qn, settings)
    return WeightedNormTriple(A=vals[("A", alpha)], B=vals[("B", alpha)],
                              C=vals[("C", alpha)], alpha=alpha, Q=spec.Q,
                              route=used, sphere_constant=s)


def verify_remainder_identity(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                              alpha: float,
                              settings: QuadratureSettings = DEFAULT_SETTINGS,
                              tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                              route: str = "auto",
                              triple: WeightedNormTriple | None = None,
                              ) -> IdentityReport:
    """Check A - mu^2 B = C at the given weight exponent.

    lhs is the Hardy difference A - mu^2 B, rhs the remainder C.  Both sides
    vanish together exactly when f is zero, which is reported as a vacuous
    pass.
    """
    if triple is None:
        triple = weighted_norm_triple(spec, qn, f, alpha, settings, route)
    mu = triple.mu
    lhs = triple.A - mu * mu * triple.B
    rhs = triple.C
    tol = (tolerances.identity_radial if triple.route == "radial"
           else tolerances.identity_cartesian)
    fp = build_fingerprint("remainder-identity", spec, qn, f.label, alpha, settings)
    vac = triple.A == 0.0 and triple.B == 0.0 and triple.C == 0.0
    return _identity_report(
        "remainder-identity", lhs, rhs, tol, triple.route, fp,
        tolerances.residual_floor, vacuous=vac,
        details={"A": triple.A, "B": triple.B, "C": triple.C,
                 "mu": mu, "alpha": alpha})


def verify_alpha_zero_identity(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                               settings: QuadratureSettings = DEFAULT_SETTINGS,
                               tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                               ) -> IdentityReport:
    """Check ||Rf||^2 = ((Q-2)/2)^2 ||f/|x|||^2 + ||Rf + (Q-2) f / (2|x|)||^2.

    Independent specialization of the remainder identity at alpha = 0: the
    exponents and the coefficient (Q - 2) / 2 are written out literally here,
    sharing no intermediate with the general-alpha path, so a sign or
    exponent slip in either implementation makes the two disagree.
    """
    _require_hypotheses(spec, qn)
    if f.support is None:
        raise ValueError("integral quantities require a compactly supported field")
    Q = spec.Q
    half = (Q - 2.0) / 2.0
    a, b = f.support

    if f.radial is not None and f.radial.norm == qn:
        route = "radial"
        s = sphere_constant(spec, qn, settings)
        phi, dphi = f.radial.phi, f.radial.dphi
        spacing = _radial_spacing(a, b)

        def integ(g, w):
            return s * integrate_radial(g, (a, b), w, settings, spacing=spacing)

        grad_sq = integ(lambda r: np.abs(dphi(r)) ** 2, Q - 1.0)
        hardy_sq = integ(lambda r: np.abs(phi(r)) ** 2, Q - 3.0)
        rem_sq = integ(
            lambda r: np.abs(np.asarray(dphi(r))
                             + half * np.asarray(phi(r)) / np.asarray(r, dtype=float)) ** 2,
            Q - 1.0)
    else:
        route = "cartesian"
        box = [(-e, e) for e in qn.ball_extents(b)]
        a_safe = a * (1.0 - 1e-12)

        def point_rf(pts):
            r = np.asarray(qn.value(pts))
            vals = np.asarray(f.evaluate(pts))
            parts = np.asarray(f.partials(pts))
            coeff = spec.nu_array() * pts
            with np.errstate(invalid="ignore"):
                terms = np.where(coeff == 0.0, 0.0, coeff * parts)
            ef = np.sum(terms, axis=-1)
            rf = np.where(r > 0.0, ef / np.where(r > 0.0, r, 1.0), 0.0)
            return r, vals, rf

        def g_grad(pts):
            _, _, rf = point_rf(pts)
            return np.abs(rf) ** 2

        def g_hardy(pts):
            r, vals, _ = point_rf(pts)
            w = np.where(r >= a_safe, np.where(r > 0, r, 1.0) ** -2.0, 0.0)
            return np.abs(vals) ** 2 * w

        def g_rem(pts):
            r, vals, rf = point_rf(pts)
            rsafe = np.where(r >= a_safe, r, 1.0)
            comb = np.abs(rf + half * vals / rsafe) ** 2
            return np.where(r >= a_safe, comb, 0.0)

        grad_sq = integrate_cartesian(g_grad, box, settings, cover=(qn, b))
        hardy_sq = integrate_cartesian(g_hardy, box, settings, cover=(qn, b))
        rem_sq = integrate_cartesian(g_rem, box, settings, cover=(qn, b))

    lhs = grad_sq
    rhs = half * half * hardy_sq + rem_sq
    tol = (tolerances.identity_radial if route == "radial"
           else tolerances.identity_cartesian)
    fp = build_fingerprint("alpha-zero-identity", spec, qn, f.label, 0.0, settings)
    vac = lhs == 0.0 and rhs == 0.0
    return _identity_report(
        "alpha-zero-identity", lhs, rhs, tol, route, fp,
        tolerances.residual_floor, vacuous=vac,
        details={"A": grad_sq, "B": hardy_sq, "C": rem_sq, "mu": half, "alpha": 0.0})


def verify_ibp_identity(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                        settings: QuadratureSettings = DEFAULT_SETTINGS,
                        tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                        route: str = "auto") -> IdentityReport:
    """Check the integration-by-parts identity behind the Hardy chain:

        integral |f|^2 / |x|^2 = -2/(Q-2) * Re integral (f / |x|) conj(R f).
    """
    keys = [("B", 0.0), "ibp_cross"]
    vals, used = norm_quantities(spec, qn, f, settings, keys, route)
    lhs = vals[("B", 0.0)]
    rhs = -2.0 / (spec.Q - 2.0) * vals["ibp_cross"]
    tol = (tolerances.identity_radial if used == "radial"
           else tolerances.identity_cartesian)
    fp = build_fingerprint("ibp-identity", spec, qn, f.label, None, settings)
    return _identity_report(
        "ibp-identity", lhs, rhs, tol, used, fp, tolerances.residual_floor,
        vacuous=(lhs == 0.0 and rhs == 0.0),
        details={"cross_term": vals["ibp_cross"]})


def verify_product_rule(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                        alpha: float, sample_points: Array,
                        tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                        settings: QuadratureSettings = DEFAULT_SETTINGS,
                        ) -> IdentityReport:
    """Pointwise check of |x|^(-alpha) R f = R(f |x|^(-alpha)) + alpha f |x|^(-alpha-1).

    The left side uses analytic partials; R of the composite g = f |x|^(-alpha)
    is evaluated by a central dilation-ray difference, so the residual floor is
    set by the finite-difference step, not by rounding.
    """
    _require_hypotheses(spec, qn)
    alpha = float(alpha)
    pts, _ = _as_points(sample_points, spec.n)
    r = np.asarray(qn.value(pts))
    if np.any(r == 0.0):
        raise ValueError("sample points must avoid the origin")

    _, vals, rf, _ = _field_point_data(spec, qn, f, pts, need_grad=False)
    lhs = r ** (-alpha) * rf

    h = tolerances.fd_step

    def composite(y):
        ry = np.asarray(qn.value(y))
        fy = np.asarray(f.evaluate(y))
        return np.where(ry > 0.0, fy * np.where(ry > 0.0, ry, 1.0) ** (-alpha), 0.0)

    gp = composite(dilate(spec, 1.0 + h, pts))
    gm = composite(dilate(spec, 1.0 - h, pts))
    r_composite = (gp - gm) / (2.0 * h) / r
    rhs = r_composite + alpha * vals * r ** (-alpha - 1.0)

    res = float(np.max(np.abs(lhs - rhs)))
    scale = max(1.0, float(np.max(np.abs(lhs))))
    rel = res / scale
    tol = tolerances.product_rule
    fp = build_fingerprint("product-rule", spec, qn, f.label, alpha, settings)
    return IdentityReport(
        check_name="product-rule",
        lhs=float(np.max(np.abs(lhs))), rhs=float(np.max(np.abs(rhs))),
        residual=res, relative_residual=rel, tolerance=tol, passed=rel <= tol,
        route="pointwise", fingerprint=fp,
        details={"samples": int(pts.shape[0]), "fd_step": h, "alpha": alpha})


def verify_ckn_inequality(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                          alpha: float,
                          settings: QuadratureSettings = DEFAULT_SETTINGS,
                          tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                          route: str = "auto",
                          triple: WeightedNormTriple | None = None,
                          check_name: str = "ckn-inequality") -> IdentityReport:
    """Check |mu| sqrt(B) <= sqrt(A) and flag strictness.

    ratio = |mu| sqrt(B) / sqrt(A) must never exceed 1 beyond quadrature
    slack, and for genuinely admissible nonzero fields stays strictly below 1
    (the constant is sharp but never attained).  alpha = (Q - 2) / 2 makes
    the constant zero; the check degenerates and is reported vacuous.
    """
    if triple is None:
        triple = weighted_norm_triple(spec, qn, f, alpha, settings, route)
    c = abs(triple.mu)
    lhs = c * math.sqrt(max(triple.B, 0.0))
    rhs = math.sqrt(max(triple.A, 0.0))
    if triple.A == 0.0 and triple.B == 0.0:
        ratio = None
        vac = True
    elif triple.A == 0.0:
        raise QuadratureInconsistencyError(
            "A = 0 with B > 0: inconsistent quadrature for a nonzero field")
    else:
        ratio = lhs / rhs
        vac = c == 0.0
    fp = build_fingerprint(check_name, spec, qn, f.label, alpha, settings)
    return _inequality_report(
        check_name, lhs, rhs, ratio, tolerances.inequality_slack,
        tolerances.strictness_margin, triple.route, fp, vac,
        details={"A": triple.A, "B": triple.B, "constant": c, "alpha": float(alpha)})


def verify_uncertainty(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                       settings: QuadratureSettings = DEFAULT_SETTINGS,
                       tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                       route: str = "auto") -> IdentityReport:
    """Check the uncertainty-type inequality ||f||^2 <= 2/(Q-2) ||Rf|| |||x| f||."""
    keys = ["l2", ("A", 0.0), "x2l2"]
    vals, used = norm_quantities(spec, qn, f, settings, keys, route)
    l2 = vals["l2"]
    lhs = l2
    rhs = 2.0 / (spec.Q - 2.0) * math.sqrt(max(vals[("A", 0.0)], 0.0)) \
        * math.sqrt(max(vals["x2l2"], 0.0))
    if l2 == 0.0:
        ratio = None
        vac = True
    else:
        ratio = lhs / rhs if rhs > 0.0 else math.inf
        vac = False
    fp = build_fingerprint("uncertainty", spec, qn, f.label, None, settings)
    return _inequality_report(
        "uncertainty", lhs, rhs, ratio, tolerances.inequality_slack,
        tolerances.strictness_margin, used, fp, vac,
        details={"l2": l2, "rf_l2": vals[("A", 0.0)], "xf_l2": vals["x2l2"]})


def verify_schwarz_step(spec: GroupSpec, f: ScalarField, sample_points: Array,
                        settings: QuadratureSettings = DEFAULT_SETTINGS,
                        tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                        ) -> IdentityReport:
    """Isotropic euclidean only: |R f(x)| <= |grad f(x)| pointwise.

    For the euclidean gauge R f = (x / |x|) . grad f, so the bound is
    Cauchy-Schwarz and holds with equality exactly for radial fields.  The
    integrated consequence ||Rf|| <= || |grad f| || is checked alongside.
    """
    if not spec.is_isotropic:
        raise IncompatibleNormError(
            "the pointwise Schwarz bound is specific to the isotropic euclidean gauge")
    qn = QuasiNorm("euclidean", spec)
    pts, _ = _as_points(sample_points, spec.n)
    r = np.asarray(qn.value(pts))
    if np.any(r == 0.0):
        raise ValueError("sample points must avoid the origin")
    parts = np.asarray(f.partials(pts))
    grad_norm = np.sqrt(np.sum(np.abs(parts) ** 2, axis=-1))
    ef = np.sum(pts * parts, axis=-1)  # nu = 1 everywhere
    rf = np.abs(ef) / r

    worst = float(np.max(rf - grad_norm))
    scale = max(1.0, float(np.max(grad_norm)))
    rel = max(0.0, worst) / scale
    equality = float(np.max(np.abs(rf - grad_norm))) <= tolerances.schwarz_pointwise * scale

    details: dict = {"samples": int(pts.shape[0]), "equality_detected": equality}
    if f.support is not None and f.support_norm is not None \
            and f.support_norm.is_euclidean_equivalent:
        keys = [("A", 0.0), "grad2"]
        vals, used = norm_quantities(spec, qn, f, settings, keys,
                                     "radial" if (f.radial is not None
                                                  and f.radial.norm == qn) else "cartesian")
        details["integrated_lhs"] = math.sqrt(max(vals[("A", 0.0)], 0.0))
        details["integrated_rhs"] = math.sqrt(max(vals["grad2"], 0.0))
        details["integrated_route"] = used

    fp = build_fingerprint("schwarz-step", spec, None, f.label, None, settings)
    return IdentityReport(
        check_name="schwarz-step",
        lhs=float(np.max(rf)), rhs=float(np.max(grad_norm)),
        residual=max(0.0, worst), relative_residual=rel,
        tolerance=tolerances.schwarz_pointwise, passed=rel <= tolerances.schwarz_pointwise,
        route="pointwise", fingerprint=fp, details=details)


def verify_alpha_one_inequality(spec: GroupSpec, qn: QuasiNorm, f: ScalarField,
                                settings: QuadratureSettings = DEFAULT_SETTINGS,
                                tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                                route: str = "auto") -> IdentityReport:
    """The alpha = 1 case: ||f / |x|^2|| <= 2/(Q-4) || |x|^(-1) R f ||.

    Valid only for homogeneous dimension Q >= 5; below that the constant
    2/(Q-4) degenerates and the hypothesis is violated (Q = 4 in particular
    is rejected, not merely inaccurate).
    """
    _require_hypotheses(spec, qn)
    if spec.Q < 5.0:
        raise HypothesisViolationError(
            f"the alpha = 1 inequality requires Q >= 5, got Q = {spec.Q}")
    report = verify_ckn_inequality(spec, qn, f, 1.0, settings, tolerances, route,
                                   check_name="alpha-one-inequality")
    # record the textbook form of the constant alongside the generic |mu|
    details = dict(report.details)
    details["constant_2_over_Q_minus_4"] = 2.0 / (spec.Q - 4.0)
    return IdentityReport(
        check_name=report.check_name, lhs=report.lhs, rhs=report.rhs,
        residual=report.residual, relative_residual=report.relative_residual,
        tolerance=report.tolerance, passed=report.passed, route=report.route,
        fingerprint=report.fingerprint, ratio=report.ratio, strict=report.strict,
        vacuous=report.vacuous, details=details)

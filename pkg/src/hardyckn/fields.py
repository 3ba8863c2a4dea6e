"""Smooth test fields with analytic derivatives.

Fields are complex-valued functions on R^n packaged with their analytic
partial derivatives so operator checks never rely on finite differences for
the implementation side.  Quadrature-admissible fields vanish outside a
declared annulus a <= |x| <= b (0 < a) in a declared gauge; pointwise test
fields such as monomials may have support = None and are then rejected by the
integration routes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .groups import GroupSpec, QuasiNorm, _as_points, dilate
from .tolerances import DEFAULT_TOLERANCES, ToleranceProfile

Array = np.ndarray


@dataclass(frozen=True)
class RadialProfile:
    """One-dimensional profile r -> phi(r) with analytic derivative."""

    phi: Callable[[Array], Array]
    dphi: Callable[[Array], Array]
    support: tuple[float, float]

    def __post_init__(self) -> None:
        a, b = self.support
        if not (0.0 <= a < b):
            raise ValueError(f"profile support must satisfy 0 <= a < b, got {self.support}")


@dataclass(frozen=True)
class RadialPart:
    """Exact radial decomposition f(x) = phi(|x|) in the gauge `norm`."""

    norm: QuasiNorm
    phi: Callable[[Array], Array]
    dphi: Callable[[Array], Array]


@dataclass(frozen=True)
class ScalarField:
    """Complex scalar field with analytic partials.

    evaluate: points (..., n) -> complex values (...)
    partials: points (..., n) -> complex gradient (..., n)
    support:  annulus (a, b) in support_norm, or None for fields that are
              not compactly supported (pointwise checks only)
    radial:   exact radial structure, when f(x) = phi(|x|)
    hyperplane_sensitive: the field inherits reduced smoothness on
              coordinate hyperplanes from a non-smooth gauge
    """

    label: str
    evaluate: Callable[[Array], Array]
    partials: Callable[[Array], Array]
    support: tuple[float, float] | None = None
    support_norm: QuasiNorm | None = None
    radial: RadialPart | None = None
    hyperplane_sensitive: bool = False

    def __post_init__(self) -> None:
        if self.support is not None:
            a, b = self.support
            if not (0.0 < a < b < np.inf):
                raise ValueError(f"support annulus must satisfy 0 < a < b < inf, got {self.support}")
            if self.support_norm is None:
                raise ValueError("a supported field must declare its support gauge")

    def __call__(self, x) -> Array:
        return self.evaluate(np.asarray(x, dtype=float))


# -- canonical bump profile ---------------------------------------------------


def bump_profile(center: float, width: float) -> RadialProfile:
    """phi(r) = exp(-1 / (1 - t^2)) with t = (r - center) / width, 0 outside |t| < 1."""
    center = float(center)
    width = float(width)
    if width <= 0.0:
        raise ValueError("width must be positive")
    if center - width <= 0.0:
        raise ValueError("support window touching the origin is rejected")

    def phi(r):
        r = np.asarray(r, dtype=float)
        t = (r - center) / width
        inside = np.abs(t) < 1.0
        u = np.where(inside, 1.0 - t * t, 1.0)
        return np.where(inside, np.exp(-1.0 / u), 0.0)

    def dphi(r):
        r = np.asarray(r, dtype=float)
        t = (r - center) / width
        inside = np.abs(t) < 1.0
        u = np.where(inside, 1.0 - t * t, 1.0)
        val = np.exp(-1.0 / u)
        return np.where(inside, -2.0 * t / (width * u * u) * val, 0.0)

    return RadialProfile(phi=phi, dphi=dphi, support=(center - width, center + width))


def _radial_scalar_field(qn: QuasiNorm, phi, dphi, support, label) -> ScalarField:
    def evaluate(x):
        pts, single = _as_points(x, qn.group.n)
        v = np.asarray(phi(qn.value(pts)), dtype=complex)
        return v[0] if single else v

    def partials(x):
        pts, single = _as_points(x, qn.group.n)
        r = np.asarray(qn.value(pts))
        g = np.asarray(dphi(r), dtype=complex)[..., None] * qn.gradient(pts)
        return g[0] if single else g

    return ScalarField(
        label=label,
        evaluate=evaluate,
        partials=partials,
        support=support,
        support_norm=qn,
        radial=RadialPart(norm=qn, phi=phi, dphi=dphi),
        hyperplane_sensitive=qn.hyperplane_singular,
    )


def radial_bump(qn: QuasiNorm, center: float, width: float,
                label: str | None = None) -> ScalarField:
    """Smooth bump f(x) = phi(|x|) supported on center - width <= |x| <= center + width."""
    prof = bump_profile(center, width)
    name = label or f"bump_c{center:g}_w{width:g}"
    return _radial_scalar_field(qn, prof.phi, prof.dphi, prof.support, name)


# -- phase wrap ---------------------------------------------------------------


def complex_phase_wrap(base: ScalarField, phase: Callable[[Array], Array],
                       phase_partials: Callable[[Array], Array],
                       radial_phase: tuple[Callable, Callable] | None = None,
                       label: str | None = None) -> ScalarField:
    """Multiply a field by exp(i * phase(x)) with real phase.

    The wrapped partials follow the product rule
    d_k (f e^{i theta}) = (d_k f + i f d_k theta) e^{i theta}, so |f| and all
    weighted L2 norms of |f| are unchanged.  When the base field is radial
    and the phase is radial in the same gauge, pass radial_phase =
    (theta, dtheta) to keep the exact radial decomposition.
    """

    def evaluate(x):
        pts, single = _as_points(x, base.support_norm.group.n
                                 if base.support_norm else np.asarray(x).shape[-1])
        v = np.asarray(base.evaluate(pts), dtype=complex)
        out = v * np.exp(1j * np.asarray(phase(pts), dtype=float))
        return out[0] if single else out

    def partials(x):
        pts = np.asarray(x, dtype=float)
        v = np.asarray(base.evaluate(pts), dtype=complex)
        dv = np.asarray(base.partials(pts), dtype=complex)
        th = np.asarray(phase(pts), dtype=float)
        dth = np.asarray(phase_partials(pts), dtype=float)
        return (dv + 1j * v[..., None] * dth) * np.exp(1j * th)[..., None]

    radial = None
    if base.radial is not None and radial_phase is not None:
        theta, dtheta = radial_phase
        bphi, bdphi = base.radial.phi, base.radial.dphi

        def wphi(r):
            return np.asarray(bphi(r), dtype=complex) * np.exp(1j * np.asarray(theta(r)))

        def wdphi(r):
            th = np.asarray(theta(r))
            return (np.asarray(bdphi(r), dtype=complex)
                    + 1j * np.asarray(bphi(r), dtype=complex) * np.asarray(dtheta(r))
                    ) * np.exp(1j * th)

        radial = RadialPart(norm=base.radial.norm, phi=wphi, dphi=wdphi)

    return ScalarField(
        label=label or f"{base.label}_phased",
        evaluate=evaluate,
        partials=partials,
        support=base.support,
        support_norm=base.support_norm,
        radial=radial,
        hyperplane_sensitive=base.hyperplane_sensitive,
    )


def phase_wrapped_bump(qn: QuasiNorm, center: float, width: float,
                       phase_scale: float = 1.0,
                       label: str | None = None) -> ScalarField:
    """Bump wrapped with the radial phase theta(x) = phase_scale * |x|."""
    base = radial_bump(qn, center, width)
    s = float(phase_scale)

    def theta_points(x):
        return s * np.asarray(qn.value(np.asarray(x, dtype=float)))

    def theta_partials(x):
        return s * qn.gradient(np.asarray(x, dtype=float))

    return complex_phase_wrap(
        base, theta_points, theta_partials,
        radial_phase=(lambda r: s * np.asarray(r, dtype=float),
                      lambda r: s * np.ones_like(np.asarray(r, dtype=float))),
        label=label or f"phased_c{center:g}_w{width:g}_s{s:g}",
    )


# -- off-radial product fields ------------------------------------------------


def product_field(qn: QuasiNorm, center: float, width: float, axis: int = 0,
                  normalized: bool = False, label: str | None = None) -> ScalarField:
    """Bump multiplied by the coordinate factor x_axis (or x_axis / |x|).

    The factor breaks radial symmetry, so integral checks on this field
    exercise the full cartesian route.  The normalized variant divides by the
    gauge, producing a factor of homogeneous order 0.
    """
    n = qn.group.n
    if not 0 <= axis < n:
        raise ValueError(f"axis {axis} out of range for n = {n}")
    prof = bump_profile(center, width)

    def evaluate(x):
        pts, single = _as_points(x, n)
        r = np.asarray(qn.value(pts))
        g = pts[:, axis]
        if normalized:
            g = np.where(r > 0.0, g / np.where(r > 0.0, r, 1.0), 0.0)
        v = np.asarray(prof.phi(r), dtype=complex) * g
        return v[0] if single else v

    def partials(x):
        pts, single = _as_points(x, n)
        r = np.asarray(qn.value(pts))
        ph = np.asarray(prof.phi(r))
        dph = np.asarray(prof.dphi(r))
        gradN = qn.gradient(pts)
        if normalized:
            rsafe = np.where(r > 0.0, r, 1.0)
            g = np.where(r > 0.0, pts[:, axis] / rsafe, 0.0)
            dg = -(pts[:, axis] / rsafe ** 2)[:, None] * gradN
            dg[:, axis] += np.where(r > 0.0, 1.0 / rsafe, 0.0)
        else:
            g = pts[:, axis]
            dg = np.zeros_like(pts)
            dg[:, axis] = 1.0
        out = (dph * g)[:, None] * gradN + ph[:, None] * dg
        out = out.astype(complex)
        return out[0] if single else out

    name = label or ("x%dnorm_bump" % axis if normalized else "x%d_bump" % axis)
    return ScalarField(
        label=f"{name}_c{center:g}_w{width:g}",
        evaluate=evaluate,
        partials=partials,
        support=prof.support,
        support_norm=qn,
        radial=None,
        hyperplane_sensitive=qn.hyperplane_singular,
    )


# -- near-extremizer family ---------------------------------------------------


def _smooth_step(u: Array) -> Array:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    gu = np.where(u > 0.0, np.exp(-1.0 / np.where(u > 0.0, u, 1.0)), 0.0)
    gv = np.where(u < 1.0, np.exp(-1.0 / np.where(u < 1.0, 1.0 - u, 1.0)), 0.0)
    return gu / (gu + gv)


def _smooth_step_derivative(u: Array) -> Array:
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    us = np.where(inside, u, 0.5)
    vs = 1.0 - us
    gu = np.exp(-1.0 / us)
    gv = np.exp(-1.0 / vs)
    dgu = gu / us ** 2
    dgv = gv / vs ** 2
    d = (dgu * gv + gu * dgv) / (gu + gv) ** 2
    return np.where(inside, d, 0.0)


def extremizer_member(qn: QuasiNorm, mu: float, a: float, b: float,
                      taper: float, label: str | None = None) -> ScalarField:
    """Near-extremizer phi(r) = r**(-mu) * w(ln r) with a smooth plateau.

    w rises from 0 at ln a to 1 over `taper` log-units, stays exactly 1 on
    the plateau, and symmetrically falls back to 0 at ln b.  On the plateau
    the field is exactly homogeneous of order -mu, which is the order the
    sharp-constant analysis singles out; as the plateau grows the field walks
    toward the (non-attained) equality case of the inequality.
    """
    a = float(a)
    b = float(b)
    mu = float(mu)
    taper = float(taper)
    if not (0.0 < a < b):
        raise ValueError("annulus must satisfy 0 < a < b")
    la, lb = np.log(a), np.log(b)
    if not (0.0 < taper < (lb - la) / 2.0):
        raise ValueError(f"taper must lie in (0, (ln b - ln a)/2), got {taper}")

    def w(t):
        t = np.asarray(t, dtype=float)
        return _smooth_step((t - la) / taper) * _smooth_step((lb - t) / taper)

    def dw(t):
        t = np.asarray(t, dtype=float)
        s1 = _smooth_step((t - la) / taper)
        s2 = _smooth_step((lb - t) / taper)
        d1 = _smooth_step_derivative((t - la) / taper) / taper
        d2 = _smooth_step_derivative((lb - t) / taper) / taper
        return d1 * s2 - s1 * d2

    def phi(r):
        r = np.asarray(r, dtype=float)
        inside = (r > a) & (r < b)
        rs = np.where(inside, r, 1.0)
        t = np.log(rs)
        return np.where(inside, rs ** (-mu) * w(t), 0.0)

    def dphi(r):
        r = np.asarray(r, dtype=float)
        inside = (r > a) & (r < b)
        rs = np.where(inside, r, 1.0)
        t = np.log(rs)
        return np.where(inside, rs ** (-mu - 1.0) * (dw(t) - mu * w(t)), 0.0)

    name = label or f"extremizer_mu{mu:g}_L{lb - la:g}_t{taper:g}"
    return _radial_scalar_field(qn, phi, dphi, (a, b), name)


# -- pointwise test fields (not compactly supported) --------------------------


def monomial_field(spec: GroupSpec, exponents: Sequence[int],
                   label: str | None = None) -> ScalarField:
    """f(x) = prod x_k**e_k; homogeneous of order sum nu_k e_k."""
    exps = np.asarray(exponents, dtype=float)
    if exps.shape != (spec.n,):
        raise ValueError("one exponent per coordinate required")

    def evaluate(x):
        pts, single = _as_points(x, spec.n)
        v = np.prod(pts ** exps, axis=-1).astype(complex)
        return v[0] if single else v

    def partials(x):
        pts, single = _as_points(x, spec.n)
        out = np.zeros_like(pts, dtype=complex)
        for k in range(spec.n):
            if exps[k] == 0.0:
                continue
            others = np.prod(np.delete(pts, k, axis=-1) ** np.delete(exps, k), axis=-1)
            out[:, k] = exps[k] * pts[:, k] ** (exps[k] - 1.0) * others
        return out[0] if single else out

    return ScalarField(
        label=label or "x^" + ",".join(f"{int(e)}" for e in exps),
        evaluate=evaluate,
        partials=partials,
    )


def power_of_norm_field(qn: QuasiNorm, exponent: float,
                        label: str | None = None) -> ScalarField:
    """f(x) = |x|**s; homogeneous of order s, singular at the origin for s < 0."""
    s = float(exponent)

    def phi(r):
        r = np.asarray(r, dtype=float)
        return r ** s

    def dphi(r):
        r = np.asarray(r, dtype=float)
        return s * r ** (s - 1.0)

    def evaluate(x):
        pts, single = _as_points(x, qn.group.n)
        v = phi(np.asarray(qn.value(pts))).astype(complex)
        return v[0] if single else v

    def partials(x):
        pts, single = _as_points(x, qn.group.n)
        r = np.asarray(qn.value(pts))
        g = dphi(r)[..., None].astype(complex) * qn.gradient(pts)
        return g[0] if single else g

    return ScalarField(
        label=label or f"norm_pow_{s:g}",
        evaluate=evaluate,
        partials=partials,
        radial=RadialPart(norm=qn, phi=phi, dphi=dphi),
        hyperplane_sensitive=qn.hyperplane_singular,
    )


def zero_field(qn: QuasiNorm, support: tuple[float, float] = (1.0, 2.0)) -> ScalarField:
    """Identically zero field with a nominal annulus; all checks degenerate."""

    def evaluate(x):
        pts, single = _as_points(x, qn.group.n)
        v = np.zeros(pts.shape[0], dtype=complex)
        return v[0] if single else v

    def partials(x):
        pts, single = _as_points(x, qn.group.n)
        g = np.zeros_like(pts, dtype=complex)
        return g[0] if single else g

    def zero(r):
        return np.zeros_like(np.asarray(r, dtype=float))

    return ScalarField(
        label="zero",
        evaluate=evaluate,
        partials=partials,
        support=support,
        support_norm=qn,
        radial=RadialPart(norm=qn, phi=zero, dphi=zero),
    )


def dilate_field(spec: GroupSpec, f: ScalarField, lam: float) -> ScalarField:
    """Pullback f o D_lam; support annulus rescales to (a/lam, b/lam)."""
    lam = float(lam)
    if lam <= 0.0:
        raise ValueError("dilation parameter must be positive")
    nu = spec.nu_array()

    def evaluate(x):
        return f.evaluate(dilate(spec, lam, np.asarray(x, dtype=float)))

    def partials(x):
        pts = np.asarray(x, dtype=float)
        return np.asarray(f.partials(dilate(spec, lam, pts))) * lam ** nu

    radial = None
    if f.radial is not None and f.radial.norm.group == spec:
        phi0, dphi0 = f.radial.phi, f.radial.dphi
        radial = RadialPart(
            norm=f.radial.norm,
            phi=lambda r: phi0(lam * np.asarray(r, dtype=float)),
            dphi=lambda r: lam * np.asarray(dphi0(lam * np.asarray(r, dtype=float))),
        )

    support = None
    if f.support is not None:
        support = (f.support[0] / lam, f.support[1] / lam)
    return replace(f, label=f"{f.label}_dil{lam:g}", evaluate=evaluate,
                   partials=partials, support=support, radial=radial)


# -- gradient self-check -------------------------------------------------------


@dataclass(frozen=True)
class GradientCheckReport:
    """Central-difference validation of a field's analytic partials."""

    errors_by_step: tuple[tuple[float, float], ...]  # (h, max relative error)
    observed_order: float | None                     # log-log slope, None if errors vanish
    max_error_at_reference_step: float
    reference_step: float
    passed: bool


def gradient_selfcheck(f: ScalarField, samples: Array,
                       steps: Sequence[float] | None = None,
                       tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                       ) -> GradientCheckReport:
    """Compare analytic partials against central differences over a step sweep.

    The relative error per sample compares gradient vectors in norm, with a
    floor so exact zeros (outside the support) do not divide by zero.  The
    observed order is the log-log slope of max error vs step over the sweep;
    steps are kept inside the configured window and above the rounding knee.
    """
    lo, hi = tolerances.fd_window
    if steps is None:
        steps = tuple(np.geomspace(max(lo, 1e-4), hi, 5))
    for h in steps:
        if not (lo <= h <= hi):
            raise ValueError(f"step {h} outside the configured window {tolerances.fd_window}")

    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2:
        raise ValueError("samples must have shape (m, n)")
    m, n = pts.shape
    analytic = np.asarray(f.partials(pts))
    a_norm = np.linalg.norm(analytic, axis=-1)
    floor = 1e-12 * (1.0 + float(np.max(a_norm, initial=0.0)))

    def max_rel_error(h: float) -> float:
        fd = np.empty_like(analytic)
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            fd[:, k] = (np.asarray(f.evaluate(pts + e)) - np.asarray(f.evaluate(pts - e))) / (2.0 * h)
        diff = np.linalg.norm(fd - analytic, axis=-1)
        denom = np.maximum(np.maximum(a_norm, np.linalg.norm(fd, axis=-1)), floor)
        return float(np.max(diff / denom))

    pairs = tuple((float(h), max_rel_error(float(h))) for h in steps)
    errs = np.array([e for _, e in pairs])
    hs = np.array([h for h, _ in pairs])

    observed: float | None
    if np.all(errs > 0.0):
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        observed = float(slope)
    else:
        observed = None  # errors at rounding floor or field identically zero

    h_ref = tolerances.fd_step
    ref_err = max_rel_error(h_ref) if not np.allclose(a_norm, 0.0) else 0.0
    passed = ref_err <= 1e-6 and (observed is None or observed >= tolerances.fd_order_min)
    return GradientCheckReport(
        errors_by_step=pairs,
        observed_order=observed,
        max_error_at_reference_step=ref_err,
        reference_step=h_ref,
        passed=passed,
    )


# -- deterministic sample generation ------------------------------------------


def annulus_samples(qn: QuasiNorm, a: float, b: float, count: int, seed: int,
                    shrink: float = 0.02,
                    band: float = DEFAULT_TOLERANCES.exclusion_band) -> Array:
    """Deterministic points with a(1+shrink) <= |x| <= b(1-shrink).

    Points too close to a coordinate hyperplane (within band * |x|**nu_k)
    are discarded so sampled operator checks stay inside the smooth region
    of every implemented gauge.
    """
    if not (0.0 < a < b):
        raise ValueError("annulus must satisfy 0 < a < b")
    rng = np.random.default_rng(seed)
    ext = qn.ball_extents(b)
    lo_r, hi_r = a * (1.0 + shrink), b * (1.0 - shrink)
    out = []
    need = int(count)
    attempts = 0
    while need > 0:
        attempts += 1
        if attempts > 200:
            raise RuntimeError("annulus sampling failed to reach the requested count")
        cand = rng.uniform(-ext, ext, size=(max(4 * need, 64), qn.group.n))
        r = np.asarray(qn.value(cand))
        keep = (r >= lo_r) & (r <= hi_r)
        cand, r = cand[keep], r[keep]
        if cand.size:
            limits = band * r[:, None] ** qn.group.nu_array()
            keep = np.all(np.abs(cand) >= limits, axis=-1)
            cand = cand[keep]
        take = cand[:need]
        if take.size:
            out.append(take)
            need -= take.shape[0]
    return np.concatenate(out, axis=0)

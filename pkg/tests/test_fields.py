"""Test-function families: supports, analytic partials, and the plateau
near-extremizers.  Every analytic gradient is gated against central
differences, which is the one oracle the field constructors cannot share."""

from __future__ import annotations

import math

import numpy as np
import pytest

from hardyckn import (
    GroupSpec,
    QuasiNorm,
    ScalarField,
    annulus_samples,
    bump_profile,
    complex_phase_wrap,
    dilate_field,
    extremizer_member,
    gradient_selfcheck,
    norm_quantities,
    phase_wrapped_bump,
    product_field,
    radial_bump,
    rayleigh_quotient,
    weighted_norm_triple,
    zero_field,
)


def exterior_probe_points(qn, a, b, count=100, seed=41):
    """Points outside the annulus [a, b]: half inside the hole, half beyond."""
    rng = np.random.default_rng(seed)
    n = qn.group.n
    inner = rng.uniform(-1.0, 1.0, size=(count, n))
    r = np.asarray(qn.value(inner))
    r[r == 0.0] = 1.0
    # rescale gauge-radially so the norm lands in (0, a) or (b, 2b)
    targets = np.concatenate([rng.uniform(0.05 * a, 0.95 * a, count // 2),
                              rng.uniform(1.05 * b, 2.0 * b, count - count // 2)])
    nu = qn.group.nu_array()
    scale = (targets / r)[:, None] ** nu
    return inner * scale


# -- bump profile -------------------------------------------------------------


def test_bump_center_value(psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    # exponent is exactly -1 at the center of the window
    assert abs(complex(f.evaluate((2.0, 0.0, 0.0))) - math.exp(-1.0)) <= 1e-12
    assert abs(math.exp(-1.0) - 0.3678794412) <= 5e-11


def test_bump_vanishes_at_window_edges(psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    assert complex(f.evaluate((1.0, 0.0, 0.0))) == 0.0
    assert complex(f.evaluate((3.0, 0.0, 0.0))) == 0.0


def test_bump_window_touching_origin_rejected(psum2_iso3):
    with pytest.raises(ValueError):
        radial_bump(psum2_iso3, 1.0, 1.0)
    with pytest.raises(ValueError):
        bump_profile(0.5, 1.0)


@pytest.mark.parametrize("norm_fixture", ["psum2_iso3", "koranyi", "psum4_aniso"])
def test_fields_vanish_outside_their_annulus(norm_fixture, request):
    qn = request.getfixturevalue(norm_fixture)
    for f in (radial_bump(qn, 2.0, 1.0),
              phase_wrapped_bump(qn, 2.0, 1.0, phase_scale=1.5),
              product_field(qn, 2.0, 1.0, axis=0)):
        a, b = f.support
        pts = exterior_probe_points(qn, a, b)
        assert np.all(np.asarray(f.evaluate(pts)) == 0.0)
        assert np.all(np.asarray(f.partials(pts)) == 0.0)


# -- gradient self-check ------------------------------------------------------


@pytest.mark.parametrize("norm_fixture", ["psum2_iso3", "koranyi", "psum2_aniso"])
def test_analytic_partials_match_central_differences(norm_fixture, request):
    qn = request.getfixturevalue(norm_fixture)
    fields = [
        radial_bump(qn, 2.0, 1.0),
        phase_wrapped_bump(qn, 2.0, 1.0, phase_scale=1.5),
        product_field(qn, 2.0, 1.0, axis=0),
        extremizer_member(qn, 1.0, 0.5, 8.0, taper=0.7),
    ]
    for f in fields:
        a, b = f.support
        pts = annulus_samples(qn, a, b, 50, seed=43)
        rep = gradient_selfcheck(f, pts)
        assert rep.passed, (f.label, rep.max_error_at_reference_step)
        assert rep.max_error_at_reference_step <= 1e-6
        assert rep.observed_order is None or rep.observed_order >= 1.8


def test_gradient_selfcheck_flags_corrupted_partials(psum2_iso3):
    base = radial_bump(psum2_iso3, 2.0, 1.0)
    broken = ScalarField(
        label="broken",
        evaluate=base.evaluate,
        partials=lambda x: 1.5 * np.asarray(base.partials(x)),
        support=base.support,
        support_norm=base.support_norm,
    )
    pts = annulus_samples(psum2_iso3, 1.1, 2.9, 30, seed=47)
    rep = gradient_selfcheck(broken, pts)
    assert not rep.passed
    assert rep.max_error_at_reference_step > 1e-2


def test_gradient_selfcheck_zero_field(psum2_iso3):
    pts = annulus_samples(psum2_iso3, 1.0, 2.0, 10, seed=53)
    rep = gradient_selfcheck(zero_field(psum2_iso3), pts)
    assert rep.passed
    assert rep.max_error_at_reference_step == 0.0
    assert rep.observed_order is None


def test_gradient_selfcheck_rejects_steps_outside_window(psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    pts = annulus_samples(psum2_iso3, 1.1, 2.9, 5, seed=59)
    with pytest.raises(ValueError):
        gradient_selfcheck(f, pts, steps=(0.5,))


# -- phase wraps ---------------------------------------------------------------


def test_zero_phase_wrap_is_identity(psum2_iso3):
    base = radial_bump(psum2_iso3, 2.0, 1.0)
    wrapped = complex_phase_wrap(base,
                                 lambda x: np.zeros(np.asarray(x).shape[:-1]),
                                 lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    pts = annulus_samples(psum2_iso3, 1.1, 2.9, 40, seed=61)
    assert np.allclose(wrapped.evaluate(pts), base.evaluate(pts), rtol=0, atol=0)
    assert np.allclose(wrapped.partials(pts), base.partials(pts), rtol=0, atol=0)


def test_phase_wrap_preserves_modulus_and_weighted_norms(heis, koranyi):
    base = radial_bump(koranyi, 2.0, 1.0)
    wrapped = phase_wrapped_bump(koranyi, 2.0, 1.0, phase_scale=1.5)
    pts = annulus_samples(koranyi, 1.1, 2.9, 60, seed=67)
    assert np.max(np.abs(np.abs(np.asarray(wrapped.evaluate(pts)))
                         - np.abs(np.asarray(base.evaluate(pts))))) <= 1e-14

    for alpha in (0.0, 0.7):
        tb = weighted_norm_triple(heis, koranyi, base, alpha)
        tw = weighted_norm_triple(heis, koranyi, wrapped, alpha)
        assert tw.B == pytest.approx(tb.B, rel=1e-13)


# -- near-extremizer family ---------------------------------------------------


def test_extremizer_boundary_and_plateau(psum2_iso3):
    a, b = math.exp(-4.0), math.exp(4.0)
    f = extremizer_member(psum2_iso3, 0.5, a, b, taper=1.0)
    prof = f.radial
    for r in (a, b, 0.5 * a, 2.0 * b):
        assert float(np.abs(prof.phi(r))) == 0.0
    # exact power law on the plateau
    r = np.geomspace(math.exp(-2.5), math.exp(2.5), 20)
    assert np.max(np.abs(np.asarray(prof.phi(r)) - r ** -0.5)) <= 1e-14


def test_extremizer_invalid_taper(psum2_iso3):
    with pytest.raises(ValueError):
        extremizer_member(psum2_iso3, 0.5, 1.0, math.exp(2.0), taper=1.5)
    with pytest.raises(ValueError):
        extremizer_member(psum2_iso3, 0.5, 1.0, 4.0, taper=0.0)


def test_extremizer_quotient_exceeds_sharp_square(iso3, psum2_iso3):
    from hardyckn import RadialProfile
    f = extremizer_member(psum2_iso3, 0.5, math.exp(-8.0), math.exp(8.0), taper=1.0)
    prof = RadialProfile(phi=f.radial.phi, dphi=f.radial.dphi, support=f.support)
    q = rayleigh_quotient(iso3, 0.0, prof)
    assert q > 0.25  # the windowed quotient sits strictly above mu**2 = 1/4


def test_extremizer_weighted_norm_grows_with_plateau(iso3, psum2_iso3):
    # B scales like the plateau length at the critical exponent, so it must
    # climb monotonically along a doubling ladder of log-lengths
    mu = 0.5
    values = []
    for half_length in (2.0, 4.0, 8.0):
        f = extremizer_member(psum2_iso3, mu, math.exp(-half_length),
                              math.exp(half_length), taper=1.0)
        triple = weighted_norm_triple(iso3, psum2_iso3, f, 0.0)
        values.append(triple.B)
    assert values[0] < values[1] < values[2]
    # increments per added log-unit stabilize, matching linear growth
    inc1 = values[1] - values[0]
    inc2 = values[2] - values[1]
    assert inc2 == pytest.approx(2.0 * inc1, rel=0.2)


# -- pullbacks and sampling ----------------------------------------------------


def test_dilate_field_is_the_pullback(iso3, psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    g = dilate_field(iso3, f, 2.0)
    assert g.support == (0.5, 1.5)
    pts = annulus_samples(psum2_iso3, 0.55, 1.45, 30, seed=71)
    from hardyckn import dilate
    assert np.allclose(np.asarray(g.evaluate(pts)),
                       np.asarray(f.evaluate(dilate(iso3, 2.0, pts))),
                       rtol=0, atol=0)
    rep = gradient_selfcheck(g, pts)
    assert rep.passed


def test_dilate_field_rejects_nonpositive_scale(iso3, psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    with pytest.raises(ValueError):
        dilate_field(iso3, f, 0.0)


def test_annulus_samples_deterministic_and_in_range(koranyi):
    a, b, count = 0.8, 3.0, 64
    pts1 = annulus_samples(koranyi, a, b, count, seed=77)
    pts2 = annulus_samples(koranyi, a, b, count, seed=77)
    assert np.array_equal(pts1, pts2)
    assert pts1.shape == (count, 3)
    r = np.asarray(koranyi.value(pts1))
    assert np.all(r >= a * 1.02 - 1e-12) and np.all(r <= b * 0.98 + 1e-12)
    other = annulus_samples(koranyi, a, b, count, seed=78)
    assert not np.array_equal(pts1, other)


def test_annulus_samples_avoid_hyperplanes_when_gauge_is_singular(psum2_aniso):
    # p / nu_3 = 2/3 < 1 kinks the gauge on x3 = 0; samples keep clear
    assert psum2_aniso.hyperplane_singular
    pts = annulus_samples(psum2_aniso, 0.8, 3.0, 64, seed=79)
    r = np.asarray(psum2_aniso.value(pts))
    nu = psum2_aniso.group.nu_array()
    limits = 1e-8 * r[:, None] ** nu
    assert np.all(np.abs(pts) >= limits)


def test_annulus_samples_validates_bounds(psum2_iso3):
    with pytest.raises(ValueError):
        annulus_samples(psum2_iso3, 2.0, 1.0, 8, seed=1)


# -- support declaration guards -----------------------------------------------


def test_scalar_field_requires_consistent_support(psum2_iso3):
    with pytest.raises(ValueError):
        ScalarField(label="bad", evaluate=lambda x: x, partials=lambda x: x,
                    support=(2.0, 1.0), support_norm=psum2_iso3)
    with pytest.raises(ValueError):
        ScalarField(label="bad", evaluate=lambda x: x, partials=lambda x: x,
                    support=(1.0, 2.0))  # support without a gauge


def test_norm_quantities_requires_support(iso3, psum2_iso3):
    f = ScalarField(label="unsupported", evaluate=lambda x: x,
                    partials=lambda x: x)
    with pytest.raises(ValueError):
        norm_quantities(iso3, psum2_iso3, f, keys=["l2"])

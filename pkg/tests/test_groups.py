"""Dilation structures, gauges, and the Euler/radial operators.

Point values below are closed forms worked out by hand; operator checks are
cross-validated against dilation-ray finite differences, which share no code
with the analytic path.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardyckn import (
    GroupSpec,
    IncompatibleNormError,
    QuasiNorm,
    annulus_samples,
    check_homogeneity,
    dilate,
    dilation_jacobian,
    euler_apply,
    euler_finite_difference,
    extremizer_member,
    homogeneous_dimension,
    monomial_field,
    power_of_norm_field,
    quasi_norm,
    radial_bump,
    radial_derivative,
)

finite_scale = st.floats(min_value=0.05, max_value=20.0,
                         allow_nan=False, allow_infinity=False)
coordinate = st.floats(min_value=-8.0, max_value=8.0,
                       allow_nan=False, allow_infinity=False)


# -- structure basics ---------------------------------------------------------


def test_homogeneous_dimension_sums_exponents(iso3, heis, aniso):
    assert homogeneous_dimension(iso3) == 3.0
    assert homogeneous_dimension(heis) == 4.0
    assert homogeneous_dimension(aniso) == 6.0
    assert iso3.Q == 3.0 and heis.Q == 4.0 and aniso.Q == 6.0


def test_group_spec_rejects_bad_exponents():
    with pytest.raises(ValueError):
        GroupSpec(nu=(1.0, 0.0))
    with pytest.raises(ValueError):
        GroupSpec(nu=(1.0, -2.0))
    with pytest.raises(ValueError):
        GroupSpec(nu=())


def test_non_integer_exponents_allowed():
    spec = GroupSpec(nu=(1.0, 1.5))
    assert spec.Q == 2.5
    qn = QuasiNorm("p-sum", spec, p=2.0)
    # |x|**(p/nu) uses absolute values, so negative coordinates stay real
    assert np.isfinite(qn.value((-1.0, -2.0)))


def test_dilate_point_examples():
    spec = GroupSpec(nu=(1.0, 2.0))
    assert np.allclose(dilate(spec, 2.0, (3.0, 5.0)), (6.0, 20.0))
    heis = GroupSpec(nu=(1.0, 1.0, 2.0))
    assert np.allclose(dilate(heis, 3.0, (1.0, 0.0, 1.0)), (3.0, 0.0, 9.0))
    x = np.array([0.3, -1.2, 4.0])
    assert np.array_equal(dilate(heis, 1.0, x), x)


def test_dilate_rejects_nonpositive_scale(iso3):
    with pytest.raises(ValueError):
        dilate(iso3, 0.0, (1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        dilate(iso3, -2.0, (1.0, 0.0, 0.0))


@given(lam=finite_scale, mu=finite_scale, x1=coordinate, x2=coordinate,
       x3=coordinate)
def test_dilation_composition_and_jacobian(lam, mu, x1, x2, x3):
    spec = GroupSpec(nu=(1.0, 2.0, 3.0))
    x = np.array([x1, x2, x3])
    left = dilate(spec, lam, dilate(spec, mu, x))
    right = dilate(spec, lam * mu, x)
    scale = max(1.0, float(np.max(np.abs(right))))
    assert np.max(np.abs(left - right)) <= 1e-12 * scale
    jac = dilation_jacobian(spec, lam)
    assert abs(jac - lam ** spec.Q) <= 1e-12 * max(1.0, lam ** spec.Q)


# -- quasi-norms --------------------------------------------------------------


def test_quasi_norm_point_examples(heis, koranyi):
    assert quasi_norm(koranyi, (0.0, 0.0, 1.0)) == pytest.approx(1.0, abs=1e-15)
    assert quasi_norm(koranyi, (1.0, 0.0, 0.0)) == pytest.approx(1.0, abs=1e-15)
    iso = GroupSpec(nu=(1.0, 1.0, 1.0))
    p2 = QuasiNorm("p-sum", iso, p=2.0)
    assert quasi_norm(p2, (3.0, 4.0, 0.0)) == pytest.approx(5.0, rel=1e-15)
    spec12 = GroupSpec(nu=(1.0, 2.0))
    qn12 = QuasiNorm("p-sum", spec12, p=2.0)
    assert quasi_norm(qn12, (0.0, 9.0)) == pytest.approx(3.0, rel=1e-15)


def test_koranyi_closed_form(heis, koranyi):
    # ((x1^2 + x2^2)^2 + x3^2)^(1/4) at a generic point
    x = (1.2, -0.7, 2.5)
    expected = ((1.2 ** 2 + 0.7 ** 2) ** 2 + 2.5 ** 2) ** 0.25
    assert quasi_norm(koranyi, x) == pytest.approx(expected, rel=1e-15)


def test_max_norm_family(aniso):
    qn = QuasiNorm("max", aniso)
    # max(|x1|, |x2|^(1/2), |x3|^(1/3))
    assert quasi_norm(qn, (0.5, 9.0, 0.0)) == pytest.approx(3.0, rel=1e-15)
    assert quasi_norm(qn, (0.0, 0.0, -8.0)) == pytest.approx(2.0, rel=1e-15)


def test_family_compatibility_guards(iso3, aniso):
    with pytest.raises(IncompatibleNormError):
        QuasiNorm("koranyi", iso3)          # needs nu = (1, 1, 2)
    with pytest.raises(IncompatibleNormError):
        QuasiNorm("euclidean", aniso)       # needs isotropic exponents
    with pytest.raises(ValueError):
        QuasiNorm("p-sum", iso3)            # p-sum without p
    with pytest.raises(ValueError):
        QuasiNorm("p-sum", iso3, p=-1.0)


@pytest.mark.parametrize("family,p", [("p-sum", 2.0), ("p-sum", 4.0),
                                      ("max", None)])
def test_quasi_norm_axioms_on_samples(aniso, family, p):
    qn = QuasiNorm(family, aniso, p=p)
    rng = np.random.default_rng(7)
    pts = rng.uniform(-3.0, 3.0, size=(100, 3))
    lams = rng.uniform(0.1, 10.0, size=100)
    r = np.asarray(qn.value(pts))
    assert np.all(r > 0.0)
    # |D_lam x| = lam |x| to near machine accuracy
    for x, lam in zip(pts, lams):
        lhs = float(qn.value(dilate(aniso, lam, x)))
        rhs = lam * float(qn.value(x))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)
    # symmetry under negation (the group inverse in these coordinates)
    assert np.allclose(np.asarray(qn.value(-pts)), r, rtol=0.0, atol=0.0)
    assert float(qn.value(np.zeros(3))) == 0.0


def test_ball_extents_cover_the_ball(koranyi, psum2_aniso):
    rng = np.random.default_rng(11)
    for qn in (koranyi, psum2_aniso):
        ext = qn.ball_extents(2.0)
        pts = rng.uniform(-ext, ext, size=(500, 3))
        r = np.asarray(qn.value(pts))
        inside = pts[r <= 2.0]
        assert np.all(np.abs(inside) <= ext + 1e-12)
        # the extents are attained along the axes, so they are not padded
        for k in range(3):
            axis_pt = np.zeros(3)
            axis_pt[k] = ext[k]
            assert float(qn.value(axis_pt)) == pytest.approx(2.0, rel=1e-12)


# -- Euler and radial operators -----------------------------------------------


def test_euler_apply_homogeneous_monomials(iso3, heis):
    f3 = monomial_field(iso3, (2, 1, 0))
    assert complex(euler_apply(iso3, f3, (1.0, 1.0, 1.0))) == pytest.approx(3.0)
    fz = monomial_field(heis, (0, 0, 1))
    # x3 is homogeneous of order nu_3 = 2, so E f = 2 f = 4 at x3 = 2
    assert complex(euler_apply(heis, fz, (0.0, 0.0, 2.0))) == pytest.approx(4.0)
    const = monomial_field(iso3, (0, 0, 0))
    assert complex(euler_apply(iso3, const, (0.4, -1.0, 2.0))) == pytest.approx(0.0)


def test_euler_matches_dilation_ray_difference(iso3, psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    pts = annulus_samples(psum2_iso3, 1.1, 2.9, 20, seed=3)
    exact = np.asarray(euler_apply(iso3, f, pts))
    hs = np.geomspace(1e-4, 1e-2, 6)
    errs = []
    for h in hs:
        fd = np.asarray(euler_finite_difference(iso3, f, pts, float(h)))
        errs.append(float(np.max(np.abs(fd - exact))))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope >= 1.8


def test_radial_derivative_times_norm_equals_euler(heis, koranyi):
    f = radial_bump(koranyi, 2.0, 1.0)
    pts = annulus_samples(koranyi, 1.1, 2.9, 25, seed=5)
    r = np.asarray(koranyi.value(pts))
    rf = np.asarray(radial_derivative(heis, koranyi, f, pts))
    ef = np.asarray(euler_apply(heis, f, pts))
    assert np.max(np.abs(rf * r - ef)) <= 1e-12 * max(1.0, float(np.max(np.abs(ef))))


def test_radial_derivative_point_examples(heis, koranyi, iso3, psum2_iso3):
    # radial bump with a critical point at |x| = 2; the Koranyi gauge puts
    # (0, 0, 4) on that sphere because |(0, 0, x3)| = |x3|^(1/2)
    f = radial_bump(koranyi, 2.0, 1.0)
    assert quasi_norm(koranyi, (0.0, 0.0, 4.0)) == pytest.approx(2.0, rel=1e-15)
    assert abs(complex(radial_derivative(heis, koranyi, f, (0.0, 0.0, 4.0)))) <= 1e-14

    # the gauge itself as a field has R f = 1 off the hyperplanes
    g = power_of_norm_field(psum2_iso3, 1.0)
    pts = annulus_samples(psum2_iso3, 0.5, 3.0, 30, seed=9)
    vals = np.asarray(radial_derivative(iso3, psum2_iso3, g, pts))
    assert np.max(np.abs(vals - 1.0)) <= 1e-12


def test_radial_derivative_rejects_origin(iso3, psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    with pytest.raises(ValueError):
        radial_derivative(iso3, psum2_iso3, f, (0.0, 0.0, 0.0))


def test_homogeneous_power_has_order_times_value(iso3, psum2_iso3):
    # R f = s f / |x| for f = |x|**s, checked at s = -1
    f = power_of_norm_field(psum2_iso3, -1.0)
    pts = annulus_samples(psum2_iso3, 0.5, 3.0, 30, seed=13)
    r = np.asarray(psum2_iso3.value(pts))
    rf = np.asarray(radial_derivative(iso3, psum2_iso3, f, pts))
    expected = -1.0 * np.asarray(f.evaluate(pts)) / r
    assert np.max(np.abs(rf - expected)) <= 1e-12


# -- homogeneity report -------------------------------------------------------


def test_check_homogeneity_accepts_exact_orders(iso3, heis, psum2_iso3, koranyi):
    pts3 = annulus_samples(psum2_iso3, 0.5, 2.0, 24, seed=17)
    rep = check_homogeneity(iso3, psum2_iso3, monomial_field(iso3, (2, 1, 0)),
                            3.0, pts3, (0.5, 2.0, 3.0))
    assert rep.passed and rep.consistent
    assert rep.euler_residual <= 1e-10 and rep.scaling_residual <= 1e-9

    ptsh = annulus_samples(koranyi, 0.5, 2.0, 24, seed=19)
    rep = check_homogeneity(heis, koranyi, power_of_norm_field(koranyi, -1.0),
                            -1.0, ptsh, (0.5, 2.0))
    assert rep.passed and rep.consistent


def test_check_homogeneity_rejects_bump(iso3, psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    pts = annulus_samples(psum2_iso3, 1.2, 2.8, 24, seed=23)
    rep = check_homogeneity(iso3, psum2_iso3, f, 0.0, pts, (0.5, 2.0))
    assert not rep.passed
    assert rep.consistent  # both criteria agree the field is not homogeneous
    assert max(rep.euler_residual, rep.scaling_residual) >= 1e-2


def test_check_homogeneity_on_extremizer_plateau(iso3, psum2_iso3):
    mu = 0.5
    f = extremizer_member(psum2_iso3, mu, math.exp(-8.0), math.exp(8.0), taper=1.0)
    # samples and their test dilations stay strictly on the plateau
    pts = annulus_samples(psum2_iso3, 0.5, 1.5, 24, seed=29)
    rep = check_homogeneity(iso3, psum2_iso3, f, -mu, pts, (0.5, 2.0))
    assert rep.passed and rep.consistent
    assert rep.euler_residual <= 1e-10


def test_check_homogeneity_rejects_bad_scales(iso3, psum2_iso3):
    f = monomial_field(iso3, (1, 0, 0))
    pts = annulus_samples(psum2_iso3, 0.5, 2.0, 8, seed=31)
    with pytest.raises(ValueError):
        check_homogeneity(iso3, psum2_iso3, f, 1.0, pts, (0.5, -2.0))

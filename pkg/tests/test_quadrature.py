"""Integration engines and the sphere-measure constant.

The sphere constants have closed forms that the package never uses: for the
p-sum gauge the unit-ball volume is a product of Gamma factors, so

    S = Q * 2**n * prod_k Gamma(1 + nu_k / p) / Gamma(1 + Q / p)

(differentiating vol(ball of radius R) = R**Q * vol(unit ball)); the
fourth-power gauge on nu = (1, 1, 2) gives S = 2 pi**2 by direct polar
integration, and the euclidean gauge gives the classical sphere area.
These are computed here from scratch and used as frozen oracles against the
two-bump ratio derivation.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from hardyckn import (
    GroupSpec,
    QuadratureDomainError,
    QuadratureSettings,
    QuasiNorm,
    box_covers_ball,
    bump_profile,
    derive_sphere_constant,
    integrate_cartesian,
    integrate_radial,
    mc_integrate,
    radial_bump,
    sphere_constant,
)
from hardyckn.quadrature import _axis_rule


def psum_sphere_constant(nu, p):
    """Closed-form S for the p-sum gauge, via the Gamma-product ball volume."""
    Q = sum(nu)
    n = len(nu)
    vol = 2.0 ** n * math.prod(math.gamma(1.0 + v / p) for v in nu) \
        / math.gamma(1.0 + Q / p)
    return Q * vol


# -- radial Gauss-Legendre -----------------------------------------------------


def test_polynomial_exactness_on_panel_rule():
    val = integrate_radial(lambda r: r ** 2, (0.5, 1.0), 0.0)
    assert val == pytest.approx((1.0 - 0.125) / 3.0, rel=1e-15)
    # weight exponent folds in exactly: integral of r**3 = r * r**2
    val = integrate_radial(lambda r: r, (0.5, 1.0), 2.0)
    assert val == pytest.approx((1.0 - 0.0625) / 4.0, rel=1e-15)


def test_high_degree_polynomial_is_exact():
    rng = np.random.default_rng(83)
    coeffs = rng.uniform(-2.0, 2.0, size=16)  # degree 15 < 2 * 16 - 1
    poly = np.polynomial.Polynomial(coeffs)
    exact = poly.integ()(2.0) - poly.integ()(0.5)
    val = integrate_radial(poly, (0.5, 2.0), 0.0)
    assert val == pytest.approx(exact, rel=1e-14)


def test_zero_integrand():
    assert integrate_radial(lambda r: np.zeros_like(r), (0.5, 2.0), 3.0) == 0.0


def test_radial_domain_guards():
    with pytest.raises(QuadratureDomainError):
        integrate_radial(lambda r: r, (-1.0, 1.0), 0.0)
    with pytest.raises(QuadratureDomainError):
        integrate_radial(lambda r: r, (0.0, 1.0), -2.0)  # unbounded weight
    with pytest.raises(QuadratureDomainError):
        integrate_radial(lambda r: r, (0.0, 1.0), 1.0, spacing="log")
    with pytest.raises(ValueError):
        integrate_radial(lambda r: r, (0.5, 1.0), 0.0, spacing="cubic")


def test_complex_integrand_rejected():
    with pytest.raises(ValueError):
        integrate_radial(lambda r: r * 1j, (0.5, 1.0), 0.0)


def test_panel_doubling_is_converged():
    prof = bump_profile(2.0, 1.0)
    base = QuadratureSettings()
    fine = QuadratureSettings(panels=2 * base.panels,
                              nodes_per_panel=base.nodes_per_panel)
    v1 = integrate_radial(lambda r: prof.phi(r) ** 2, prof.support, 3.0, base)
    v2 = integrate_radial(lambda r: prof.phi(r) ** 2, prof.support, 3.0, fine)
    assert abs(v1 - v2) < 1e-12 * max(1.0, abs(v1))


def test_log_spacing_matches_linear_on_smooth_integrand():
    prof = bump_profile(2.0, 1.0)
    lin = integrate_radial(prof.phi, prof.support, 2.0)
    log = integrate_radial(prof.phi, prof.support, 2.0, spacing="log")
    assert log == pytest.approx(lin, rel=1e-12)


# -- axis rules and cartesian grids ---------------------------------------------


def test_axis_rule_splits_at_zero():
    x, w = _axis_rule(-1.0, 2.0, 16)
    assert np.all(x != 0.0)
    # |x| is integrated exactly once the kink sits at a segment endpoint
    val = float(np.dot(w, np.abs(x)))
    assert val == pytest.approx(2.5, rel=1e-14)
    # fractional powers keep fast endpoint convergence
    x, w = _axis_rule(-1.0, 2.0, 161)
    val = float(np.dot(w, np.abs(x) ** (2.0 / 3.0)))
    exact = (3.0 / 5.0) * (1.0 + 2.0 ** (5.0 / 3.0))
    assert val == pytest.approx(exact, rel=1e-6)


def test_axis_rule_plain_segment_when_zero_not_interior():
    x, w = _axis_rule(0.5, 2.0, 12)
    assert len(x) == 12
    assert float(np.dot(w, x ** 3)) == pytest.approx((16.0 - 0.0625) / 4.0,
                                                     rel=1e-14)


def test_cartesian_box_cover_guard(iso3, psum2_iso3):
    f = radial_bump(psum2_iso3, 2.0, 1.0)
    small_box = [(-1.0, 1.0)] * 3  # support reaches |x| = 3
    assert not box_covers_ball(small_box, psum2_iso3, 3.0)
    with pytest.raises(QuadratureDomainError):
        integrate_cartesian(lambda p: np.abs(np.asarray(f.evaluate(p))),
                            small_box, cover=(psum2_iso3, 3.0))


def test_cartesian_matches_scaled_radial_for_euclidean_bump(iso3, euclid3,
                                                            fast_settings):
    prof = bump_profile(2.0, 1.0)
    f = radial_bump(euclid3, 2.0, 1.0)
    box = [(-3.0, 3.0)] * 3
    cart = integrate_cartesian(
        lambda p: np.abs(np.asarray(f.evaluate(p))) ** 2, box, fast_settings,
        cover=(euclid3, 3.0))
    radial = integrate_radial(lambda r: prof.phi(r) ** 2, prof.support, 2.0,
                              fast_settings)
    assert cart == pytest.approx(4.0 * math.pi * radial, rel=1e-6)


def test_cartesian_dimension_guard():
    spec = GroupSpec(nu=(1.0,) * 4)
    qn = QuasiNorm("p-sum", spec, p=2.0)
    f = radial_bump(qn, 2.0, 1.0)
    box = [(-3.0, 3.0)] * 4
    with pytest.raises(QuadratureDomainError):
        integrate_cartesian(lambda p: np.abs(np.asarray(f.evaluate(p))), box)


# -- Monte Carlo ----------------------------------------------------------------


def test_mc_reproducible_under_fixed_seed(fast_settings):
    box = [(-1.0, 1.0)] * 3
    g = lambda p: np.exp(-np.sum(p * p, axis=-1))
    r1 = mc_integrate(g, box, fast_settings)
    r2 = mc_integrate(g, box, fast_settings)
    assert r1.value == r2.value and r1.standard_error == r2.standard_error
    other = QuadratureSettings(mc_samples=fast_settings.mc_samples,
                               mc_seed=fast_settings.mc_seed + 1)
    assert mc_integrate(g, box, other).value != r1.value


def test_mc_constant_integrand_has_zero_variance(fast_settings):
    box = [(0.0, 2.0), (-1.0, 3.0)]
    res = mc_integrate(lambda p: np.full(p.shape[0], 2.5), box, fast_settings)
    assert res.value == pytest.approx(2.5 * 8.0, rel=1e-12)
    assert res.standard_error <= 1e-12


def test_mc_within_three_sigma_of_known_volume(fast_settings):
    # volume of the euclidean unit ball in R^3 = 4 pi / 3
    box = [(-1.0, 1.0)] * 3
    g = lambda p: (np.sum(p * p, axis=-1) <= 1.0).astype(float)
    res = mc_integrate(g, box, fast_settings)
    assert res.standard_error > 0.0
    assert abs(res.value - 4.0 * math.pi / 3.0) <= 3.0 * res.standard_error


def test_mc_box_guards(fast_settings):
    with pytest.raises(QuadratureDomainError):
        mc_integrate(lambda p: p[:, 0], [], fast_settings)
    with pytest.raises(QuadratureDomainError):
        mc_integrate(lambda p: p[:, 0], [(1.0, 1.0)], fast_settings)


# -- sphere-measure constant -----------------------------------------------------


def test_sphere_constant_euclidean_is_classical_area(iso3, euclid3):
    smc = derive_sphere_constant(iso3, euclid3)
    assert smc.value == pytest.approx(4.0 * math.pi, rel=1e-4)
    assert smc.discrepancy <= 1e-4
    assert smc.reference_values[0] == pytest.approx(smc.reference_values[1],
                                                    rel=2e-4)


def test_sphere_constant_dimension_one_is_two():
    spec = GroupSpec(nu=(1.0,))
    qn = QuasiNorm("p-sum", spec, p=2.0)
    smc = derive_sphere_constant(spec, qn)
    assert smc.value == pytest.approx(2.0, rel=1e-10)


@pytest.mark.parametrize("nu,p", [
    ((1.0, 1.0, 1.0), 2.0),
    ((1.0, 1.0, 1.0), 4.0),
    ((1.0, 2.0, 3.0), 2.0),
    ((1.0, 2.0, 3.0), 4.0),
    ((1.0, 1.0, 2.0), 2.0),
])
def test_sphere_constant_matches_gamma_product(nu, p):
    spec = GroupSpec(nu=nu)
    qn = QuasiNorm("p-sum", spec, p=p)
    expected = psum_sphere_constant(nu, p)
    smc = derive_sphere_constant(spec, qn)
    assert smc.value == pytest.approx(expected, rel=1e-5)
    assert smc.discrepancy <= 1e-4


def test_sphere_constant_koranyi_closed_form(heis, koranyi):
    # polar integration of the fourth-power gauge gives exactly 2 pi**2
    smc = derive_sphere_constant(heis, koranyi)
    assert smc.value == pytest.approx(2.0 * math.pi ** 2, rel=1e-5)


def test_sphere_constant_cached_lookup(iso3, psum2_iso3):
    s1 = sphere_constant(iso3, psum2_iso3)
    s2 = sphere_constant(iso3, psum2_iso3)
    assert s1 == s2
    assert s1 == pytest.approx(4.0 * math.pi, rel=1e-5)


def test_sphere_constant_high_dimension_euclidean_closed_form():
    spec = GroupSpec(nu=(1.0,) * 4)
    qn = QuasiNorm("p-sum", spec, p=2.0)  # coincides with the euclidean norm
    assert sphere_constant(spec, qn) == pytest.approx(2.0 * math.pi ** 2,
                                                      rel=1e-12)


def test_sphere_constant_high_dimension_anisotropic_rejected():
    spec = GroupSpec(nu=(1.0, 1.0, 1.0, 2.0))
    qn = QuasiNorm("p-sum", spec, p=2.0)
    with pytest.raises(QuadratureDomainError):
        sphere_constant(spec, qn)

"""Sharp-constant exploration for the weighted Hardy quotient.

The quotient under study, over radial profiles phi supported in a fixed
annulus, is

    q(phi) = integral |phi'|^2 r^(Q-1-2a) dr / integral |phi|^2 r^(Q-3-2a) dr

with mu = (Q - 2 - 2a) / 2.  Substituting phi(r) = u(ln r) turns q into a
weighted Dirichlet quotient on the log-window [0, L] with weight e^(2 mu t)
and Dirichlet ends, whose infimum over a window of log-length L is exactly
mu^2 + (pi / L)^2.  Confining the window therefore costs a positive excess
that decays like L^(-2), and letting L grow drives the quotient down to
mu^2 without ever attaining it.  This module discretizes the quotient,
minimizes it by inverse iteration, and scans the window ladder to expose
that decay, the mu^2 limit, and the r^(-mu) shape of near-minimizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import EigensolverError, HypothesisViolationError
from .fields import RadialProfile, ScalarField, extremizer_member
from .groups import GroupSpec, QuasiNorm
from .identities import coefficient_mu, weighted_norm_triple
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, integrate_radial
from .tolerances import DEFAULT_TOLERANCES, ToleranceProfile

Array = np.ndarray

_EPS = float(np.finfo(float).eps)


def window_infimum(mu: float, L: float) -> float:
    """Exact infimum of the quotient over profiles confined to log-length L."""
    if L <= 0.0:
        raise ValueError("window length must be positive")
    return mu * mu + (math.pi / L) ** 2


@dataclass(frozen=True)
class RayleighProblem:
    """Discretized Hardy quotient on a log-window of length L.

    grid_size is the number of grid intervals; the unknowns are the interior
    values of u(t) = phi(e^t) on the uniform grid over [0, L] with Dirichlet
    ends.  The continuum infimum is mu^2 + (pi/L)^2; the discrete minimum
    agrees to O(h^2) and stays strictly above mu^2 for every grid.
    """

    spec: GroupSpec
    alpha: float
    L: float
    grid_size: int = 4096

    def __post_init__(self) -> None:
        if self.spec.Q < 3.0:
            raise HypothesisViolationError(
                f"the Hardy quotient requires Q >= 3, got Q = {self.spec.Q}")
        if not self.L > 0.0:
            raise ValueError("window length L must be positive")
        if self.grid_size < 16:
            raise ValueError("grid_size must be at least 16")

    @property
    def mu(self) -> float:
        return coefficient_mu(self.spec.Q, self.alpha)

    @property
    def mu_squared(self) -> float:
        return self.mu ** 2

    @property
    def step(self) -> float:
        return self.L / self.grid_size

    def interior_grid(self) -> Array:
        return self.step * np.arange(1, self.grid_size)

    def operator_bands(self) -> tuple[float, float]:
        """(diagonal, off-diagonal) of the symmetrized discrete operator.

        The finite-difference form of -(w u')' / w with w(t) = e^(2 mu t)
        and midpoint weights, after the symmetry change v = sqrt(w) u, has
        constant bands: only the weight RATIOS between neighbouring nodes
        enter, so the entries are built from exp(+-mu h) and no large
        exponential is ever formed, whatever mu * L is.
        """
        h = self.step
        ratio_up = math.exp(self.mu * h)      # w(t + h/2) / w(t)
        ratio_down = math.exp(-self.mu * h)   # w(t - h/2) / w(t)
        diag = (ratio_up + ratio_down) / (h * h)
        off = -1.0 / (h * h)
        return diag, off

    def apply_operator(self, v: Array) -> Array:
        diag, off = self.operator_bands()
        out = diag * v
        out[:-1] += off * v[1:]
        out[1:] += off * v[:-1]
        return out


@dataclass(frozen=True)
class MinimizationResult:
    """Smallest discrete quotient and its minimizer on the log-grid.

    profile holds the symmetrized eigenvector e^(mu t) u(t), sup-normalized;
    it stays order one across the window whatever mu * L is.  The radial
    minimizer itself is phi(e^t) = u(t) = e^(-mu t) * profile, i.e. r^(-mu)
    times a pure window shape.
    """

    problem: RayleighProblem
    min_quotient: float
    grid: tuple[float, ...]            # interior log-radii t_i
    profile: tuple[float, ...]         # symmetrized minimizer, sup-normalized
    iterations: int
    residual: float
    method: str

    @property
    def gap(self) -> float:
        return self.min_quotient - self.problem.mu_squared


def _quotient_and_residual(problem: RayleighProblem, v: Array) -> tuple[float, float]:
    """Discrete quotient of v and its eigen-residual.

    The quotient is evaluated through the energy form

        theta = [ (2 cosh(mu h) - 2)/h^2 * sum v_i^2
                  + (v_0^2 + v_last^2 + sum (v_{i+1} - v_i)^2) / h^2 ]
                / sum v_i^2

    which is a sum of nonnegative terms, so theta carries full relative
    accuracy.  Forming v . (T v) instead would subtract O(1/h^2) terms that
    cancel down to O(1) and lose ~eps/h^2 absolutely, which is what the
    settling test below must not see.
    """
    h = problem.step
    base = 4.0 * math.sinh(0.5 * problem.mu * h) ** 2 / (h * h)
    diffs = np.diff(v)
    norm_sq = float(np.dot(v, v))
    energy = base * norm_sq + (
        float(v[0]) ** 2 + float(v[-1]) ** 2 + float(np.dot(diffs, diffs))) / (h * h)
    theta = energy / norm_sq
    tv = problem.apply_operator(v)
    res = float(np.linalg.norm(tv - theta * v)) / math.sqrt(norm_sq)
    return theta, res


def minimize_rayleigh(problem: RayleighProblem, max_iterations: int = 100,
                      ) -> MinimizationResult:
    """Minimize the discrete quotient by shifted inverse iteration.

    The shift mu^2 lies strictly below the whole discrete spectrum and
    closest to its bottom, so the iteration converges to the minimizer at a
    grid-independent linear rate.  Divergence falls back to a dense solve on
    small grids and is an error otherwise.
    """
    m = problem.grid_size
    diag, off = problem.operator_bands()
    shift = problem.mu_squared
    n_int = m - 1

    ab = np.zeros((3, n_int))
    ab[0, 1:] = off
    ab[1, :] = diag - shift
    ab[2, :-1] = off

    t = problem.interior_grid()
    v = np.sin(math.pi * t / problem.L)
    v /= np.linalg.norm(v)

    gersh = abs(diag) + 2.0 * abs(off)
    theta_prev = math.inf
    theta, res = _quotient_and_residual(problem, v)
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        w = solve_banded((1, 1), ab, v, overwrite_b=False, check_finite=False)
        w /= np.linalg.norm(w)
        theta, res = _quotient_and_residual(problem, w)
        v = w
        settled = abs(theta - theta_prev) <= 8.0 * _EPS * max(abs(theta), 1.0)
        if settled and res <= math.sqrt(_EPS) * gersh:
            break
        theta_prev = theta
    else:
        if n_int <= 1024:
            dense = np.diag(np.full(n_int, diag))
            idx = np.arange(n_int - 1)
            dense[idx, idx + 1] = off
            dense[idx + 1, idx] = off
            evals, evecs = np.linalg.eigh(dense)
            v = evecs[:, 0]
            theta = float(evals[0])
            _, res = _quotient_and_residual(problem, v)
            v = v / np.max(np.abs(v)) * np.sign(np.sum(v) or 1.0)
            return MinimizationResult(
                problem=problem, min_quotient=theta, grid=tuple(t),
                profile=tuple(v), iterations=iterations, residual=res,
                method="dense-fallback")
        raise EigensolverError(
            "inverse iteration did not converge", iterations=iterations,
            residual=res)

    # fix an overall sign and sup-normalize for a reproducible profile
    sign = 1.0 if float(np.sum(v)) >= 0.0 else -1.0
    u = sign * v / np.max(np.abs(v))
    return MinimizationResult(
        problem=problem, min_quotient=theta, grid=tuple(t), profile=tuple(u),
        iterations=iterations, residual=res, method="inverse-iteration")


def reference_minimizer_profile(spec: GroupSpec, alpha: float, L: float,
                                r_inner: float = 1.0) -> RadialProfile:
    """phi(r) = r^(-mu) sin(pi ln(r / r_inner) / L); quotient mu^2 + (pi/L)^2.

    The analytic minimizer of the windowed quotient; feeding it to
    rayleigh_quotient must reproduce the window infimum to quadrature
    accuracy.
    """
    if r_inner <= 0.0:
        raise ValueError("inner radius must be positive")
    if L <= 0.0:
        raise ValueError("window length must be positive")
    mu = coefficient_mu(spec.Q, alpha)
    k = math.pi / L

    def phi(r):
        r = np.asarray(r, dtype=float)
        t = np.log(r / r_inner)
        inside = (t > 0.0) & (t < L)
        return np.where(inside, r ** (-mu) * np.sin(k * t), 0.0)

    def dphi(r):
        r = np.asarray(r, dtype=float)
        t = np.log(r / r_inner)
        inside = (t > 0.0) & (t < L)
        val = r ** (-mu - 1.0) * (k * np.cos(k * t) - mu * np.sin(k * t))
        return np.where(inside, val, 0.0)

    return RadialProfile(phi=phi, dphi=dphi,
                         support=(r_inner, r_inner * math.exp(L)))


def rayleigh_quotient(spec: GroupSpec, alpha: float, profile: RadialProfile,
                      settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Quotient A / B of a radial profile; the sphere factor cancels."""
    if spec.Q < 3.0:
        raise HypothesisViolationError(
            f"the Hardy quotient requires Q >= 3, got Q = {spec.Q}")
    a, b = profile.support
    Q = spec.Q
    alpha = float(alpha)
    num = integrate_radial(lambda r: np.abs(profile.dphi(r)) ** 2, (a, b),
                           Q - 1.0 - 2.0 * alpha, settings, spacing="log")
    den = integrate_radial(lambda r: np.abs(profile.phi(r)) ** 2, (a, b),
                           Q - 3.0 - 2.0 * alpha, settings, spacing="log")
    if den == 0.0:
        raise ValueError("profile is identically zero on its support")
    return num / den


def _fit_exponent(lengths: Array, gaps: Array) -> float:
    return float(np.polyfit(np.log(lengths), np.log(gaps), 1)[0])


def _mid_window_slope(t: Array, u: Array, fraction: float = 0.1) -> float:
    """Slope of ln u against t over the central fraction of the window."""
    lo = t[0] + (1.0 - fraction) / 2.0 * (t[-1] - t[0])
    hi = t[-1] - (1.0 - fraction) / 2.0 * (t[-1] - t[0])
    mask = (t >= lo) & (t <= hi) & (u > 0.0)
    if int(np.count_nonzero(mask)) < 5:
        return math.nan
    return float(np.polyfit(t[mask], np.log(u[mask]), 1)[0])


@dataclass(frozen=True)
class SharpnessScanResult:
    """Window ladder for one (structure, alpha): quotients, gaps, exponents.

    gaps[k] = min_quotients[k] - mu_squared must be positive for every k
    (strict non-attainment on each window) and decay like L^(-2);
    fitted_exponents[k] is the log-log slope fitted over the first k + 1
    rows (nan for the first).  extrapolated_quotient regresses the quotient
    against 1 / L^2, so its intercept recovers mu^2 without ever touching an
    infinite window.  profile_exponents[k] is the mid-window log-slope of
    the minimizer, which approaches -mu: near-minimizers look like r^(-mu)
    away from the cutoffs.
    """

    spec: GroupSpec
    alpha: float
    mu: float
    mu_squared: float
    lengths: tuple[float, ...]
    min_quotients: tuple[float, ...]
    gaps: tuple[float, ...]
    fitted_exponents: tuple[float, ...]
    profile_exponents: tuple[float, ...]
    grid_sizes: tuple[int, ...]
    decay_exponent: float
    extrapolated_quotient: float
    strictly_above: bool

    def rows(self) -> list[dict]:
        """Per-window rows in CSV column order."""
        out = []
        for k in range(len(self.lengths)):
            out.append({
                "L": self.lengths[k],
                "min_quotient": self.min_quotients[k],
                "mu_squared": self.mu_squared,
                "gap": self.gaps[k],
                "fitted_exponent_so_far": self.fitted_exponents[k],
            })
        return out


def sharpness_scan(spec: GroupSpec, alpha: float,
                   lengths: tuple[float, ...] = (4.0, 8.0, 16.0, 32.0),
                   grid_size: int = 4096, reference_length: float = 16.0,
                   tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                   ) -> SharpnessScanResult:
    """Minimize over a ladder of growing log-windows and fit the decay.

    The grid spacing is held fixed across the ladder (grid_size intervals at
    reference_length, scaled proportionally), so the discretization floor
    does not grow with the window and the fitted gap exponent approaches -2.
    """
    if len(lengths) < 2:
        raise ValueError("a scan needs at least two window lengths")
    ordered = tuple(float(L) for L in lengths)
    if any(b <= a for a, b in zip(ordered, ordered[1:])):
        raise ValueError("window lengths must be strictly increasing")

    mu = coefficient_mu(spec.Q, alpha)
    quotients: list[float] = []
    prof_exps: list[float] = []
    grid_sizes: list[int] = []
    for L in ordered:
        m = max(512, int(round(grid_size * L / reference_length)))
        problem = RayleighProblem(spec=spec, alpha=float(alpha), L=L, grid_size=m)
        result = minimize_rayleigh(problem)
        quotients.append(result.min_quotient)
        grid_sizes.append(m)
        t = np.asarray(result.grid)
        u = np.abs(np.asarray(result.profile))
        # undo the symmetrizing change of variables: v = e^(mu t) u(t)
        prof_exps.append(_mid_window_slope(t, u) - mu)

    gaps = [q - mu * mu for q in quotients]
    fitted: list[float] = [math.nan]
    for k in range(2, len(ordered) + 1):
        fitted.append(_fit_exponent(np.asarray(ordered[:k]), np.asarray(gaps[:k])))

    inv_sq = np.asarray([1.0 / (L * L) for L in ordered])
    coeffs = np.polyfit(inv_sq, np.asarray(quotients), 1)
    extrapolated = float(coeffs[1])

    return SharpnessScanResult(
        spec=spec, alpha=float(alpha), mu=mu, mu_squared=mu * mu,
        lengths=ordered, min_quotients=tuple(quotients), gaps=tuple(gaps),
        fitted_exponents=tuple(fitted), profile_exponents=tuple(prof_exps),
        grid_sizes=tuple(grid_sizes), decay_exponent=fitted[-1],
        extrapolated_quotient=extrapolated,
        strictly_above=all(g > tolerances.strictness_margin for g in gaps),
    )


@dataclass(frozen=True)
class ExtremizerSequenceResult:
    """Plateau family r^(-mu) w(ln r): ratios climbing to 1, remainder to 0.

    ratios[k] = |mu| sqrt(B_k / A_k) < 1 for every member; lengthening the
    plateau pushes the ratio up to 1 while the normalized remainder C_k/B_k
    collapses, which is exactly how sharpness without attainment shows up.
    """

    alpha: float
    mu: float
    inner_radius: float
    outer_radii: tuple[float, ...]
    taper: float
    ratios: tuple[float, ...]
    remainder_ratios: tuple[float, ...]
    ratios_increasing: bool
    remainder_decreasing: bool
    all_strict: bool


def extremizer_quotients(spec: GroupSpec, qn: QuasiNorm, alpha: float,
                         outer_radii: tuple[float, ...],
                         inner_radius: float = 1.0, taper: float = 1.0,
                         settings: QuadratureSettings = DEFAULT_SETTINGS,
                         tolerances: ToleranceProfile = DEFAULT_TOLERANCES,
                         ) -> ExtremizerSequenceResult:
    """Evaluate the Hardy ratio along the plateau near-extremizer family."""
    mu = coefficient_mu(spec.Q, alpha)
    if mu == 0.0:
        raise HypothesisViolationError(
            "alpha = (Q - 2) / 2 has a vanishing constant; the ratio is undefined")
    ratios: list[float] = []
    rem: list[float] = []
    for b in outer_radii:
        f = extremizer_member(qn, mu, inner_radius, float(b), taper)
        triple = weighted_norm_triple(spec, qn, f, float(alpha), settings,
                                      route="radial")
        ratios.append(abs(mu) * math.sqrt(triple.B / triple.A))
        rem.append(triple.C / triple.B)
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    decreasing = all(b < a for a, b in zip(rem, rem[1:]))
    strict = all(r < 1.0 - tolerances.strictness_margin for r in ratios)
    return ExtremizerSequenceResult(
        alpha=float(alpha), mu=mu, inner_radius=float(inner_radius),
        outer_radii=tuple(float(b) for b in outer_radii), taper=float(taper),
        ratios=tuple(ratios), remainder_ratios=tuple(rem),
        ratios_increasing=increasing, remainder_decreasing=decreasing,
        all_strict=strict)

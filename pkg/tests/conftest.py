"""Shared fixtures: dilation structures, gauges, and the one full
default-configuration verification run reused by the acceptance tests."""

from __future__ import annotations

import time

import pytest
from hypothesis import settings as hyp_settings

from hardyckn import GroupSpec, QuadratureSettings, QuasiNorm
from hardyckn.cli import run_verify
from hardyckn.config import load_default_config

# Numeric property tests exceed the default example deadline, and the whole
# repository treats reproducibility as a contract, so hypothesis runs
# derandomized: the same examples on every run.
hyp_settings.register_profile("numeric", deadline=None, max_examples=50,
                              derandomize=True)
hyp_settings.load_profile("numeric")


@pytest.fixture(scope="session")
def iso3() -> GroupSpec:
    return GroupSpec(nu=(1.0, 1.0, 1.0))


@pytest.fixture(scope="session")
def heis() -> GroupSpec:
    return GroupSpec(nu=(1.0, 1.0, 2.0))


@pytest.fixture(scope="session")
def aniso() -> GroupSpec:
    return GroupSpec(nu=(1.0, 2.0, 3.0))


@pytest.fixture(scope="session")
def euclid3(iso3) -> QuasiNorm:
    return QuasiNorm("euclidean", iso3)


@pytest.fixture(scope="session")
def psum2_iso3(iso3) -> QuasiNorm:
    return QuasiNorm("p-sum", iso3, p=2.0)


@pytest.fixture(scope="session")
def psum2_aniso(aniso) -> QuasiNorm:
    return QuasiNorm("p-sum", aniso, p=2.0)


@pytest.fixture(scope="session")
def psum4_aniso(aniso) -> QuasiNorm:
    return QuasiNorm("p-sum", aniso, p=4.0)


@pytest.fixture(scope="session")
def koranyi(heis) -> QuasiNorm:
    return QuasiNorm("koranyi", heis)


@pytest.fixture(scope="session")
def fast_settings() -> QuadratureSettings:
    # enough resolution for every unit-level tolerance, small enough that
    # cartesian passes stay well under a second
    return QuadratureSettings(panels=48, nodes_per_panel=12,
                              cartesian_resolution=81, mc_samples=100_000)


@pytest.fixture(scope="session")
def default_verify():
    """One full default-configuration run: (bundle, wall seconds).

    This is the expensive fixture of the suite; the acceptance tests that
    gate on the default matrix all read from this single execution.
    """
    config = load_default_config()
    t0 = time.perf_counter()
    bundle = run_verify(config)
    elapsed = time.perf_counter() - t0
    return bundle, elapsed


# Minimal run file whose alpha = 1 inequality must fire the dimension guard:
# the group has Q = 4 and the check is not marked expect_reject.
UNGUARDED_ALPHA_ONE_CONFIG = """\
[run]
groups = heis
alphas = 1
fields = bump
checks = alpha-one-inequality

[group heis]
nu = 1 1 2
norms = gauge

[norm gauge]
family = koranyi

[field bump]
kind = radial-bump
center = 2.0
width = 1.0
"""


@pytest.fixture
def unguarded_alpha_one_config(tmp_path):
    path = tmp_path / "unguarded.ini"
    path.write_text(UNGUARDED_ALPHA_ONE_CONFIG, encoding="utf-8")
    return path

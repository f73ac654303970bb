"""Manufactured case: independent residual oracle and error norms.

The residual tests re-derive the momentum balance with mpmath numerical
differentiation from formulas written out locally in this file, so a bug in
the package's symbolic derivation cannot hide behind itself.
"""

import mpmath as mp
import numpy as np
import pytest

from saddlesim.config import SimConfig
from saddlesim.grid import build_grid
from saddlesim.verification import (discrete_norms, manufactured_case,
                                    pressure_l2_error)

RE = 100.0
Z0, Z1 = -0.125, 0.5
AMP = 0.1

# off-axis, off-boundary probe points (r, z, t)
PROBES = [(0.3, 0.1, 0.2), (0.7, -0.05, 0.5), (0.15, 0.4, 1.0)]


def _fields(dps=30):
    """Test-local closed forms, independent of the package's sympy route."""
    mp.mp.dps = dps
    z0, z1, A = mp.mpf("-0.125"), mp.mpf("0.5"), mp.mpf("0.1")

    def q(z):
        return ((z - z0) * (z1 - z)) ** 2 / (((z1 - z0) / 2) ** 4)

    def s(t):
        return 1 + mp.sin(t) / 2

    def psi(r, z, t):
        return A * r**2 * (1 - r**2) ** 2 * q(z) * s(t)

    def u_r(r, z, t):
        return -mp.diff(lambda zz: psi(r, zz, t), z) / r

    def u_z(r, z, t):
        return mp.diff(lambda rr: psi(rr, z, t), r) / r

    def u_t(r, z, t):
        return A * r * (1 - r) ** 2 * q(z) * s(t)

    def p(r, z, t):
        return A * mp.cos(mp.pi * r) * mp.cos(2 * mp.pi * (z - z0) / (z1 - z0)) * s(t)

    return u_r, u_t, u_z, p


def _lap(f, r, z, singular=False):
    """d2/dr2 + (1/r) d/dr + d2/dz2, minus 1/r^2 term for vector components."""
    val = (mp.diff(lambda rr: f(rr, z), r, 2)
           + mp.diff(lambda rr: f(rr, z), r) / r
           + mp.diff(lambda zz: f(r, zz), z, 2))
    if singular:
        val -= f(r, z) / r**2
    return val


@pytest.fixture(scope="module")
def case():
    return manufactured_case(re=RE, z_min=Z0, z_max=Z1, amplitude=AMP)


@pytest.mark.parametrize("point", PROBES)
def test_momentum_residual_oracle(case, point):
    """The package's forcing satisfies the continuous momentum equations, as
    checked by high-precision numerical differentiation of local formulas."""
    u_r, u_t, u_z, p = _fields()
    r0, z0, t0 = (mp.mpf(repr(v)) for v in point)
    f_pkg = np.array([float(f) for f in case.forcing(*point)])

    def dt(f):
        return mp.diff(lambda tt: f(r0, z0, tt), t0)

    def dr(f):
        return mp.diff(lambda rr: f(rr, z0, t0), r0)

    def dz(f):
        return mp.diff(lambda zz: f(r0, zz, t0), z0)

    ur, ut, uz = u_r(r0, z0, t0), u_t(r0, z0, t0), u_z(r0, z0, t0)
    f_r = (dt(u_r) + ur * dr(u_r) + uz * dz(u_r) - ut**2 / r0 + dr(p)
           - _lap(lambda rr, zz: u_r(rr, zz, t0), r0, z0, singular=True) / RE)
    f_t = (dt(u_t) + ur * dr(u_t) + uz * dz(u_t) + ur * ut / r0
           - _lap(lambda rr, zz: u_t(rr, zz, t0), r0, z0, singular=True) / RE)
    f_z = (dt(u_z) + ur * dr(u_z) + uz * dz(u_z) + dz(p)
           - _lap(lambda rr, zz: u_z(rr, zz, t0), r0, z0) / RE)

    resid = np.abs(f_pkg - np.array([float(f_r), float(f_t), float(f_z)]))
    assert resid.max() < 1e-8, (
        f"forcing at {point} off the continuous equations by {resid}")


@pytest.mark.parametrize("point", PROBES)
def test_velocity_is_divergence_free(case, point):
    u_r, _, u_z, _ = _fields()
    r0, z0, t0 = (mp.mpf(repr(v)) for v in point)
    div = (mp.diff(lambda rr: u_r(rr, z0, t0), r0) + u_r(r0, z0, t0) / r0
           + mp.diff(lambda zz: u_z(r0, zz, t0), z0))
    assert abs(div) < 1e-12


@pytest.mark.parametrize("point", PROBES)
def test_local_formulas_match_package_velocity(case, point):
    """The local mpmath fields and the package's lambdified fields agree."""
    u_r, u_t, u_z, p = _fields()
    r0, z0, t0 = (mp.mpf(repr(v)) for v in point)
    got = np.array([float(f) for f in case.velocity(*point)])
    want = np.array([float(u_r(r0, z0, t0)), float(u_t(r0, z0, t0)),
                     float(u_z(r0, z0, t0))])
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-15)
    assert float(case.pressure(*point)) == pytest.approx(
        float(p(r0, z0, t0)), rel=1e-12)


def test_exact_state_honors_walls_and_axis(case):
    grid = build_grid(SimConfig(nr=17, nz=13, grading=1.0))
    state = case.state(grid, 0.7)
    for arr in (state.u_r, state.u_theta, state.u_z):
        np.testing.assert_allclose(arr[-1, :], 0.0, atol=1e-14)  # outer wall
        np.testing.assert_allclose(arr[:, 0], 0.0, atol=1e-14)   # lower wall
        np.testing.assert_allclose(arr[:, -1], 0.0, atol=1e-14)  # upper wall
    np.testing.assert_allclose(state.u_r[0, :], 0.0, atol=1e-15)
    np.testing.assert_allclose(state.u_theta[0, :], 0.0, atol=1e-15)


def test_forcing_finite_on_axis(case):
    f = np.array([np.asarray(c, dtype=float)
                  for c in case.forcing(np.zeros(5), np.linspace(Z0, Z1, 5), 0.3)])
    assert np.isfinite(f).all(), "every 1/r factor must cancel on the axis"


def test_norms_vanish_on_exact_state(case):
    grid = build_grid(SimConfig(nr=17, nz=13, grading=1.0))
    state = case.state(grid, 0.25)
    l2, h1 = discrete_norms(state, case, grid, 0.25)
    assert l2 == 0.0 and h1 == 0.0
    assert pressure_l2_error(state, case, grid, 0.25) == pytest.approx(0.0, abs=1e-14)


def test_norms_see_perturbation(case):
    grid = build_grid(SimConfig(nr=17, nz=13, grading=1.0))
    state = case.state(grid, 0.25)
    bumped = type(state)(u_r=state.u_r, u_theta=state.u_theta,
                         u_z=state.u_z + 1e-3, p=state.p, t=state.t,
                         pre_stage=False, grid=grid)
    l2, h1 = discrete_norms(bumped, case, grid, 0.25)
    assert l2 > 1e-4, "a uniform velocity offset must register in L2"
    assert h1 == pytest.approx(0.0, abs=1e-12), "a constant has zero H1 seminorm"


def test_state_rejects_mismatched_domain(case):
    grid = build_grid(SimConfig(nr=9, nz=9, grading=1.0, a=0.2))
    with pytest.raises(ValueError, match="does not match"):
        case.state(grid, 0.0)

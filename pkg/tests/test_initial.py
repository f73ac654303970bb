"""Initial flow configuration: profile values, symmetry, and flags."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saddlesim.config import SimConfig
from saddlesim.grid import DomainVariant, build_grid
from saddlesim.initial import InitialParams, initial_field, phi

# Spot values computed independently with 30-digit mpmath arithmetic and
# frozen here; they pin the exact profile formulas, not just their shape.
DEFAULT_AT_HALF = {"u_z": 0.64, "u_r": 0.64}  # node (r, z) = (0.5, 0.5)
ASYM_EPS = (2.0, 3.0, 4.0, 5.0, 6.0, 7.0)
ASYM_BETA = (0.5, 1.5, 2.5, 0.25, 1.25, 0.75)
ASYM_AT_CORNER = {  # node (r, z) = (0.5, -0.125)
    "u_z": 0.12730420185952732,
    "u_r": -0.0051162490603160936,
    "u_theta": 0.023474708229054259,
}


def _grid(nr=5, nz=6, variant=DomainVariant.OFFSET):
    return build_grid(SimConfig(nr=nr, nz=nz, grading=1.0, variant=variant))


def test_phi_matches_definition():
    assert phi(2.0, 1.0, -1.0) == pytest.approx(0.2, rel=1e-15)
    assert phi(0.0, 4.0, 0.5) == pytest.approx(2.0, rel=1e-15)


def test_default_profile_frozen_values():
    grid = _grid()  # uniform 5x6: r=0.5 is node 2, z=0.5 is node 5
    state = initial_field(InitialParams(), grid)
    assert grid.r_nodes[2] == 0.5 and grid.z_nodes[5] == 0.5
    assert state.u_z[2, 5] == pytest.approx(DEFAULT_AT_HALF["u_z"], rel=1e-15)
    assert state.u_r[2, 5] == pytest.approx(DEFAULT_AT_HALF["u_r"], rel=1e-15)


def test_asymmetric_profile_frozen_values():
    grid = _grid()
    state = initial_field(InitialParams(eps=ASYM_EPS, beta=ASYM_BETA), grid)
    assert grid.r_nodes[2] == 0.5 and grid.z_nodes[0] == -0.125
    for name, expect in ASYM_AT_CORNER.items():
        got = getattr(state, name)[2, 0]
        assert got == pytest.approx(expect, rel=1e-14), (
            f"{name}(0.5, -0.125) = {got!r}, expected frozen {expect!r}")


def test_radial_flow_vanishes_on_midplane():
    grid = _grid()  # z nodes: -0.125, 0.0, 0.125, ...
    state = initial_field(InitialParams(), grid)
    assert grid.z_nodes[1] == 0.0
    assert np.all(state.u_r[:, 1] == 0.0), "u_r must vanish exactly at z = 0"


def test_radial_flow_splits_at_midplane():
    grid = _grid()
    state = initial_field(InitialParams(), grid)
    assert np.all(state.u_r[:, 0] < 0), "below center the radial flow points inward"
    assert np.all(state.u_r[:, 2:] > 0), "above center it points outward"


def test_no_swirl_zeroes_azimuthal_component():
    state = initial_field(InitialParams(swirl=False), _grid())
    assert np.all(state.u_theta == 0.0)
    with_swirl = initial_field(InitialParams(swirl=True), _grid())
    assert np.all(with_swirl.u_theta > 0.0)


def test_state_flags():
    state = initial_field(InitialParams(), _grid())
    assert state.pre_stage is True
    assert state.t == 0.0
    assert np.all(state.p == 0.0)


def test_centered_variant_symmetry():
    """On the centered cylinder the profile is mirror-symmetric about z = 0:
    u_z and u_theta are even in z, u_r is odd."""
    grid = _grid(nr=7, nz=9, variant=DomainVariant.CENTERED)
    state = initial_field(InitialParams(), grid)
    np.testing.assert_allclose(state.u_z, state.u_z[:, ::-1], rtol=1e-15)
    np.testing.assert_allclose(state.u_theta, state.u_theta[:, ::-1], rtol=1e-15)
    np.testing.assert_allclose(state.u_r, -state.u_r[:, ::-1], rtol=1e-15)


def test_from_config_maps_all_parameters():
    cfg = SimConfig(eps1=2.0, eps2=3.0, eps3=4.0, eps4=5.0, eps5=6.0, eps6=7.0,
                    beta1=0.5, beta2=1.5, beta3=2.5, beta4=0.25, beta5=1.25,
                    beta6=0.75, swirl=False)
    params = InitialParams.from_config(cfg)
    assert params.eps == ASYM_EPS
    assert params.beta == ASYM_BETA
    assert params.swirl is False


@given(s=st.floats(-10, 10), eps=st.floats(0.5, 5), sigma=st.floats(0.25, 3))
@settings(max_examples=60, deadline=None)
def test_phi_decays_away_from_zero(s, eps, sigma):
    """With negative exponent, phi peaks at s = 0 and decreases in |s|."""
    here = phi(s, eps, -sigma)
    assert here <= phi(0.0, eps, -sigma) + 1e-15
    assert here >= phi(1.5 * s, eps, -sigma) - 1e-15

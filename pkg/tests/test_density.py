"""Density construction, validation, and pointwise values."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperiso.density import (
    DensitySpec,
    density_from_json,
    first_positive_radius,
    h_value,
    make_density,
    phi,
    phi_inv,
    psi,
    rho,
    rho_hat,
    rho_tilde,
    zeta,
)
from hyperiso.errors import DomainError, MonotonicityError

ZERO = make_density([(0.0, 0.0)])
R03 = make_density([(0.0, 0.0), (0.3, 0.0), (0.9, 2.0)])
BUMP = make_density([(0.0, 0.0), (0.25, 0.0), (0.6, 1.0)])
POS = make_density([(0.0, 0.5)])
ONE = make_density([(0.0, 1.0)])


def test_zeta_and_phi_basics():
    assert zeta(0.0) == 2.0
    assert abs(zeta(0.5) - 8.0 / 3.0) < 1e-15
    assert phi(0.0) == 0.0
    assert abs(phi(0.5) - math.log(3.0)) < 1e-15
    for t in (0.0, 0.1, 0.5, 0.99):
        assert abs(phi_inv(phi(t)) - t) < 1e-14
    assert abs(rho_hat(0.5) - 4.0 / 3.0) < 1e-15


def test_coordinate_domain_checks():
    for bad in (-0.1, 1.0, 1.5):
        with pytest.raises(DomainError):
            zeta(bad)
        with pytest.raises(DomainError):
            phi(bad)
    with pytest.raises(DomainError):
        phi_inv(-1.0)


def test_h_values():
    assert h_value(ZERO, 0.7) == 0.0
    assert abs(h_value(R03, 0.6) - 0.40599959114359343) < 1e-15
    assert abs(h_value(BUMP, 0.5) - 0.21770538596765715) < 1e-15
    # constant slope 1/2: h is half the geodesic distance
    assert abs(h_value(POS, 0.5) - 0.5 * phi(0.5)) < 1e-15
    assert abs(h_value(ONE, 0.5) - phi(0.5)) < 1e-15


def test_psi_values():
    for spec in (ZERO, R03, BUMP, POS, ONE):
        assert psi(spec, 0.0) == 1.0
    assert abs(psi(R03, 0.6) - 1.5008019388454068) < 1e-14
    assert abs(psi(BUMP, 0.5) - 1.2432207433832811) < 1e-14
    assert abs(psi(POS, 0.5) - math.sqrt(3.0)) < 1e-14
    assert abs(psi(ONE, 0.5) - 3.0) < 1e-14


def test_h_continuity_at_nodes():
    eps = 1e-9
    for t in (0.3, 0.9):
        below = h_value(R03, t - eps)
        above = h_value(R03, t + eps)
        assert abs(above - below) < 1e-7


def test_rho_values():
    assert rho(R03, 0.6) == pytest.approx(zeta(0.6), abs=1e-14)
    assert rho(R03, 0.6, side="-") == rho(R03, 0.6, side="+")
    assert rho(ZERO, 0.5) == 0.0
    assert rho_tilde(R03, 0.6) == pytest.approx(rho_hat(0.6) + zeta(0.6), abs=1e-13)
    with pytest.raises(DomainError):
        rho(R03, 0.0, side="-")
    with pytest.raises(DomainError):
        rho(R03, 0.5, side="left")


def test_first_positive_radius():
    assert first_positive_radius(ZERO) == 1.0
    assert first_positive_radius(R03) == 0.3
    assert first_positive_radius(BUMP) == 0.25
    assert first_positive_radius(POS) == 0.0
    assert first_positive_radius(ONE) == 0.0


def test_validation_order_and_errors():
    with pytest.raises(DomainError):
        make_density([])
    with pytest.raises(DomainError):
        make_density([(1.0, 0.0)])
    with pytest.raises(DomainError):
        make_density([(-0.1, 0.0)])
    with pytest.raises(DomainError):
        make_density([(0.0, 0.0), (0.0, 1.0)])
    with pytest.raises(DomainError):
        make_density([(0.0, -0.5)])
    with pytest.raises(MonotonicityError):
        make_density([(0.0, 1.0), (0.5, 0.5)])
    # a decreasing value after an invalid radius reports the radius first
    with pytest.raises(DomainError) as err:
        make_density([(0.0, 1.0), (0.0, 0.5)])
    assert not isinstance(err.value, MonotonicityError)


def test_monotonicity_error_is_domain_error():
    assert issubclass(MonotonicityError, DomainError)


def test_json_roundtrip():
    spec = density_from_json('{"lambda_nodes": [[0, 0], [0.3, 0], [0.9, 2]]}')
    assert spec == R03
    assert spec.lambda_nodes == ((0.0, 0.0), (0.3, 0.0), (0.9, 2.0))


def test_json_errors():
    with pytest.raises(DomainError):
        density_from_json("not json")
    with pytest.raises(DomainError):
        density_from_json('{"nodes": []}')
    with pytest.raises(DomainError):
        density_from_json('{"lambda_nodes": 3}')
    with pytest.raises(MonotonicityError):
        density_from_json('{"lambda_nodes": [[0, 1], [0.5, 0.5]]}')


def test_spec_hashable_and_cached():
    again = make_density([(0.0, 0.0), (0.3, 0.0), (0.9, 2.0)])
    assert again == R03
    assert hash(again) == hash(R03)
    assert R03.handle is R03.handle
    assert isinstance(R03, DensitySpec)


@st.composite
def node_lists(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    radii = sorted(
        draw(
            st.lists(
                st.floats(min_value=0.0, max_value=0.95, allow_nan=False),
                min_size=n,
                max_size=n,
                unique=True,
            )
        )
    )
    values = sorted(
        draw(
            st.lists(
                st.floats(min_value=0.0, max_value=3.0, allow_nan=False),
                min_size=n,
                max_size=n,
            )
        )
    )
    return list(zip(radii, values))


@settings(max_examples=40, deadline=None)
@given(node_lists())
def test_valid_nodes_build_nondecreasing_weight(nodes):
    spec = make_density(nodes)
    assert psi(spec, 0.0) == 1.0
    last = 1.0
    for t in (0.1, 0.3, 0.5, 0.7, 0.9):
        cur = psi(spec, t)
        assert cur >= last - 1e-12
        last = cur

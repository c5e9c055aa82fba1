"""The operator differentials versus the expansion orders.

The machine check is the Euler identity: evaluating the differential along
the profile direction at a scaled profile reproduces k * (term k) order by
order in the scale.  Orders are separated by sampling the scale on a small
complex circle, which is an exact trigonometric fit aliasing only orders
P apart.
"""

import numpy as np
import pytest

from beltrami_waves import (HodgeArgument, VectorArgument, taylor_H, taylor_M)
from beltrami_waves.differentials import TruncatedOperator, dH_apply, dM_apply
from beltrami_waves.fields import (random_real_field, random_real_vector_field,
                                   zero_field)

N = 10
ORDER = 3


@pytest.fixture
def setup(square_lattice, beltrami_params, rng):
    eta = random_real_field(square_lattice, N, rng, band=2, scale=0.05)
    phi = random_real_field(square_lattice, N, rng, band=2)
    g = random_real_vector_field(square_lattice, N, rng, band=2)
    harg = HodgeArgument(np.array([0.3, -0.2]), phi)
    varg = VectorArgument(np.array([0.1, 0.4]), g)
    return square_lattice, beltrami_params, eta, harg, varg


def test_dh_at_flat_surface_is_h1(setup):
    lat, p, eta, harg, _ = setup
    op = TruncatedOperator(zero_field(lat, N), ORDER, p)
    got = dH_apply(op, eta, harg)
    h1 = taylor_H(eta, harg, 1, p)[1]
    assert (got - h1).l2_norm() < 1e-12 * h1.l2_norm()


def test_dm_at_flat_surface_is_m1(setup):
    lat, p, eta, _, varg = setup
    op = TruncatedOperator(zero_field(lat, N), ORDER, p)
    got = dM_apply(op, eta, varg)
    m1 = taylor_M(eta, varg, 1, p)[1]
    assert (got - m1).l2_norm() < 1e-12 * m1.l2_norm()


def test_zero_direction_gives_zero(setup):
    lat, p, eta, harg, varg = setup
    op = TruncatedOperator(eta, ORDER, p)
    zero = zero_field(lat, N)
    assert dH_apply(op, zero, harg).l2_norm() == 0.0
    out = dM_apply(op, zero, varg)
    assert out.x.l2_norm() == 0.0 and out.y.l2_norm() == 0.0


def test_dh_linear_in_direction(setup, rng):
    lat, p, eta, harg, _ = setup
    d1 = random_real_field(lat, N, rng, band=2)
    d2 = random_real_field(lat, N, rng, band=2)
    op = TruncatedOperator(eta, 2, p)
    combo = dH_apply(op, 0.4 * d1 - 1.5 * d2, harg)
    split = 0.4 * dH_apply(op, d1, harg) - 1.5 * dH_apply(op, d2, harg)
    assert (combo - split).l2_norm() < 1e-11 * max(split.l2_norm(), 1e-30)


def _circle_coefficients(samples, radius, order):
    p = len(samples)
    return [
        sum(samples[j] * np.exp(-2j * np.pi * j * m / p)
            for j in range(p)) / (p * radius ** m)
        for m in range(order)
    ]


def test_euler_identity_h(setup):
    lat, p, eta, harg, _ = setup
    points, radius = 8, 1.0 / 16
    hser = taylor_H(eta, harg, ORDER, p)
    samples = []
    for j in range(points):
        eps = radius * np.exp(2j * np.pi * j / points)
        op = TruncatedOperator(eps * eta, ORDER, p)
        samples.append(dH_apply(op, eta, harg).coeffs)
    for m, coeff in enumerate(_circle_coefficients(samples, radius, ORDER)):
        target = (m + 1) * hser[m + 1].coeffs
        err = np.linalg.norm(coeff - target) / np.linalg.norm(target)
        assert err <= 1e-8, f"order {m}: {err:.2e}"


def test_euler_identity_m(setup):
    lat, p, eta, _, varg = setup
    points, radius = 8, 1.0 / 16
    mser = taylor_M(eta, varg, ORDER, p)
    sx, sy = [], []
    for j in range(points):
        eps = radius * np.exp(2j * np.pi * j / points)
        op = TruncatedOperator(eps * eta, ORDER, p)
        out = dM_apply(op, eta, varg)
        sx.append(out.x.coeffs)
        sy.append(out.y.coeffs)
    cx = _circle_coefficients(sx, radius, ORDER)
    cy = _circle_coefficients(sy, radius, ORDER)
    for m in range(ORDER):
        tx = (m + 1) * mser[m + 1].x.coeffs
        ty = (m + 1) * mser[m + 1].y.coeffs
        err = np.hypot(np.linalg.norm(cx[m] - tx), np.linalg.norm(cy[m] - ty)) \
            / np.hypot(np.linalg.norm(tx), np.linalg.norm(ty))
        assert err <= 1e-8, f"order {m}: {err:.2e}"

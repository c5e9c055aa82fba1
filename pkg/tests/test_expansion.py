"""Order-by-order checks of the operator expansions.

Closed-form targets (the first orders of H at alpha = 0, the displayed
M1 / M2 / T1 / T2 brackets) are assembled here independently of the
recursion engine; the flat-strip comparison uses the exact shifted-depth
multiplier as an external oracle.  Inputs are band-limited well inside the
truncation box so every product stays in band and comparisons are exact up
to rounding.
"""

import numpy as np
import pytest

from beltrami_waves import (H0_apply, HodgeArgument, L_apply, M0_apply,
                            PhysicalParams, SpectralVectorField,
                            VectorArgument, expand_K_u_H, expand_S, div, dot,
                            grad, is_hermitian, laplacian, mean, multipliers_c_t,
                            perp_div, product, taylor_H, taylor_M, taylor_T)
from beltrami_waves.fields import (constant_field, constant_vector_field,
                                   field_from_modes, random_real_field,
                                   random_real_vector_field, zero_field)

N = 12
BAND = 2


def hodge(phi, gamma=(0.0, 0.0)):
    return HodgeArgument(np.asarray(gamma, dtype=float), phi)


# ---------------------------------------------------------------------------
# order zero


def test_h0_is_the_depth_multiplier(square_lattice, beltrami_params):
    phi = field_from_modes(square_lattice, N, {(2, 1): 1.0})
    out = H0_apply(hodge(phi), beltrami_params)
    s = float(np.hypot(*square_lattice.mode(2, 1)))
    _, t = multipliers_c_t(s, beltrami_params)
    assert abs(out.coeff(2, 1) - s * s * t) < 1e-13
    assert mean(out) == 0


def test_h0_irrotational_reduction(square_lattice, irrotational_params):
    phi = field_from_modes(square_lattice, N, {(3, 0): 1.0})
    out = H0_apply(hodge(phi), irrotational_params)
    s = 3.0
    assert abs(out.coeff(3, 0) - s * np.tanh(s)) < 1e-13


def test_h0_ignores_gamma_and_zero(square_lattice, beltrami_params):
    phi = zero_field(square_lattice, N)
    out = H0_apply(hodge(phi, (2.0, -1.0)), beltrami_params)
    assert out.l2_norm() == 0.0


def test_m0_constant_part(square_lattice, beltrami_params):
    g = zero_field(square_lattice, N)
    arg = VectorArgument(np.array([1.0, 0.0]),
                         SpectralVectorField(g, zero_field(square_lattice, N)))
    out = M0_apply(arg, beltrami_params)
    assert abs(mean(out)[0] + 1.0) < 1e-15 and abs(mean(out)[1]) < 1e-15


def test_m0_matches_l1_on_modes(square_lattice, irrotational_params, rng):
    g = random_real_vector_field(square_lattice, N, rng, band=BAND)
    arg = VectorArgument(np.zeros(2), g)
    out = M0_apply(arg, irrotational_params)
    l1 = L_apply(g, "L1", irrotational_params)
    assert np.max(np.abs((out - l1).x.coeffs)) < 1e-14


def test_l2_is_perp_of_l1(square_lattice, beltrami_params, rng):
    g = random_real_vector_field(square_lattice, N, rng, band=BAND)
    l1 = L_apply(g, "L1", beltrami_params)
    l2 = L_apply(g, "L2", beltrami_params)
    diff = l1.perp() - l2
    assert max(diff.x.l2_norm(), diff.y.l2_norm()) < 1e-13


def test_m0_perp_identity(square_lattice, beltrami_params, rng):
    # (M0(0, g))_perp = L2 g
    g = random_real_vector_field(square_lattice, N, rng, band=BAND)
    out = M0_apply(VectorArgument(np.zeros(2), g), beltrami_params).perp()
    l2 = L_apply(g, "L2", beltrami_params)
    diff = out - l2
    assert max(diff.x.l2_norm(), diff.y.l2_norm()) < 1e-13


def test_l_with_alpha_zero_has_no_perp_part(square_lattice, irrotational_params):
    # L g = grad(div g_perp) when alpha = 0: check on a single mode
    g = SpectralVectorField(field_from_modes(square_lattice, N, {(2, 1): 1.0}),
                            field_from_modes(square_lattice, N, {(2, 1): 0.5}))
    out = L_apply(g, "L", irrotational_params)
    expect = grad(perp_div(g))
    diff = out - expect
    assert max(diff.x.l2_norm(), diff.y.l2_norm()) < 1e-13


def test_t10_multiplier_on_single_mode(square_lattice, beltrami_params):
    c0 = np.array([1.3, -0.4])
    eta = field_from_modes(square_lattice, N, {(2, 1): 1.0})
    g = SpectralVectorField(c0[1] * eta, -c0[0] * eta)  # eta c_perp
    out = L_apply(g, "L1", beltrami_params)
    k = square_lattice.mode(2, 1)
    c_k, _ = multipliers_c_t(float(np.hypot(*k)), beltrami_params)
    k_perp = np.array([k[1], -k[0]])
    t10 = -(beltrami_params.alpha * k_perp + k * c_k) * (c0 @ k) / (k @ k)
    got = np.array([out.x.coeff(2, 1), out.y.coeff(2, 1)])
    assert np.max(np.abs(got - t10)) < 1e-13


# ---------------------------------------------------------------------------
# the H recursion


def test_taylor_h_vanishes_for_flat_surface(square_lattice, beltrami_params, rng):
    eta = zero_field(square_lattice, N)
    phi = random_real_field(square_lattice, N, rng, band=BAND)
    ser = taylor_H(eta, hodge(phi), 3, beltrami_params)
    for k in range(1, 4):
        assert ser[k].l2_norm() == 0.0


def test_irrotational_closed_forms(square_lattice, irrotational_params, rng):
    p = irrotational_params
    eta = random_real_field(square_lattice, N, rng, band=BAND, scale=0.3)
    phi = random_real_field(square_lattice, N, rng, band=BAND)
    ser = taylor_H(eta, hodge(phi), 2, p)

    def h0(f):
        return H0_apply(hodge(f), p)

    h1 = -h0(product(eta, h0(phi))) - div(product(eta, grad(phi)))
    eta_sq = product(eta, eta)
    h2 = h0(product(eta, h0(product(eta, h0(phi))))) \
        + 0.5 * h0(product(eta_sq, laplacian(phi))) \
        + 0.5 * laplacian(product(eta_sq, h0(phi)))
    assert (ser[1] - h1).l2_norm() / h1.l2_norm() < 1e-12
    assert (ser[2] - h2).l2_norm() / h2.l2_norm() < 1e-12


@pytest.mark.parametrize("alpha", [0.0, 0.5])
def test_flat_strip_oracle(square_lattice, alpha):
    # constant eta shifts the depth; partial sums converge at order K+1
    p = PhysicalParams(alpha=alpha, gravity=1.0, beta=0.0, depth=1.0)
    phi = field_from_modes(square_lattice, 4, {(2, 1): 1.0})
    arg = hodge(phi)
    s = float(np.hypot(*square_lattice.mode(2, 1)))
    errs = []
    for eps in (0.02, 0.01):
        eta = constant_field(square_lattice, 4, eps)
        total = taylor_H(eta, arg, 4, p).partial_sum()
        shifted = PhysicalParams(alpha=alpha, gravity=1.0, beta=0.0,
                                 depth=1.0 + eps)
        _, t = multipliers_c_t(s, shifted)
        errs.append(abs(total.coeff(2, 1) - s * s * t))
    ratio = errs[0] / errs[1]
    assert 2 ** 5 * 0.75 < ratio < 2 ** 5 * 1.25


def test_homogeneity_of_h_terms(square_lattice, beltrami_params, rng):
    eta = random_real_field(square_lattice, N, rng, band=BAND, scale=0.3)
    phi = random_real_field(square_lattice, N, rng, band=BAND)
    ser = taylor_H(eta, hodge(phi), 3, beltrami_params)
    ser_s = taylor_H(1.7 * eta, hodge(phi), 3, beltrami_params)
    for k in range(4):
        diff = (ser_s[k] - (1.7 ** k) * ser[k]).l2_norm()
        assert diff <= 1e-11 * max(ser[k].l2_norm(), 1e-30)


def test_linearity_in_argument(square_lattice, beltrami_params, rng):
    eta = random_real_field(square_lattice, N, rng, band=BAND, scale=0.3)
    phi1 = random_real_field(square_lattice, N, rng, band=BAND)
    phi2 = random_real_field(square_lattice, N, rng, band=BAND)
    s1, s2 = 0.7, -1.9
    combo = taylor_H(eta, hodge(s1 * phi1 + s2 * phi2), 2, beltrami_params)
    a = taylor_H(eta, hodge(phi1), 2, beltrami_params)
    b = taylor_H(eta, hodge(phi2), 2, beltrami_params)
    for k in range(3):
        diff = (combo[k] - (s1 * a[k] + s2 * b[k])).l2_norm()
        assert diff < 1e-11 * max(combo[k].l2_norm(), 1e-30)


def test_translation_equivariance_single_mode(square_lattice, beltrami_params):
    # translating eta and phi phase-shifts each term consistently
    v = np.array([0.3, -1.1])
    shift = {}
    for m in [(1, 0), (0, 1)]:
        shift[m] = np.exp(1j * (square_lattice.mode(*m) @ v))
    eta = field_from_modes(square_lattice, N, {(1, 0): 0.2, (-1, 0): 0.2})
    eta_t = field_from_modes(square_lattice, N, {
        (1, 0): 0.2 * shift[(1, 0)], (-1, 0): 0.2 * np.conj(shift[(1, 0)])})
    phi = field_from_modes(square_lattice, N, {(0, 1): 1.0, (0, -1): 1.0})
    phi_t = field_from_modes(square_lattice, N, {
        (0, 1): shift[(0, 1)], (0, -1): np.conj(shift[(0, 1)])})
    ser = taylor_H(eta, hodge(phi), 2, beltrami_params)
    ser_t = taylor_H(eta_t, hodge(phi_t), 2, beltrami_params)
    kx, ky, _ = __import__("beltrami_waves.fields", fromlist=["mode_vectors"]) \
        .mode_vectors(square_lattice, N)
    phase = np.exp(1j * (kx * v[0] + ky * v[1]))
    for k in range(3):
        diff = np.max(np.abs(ser_t[k].coeffs - phase * ser[k].coeffs))
        assert diff < 1e-12


def test_reality_preserved(square_lattice, beltrami_params, rng):
    eta = random_real_field(square_lattice, N, rng, band=BAND, scale=0.3)
    phi = random_real_field(square_lattice, N, rng, band=BAND)
    ser = taylor_H(eta, hodge(phi), 2, beltrami_params)
    for k in range(3):
        assert is_hermitian(ser[k])
    g = random_real_vector_field(square_lattice, N, rng, band=BAND)
    serm = taylor_M(eta, VectorArgument(np.zeros(2), g), 2, beltrami_params)
    for k in range(3):
        assert is_hermitian(serm[k])


def test_expand_k_u_consistency(square_lattice, beltrami_params, rng):
    # k = 2 and constant gradient: u2 = -|w|^2 H0 Phi + (K1 . w + H2)
    p = beltrami_params
    eta = field_from_modes(square_lattice, N, {(1, 0): 0.1, (-1, 0): 0.1})
    phi = random_real_field(square_lattice, N, rng, band=BAND)
    hser = taylor_H(eta, hodge(phi), 2, p)
    kser, user = expand_K_u_H(eta, hodge(phi), 2, hser, p)
    ge = grad(eta)
    gsq = product(ge.x, ge.x) + product(ge.y, ge.y)
    u2 = -1.0 * product(gsq, hser[0]) + dot(kser[1], ge) + hser[2]
    assert (user[2] - u2).l2_norm() < 1e-12 * max(u2.l2_norm(), 1e-30)
    # u1 = K0 . grad eta + H1
    u1 = dot(kser[0], ge) + hser[1]
    assert (user[1] - u1).l2_norm() < 1e-13


# ---------------------------------------------------------------------------
# the M recursion and the displayed brackets


def closed_m1(eta, g, p, lat):
    L1 = lambda v: L_apply(v, "L1", p)
    L2 = lambda v: L_apply(v, "L2", p)
    L = lambda v: L_apply(v, "L", p)
    e_l2g = product(eta, L2(g))
    return (L1(e_l2g) - product(eta, L(g)) - product(perp_div(g), grad(eta))
            - constant_vector_field(lat, eta.truncation,
                                    p.alpha * mean(e_l2g)))


def test_m1_closed_form(square_lattice, beltrami_params, rng):
    p = beltrami_params
    eta = random_real_field(square_lattice, N, rng, band=BAND, scale=0.4)
    g = random_real_vector_field(square_lattice, N, rng, band=BAND)
    ser = taylor_M(eta, VectorArgument(np.zeros(2), g), 1, p)
    m1 = closed_m1(eta, g, p, square_lattice)
    diff = ser[1] - m1
    assert diff.l2_norm() < 1e-12 * m1.l2_norm()


def test_m2_closed_form(square_lattice, beltrami_params, rng):
    p = beltrami_params
    lat = square_lattice
    eta = random_real_field(lat, N, rng, band=BAND, scale=0.4)
    g = random_real_vector_field(lat, N, rng, band=BAND)
    ser = taylor_M(eta, VectorArgument(np.zeros(2), g), 2, p)

    L1 = lambda v: L_apply(v, "L1", p)
    L2 = lambda v: L_apply(v, "L2", p)
    L = lambda v: L_apply(v, "L", p)
    ge = lambda f: product(eta, f)
    const = lambda v: constant_vector_field(lat, N, v)
    lg, l2g, l1g = L(g), L2(g), L1(g)
    m_el1g = mean(ge(l1g))
    geta = grad(eta)
    alpha = p.alpha
    x_vec = 2 * alpha * const(m_el1g) + 2 * L2(ge(l2g)) - ge(lg.perp())
    m2 = 0.5 * (
        2 * alpha * L1(ge(const(m_el1g)))
        + 2 * alpha ** 2 * ge(const(m_el1g))
        + 2 * L1(ge(L2(ge(l2g))))
        - ge(L(ge(l2g)))
        + product(div(ge(l1g)), geta)
        - L1(product(product(eta, eta), lg.perp()))
        + grad(product(eta, dot(l1g, geta)))
        + alpha * ge(L2(ge(l2g)) - ge(lg.perp()))
        - alpha * const(mean(ge(x_vec)))
    )
    diff = ser[2] - m2
    assert diff.l2_norm() < 1e-12 * m2.l2_norm()


def test_m_terms_vanish_for_flat_surface(square_lattice, beltrami_params, rng):
    eta = zero_field(square_lattice, N)
    g = random_real_vector_field(square_lattice, N, rng, band=BAND)
    ser = taylor_M(eta, VectorArgument(np.zeros(2), g), 3, beltrami_params)
    for k in range(1, 4):
        assert ser[k].l2_norm() == 0.0


def test_m_homogeneity(square_lattice, beltrami_params, rng):
    eta = random_real_field(square_lattice, N, rng, band=BAND, scale=0.4)
    g = random_real_vector_field(square_lattice, N, rng, band=BAND)
    arg = VectorArgument(np.zeros(2), g)
    ser = taylor_M(eta, arg, 3, beltrami_params)
    ser_s = taylor_M(0.6 * eta, arg, 3, beltrami_params)
    for k in range(4):
        diff = (ser_s[k] - (0.6 ** k) * ser[k]).l2_norm()
        assert diff <= 1e-11 * max(ser[k].l2_norm(), 1e-30)


# ---------------------------------------------------------------------------
# S and T


def test_s_terms_first_three(square_lattice, rng):
    c = np.array([1.1, -0.7])
    alpha = 0.8
    eta = random_real_field(square_lattice, N, rng, band=BAND)
    ser = expand_S(eta, c, alpha, 3)
    c_perp = np.array([c[1], -c[0]])
    eta2 = product(eta, eta)
    eta3 = product(eta2, eta)
    s1 = SpectralVectorField(c_perp[0] * eta, c_perp[1] * eta)
    s2 = SpectralVectorField(-(alpha / 2) * c[0] * eta2,
                             -(alpha / 2) * c[1] * eta2)
    s3 = SpectralVectorField(-(alpha ** 2 / 6) * c_perp[0] * eta3,
                             -(alpha ** 2 / 6) * c_perp[1] * eta3)
    for got, expect in [(ser[1], s1), (ser[2], s2), (ser[3], s3)]:
        diff = got - expect
        assert max(diff.x.l2_norm(), diff.y.l2_norm()) < 1e-12


def test_s_terms_vanish_for_alpha_zero(square_lattice, rng):
    eta = random_real_field(square_lattice, N, rng, band=BAND)
    ser = expand_S(eta, (1.0, 0.0), 0.0, 4)
    for k in range(2, 5):
        assert ser[k].l2_norm() == 0.0


def test_s_partial_sums_converge_to_closed_form(square_lattice):
    # constant eta: S is an explicit rotation-type expression
    c = np.array([0.9, 0.4])
    alpha = 1.3
    eps = 0.35
    eta = constant_field(square_lattice, 2, eps)
    closed = (c[0] / alpha) * np.array([np.cos(alpha * eps) - 1.0,
                                        -np.sin(alpha * eps)]) \
        + (c[1] / alpha) * np.array([np.sin(alpha * eps),
                                     np.cos(alpha * eps) - 1.0])
    errs = []
    for order in (3, 5, 7, 9):
        ser = expand_S(eta, c, alpha, order)
        total = ser.partial_sum()
        got = np.array([total.x.coeff(0, 0), total.y.coeff(0, 0)])
        errs.append(np.max(np.abs(got - closed)))
    # factorial rate: each two extra orders cut the error by far more than
    # the geometric factor (alpha*eps)^2 alone would
    for lo, hi in zip(errs[1:], errs[:-1]):
        assert lo < 0.05 * hi
    assert errs[-1] < 1e-9


def test_t0_is_zero_and_t1_single_mode(square_lattice, beltrami_params):
    c0 = np.array([1.3, -0.4])
    eta = field_from_modes(square_lattice, N, {(2, 1): 1.0})
    ser = taylor_T(eta, c0, 1, beltrami_params)
    assert ser[0].x.l2_norm() == 0.0 and ser[0].y.l2_norm() == 0.0
    k = square_lattice.mode(2, 1)
    c_k, _ = multipliers_c_t(float(np.hypot(*k)), beltrami_params)
    k_perp = np.array([k[1], -k[0]])
    t10 = -(beltrami_params.alpha * k_perp + k * c_k) * (c0 @ k) / (k @ k)
    got = np.array([ser[1].x.coeff(2, 1), ser[1].y.coeff(2, 1)])
    assert np.max(np.abs(got - t10)) < 1e-13


def test_t2_closed_form(square_lattice, beltrami_params, rng):
    p = beltrami_params
    lat = square_lattice
    c0 = np.array([1.3, -0.4])
    eta = random_real_field(lat, N, rng, band=BAND, scale=0.4)
    ser = taylor_T(eta, c0, 2, p)
    L1 = lambda v: L_apply(v, "L1", p)
    L2 = lambda v: L_apply(v, "L2", p)
    L = lambda v: L_apply(v, "L", p)
    ecp = SpectralVectorField(c0[1] * eta, -c0[0] * eta)
    ec = SpectralVectorField(c0[0] * eta, c0[1] * eta)
    eta2 = product(eta, eta)
    e2c = SpectralVectorField(c0[0] * eta2, c0[1] * eta2)
    t2 = (-0.5 * p.alpha * L1(e2c) + L1(product(eta, L2(ecp)))
          - product(eta, L(ecp)) + product(div(ec), grad(eta))
          - p.alpha * constant_vector_field(lat, N, mean(product(eta, L2(ecp)))))
    diff = ser[2] - t2
    assert diff.l2_norm() < 1e-12 * t2.l2_norm()


def test_t_homogeneity(square_lattice, beltrami_params, rng):
    c0 = np.array([1.3, -0.4])
    eta = random_real_field(square_lattice, N, rng, band=BAND, scale=0.4)
    ser = taylor_T(eta, c0, 3, beltrami_params)
    ser_s = taylor_T(2.3 * eta, c0, 3, beltrami_params)
    for k in range(1, 4):
        diff = (ser_s[k] - (2.3 ** k) * ser[k]).l2_norm()
        assert diff <= 1e-11 * max(ser[k].l2_norm(), 1e-30)

import numpy as np
import pytest

from liemax import (
    Ad_star,
    CotangentPoint,
    GroupPoint,
    LogDomainError,
    compare_cotangent,
    group_exp,
    group_log,
    identity,
    momentum_maps,
)
from liemax.algebra import ad_star


def test_group_exp_zero(heis):
    g = group_exp(heis.algebra.vector([0, 0, 0]))
    assert np.allclose(g.matrix, np.eye(3))


def test_group_exp_heisenberg_nilpotent(heis):
    # exp of the first generator terminates after the linear term
    g = group_exp(heis.algebra.basis_vector(0))
    expected = np.eye(3)
    expected[0, 1] = 1.0
    assert np.allclose(g.matrix, expected)


def test_group_log_round_trip_so3(so3):
    xi = so3.algebra.basis_vector(1) * 0.3
    back = group_log(group_exp(xi))
    assert np.allclose(back.coords, xi.coords, atol=1e-10)


def test_group_exp_log_round_trip_all(all_bundles, rng):
    for bundle in all_bundles:
        a = bundle.algebra
        for _ in range(5):
            xi = a.vector(0.4 * rng.normal(size=a.dim))
            g = group_exp(xi)
            assert np.allclose(group_exp(group_log(g)).matrix, g.matrix, atol=1e-9)


def test_group_log_domain_error(so3):
    # a half-turn has eigenvalue -1: outside the principal-log domain
    half_turn = GroupPoint(so3.algebra, np.diag([1.0, -1.0, -1.0]))
    with pytest.raises(LogDomainError):
        group_log(half_turn)


def test_Ad_star_identity(se2, rng):
    p = se2.algebra.covector(rng.normal(size=3))
    assert np.allclose(Ad_star(identity(se2.algebra), p).coords, p.coords)


def test_Ad_star_composition_oracle(all_bundles, rng):
    # the pullback convention composes contravariantly; the double application
    # is the direct oracle
    for bundle in all_bundles:
        a = bundle.algebra
        for _ in range(5):
            g = group_exp(a.vector(0.5 * rng.normal(size=a.dim)))
            h = group_exp(a.vector(0.5 * rng.normal(size=a.dim)))
            p = a.covector(rng.normal(size=a.dim))
            lhs = Ad_star(g @ h, p).coords
            rhs = Ad_star(h, Ad_star(g, p)).coords
            assert np.allclose(lhs, rhs, atol=1e-10)


def test_Ad_star_so3_rotation_fixes_own_axis(so3):
    g = group_exp(so3.algebra.basis_vector(2) * 0.77)
    f3 = so3.algebra.basis_covector(2)
    assert np.allclose(Ad_star(g, f3).coords, f3.coords, atol=1e-12)


def test_Ad_star_derivative_matches_ad_star(all_bundles, rng):
    # central differences at step 1e-5 of t -> Ad*(exp(t xi), p)
    for bundle in all_bundles:
        a = bundle.algebra
        xi = a.vector(rng.normal(size=a.dim))
        p = a.covector(rng.normal(size=a.dim))
        h = 1e-5
        plus = Ad_star(group_exp(xi * h), p).coords
        minus = Ad_star(group_exp(xi * (-h)), p).coords
        fd = (plus - minus) / (2 * h)
        assert np.allclose(fd, ad_star(xi, p).coords, atol=1e-6)


def test_compare_cotangent_reflexive(se2, rng):
    a = se2.algebra
    g = group_exp(a.vector(rng.normal(size=3)))
    pt = CotangentPoint(g, a.covector(rng.normal(size=3)), "left")
    assert compare_cotangent(pt, pt) == 0.0


def test_compare_cotangent_identity_base_both_sides(heis, rng):
    a = heis.algebra
    p = a.covector(rng.normal(size=3))
    left = CotangentPoint(identity(a), p, "left")
    right = CotangentPoint(identity(a), p, "right")
    assert compare_cotangent(left, right) <= 1e-15


def test_compare_cotangent_transport_formula(se2, rng):
    # build the right covector from the transport rule q(eta) = p(g^-1 eta g)
    a = se2.algebra
    g = group_exp(a.vector(rng.normal(size=3)))
    p = a.covector(rng.normal(size=3))
    q = Ad_star(g.inverse(), p)
    left = CotangentPoint(g, p, "left")
    right = CotangentPoint(g, q, "right")
    assert compare_cotangent(left, right) <= 1e-12


def test_compare_cotangent_base_mismatch_dominates(se2, rng):
    a = se2.algebra
    p = a.covector(rng.normal(size=3))
    g1 = group_exp(a.vector([1.0, 0, 0]))
    g2 = group_exp(a.vector([0, 1.0, 0]))
    res = compare_cotangent(CotangentPoint(g1, p, "left"), CotangentPoint(g2, p, "left"))
    assert res >= np.max(np.abs(g1.matrix - g2.matrix))


def test_momentum_maps_at_identity(so3, rng):
    a = so3.algebra
    p = a.covector(rng.normal(size=3))
    jl, jr = momentum_maps(CotangentPoint(identity(a), p, "left"))
    assert np.allclose(jl.coords, p.coords)
    assert np.allclose(jr.coords, p.coords)


def test_momentum_maps_cross_check_with_Ad_star(se2, rng):
    a = se2.algebra
    g = group_exp(a.vector(rng.normal(size=3)))
    p = a.covector(rng.normal(size=3))
    jl, jr = momentum_maps(CotangentPoint(g, p, "left"))
    assert np.allclose(jl.coords, Ad_star(g.inverse(), p).coords)
    assert np.allclose(jr.coords, p.coords)
    # right-trivialized: J_L is the raw covector, J_R transports forward
    q = a.covector(rng.normal(size=3))
    jl2, jr2 = momentum_maps(CotangentPoint(g, q, "right"))
    assert np.allclose(jl2.coords, q.coords)
    assert np.allclose(jr2.coords, Ad_star(g, q).coords)


def test_catalog_variety_residuals(all_bundles, rng):
    for bundle in all_bundles:
        a = bundle.algebra
        g = group_exp(a.vector(0.6 * rng.normal(size=a.dim)))
        assert bundle.variety_residual(g.matrix) <= 1e-9

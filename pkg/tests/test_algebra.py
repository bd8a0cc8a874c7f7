import numpy as np
import pytest

from liemax import (
    DimensionMismatchError,
    LieAlgebra,
    LinearMapOnAlgebra,
    MatrixRepresentation,
    ValidationError,
    ad_star,
    bracket,
    classify_map,
    orbit_report,
)
from liemax.algebra import ad_star_matrix, homomorphism_residual, jacobi_residual


def test_bracket_heisenberg_catalog(heis):
    e1, e2 = heis.algebra.basis_vector(0), heis.algebra.basis_vector(1)
    assert np.allclose(bracket(e1, e2).coords, [0, 0, 1])


def test_bracket_antisymmetry_on_diagonal(so3, rng):
    x = so3.algebra.vector(rng.normal(size=3))
    assert np.allclose(bracket(x, x).coords, 0.0)


def test_bracket_bilinear_expansion_so3(so3):
    # [e1+e2, e2] = [e1,e2] + [e2,e2] = e3, expanded by hand over the basis
    a = so3.algebra
    x = a.basis_vector(0) + a.basis_vector(1)
    assert np.allclose(bracket(x, a.basis_vector(1)).coords, [0, 0, 1])


def test_bracket_dimension_mismatch(heis, engel):
    with pytest.raises(DimensionMismatchError):
        bracket(heis.algebra.basis_vector(0), engel.algebra.basis_vector(0))


def test_ad_star_zero_argument(heis, rng):
    a = heis.algebra
    zero = a.vector([0, 0, 0])
    p = a.covector(rng.normal(size=3))
    assert np.allclose(ad_star(zero, p).coords, 0.0)


def test_ad_star_heisenberg_hand_value(heis):
    # (ad*_{e1} f3)(e_k) = f3([e1, e_k]) picks out c[1][2][3] = 1 on the e2 slot
    a = heis.algebra
    out = ad_star(a.basis_vector(0), a.basis_covector(2))
    assert np.allclose(out.coords, [0, 1, 0])


def test_ad_star_self_annihilation(all_bundles, rng):
    # p([xi, xi]) = 0 exactly up to roundoff
    for bundle in all_bundles:
        a = bundle.algebra
        for _ in range(20):
            xi = a.vector(rng.normal(size=a.dim))
            p = a.covector(rng.normal(size=a.dim))
            assert abs(ad_star(xi, p).pair(xi)) <= 1e-14


def test_ad_star_bilinearity(se2, rng):
    a = se2.algebra
    x, y = a.vector(rng.normal(size=3)), a.vector(rng.normal(size=3))
    p = a.covector(rng.normal(size=3))
    lhs = ad_star(x + 2.0 * y, p).coords
    rhs = ad_star(x, p).coords + 2.0 * ad_star(y, p).coords
    assert np.allclose(lhs, rhs, atol=1e-14)


def test_orbit_report_heisenberg_vertical_covector(heis):
    rep = orbit_report(heis.algebra.basis_covector(2))
    assert rep.codim == 1
    assert rep.in_generic_set
    assert rep.pairing == pytest.approx(1.0)
    gen = rep.stabilizer_basis[0]
    assert np.allclose(gen.coords, [0, 0, 1])


def test_orbit_report_zero_covector(all_bundles):
    for bundle in all_bundles:
        rep = orbit_report(bundle.algebra.covector([0.0] * bundle.algebra.dim))
        assert rep.codim == bundle.algebra.dim
        assert not rep.in_generic_set


def test_orbit_report_engel_generic_codim_two(engel, rng):
    # the ad*-matrix rows span at most two directions, so orbits have codim 2
    for _ in range(10):
        p = engel.algebra.covector(rng.uniform(0.2, 1.0, size=4))
        rep = orbit_report(p)
        assert rep.codim == 2
        assert not rep.in_generic_set


def test_orbit_report_se2_generic_set(se2):
    a = se2.algebra
    assert orbit_report(a.covector([1.0, 0.2, 5.0])).in_generic_set
    assert not orbit_report(a.covector([0.0, 0.0, 1.0])).in_generic_set


def test_orbit_openness_near_generic_points(se2, heis, rng):
    # perturbing by 1e-10 must not flip the flag away from the degenerate locus
    for bundle, coords in [(se2, [0.7, -0.4, 0.9]), (heis, [0.5, 0.5, 0.8])]:
        a = bundle.algebra
        base = orbit_report(a.covector(coords)).in_generic_set
        assert base
        for _ in range(10):
            delta = 1e-10 * rng.normal(size=3)
            assert orbit_report(a.covector(np.array(coords) + delta)).in_generic_set


def test_ad_star_matrix_rows(heis, rng):
    a = heis.algebra
    p = rng.normal(size=3)
    M = ad_star_matrix(a, p)
    for i in range(3):
        assert np.allclose(M[i], ad_star(a.basis_vector(i), a.covector(p)).coords)


def test_classify_identity(se2):
    cls = classify_map(LinearMapOnAlgebra(se2.algebra, np.eye(3)))
    assert cls.kind == "automorphism"
    assert cls.automorphism_residual == 0.0


def test_classify_negation_is_anti(so3):
    cls = classify_map(LinearMapOnAlgebra(so3.algebra, -np.eye(3)))
    assert cls.kind == "anti_automorphism"


def test_classify_se2_reflection(se2):
    sigma = LinearMapOnAlgebra(se2.algebra, np.diag([1.0, -1.0, -1.0]))
    assert classify_map(sigma).kind == "automorphism"


def test_classify_neither(se2):
    sigma = LinearMapOnAlgebra(se2.algebra, np.array([[1.0, 0.3, 0], [0, 1, 0], [0.2, 0, 1]]))
    assert classify_map(sigma).kind == "neither"


def test_classify_composition_closure(se2):
    a = LinearMapOnAlgebra(se2.algebra, np.diag([1.0, -1.0, -1.0]))
    b = LinearMapOnAlgebra(se2.algebra, np.diag([-1.0, 1.0, -1.0]))
    assert classify_map(a.compose(b)).kind == "automorphism"


def test_linear_map_requires_invertible(se2):
    with pytest.raises(ValidationError):
        LinearMapOnAlgebra(se2.algebra, np.zeros((3, 3)))


def test_algebra_gates_reject_bad_jacobi():
    # [e1,e2]=e3, [e1,e3]=e1 violates Jacobi; use a representation-free check
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    c[0, 2, 0], c[2, 0, 0] = 1.0, -1.0
    res, triple = jacobi_residual(c)
    assert res > 1e-12
    mats = np.array([np.eye(3), 2 * np.eye(3), 3 * np.eye(3)])
    with pytest.raises(ValidationError):
        LieAlgebra(3, c, ("a", "b", "c"), MatrixRepresentation(3, mats))


def test_representation_must_be_faithful():
    mats = np.array([np.eye(2), 2 * np.eye(2)])
    with pytest.raises(ValidationError):
        MatrixRepresentation(2, mats)


def test_homomorphism_residual_detects_corruption(heis):
    mats = np.array(heis.algebra.representation.matrices)
    mats[2, 0, 2] += 1e-3  # break rho([e1,e2]) = [rho e1, rho e2]
    res, pair = homomorphism_residual(heis.algebra.structure_constants, mats)
    assert res == pytest.approx(1e-3)
    assert pair == (0, 1)


def test_catalog_jacobi_and_homomorphism_gates(all_bundles):
    for bundle in all_bundles:
        res, _ = jacobi_residual(bundle.algebra.structure_constants)
        assert res <= 1e-12
        hom, _ = homomorphism_residual(
            bundle.algebra.structure_constants, bundle.algebra.representation.matrices
        )
        assert hom <= 1e-12

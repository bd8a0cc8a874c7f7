import numpy as np
import pytest

from liemax import (
    DomainError,
    ValidationError,
    killing_form,
    killing_hamiltonian,
    make_hamiltonian,
    pullback_hamiltonian,
    sr_hamiltonian,
    vertical_field,
)
from liemax.algebra import LinearMapOnAlgebra
from liemax.hamiltonians import finite_difference_differential


def test_sr_value_annihilating_covector(heis):
    H = heis.hamiltonians["sr"]
    assert H.value(np.array([0.0, 0.0, 1.0])) == 0.0


def test_sr_value_single_momentum(heis):
    H = heis.hamiltonians["sr"]
    assert H.value(np.array([1.0, 0.0, 5.0])) == pytest.approx(0.5)


def test_sr_differential_matches_finite_differences(heis):
    H = heis.hamiltonians["sr"]
    p = np.array([1.0, 2.0, 0.0])
    assert np.allclose(H.differential(p), [1.0, 2.0, 0.0])
    fd = finite_difference_differential(H.value, 3)(p)
    assert np.allclose(fd, H.differential(p), atol=1e-8)


def test_sr_rejects_dependent_frame(heis):
    a = heis.algebra
    with pytest.raises(ValidationError):
        sr_hamiltonian(a, [a.basis_vector(0), a.basis_vector(0) * 2.0])


def test_construction_gate_rejects_wrong_differential(heis):
    with pytest.raises(ValidationError):
        make_hamiltonian(
            heis.algebra,
            value=lambda p: float(p @ p),
            differential=lambda p: p,  # off by the factor 2
        )


def test_custom_hamiltonian_default_differential(heis, rng):
    H = make_hamiltonian(heis.algebra, value=lambda p: float(np.sum(p**2) / 2))
    p = rng.normal(size=3)
    assert np.allclose(H.differential(p), p, atol=1e-8)


def test_killing_form_so3_and_degenerate_cases(so3, se2, heis, engel):
    assert np.allclose(killing_form(so3.algebra), -2.0 * np.eye(3))
    for bundle in (se2, heis, engel):
        with pytest.raises(DomainError):
            killing_hamiltonian(bundle.algebra)


def test_killing_positive_and_flat_vertical(so3, rng):
    HK = so3.hamiltonians["killing"]
    assert HK.value(np.array([1.0, 0.0, 0.0])) > 0.0
    for _ in range(100):
        p = so3.algebra.covector(rng.normal(size=3))
        assert np.max(np.abs(vertical_field(HK, p).coords)) <= 1e-14


def test_pullback_hamiltonian_matches_composition(se2, rng):
    H = se2.hamiltonians["sr"]
    sigma = LinearMapOnAlgebra(se2.algebra, np.diag([1.0, -1.0, -1.0]))
    h = pullback_hamiltonian(H, sigma)
    for _ in range(20):
        q = rng.normal(size=3)
        assert h.value(q) == pytest.approx(H.value(sigma.matrix.T @ q))
        assert np.allclose(
            h.differential(q), sigma.matrix @ H.differential(sigma.matrix.T @ q)
        )

"""Left-invariant Hamiltonians on the dual algebra.

A Hamiltonian is a function of covector coordinates together with its
differential, an algebra element.  Construction runs a finite-difference
consistency gate so that user-supplied differentials cannot silently disagree
with the value function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import AlgebraVector, Covector, LieAlgebra, LinearMapOnAlgebra
from .errors import DomainError, ValidationError

_GATE_SAMPLES = 100
_GATE_TOL = 1e-6
_GATE_SEED = 20240


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """A Hamiltonian on the dual algebra with value and differential.

    ``value`` and ``differential`` operate on raw coordinate arrays; that is the
    fast path used by the integrators.  ``value_at``/``differential_at`` wrap
    the domain types for convenience.
    """

    algebra: LieAlgebra
    value: Callable[[np.ndarray], float]
    differential: Callable[[np.ndarray], np.ndarray]
    kind: str  # "sub_riemannian" | "killing" | "custom"
    label: str
    frame: tuple[tuple[float, ...], ...] | None = None  # sub_riemannian only

    def value_at(self, p: Covector) -> float:
        return float(self.value(p.coords))

    def differential_at(self, p: Covector) -> AlgebraVector:
        return AlgebraVector(self.algebra, self.differential(p.coords))


def finite_difference_differential(
    value: Callable[[np.ndarray], float], n: int
) -> Callable[[np.ndarray], np.ndarray]:
    """Central-difference differential with step 1e-6 * max(1, |p|)."""

    def diff(p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        h = 1e-6 * max(1.0, float(np.linalg.norm(p)))
        out = np.empty(n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            out[i] = (value(p + e) - value(p - e)) / (2.0 * h)
        return out

    return diff


def _run_gate(spec: HamiltonianSpec) -> None:
    n = spec.algebra.dim
    fd = finite_difference_differential(spec.value, n)
    rng = np.random.default_rng(_GATE_SEED)
    for _ in range(_GATE_SAMPLES):
        p = rng.standard_normal(n)
        analytic = np.asarray(spec.differential(p), dtype=float)
        approx = fd(p)
        scale = 1.0 + float(np.linalg.norm(analytic))
        err = float(np.max(np.abs(analytic - approx)))
        if err > _GATE_TOL * scale:
            raise ValidationError(
                f"Hamiltonian '{spec.label}': differential disagrees with value "
                f"(finite-difference residual {err:.3e} at p={p})"
            )


def make_hamiltonian(
    algebra: LieAlgebra,
    value: Callable[[np.ndarray], float],
    differential: Callable[[np.ndarray], np.ndarray] | None = None,
    label: str = "custom",
    kind: str = "custom",
) -> HamiltonianSpec:
    """Build and validate a Hamiltonian; missing differentials fall back to
    central finite differences."""
    if differential is None:
        differential = finite_difference_differential(value, algebra.dim)
    spec = HamiltonianSpec(algebra, value, differential, kind, label)
    _run_gate(spec)
    return spec


def sr_hamiltonian(
    algebra: LieAlgebra,
    frame: list[AlgebraVector],
    weights: list[float] | None = None,
    label: str = "sr",
) -> HamiltonianSpec:
    """Maximized Hamiltonian of a left-invariant sub-Riemannian frame.

    H(p) = 1/2 sum_i w_i p(X_i)^2 with analytic differential
    dH = sum_i w_i p(X_i) X_i.
    """
    X = np.array([v.coords for v in frame], dtype=float)
    if X.ndim != 2 or X.shape[1] != algebra.dim:
        raise ValidationError("frame vectors must share the algebra's dimension")
    if np.linalg.matrix_rank(X) < X.shape[0]:
        raise ValidationError("frame vectors are linearly dependent")
    w = np.ones(X.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (X.shape[0],):
        raise ValidationError("need one weight per frame vector")

    def value(p: np.ndarray) -> float:
        momenta = X @ p
        return 0.5 * float(w @ (momenta * momenta))

    def differential(p: np.ndarray) -> np.ndarray:
        return X.T @ (w * (X @ p))

    spec = HamiltonianSpec(
        algebra, value, differential, "sub_riemannian", label,
        frame=tuple(tuple(row) for row in X),
    )
    _run_gate(spec)
    return spec


def killing_form(algebra: LieAlgebra) -> np.ndarray:
    """Trace form of the adjoint representation: K[a,b] = tr(ad_a ad_b)."""
    c = algebra.structure_constants
    return np.einsum("ajk,bkj->ab", c, c)


def killing_hamiltonian(algebra: LieAlgebra, label: str = "killing") -> HamiltonianSpec:
    """Riemannian Hamiltonian of the bi-invariant metric on a compact algebra.

    Requires the Killing form to be negative definite; H(p) = 1/2 p(B^{-1} p)
    with B the sign-normalized (positive definite) form.  Its vertical field
    vanishes identically, which the flow tests assert.
    """
    K = killing_form(algebra)
    eigs = np.linalg.eigvalsh(K)
    worst = float(eigs.max())
    if worst > -1e-12:
        raise DomainError(
            f"Killing form is not negative definite (eigenvalue {worst:.6g}); "
            "the bi-invariant metric is undefined"
        )
    B_inv = np.linalg.inv(-K)

    def value(p: np.ndarray) -> float:
        return 0.5 * float(p @ (B_inv @ p))

    def differential(p: np.ndarray) -> np.ndarray:
        return B_inv @ p

    spec = HamiltonianSpec(algebra, value, differential, "killing", label)
    _run_gate(spec)
    return spec


def pullback_hamiltonian(
    H: HamiltonianSpec, sigma: LinearMapOnAlgebra, label: str | None = None
) -> HamiltonianSpec:
    """The Hamiltonian q -> H(sigma* q), with differential sigma(dH(sigma* q)).

    Used to drive right-invariant flows: when sigma* preserves H this function
    equals H pointwise, but the composition is kept explicit so the identity is
    exercised rather than assumed.
    """
    m = sigma.matrix
    mt = m.T

    def value(q: np.ndarray) -> float:
        return H.value(mt @ q)

    def differential(q: np.ndarray) -> np.ndarray:
        return m @ H.differential(mt @ q)

    spec = HamiltonianSpec(
        H.algebra, value, differential, H.kind, label or f"{H.label}_pullback"
    )
    _run_gate(spec)
    return spec

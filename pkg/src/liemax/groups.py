"""Matrix Lie group arithmetic: exp/log, coadjoint action, cotangent points.

Group elements are m-by-m matrices in the algebra's representation.  The
coadjoint action follows the pullback convention ``(Ad*_g p)(xi) = p(Ad_g xi)``
with ``Ad_g xi = g rho(xi) g^{-1}``; composition is therefore contravariant:
``Ad_star(g h, p) = Ad_star(h, Ad_star(g, p))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import AlgebraVector, Covector, LieAlgebra, _readonly
from .errors import (
    DimensionMismatchError,
    LogDomainError,
    RepresentationClosureError,
    ValidationError,
)

CLOSURE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """A group element as an invertible matrix in the representation."""

    algebra: LieAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        size = self.algebra.representation.size
        if m.shape != (size, size):
            raise DimensionMismatchError(f"group matrix must be {size}x{size}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("group matrix must be finite")
        if abs(np.linalg.det(m)) <= 1e-12:
            raise ValidationError("group matrix must be invertible")
        object.__setattr__(self, "matrix", m)

    def inverse(self) -> "GroupPoint":
        return GroupPoint(self.algebra, np.linalg.inv(self.matrix))

    def __matmul__(self, other: "GroupPoint") -> "GroupPoint":
        return GroupPoint(self.algebra, self.matrix @ other.matrix)


def identity(algebra: LieAlgebra) -> GroupPoint:
    return GroupPoint(algebra, algebra.identity_matrix)


@dataclass(frozen=True, eq=False)
class CotangentPoint:
    """A group element with a covector, tagged by its trivialization side."""

    g: GroupPoint
    covector: Covector
    side: str  # "left" | "right"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValidationError("side must be 'left' or 'right'")
        if self.g.algebra.dim != self.covector.algebra.dim:
            raise DimensionMismatchError("group point and covector disagree on dimension")


def group_exp(xi: AlgebraVector) -> GroupPoint:
    """Matrix exponential of the represented algebra element."""
    return GroupPoint(xi.algebra, scipy.linalg.expm(xi.matrix()))


def group_log(g: GroupPoint) -> AlgebraVector:
    """Principal matrix logarithm, re-expressed in the algebra basis.

    Raises LogDomainError for eigenvalues on the closed negative real axis and
    RepresentationClosureError when the logarithm falls outside the algebra's
    image (residual above 1e-9).
    """
    eigs = np.linalg.eigvals(g.matrix)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    for lam in eigs:
        if lam.real <= 0 and abs(lam.imag) <= 1e-12 * scale:
            raise LogDomainError(
                f"eigenvalue {lam:.6g} lies on the closed negative real axis; "
                "principal logarithm undefined"
            )
    X = scipy.linalg.logm(g.matrix)
    if np.iscomplexobj(X):
        if np.max(np.abs(X.imag)) > 1e-10 * max(1.0, np.max(np.abs(X.real))):
            raise LogDomainError("matrix logarithm is not real")
        X = X.real
    coords, residual = g.algebra.representation.project(X)
    if residual > CLOSURE_TOL:
        raise RepresentationClosureError(
            f"logarithm leaves the algebra image (residual {residual:.3e})"
        )
    return AlgebraVector(g.algebra, coords)


def adjoint_matrix(g: GroupPoint) -> np.ndarray:
    """Matrix A of Ad_g on basis coordinates: column k holds Ad_g e_k.

    Raises RepresentationClosureError when conjugation leaves the algebra's
    image, which signals an invalid group element for this representation.
    """
    rep = g.algebra.representation
    ginv = np.linalg.inv(g.matrix)
    conj = np.einsum("ab,nbc,cd->nad", g.matrix, rep.matrices, ginv)
    n = g.algebra.dim
    cols = np.empty((n, n))
    worst = 0.0
    for k in range(n):
        coords, residual = rep.project(conj[k])
        worst = max(worst, residual)
        cols[:, k] = coords
    if worst > CLOSURE_TOL * max(1.0, float(np.max(np.abs(g.matrix))) ** 2):
        raise RepresentationClosureError(
            f"Ad_g leaves the algebra image (residual {worst:.3e}); "
            "group element not valid for this representation"
        )
    return cols


def Ad_star(g: GroupPoint, p: Covector) -> Covector:
    """Coadjoint action (Ad*_g p)(xi) = p(Ad_g xi)."""
    if g.algebra.dim != p.algebra.dim:
        raise DimensionMismatchError("group point and covector disagree on dimension")
    A = adjoint_matrix(g)
    return Covector(p.algebra, A.T @ p.coords)


def momentum_maps(point: CotangentPoint) -> tuple[Covector, Covector]:
    """Momentum maps (J_L, J_R) of the left and right group actions.

    For a left-trivialized point (g, p): J_R = p and J_L(xi) = p(Ad_{g^-1} xi);
    for a right-trivialized point (g, q): J_L = q and J_R(xi) = q(Ad_g xi).
    J_L is conserved along left-invariant flows, J_R along right-invariant ones.
    """
    if point.side == "left":
        j_l = Ad_star(point.g.inverse(), point.covector)
        return j_l, point.covector
    j_r = Ad_star(point.g, point.covector)
    return point.covector, j_r


def transport_covector(p: Covector, g: GroupPoint, from_side: str, to_side: str) -> Covector:
    """Move a covector between trivializations at base point g.

    A left covector p and a right covector q at the same g represent the same
    cotangent vector iff p(xi) = q(g xi g^{-1}) for every basis xi.
    """
    if from_side == to_side:
        return p
    if from_side == "right":  # q -> p: p = Ad*_g q
        return Ad_star(g, p)
    return Ad_star(g.inverse(), p)  # p -> q


def compare_cotangent(a: CotangentPoint, b: CotangentPoint) -> float:
    """Residual between two cotangent points; zero iff they coincide.

    The base-point distance dominates: no transport is attempted to a different
    base, so the residual includes the matrix distance in that case.
    """
    base = float(np.max(np.abs(a.g.matrix - b.g.matrix)))
    moved = transport_covector(b.covector, a.g, b.side, a.side)
    cov = float(np.max(np.abs(a.covector.coords - moved.coords)))
    return max(base, cov)

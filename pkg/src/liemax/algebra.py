"""Lie algebra arithmetic over a fixed structure-constant basis.

Conventions, fixed once and used consistently everywhere:

* structure constants ``c[i, j, k]`` mean ``[e_i, e_j] = sum_k c[i, j, k] e_k``;
* the infinitesimal coadjoint action is ``(ad*_xi p)(eta) = p([xi, eta])``,
  so in coordinates ``ad_star(xi, p)_j = sum_{i,k} xi_i c[i, j, k] p_k``;
* a linear map on the algebra acts on basis coordinates by its matrix, and its
  dual acts on covector coordinates by the transpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, ValidationError

JACOBI_TOL = 1e-12
HOMOMORPHISM_TOL = 1e-12
RANK_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MatrixRepresentation:
    """A faithful matrix model of the algebra: one m-by-m matrix per basis vector."""

    size: int
    matrices: np.ndarray  # (n, m, m)
    _coeff_pinv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mats = _readonly(self.matrices)
        n, m, m2 = mats.shape
        if m != m2 or m != self.size:
            raise ValidationError(f"representation matrices must be {self.size}x{self.size}")
        flat = mats.reshape(n, m * m)
        if np.linalg.matrix_rank(flat) < n:
            raise ValidationError("representation matrices are linearly dependent (not faithful)")
        object.__setattr__(self, "matrices", mats)
        # least-squares projector onto the algebra image, built once
        object.__setattr__(self, "_coeff_pinv", _readonly(np.linalg.pinv(flat.T)))

    @property
    def dim(self) -> int:
        return self.matrices.shape[0]

    def project(self, X: np.ndarray) -> tuple[np.ndarray, float]:
        """Express an m-by-m matrix in the basis; returns (coords, residual)."""
        coords = self._coeff_pinv @ np.asarray(X, dtype=float).ravel()
        recon = np.tensordot(coords, self.matrices, axes=(0, 0))
        return coords, float(np.max(np.abs(recon - X)))


def jacobi_residual(c: np.ndarray) -> tuple[float, tuple[int, int, int]]:
    """Max abs cyclic-sum residual over basis triples, with the worst triple."""
    t = (
        np.einsum("jkm,imn->ijkn", c, c)
        + np.einsum("kim,jmn->ijkn", c, c)
        + np.einsum("ijm,kmn->ijkn", c, c)
    )
    flat = np.abs(t).max(axis=3)
    idx = np.unravel_index(np.argmax(flat), flat.shape)
    return float(flat[idx]), tuple(int(i) for i in idx)


def homomorphism_residual(c: np.ndarray, matrices: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Max abs mismatch between rho([e_i,e_j]) and the matrix commutator."""
    lin = np.einsum("ijk,kab->ijab", c, matrices)
    prod = np.einsum("iab,jbc->ijac", matrices, matrices)
    comm = prod - prod.transpose(1, 0, 2, 3)
    flat = np.abs(lin - comm).max(axis=(2, 3))
    idx = np.unravel_index(np.argmax(flat), flat.shape)
    return float(flat[idx]), tuple(int(i) for i in idx)


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """A finite-dimensional real Lie algebra with a faithful matrix model.

    Construction validates antisymmetry, the Jacobi identity (residual at most
    ``1e-12``) and that the representation is a bracket homomorphism.  All
    fields are immutable afterwards; instances are safe to share across threads.
    """

    dim: int
    structure_constants: np.ndarray  # (n, n, n)
    basis_labels: tuple[str, ...]
    representation: MatrixRepresentation
    name: str = "algebra"

    def __post_init__(self):
        c = _readonly(self.structure_constants)
        n = self.dim
        if n <= 0 or c.shape != (n, n, n):
            raise ValidationError(f"structure constants must have shape ({n},{n},{n})")
        if len(self.basis_labels) != n:
            raise ValidationError("need one basis label per dimension")
        anti = float(np.max(np.abs(c + c.transpose(1, 0, 2))))
        if anti > JACOBI_TOL:
            raise ValidationError(f"structure constants not antisymmetric (residual {anti:.3e})")
        jac, triple = jacobi_residual(c)
        if jac > JACOBI_TOL:
            raise ValidationError(
                f"Jacobi identity fails: residual {jac:.3e} at basis triple {triple}"
            )
        if self.representation.dim != n:
            raise ValidationError("representation has wrong number of matrices")
        hom, pair = homomorphism_residual(c, self.representation.matrices)
        if hom > HOMOMORPHISM_TOL:
            raise ValidationError(
                f"representation is not a bracket homomorphism: residual {hom:.3e} "
                f"at basis pair {pair}"
            )
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    # -- constructors for elements ------------------------------------------------

    def vector(self, coords) -> "AlgebraVector":
        return AlgebraVector(self, coords)

    def covector(self, coords) -> "Covector":
        return Covector(self, coords)

    def basis_vector(self, i: int) -> "AlgebraVector":
        coords = np.zeros(self.dim)
        coords[i] = 1.0
        return AlgebraVector(self, coords)

    def basis_covector(self, i: int) -> "Covector":
        coords = np.zeros(self.dim)
        coords[i] = 1.0
        return Covector(self, coords)

    @property
    def identity_matrix(self) -> np.ndarray:
        return np.eye(self.representation.size)


class _Element:
    """Shared coordinate-vector behaviour of AlgebraVector and Covector."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: LieAlgebra, coords):
        coords = np.asarray(coords, dtype=float).reshape(-1)
        if coords.shape != (algebra.dim,):
            raise DimensionMismatchError(
                f"expected {algebra.dim} coordinates, got {coords.shape[0]}"
            )
        if not np.all(np.isfinite(coords)):
            raise ValidationError("coordinates must be finite")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coords", _readonly(coords))

    def __setattr__(self, *args):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), (self.algebra, np.array(self.coords)))

    def __add__(self, other):
        _check_same_algebra(self, other)
        return type(self)(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        _check_same_algebra(self, other)
        return type(self)(self.algebra, self.coords - other.coords)

    def __mul__(self, scalar):
        return type(self)(self.algebra, self.coords * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(self.algebra, -self.coords)

    def __repr__(self):
        return f"{type(self).__name__}({np.array2string(self.coords, precision=6)})"


class AlgebraVector(_Element):
    """An element of the algebra in basis coordinates."""

    def matrix(self) -> np.ndarray:
        """Image under the representation."""
        return np.tensordot(self.coords, self.algebra.representation.matrices, axes=(0, 0))


class Covector(_Element):
    """An element of the dual algebra in dual-basis coordinates."""

    def pair(self, xi: AlgebraVector) -> float:
        _check_same_algebra(self, xi)
        return float(self.coords @ xi.coords)


def _check_same_algebra(a, b) -> None:
    if a.algebra.dim != b.algebra.dim:
        raise DimensionMismatchError(
            f"operands live in algebras of dimension {a.algebra.dim} and {b.algebra.dim}"
        )


# -- bracket and coadjoint operations ---------------------------------------------


def bracket(x: AlgebraVector, y: AlgebraVector) -> AlgebraVector:
    """Lie bracket [x, y] by structure-constant contraction."""
    _check_same_algebra(x, y)
    c = x.algebra.structure_constants
    return AlgebraVector(x.algebra, np.einsum("i,j,ijk->k", x.coords, y.coords, c))


def ad_star(xi: AlgebraVector, p: Covector) -> Covector:
    """Coadjoint action ad*_xi p, defined by (ad*_xi p)(eta) = p([xi, eta])."""
    _check_same_algebra(xi, p)
    c = p.algebra.structure_constants
    return Covector(p.algebra, np.einsum("i,ijk,k->j", xi.coords, c, p.coords))


def ad_star_matrix(algebra: LieAlgebra, p_coords: np.ndarray) -> np.ndarray:
    """The n-by-n matrix whose i-th row is ad_star(e_i, p) in coordinates."""
    return np.tensordot(algebra.structure_constants, p_coords, axes=(2, 0))


@dataclass(frozen=True, eq=False)
class OrbitReport:
    """Coadjoint-orbit data of a covector: codimension, stabilizer, genericity."""

    codim: int
    stabilizer_basis: tuple[AlgebraVector, ...]
    pairing: float | None
    in_generic_set: bool


def orbit_report(p: Covector, tol: float = RANK_TOL) -> OrbitReport:
    """Analyse the coadjoint orbit through p.

    ``codim`` is n minus the rank of the ad*-matrix; the stabilizer basis spans
    the kernel of ``xi -> ad*_xi p``.  When the stabilizer is one-dimensional,
    ``pairing`` is p evaluated on the normalized generator, and the covector is
    generic iff codim == 1 and the pairing is nonzero beyond the rank tolerance.
    """
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    algebra = p.algebra
    n = algebra.dim
    M = ad_star_matrix(algebra, p.coords)
    # kernel of xi -> ad*_xi p = left null space of M
    u, s, _ = np.linalg.svd(M)
    cutoff = tol * (s[0] if s.size and s[0] > 0 else 1.0)
    rank = int(np.sum(s > cutoff))
    codim = n - rank
    kernel = []
    for k in range(rank, n):
        vec = u[:, k]
        lead = np.argmax(np.abs(vec))
        if vec[lead] < 0:  # deterministic sign
            vec = -vec
        kernel.append(AlgebraVector(algebra, vec))
    pairing = None
    if len(kernel) == 1:
        pairing = float(p.coords @ kernel[0].coords)
    generic = codim == 1 and pairing is not None and abs(pairing) > tol * max(
        1.0, float(np.linalg.norm(p.coords))
    )
    return OrbitReport(codim, tuple(kernel), pairing, generic)


# -- linear maps on the algebra ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearMapOnAlgebra:
    """An invertible linear map on algebra coordinates (columns = basis images)."""

    algebra: LieAlgebra
    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        n = self.algebra.dim
        if m.shape != (n, n):
            raise DimensionMismatchError(f"map matrix must be {n}x{n}")
        if abs(np.linalg.det(m)) <= 1e-12:
            raise ValidationError("map must be invertible")
        object.__setattr__(self, "matrix", m)

    def apply(self, x: AlgebraVector) -> AlgebraVector:
        return AlgebraVector(self.algebra, self.matrix @ x.coords)

    def apply_dual(self, p: Covector) -> Covector:
        """Dual map on covectors: transpose action on coordinates."""
        return Covector(self.algebra, self.matrix.T @ p.coords)

    def inverse(self) -> "LinearMapOnAlgebra":
        return LinearMapOnAlgebra(self.algebra, np.linalg.inv(self.matrix))

    def compose(self, other: "LinearMapOnAlgebra") -> "LinearMapOnAlgebra":
        return LinearMapOnAlgebra(self.algebra, self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class MapClassification:
    kind: str  # "automorphism" | "anti_automorphism" | "neither"
    automorphism_residual: float
    anti_automorphism_residual: float


def classify_map(sigma: LinearMapOnAlgebra, tol: float = 1e-8) -> MapClassification:
    """Classify a linear map as (anti-)automorphism by bracket residuals.

    ``automorphism`` iff sigma[e_i,e_j] = [sigma e_i, sigma e_j] on all basis
    pairs within tol; ``anti_automorphism`` iff sigma[e_i,e_j] = [sigma e_j,
    sigma e_i].  When both hold (abelian algebras) the automorphism verdict wins.
    """
    c = sigma.algebra.structure_constants
    m = sigma.matrix
    mapped = np.einsum("kl,ijl->ijk", m, c)  # sigma [e_i, e_j]
    of_images = np.einsum("ai,bj,abk->ijk", m, m, c)  # [sigma e_i, sigma e_j]
    auto = float(np.max(np.abs(mapped - of_images)))
    anti = float(np.max(np.abs(mapped - of_images.transpose(1, 0, 2))))
    if auto <= tol:
        kind = "automorphism"
    elif anti <= tol:
        kind = "anti_automorphism"
    else:
        kind = "neither"
    return MapClassification(kind, auto, anti)

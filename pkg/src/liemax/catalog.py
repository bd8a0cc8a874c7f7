"""Builtin group bundles and the loader for user-defined groups.

Each bundle packages an algebra with its Hamiltonians, symmetry candidates,
closed-form group maps and (where applicable) a semidirect-product splitting.
Bundles are validated on construction and cached in a read-only registry.
Symmetry verdicts are always established by the verification engine; the
catalog only supplies candidates.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import LieAlgebra, LinearMapOnAlgebra, MatrixRepresentation
from .errors import CatalogError, ValidationError
from .groups import GroupPoint, group_exp, group_log
from .hamiltonians import HamiltonianSpec, killing_hamiltonian, sr_hamiltonian
from .maxwell import se2_stratum_classify, sh2_stratum_classify
from .symmetry import (
    ConjugationMap,
    ExpConjugationMap,
    InverseConjugationMap,
    SymmetryCandidate,
    TransposeConjugationMap,
    VerifiedSymmetry,
    group_S,
)

BUILTIN_NAMES = ("heisenberg3", "se2", "sh2", "so3", "engel4")

_SMAP_VALIDATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SemidirectStructure:
    """Splitting of a planar-isometry style group as G1 (translations) acted
    on by G2 (the linear block) through the homomorphism b."""

    g1_dim: int
    g2_size: int
    decompose: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    assemble: Callable[[np.ndarray, np.ndarray], np.ndarray]
    b: Callable[[np.ndarray], np.ndarray]
    sample_g2: Callable[[np.random.Generator], np.ndarray]

    def validate(self, seed: int = 7, pairs: int = 16) -> None:
        rng = np.random.default_rng(seed)
        for _ in range(pairs):
            a = self.sample_g2(rng)
            c = self.sample_g2(rng)
            lhs = self.b(a @ c)
            rhs = self.b(a) @ self.b(c)
            if np.max(np.abs(lhs - rhs)) > 1e-10:
                raise ValidationError("semidirect action b is not a homomorphism")


@dataclass(frozen=True, eq=False)
class GroupBundle:
    """A validated group with its problem data, immutable after construction."""

    algebra: LieAlgebra
    hamiltonians: dict[str, HamiltonianSpec]
    symmetries: dict[str, SymmetryCandidate]
    s_maps: dict[str, object]
    semidirect: SemidirectStructure | None
    flags: dict[str, bool]
    variety_residual: Callable[[np.ndarray], float]

    @property
    def name(self) -> str:
        return self.algebra.name


# -- structure-constant helpers ------------------------------------------------------


def structure_tensor(dim: int, entries: list[tuple[int, int, int, float]]) -> np.ndarray:
    """Build the full antisymmetric tensor from nonzero entries (0-based)."""
    c = np.zeros((dim, dim, dim))
    for i, j, k, val in entries:
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise ValidationError(f"structure-constant index out of range: {(i, j, k)}")
        if c[i, j, k] not in (0.0, val) or c[j, i, k] not in (0.0, -val):
            raise ValidationError(f"conflicting structure constants at {(i, j, k)}")
        c[i, j, k] = val
        c[j, i, k] = -val
    return c


def _e(m: int, i: int, j: int) -> np.ndarray:
    out = np.zeros((m, m))
    out[i, j] = 1.0
    return out


def _validate_s_map(algebra: LieAlgebra, sigma: np.ndarray, s_map, seed: int = 11) -> None:
    """Closed-form maps must agree with exp(sigma log(.)) near the identity."""
    rng = np.random.default_rng(seed)
    for _ in range(8):
        xi = algebra.vector(0.05 * rng.standard_normal(algebra.dim))
        g = group_exp(xi)
        expected = group_exp(algebra.vector(sigma @ xi.coords)).matrix
        got = s_map.apply(g.matrix)
        if np.max(np.abs(got - expected)) > _SMAP_VALIDATION_TOL:
            raise ValidationError(
                f"catalog map disagrees with exp-conjugation near the identity "
                f"(residual {np.max(np.abs(got - expected)):.3e})"
            )
        # inverse really inverts
        back = s_map.apply(got, inverse=True)
        if np.max(np.abs(back - g.matrix)) > _SMAP_VALIDATION_TOL:
            raise ValidationError("catalog map inverse does not invert the forward map")


# -- planar semidirect helpers -------------------------------------------------------


def _planar_semidirect(kind: str) -> SemidirectStructure:
    def decompose(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return m[:2, 2].copy(), m[:2, :2].copy()

    def assemble(v: np.ndarray, block: np.ndarray) -> np.ndarray:
        out = np.eye(3)
        out[:2, :2] = block
        out[:2, 2] = v
        return out

    def b(block: np.ndarray) -> np.ndarray:
        return np.array(block, dtype=float)

    if kind == "se2":
        def sample_g2(rng):
            phi = rng.uniform(-math.pi, math.pi)
            return np.array(
                [[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]]
            )
    else:
        def sample_g2(rng):
            phi = rng.uniform(-1.5, 1.5)
            return np.array(
                [[math.cosh(phi), math.sinh(phi)], [math.sinh(phi), math.cosh(phi)]]
            )

    s = SemidirectStructure(2, 2, decompose, assemble, b, sample_g2)
    s.validate()
    return s


def semidirect_S_inverse(
    V: VerifiedSymmetry, bundle: GroupBundle, g1: np.ndarray, g2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Factor-wise action of S^{-1} on a semidirect product.

    Case (a) acts componentwise; case (b) twists the first factor by the
    semidirect action of the mapped second factor.
    """
    semi = bundle.semidirect
    if semi is None:
        raise ValidationError(f"group '{bundle.name}' has no semidirect splitting")
    g1 = np.asarray(g1, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    # restrict S^{-1} to the factors through the matrix-level map
    s1, _ = semi.decompose(
        V.s_map.apply(semi.assemble(g1, np.eye(semi.g2_size)), inverse=True)
    )
    _, s2 = semi.decompose(
        V.s_map.apply(semi.assemble(np.zeros(semi.g1_dim), g2), inverse=True)
    )
    if V.case == "a":
        return s1, s2
    return semi.b(s2) @ s1, s2


# -- variety residuals ---------------------------------------------------------------


def _unitriangular_residual(m: np.ndarray) -> float:
    low = np.tril(m, -1)
    diag = np.diag(m) - 1.0
    return float(max(np.max(np.abs(low)), np.max(np.abs(diag))))


def _se2_residual(m: np.ndarray) -> float:
    R = m[:2, :2]
    parts = [
        np.max(np.abs(R.T @ R - np.eye(2))),
        abs(np.linalg.det(R) - 1.0),
        np.max(np.abs(m[2] - np.array([0.0, 0.0, 1.0]))),
    ]
    return float(max(parts))


def _sh2_residual(m: np.ndarray) -> float:
    A = m[:2, :2]
    parts = [
        abs(A[0, 0] - A[1, 1]),
        abs(A[0, 1] - A[1, 0]),
        abs(A[0, 0] ** 2 - A[0, 1] ** 2 - 1.0),
        np.max(np.abs(m[2] - np.array([0.0, 0.0, 1.0]))),
    ]
    return float(max(parts))


def _so3_residual(m: np.ndarray) -> float:
    return float(
        max(np.max(np.abs(m.T @ m - np.eye(3))), abs(np.linalg.det(m) - 1.0))
    )


# -- builtin definitions -------------------------------------------------------------


def _candidate(
    algebra: LieAlgebra,
    name: str,
    matrix: np.ndarray,
    s_map,
    hint: str,
    reduced_scalar=None,
    stratum_classifier=None,
) -> SymmetryCandidate:
    sigma = LinearMapOnAlgebra(algebra, matrix)
    if s_map is not None:
        _validate_s_map(algebra, sigma.matrix, s_map)
    return SymmetryCandidate(
        sigma, name, hint, s_map,
        reduced_scalar=reduced_scalar, stratum_classifier=stratum_classifier,
    )


def _se2_scalar_angle(m: np.ndarray) -> float:
    return float(m[1, 0])  # sin(phi): vanishes on translations and half-turns


def _se2_scalar_center_x(m: np.ndarray) -> float:
    # center_x * det(I - R): vanishes iff the rotation center is on the y axis
    return float((1.0 - m[0, 0]) * m[0, 2] - m[1, 0] * m[1, 2])


def _se2_scalar_center_y(m: np.ndarray) -> float:
    return float(m[1, 0] * m[0, 2] + (1.0 - m[0, 0]) * m[1, 2])


def _sh2_scalar_angle(m: np.ndarray) -> float:
    return float(m[1, 0])  # sinh(phi): vanishes on translations


def _sh2_scalar_center_y(m: np.ndarray) -> float:
    return float(m[1, 0] * m[0, 2] + (1.0 - m[0, 0]) * m[1, 2])


def _sh2_scalar_center_x(m: np.ndarray) -> float:
    return float((1.0 - m[0, 0]) * m[0, 2] + m[1, 0] * m[1, 2])


def _build_heisenberg3() -> GroupBundle:
    c = structure_tensor(3, [(0, 1, 2, 1.0)])
    rep = MatrixRepresentation(3, np.array([_e(3, 0, 1), _e(3, 1, 2), _e(3, 0, 2)]))
    algebra = LieAlgebra(3, c, ("e1", "e2", "e3"), rep, name="heisenberg3")
    frame = [algebra.basis_vector(0), algebra.basis_vector(1)]
    hams = {"sr": sr_hamiltonian(algebra, frame)}
    quarter = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    swap = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    swap_flip = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]])
    P = np.fliplr(np.eye(3))
    syms = {
        "identity": _candidate(algebra, "identity", np.eye(3), ConjugationMap(np.eye(3)), "catalog:identity"),
        "rotate_quarter": _candidate(
            algebra, "rotate_quarter", quarter,
            ExpConjugationMap(LinearMapOnAlgebra(algebra, quarter)), "exp_conjugation",
        ),
        "swap_xy_flip_z": _candidate(
            algebra, "swap_xy_flip_z", swap_flip,
            ExpConjugationMap(LinearMapOnAlgebra(algebra, swap_flip)), "exp_conjugation",
        ),
        "swap_xy": _candidate(
            algebra, "swap_xy", swap, TransposeConjugationMap(P), "catalog:swap_xy",
        ),
        "flip_z": _candidate(
            algebra, "flip_z", np.diag([1.0, 1.0, -1.0]),
            InverseConjugationMap(np.diag([1.0, -1.0, 1.0])), "catalog:flip_z",
        ),
    }
    s_maps = {n: cand.s_map for n, cand in syms.items() if cand.s_map is not None}
    return GroupBundle(
        algebra, hams, syms, s_maps, None,
        {"generic_stabilizer_connected": True}, _unitriangular_residual,
    )


def _build_se2() -> GroupBundle:
    c = structure_tensor(3, [(2, 0, 1, 1.0), (2, 1, 0, -1.0)])
    rot = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    rep = MatrixRepresentation(3, np.array([_e(3, 0, 2), _e(3, 1, 2), rot]))
    algebra = LieAlgebra(3, c, ("e1", "e2", "e3"), rep, name="se2")
    frame = [algebra.basis_vector(0), algebra.basis_vector(2)]
    hams = {"sr": sr_hamiltonian(algebra, frame)}

    def cand_a(name, signs, d):
        return _candidate(
            algebra, name, np.diag(signs), ConjugationMap(np.diag(d)), f"catalog:{name}"
        )

    def cand_b(name, signs, d, scalar):
        return _candidate(
            algebra, name, np.diag(signs), InverseConjugationMap(np.diag(d)),
            f"catalog:{name}", reduced_scalar=scalar,
            stratum_classifier=se2_stratum_classify,
        )

    syms = {
        "identity": cand_a("identity", [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]),
        "reflect_x": cand_a("reflect_x", [1.0, -1.0, -1.0], [1.0, -1.0, 1.0]),
        "reflect_y": cand_a("reflect_y", [-1.0, 1.0, -1.0], [-1.0, 1.0, 1.0]),
        "rotate_pi": cand_a("rotate_pi", [-1.0, -1.0, 1.0], [-1.0, -1.0, 1.0]),
        "point_reflection": cand_b(
            "point_reflection", [-1.0, -1.0, -1.0], [1.0, 1.0, 1.0], _se2_scalar_angle
        ),
        "reverse": cand_b(
            "reverse", [1.0, 1.0, -1.0], [-1.0, -1.0, 1.0], _se2_scalar_angle
        ),
        "mirror_x": cand_b(
            "mirror_x", [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], _se2_scalar_center_x
        ),
        "mirror_y": cand_b(
            "mirror_y", [-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], _se2_scalar_center_y
        ),
    }
    s_maps = {n: cand.s_map for n, cand in syms.items()}
    return GroupBundle(
        algebra, hams, syms, s_maps, _planar_semidirect("se2"),
        {"generic_stabilizer_connected": True}, _se2_residual,
    )


def _build_sh2() -> GroupBundle:
    c = structure_tensor(3, [(2, 0, 1, 1.0), (2, 1, 0, 1.0)])
    hyp = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    rep = MatrixRepresentation(3, np.array([_e(3, 0, 2), _e(3, 1, 2), hyp]))
    algebra = LieAlgebra(3, c, ("e1", "e2", "e3"), rep, name="sh2")
    frame = [algebra.basis_vector(0), algebra.basis_vector(2)]
    hams = {"sr": sr_hamiltonian(algebra, frame)}

    def cand_a(name, signs, d):
        return _candidate(
            algebra, name, np.diag(signs), ConjugationMap(np.diag(d)), f"catalog:{name}"
        )

    def cand_b(name, signs, d, scalar):
        return _candidate(
            algebra, name, np.diag(signs), InverseConjugationMap(np.diag(d)),
            f"catalog:{name}", reduced_scalar=scalar,
            stratum_classifier=sh2_stratum_classify,
        )

    syms = {
        "identity": cand_a("identity", [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]),
        "reflect_x": cand_a("reflect_x", [1.0, -1.0, -1.0], [1.0, -1.0, 1.0]),
        "reflect_y": cand_a("reflect_y", [-1.0, 1.0, -1.0], [-1.0, 1.0, 1.0]),
        "flip_xy": cand_a("flip_xy", [-1.0, -1.0, 1.0], [-1.0, -1.0, 1.0]),
        "point_reflection": cand_b(
            "point_reflection", [-1.0, -1.0, -1.0], [1.0, 1.0, 1.0], None
        ),
        "reverse": cand_b(
            "reverse", [1.0, 1.0, -1.0], [1.0, 1.0, -1.0], _sh2_scalar_angle
        ),
        "mirror_x": cand_b(
            "mirror_x", [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], _sh2_scalar_center_y
        ),
        "mirror_y": cand_b(
            "mirror_y", [-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], _sh2_scalar_center_x
        ),
    }
    s_maps = {n: cand.s_map for n, cand in syms.items()}
    return GroupBundle(
        algebra, hams, syms, s_maps, _planar_semidirect("sh2"),
        {"generic_stabilizer_connected": True}, _sh2_residual,
    )


def _build_so3() -> GroupBundle:
    c = structure_tensor(3, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
    L1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    L2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    L3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    rep = MatrixRepresentation(3, np.array([L1, L2, L3]))
    algebra = LieAlgebra(3, c, ("e1", "e2", "e3"), rep, name="so3")
    frame = [algebra.basis_vector(0), algebra.basis_vector(1)]
    hams = {
        "sr": sr_hamiltonian(algebra, frame),
        "killing": killing_hamiltonian(algebra),
    }
    quarter = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    syms = {
        "identity": _candidate(
            algebra, "identity", np.eye(3), ConjugationMap(np.eye(3)), "catalog:identity"
        ),
        "rotate_z_quarter": _candidate(
            algebra, "rotate_z_quarter", quarter, ConjugationMap(quarter),
            "catalog:rotate_z_quarter",
        ),
        "flip_xz": _candidate(
            algebra, "flip_xz", np.diag([-1.0, 1.0, -1.0]),
            ConjugationMap(np.diag([-1.0, 1.0, -1.0])), "catalog:flip_xz",
        ),
        "point_reflection": _candidate(
            algebra, "point_reflection", -np.eye(3),
            InverseConjugationMap(np.eye(3)), "catalog:point_reflection",
        ),
        "reverse_z": _candidate(
            algebra, "reverse_z", np.diag([1.0, 1.0, -1.0]),
            InverseConjugationMap(np.diag([1.0, 1.0, -1.0])), "catalog:reverse_z",
        ),
    }
    s_maps = {n: cand.s_map for n, cand in syms.items()}
    return GroupBundle(
        algebra, hams, syms, s_maps, None,
        {"generic_stabilizer_connected": True}, _so3_residual,
    )


def _build_engel4() -> GroupBundle:
    c = structure_tensor(4, [(0, 1, 2, 1.0), (0, 2, 3, 1.0)])
    r1 = _e(4, 0, 1) + _e(4, 1, 2)
    rep = MatrixRepresentation(4, np.array([r1, _e(4, 2, 3), _e(4, 1, 3), _e(4, 0, 3)]))
    algebra = LieAlgebra(4, c, ("e1", "e2", "e3", "e4"), rep, name="engel4")
    frame = [algebra.basis_vector(0), algebra.basis_vector(1)]
    hams = {"sr": sr_hamiltonian(algebra, frame)}
    syms = {
        "identity": _candidate(
            algebra, "identity", np.eye(4), ConjugationMap(np.eye(4)), "catalog:identity"
        ),
        "flip_tail": _candidate(
            algebra, "flip_tail", np.diag([1.0, -1.0, -1.0, -1.0]),
            ConjugationMap(np.diag([1.0, 1.0, 1.0, -1.0])), "catalog:flip_tail",
        ),
        "flip_x": _candidate(
            algebra, "flip_x", np.diag([-1.0, 1.0, -1.0, 1.0]),
            ConjugationMap(np.diag([1.0, -1.0, 1.0, 1.0])), "catalog:flip_x",
        ),
        "reverse": _candidate(
            algebra, "reverse", np.diag([1.0, 1.0, -1.0, 1.0]),
            InverseConjugationMap(np.diag([1.0, -1.0, 1.0, -1.0])), "catalog:reverse",
        ),
    }
    s_maps = {n: cand.s_map for n, cand in syms.items()}
    return GroupBundle(
        algebra, hams, syms, s_maps, None,
        {"generic_stabilizer_connected": True}, _unitriangular_residual,
    )


_BUILDERS = {
    "heisenberg3": _build_heisenberg3,
    "se2": _build_se2,
    "sh2": _build_sh2,
    "so3": _build_so3,
    "engel4": _build_engel4,
}

_REGISTRY: dict[str, GroupBundle] = {}


def builtin(name: str) -> GroupBundle:
    """Return (and cache) a builtin bundle by name."""
    if name not in _BUILDERS:
        raise CatalogError(
            f"unknown group '{name}'; available: {', '.join(BUILTIN_NAMES)}"
        )
    if name not in _REGISTRY:
        _REGISTRY[name] = _BUILDERS[name]()
    return _REGISTRY[name]


def resolve(name: str, extra_dirs: list[str] | None = None) -> GroupBundle:
    """Resolve a group name: builtins first, then user catalog directories."""
    if name in _BUILDERS:
        return builtin(name)
    dirs = list(extra_dirs or [])
    env = os.environ.get("LIEMAX_CATALOG_DIR")
    if env:
        dirs.extend(env.split(os.pathsep))
    for d in dirs:
        path = os.path.join(d, f"{name}.json")
        if os.path.exists(path):
            return load_group(path)
    raise CatalogError(
        f"unknown group '{name}'; available: {', '.join(BUILTIN_NAMES)}"
    )


# -- user-defined groups -------------------------------------------------------------


def _builtin_s_map(ref: str):
    group, _, sym = ref.partition("/")
    bundle = builtin(group)
    if sym not in bundle.s_maps:
        raise CatalogError(f"unknown builtin map reference '{ref}'")
    return bundle.s_maps[sym]


def load_group(path) -> GroupBundle:
    """Load and fully validate a group-definition JSON file."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        name = data["name"]
        dim = int(data["dim"])
        raw_entries = data["structure_constants"]
        rep_data = data["representation"]
        labels = data.get("labels") or [f"e{i + 1}" for i in range(dim)]
    except KeyError as exc:
        raise ValidationError(f"group file misses required key {exc}") from exc
    entries = [(int(i), int(j), int(k), float(v)) for i, j, k, v in raw_entries]
    c = structure_tensor(dim, entries)
    matrices = np.array(rep_data["matrices"], dtype=float)
    rep = MatrixRepresentation(int(rep_data["size"]), matrices)
    algebra = LieAlgebra(dim, c, tuple(labels), rep, name=name)

    hams: dict[str, HamiltonianSpec] = {}
    for spec in data.get("hamiltonians", []):
        if spec.get("type") != "sr":
            raise ValidationError(f"unsupported Hamiltonian type '{spec.get('type')}'")
        frame = [algebra.vector(v) for v in spec["frame"]]
        hams[spec["name"]] = sr_hamiltonian(algebra, frame, label=spec["name"])

    syms: dict[str, SymmetryCandidate] = {}
    s_maps: dict[str, object] = {}
    for spec in data.get("symmetries", []):
        matrix = np.array(spec["matrix"], dtype=float)
        ref = spec.get("s_map", "exp_conjugation")
        sigma = LinearMapOnAlgebra(algebra, matrix)
        if ref.startswith("builtin:"):
            s_map = _builtin_s_map(ref[len("builtin:"):])
            hint = ref
            _validate_s_map(algebra, matrix, s_map)
        elif ref in ("exp_conjugation", "none"):
            s_map = ExpConjugationMap(sigma)
            hint = ref
        else:
            raise ValidationError(f"unsupported s_map reference '{ref}'")
        syms[spec["name"]] = SymmetryCandidate(sigma, spec["name"], hint, s_map)
        s_maps[spec["name"]] = s_map

    semidirect = None
    semi_spec = data.get("semidirect")
    if semi_spec is not None:
        ref = semi_spec.get("b", "")
        if not ref.startswith("builtin:") or ref[len("builtin:"):] not in ("se2", "sh2"):
            raise ValidationError("semidirect action must reference builtin:se2 or builtin:sh2")
        semidirect = _planar_semidirect(ref[len("builtin:"):])

    flags = {"generic_stabilizer_connected": bool(
        data.get("flags", {}).get("generic_stabilizer_connected", False)
    )}
    return GroupBundle(
        algebra, hams, syms, s_maps, semidirect, flags, _generic_variety_residual
    )


def _generic_variety_residual(m: np.ndarray) -> float:
    # user groups carry no defining-variety information; only require invertibility
    return 0.0 if abs(np.linalg.det(m)) > 1e-12 else math.inf


def save_group(bundle: GroupBundle, path) -> None:
    """Serialize a bundle to the group-definition JSON schema."""
    algebra = bundle.algebra
    n = algebra.dim
    c = algebra.structure_constants
    entries = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if c[i, j, k] != 0.0:
                    entries.append([i, j, k, c[i, j, k]])
    data: dict = {
        "name": bundle.name,
        "dim": n,
        "structure_constants": entries,
        "representation": {
            "size": algebra.representation.size,
            "matrices": [m.tolist() for m in algebra.representation.matrices],
        },
        "labels": list(algebra.basis_labels),
    }
    hams = [
        {"name": label, "type": "sr", "frame": [list(v) for v in spec.frame]}
        for label, spec in bundle.hamiltonians.items()
        if spec.kind == "sub_riemannian"
    ]
    if hams:
        data["hamiltonians"] = hams
    syms = []
    for name, cand in bundle.symmetries.items():
        hint = cand.group_map_hint
        if hint.startswith("catalog:"):
            ref = f"builtin:{bundle.name}/{hint[len('catalog:'):]}"
        elif hint.startswith("builtin:"):
            ref = hint
        else:
            ref = "exp_conjugation"
        syms.append({"name": name, "matrix": cand.sigma.matrix.tolist(), "s_map": ref})
    if syms:
        data["symmetries"] = syms
    if bundle.semidirect is not None:
        data["semidirect"] = {"split": [2, 1], "b": f"builtin:{bundle.name}"}
    data["flags"] = dict(bundle.flags)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")

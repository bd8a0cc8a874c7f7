"""Verification of exponential-map symmetries induced by the vertical subsystem.

A candidate is a linear map sigma on the algebra.  Verification samples seeded
covectors and checks that the dual map preserves the Hamiltonian and either
commutes with the vertical field (case "a", sigma an automorphism) or
anti-commutes with it (case "b", sigma an anti-automorphism).  A verified
symmetry carries a group map S with tangent map sigma at the identity; the
certified identity is Exp(s(p, t)) = S^{-1}(Exp(p, t)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import Covector, LieAlgebra, LinearMapOnAlgebra, classify_map, orbit_report
from .errors import DomainError, GenericSetError, LogDomainError, ValidationError
from .flows import DEFAULT_CONFIG, FlowConfig, exp_map, vertical_field, vertical_flow
from .groups import GroupPoint, group_exp, group_log
from .hamiltonians import HamiltonianSpec, pullback_hamiltonian
from .flows import left_flow, right_flow
from .groups import compare_cotangent

RESIDUAL_TOL = 1e-8


# -- group map realizations ---------------------------------------------------------


class ConjugationMap:
    """S(g) = D g D^{-1}: a group automorphism for fixed invertible D."""

    def __init__(self, D: np.ndarray):
        self.D = np.array(D, dtype=float)
        self.D_inv = np.linalg.inv(self.D)

    def apply(self, g: np.ndarray, inverse: bool = False) -> np.ndarray:
        if inverse:
            return self.D_inv @ g @ self.D
        return self.D @ g @ self.D_inv

    def describe(self) -> str:
        return "conjugation"


class InverseConjugationMap:
    """S(g) = D g^{-1} D^{-1}: a group anti-automorphism for fixed D."""

    def __init__(self, D: np.ndarray):
        self.D = np.array(D, dtype=float)
        self.D_inv = np.linalg.inv(self.D)

    def apply(self, g: np.ndarray, inverse: bool = False) -> np.ndarray:
        gi = np.linalg.inv(g)
        if inverse:
            return self.D_inv @ gi @ self.D
        return self.D @ gi @ self.D_inv

    def describe(self) -> str:
        return "inverse-conjugation"


class TransposeConjugationMap:
    """S(g) = D g^T D^{-1}: an anti-automorphism on matrix groups closed under it."""

    def __init__(self, D: np.ndarray):
        self.D = np.array(D, dtype=float)
        self.D_inv = np.linalg.inv(self.D)

    def apply(self, g: np.ndarray, inverse: bool = False) -> np.ndarray:
        if inverse:
            return (self.D_inv @ g @ self.D).T
        return self.D @ g.T @ self.D_inv

    def describe(self) -> str:
        return "transpose-conjugation"


class ExpConjugationMap:
    """Fallback S(g) = exp(sigma log g), valid on the principal-log domain only."""

    def __init__(self, sigma: LinearMapOnAlgebra):
        self.sigma = sigma
        self._inv = np.linalg.inv(sigma.matrix)

    def apply(self, g: np.ndarray, inverse: bool = False) -> np.ndarray:
        algebra = self.sigma.algebra
        try:
            xi = group_log(GroupPoint(algebra, g))
        except LogDomainError as exc:
            raise LogDomainError(
                f"{exc}; the exp-conjugation fallback only covers the principal-log "
                "domain -- register a closed-form catalog map for this group"
            ) from exc
        m = self._inv if inverse else self.sigma.matrix
        return group_exp(algebra.vector(m @ xi.coords)).matrix

    def describe(self) -> str:
        return "exp-conjugation"


# -- candidates and verification ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymmetryCandidate:
    """A linear map on the algebra, to be checked against a Hamiltonian."""

    sigma: LinearMapOnAlgebra
    name: str
    group_map_hint: str = "exp_conjugation"  # "catalog:<name>" | "exp_conjugation" | "none"
    s_map: object | None = None  # resolved closed-form map when hint is catalog
    reduced_scalar: Callable[[np.ndarray], float] | None = None
    stratum_classifier: Callable[[GroupPoint], str] | None = None


@dataclass(frozen=True, eq=False)
class VerifiedSymmetry:
    """A candidate that passed verification, with its induced group map."""

    sigma: LinearMapOnAlgebra
    case: str  # "a" | "b"
    hamiltonian: str  # label of the Hamiltonian it was verified against
    residual_H: float
    residual_vertical: float
    s_map: object
    name: str = "sigma"
    reduced_scalar: Callable[[np.ndarray], float] | None = None
    stratum_classifier: Callable[[GroupPoint], str] | None = None

    def __post_init__(self):
        if self.case not in ("a", "b"):
            raise ValidationError("case must be 'a' or 'b'")
        if self.residual_H > RESIDUAL_TOL or self.residual_vertical > RESIDUAL_TOL:
            raise ValidationError("verified symmetries must have residuals <= 1e-8")

    def sigma_star(self, p: Covector) -> Covector:
        return self.sigma.apply_dual(p)


@dataclass(frozen=True, eq=False)
class RejectionReport:
    """Why a candidate failed verification; residuals for both vertical branches."""

    name: str
    classification: str
    residual_H: float
    residual_vertical_commuting: float
    residual_vertical_anticommuting: float
    reason: str

    @property
    def verified(self) -> bool:
        return False


def sample_covectors(algebra: LieAlgebra, count: int, seed: int) -> np.ndarray:
    """Seeded covector sample: half in the unit ball, half on the sphere of radius 5."""
    rng = np.random.default_rng(seed)
    n = algebra.dim
    out = np.empty((count, n))
    for i in range(count):
        x = rng.standard_normal(n)
        x /= max(np.linalg.norm(x), 1e-300)
        if i % 2 == 0:
            out[i] = x * rng.random() ** (1.0 / n)
        else:
            out[i] = 5.0 * x
    return out


def verify_candidate(
    candidate: SymmetryCandidate,
    H: HamiltonianSpec,
    samples: int = 200,
    seed: int = 0,
) -> VerifiedSymmetry | RejectionReport:
    """Check the two hypotheses on seeded samples and classify the case.

    Case "a" requires sigma*(Hv(p)) = Hv(sigma* p) with sigma an automorphism;
    case "b" requires sigma*(Hv(p)) = -Hv(sigma* p) with sigma an
    anti-automorphism.  Returns a VerifiedSymmetry on success (residuals at
    most 1e-8) and a RejectionReport otherwise; never raises for a rejection.
    """
    if samples < 100:
        raise ValidationError("verification needs at least 100 samples")
    algebra = H.algebra
    sigma = candidate.sigma
    cls = classify_map(sigma)
    P = sample_covectors(algebra, samples, seed)
    st = sigma.matrix.T

    res_H = 0.0
    res_commute = 0.0
    res_anti = 0.0
    for row in P:
        sp = st @ row
        res_H = max(res_H, abs(H.value(sp) - H.value(row)))
        hv = vertical_field(H, algebra.covector(row)).coords
        hv_sp = vertical_field(H, algebra.covector(sp)).coords
        pushed = st @ hv
        res_commute = max(res_commute, float(np.max(np.abs(pushed - hv_sp))))
        res_anti = max(res_anti, float(np.max(np.abs(pushed + hv_sp))))

    def reject(reason: str) -> RejectionReport:
        return RejectionReport(candidate.name, cls.kind, res_H, res_commute, res_anti, reason)

    if res_H > RESIDUAL_TOL:
        return reject(f"Hamiltonian not preserved (residual {res_H:.3e})")
    if cls.kind == "neither":
        return reject("sigma is neither an automorphism nor an anti-automorphism")
    if cls.kind == "automorphism":
        if res_commute > RESIDUAL_TOL:
            if res_anti <= RESIDUAL_TOL:
                return reject(
                    "vertical field anti-commutes with sigma*, but sigma is an "
                    "automorphism (case mismatch)"
                )
            return reject(f"vertical field not preserved (residual {res_commute:.3e})")
        case, res_vertical = "a", res_commute
    else:
        if res_anti > RESIDUAL_TOL:
            if res_commute <= RESIDUAL_TOL:
                return reject(
                    "vertical field commutes with sigma*, but sigma is an "
                    "anti-automorphism (case mismatch)"
                )
            return reject(f"vertical field not reversed (residual {res_anti:.3e})")
        case, res_vertical = "b", res_anti

    s_map = candidate.s_map
    if s_map is None:
        # "none" and "exp_conjugation" both fall back to the generic construction
        s_map = ExpConjugationMap(sigma)
    return VerifiedSymmetry(
        sigma,
        case,
        H.label,
        res_H,
        res_vertical,
        s_map,
        name=candidate.name,
        reduced_scalar=candidate.reduced_scalar,
        stratum_classifier=candidate.stratum_classifier,
    )


# -- the symmetry pair (s, S^{-1}) ---------------------------------------------------


def _require_generic(p: Covector) -> None:
    report = orbit_report(p)
    if not report.in_generic_set:
        raise GenericSetError(
            "case-(b) symmetries need a generic covector (orbit codimension 1 "
            f"with nonzero stabilizer pairing); got codim {report.codim}, "
            f"pairing {report.pairing}"
        )


def apply_s(
    V: VerifiedSymmetry,
    H: HamiltonianSpec,
    p: Covector,
    t: float,
    cfg: FlowConfig = DEFAULT_CONFIG,
) -> tuple[Covector, float]:
    """The covector-side symmetry: (sigma* p, t) in case a,
    (sigma* e^{tHv} p, t) in case b.  Case b enforces genericity of p."""
    if t <= 0:
        raise DomainError("apply_s is defined for t > 0")
    if V.case == "a":
        return V.sigma_star(p), t
    _require_generic(p)
    moved = vertical_flow(H, p, t, cfg)
    return V.sigma_star(moved), t


def group_S(V: VerifiedSymmetry, g: GroupPoint, direction: str = "forward") -> GroupPoint:
    """Apply the induced group map S (or its inverse)."""
    if direction not in ("forward", "inverse"):
        raise ValidationError("direction must be 'forward' or 'inverse'")
    out = V.s_map.apply(g.matrix, inverse=(direction == "inverse"))
    return GroupPoint(g.algebra, out)


def theorem_residual(
    V: VerifiedSymmetry,
    H: HamiltonianSpec,
    p: Covector,
    t: float,
    cfg: FlowConfig = DEFAULT_CONFIG,
) -> float:
    """Entrywise distance between Exp(s(p,t)) and S^{-1}(Exp(p,t))."""
    moved, _ = apply_s(V, H, p, t, cfg)
    lhs = exp_map(H, moved, t, cfg)
    rhs = group_S(V, exp_map(H, p, t, cfg), "inverse")
    return float(np.max(np.abs(lhs.matrix - rhs.matrix)))


def proposition1_residual(
    V: VerifiedSymmetry,
    H: HamiltonianSpec,
    p0: Covector,
    t: float,
    cfg: FlowConfig = DEFAULT_CONFIG,
) -> float:
    """Residual of the flow identity behind case (b):

    the right-invariant flow of H pulled back by sigma*, started from the
    vertically-moved covector, meets the left flow of H at time t.
    """
    if V.case != "b":
        raise ValidationError("the flow identity is specific to case-(b) symmetries")
    _require_generic(p0)
    h = pullback_hamiltonian(H, V.sigma)
    q0 = vertical_flow(H, p0, t, cfg)
    lhs = right_flow(h, q0, t, cfg)
    rhs = left_flow(H, p0, t, cfg)
    return compare_cotangent(lhs, rhs)


def corollary2_check(
    bundle_killing_form_algebra: LieAlgebra,
    H_sr: HamiltonianSpec,
    V: VerifiedSymmetry,
    p: Covector,
    xi,
    t: float,
    cfg: FlowConfig = DEFAULT_CONFIG,
    tol: float = 1e-6,
) -> bool:
    """Symmetric-meeting check against a bi-invariant-metric geodesic.

    Pre: the group is compact (negative-definite trace form) and the extremal
    through p meets the one-parameter subgroup of xi at time t within tol.
    Returns whether the symmetric extremal meets the symmetric geodesic.
    """
    from .hamiltonians import killing_form

    algebra = bundle_killing_form_algebra
    eigs = np.linalg.eigvalsh(killing_form(algebra))
    if float(eigs.max()) > -1e-12:
        raise DomainError("the symmetric-geodesic check needs a compact group")
    end_sr = exp_map(H_sr, p, t, cfg)
    end_sub = group_exp(xi * t)
    if float(np.max(np.abs(end_sr.matrix - end_sub.matrix))) > tol:
        raise ValidationError(
            "precondition violated: the extremal does not meet the subgroup at time t"
        )
    moved, _ = apply_s(V, H_sr, p, t, cfg)
    lhs = exp_map(H_sr, moved, t, cfg)
    rhs = group_S(V, end_sub, "inverse")
    return float(np.max(np.abs(lhs.matrix - rhs.matrix))) <= tol

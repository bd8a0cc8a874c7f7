"""Maxwell times via the fixed-point equation of a verified symmetry.

At a meeting time the endpoint of the extremal is a fixed point of the group
map S, so the universal residual |S(g) - g| evaluated along the flow vanishes
exactly at Maxwell candidates.  The solver scans a grid, brackets residual
dips, refines them (bisection on a registered scalar equation where available,
golden-section otherwise), and accepts the first refined root that both meets
within tolerance and is genuinely distinct from its symmetric partner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import Covector
from .errors import GenericSetError, ValidationError
from .flows import DEFAULT_CONFIG, FlowConfig, exp_map, left_flow_dense
from .groups import GroupPoint
from .hamiltonians import HamiltonianSpec
from .symmetry import VerifiedSymmetry, apply_s, group_S

MEET_TOL = 1e-6
DISTINCT_TOL = 1e-5
DISTINCT_SAMPLES = 64
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class MaxwellQuery:
    symmetry: VerifiedSymmetry
    hamiltonian: HamiltonianSpec
    p: Covector
    t_max_search: float
    grid_step: float = 1e-2
    root_tol: float = 1e-9
    cfg: FlowConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.grid_step <= 0:
            raise ValidationError("grid_step must be positive")
        if self.t_max_search <= self.grid_step:
            raise ValidationError("t_max_search must exceed grid_step")


@dataclass(frozen=True, eq=False)
class SkippedRoot:
    """A refined candidate root that failed the meet or distinctness check."""

    time: float
    fixed_point_residual: float
    meet_residual: float
    distinct: bool


@dataclass(frozen=True, eq=False)
class MaxwellResult:
    time: float  # math.inf when no Maxwell time was certified
    endpoint: GroupPoint | None
    fixed_point_residual: float
    meet_residual: float
    distinct: bool
    stratum: str | None
    skipped: tuple[SkippedRoot, ...] = ()
    grid_min_residual: float = math.nan

    def __post_init__(self):
        if math.isfinite(self.time):
            if self.meet_residual > MEET_TOL or self.fixed_point_residual > MEET_TOL:
                raise ValidationError("finite Maxwell times must certify both residuals")
            if not self.distinct:
                raise ValidationError("a Maxwell point requires distinct trajectories")


def fixed_point_residual(V: VerifiedSymmetry, g: GroupPoint) -> float:
    """Entrywise distance between S(g) and g; zero iff g is fixed by S."""
    return float(np.max(np.abs(V.s_map.apply(g.matrix) - g.matrix)))


def maxwell_meet_residual(
    V: VerifiedSymmetry,
    H: HamiltonianSpec,
    p: Covector,
    t: float,
    cfg: FlowConfig = DEFAULT_CONFIG,
) -> float:
    """Distance between Exp(p, t) and the endpoint of the symmetric covector."""
    moved, _ = apply_s(V, H, p, t, cfg)
    a = exp_map(H, p, t, cfg)
    b = exp_map(H, moved, t, cfg)
    return float(np.max(np.abs(a.matrix - b.matrix)))


def distinctness(
    V: VerifiedSymmetry,
    H: HamiltonianSpec,
    p: Covector,
    t: float,
    samples: int = DISTINCT_SAMPLES,
    cfg: FlowConfig = DEFAULT_CONFIG,
) -> bool:
    """True iff the trajectory and its symmetric partner separate by more than
    1e-5 somewhere on [0, t] (sampled at `samples` equispaced interior times)."""
    moved, _ = apply_s(V, H, p, t, cfg)
    a = left_flow_dense(H, p, t, cfg)
    b = left_flow_dense(H, moved, t, cfg)
    taus = np.linspace(0.0, t, samples)
    worst = 0.0
    for tau in taus:
        worst = max(worst, float(np.max(np.abs(a.group_at(tau) - b.group_at(tau)))))
        if worst > DISTINCT_TOL:
            return True
    return worst > DISTINCT_TOL


def golden_section_min(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Golden-section minimizer on [a, b] to interval width tol."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def _bisect(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    while (b - a) > tol:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fa < 0) == (fm < 0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)


def _newton_polish(f, t0: float, lo: float, hi: float, tol: float) -> float:
    """A few Newton steps on d/dt f(t)^2, clamped to the originating bracket."""
    t = t0
    h = max(tol, 1e-10)
    for _ in range(3):
        sq = lambda x: f(x) ** 2
        d1 = (sq(t + h) - sq(t - h)) / (2 * h)
        d2 = (sq(t + h) - 2 * sq(t) + sq(t - h)) / (h * h)
        if d2 <= 0 or not np.isfinite(d2):
            break
        step = d1 / d2
        t_new = min(max(t - step, lo), hi)
        if abs(t_new - t) < tol * 1e-3:
            t = t_new
            break
        t = t_new
    return t


def first_maxwell_time(query: MaxwellQuery) -> MaxwellResult:
    """Scan, bracket, refine and certify the first Maxwell time of a covector.

    Returns time = inf (with the grid's minimum residual) when no grid dip
    refines to a certified meeting; refined candidates that fail the meet or
    distinctness test are recorded in `skipped` for audit.
    """
    V = query.symmetry
    H = query.hamiltonian
    p = query.p
    cfg = query.cfg
    if V.case == "b":
        from .algebra import orbit_report

        rep = orbit_report(p)
        if not rep.in_generic_set:
            raise GenericSetError(
                f"covector outside the generic set (codim {rep.codim}, "
                f"pairing {rep.pairing}); case-(b) Maxwell search refused"
            )

    dense = left_flow_dense(H, p, query.t_max_search, cfg)

    def residual_at(t: float) -> float:
        g = dense.group_at(t)
        return float(np.max(np.abs(V.s_map.apply(g) - g)))

    ts = np.arange(query.grid_step, query.t_max_search + 0.5 * query.grid_step, query.grid_step)
    ts = ts[ts <= query.t_max_search + 1e-12]
    rs = np.array([residual_at(t) for t in ts])
    grid_min = float(rs.min())

    # Candidate brackets: strict interior dips, plus the first point of any run
    # already at meeting tolerance.  A run touching the left edge of the grid is
    # the tail of the trivial root at t = 0 (the identity is always fixed by S)
    # and is not a Maxwell candidate.
    candidates: list[tuple[int, bool]] = []  # (grid index, is_plateau)
    for i in range(len(ts)):
        if rs[i] <= MEET_TOL:
            if i > 0 and rs[i - 1] > MEET_TOL:
                candidates.append((i, True))
            continue
        if 0 < i < len(ts) - 1 and rs[i] < rs[i - 1] and rs[i] <= rs[i + 1]:
            # quadratic dip detector: positive curvature through the triple
            if rs[i - 1] + rs[i + 1] - 2 * rs[i] > 0:
                candidates.append((i, False))
    candidates.sort(key=lambda c: c[0])

    skipped: list[SkippedRoot] = []
    for i, is_plateau in candidates:
        lo = ts[i - 1] if i > 0 else max(query.grid_step * 1e-6, ts[i] - query.grid_step)
        hi = ts[i + 1] if i < len(ts) - 1 else query.t_max_search
        if is_plateau:
            t_hat = float(ts[i])
        else:
            scalar = V.reduced_scalar
            t_hat = None
            if scalar is not None:
                s = lambda t: float(scalar(dense.group_at(t)))
                s_lo, s_hi = s(lo), s(hi)
                if s_lo == 0.0:
                    t_hat = lo
                elif (s_lo < 0) != (s_hi < 0):
                    t_hat = _bisect(s, lo, hi, query.root_tol)
            if t_hat is None:
                t_hat = golden_section_min(residual_at, lo, hi, query.root_tol)
                t_hat = _newton_polish(residual_at, t_hat, lo, hi, query.root_tol)
            t_hat = min(max(t_hat, lo), hi)
        fp = residual_at(t_hat)
        if fp > MEET_TOL:
            if len(skipped) < 32:
                skipped.append(SkippedRoot(float(t_hat), fp, math.nan, False))
            continue
        # one fresh integration of the symmetric partner certifies the meeting
        # and the distinctness sampling; the original side reuses `dense`
        moved, _ = apply_s(V, H, p, t_hat, cfg)
        partner = left_flow_dense(H, moved, t_hat, cfg)
        meet = float(np.max(np.abs(dense.group_at(t_hat) - partner.group_at(t_hat))))
        sep = 0.0
        for tau in np.linspace(0.0, t_hat, DISTINCT_SAMPLES):
            sep = max(sep, float(np.max(np.abs(dense.group_at(tau) - partner.group_at(tau)))))
            if sep > DISTINCT_TOL:
                break
        distinct = sep > DISTINCT_TOL
        if meet <= MEET_TOL and distinct:
            endpoint = GroupPoint(H.algebra, dense.group_at(t_hat))
            stratum = None
            if V.stratum_classifier is not None:
                stratum = V.stratum_classifier(endpoint)
            return MaxwellResult(
                float(t_hat), endpoint, fp, meet, True, stratum,
                tuple(skipped), grid_min,
            )
        if len(skipped) < 32:
            skipped.append(SkippedRoot(float(t_hat), fp, meet, distinct))
    return MaxwellResult(
        math.inf, None, math.nan, math.nan, False, None, tuple(skipped), grid_min
    )


# -- stratum classification for the planar semidirect catalogs ----------------------

ANGLE_TOL = 1e-9
CENTER_TOL = 1e-7


def _planar_parts(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if matrix.shape != (3, 3) or np.max(np.abs(matrix[2] - np.array([0.0, 0.0, 1.0]))) > 1e-6:
        raise ValidationError("expected a 3x3 homogeneous planar-isometry matrix")
    return matrix[:2, :2], matrix[:2, 2]


def se2_stratum_classify(g: GroupPoint) -> str:
    """Fixed-point stratum of a planar proper isometry.

    translation (angle ~ 0), central_symmetry (angle ~ pi), or a rotation whose
    center lies on one of the two distinguished axes; 'none' otherwise.  Ties
    resolve in that order; near-zero angles route to translation before any
    center solve, absorbing the infinite-center cases.
    """
    R, v = _planar_parts(g.matrix)
    if np.max(np.abs(R.T @ R - np.eye(2))) > 1e-6 or np.linalg.det(R) < 0:
        raise ValidationError("rotation block is not in SO(2)")
    phi = math.atan2(R[1, 0], R[0, 0])
    if abs(phi) <= ANGLE_TOL:
        return "translation"
    if abs(abs(phi) - math.pi) <= ANGLE_TOL:
        return "central_symmetry"
    center = np.linalg.solve(np.eye(2) - R, v)
    if abs(center[1]) <= CENTER_TOL:
        return "rotation_about_line(x)"
    if abs(center[0]) <= CENTER_TOL:
        return "rotation_about_line(y)"
    return "none"


def sh2_stratum_classify(g: GroupPoint) -> str:
    """Fixed-point stratum of a planar hyperbolic isometry (translation or a
    hyperbolic rotation about a point on a distinguished axis)."""
    A, v = _planar_parts(g.matrix)
    if (
        abs(A[0, 0] - A[1, 1]) > 1e-6
        or abs(A[0, 1] - A[1, 0]) > 1e-6
        or abs(A[0, 0] ** 2 - A[0, 1] ** 2 - 1.0) > 1e-6
    ):
        raise ValidationError("block is not a hyperbolic rotation")
    phi = math.asinh(A[1, 0])
    if abs(phi) <= ANGLE_TOL:
        return "translation"
    center = np.linalg.solve(np.eye(2) - A, v)
    if abs(center[1]) <= CENTER_TOL:
        return "hyperbolic_rotation_about_line(x)"
    if abs(center[0]) <= CENTER_TOL:
        return "hyperbolic_rotation_about_line(y)"
    return "none"

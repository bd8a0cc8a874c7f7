"""Hamiltonian flows in left and right trivialization.

The left-trivialized system is triangular: the covector obeys the vertical
equation ``pdot = ad*_{dH(p)} p`` on its own, and the group part follows with
``gdot = g rho(dH(p))``.  The exponential map is the group projection of the
left flow started at the identity.  Right-invariant flows use the mirrored
equations ``gdot = rho(dh(q)) g`` and ``qdot = -ad*_{dh(q)} q``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from ._rk import DenseSolution, integrate
from .algebra import Covector, LieAlgebra
from .errors import DomainError, ValidationError
from .groups import CotangentPoint, GroupPoint
from .hamiltonians import HamiltonianSpec


@dataclass(frozen=True, eq=False)
class FlowConfig:
    """Integrator settings shared by all flow operations."""

    method: str = "rk45_adaptive"  # or "rk4_fixed" (step = max_step)
    tol: float = 1e-10
    max_step: float = 1e-2
    max_time: float | None = None

    def __post_init__(self):
        if self.tol <= 0 or self.max_step <= 0:
            raise ValidationError("tol and max_step must be positive")
        if self.method not in ("rk45_adaptive", "rk4_fixed"):
            raise ValidationError(f"unknown method '{self.method}'")


DEFAULT_CONFIG = FlowConfig()


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-ordered cotangent samples sharing one trivialization side."""

    samples: tuple[tuple[float, CotangentPoint], ...]
    side: str

    def __post_init__(self):
        times = [t for t, _ in self.samples]
        if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
            raise ValidationError("sample times must be strictly increasing")
        if any(pt.side != self.side for _, pt in self.samples):
            raise ValidationError("all samples must share the trajectory side")

    @property
    def final(self) -> CotangentPoint:
        return self.samples[-1][1]


def _check_time(t: float, cfg: FlowConfig) -> None:
    if cfg.max_time is not None and abs(t) > cfg.max_time:
        raise DomainError(f"|t| = {abs(t):.6g} exceeds max_time = {cfg.max_time:.6g}")


def vertical_field(H: HamiltonianSpec, p: Covector) -> Covector:
    """The vertical vector field ad*_{dH(p)} p on the dual algebra."""
    c = H.algebra.structure_constants
    coords = np.tensordot(H.differential(p.coords), c, axes=(0, 0)) @ p.coords
    return Covector(H.algebra, coords)


def _vertical_rhs(H: HamiltonianSpec):
    n = H.algebra.dim
    c_flat = np.ascontiguousarray(H.algebra.structure_constants.reshape(n, n * n))

    def f(t, p):
        return (H.differential(p) @ c_flat).reshape(n, n) @ p

    return f


def _left_rhs(H: HamiltonianSpec):
    n = H.algebra.dim
    c_flat = np.ascontiguousarray(H.algebra.structure_constants.reshape(n, n * n))
    m = H.algebra.representation.size
    mm = m * m
    rho_flat = np.ascontiguousarray(H.algebra.representation.matrices.reshape(n, mm))

    def f(t, y):
        G = y[:mm].reshape(m, m)
        p = y[mm:]
        dH = H.differential(p)
        out = np.empty_like(y)
        np.matmul(G, (dH @ rho_flat).reshape(m, m), out=out[:mm].reshape(m, m))
        out[mm:] = (dH @ c_flat).reshape(n, n) @ p
        return out

    return f


def _right_rhs(h: HamiltonianSpec):
    n = h.algebra.dim
    c_flat = np.ascontiguousarray(h.algebra.structure_constants.reshape(n, n * n))
    m = h.algebra.representation.size
    mm = m * m
    rho_flat = np.ascontiguousarray(h.algebra.representation.matrices.reshape(n, mm))

    def f(t, y):
        G = y[:mm].reshape(m, m)
        q = y[mm:]
        dh = h.differential(q)
        out = np.empty_like(y)
        np.matmul((dh @ rho_flat).reshape(m, m), G, out=out[:mm].reshape(m, m))
        out[mm:] = -((dh @ c_flat).reshape(n, n) @ q)
        return out

    return f


def vertical_flow(
    H: HamiltonianSpec, p0: Covector, t: float, cfg: FlowConfig = DEFAULT_CONFIG
) -> Covector:
    """Flow of the vertical equation from p0 for time t (backward if t < 0)."""
    _check_time(t, cfg)
    y, _ = integrate(
        _vertical_rhs(H), 0.0, p0.coords, t,
        tol=cfg.tol, max_step=cfg.max_step, method=cfg.method,
    )
    return Covector(H.algebra, y)


def _pack(algebra: LieAlgebra, G: np.ndarray, p: np.ndarray) -> np.ndarray:
    return np.concatenate([G.ravel(), p])


def _left_flow_raw(H, g0: np.ndarray, p0: np.ndarray, t: float, cfg: FlowConfig, dense: bool):
    y0 = _pack(H.algebra, g0, p0)
    return integrate(
        _left_rhs(H), 0.0, y0, t,
        tol=cfg.tol, max_step=cfg.max_step, method=cfg.method, dense=dense,
    )


def left_flow(
    H: HamiltonianSpec,
    p0: Covector,
    t: float,
    cfg: FlowConfig = DEFAULT_CONFIG,
    g0: GroupPoint | None = None,
) -> CotangentPoint:
    """Left-trivialized cotangent flow from (identity, p0); returns side='left'.

    Starting points other than the identity are supported as plumbing via g0.
    """
    _check_time(t, cfg)
    m = H.algebra.representation.size
    start = np.eye(m) if g0 is None else g0.matrix
    y, _ = _left_flow_raw(H, start, p0.coords, t, cfg, dense=False)
    G = y[: m * m].reshape(m, m)
    return CotangentPoint(GroupPoint(H.algebra, G), Covector(H.algebra, y[m * m :]), "left")


def right_flow(
    h: HamiltonianSpec, q0: Covector, t: float, cfg: FlowConfig = DEFAULT_CONFIG
) -> CotangentPoint:
    """Right-trivialized cotangent flow from (identity, q0); returns side='right'."""
    _check_time(t, cfg)
    m = h.algebra.representation.size
    y0 = _pack(h.algebra, np.eye(m), q0.coords)
    y, _ = integrate(
        _right_rhs(h), 0.0, y0, t,
        tol=cfg.tol, max_step=cfg.max_step, method=cfg.method,
    )
    G = y[: m * m].reshape(m, m)
    return CotangentPoint(GroupPoint(h.algebra, G), Covector(h.algebra, y[m * m :]), "right")


def exp_map(
    H: HamiltonianSpec, p0: Covector, t: float, cfg: FlowConfig = DEFAULT_CONFIG
) -> GroupPoint:
    """Group projection of the left flow; the time domain is t > 0."""
    if t <= 0:
        raise DomainError("the exponential map is defined for t > 0")
    return left_flow(H, p0, t, cfg).g


class LeftDenseFlow:
    """A left flow integrated once over [0, horizon], sampled at arbitrary t."""

    def __init__(self, H: HamiltonianSpec, p0: Covector, horizon: float, cfg: FlowConfig):
        if horizon <= 0:
            raise DomainError("horizon must be positive")
        _check_time(horizon, cfg)
        m = H.algebra.representation.size
        _, sol = _left_flow_raw(H, np.eye(m), p0.coords, horizon, cfg, dense=True)
        self.algebra = H.algebra
        self.horizon = float(horizon)
        self._m = m
        self._sol: DenseSolution = sol

    def state_at(self, t: float) -> np.ndarray:
        if t < 0 or t > self.horizon + 1e-12:
            raise DomainError(f"t = {t:.6g} outside the integrated range [0, {self.horizon:.6g}]")
        return self._sol(t)

    def group_at(self, t: float) -> np.ndarray:
        mm = self._m * self._m
        return self.state_at(t)[:mm].reshape(self._m, self._m)

    def covector_at(self, t: float) -> np.ndarray:
        return self.state_at(t)[self._m * self._m :]

    def point_at(self, t: float) -> CotangentPoint:
        y = self.state_at(t)
        mm = self._m * self._m
        return CotangentPoint(
            GroupPoint(self.algebra, y[:mm].reshape(self._m, self._m)),
            Covector(self.algebra, y[mm:]),
            "left",
        )


def left_flow_dense(
    H: HamiltonianSpec, p0: Covector, horizon: float, cfg: FlowConfig = DEFAULT_CONFIG
) -> LeftDenseFlow:
    return LeftDenseFlow(H, p0, horizon, cfg)


def left_trajectory(
    H: HamiltonianSpec,
    p0: Covector,
    t: float,
    cfg: FlowConfig = DEFAULT_CONFIG,
    step_out: float = 1e-1,
) -> Trajectory:
    """Densely sampled left flow: samples every step_out, final time exact."""
    if t <= 0:
        raise DomainError("trajectory time must be positive")
    if step_out <= 0:
        raise ValidationError("step_out must be positive")
    dense = left_flow_dense(H, p0, t, cfg)
    times = list(np.arange(0.0, t, step_out))
    if not times or times[-1] < t:
        times.append(t)
    samples = tuple((float(tau), dense.point_at(tau)) for tau in times)
    return Trajectory(samples, "left")


# -- serialization -----------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """CSV with header t,p_1..p_n,g_11..g_mm (row-major), 17 significant digits."""
    first = traj.samples[0][1]
    n = first.covector.algebra.dim
    m = first.g.matrix.shape[0]
    header = (
        ["t"]
        + [f"p_{i + 1}" for i in range(n)]
        + [f"g_{i + 1}{j + 1}" for i in range(m) for j in range(m)]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t, pt in traj.samples:
            row = [t, *pt.covector.coords, *pt.g.matrix.ravel()]
            writer.writerow([_fmt(v) for v in row])


def trajectory_to_json(traj: Trajectory, path) -> None:
    """JSON mirror of the CSV fields."""
    payload = {
        "side": traj.side,
        "samples": [
            {
                "t": t,
                "p": list(pt.covector.coords),
                "g": [list(row) for row in pt.g.matrix],
            }
            for t, pt in traj.samples
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")

"""Runge-Kutta steppers: adaptive Dormand-Prince 5(4) and fixed-step RK4.

The adaptive stepper propagates the fifth-order solution (FSAL) and controls
the embedded 4th/5th difference against atol = rtol = tol.  Accepted nodes are
kept with their derivatives so that trajectories can be sampled densely by
cubic Hermite interpolation without re-integrating.
"""

from __future__ import annotations

import numpy as np

from .errors import IntegrationError

# Dormand-Prince coefficients (Hairer-Norsett-Wanner tableau).
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_ERR = _B5 - _B4

_MAX_STEPS = 5_000_000


class DenseSolution:
    """Accepted nodes (t, y, f) with cubic Hermite evaluation between them."""

    __slots__ = ("ts", "ys", "fs")

    def __init__(self, ts, ys, fs):
        order = np.argsort(ts, kind="stable")
        self.ts = np.asarray(ts)[order]
        self.ys = np.asarray(ys)[order]
        self.fs = np.asarray(fs)[order]

    @property
    def t_start(self) -> float:
        return float(self.ts[0])

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])

    def __call__(self, t: float) -> np.ndarray:
        ts = self.ts
        if t <= ts[0]:
            k = 1
        elif t >= ts[-1]:
            k = len(ts) - 1
        else:
            k = int(np.searchsorted(ts, t, side="right"))
            k = min(max(k, 1), len(ts) - 1)
        t0, t1 = ts[k - 1], ts[k]
        h = t1 - t0
        if h == 0.0:
            return self.ys[k].copy()
        s = (t - t0) / h
        s2 = s * s
        s3 = s2 * s
        h00 = 2 * s3 - 3 * s2 + 1
        h10 = s3 - 2 * s2 + s
        h01 = -2 * s3 + 3 * s2
        h11 = s3 - s2
        return (
            h00 * self.ys[k - 1]
            + (h10 * h) * self.fs[k - 1]
            + h01 * self.ys[k]
            + (h11 * h) * self.fs[k]
        )


_A_ROWS = tuple(np.array(row) for row in _A)


def _dp_step(f, t, y, h, k1, K):
    K[0] = k1
    for i in range(1, 7):
        yi = y + h * (_A_ROWS[i] @ K[:i])
        K[i] = f(t + _C[i] * h, yi)
    y5 = y + h * (_B5 @ K)
    err = h * (_ERR @ K)
    return y5, err, K[6].copy()  # k7 = f(t+h, y5): FSAL


def integrate(
    f,
    t0: float,
    y0: np.ndarray,
    t1: float,
    *,
    tol: float = 1e-10,
    max_step: float = 1e-2,
    method: str = "rk45_adaptive",
    dense: bool = False,
):
    """Integrate y' = f(t, y) from t0 to t1 (either direction).

    Returns (y_end, DenseSolution or None).  Raises IntegrationError with the
    last good time on step-size underflow.
    """
    y0 = np.asarray(y0, dtype=float)
    if t1 == t0:
        if dense:
            f0 = f(t0, y0)
            return y0.copy(), DenseSolution([t0, t0], [y0, y0], [f0, f0])
        return y0.copy(), None
    if method == "rk4_fixed":
        return _integrate_rk4(f, t0, y0, t1, step=max_step, dense=dense)
    if method != "rk45_adaptive":
        raise ValueError(f"unknown integration method '{method}'")

    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    h = direction * min(max_step, span)
    t, y = t0, y0.copy()
    k1 = np.asarray(f(t, y), dtype=float)
    K = np.empty((7, y.size))
    ts, ys, fs = [t], [y.copy()], [k1.copy()]
    steps = 0
    while direction * (t1 - t) > 0:
        steps += 1
        if steps > _MAX_STEPS:
            raise IntegrationError("step budget exhausted", last_time=t)
        if abs(h) > abs(t1 - t):
            h = t1 - t
        y5, err, k7 = _dp_step(f, t, y, h, k1, K)
        scale = tol * (1.0 + np.maximum(np.abs(y), np.abs(y5)))
        enorm = float(np.max(np.abs(err) / scale))
        if enorm <= 1.0:
            t = t + h
            y = y5
            k1 = k7
            if dense:
                ts.append(t)
                ys.append(y.copy())
                fs.append(k7)
            factor = 5.0 if enorm == 0.0 else min(5.0, max(0.2, 0.9 * enorm ** -0.2))
        else:
            factor = max(0.2, 0.9 * enorm ** -0.2)
        h = direction * min(max_step, abs(h) * factor)
        if abs(h) < 1e-14 * max(1.0, abs(t)):
            raise IntegrationError("step size underflow", last_time=t)
    sol = DenseSolution(ts, ys, fs) if dense else None
    return y, sol


def _integrate_rk4(f, t0, y0, t1, *, step, dense):
    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    n_steps = max(1, int(np.ceil(span / step - 1e-12)))
    h = direction * span / n_steps
    t, y = t0, y0.copy()
    k1 = f(t, y)
    ts, ys, fs = [t], [y.copy()], [np.asarray(k1, dtype=float)]
    for _ in range(n_steps):
        k2 = f(t + h / 2, y + (h / 2) * k1)
        k3 = f(t + h / 2, y + (h / 2) * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + h
        k1 = f(t, y)
        if dense:
            ts.append(t)
            ys.append(y.copy())
            fs.append(np.asarray(k1, dtype=float))
    sol = DenseSolution(ts, ys, fs) if dense else None
    return y, sol

"""Discrete linear Kalman filter with a constant-velocity motion model.

State is x = (a, b, u, v): image position (a, b) in pixels and per-frame
velocity (u, v). Time update propagates state and covariance through the
transition model; measurement update fuses a measured position. Updates are
pure: they take a state and return a new one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SingularInnovationError(ValueError):
    """Innovation covariance H P- H^T + R is singular; the model is degenerate."""


@dataclass(frozen=True)
class KalmanParams:
    """Model matrices: transition A, control B, observation H, noise covariances Q, R."""

    A: np.ndarray
    B: np.ndarray
    H: np.ndarray
    Q: np.ndarray
    R: np.ndarray


@dataclass(frozen=True)
class KalmanState:
    """Estimate x (4-vector) with error covariance P (4x4)."""

    x: np.ndarray
    P: np.ndarray

    @property
    def position(self) -> np.ndarray:
        return self.x[:2]

    @property
    def velocity(self) -> np.ndarray:
        return self.x[2:]


DEFAULT_Q_POS = 0.01
DEFAULT_Q_VEL = 0.01
DEFAULT_R_POS = 1.0

# initial covariance: loose on velocity so early measurements set it
INIT_P_DIAG = (10.0, 10.0, 100.0, 100.0)


def default_cv_params(
    q_pos: float = DEFAULT_Q_POS,
    q_vel: float = DEFAULT_Q_VEL,
    r_pos: float = DEFAULT_R_POS,
) -> KalmanParams:
    """Constant-velocity model with unit frame step and position-only observation.

    q_pos/q_vel are process-noise variances (px^2, px^2/frame^2), r_pos the
    measurement-noise variance (px^2). No control input: B u is identically 0.
    """
    if q_pos < 0 or q_vel < 0:
        raise ValueError("process-noise variances must be >= 0")
    if r_pos <= 0:
        raise ValueError("measurement-noise variance must be > 0")
    A = np.array([
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    B = np.zeros((4, 1))
    H = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])
    Q = np.diag([q_pos, q_pos, q_vel, q_vel]).astype(float)
    R = np.diag([r_pos, r_pos]).astype(float)
    return KalmanParams(A=A, B=B, H=H, Q=Q, R=R)


def _as_xy(p) -> tuple[float, float]:
    if hasattr(p, "x") and hasattr(p, "y"):
        return float(p.x), float(p.y)
    return float(p[0]), float(p[1])


def init_state(position, velocity=(0.0, 0.0), p_diag=INIT_P_DIAG) -> KalmanState:
    """Fresh state at a known position, zero velocity by default.

    Accepts a Point2 or any (x, y) pair for both position and velocity.
    """
    px, py = _as_xy(position)
    vx, vy = _as_xy(velocity)
    return KalmanState(x=np.array([px, py, vx, vy], dtype=float),
                       P=np.diag(p_diag).astype(float))


def _symmetrize(P: np.ndarray) -> np.ndarray:
    return (P + P.T) / 2.0


def time_update(state: KalmanState, params: KalmanParams, control=None) -> KalmanState:
    """A priori estimate: x- = A x + B u, P- = A P A^T + Q."""
    x = params.A @ state.x
    if control is not None:
        x = x + params.B @ np.asarray(control, dtype=float)
    P = _symmetrize(params.A @ state.P @ params.A.T + params.Q)
    return KalmanState(x=x, P=P)


def measurement_update(state: KalmanState, z, params: KalmanParams) -> KalmanState:
    """A posteriori estimate from measured position z = (a, b).

    Gain K = P- H^T (H P- H^T + R)^-1, then x = x- + K (z - H x-) and
    P = (I - K H) P-. The 2x2 innovation system is inverted in closed form.
    Raises SingularInnovationError when the innovation covariance is singular.
    """
    z = np.asarray(z, dtype=float).reshape(2)
    H = params.H
    S = H @ state.P @ H.T + params.R
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    scale = max(abs(S).max(), 1e-30)
    if not np.isfinite(det) or abs(det) < 1e-15 * scale * scale:
        raise SingularInnovationError(
            f"innovation covariance is singular (det={det}); check Q/R configuration"
        )
    S_inv = np.array([[S[1, 1], -S[0, 1]], [-S[1, 0], S[0, 0]]]) / det
    K = state.P @ H.T @ S_inv
    x = state.x + K @ (z - H @ state.x)
    P = _symmetrize((np.eye(4) - K @ H) @ state.P)
    return KalmanState(x=x, P=P)

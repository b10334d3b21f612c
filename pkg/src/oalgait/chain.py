"""Planar N-joint kinematic chain with a two-dimensional shape basis.

The chain has ``num_joints`` yaw joints and ``num_joints + 1`` equal links;
the total body length is normalized to 1, so every displacement downstream
is measured in body lengths (BL).  Joint angles are produced from a reduced
shape variable ``w = (w1, w2)`` through a pair of sinusoidal basis functions,
which keeps the shape space two-dimensional regardless of joint count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ConfigError


class DragModel(str, Enum):
    LINEAR = "linear"
    COULOMB = "coulomb"


@dataclass(frozen=True)
class RobotSpec:
    """Morphology and ground-drag parameters of the planar chain.

    Attributes
    ----------
    num_joints : int
        Number of planar (yaw) joints N.  The chain has N+1 links.
    joint_limit : float
        Maximum joint angle magnitude in radians; also bounds |w1|, |w2|.
    wave_number : float
        Spatial frequency of the shape basis (waves along the body).
    drag_ratio : float
        Perpendicular over parallel drag coefficient; must exceed 1 for
        undulatory propulsion.
    drag_model : DragModel
        Linear viscous drag (default) or speed-independent anisotropic
        Coulomb friction.
    link_length : float
        Length of each link in BL; derived as 1/(N+1) when not given.
    """

    num_joints: int = 6
    joint_limit: float = 2.0
    wave_number: float = 0.5
    drag_ratio: float = 2.0
    drag_model: DragModel = DragModel.LINEAR
    link_length: float = 0.0

    def __post_init__(self):
        if self.num_joints < 2:
            raise ConfigError("num_joints must be >= 2")
        if not 0.0 < self.joint_limit < np.pi:
            raise ConfigError("joint_limit must lie in (0, pi)")
        if self.drag_ratio <= 1.0:
            raise ConfigError("drag_ratio must be > 1")
        if self.wave_number <= 0.0:
            raise ConfigError("wave_number must be positive")
        derived = 1.0 / (self.num_joints + 1)
        if self.link_length == 0.0:
            object.__setattr__(self, "link_length", derived)
        elif abs(self.link_length * (self.num_joints + 1) - 1.0) > 1e-9:
            raise ConfigError(
                f"link_length * (num_joints+1) must equal 1 BL, got "
                f"{self.link_length * (self.num_joints + 1):.6f}"
            )
        if not isinstance(self.drag_model, DragModel):
            object.__setattr__(self, "drag_model", DragModel(self.drag_model))

    @property
    def num_links(self) -> int:
        return self.num_joints + 1

    def with_(self, **kw) -> "RobotSpec":
        return replace(self, **kw)

    @classmethod
    def from_json(cls, path) -> "RobotSpec":
        """Load a spec from a JSON file.

        Recognized keys: num_joints, link_length (optional), joint_limit,
        wave_number, drag_ratio, drag_model.
        """
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read robot config {path}: {exc}") from exc
        allowed = {
            "num_joints",
            "link_length",
            "joint_limit",
            "wave_number",
            "drag_ratio",
            "drag_model",
        }
        unknown = set(raw) - allowed
        if unknown:
            raise ConfigError(f"unknown robot config keys: {sorted(unknown)}")
        try:
            return cls(**raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad robot config {path}: {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "num_joints": self.num_joints,
            "link_length": self.link_length,
            "joint_limit": self.joint_limit,
            "wave_number": self.wave_number,
            "drag_ratio": self.drag_ratio,
            "drag_model": self.drag_model.value,
        }


CENTRAL_FRAME = -1  # frame selector: -1 = central body axis, k >= 0 = link k


def basis_functions(spec: RobotSpec):
    """Return the two shape basis vectors (beta1, beta2), each length N.

    beta1(i) = sin(2*pi*f_s*i/(N-1)), beta2(i) = cos(2*pi*f_s*i/(N-1)).
    """
    n = spec.num_joints
    i = np.arange(n, dtype=float)
    arg = 2.0 * np.pi * spec.wave_number * i / (n - 1)
    return np.sin(arg), np.cos(arg)


def shape_to_joints(w, spec: RobotSpec) -> np.ndarray:
    """Map a reduced shape point w=(w1, w2) to the N joint angles."""
    b1, b2 = basis_functions(spec)
    return b1 * w[0] + b2 * w[1]


def orientation_coeffs(spec: RobotSpec):
    """Cumulative basis sums c1, c2 with link orientation = c1*w1 + c2*w2.

    Link k (0 = head) is oriented at the sum of the first k joint angles
    in the head-link frame; both coefficients have a leading zero.
    """
    b1, b2 = basis_functions(spec)
    c1 = np.concatenate(([0.0], np.cumsum(b1)))
    c2 = np.concatenate(([0.0], np.cumsum(b2)))
    return c1, c2


def link_frames(w, spec: RobotSpec, frame: int = CENTRAL_FRAME):
    """Link poses and velocity Jacobians in a body frame.

    Parameters
    ----------
    w : (2,) array-like
        Reduced shape point.
    frame : int
        ``CENTRAL_FRAME`` for the central body axis frame (origin at the
        mean link midpoint, x-axis at the mean link orientation) or a
        0-based link index for that link's midpoint frame.

    Returns
    -------
    poses : (L, 3) ndarray
        Per-link (x, y, angle) of link midpoints in the chosen frame.
    jac : (L, 2, 5) ndarray
        Per-link Jacobian mapping (xi_x, xi_y, xi_theta, dw1, dw2) to the
        link midpoint velocity expressed in the *link* frame.
    dpose_dw : (L, 3, 2) ndarray
        Exact derivatives of the link poses with respect to (w1, w2);
        useful for frame conversions during simulation.
    """
    from . import kernels

    c1, c2 = orientation_coeffs(spec)
    qx, qy, th, dqx, dqy, dth = kernels.frame_kinematics(
        float(w[0]), float(w[1]), c1, c2, spec.link_length, int(frame)
    )
    L = spec.num_links
    poses = np.stack([qx, qy, th], axis=1)
    dpose_dw = np.empty((L, 3, 2))
    dpose_dw[:, 0, :] = dqx.T
    dpose_dw[:, 1, :] = dqy.T
    dpose_dw[:, 2, :] = dth.T
    jac = np.empty((L, 2, 5))
    for k in range(L):
        ct, st = np.cos(th[k]), np.sin(th[k])
        rot = np.array([[ct, st], [-st, ct]])  # world-of-frame -> link axes
        cols = np.empty((2, 5))
        cols[:, 0] = (1.0, 0.0)
        cols[:, 1] = (0.0, 1.0)
        cols[:, 2] = (-qy[k], qx[k])
        cols[:, 3] = (dqx[0, k], dqy[0, k])
        cols[:, 4] = (dqx[1, k], dqy[1, k])
        jac[k] = rot @ cols
    return poses, jac, dpose_dw

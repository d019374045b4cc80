"""Actuation models: how an action vector becomes joint torques.

Four modes are supported. Torque passes the action through; Velocity and
PositionPD are damped servos on joint velocity/angle; Muscle drives an
antagonistic torque-muscle pair per joint with first-order activation
dynamics, a Gaussian torque-angle curve and a linear force-velocity ramp.
All modes clamp the final torque to the joint's limit.

The per-substep math lives in physics.kernels._torques; the wrappers here
apply the same function so results are identical whichever entry point is
used.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from ..physics import kernels
from ..physics.engine import arrays_for, measure_joint_angles
from ..physics.types import RevoluteJoint, WORLD

# Defaults for muscles derived from a joint definition.
ACTIVATION_TIME = 0.015     # s
MUSCLE_MAX_VELOCITY = 20.0  # rad/s
MIN_ANGLE_WIDTH = 0.3       # rad, floor for the torque-angle Gaussian width
VELOCITY_ACTION_LIMIT = 10.0  # rad/s bound of the Velocity action space


class ActuationMode(enum.Enum):
    Torque = kernels.MODE_TORQUE
    Velocity = kernels.MODE_VELOCITY
    PositionPD = kernels.MODE_PD
    Muscle = kernels.MODE_MUSCLE

    @classmethod
    def parse(cls, name: str) -> "ActuationMode":
        key = name.strip().lower()
        table = {"torque": cls.Torque, "velocity": cls.Velocity,
                 "pd": cls.PositionPD, "positionpd": cls.PositionPD,
                 "muscle": cls.Muscle}
        if key not in table:
            raise ValueError(f"unknown actuation mode {name!r}")
        return table[key]


@dataclass(frozen=True)
class MuscleUnit:
    joint: int
    tau_max_plus: float
    tau_max_minus: float
    activation_time: float
    optimal_angle: float
    angle_width: float
    max_velocity: float
    activation_plus: float = 0.0
    activation_minus: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.activation_plus <= 1.0 and 0.0 <= self.activation_minus <= 1.0):
            raise ValueError("muscle activations must lie in [0, 1]")
        if self.tau_max_plus <= 0 or self.tau_max_minus <= 0:
            raise ValueError("muscle tau_max must be > 0")
        if self.activation_time <= 0:
            raise ValueError("muscle activation_time must be > 0")


def derive_muscle(joint: RevoluteJoint, override: dict | None = None) -> MuscleUnit:
    """Default antagonistic pair for a joint: peak torque at the limit,
    torque-angle curve centered mid-range."""
    lo, hi = joint.angle_limits
    doc = override or {}
    return MuscleUnit(
        joint=joint.child_link,
        tau_max_plus=float(doc.get("TauMaxPlus", joint.torque_limit)),
        tau_max_minus=float(doc.get("TauMaxMinus", joint.torque_limit)),
        activation_time=float(doc.get("ActivationTime", ACTIVATION_TIME)),
        optimal_angle=float(doc.get("OptimalAngle", 0.5 * (lo + hi))),
        angle_width=float(doc.get("AngleWidth", max(0.5 * (hi - lo), MIN_ANGLE_WIDTH))),
        max_velocity=float(doc.get("MaxVelocity", MUSCLE_MAX_VELOCITY)),
    )


@dataclass(frozen=True)
class ActionSpace:
    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        if self.minimum.shape != self.maximum.shape:
            raise ValueError("action space bounds must have equal shape")
        if np.any(self.minimum > self.maximum):
            raise ValueError("action space minimum exceeds maximum")
        self.minimum.setflags(write=False)
        self.maximum.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.minimum.shape[0]

    def clamp(self, action) -> np.ndarray:
        a = np.asarray(action, dtype=np.float64).reshape(-1)
        if a.shape[0] != self.dim:
            raise ValueError(f"action has dim {a.shape[0]}, space has {self.dim}")
        return np.clip(a, self.minimum, self.maximum)

    def sample(self, rng) -> np.ndarray:
        return np.array([rng.uniform(float(lo), float(hi))
                         for lo, hi in zip(self.minimum, self.maximum)])


def action_space(model, mode: ActuationMode) -> ActionSpace:
    nj = model.n_joints
    if mode is ActuationMode.Torque:
        lim = np.array([j.torque_limit for j in model.joints])
        return ActionSpace(-lim, lim.copy())
    if mode is ActuationMode.Velocity:
        lim = np.full(nj, VELOCITY_ACTION_LIMIT)
        return ActionSpace(-lim, lim.copy())
    if mode is ActuationMode.PositionPD:
        lo = np.array([j.angle_limits[0] for j in model.joints])
        hi = np.array([j.angle_limits[1] for j in model.joints])
        return ActionSpace(lo, hi)
    return ActionSpace(np.zeros(2 * nj), np.ones(2 * nj))


def compute_torques(model, mode: ActuationMode, action, state, muscle_state, dt: float):
    """Torques for one substep. Returns (torques, updated muscle state).

    The action is clamped to the mode's space, never rejected; output
    torques never exceed the joint limits. muscle_state is a list of
    MuscleUnit (only consulted in Muscle mode) and is returned updated."""
    arr = arrays_for(model)
    space = action_space(model, mode)
    a = space.clamp(action)

    if mode is ActuationMode.Muscle:
        if len(muscle_state) != arr.n_joints:
            raise ValueError("muscle_state must hold one unit per joint")
        act_p = np.array([m.activation_plus for m in muscle_state])
        act_m = np.array([m.activation_minus for m in muscle_state])
        m_tp = np.array([m.tau_max_plus for m in muscle_state])
        m_tm = np.array([m.tau_max_minus for m in muscle_state])
        m_tact = np.array([m.activation_time for m in muscle_state])
        m_opt = np.array([m.optimal_angle for m in muscle_state])
        m_w = np.array([m.angle_width for m in muscle_state])
        m_vmax = np.array([m.max_velocity for m in muscle_state])
    else:
        act_p = np.zeros(arr.n_joints)
        act_m = np.zeros(arr.n_joints)
        m_tp, m_tm = arr.m_tp, arr.m_tm
        m_tact, m_opt, m_w, m_vmax = arr.m_tact, arr.m_opt, arr.m_w, arr.m_vmax

    taus = np.empty(arr.n_joints)
    kernels._torques(mode.value, a, state.ang, state.omega,
                     arr.jp, arr.jc, arr.jtau, arr.jkp, arr.jkd,
                     m_tp, m_tm, m_tact, m_opt, m_w, m_vmax,
                     act_p, act_m, dt, taus)

    if mode is ActuationMode.Muscle:
        updated = [replace(m, activation_plus=float(act_p[i]), activation_minus=float(act_m[i]))
                   for i, m in enumerate(muscle_state)]
    else:
        updated = muscle_state
    return taus, updated


def neutral_action(model, mode: ActuationMode, state) -> np.ndarray:
    """The 'do nothing' action: zeros, except PositionPD holds the current
    pose."""
    if mode is ActuationMode.PositionPD:
        return measure_joint_angles(model, state)
    return np.zeros(action_space(model, mode).dim)

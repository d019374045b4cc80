"""Public stepping API over the compiled kernels.

`integrate_step` advances one substep and reports contact events;
`run_control_window` is the fast path used by environments (one kernel
call per control period). Both are pure with respect to their inputs:
the incoming state is never mutated and equal inputs give bit-identical
outputs on the same build.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from . import kernels
from .kernels import (
    BAUMGARTE,
    FRICTION,
    GRAVITY,
    ITERATIONS,
    MAX_BIAS,
    SLOP,
)
from .types import WORLD, ContactEvent, SimState

if TYPE_CHECKING:  # pragma: no cover
    from ..character.model import CharacterModel


class PhysicsError(ValueError):
    pass


class NonFiniteStateError(PhysicsError):
    """Input state contains NaN/Inf; upstream divergence, not a solver bug."""


class ModelArrays:
    """Flat-array view of a character model, built once and cached."""

    def __init__(self, model):
        links = model.links
        joints = model.joints
        n = len(links)
        self.n_links = n
        self.mass = np.array([l.mass for l in links])
        self.inertia = np.array([l.inertia for l in links])
        self.inv_m = 1.0 / self.mass
        self.inv_i = 1.0 / self.inertia

        pts = []
        owner = []
        for i, l in enumerate(links):
            for (px, py) in l.contact_points:
                pts.append((px, py))
                owner.append(i)
        self.cp_x = np.array([p[0] for p in pts])
        self.cp_y = np.array([p[1] for p in pts])
        self.cp_link = np.array(owner, dtype=np.int32)

        nj = len(joints)
        self.n_joints = nj
        self.jp = np.array([j.parent_link for j in joints], dtype=np.int32)
        self.jc = np.array([j.child_link for j in joints], dtype=np.int32)
        self.jpx = np.array([j.anchor_parent[0] for j in joints])
        self.jpy = np.array([j.anchor_parent[1] for j in joints])
        self.jcx = np.array([j.anchor_child[0] for j in joints])
        self.jcy = np.array([j.anchor_child[1] for j in joints])
        self.jlo = np.array([j.angle_limits[0] for j in joints])
        self.jhi = np.array([j.angle_limits[1] for j in joints])
        self.jtau = np.array([j.torque_limit for j in joints])
        self.jkp = np.array([j.kp for j in joints])
        self.jkd = np.array([j.kd for j in joints])

        mus = model.muscles
        self.m_tp = np.array([m.tau_max_plus for m in mus]) if mus else np.zeros(nj)
        self.m_tm = np.array([m.tau_max_minus for m in mus]) if mus else np.zeros(nj)
        self.m_tact = np.array([m.activation_time for m in mus]) if mus else np.full(nj, 1.0)
        self.m_opt = np.array([m.optimal_angle for m in mus]) if mus else np.zeros(nj)
        self.m_w = np.array([m.angle_width for m in mus]) if mus else np.full(nj, 1.0)
        self.m_vmax = np.array([m.max_velocity for m in mus]) if mus else np.full(nj, 1.0)

        self.jw, self.cw = kernels.alloc_scratch(nj, len(pts))


def arrays_for(model) -> ModelArrays:
    arr = getattr(model, "_phys_arrays", None)
    if arr is None:
        arr = ModelArrays(model)
        model._phys_arrays = arr
    return arr


_EMPTY_TX = np.array([-1e9, 1e9])
_EMPTY_TY = np.array([-1e9, -1e9])


def _terrain_arrays(terrain):
    if terrain is None:
        # far below everything: effectively contact-free
        return _EMPTY_TX, _EMPTY_TY
    return terrain.xs, terrain.ys


def integrate_step(model, state: SimState, joint_torques, terrain, dt: float,
                   *, gravity: float = GRAVITY, mu: float = FRICTION,
                   iterations: int = ITERATIONS, baumgarte: float = BAUMGARTE):
    """One substep of dt seconds. Returns (new state, contact events).

    Torques are clamped to each joint's torque_limit before application.
    A non-finite input state raises NonFiniteStateError; a non-finite
    output only sets the returned state's `diverged` flag.
    """
    arr = arrays_for(model)
    torques = np.asarray(joint_torques, dtype=np.float64)
    if torques.shape != (arr.n_joints,):
        raise PhysicsError(
            f"expected {arr.n_joints} joint torques, got shape {torques.shape}"
        )
    if state.n_links != arr.n_links:
        raise PhysicsError(
            f"state has {state.n_links} links, model has {arr.n_links}"
        )
    if dt <= 0:
        raise PhysicsError("dt must be > 0")
    if not state.is_finite():
        raise NonFiniteStateError("input state contains NaN/Inf")

    new = state.copy()
    taus = np.clip(torques, -arr.jtau, arr.jtau)
    tx, ty = _terrain_arrays(terrain)
    ncon = kernels._substep(
        new.pos, new.ang, new.vel, new.omega, arr.inv_m, arr.inv_i,
        arr.cp_x, arr.cp_y, arr.cp_link,
        arr.jp, arr.jc, arr.jpx, arr.jpy, arr.jcx, arr.jcy, arr.jlo, arr.jhi,
        taus, tx, ty,
        dt, gravity, mu, iterations, baumgarte, SLOP, MAX_BIAS,
        arr.jw, arr.cw)
    new.time = state.time + dt
    new.diverged = not new.is_finite()

    events = []
    cw = arr.cw
    for k in range(ncon):
        events.append(ContactEvent(
            link=int(cw[k, 0]),
            point=(float(cw[k, 10]), float(cw[k, 11])),
            normal_impulse=float(cw[k, 8]),
            tangent_impulse=float(cw[k, 9]),
        ))
    return new, events


def run_control_window(model, state: SimState, mode: int, action, act_p, act_m,
                       terrain, substeps: int, dt: float,
                       *, gravity: float = GRAVITY, mu: float = FRICTION,
                       iterations: int = ITERATIONS, baumgarte: float = BAUMGARTE):
    """Hold `action` for `substeps` substeps, recomputing torques every
    substep. Mutates act_p/act_m (muscle activations). Returns
    (new state, touched link mask)."""
    arr = arrays_for(model)
    new = state.copy()
    tx, ty = _terrain_arrays(terrain)
    touched = np.zeros(arr.n_links, dtype=np.uint8)
    diverged = kernels.control_window(
        new.pos, new.ang, new.vel, new.omega, arr.inv_m, arr.inv_i,
        arr.cp_x, arr.cp_y, arr.cp_link,
        arr.jp, arr.jc, arr.jpx, arr.jpy, arr.jcx, arr.jcy,
        arr.jlo, arr.jhi, arr.jtau, arr.jkp, arr.jkd,
        arr.m_tp, arr.m_tm, arr.m_tact, arr.m_opt, arr.m_w, arr.m_vmax,
        act_p, act_m,
        mode, np.asarray(action, dtype=np.float64), tx, ty,
        substeps, dt, gravity, mu, iterations, baumgarte, SLOP, MAX_BIAS,
        touched, arr.jw, arr.cw)
    new.time = state.time + substeps * dt
    new.diverged = bool(diverged)
    return new, touched


def total_energy(model, state: SimState, gravity: float = GRAVITY) -> float:
    """Kinetic plus gravitational potential energy over all links, joules."""
    arr = arrays_for(model)
    if state.n_links != arr.n_links:
        raise PhysicsError("state does not belong to model")
    v2 = state.vel[:, 0] ** 2 + state.vel[:, 1] ** 2
    kin = 0.5 * float(np.dot(arr.mass, v2)) + 0.5 * float(np.dot(arr.inertia, state.omega ** 2))
    pot = gravity * float(np.dot(arr.mass, state.pos[:, 1]))
    return kin + pot


def forward_kinematics(model, joint_angles, root_pose=((0.0, 0.0), 0.0)) -> SimState:
    """Pose every link from joint angles, zero velocities.

    Link angle = parent angle + joint angle; positions place each joint's
    anchors exactly coincident. Joints pinned to WORLD re-anchor their
    child at the world anchor."""
    arr = arrays_for(model)
    angles = np.asarray(joint_angles, dtype=np.float64)
    if angles.shape != (arr.n_joints,):
        raise PhysicsError(
            f"expected {arr.n_joints} joint angles, got shape {angles.shape}"
        )
    state = SimState.zeros(arr.n_links)
    (rx, ry), rang = root_pose
    state.pos[model.root_link, 0] = rx
    state.pos[model.root_link, 1] = ry
    state.ang[model.root_link] = rang

    for j in model.fk_order:
        joint = model.joints[j]
        p = joint.parent_link
        c = joint.child_link
        if p == WORLD:
            pang = 0.0
            wpx, wpy = joint.anchor_parent
        else:
            pang = state.ang[p]
            ca, sa = math.cos(pang), math.sin(pang)
            apx, apy = joint.anchor_parent
            wpx = state.pos[p, 0] + ca * apx - sa * apy
            wpy = state.pos[p, 1] + sa * apx + ca * apy
        cang = pang + angles[j]
        ca, sa = math.cos(cang), math.sin(cang)
        acx, acy = joint.anchor_child
        state.ang[c] = cang
        state.pos[c, 0] = wpx - (ca * acx - sa * acy)
        state.pos[c, 1] = wpy - (sa * acx + ca * acy)
    return state


def measure_joint_angles(model, state: SimState) -> np.ndarray:
    """Relative joint angles (child minus parent, unwrapped) from a state."""
    out = np.empty(len(model.joints))
    for j, joint in enumerate(model.joints):
        p = joint.parent_link
        pang = 0.0 if p == WORLD else state.ang[p]
        out[j] = state.ang[joint.child_link] - pang
    return out


def joint_anchor_error(model, state: SimState) -> float:
    """Largest anchor-coincidence distance over all joints, metres."""
    worst = 0.0
    for joint in model.joints:
        c = joint.child_link
        ca, sa = math.cos(state.ang[c]), math.sin(state.ang[c])
        acx, acy = joint.anchor_child
        wcx = state.pos[c, 0] + ca * acx - sa * acy
        wcy = state.pos[c, 1] + sa * acx + ca * acy
        p = joint.parent_link
        if p == WORLD:
            wpx, wpy = joint.anchor_parent
        else:
            ca, sa = math.cos(state.ang[p]), math.sin(state.ang[p])
            apx, apy = joint.anchor_parent
            wpx = state.pos[p, 0] + ca * apx - sa * apy
            wpy = state.pos[p, 1] + sa * apx + ca * apy
        err = math.hypot(wcx - wpx, wcy - wpy)
        if err > worst:
            worst = err
    return worst

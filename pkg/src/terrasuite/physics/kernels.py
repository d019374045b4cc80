"""Inner-loop routines for the stepper, written against flat numpy arrays.

Every function here is compiled with numba when it is installed and runs
unmodified (much slower) under plain CPython otherwise. The hot path is
one call per control window (`control_window`), which advances the state
by many substeps without returning to Python.

Velocity update is a symmetric split kick: half the gravity/torque impulse
before the constraint solve, half after the position drift. This makes
constant-acceleration trajectories exact (no O(dt) offset in free fall)
while keeping the usual impulse-solver pipeline.

Scratch-array column meanings are documented inline; callers allocate via
`alloc_scratch` so buffers are reused across substeps.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap

# Solver constants (see package docs for rationale; declared, not tuned to
# reproduce any external engine).
GRAVITY = 9.8
FRICTION = 0.9
ITERATIONS = 10
BAUMGARTE = 0.2
SLOP = 1e-3          # allowed contact penetration before correction
MAX_BIAS = 4.0       # cap on any Baumgarte correction velocity, m/s

# Actuation mode codes shared with character.actuation
MODE_TORQUE = 0
MODE_VELOCITY = 1
MODE_PD = 2
MODE_MUSCLE = 3

# joint scratch columns
_JW_COLS = 16  # rpx rpy rcx rcy bx by i00 i01 i11 limacc err_lo err_hi (rest spare)
# contact scratch columns
_CW_COLS = 12  # link rx ry nx ny bias kn kt ln lt px py


@njit(cache=True)
def _surface(tx, ty, x):
    """Height and unit surface normal of the profile at x (flat beyond ends)."""
    n = tx.shape[0]
    if x <= tx[0]:
        return ty[0], 0.0, 1.0
    if x >= tx[n - 1]:
        return ty[n - 1], 0.0, 1.0
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tx[mid] <= x:
            lo = mid
        else:
            hi = mid
    dx = tx[hi] - tx[lo]
    dy = ty[hi] - ty[lo]
    h = ty[lo] + dy * (x - tx[lo]) / dx
    inv_len = 1.0 / math.sqrt(dx * dx + dy * dy)
    return h, -dy * inv_len, dx * inv_len


@njit(cache=True)
def _kick(pos, vel, omega, inv_m, inv_i, jp, jc, taus, gravity, half_dt):
    for i in range(pos.shape[0]):
        if inv_m[i] > 0.0:
            vel[i, 1] -= gravity * half_dt
    for j in range(jp.shape[0]):
        t = taus[j]
        c = jc[j]
        omega[c] += t * inv_i[c] * half_dt
        p = jp[j]
        if p >= 0:
            omega[p] -= t * inv_i[p] * half_dt


@njit(cache=True)
def _substep(pos, ang, vel, omega, inv_m, inv_i,
             cp_x, cp_y, cp_link,
             jp, jc, jpx, jpy, jcx, jcy, jlo, jhi,
             taus, tx, ty,
             dt, gravity, mu, iters, baumgarte, slop, max_bias,
             jw, cw):
    """Advance one substep in place. Returns the number of active contacts;
    accumulated impulses for contact k are in cw[k, 8] (normal) and
    cw[k, 9] (tangent), the world contact point in cw[k, 10:12]."""
    half_dt = 0.5 * dt
    inv_dt = 1.0 / dt
    _kick(pos, vel, omega, inv_m, inv_i, jp, jc, taus, gravity, half_dt)

    nj = jp.shape[0]

    # Joint constraint setup: lever arms, Baumgarte bias from anchor error,
    # inverted 2x2 effective mass. Positions are frozen during the velocity
    # iterations so this happens once per substep.
    for j in range(nj):
        c = jc[j]
        cc = math.cos(ang[c])
        sc = math.sin(ang[c])
        rcx = cc * jcx[j] - sc * jcy[j]
        rcy = sc * jcx[j] + cc * jcy[j]
        wcx = pos[c, 0] + rcx
        wcy = pos[c, 1] + rcy
        p = jp[j]
        if p >= 0:
            cp_ = math.cos(ang[p])
            sp = math.sin(ang[p])
            rpx = cp_ * jpx[j] - sp * jpy[j]
            rpy = sp * jpx[j] + cp_ * jpy[j]
            wpx = pos[p, 0] + rpx
            wpy = pos[p, 1] + rpy
            im_p = inv_m[p]
            ii_p = inv_i[p]
        else:
            rpx = 0.0
            rpy = 0.0
            wpx = jpx[j]
            wpy = jpy[j]
            im_p = 0.0
            ii_p = 0.0
        bx = baumgarte * inv_dt * (wcx - wpx)
        by = baumgarte * inv_dt * (wcy - wpy)
        bn = math.sqrt(bx * bx + by * by)
        if bn > max_bias:
            s = max_bias / bn
            bx *= s
            by *= s
        im_c = inv_m[c]
        ii_c = inv_i[c]
        k00 = im_p + im_c + ii_p * rpy * rpy + ii_c * rcy * rcy
        k01 = -ii_p * rpx * rpy - ii_c * rcx * rcy
        k11 = im_p + im_c + ii_p * rpx * rpx + ii_c * rcx * rcx
        det = k00 * k11 - k01 * k01
        if det != 0.0:
            inv_det = 1.0 / det
        else:
            inv_det = 0.0
        jw[j, 0] = rpx
        jw[j, 1] = rpy
        jw[j, 2] = rcx
        jw[j, 3] = rcy
        jw[j, 4] = bx
        jw[j, 5] = by
        jw[j, 6] = k11 * inv_det
        jw[j, 7] = -k01 * inv_det
        jw[j, 8] = k00 * inv_det
        jw[j, 9] = 0.0  # accumulated limit impulse
        # limit violation measured once per substep
        if p >= 0:
            rel = ang[c] - ang[p]
        else:
            rel = ang[c]
        err_lo = jlo[j] - rel
        err_hi = rel - jhi[j]
        jw[j, 10] = err_lo if err_lo > 0.0 else 0.0
        jw[j, 11] = err_hi if err_hi > 0.0 else 0.0

    # Contact detection against the heightfield.
    ncon = 0
    for k in range(cp_link.shape[0]):
        l = cp_link[k]
        ca = math.cos(ang[l])
        sa = math.sin(ang[l])
        wx = pos[l, 0] + ca * cp_x[k] - sa * cp_y[k]
        wy = pos[l, 1] + sa * cp_x[k] + ca * cp_y[k]
        h, nx, ny = _surface(tx, ty, wx)
        if wy < h:
            depth = (h - wy) * ny  # perpendicular distance to the surface line
            bias = baumgarte * inv_dt * (depth - slop)
            if bias < 0.0:
                bias = 0.0
            elif bias > max_bias:
                bias = max_bias
            rx = wx - pos[l, 0]
            ry = wy - pos[l, 1]
            rn = rx * ny - ry * nx
            rt = rx * (-nx) - ry * ny  # lever about tangent (ny, -nx)
            kn = inv_m[l] + inv_i[l] * rn * rn
            kt = inv_m[l] + inv_i[l] * rt * rt
            cw[ncon, 0] = l
            cw[ncon, 1] = rx
            cw[ncon, 2] = ry
            cw[ncon, 3] = nx
            cw[ncon, 4] = ny
            cw[ncon, 5] = bias
            cw[ncon, 6] = 1.0 / kn
            cw[ncon, 7] = 1.0 / kt
            cw[ncon, 8] = 0.0
            cw[ncon, 9] = 0.0
            cw[ncon, 10] = wx
            cw[ncon, 11] = wy
            ncon += 1

    # Sequential impulse iterations: joints (point + limits), then contacts.
    for _ in range(iters):
        for j in range(nj):
            c = jc[j]
            p = jp[j]
            rcx = jw[j, 2]
            rcy = jw[j, 3]
            ucx = vel[c, 0] - omega[c] * rcy
            ucy = vel[c, 1] + omega[c] * rcx
            if p >= 0:
                rpx = jw[j, 0]
                rpy = jw[j, 1]
                upx = vel[p, 0] - omega[p] * rpy
                upy = vel[p, 1] + omega[p] * rpx
            else:
                rpx = 0.0
                rpy = 0.0
                upx = 0.0
                upy = 0.0
            rhsx = -(ucx - upx + jw[j, 4])
            rhsy = -(ucy - upy + jw[j, 5])
            px = jw[j, 6] * rhsx + jw[j, 7] * rhsy
            py = jw[j, 7] * rhsx + jw[j, 8] * rhsy
            im_c = inv_m[c]
            ii_c = inv_i[c]
            vel[c, 0] += px * im_c
            vel[c, 1] += py * im_c
            omega[c] += ii_c * (rcx * py - rcy * px)
            if p >= 0:
                im_p = inv_m[p]
                ii_p = inv_i[p]
                vel[p, 0] -= px * im_p
                vel[p, 1] -= py * im_p
                omega[p] -= ii_p * (rpx * py - rpy * px)

            # angle limits: 1-D inequality on relative angular velocity
            err_lo = jw[j, 10]
            err_hi = jw[j, 11]
            if err_lo > 0.0 or err_hi > 0.0:
                ii_c = inv_i[c]
                if p >= 0:
                    ii_p = inv_i[p]
                    wrel = omega[c] - omega[p]
                else:
                    ii_p = 0.0
                    wrel = omega[c]
                k_ang = ii_c + ii_p
                if k_ang > 0.0:
                    acc = jw[j, 9]
                    if err_lo > 0.0:
                        bias = baumgarte * inv_dt * err_lo
                        if bias > max_bias:
                            bias = max_bias
                        dlam = (bias - wrel) / k_ang
                        new = acc + dlam
                        if new < 0.0:
                            new = 0.0
                    else:
                        bias = baumgarte * inv_dt * err_hi
                        if bias > max_bias:
                            bias = max_bias
                        dlam = (-bias - wrel) / k_ang
                        new = acc + dlam
                        if new > 0.0:
                            new = 0.0
                    dlam = new - acc
                    jw[j, 9] = new
                    omega[c] += ii_c * dlam
                    if p >= 0:
                        omega[p] -= ii_p * dlam

        for k in range(ncon):
            l = int(cw[k, 0])
            rx = cw[k, 1]
            ry = cw[k, 2]
            nx = cw[k, 3]
            ny = cw[k, 4]
            vx = vel[l, 0] - omega[l] * ry
            vy = vel[l, 1] + omega[l] * rx
            vn = vx * nx + vy * ny
            dlam = (cw[k, 5] - vn) * cw[k, 6]
            ln_old = cw[k, 8]
            ln_new = ln_old + dlam
            if ln_new < 0.0:
                ln_new = 0.0
            dlam = ln_new - ln_old
            cw[k, 8] = ln_new
            im = inv_m[l]
            ii = inv_i[l]
            vel[l, 0] += dlam * nx * im
            vel[l, 1] += dlam * ny * im
            omega[l] += ii * dlam * (rx * ny - ry * nx)

            tx_ = ny
            ty_ = -nx
            vx = vel[l, 0] - omega[l] * ry
            vy = vel[l, 1] + omega[l] * rx
            vt = vx * tx_ + vy * ty_
            dlam = -vt * cw[k, 7]
            bound = mu * cw[k, 8]
            lt_old = cw[k, 9]
            lt_new = lt_old + dlam
            if lt_new > bound:
                lt_new = bound
            elif lt_new < -bound:
                lt_new = -bound
            dlam = lt_new - lt_old
            cw[k, 9] = lt_new
            vel[l, 0] += dlam * tx_ * im
            vel[l, 1] += dlam * ty_ * im
            omega[l] += ii * dlam * (rx * ty_ - ry * tx_)

    # Final friction re-clamp so accumulated impulses respect the cone even
    # when the normal impulse shrank after the last tangent solve.
    for k in range(ncon):
        bound = mu * cw[k, 8]
        lt = cw[k, 9]
        if lt > bound or lt < -bound:
            l = int(cw[k, 0])
            lt_new = bound if lt > bound else -bound
            dlam = lt_new - lt
            cw[k, 9] = lt_new
            nx = cw[k, 3]
            ny = cw[k, 4]
            rx = cw[k, 1]
            ry = cw[k, 2]
            tx_ = ny
            ty_ = -nx
            im = inv_m[l]
            vel[l, 0] += dlam * tx_ * im
            vel[l, 1] += dlam * ty_ * im
            omega[l] += inv_i[l] * dlam * (rx * ty_ - ry * tx_)

    # Drift, then the second half of the kick.
    for i in range(pos.shape[0]):
        pos[i, 0] += vel[i, 0] * dt
        pos[i, 1] += vel[i, 1] * dt
        ang[i] += omega[i] * dt
    _kick(pos, vel, omega, inv_m, inv_i, jp, jc, taus, gravity, half_dt)
    return ncon


@njit(cache=True)
def _torques(mode, action, ang, omega, jp, jc, jtau, jkp, jkd,
             m_tp, m_tm, m_tact, m_opt, m_w, m_vmax, act_p, act_m,
             dt, taus):
    """Per-substep actuation torques for one mode; clamps to torque limits.
    Muscle activations in act_p/act_m advance by one exact first-order step."""
    for j in range(jp.shape[0]):
        c = jc[j]
        p = jp[j]
        if p >= 0:
            th = ang[c] - ang[p]
            w = omega[c] - omega[p]
        else:
            th = ang[c]
            w = omega[c]
        if mode == MODE_TORQUE:
            t = action[j]
        elif mode == MODE_VELOCITY:
            t = jkd[j] * (action[j] - w)
        elif mode == MODE_PD:
            t = jkp[j] * (action[j] - th) - jkd[j] * w
        else:
            decay = math.exp(-dt / m_tact[j])
            up = action[2 * j]
            um = action[2 * j + 1]
            ap = up + (act_p[j] - up) * decay
            am = um + (act_m[j] - um) * decay
            act_p[j] = ap
            act_m[j] = am
            d = th - m_opt[j]
            fl = math.exp(-(d * d) / (2.0 * m_w[j] * m_w[j]))
            fvp = 1.0 - w / m_vmax[j]
            if fvp < 0.0:
                fvp = 0.0
            elif fvp > 1.5:
                fvp = 1.5
            fvm = 1.0 + w / m_vmax[j]
            if fvm < 0.0:
                fvm = 0.0
            elif fvm > 1.5:
                fvm = 1.5
            t = ap * m_tp[j] * fl * fvp - am * m_tm[j] * fl * fvm
        lim = jtau[j]
        if t > lim:
            t = lim
        elif t < -lim:
            t = -lim
        taus[j] = t


@njit(cache=True)
def control_window(pos, ang, vel, omega, inv_m, inv_i,
                   cp_x, cp_y, cp_link,
                   jp, jc, jpx, jpy, jcx, jcy, jlo, jhi, jtau, jkp, jkd,
                   m_tp, m_tm, m_tact, m_opt, m_w, m_vmax, act_p, act_m,
                   mode, action, tx, ty,
                   substeps, dt, gravity, mu, iters, baumgarte, slop, max_bias,
                   touched, jw, cw):
    """Hold one action for `substeps` substeps, recomputing torques from the
    current state every substep. Marks links that touched terrain in
    `touched` and returns 1 if the state left the finite range."""
    nj = jp.shape[0]
    taus = np.empty(nj)
    for _ in range(substeps):
        _torques(mode, action, ang, omega, jp, jc, jtau, jkp, jkd,
                 m_tp, m_tm, m_tact, m_opt, m_w, m_vmax, act_p, act_m,
                 dt, taus)
        ncon = _substep(pos, ang, vel, omega, inv_m, inv_i,
                        cp_x, cp_y, cp_link,
                        jp, jc, jpx, jpy, jcx, jcy, jlo, jhi,
                        taus, tx, ty,
                        dt, gravity, mu, iters, baumgarte, slop, max_bias,
                        jw, cw)
        for k in range(ncon):
            touched[int(cw[k, 0])] = 1
    for i in range(pos.shape[0]):
        if (not math.isfinite(pos[i, 0])) or (not math.isfinite(pos[i, 1])) \
                or (not math.isfinite(ang[i])) or (not math.isfinite(vel[i, 0])) \
                or (not math.isfinite(vel[i, 1])) or (not math.isfinite(omega[i])):
            return 1
    return 0


def alloc_scratch(n_joints: int, n_points: int):
    """Scratch buffers reused across substeps: (joint work, contact work)."""
    return np.zeros((max(n_joints, 1), _JW_COLS)), np.zeros((max(n_points, 1), _CW_COLS))

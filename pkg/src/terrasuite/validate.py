"""Invariant batteries behind `terrasuite validate`.

Each check returns a CheckResult; the CLI prints one machine-readable line
per check and exits nonzero if any failed. The same functions back the
test suite so the CLI and CI agree on what "correct" means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .character.actuation import ActuationMode, action_space, compute_torques
from .character.model import builtin_character, BUILTIN_CHARACTERS, BUILTIN_LINK_COUNTS
from .envs.catalog import list_envs, make_env
from .envs.config import terrain_preset
from .envs.env import imitation_reward, locomotion_reward
from .physics import (
    LinkBody,
    RevoluteJoint,
    SimState,
    WORLD,
    box_inertia,
    forward_kinematics,
    integrate_step,
    joint_anchor_error,
    measure_joint_angles,
    total_energy,
)
from .rng import Xoshiro256
from .terrain.generator import APRON_LEN, generate_terrain, height_at
from .terrain.params import TerrainParams, parse_terrain_params

DT = 1.0 / 3000.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


# ------------------------------------------------------------------ test rigs

def single_link_model(mass=1.0, hx=0.1, hy=0.1) -> "CharacterModel":
    from .character.model import CharacterModel

    return CharacterModel(
        name="rig_link",
        links=[LinkBody(0, mass, box_inertia(mass, hx, hy), (hx, hy), name="body")],
        joints=[], root_link=0, foot_links=frozenset(), fall_links=frozenset(),
        spawn_root_height=hy,
    )


def pendulum_model(n_links=2, length=1.0, mass=1.0) -> "CharacterModel":
    from .character.model import CharacterModel

    half = length / 2
    links = [LinkBody(i, mass, box_inertia(mass, half, 0.05), (half, 0.05), name=f"rod{i}")
             for i in range(n_links)]
    joints = [RevoluteJoint(WORLD, 0, (0.0, 2.0), (-half, 0.0), (-50.0, 50.0), 1e9, name="pin")]
    for i in range(1, n_links):
        joints.append(RevoluteJoint(i - 1, i, (half, 0.0), (-half, 0.0),
                                    (-50.0, 50.0), 1e9, name=f"j{i}"))
    return CharacterModel(name="rig_pendulum", links=links, joints=joints, root_link=0,
                          foot_links=frozenset(), fall_links=frozenset(), spawn_root_height=2.0)


def hinge_model(kp=50.0, kd=5.0) -> "CharacterModel":
    """One rod pinned to the world: the PD settling rig."""
    from .character.model import CharacterModel

    links = [LinkBody(0, 1.0, box_inertia(1.0, 0.5, 0.05), (0.5, 0.05), name="rod")]
    joints = [RevoluteJoint(WORLD, 0, (0.0, 2.0), (-0.5, 0.0), (-2.5, 2.5), 200.0,
                            kp=kp, kd=kd, name="hinge")]
    return CharacterModel(name="rig_hinge", links=links, joints=joints, root_link=0,
                          foot_links=frozenset(), fall_links=frozenset(), spawn_root_height=2.0)


# ------------------------------------------------------------- physics checks

def check_free_fall() -> CheckResult:
    m = single_link_model()
    s = SimState.zeros(1)
    s.pos[0] = (0.0, 2.0)
    for _ in range(3000):
        s, _ = integrate_step(m, s, [], None, DT)
    err = abs(s.pos[0, 1] - (2.0 - 0.5 * 9.8))
    return _result("physics.free_fall", err < 1e-3, f"position error {err:.3e} m after 1 s")


def check_pendulum_energy() -> CheckResult:
    m = pendulum_model()
    s = forward_kinematics(m, [0.0, 0.0], ((0.5, 2.0), 0.0))
    e0 = total_energy(m, s)
    zeros = np.zeros(2)
    for _ in range(30000):
        s, _ = integrate_step(m, s, zeros, None, DT)
    drift = abs(total_energy(m, s) - e0)
    rel = drift / abs(e0)
    return _result("physics.pendulum_energy", rel < 0.01,
                   f"energy drift {rel * 100:.4f}% of initial over 10 s")


def check_resting_contact() -> CheckResult:
    flat = generate_terrain(terrain_preset("flat"), 0, -10, 20)
    m = single_link_model(hx=0.2, hy=0.1)
    s = SimState.zeros(1)
    s.pos[0] = (0.0, 0.1)
    for _ in range(3000):
        s, _ = integrate_step(m, s, [], flat, DT)
    pen = 0.1 - float(s.pos[0, 1])
    speed = float(np.hypot(s.vel[0, 0], s.vel[0, 1]))
    ok = pen < 5e-3 and speed < 1e-2
    return _result("physics.resting_contact", ok,
                   f"penetration {pen:.3e} m, speed {speed:.3e} m/s after 1 s")


def check_fk_roundtrip() -> CheckResult:
    model = builtin_character("biped7")
    rng = Xoshiro256(2024)
    worst = 0.0
    for _ in range(50):
        angles = np.array([rng.uniform(-1.0, 1.0) for _ in range(model.n_joints)])
        st = forward_kinematics(model, angles, ((rng.uniform(-2, 2), rng.uniform(0, 2)),
                                                rng.uniform(-1, 1)))
        back = measure_joint_angles(model, st)
        worst = max(worst, float(np.max(np.abs(back - angles))))
        worst = max(worst, joint_anchor_error(model, st))
    return _result("physics.fk_roundtrip", worst < 1e-9,
                   f"max joint-angle/anchor error {worst:.2e}")


def check_momentum() -> CheckResult:
    m = single_link_model()
    s = SimState.zeros(1)
    s.pos[0] = (0.0, 5.0)
    s.vel[0] = (1.25, 0.5)
    s.omega[0] = 2.5
    for _ in range(1000):
        s, _ = integrate_step(m, s, [], None, DT, gravity=0.0)
    ok = (s.vel[0, 0] == 1.25 and s.vel[0, 1] == 0.5 and s.omega[0] == 2.5)
    return _result("physics.momentum", ok,
                   f"velocity after 1000 unconstrained steps: {s.vel[0].tolist()}, {s.omega[0]}")


def check_anchor_drift() -> CheckResult:
    flat = generate_terrain(terrain_preset("flat"), 0, -10, 20)
    model = builtin_character("biped7")
    s = forward_kinematics(model, np.zeros(model.n_joints), ((0.0, model.spawn_root_height), 0.0))
    zeros = np.zeros(model.n_joints)
    worst = 0.0
    for i in range(30000):
        s, _ = integrate_step(model, s, zeros, flat, DT)
        if i % 500 == 499:
            worst = max(worst, joint_anchor_error(model, s))
    worst = max(worst, joint_anchor_error(model, s))
    return _result("physics.anchor_drift", worst < 1e-3,
                   f"max anchor error {worst:.3e} m over 10 s passive biped")


# ----------------------------------------------------------- actuation checks

def check_pd_settling() -> CheckResult:
    from .physics import run_control_window
    from .physics.kernels import MODE_PD

    model = hinge_model()
    rng = Xoshiro256(7)
    lo, hi = model.joints[0].angle_limits
    act_p = np.zeros(1)
    act_m = np.zeros(1)
    fails = []
    for _ in range(20):
        target = rng.uniform(lo + 0.1, hi - 0.1)
        s = forward_kinematics(model, [0.0], ((0.5, 2.0), 0.0))
        # gravity off isolates the controller from steady-state load error;
        # 100-substep windows mirror the env control path
        for ctrl in range(90):
            s, _ = run_control_window(model, s, MODE_PD, [target], act_p, act_m,
                                      None, 100, DT, gravity=0.0)
            err = abs(measure_joint_angles(model, s)[0] - target)
            if ctrl >= 60 and err >= 0.01:  # from 2 s onward
                fails.append((target, err))
                break
    return _result("actuation.pd_settling", not fails,
                   f"{20 - len(fails)}/20 targets within 0.01 rad from 2 s onward")


def check_muscle_activation() -> CheckResult:
    model = hinge_model()
    muscles = model.muscles
    t_act = muscles[0].activation_time
    u = 0.8
    a = 0.0
    n = 3000
    s = forward_kinematics(model, [0.0], ((0.5, 2.0), 0.0))
    worst = 0.0
    for i in range(1, n + 1):
        _, muscles = compute_torques(model, ActuationMode.Muscle, [u, 0.0], s, muscles, DT)
        analytic = u + (a - u) * math.exp(-i * DT / t_act)
        worst = max(worst, abs(muscles[0].activation_plus - analytic))
    in_range = all(0.0 <= m.activation_plus <= 1.0 and 0.0 <= m.activation_minus <= 1.0
                   for m in muscles)
    ok = worst < 1e-4 and in_range
    return _result("actuation.muscle_activation", ok,
                   f"max deviation from analytic exponential {worst:.2e}")


def check_torque_clamp() -> CheckResult:
    model = builtin_character("biped7")
    limits = np.array([j.torque_limit for j in model.joints])
    s = forward_kinematics(model, np.zeros(model.n_joints),
                           ((0.0, model.spawn_root_height), 0.0))
    rng = Xoshiro256(11)
    worst_excess = -1.0
    for mode in ActuationMode:
        space = action_space(model, mode)
        muscles = model.muscles
        for _ in range(25):
            # deliberately out-of-range actions: 10x beyond the bounds
            raw = np.array([rng.uniform(float(lo) * 10 - 5, float(hi) * 10 + 5)
                            for lo, hi in zip(space.minimum, space.maximum)])
            taus, muscles = compute_torques(model, mode, raw, s, muscles, DT)
            worst_excess = max(worst_excess, float(np.max(np.abs(taus) - limits)))
    return _result("actuation.torque_clamp", worst_excess <= 0.0,
                   f"max |torque| - limit = {worst_excess:.3e} N*m across modes")


# ------------------------------------------------------------- terrain checks

def annotation_violations(profile, params: TerrainParams) -> list[str]:
    """Annotations outside their generating [Min, Max] ranges, plus
    ordering/apron defects."""
    out = []
    xs = profile.xs
    if np.any(np.diff(xs) <= 0):
        out.append("vertex x not strictly increasing")
    apron = [float(h) for h in
             np.interp(np.linspace(float(xs[0]), 0.0, 20), profile.xs, profile.ys)]
    if any(abs(h) > 1e-12 for h in apron):
        out.append("apron not flat at y=0")
    if float(xs[0]) > -APRON_LEN:
        out.append(f"apron shorter than {APRON_LEN} m")
    prev_end = None
    for f in profile.features:
        if prev_end is not None and f.start_x < prev_end - 1e-9:
            out.append(f"{f.kind}@{f.start_x:.2f}: overlaps previous feature")
        prev_end = f.start_x + f.width
        if f.kind == "gap" and params.gaps:
            g = params.gaps
            if not (g.w_min - 1e-9 <= f.width <= g.w_max + 1e-9):
                out.append(f"gap width {f.width} outside [{g.w_min}, {g.w_max}]")
            if not (g.h_min - 1e-9 <= f.magnitude <= g.h_max + 1e-9):
                out.append(f"gap depth {f.magnitude} outside [{g.h_min}, {g.h_max}]")
        elif f.kind == "wall" and params.walls:
            w = params.walls
            if not (w.w_min - 1e-9 <= f.width <= w.w_max + 1e-9):
                out.append(f"wall width {f.width} outside [{w.w_min}, {w.w_max}]")
            if not (w.h_min - 1e-9 <= f.magnitude <= w.h_max + 1e-9):
                out.append(f"wall height {f.magnitude} outside [{w.h_min}, {w.h_max}]")
        elif f.kind == "step" and params.steps:
            s = params.steps
            up = s.h0_min - 1e-9 <= f.magnitude <= s.h0_max + 1e-9
            down = s.h1_min - 1e-9 <= f.magnitude <= s.h1_max + 1e-9
            if not (up or down):
                out.append(f"step delta {f.magnitude} outside both ranges")
        elif f.kind == "slope-change" and params.slopes:
            sl = params.slopes
            if not (sl.delta_min - 1e-9 <= f.magnitude <= sl.delta_max + 1e-9):
                out.append(f"slope {f.magnitude} outside [{sl.delta_min}, {sl.delta_max}]")
    return out


def check_terrain_presets(seeds_per_preset: int = 25) -> CheckResult:
    from .envs.config import terrain_preset as preset
    from .terrain.params import TERRAIN_TYPES

    problems = []
    for name in TERRAIN_TYPES:
        params = preset(name)
        for seed in range(seeds_per_preset):
            p1 = generate_terrain(params, seed, -10, 60)
            p2 = generate_terrain(params, seed, -10, 60)
            if not (np.array_equal(p1.xs, p2.xs) and np.array_equal(p1.ys, p2.ys)):
                problems.append(f"{name}/seed {seed}: not deterministic")
            problems.extend(f"{name}/seed {seed}: {v}"
                            for v in annotation_violations(p1, params))
    return _result("terrain.presets", not problems,
                   problems[0] if problems else
                   f"{len(TERRAIN_TYPES)} presets x {seeds_per_preset} seeds compliant")


def check_height_lookup() -> CheckResult:
    def reference(profile, x):
        xs, ys = profile.xs, profile.ys
        if x <= xs[0]:
            return float(ys[0])
        if x >= xs[-1]:
            return float(ys[-1])
        for i in range(len(xs) - 1):  # linear scan oracle
            if xs[i] <= x <= xs[i + 1]:
                t = (x - xs[i]) / (xs[i + 1] - xs[i])
                return float(ys[i] + t * (ys[i + 1] - ys[i]))
        raise AssertionError

    params = terrain_preset("slopes-mixed")
    rng = Xoshiro256(5)
    worst = 0.0
    for seed in range(5):
        profile = generate_terrain(params, seed, -10, 60)
        for _ in range(200):
            x = rng.uniform(-15, 65)
            worst = max(worst, abs(height_at(profile, x) - reference(profile, x)))
    return _result("terrain.height_lookup", worst == 0.0,
                   f"max |height_at - linear scan| = {worst:.2e}")


def check_terrain_file(path: str | Path, seeds: int = 200) -> CheckResult:
    try:
        params = parse_terrain_params(Path(path).read_text())
    except Exception as exc:
        return _result("terrain.file", False, str(exc))
    problems = []
    for seed in range(seeds):
        profile = generate_terrain(params, seed, -10, 60)
        problems.extend(annotation_violations(profile, params))
    return _result("terrain.file", not problems,
                   problems[0] if problems else f"{seeds} seeds compliant with {params.type}")


# ----------------------------------------------------------------- env checks

def check_env_determinism(name: str, steps: int = 100) -> CheckResult:
    from .trajectory import rollout_records

    def run():
        return [(r.reward, r.done, tuple(r.observation)) for r in
                rollout_records(name, 1234, steps, "random")]

    same = run() == run()
    return _result(f"env.determinism[{name}]", same,
                   f"two {steps}-step rollouts {'identical' if same else 'differ'}")


def check_env_layout(name: str) -> CheckResult:
    env = make_env(name)
    env.set_random_seed(3)
    obs1 = env.reset()
    n = obs1.terrain_len

    # joint mutation with the root fixed leaves the terrain slice alone
    angles = env.current_joint_angles() + 0.2
    root = env.model.root_link
    pose = ((float(env.state.pos[root, 0]), float(env.state.pos[root, 1])),
            float(env.state.ang[root]))
    env.state = forward_kinematics(env.model, angles, pose)
    obs2 = env._observe()
    terrain_fixed = np.array_equal(obs1.data[:n], obs2.data[:n])
    agent_changed = not np.array_equal(obs1.data[n:], obs2.data[n:])

    # reseeding terrain with the character frozen leaves the agent slice alone
    saved = env.state
    from .terrain.generator import generate_terrain as gen

    env.terrain = gen(env.terrain_params, 999, env.config.terrain_x_start,
                      env.config.terrain_x_end)
    env.state = saved
    obs3 = env._observe()
    agent_fixed = np.array_equal(obs2.data[n:], obs3.data[n:])

    ok = terrain_fixed and agent_fixed and agent_changed
    return _result(f"env.layout[{name}]", ok,
                   f"terrain slice fixed under pose change: {terrain_fixed}; "
                   f"agent slice fixed under reseed: {agent_fixed}")


def check_env_bounds(name: str, steps: int = 300) -> CheckResult:
    env = make_env(name)
    env.set_random_seed(17)
    obs = env.reset()
    lo, hi = env.observation_space()
    if not (lo.shape == hi.shape == obs.data.shape):
        return _result(f"env.bounds[{name}]", False, "space/observation shape mismatch")
    from .policies import RandomPolicy

    policy = RandomPolicy(17)
    worst = 0.0
    for _ in range(steps):
        res = env.step(policy(env))
        d = res.observation.data
        worst = max(worst, float(np.max(np.maximum(lo - d, d - hi))))
        if not (0.0 <= res.reward <= 1.0):
            return _result(f"env.bounds[{name}]", False, f"reward {res.reward} outside [0,1]")
        if res.done:
            env.reset()
    return _result(f"env.bounds[{name}]", worst <= 0.0,
                   f"max bound excess {worst:.3e} over {steps} random steps")


def check_reward_properties() -> CheckResult:
    from .envs.config import builtin_clip, sample_reference

    model = builtin_character("biped7")
    clip = builtin_clip("biped7")
    problems = []

    flatten = lambda v: abs(v - 1.0)
    if flatten(locomotion_reward(_state_with_speed(model, 1.0), model, 1.0)) > 1e-12:
        problems.append("locomotion reward != 1 at target speed")
    r = locomotion_reward(_state_with_speed(model, 0.0), model, 1.0)
    if abs(r - math.exp(-2.0)) > 1e-12:
        problems.append(f"locomotion reward {r} != e^-2 at 1 m/s error")

    angles, h, v = sample_reference(clip, 0.0)
    st = forward_kinematics(model, angles, ((0.0, h), 0.0))
    st.vel[:, 0] = v
    r, _ = imitation_reward(st, model, clip, 0.0, (0.65, 0.1, 0.25))
    if abs(r - 1.0) > 1e-9:
        problems.append(f"imitation reward {r} != 1 on exact reference match")

    rng = Xoshiro256(23)
    for _ in range(200):
        a = np.array([rng.uniform(-1.5, 1.5) for _ in range(model.n_joints)])
        st = forward_kinematics(model, a, ((rng.uniform(-2, 2), rng.uniform(0.2, 2)), 0.0))
        st.vel[:, 0] = rng.uniform(-3, 3)
        r, _ = imitation_reward(st, model, clip, rng.random(), (0.65, 0.1, 0.25))
        if not (0.0 < r <= 1.0):
            problems.append(f"imitation reward {r} outside (0, 1]")
            break
    return _result("env.rewards", not problems,
                   problems[0] if problems else "locomotion and imitation reward identities hold")


def _state_with_speed(model, v: float):
    st = forward_kinematics(model, np.zeros(model.n_joints),
                            ((0.0, model.spawn_root_height), 0.0))
    st.vel[:, 0] = v
    return st


def check_catalog_integrity(steps: int = 10) -> CheckResult:
    from .policies import RandomPolicy

    entries = list_envs()
    if len(entries) < 89:
        return _result("catalog.integrity", False, f"only {len(entries)} environments")
    for e in entries:
        expected_links = BUILTIN_LINK_COUNTS[e.character]
        if e.obs_dim != 50 + 1 + 4 * expected_links:
            return _result("catalog.integrity", False, f"{e.name}: obs_dim {e.obs_dim} wrong")
        try:
            env = make_env(e.name)
            env.set_random_seed(1)
            env.reset()
            policy = RandomPolicy(1)
            for _ in range(steps):
                res = env.step(policy(env))
                if res.done:
                    env.reset()
        except Exception as exc:
            return _result("catalog.integrity", False, f"{e.name}: {exc}")
    return _result("catalog.integrity", True,
                   f"{len(entries)} environments constructed and stepped {steps}x")


# ------------------------------------------------------------------- batteries

SAMPLE_ENVS = (
    "PD_Biped2D_Walk-Mixed-v0",
    "Torque_Hopper2D_Walk-Gaps-v0",
    "Muscle_Raptor2D_Walk-SlopesMixed-v0",
    "Velocity_Dog2D_Walk-Steps-v0",
    "PD_Biped2D_Imitate-Steps-v0",
)


def run_validation(scope: str = "all") -> list[CheckResult]:
    if scope != "all" and (scope.endswith(".json") or "/" in scope or Path(scope).exists()):
        return [check_terrain_file(scope)]
    if scope != "all":
        # single env scope
        from .envs.catalog import catalog_entry

        catalog_entry(scope)  # raises CatalogMissError with suggestions
        return [
            check_env_determinism(scope),
            check_env_layout(scope),
            check_env_bounds(scope),
        ]
    results = [
        check_free_fall(),
        check_pendulum_energy(),
        check_resting_contact(),
        check_fk_roundtrip(),
        check_momentum(),
        check_anchor_drift(),
        check_pd_settling(),
        check_muscle_activation(),
        check_torque_clamp(),
        check_terrain_presets(),
        check_height_lookup(),
        check_reward_properties(),
    ]
    for name in SAMPLE_ENVS:
        results.append(check_env_determinism(name))
        results.append(check_env_layout(name))
    results.append(check_env_bounds(SAMPLE_ENVS[0]))
    results.append(check_catalog_integrity())
    return results

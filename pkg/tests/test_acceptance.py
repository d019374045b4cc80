"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with the measured value (run with -s to stream them).

Tolerances and runtime ceilings are fixed here, not configurable.
"""

import math
import time

import numpy as np
import pytest

from terrasuite.character.model import builtin_character
from terrasuite.envs import builtin_clip, imitation_reward, list_envs, make_env, sample_reference
from terrasuite.envs.config import terrain_preset
from terrasuite.physics import forward_kinematics, run_control_window
from terrasuite.physics.kernels import HAVE_NUMBA, MODE_PD
from terrasuite.policies import RandomPolicy
from terrasuite.rng import Xoshiro256
from terrasuite.terrain.generator import generate_terrain
from terrasuite.trajectory import write_trajectory
from terrasuite.validate import (
    check_anchor_drift,
    check_env_layout,
    check_free_fall,
    check_muscle_activation,
    check_pd_settling,
    check_pendulum_energy,
    check_resting_contact,
    check_torque_clamp,
)

from test_terrain import SLOPES_MIXED_DOC
from terrasuite.terrain import parse_terrain_params


def report(name: str, passed: bool, detail: str) -> None:
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")


def test_catalog_count_and_integrity():
    """>=89 envs; every entry constructs and survives 10 random steps; <60 s."""
    t0 = time.monotonic()
    entries = list_envs()
    count_ok = len(entries) >= 89
    failures = []
    for e in entries:
        try:
            env = make_env(e.name)
            env.set_random_seed(1)
            obs = env.reset()
            assert obs.data.shape == (e.obs_dim,)
            policy = RandomPolicy(1)
            for _ in range(10):
                res = env.step(policy(env))
                if res.done:
                    env.reset()
        except Exception as exc:  # pragma: no cover - report which env broke
            failures.append(f"{e.name}: {exc}")
    elapsed = time.monotonic() - t0
    ok = count_ok and not failures and elapsed < 60.0
    report("catalog", ok,
           f"{len(entries)} envs, {len(failures)} failures, {elapsed:.1f}s (<60s)")
    assert count_ok, f"catalog has {len(entries)} < 89 environments"
    assert not failures, failures[:3]
    assert elapsed < 60.0


def test_determinism_across_rollouts(tmp_path):
    """5 envs x 3 seeds: two 300-step random rollouts byte-identical; <30 s."""
    envs = [
        "PD_Biped2D_Walk-Mixed-v0",
        "Torque_Raptor2D_Walk-Gaps-v0",
        "Velocity_Dog2D_Walk-SlopesMixed-v0",
        "Muscle_Hopper2D_Walk-Steps-v0",
        "PD_Dog2D_Imitate-Flat-v0",
    ]
    t0 = time.monotonic()
    mismatches = []
    for name in envs:
        for seed in (0, 7, 1234):
            a = tmp_path / f"{name}-{seed}-a.jsonl"
            b = tmp_path / f"{name}-{seed}-b.jsonl"
            write_trajectory(a, name, seed, 300, "random")
            write_trajectory(b, name, seed, 300, "random")
            if a.read_bytes() != b.read_bytes():
                mismatches.append(f"{name}/seed {seed}")
    elapsed = time.monotonic() - t0
    ok = not mismatches and elapsed < 30.0
    report("determinism", ok,
           f"15 rollout pairs byte-compared, {len(mismatches)} mismatches, "
           f"{elapsed:.1f}s (<30s)")
    assert not mismatches, mismatches
    assert elapsed < 30.0


def test_terrain_compliance_1000_seeds():
    """1000 generations of the reference slopes-mixed document: all feature
    draws inside bounds, extremes within 5% of the non-degenerate range
    endpoints; <10 s."""
    params = parse_terrain_params(SLOPES_MIXED_DOC)
    t0 = time.monotonic()
    gap_w, wall_h, step_up, step_dn = [], [], [], []
    violations = []
    for seed in range(1000):
        prof = generate_terrain(params, seed, -10, 60)
        for f in prof.features:
            if f.kind == "gap":
                gap_w.append(f.width)
                if not (0.3 <= f.width <= 0.5):
                    violations.append(f"gap width {f.width}")
                if f.magnitude != -2.0:
                    violations.append(f"gap depth {f.magnitude}")
            elif f.kind == "wall":
                wall_h.append(f.magnitude)
                if not (0.25 <= f.magnitude <= 0.4):
                    violations.append(f"wall height {f.magnitude}")
                if not (0.2 - 1e-12 <= f.width <= 0.2 + 1e-12):
                    violations.append(f"wall width {f.width}")
            elif f.kind == "step":
                (step_up if f.magnitude > 0 else step_dn).append(f.magnitude)
                if not (0.1 <= f.magnitude <= 0.3 or -0.3 <= f.magnitude <= -0.1):
                    violations.append(f"step delta {f.magnitude}")
            elif f.kind == "slope-change":
                if not (-0.5 <= f.magnitude <= 0.5):
                    violations.append(f"slope {f.magnitude}")
    elapsed = time.monotonic() - t0

    # extremes of each uniformly drawn, non-degenerate dimension
    def spread_ok(values, lo, hi):
        tol = 0.05 * (hi - lo)
        return values and min(values) <= lo + tol and max(values) >= hi - tol

    spreads = {
        "gap width": spread_ok(gap_w, 0.3, 0.5),
        "wall height": spread_ok(wall_h, 0.25, 0.4),
        "step up": spread_ok(step_up, 0.1, 0.3),
        "step down": spread_ok(step_dn, -0.3, -0.1),
    }
    ok = not violations and all(spreads.values()) and elapsed < 10.0
    report("terrain_compliance", ok,
           f"{len(gap_w)} gaps/{len(wall_h)} walls/{len(step_up) + len(step_dn)} steps, "
           f"{len(violations)} violations, spreads {spreads}, {elapsed:.1f}s (<10s)")
    assert not violations, violations[:5]
    assert all(spreads.values()), spreads
    assert elapsed < 10.0


def test_physics_oracles():
    """Free fall <1e-3 m, pendulum energy drift <1%, resting penetration
    <5e-3 m, anchor drift <1e-3 m over 10 s."""
    results = [check_free_fall(), check_pendulum_energy(),
               check_resting_contact(), check_anchor_drift()]
    for r in results:
        report(r.name, r.passed, r.detail)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_actuation_criteria():
    """PD settling 0.01 rad in 2 s over 20 targets; muscle activation within
    1e-4 of the analytic exponential; torque clamp never exceeded."""
    results = [check_pd_settling(), check_muscle_activation(), check_torque_clamp()]
    for r in results:
        report(r.name, r.passed, r.detail)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_observation_layout():
    """Slice independence both ways; biped7 agent slice is 29-dim; 1000
    random-policy observations inside the declared bounds."""
    layout = check_env_layout("PD_Biped2D_Walk-Mixed-v0")
    report(layout.name, layout.passed, layout.detail)
    assert layout.passed, layout.detail

    env = make_env("PD_Biped2D_Walk-Flat-v0")
    env.set_random_seed(0)
    obs = env.reset()
    dim_ok = obs.agent_slice.shape[0] == 29
    report("agent_slice_dim", dim_ok, f"biped7 agent slice {obs.agent_slice.shape[0]} (=29)")
    assert dim_ok

    worst = 0.0
    checked = 0
    for name in ("Torque_Biped2D_Walk-Gaps-v0", "Muscle_Dog2D_Walk-Mixed-v0",
                 "Velocity_Hopper2D_Walk-SlopesMixed-v0", "PD_Raptor2D_Walk-Steps-v0"):
        env = make_env(name)
        env.set_random_seed(13)
        env.reset()
        lo, hi = env.observation_space()
        policy = RandomPolicy(13)
        for _ in range(250):
            res = env.step(policy(env))
            d = res.observation.data
            worst = max(worst, float(np.max(np.maximum(lo - d, d - hi))))
            checked += 1
            if res.done:
                env.reset()
    ok = worst <= 0.0
    report("observation_bounds", ok,
           f"{checked} observations, max bound excess {worst:.3e}")
    assert ok


def test_reward_criteria():
    """Imitation reward 1.0 on exact match and in (0,1] over 1000 random
    states; locomotion reward 1 at target and e^-2 +/- 1e-12 at 1 m/s error."""
    model = builtin_character("biped7")
    clip = builtin_clip("biped7")

    angles, h, v = sample_reference(clip, 0.0)
    st = forward_kinematics(model, angles, ((0.0, h), 0.0))
    st.vel[:, 0] = v
    r_exact, _ = imitation_reward(st, model, clip, 0.0, (0.65, 0.1, 0.25))
    exact_ok = abs(r_exact - 1.0) < 1e-12

    rng = Xoshiro256(41)
    range_ok = True
    for _ in range(1000):
        a = np.array([rng.uniform(-1.5, 1.5) for _ in range(model.n_joints)])
        s = forward_kinematics(model, a, ((rng.uniform(-2, 2), rng.uniform(0.2, 2.0)),
                                          rng.uniform(-0.5, 0.5)))
        s.vel[:, 0] = rng.uniform(-3, 3)
        r, _ = imitation_reward(s, model, clip, rng.random(), (0.65, 0.1, 0.25))
        if not (0.0 < r <= 1.0):
            range_ok = False
            break

    from terrasuite.envs import locomotion_reward

    s = forward_kinematics(model, np.zeros(6), ((0.0, 1.2), 0.0))
    s.vel[:, 0] = 1.0
    loco_max_ok = locomotion_reward(s, model, 1.0) == 1.0
    s.vel[:, 0] = 0.0
    loco_e2_ok = abs(locomotion_reward(s, model, 1.0) - math.exp(-2.0)) < 1e-12

    ok = exact_ok and range_ok and loco_max_ok and loco_e2_ok
    report("rewards", ok,
           f"imitation exact={r_exact!r}, 1000 random states in (0,1]={range_ok}, "
           f"locomotion max/e^-2 ok={loco_max_ok}/{loco_e2_ok}")
    assert ok


def test_throughput_soft_gate():
    """>=100k simulation substeps/s single-threaded, biped7 on mixed terrain.
    Soft gate: a miss is reported for investigation, not failed."""
    model = builtin_character("biped7")
    terrain = generate_terrain(terrain_preset("mixed"), 1234, -10, 80)
    state = forward_kinematics(model, np.zeros(6), ((-2.0, model.spawn_root_height), 0.0))
    act_p = np.zeros(6)
    act_m = np.zeros(6)
    target = np.zeros(6)
    dt = 1.0 / 3000.0

    s, _ = run_control_window(model, state, MODE_PD, target, act_p, act_m,
                              terrain, 100, dt)  # warm
    substeps = 0
    t0 = time.perf_counter()
    s = state
    while time.perf_counter() - t0 < 0.5:
        s, _ = run_control_window(model, s, MODE_PD, target, act_p, act_m,
                                  terrain, 100, dt)
        substeps += 100
        if s.diverged:  # pragma: no cover
            pytest.fail("simulation diverged during throughput measurement")
    rate = substeps / (time.perf_counter() - t0)
    ok = rate >= 100_000
    report("throughput", ok,
           f"{rate:,.0f} substeps/s (numba={'on' if HAVE_NUMBA else 'off'})")
    if not ok:
        pytest.xfail(f"soft gate: {rate:,.0f} substeps/s < 100,000 - investigate "
                     f"(numba {'available' if HAVE_NUMBA else 'missing'})")

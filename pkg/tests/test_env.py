import math

import numpy as np
import pytest

from terrasuite.character.actuation import ActuationMode
from terrasuite.envs import (
    EnvConfig,
    EpisodeDoneError,
    Imitation,
    Locomotion,
    NotResetError,
    builtin_clip,
    imitation_reward,
    locomotion_reward,
    make_env,
    make_env_from_config,
    sample_reference,
)
from terrasuite.character.model import builtin_character
from terrasuite.physics import forward_kinematics
from terrasuite.validate import check_env_layout, check_reward_properties


def flat_config(**overrides):
    defaults = dict(
        name="test-env",
        character="biped7",
        actuation=ActuationMode.PositionPD,
        terrain="flat",
        task=Locomotion(),
    )
    defaults.update(overrides)
    return EnvConfig(**defaults)


class TestReset:
    def test_root_height_exact_without_jitter(self):
        env = make_env_from_config(flat_config(init_jitter=0.0))
        env.set_random_seed(5)
        env.reset()
        root = env.model.root_link
        assert env.state.pos[root, 1] == env.model.spawn_root_height
        assert env.state.pos[root, 0] == -2.0

    def test_same_seed_same_observation(self):
        env = make_env("PD_Biped2D_Walk-Mixed-v0")
        env.set_random_seed(1234)
        a = env.reset()
        env.set_random_seed(1234)
        b = env.reset()
        assert np.array_equal(a.data, b.data)

    def test_consecutive_resets_draw_fresh_terrain(self):
        env = make_env("PD_Biped2D_Walk-Gaps-v0")
        env.set_random_seed(8)
        env.reset()
        xs1 = env.terrain.xs.copy()
        env.reset()
        assert not np.array_equal(xs1, env.terrain.xs)

    def test_flat_terrain_slice_constant(self):
        env = make_env_from_config(flat_config(init_jitter=0.0))
        env.set_random_seed(0)
        obs = env.reset()
        assert np.all(obs.terrain_slice == obs.terrain_slice[0])
        assert obs.terrain_slice[0] == -env.model.spawn_root_height

    def test_seed_only_affects_subsequent_resets(self):
        env = make_env("PD_Biped2D_Walk-Steps-v0")
        env.set_random_seed(3)
        env.reset()
        xs = env.terrain.xs.copy()
        env.set_random_seed(99)  # mid-episode reseed
        assert np.array_equal(env.terrain.xs, xs)
        env.reset()
        assert not np.array_equal(env.terrain.xs, xs)

    def test_different_seeds_different_terrain(self):
        env = make_env("PD_Biped2D_Walk-Walls-v0")
        pairs = 0
        for seed in range(10):
            env.set_random_seed(seed)
            env.reset()
            a = env.terrain.xs.copy()
            env.set_random_seed(seed + 1000)
            env.reset()
            if not np.array_equal(a, env.terrain.xs):
                pairs += 1
        assert pairs == 10


class TestStep:
    def test_one_step_advances_sim_time(self):
        env = make_env_from_config(flat_config())
        env.set_random_seed(0)
        env.reset()
        env.step(np.zeros(env.act_dim))
        assert env.state.time == 1.0 / 30.0  # == 100 * (1/3000) exactly

    def test_zero_torque_biped_falls(self):
        cfg = flat_config(actuation=ActuationMode.Torque)
        env = make_env_from_config(cfg)
        env.set_random_seed(2)
        env.reset()
        done_at = None
        for i in range(100):
            res = env.step(np.zeros(env.act_dim))
            if res.done:
                done_at = i
                break
        assert done_at is not None

    def test_out_of_bounds_action_equals_clamped(self):
        a = make_env("Torque_Biped2D_Walk-Flat-v0")
        b = make_env("Torque_Biped2D_Walk-Flat-v0")
        a.set_random_seed(7)
        b.set_random_seed(7)
        a.reset()
        b.reset()
        huge = np.full(a.act_dim, 1e9)
        clamped = a.action_space.clamp(huge)
        ra = a.step(huge)
        rb = b.step(clamped)
        assert np.array_equal(ra.observation.data, rb.observation.data)
        assert ra.reward == rb.reward

    def test_step_before_reset_raises(self):
        env = make_env("PD_Biped2D_Walk-Flat-v0")
        with pytest.raises(NotResetError):
            env.step(np.zeros(env.act_dim))

    def test_step_after_done_raises_until_reset(self):
        env = make_env_from_config(flat_config(max_episode_steps=2))
        env.set_random_seed(0)
        env.reset()
        env.step(np.zeros(env.act_dim))
        res = env.step(np.zeros(env.act_dim))
        assert res.done and res.info["timeout"]
        with pytest.raises(EpisodeDoneError):
            env.step(np.zeros(env.act_dim))
        env.reset()
        env.step(np.zeros(env.act_dim))  # usable again

    def test_wrong_dimension_raises(self):
        env = make_env("PD_Biped2D_Walk-Flat-v0")
        env.set_random_seed(0)
        env.reset()
        with pytest.raises(ValueError):
            env.step(np.zeros(env.act_dim + 1))

    def test_divergence_terminates_with_zero_reward(self):
        import json

        env = make_env_from_config(flat_config())
        env.set_random_seed(0)
        env.reset()
        env.state.pos[0, 0] = np.nan  # upstream corruption
        res = env.step(np.zeros(env.act_dim))
        assert res.done
        assert res.reward == 0.0
        assert res.info["diverged"]
        assert np.isfinite(res.observation.data).all()
        # info must serialize to strict JSON (no NaN leaks into files/wire)
        json.dumps(res.info, allow_nan=False)

    def test_episode_never_exceeds_max_steps(self):
        env = make_env_from_config(flat_config(max_episode_steps=5))
        env.set_random_seed(1)
        env.reset()
        steps = 0
        while True:
            res = env.step(np.zeros(env.act_dim))
            steps += 1
            if res.done:
                break
        assert steps <= 5

    def test_info_contents(self):
        env = make_env("PD_Biped2D_Walk-Flat-v0")
        env.set_random_seed(4)
        env.reset()
        res = env.step(np.zeros(env.act_dim))
        for key in ("reward_terms", "root_x", "root_y", "contact_links",
                    "fall_contact", "diverged", "timeout", "sim_time"):
            assert key in res.info


class TestObservation:
    def test_layout_independence(self):
        r = check_env_layout("PD_Biped2D_Walk-Mixed-v0")
        assert r.passed, r.detail

    def test_biped_agent_slice_29(self):
        env = make_env("PD_Biped2D_Walk-Flat-v0")
        env.set_random_seed(0)
        obs = env.reset()
        assert obs.agent_slice.shape[0] == 29
        assert obs.data.shape[0] == obs.terrain_len + 29

    def test_space_contains_rollout(self):
        env = make_env("Torque_Biped2D_Walk-Gaps-v0")
        env.set_random_seed(11)
        obs = env.reset()
        lo, hi = env.observation_space()
        assert lo.shape == obs.data.shape
        assert np.all(hi[:env.terrain_len] == 5.0)
        from terrasuite.policies import RandomPolicy

        policy = RandomPolicy(11)
        for _ in range(100):
            res = env.step(policy(env))
            assert np.all(res.observation.data >= lo)
            assert np.all(res.observation.data <= hi)
            if res.done:
                env.reset()


class TestRewards:
    def test_locomotion_max_at_target(self):
        model = builtin_character("biped7")
        s = forward_kinematics(model, np.zeros(6), ((0.0, 1.2), 0.0))
        s.vel[:, 0] = 1.0
        assert locomotion_reward(s, model, 1.0) == 1.0

    def test_locomotion_e_minus_two(self):
        model = builtin_character("biped7")
        s = forward_kinematics(model, np.zeros(6), ((0.0, 1.2), 0.0))
        assert locomotion_reward(s, model, 1.0) == pytest.approx(math.exp(-2.0), abs=1e-12)

    def test_locomotion_monotone_in_error(self):
        model = builtin_character("biped7")
        rewards = []
        for v in (1.0, 1.3, 1.8, 2.5):
            s = forward_kinematics(model, np.zeros(6), ((0.0, 1.2), 0.0))
            s.vel[:, 0] = v
            rewards.append(locomotion_reward(s, model, 1.0))
        assert rewards == sorted(rewards, reverse=True)

    def test_imitation_exact_match_is_one(self):
        model = builtin_character("biped7")
        clip = builtin_clip("biped7")
        angles, h, v = sample_reference(clip, 0.0)
        s = forward_kinematics(model, angles, ((0.0, h), 0.0))
        s.vel[:, 0] = v
        r, terms = imitation_reward(s, model, clip, 0.0, (0.65, 0.1, 0.25))
        assert r == pytest.approx(1.0, abs=1e-12)
        assert terms["pose"] == pytest.approx(1.0)

    def test_imitation_single_joint_error(self):
        model = builtin_character("biped7")
        clip = builtin_clip("biped7")
        angles, h, v = sample_reference(clip, 0.0)
        off = np.array(angles, copy=True)
        off[0] += 1.0
        s = forward_kinematics(model, off, ((0.0, h), 0.0))
        s.vel[:, 0] = v
        r, terms = imitation_reward(s, model, clip, 0.0, (1.0, 0.0, 0.0))
        assert r == pytest.approx(math.exp(-2.0), abs=1e-9)

    def test_reward_properties_battery(self):
        r = check_reward_properties()
        assert r.passed, r.detail


class TestReferenceClip:
    def test_t_zero_is_keyframe_zero(self):
        clip = builtin_clip("biped7")
        angles, h, v = sample_reference(clip, 0.0)
        assert np.array_equal(angles, clip.joint_angles[0])
        assert h == clip.root_height[0] and v == clip.root_speed[0]

    def test_wraps_at_duration(self):
        clip = builtin_clip("biped7")
        a0, h0, v0 = sample_reference(clip, 0.0)
        a1, h1, v1 = sample_reference(clip, clip.duration)
        assert np.allclose(a0, a1) and h0 == pytest.approx(h1) and v0 == pytest.approx(v1)

    def test_midpoint_is_mean(self):
        clip = builtin_clip("biped7")
        k = clip.phases.shape[0]
        t_mid = clip.duration * (clip.phases[0] + clip.phases[1]) / 2.0
        a, _, _ = sample_reference(clip, float(t_mid))
        expected = (clip.joint_angles[0] + clip.joint_angles[1]) / 2.0
        assert np.allclose(a, expected)


class TestConfig:
    def test_control_hz_25_valid(self):
        cfg = flat_config(sim_hz=3000, control_hz=25)
        assert cfg.substeps == 120
        env = make_env_from_config(cfg)
        env.set_random_seed(0)
        env.reset()
        env.step(np.zeros(env.act_dim))

    def test_indivisible_rates_rejected(self):
        with pytest.raises(ValueError, match="divisible"):
            flat_config(sim_hz=3000, control_hz=28)

    def test_bad_max_steps(self):
        with pytest.raises(ValueError):
            flat_config(max_episode_steps=0)

    def test_imitation_weights_validated(self):
        clip = builtin_clip("biped7")
        with pytest.raises(ValueError, match="sum to 1"):
            Imitation(clip=clip, weights=(0.5, 0.1, 0.1))
        with pytest.raises(ValueError, match=">= 0"):
            Imitation(clip=clip, weights=(1.5, -0.25, -0.25))

    def test_clip_joint_mismatch_rejected(self):
        clip = builtin_clip("hopper4")
        with pytest.raises(ValueError, match="joints"):
            make_env_from_config(flat_config(task=Imitation(clip=clip)))

    def test_config_loadable_from_file(self, tmp_path):
        import json

        from terrasuite.envs import config_from_file

        doc = {
            "Name": "custom-hopper",
            "Character": "hopper4",
            "Actuation": "torque",
            "Terrain": "gaps",
            "Task": {"Kind": "locomotion", "TargetSpeed": 1.5},
            "ControlHz": 25,
            "MaxEpisodeSteps": 50,
        }
        path = tmp_path / "env.json"
        path.write_text(json.dumps(doc))
        cfg = config_from_file(path)
        assert cfg.substeps == 120
        assert cfg.task.target_speed == 1.5
        env = make_env_from_config(cfg)
        env.set_random_seed(0)
        env.reset()
        res = env.step(np.zeros(env.act_dim))
        assert 0.0 <= res.reward <= 1.0

    def test_config_from_file_inline_terrain_and_imitation(self, tmp_path):
        import json

        from terrasuite.envs import config_from_file

        doc = {
            "Name": "custom-imitate",
            "Character": "biped7",
            "Actuation": "pd",
            "Terrain": {"Type": "flat", "Params": []},
            "Task": {"Kind": "imitation"},
        }
        path = tmp_path / "env.json"
        path.write_text(json.dumps(doc))
        cfg = config_from_file(path)
        assert isinstance(cfg.task, Imitation)
        env = make_env_from_config(cfg)
        env.set_random_seed(1)
        env.reset()
        res = env.step(np.zeros(env.act_dim))
        assert res.info["reward_terms"].get("pose") is not None

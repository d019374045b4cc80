"""Episodic environments: seeded terrain, spawn, stepping, rewards,
termination.

Determinism contract: an env owns a single xoshiro256** stream. Each
reset consumes, in order, (1) one 64-bit draw seeding the terrain
generator, then (2) one uniform draw per joint for spawn jitter (skipped
entirely when init_jitter == 0). set_random_seed replaces the stream, so
(name, seed, action sequence) fixes the whole trajectory bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..character.actuation import ActuationMode, action_space
from ..character.features import agent_features, agent_feature_dim
from ..character.model import builtin_character, load_character
from ..physics.engine import forward_kinematics, measure_joint_angles, run_control_window
from ..rng import Xoshiro256
from ..terrain.generator import WINDOW_CLAMP, generate_terrain, height_at, sample_terrain_window
from .config import EnvConfig, Imitation, Locomotion, SPAWN_X, sample_reference

# Termination: root closer to the local ground than this fraction of the
# spawn height counts as a fall.
FALL_HEIGHT_FRACTION = 0.3

# Conservative observation bounds for the agent slice. Root height covers
# descents into gaps and long downhill slopes, not just standing poses.
ROOT_HEIGHT_BOUND = 50.0
REL_POS_BOUND = 5.0
VELOCITY_BOUND = 50.0


class EnvError(RuntimeError):
    pass


class EpisodeDoneError(EnvError):
    """step() after the episode finished and before reset()."""


class NotResetError(EnvError):
    """step() before the first reset()."""


@dataclass(frozen=True)
class Observation:
    data: np.ndarray
    terrain_len: int

    def __post_init__(self):
        self.data.setflags(write=False)

    @property
    def terrain_slice(self) -> np.ndarray:
        return self.data[: self.terrain_len]

    @property
    def agent_slice(self) -> np.ndarray:
        return self.data[self.terrain_len:]


@dataclass(frozen=True)
class StepResult:
    observation: Observation
    reward: float
    done: bool
    info: dict


def locomotion_reward(state, model, target_speed: float) -> float:
    """exp(-2 (v_x - v*)^2) on the root's horizontal speed, in (0, 1]."""
    v = float(state.vel[model.root_link, 0])
    return math.exp(-2.0 * (v - target_speed) ** 2)


def imitation_reward(state, model, clip, phase: float, weights) -> tuple[float, dict]:
    """Weighted pose/velocity/root-height match against the clip at the
    given phase in [0, 1). Returns (reward, per-term breakdown)."""
    ref_angles, ref_h, ref_v = sample_reference(clip, phase * clip.duration)
    theta = measure_joint_angles(model, state)
    pose_err = float(np.sum((theta - ref_angles) ** 2))
    pose = math.exp(-2.0 * pose_err)
    v = float(state.vel[model.root_link, 0])
    vel = math.exp(-0.1 * (v - ref_v) ** 2)
    h = float(state.pos[model.root_link, 1])
    root = math.exp(-10.0 * (h - ref_h) ** 2)
    w_pose, w_vel, w_root = weights
    r = w_pose * pose + w_vel * vel + w_root * root
    return r, {"pose": pose, "velocity": vel, "root": root}


class Env:
    """One character x actuation x terrain x task composition.

    An instance is one logical simulation: never step it from two threads.
    Instances are independent (each owns its PRNG and state) and may be
    moved between threads; parallel rollout means many instances.
    """

    def __init__(self, config: EnvConfig):
        self.config = config
        if config.character.endswith(".json"):
            self.model = load_character(Path(config.character).read_text())
        else:
            self.model = builtin_character(config.character)
        self.mode: ActuationMode = config.actuation
        self.terrain_params = config.terrain_params()
        self.action_space = action_space(self.model, self.mode)
        self.terrain_len = config.terrain_window_n
        self.obs_dim = self.terrain_len + agent_feature_dim(self.model)
        self.act_dim = self.action_space.dim
        if isinstance(config.task, Imitation) and config.task.clip.n_joints != self.model.n_joints:
            raise ValueError(
                f"clip {config.task.clip.name!r} drives {config.task.clip.n_joints} joints, "
                f"model has {self.model.n_joints}"
            )

        self._rng = Xoshiro256(0)
        self.terrain = None
        self.state = None
        self._act_p = np.zeros(self.model.n_joints)
        self._act_m = np.zeros(self.model.n_joints)
        self._steps = 0
        self._clip_t = 0.0
        self._done = False
        self._needs_reset = True
        self._last_obs: Observation | None = None

    # -- seeding ---------------------------------------------------------

    def set_random_seed(self, seed: int) -> None:
        """Reseed the env stream; takes effect at the next reset."""
        self._rng = Xoshiro256(seed)

    # -- episode lifecycle -------------------------------------------------

    def reset(self) -> Observation:
        cfg = self.config
        terrain_seed = self._rng.next_u64()
        self.terrain = generate_terrain(
            self.terrain_params, terrain_seed, cfg.terrain_x_start, cfg.terrain_x_end
        )

        if isinstance(cfg.task, Imitation):
            angles, _, _ = sample_reference(cfg.task.clip, 0.0)
            angles = np.array(angles, dtype=np.float64)
        else:
            angles = np.zeros(self.model.n_joints)
        if cfg.init_jitter > 0:
            jitter = np.array([
                self._rng.uniform(-cfg.init_jitter, cfg.init_jitter)
                for _ in range(self.model.n_joints)
            ])
            angles = angles + jitter

        root_x = SPAWN_X
        root_y = height_at(self.terrain, root_x) + self.model.spawn_root_height
        self.state = forward_kinematics(self.model, angles, ((root_x, root_y), 0.0))
        self._act_p[:] = 0.0
        self._act_m[:] = 0.0
        self._steps = 0
        self._clip_t = 0.0
        self._done = False
        self._needs_reset = False
        obs = self._observe()
        self._last_obs = obs
        return obs

    def step(self, action) -> StepResult:
        if self._needs_reset:
            raise NotResetError("call reset() before step()")
        if self._done:
            raise EpisodeDoneError("episode finished; call reset()")
        cfg = self.config
        a = self.action_space.clamp(action)
        dt = 1.0 / cfg.sim_hz
        self.state, touched = run_control_window(
            self.model, self.state, self.mode.value, a,
            self._act_p, self._act_m, self.terrain, cfg.substeps, dt,
        )
        self._steps += 1
        self._clip_t += 1.0 / cfg.control_hz

        diverged = self.state.diverged
        if diverged:
            # no finite pose to report; None keeps info JSON-clean (never NaN)
            root_x = root_y = None
            fall_contact = False
            too_low = False
        else:
            root = self.model.root_link
            root_x = float(self.state.pos[root, 0])
            root_y = float(self.state.pos[root, 1])
            local_h = height_at(self.terrain, root_x)
            fall_contact = any(bool(touched[i]) for i in self.model.fall_links)
            too_low = (root_y - local_h) < FALL_HEIGHT_FRACTION * self.model.spawn_root_height

        fall = fall_contact or too_low or diverged
        timeout = self._steps >= cfg.max_episode_steps
        self._done = fall or timeout

        terms: dict = {}
        if diverged:
            reward = 0.0
        elif isinstance(cfg.task, Locomotion):
            reward = locomotion_reward(self.state, self.model, cfg.task.target_speed)
            terms = {"speed": reward}
        else:
            phase = (self._clip_t % cfg.task.clip.duration) / cfg.task.clip.duration
            reward, terms = imitation_reward(
                self.state, self.model, cfg.task.clip, phase, cfg.task.weights
            )

        if diverged:
            obs = self._last_obs  # never surface NaNs; episode is over anyway
        else:
            obs = self._observe()
            self._last_obs = obs

        info = {
            "reward_terms": terms,
            "root_x": root_x,
            "root_y": root_y,
            "contact_links": [self.model.links[i].name
                              for i in range(self.model.n_links) if touched[i]],
            "fall_contact": bool(fall_contact),
            "diverged": bool(diverged),
            "timeout": bool(timeout and not fall),
            "sim_time": float(self.state.time),
        }
        return StepResult(observation=obs, reward=float(reward), done=self._done, info=info)

    # -- observations ------------------------------------------------------

    def _observe(self) -> Observation:
        root = self.model.root_link
        window = sample_terrain_window(
            self.terrain,
            float(self.state.pos[root, 0]),
            float(self.state.pos[root, 1]),
            self.config.terrain_window_n,
            self.config.terrain_window_spacing,
        )
        feats = agent_features(self.model, self.state)
        return Observation(np.concatenate([window, feats]), self.terrain_len)

    def observation_space(self) -> tuple[np.ndarray, np.ndarray]:
        """(minimum, maximum) bounds: clamp range for the terrain slice,
        conservative kinematic limits for the agent slice."""
        n = self.terrain_len
        nl = self.model.n_links
        lo = np.empty(self.obs_dim)
        hi = np.empty(self.obs_dim)
        lo[:n] = -WINDOW_CLAMP
        hi[:n] = WINDOW_CLAMP
        lo[n] = -ROOT_HEIGHT_BOUND
        hi[n] = ROOT_HEIGHT_BOUND
        block_lo = np.tile([-REL_POS_BOUND, -REL_POS_BOUND, -VELOCITY_BOUND, -VELOCITY_BOUND], nl)
        block_hi = np.tile([REL_POS_BOUND, REL_POS_BOUND, VELOCITY_BOUND, VELOCITY_BOUND], nl)
        lo[n + 1:] = block_lo
        hi[n + 1:] = block_hi
        return lo, hi

    @property
    def done(self) -> bool:
        return self._done

    @property
    def steps(self) -> int:
        return self._steps

    def current_joint_angles(self) -> np.ndarray:
        if self.state is None:
            return np.zeros(self.model.n_joints)
        return measure_joint_angles(self.model, self.state)

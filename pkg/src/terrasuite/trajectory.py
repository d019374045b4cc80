"""Line-delimited trajectory files.

Line 1 is a JSON header (format tag, build version, env name, seed,
policy); every following line is one step record. Keys are sorted and
floats use the shortest round-trip form, so identical rollouts produce
byte-identical files and any JSON parser recovers the exact doubles.

Records restart `step` at 0 whenever an episode ends and the rollout
auto-resets; `done` is true only on the final record of an episode.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from . import __version__
from .envs.catalog import make_env
from .policies import make_policy

FORMAT_TAG = "terrasuite-trajectory"


@dataclass(frozen=True)
class TrajectoryRecord:
    episode: int
    step: int
    action: list[float]
    observation: list[float]
    reward: float
    done: bool
    info: dict


@dataclass(frozen=True)
class RolloutSummary:
    steps: int
    episodes_completed: int
    total_reward: float
    elapsed_s: float

    @property
    def steps_per_s(self) -> float:
        return self.steps / self.elapsed_s if self.elapsed_s > 0 else float("inf")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def rollout_records(env_name: str, seed: int, steps: int, policy_kind: str) -> Iterator[TrajectoryRecord]:
    """Deterministic rollout: seed, reset, then `steps` env steps with
    auto-reset on episode end."""
    env = make_env(env_name)
    env.set_random_seed(seed)
    policy = make_policy(policy_kind, seed)
    env.reset()
    episode = 0
    step_in_ep = 0
    for _ in range(steps):
        action = policy(env)
        result = env.step(action)
        yield TrajectoryRecord(
            episode=episode,
            step=step_in_ep,
            action=[float(a) for a in action],
            observation=[float(v) for v in result.observation.data],
            reward=float(result.reward),
            done=bool(result.done),
            info=result.info,
        )
        if result.done:
            episode += 1
            step_in_ep = 0
            env.reset()
        else:
            step_in_ep += 1


def write_trajectory(path: str | Path, env_name: str, seed: int, steps: int,
                     policy_kind: str) -> RolloutSummary:
    header = {
        "format": FORMAT_TAG,
        "version": 1,
        "build": __version__,
        "env": env_name,
        "seed": seed,
        "policy": policy_kind,
        "steps": steps,
    }
    t0 = time.perf_counter()
    total = 0.0
    episodes = 0
    count = 0
    with open(path, "w") as fh:
        fh.write(_dumps(header) + "\n")
        for rec in rollout_records(env_name, seed, steps, policy_kind):
            total += rec.reward
            count += 1
            if rec.done:
                episodes += 1
            fh.write(_dumps({
                "episode": rec.episode,
                "step": rec.step,
                "action": rec.action,
                "observation": rec.observation,
                "reward": rec.reward,
                "done": rec.done,
                "info": rec.info,
            }) + "\n")
    return RolloutSummary(steps=count, episodes_completed=episodes,
                          total_reward=total, elapsed_s=time.perf_counter() - t0)


class TrajectoryFormatError(ValueError):
    pass


def read_trajectory(path: str | Path) -> tuple[dict, list[TrajectoryRecord]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise TrajectoryFormatError(f"{path}: empty file")
    header = json.loads(lines[0])
    if header.get("format") != FORMAT_TAG:
        raise TrajectoryFormatError(f"{path}: not a {FORMAT_TAG} file")
    records = []
    for line in lines[1:]:
        if not line.strip():
            continue
        d = json.loads(line)
        records.append(TrajectoryRecord(
            episode=d["episode"], step=d["step"], action=d["action"],
            observation=d["observation"], reward=d["reward"],
            done=d["done"], info=d.get("info", {}),
        ))
    return header, records

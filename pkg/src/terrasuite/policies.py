"""Action policies for driving rollouts from the harness."""

from __future__ import annotations

import numpy as np

from .character.actuation import neutral_action
from .rng import Xoshiro256

# XORed into the rollout seed so the policy stream never collides with the
# env stream seeded by the same value.
POLICY_STREAM_SALT = 0x7C5F9A3E11D24B68

POLICY_KINDS = ("random", "zero")


class RandomPolicy:
    """Uniform draws inside the action space, one seeded stream per rollout."""

    kind = "random"

    def __init__(self, seed: int):
        self._rng = Xoshiro256(seed ^ POLICY_STREAM_SALT)

    def __call__(self, env) -> np.ndarray:
        return env.action_space.sample(self._rng)


class ZeroPolicy:
    """Mode-appropriate neutral action: zeros, or the current pose for PD."""

    kind = "zero"

    def __init__(self, seed: int = 0):
        pass

    def __call__(self, env) -> np.ndarray:
        return neutral_action(env.model, env.mode, env.state)


def make_policy(kind: str, seed: int):
    if kind == "random":
        return RandomPolicy(seed)
    if kind == "zero":
        return ZeroPolicy(seed)
    raise ValueError(f"unknown policy {kind!r}; choose from {POLICY_KINDS}")

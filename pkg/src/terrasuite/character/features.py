"""Egocentric state features for the agent slice of an observation."""

from __future__ import annotations

import numpy as np


def agent_feature_dim(model) -> int:
    return 1 + 4 * model.n_links


def agent_features(model, state) -> np.ndarray:
    """Flat feature vector: root height, then per link (model order) its
    position relative to the root and its linear velocity, world axes.

    The root's own relative-position entries are (0, 0); translating the
    whole state horizontally leaves every entry unchanged.
    """
    root = model.root_link
    out = np.empty(agent_feature_dim(model))
    out[0] = state.pos[root, 1]
    rel = state.pos - state.pos[root]
    block = np.concatenate([rel, state.vel], axis=1)  # (n, 4)
    out[1:] = block.reshape(-1)
    return out

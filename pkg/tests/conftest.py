import numpy as np
import pytest

from terrasuite.envs.catalog import make_env


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Load/compile the JIT kernels once so timed tests measure simulation,
    not compiler startup."""
    env = make_env("PD_Biped2D_Walk-Flat-v0")
    env.set_random_seed(0)
    env.reset()
    env.step(np.zeros(env.act_dim))

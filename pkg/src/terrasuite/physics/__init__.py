from .types import (
    WORLD,
    LinkBody,
    RevoluteJoint,
    SimState,
    ContactEvent,
    box_inertia,
    box_contact_points,
)
from .engine import (
    PhysicsError,
    NonFiniteStateError,
    integrate_step,
    run_control_window,
    total_energy,
    forward_kinematics,
    measure_joint_angles,
    joint_anchor_error,
)
from .kernels import (
    GRAVITY,
    FRICTION,
    ITERATIONS,
    BAUMGARTE,
    MODE_TORQUE,
    MODE_VELOCITY,
    MODE_PD,
    MODE_MUSCLE,
    HAVE_NUMBA,
)

__all__ = [
    "WORLD", "LinkBody", "RevoluteJoint", "SimState", "ContactEvent",
    "box_inertia", "box_contact_points",
    "PhysicsError", "NonFiniteStateError", "integrate_step",
    "run_control_window", "total_energy", "forward_kinematics",
    "measure_joint_angles", "joint_anchor_error",
    "GRAVITY", "FRICTION", "ITERATIONS", "BAUMGARTE",
    "MODE_TORQUE", "MODE_VELOCITY", "MODE_PD", "MODE_MUSCLE", "HAVE_NUMBA",
]

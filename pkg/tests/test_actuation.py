import math

import numpy as np
import pytest

from terrasuite.character.actuation import (
    ActuationMode,
    compute_torques,
    derive_muscle,
)
from terrasuite.character.model import builtin_character
from terrasuite.physics import forward_kinematics
from terrasuite.rng import Xoshiro256
from terrasuite.validate import (
    check_muscle_activation,
    check_pd_settling,
    check_torque_clamp,
    hinge_model,
)

DT = 1.0 / 3000.0


def test_pd_equilibrium_zero_torque():
    model = builtin_character("biped7")
    s = forward_kinematics(model, np.zeros(6), ((0.0, 1.2), 0.0))
    taus, _ = compute_torques(model, ActuationMode.PositionPD,
                              np.zeros(6), s, model.muscles, DT)
    assert np.all(taus == 0.0)


def test_velocity_mode_formula():
    model = hinge_model(kp=50.0, kd=10.0)
    s = forward_kinematics(model, [0.0], ((0.5, 2.0), 0.0))
    taus, _ = compute_torques(model, ActuationMode.Velocity, [1.0], s, model.muscles, DT)
    assert taus[0] == pytest.approx(10.0)  # kd * (1 rad/s - 0)


def test_pd_mode_formula():
    model = hinge_model(kp=50.0, kd=10.0)
    s = forward_kinematics(model, [0.2], ((0.5, 2.0), 0.0))
    s.omega[0] = 0.5
    taus, _ = compute_torques(model, ActuationMode.PositionPD, [0.7], s, model.muscles, DT)
    assert taus[0] == pytest.approx(50.0 * 0.5 - 10.0 * 0.5)


def test_torque_mode_passthrough_and_clamp():
    model = hinge_model()
    s = forward_kinematics(model, [0.0], ((0.5, 2.0), 0.0))
    taus, _ = compute_torques(model, ActuationMode.Torque, [37.0], s, model.muscles, DT)
    assert taus[0] == 37.0
    taus, _ = compute_torques(model, ActuationMode.Torque, [1e6], s, model.muscles, DT)
    assert taus[0] == model.joints[0].torque_limit


def test_muscle_activation_matches_analytic():
    r = check_muscle_activation()
    assert r.passed, r.detail


def test_muscle_fixed_point_antagonist_difference():
    """With equal commands, the net torque converges to the tau_max
    difference scaled by activation and the torque-angle curve peak."""
    model = hinge_model()
    muscle = derive_muscle(model.joints[0], {"TauMaxPlus": 50.0, "TauMaxMinus": 30.0,
                                             "OptimalAngle": 0.0})
    muscles = [muscle]
    s = forward_kinematics(model, [0.0], ((0.5, 2.0), 0.0))  # at optimal angle, at rest
    u = 0.6
    taus = None
    for _ in range(3000):  # 1 s >> activation_time: activations converge
        taus, muscles = compute_torques(model, ActuationMode.Muscle,
                                        [u, u], s, muscles, DT)
    expected = (50.0 - 30.0) * u  # f_l(theta*) = 1, f_v(0) = 1
    assert taus[0] == pytest.approx(expected, abs=1e-3)
    assert muscles[0].activation_plus == pytest.approx(u, abs=1e-6)
    assert muscles[0].activation_minus == pytest.approx(u, abs=1e-6)


def test_muscle_activations_bounded_under_random_input():
    model = hinge_model()
    muscles = model.muscles
    s = forward_kinematics(model, [0.0], ((0.5, 2.0), 0.0))
    rng = Xoshiro256(31)
    for _ in range(500):
        u = [rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)]  # clamped to [0,1]
        _, muscles = compute_torques(model, ActuationMode.Muscle, u, s, muscles, DT)
        assert 0.0 <= muscles[0].activation_plus <= 1.0
        assert 0.0 <= muscles[0].activation_minus <= 1.0


def test_muscle_velocity_ramp_weakens_shortening():
    model = hinge_model()
    muscles = [derive_muscle(model.joints[0], {"OptimalAngle": 0.0})]
    s_fast = forward_kinematics(model, [0.0], ((0.5, 2.0), 0.0))
    s_fast.omega[0] = muscles[0].max_velocity  # contracting at max speed
    for _ in range(2000):
        taus_fast, muscles = compute_torques(model, ActuationMode.Muscle,
                                             [1.0, 0.0], s_fast, muscles, DT)
    assert taus_fast[0] == pytest.approx(0.0, abs=1e-6)  # f_v vanishes


def test_pd_settling_battery():
    r = check_pd_settling()
    assert r.passed, r.detail


def test_torque_clamp_battery():
    r = check_torque_clamp()
    assert r.passed, r.detail


def test_dimension_mismatch():
    model = builtin_character("biped7")
    s = forward_kinematics(model, np.zeros(6), ((0.0, 1.2), 0.0))
    with pytest.raises(ValueError):
        compute_torques(model, ActuationMode.Torque, np.zeros(7), s, model.muscles, DT)


def test_mode_parse():
    assert ActuationMode.parse("pd") is ActuationMode.PositionPD
    assert ActuationMode.parse("Muscle") is ActuationMode.Muscle
    with pytest.raises(ValueError):
        ActuationMode.parse("hydraulic")

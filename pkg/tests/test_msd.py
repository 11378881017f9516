import numpy as np
import pytest

from spdmp.errors import DefinitenessError, InvalidParameter
from spdmp.msd import MsdScenario, gen_stiffness_demo, minimum_jerk, rotate_stiffness, simulate_msd


def test_default_demo_shape():
    demo = gen_stiffness_demo(MsdScenario())
    assert len(demo) == 401
    assert demo.dt == pytest.approx(0.01)
    assert demo.duration == pytest.approx(4.0)


def test_start_and_end():
    demo = gen_stiffness_demo(MsdScenario(K0=np.diag([500.0, 100.0])))
    np.testing.assert_array_equal(demo.points[0], np.diag([500.0, 100.0]))
    np.testing.assert_allclose(demo.points[-1], np.diag([100.0, 500.0]), atol=1e-10)


def test_eigenvalues_constant():
    demo = gen_stiffness_demo(MsdScenario())
    w = np.linalg.eigvalsh(demo.points)
    np.testing.assert_allclose(w, np.tile([100.0, 500.0], (401, 1)), rtol=1e-12)


def test_zero_rotation_is_constant():
    demo = gen_stiffness_demo(MsdScenario(theta_end=0.0))
    assert np.all(demo.points == demo.points[0])


def test_minimum_jerk_profile():
    s = np.linspace(0, 1, 101)
    p = minimum_jerk(s)
    assert p[0] == 0 and p[-1] == 1 and np.all(np.diff(p) >= 0)
    assert minimum_jerk(0.5) == pytest.approx(0.5)


def test_rotation_direction():
    K = np.diag([3.0, 1.0])
    np.testing.assert_allclose(rotate_stiffness(K, np.pi / 4), [[2.0, -1.0], [-1.0, 2.0]], atol=1e-14)


@pytest.mark.parametrize("kw", [
    dict(dt=0.0), dict(dt=-0.1), dict(duration=0.0), dict(mass=0.0),
    dict(K0=np.eye(2) * 5), dict(K0=np.diag([1.0, -1.0])), dict(theta_profile="cubic"),
])
def test_scenario_validation(kw):
    with pytest.raises((InvalidParameter, DefinitenessError)):
        MsdScenario(**kw)


def test_no_force_stays_at_rest():
    sc = MsdScenario(force_pulses=())
    _, pos, vel = simulate_msd(sc, gen_stiffness_demo(sc).points)
    assert np.all(pos == 0) and np.all(vel == 0)


def test_static_equilibrium():
    f = np.array([30.0, -10.0])
    K = np.array([[400.0, 50.0], [50.0, 200.0]])
    sc = MsdScenario(theta_end=0.0, K0=K, damping=np.diag([80.0, 80.0]), force_pulses=((0.0, 99.0, f),),
                     duration=15.0)
    _, pos, vel = simulate_msd(sc, gen_stiffness_demo(sc).points)
    np.testing.assert_allclose(pos[-1], np.linalg.solve(K, f), rtol=1e-8)
    assert np.abs(vel[-1]).max() < 1e-8


def test_energy_bounded_against_fine_reference():
    # oracle: the same system integrated with a 20x finer step
    sc = MsdScenario()
    fine = MsdScenario(dt=sc.dt / 20)
    _, pos, vel = simulate_msd(sc, gen_stiffness_demo(sc).points)
    _, pos_f, vel_f = simulate_msd(fine, gen_stiffness_demo(fine).points)
    pos_f = pos_f[::20]
    K = gen_stiffness_demo(sc).points
    energy = 0.5 * np.einsum("ti,tij,tj->t", pos, K, pos) + 0.5 * sc.mass * (vel**2).sum(1)
    # work done by the pulses bounds the stored energy of a passive system
    f_max, stroke = 20.0, np.abs(pos).max() * 4
    assert energy.max() <= 2 * f_max * stroke
    assert np.abs(pos - pos_f).max() < 0.1 * np.abs(pos_f).max()


def test_profile_shape_checked():
    sc = MsdScenario()
    with pytest.raises(InvalidParameter):
        simulate_msd(sc, np.repeat(np.eye(2)[None], 10, axis=0))

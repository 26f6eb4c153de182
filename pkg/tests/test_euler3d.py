"""Test the 3D Euler solver and its initial conditions."""
import numpy as np
import pytest

from vortiline.errors import FieldError
from vortiline.euler3d import (EulerModel, EulerState, EulerTendency, abc_flow_ic, anti_parallel_tubes_ic, energy,
                               euler_rhs, helicity, initial_state, is_under_resolved, step, taylor_green_ic,
                               tube_circulation, tube_vorticity)
from vortiline.fields import Grid, ScalarField, VectorField, gradient, relative_divergence
from vortiline.stepping import MarchLog, TimeStepper, march


def test_state_needs_3d_vorticity():
    with pytest.raises(FieldError, match='3D'):
        EulerState(VectorField.zeros(Grid((16, 16))))


def test_abc_flow_is_steady():
    """Beltrami flows have omega parallel to u, so the tendency vanishes."""
    state = abc_flow_ic(Grid((16, 16, 16)), 1.0, 0.8, 0.6)
    rate = euler_rhs(state)
    assert rate.max_magnitude() < 1e-12 * state.omega.max_magnitude() ** 2


def test_rhs_rejects_divergent_vorticity():
    grid = Grid((16, 16, 16))
    f = ScalarField.from_function(grid, lambda x, y, z: np.sin(x) * np.sin(y) * np.sin(z))
    with pytest.raises(FieldError, match='not solenoidal'):
        euler_rhs(EulerState(gradient(f)))


def test_taylor_green_conserves_energy_and_divergence():
    grid = Grid((16, 16, 16))
    state = taylor_green_ic(grid)
    stepper = TimeStepper(dt=0.01, adaptive=False)
    start = energy(state.velocity())
    assert start == pytest.approx(0.125 * (2 * np.pi) ** 3, rel=1e-12)
    for _ in range(5):
        state = step(state, stepper)
    assert energy(state.velocity()) == pytest.approx(start, rel=1e-8)
    assert relative_divergence(state.omega) < 1e-12
    assert abs(helicity(state.velocity(), state.omega)) < 1e-10


def test_tube_pair_has_opposite_circulation():
    """The x > L/2 tube carries the requested circulation."""
    grid = Grid((64, 64, 8))
    state = anti_parallel_tubes_ic(grid, radius=0.3, separation=1.6, circulation=1.0, amplitude=0.0)
    assert tube_circulation(state.omega) == pytest.approx(1.0, abs=1e-3)
    total = float(np.sum(state.omega.components[2][:, :, 0])) * grid.spacing[0] * grid.spacing[1]
    assert total == pytest.approx(0.0, abs=1e-12)
    assert relative_divergence(state.omega) < 1e-12


def test_perturbed_tubes_follow_their_centre_lines():
    """omega is tangent to x = c(z) in the core, so the raw pair is already solenoidal."""
    grid = Grid((64, 64, 64))
    omega = tube_vorticity(grid, radius=0.3, separation=1.6, circulation=1.0, amplitude=0.2)
    assert relative_divergence(omega) < 1e-6
    x, y, z = grid.mesh()
    core = (x - (np.pi + 0.8 - 0.2 * np.cos(z))) ** 2 + (y - np.pi) ** 2 < 0.09
    wx, wy, wz = omega.components
    assert np.max(np.abs(wx - 0.2 * np.sin(z) * wz)[core]) < 1e-3 * omega.max_magnitude()
    assert np.max(np.abs(wy)) == 0.0

    state = anti_parallel_tubes_ic(grid, radius=0.3, separation=1.6, circulation=1.0, amplitude=0.2)
    # z = pi/2, where the centre line is tilted by 0.2
    assert tube_circulation(state.omega, z_index=16) == pytest.approx(1.0, abs=1e-3)
    difference = VectorField(grid, list(state.omega.array - omega.array))
    assert difference.max_magnitude() < 1e-3 * omega.max_magnitude()


def test_tube_parameters_checked():
    grid = Grid((32, 32, 16))
    with pytest.raises(FieldError, match='cross'):
        anti_parallel_tubes_ic(grid, separation=0.2, amplitude=0.2)
    with pytest.raises(FieldError, match='periodic images'):
        anti_parallel_tubes_ic(grid, radius=1.0, separation=3.0)
    with pytest.raises(FieldError, match='does not divide'):
        anti_parallel_tubes_ic(grid, wavelength=2.5)


def test_under_resolved_detection():
    grid = Grid((16, 16, 16))
    assert not is_under_resolved(taylor_green_ic(grid).omega)
    rough = VectorField.from_function(grid, lambda x, y, z: (np.sin(5 * y), np.sin(5 * z), np.sin(5 * x)))
    assert is_under_resolved(rough)


def test_unknown_initial_condition():
    with pytest.raises(FieldError, match='unknown Euler initial condition'):
        initial_state(Grid((8, 8, 8)), 'hill_vortex')


def test_model_series_row():
    grid = Grid((16, 16, 16))
    model = EulerModel(grid, TimeStepper())
    values = abc_flow_ic(grid).omega.array
    time, max_vorticity, kinetic, heli, dt = model.series_row(values, 0.0, 0.0)
    assert max_vorticity == pytest.approx(np.sqrt(np.max(np.sum(values ** 2, axis=0))))
    # ABC with a = b = c = 1 has u = omega
    assert kinetic == pytest.approx(0.5 * heli)
    model.observe(values, 0.0)
    assert model.flags()['under_resolved'] is False


def test_fixed_step_over_cfl_is_recorded():
    state = taylor_green_ic(Grid((16, 16, 16)))
    log = MarchLog()
    state = step(state, TimeStepper(dt=0.5, adaptive=False), log)
    assert log.steps == 1
    assert log.final_time == pytest.approx(0.5)
    assert len(log.cfl_violations) == 1
    index, time, cfl = log.cfl_violations[0]
    assert (index, time) == (0, 0.0)
    assert cfl > 1.0
    step(state, TimeStepper(dt=0.01, adaptive=False), log)
    assert log.steps == 2 and len(log.cfl_violations) == 1


# ==================== LONGER RUNS ====================

def march_to(state, stepper, t_end):
    tendency = EulerTendency(state.grid, stepper)
    values, time, _ = march(state.omega.array, state.time, stepper, rhs=tendency,
                            max_speed=tendency.max_speed, spacing=state.grid.min_spacing,
                            t_end=t_end, outputs=[t_end])
    return EulerState(VectorField(state.grid, list(values)), time)


@pytest.fixture(scope='module')
def taylor_green_runs():
    """Taylor-Green after 20 fixed steps of 0.025 at 32^3 and 64^3."""
    runs = {}
    for n in (32, 64):
        state = taylor_green_ic(Grid((n, n, n)))
        stepper = TimeStepper(dt=0.025, adaptive=False)
        start = energy(state.velocity())
        for _ in range(20):
            state = step(state, stepper)
        runs[n] = (start, state)
    return runs


@pytest.mark.slow
def test_abc_flow_stays_put_to_unit_time():
    state = abc_flow_ic(Grid((64, 64, 64)))
    final = march_to(state, TimeStepper(), 1.0)
    assert final.time == pytest.approx(1.0)
    change = VectorField(state.grid, list(final.omega.array - state.omega.array))
    assert change.max_magnitude() <= 1e-4 * state.omega.max_magnitude()


@pytest.mark.slow
def test_taylor_green_energy_at_64(taylor_green_runs):
    start, state = taylor_green_runs[64]
    assert state.time == pytest.approx(0.5)
    assert energy(state.velocity()) == pytest.approx(start, rel=1e-5)
    assert relative_divergence(state.omega) < 1e-10


@pytest.mark.slow
def test_taylor_green_agrees_across_resolutions(taylor_green_runs):
    _, coarse = taylor_green_runs[32]
    _, fine = taylor_green_runs[64]
    sampled = fine.omega.array[:, ::2, ::2, ::2]
    scale = fine.omega.max_magnitude()
    assert np.max(np.abs(coarse.omega.array - sampled)) <= 1e-4 * scale


@pytest.mark.slow
def test_tube_pair_keeps_its_mirror_symmetry():
    """Under x -> L_x - x, omega_x is even and omega_y, omega_z are odd."""
    grid = Grid((32, 32, 16))
    state = anti_parallel_tubes_ic(grid, amplitude=0.2)
    flip = (-np.arange(grid.n[0])) % grid.n[0]
    stepper = TimeStepper(dt=0.02, adaptive=False)
    for steps in (0, 3):
        for _ in range(steps):
            state = step(state, stepper)
        wx, wy, wz = state.omega.components
        tolerance = 1e-10 * state.omega.max_magnitude()
        assert np.max(np.abs(wx[flip] - wx)) <= tolerance
        assert np.max(np.abs(wy[flip] + wy)) <= tolerance
        assert np.max(np.abs(wz[flip] + wz)) <= tolerance

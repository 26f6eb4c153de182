"""Test tracing, transport and geometry of vortex lines and level-set curves."""
import numpy as np
import pytest

from vortiline.constants import DIAGNOSTICS_COLUMNS, FLAG_NORMAL_UNDEFINED, FLAG_UNTRUSTED
from vortiline.curves import (SegmentDiagnostics, advect_segment, diagnose_segment, hausdorff_distance,
                              material_stretch, reseed, tau_relation_residual, trace_segment, write_curve)
from vortiline.errors import SegmentError
from vortiline.euler3d import abc_flow_ic
from vortiline.fields import Grid, VectorField, sqg_velocity
from vortiline.series import curve_columns, read_csv
from vortiline.sqg import radial_gaussian

RADIUS = 0.5


def circle_field():
    """theta whose level sets near the centre are circles."""
    return radial_gaussian(Grid((64, 64)), width=0.6)


def circle_segment(orientation='centered', length=0.5):
    theta = circle_field()
    seed = np.array([np.pi + RADIUS, np.pi])
    return theta, trace_segment(theta, seed, length, orientation, time=0.25)


def helix_vorticity():
    """omega = (sin z, cos z, 0): straight vortex lines of unit strength in every z plane."""
    return abc_flow_ic(Grid((16, 16, 16)), 1.0, 0.0, 0.0).omega


def constant_velocity(grid, value):
    return VectorField.from_function(grid, lambda *x: [np.full_like(x[0], v) for v in value])


# ==================== TRACING ====================

def test_level_set_is_traced_on_the_circle():
    _, segment = circle_segment()
    distance = np.linalg.norm(segment.points - np.pi, axis=1)
    assert np.allclose(distance, RADIUS, atol=1e-5)
    assert segment.length == pytest.approx(0.5, rel=1e-3)
    assert segment.spacing_ok()
    assert segment.resolved
    assert segment.time == 0.25 and segment.reference_time == 0.25
    assert np.array_equal(segment.beta, segment.s)


def test_max_at_end_puts_the_seed_last():
    _, segment = circle_segment('max_at_end')
    assert np.allclose(segment.points[-1], [np.pi + RADIUS, np.pi], atol=1e-12)
    assert segment.length == pytest.approx(0.5, rel=1e-3)


def test_straight_vortex_line():
    """Forward and backward traces follow +xi and -xi."""
    omega = helix_vorticity()
    seed = np.array([1.0, 1.0, 1.0])
    direction = np.array([np.sin(1.0), np.cos(1.0), 0.0])
    ahead = trace_segment(omega, seed, 1.0, 'forward')
    behind = trace_segment(omega, seed, 1.0, 'backward')
    assert np.allclose(ahead.points, seed + ahead.s[:, None] * direction, atol=1e-8)
    assert np.allclose(behind.points, seed - behind.s[:, None] * direction, atol=1e-8)
    assert ahead.sign == 1 and behind.sign == -1
    assert ahead.length == pytest.approx(1.0, rel=1e-9)


def test_reseed_starts_at_the_maximum():
    theta = circle_field()
    segment = reseed(theta, 0.3, time=1.5)
    assert segment.material_id == 'reseed@t=1.5'
    peak = np.linalg.norm(segment.points[-1] - np.pi)
    assert peak == pytest.approx(0.6 / np.sqrt(2.0), abs=0.1)


def test_undefined_direction_rejected():
    """At the centre grad theta vanishes, so there is no curve to follow."""
    theta = circle_field()
    with pytest.raises(SegmentError, match='direction is undefined'):
        trace_segment(theta, [np.pi, np.pi], 0.5)


def test_trace_arguments_checked():
    theta = circle_field()
    with pytest.raises(SegmentError, match='unknown orientation'):
        trace_segment(theta, [3.5, 3.0], 0.5, 'sideways')
    with pytest.raises(SegmentError, match='positive'):
        trace_segment(theta, [3.5, 3.0], 0.0)
    with pytest.raises(SegmentError, match='coordinates'):
        trace_segment(theta, [3.5, 3.0, 1.0], 0.5)


# ==================== TRANSPORT ====================

def test_uniform_translation_keeps_labels():
    theta, segment = circle_segment()
    moved = advect_segment(segment, [constant_velocity(theta.grid, (1.0, 0.0))] * 2, 0.1)
    assert np.allclose(moved.points, segment.points + [0.1, 0.0], atol=1e-10)
    assert np.allclose(moved.beta, segment.beta, atol=1e-10)
    assert moved.material_id == segment.material_id
    assert moved.time == pytest.approx(0.35)
    assert moved.reference_time == 0.25
    assert np.all(moved.trusted)


def test_large_displacement_is_untrusted():
    theta, segment = circle_segment()
    moved = advect_segment(segment, [constant_velocity(theta.grid, (10.0, 0.0))] * 2, 0.1)
    assert not np.any(moved.trusted)
    assert np.all(moved.flags() & FLAG_UNTRUSTED)


def test_chords_stretch_like_vorticity():
    """In a steady Beltrami flow material chords grow with |omega|."""
    grid = Grid((32, 32, 32))
    omega = abc_flow_ic(grid).omega
    segment = trace_segment(omega, [1.0, 2.0, 0.5], 1.0, 'forward')
    check = material_stretch(segment, (omega, omega), 0.01, (omega, omega), substeps=4)
    assert check.max_relative_error < 1e-3


def abc_line():
    omega = abc_flow_ic(Grid((32, 32, 32))).omega
    return omega, trace_segment(omega, [1.0, 2.0, 0.5], 1.0, 'forward')


def test_tracing_back_retraces_the_line():
    omega, ahead = abc_line()
    back = trace_segment(omega, ahead.points[-1], 1.0, 'backward')
    assert np.linalg.norm(back.points[-1] - ahead.points[0]) < 1e-4
    assert hausdorff_distance(ahead, back) <= 1e-4


def test_advecting_there_and_back_returns_the_curve():
    """Steady ABC flow with u = omega, carried forward and back by 0.1."""
    omega, segment = abc_line()
    there = advect_segment(segment, (omega, omega), 0.1, substeps=10)
    back = advect_segment(there, (omega, omega), -0.1, substeps=10)
    assert hausdorff_distance(there, segment) > 1e-2
    assert hausdorff_distance(back, segment) <= 1e-4
    assert back.time == pytest.approx(segment.time)


# ==================== GEOMETRY ====================

def test_circle_curvature_and_tau():
    theta, segment = circle_segment()
    diagnostics, samples = diagnose_segment(segment, theta, sqg_velocity(theta))
    assert np.allclose(samples.kappa, 1.0 / RADIUS, rtol=1e-3)
    assert np.max(np.abs(samples.tau)) < 1e-6
    assert not np.any(samples.flags & FLAG_NORMAL_UNDEFINED)
    assert np.allclose(np.abs(np.einsum('pi,pi->p', samples.xi, samples.xi_perp)), 0.0, atol=1e-10)
    assert diagnostics.L == pytest.approx(segment.length)
    assert diagnostics.int_kappa == pytest.approx(segment.length / RADIUS, rel=1e-3)
    assert diagnostics.Q == pytest.approx(diagnostics.Omega_L, rel=1e-4)
    assert diagnostics.omega_end == pytest.approx(samples.omega_mag[-1])
    deviation, comparable = tau_relation_residual(samples)
    assert deviation < 1e-4
    assert comparable


def test_full_circle_closes_with_total_turning_two_pi():
    theta = radial_gaussian(Grid((128, 128)), width=0.6)
    seed = np.array([np.pi + RADIUS, np.pi])
    segment = trace_segment(theta, seed, 2.0 * np.pi * RADIUS, 'forward', tolerance=1e-10)
    assert np.linalg.norm(segment.points[-1] - segment.points[0]) < 1e-6
    diagnostics, _ = diagnose_segment(segment, theta, sqg_velocity(theta))
    assert diagnostics.int_kappa == pytest.approx(2.0 * np.pi, rel=1e-3)


def abc_tau_deviation(n):
    """The line through the |omega| maximum at (pi/4, pi/4, pi/4), half a unit each way."""
    omega = abc_flow_ic(Grid((n, n, n))).omega
    segment = trace_segment(omega, np.full(3, np.pi / 4.0), 1.0, 'centered')
    _, samples = diagnose_segment(segment, omega, omega)
    return tau_relation_residual(samples)


def test_tau_relation_on_a_vortex_line():
    deviation, comparable = abc_tau_deviation(32)
    assert deviation < 1e-2
    assert comparable


@pytest.mark.slow
def test_tau_relation_converges_with_the_grid():
    coarse, _ = abc_tau_deviation(32)
    fine, _ = abc_tau_deviation(64)
    assert fine < 0.5 * coarse


def test_straight_line_has_undefined_normal():
    omega = helix_vorticity()
    segment = trace_segment(omega, [1.0, 1.0, 1.0], 1.0, 'forward')
    diagnostics, samples = diagnose_segment(segment, omega, omega, endpoint_velocity=np.zeros(3))
    assert np.all(samples.kappa == 0.0)
    assert np.all(samples.flags & FLAG_NORMAL_UNDEFINED)
    assert np.max(np.abs(samples.tau)) < 1e-10
    assert diagnostics.Q == pytest.approx(1.0, rel=1e-10)
    assert diagnostics.c0_measured == pytest.approx(1.0, rel=1e-10)
    assert diagnostics.endpoint_speed == 0.0
    # Omega = 1 < e, so no log-velocity ratio
    assert np.isnan(diagnostics.cu_ratio)


def test_diagnostics_row_round_trip():
    theta, segment = circle_segment()
    diagnostics, _ = diagnose_segment(segment, theta, sqg_velocity(theta))
    again = SegmentDiagnostics.from_row(dict(zip(DIAGNOSTICS_COLUMNS, diagnostics.row())))
    np.testing.assert_equal(again.row(), diagnostics.row())


def test_curve_dump(tmp_path):
    theta, segment = circle_segment()
    _, samples = diagnose_segment(segment, theta, sqg_velocity(theta))
    path = tmp_path / 'curve.csv'
    write_curve(path, samples)
    data = read_csv(path, curve_columns(2))
    assert np.array_equal(data['s'], segment.s)
    assert np.array_equal(data['kappa'], samples.kappa)


def test_mismatched_grids_rejected():
    theta, segment = circle_segment()
    with pytest.raises(SegmentError, match='different grids'):
        diagnose_segment(segment, theta, constant_velocity(Grid((32, 32)), (1.0, 0.0)))


def test_hausdorff_distance():
    line = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    assert hausdorff_distance(line, line) < 1e-9
    assert hausdorff_distance(line, line + [0.0, 0.1]) == pytest.approx(0.1, abs=1e-8)
    # resampling the same curve costs nothing
    fine = np.column_stack([np.linspace(0.0, 3.0, 13), np.zeros(13)])
    assert hausdorff_distance(line, fine) < 1e-9

"""Test identity residuals, growth envelopes and the critical-case monitor."""
import math

import numpy as np
import pytest

from vortiline import sqg
from vortiline.config import parse_config
from vortiline.curves import CurveSegment, DiagnosticSamples, SegmentDiagnostics
from vortiline.errors import SegmentError
from vortiline.growth import (BoundConstants, BoundOverrides, centered_derivative, critical_case_monitor,
                              fit_singular_time, growth_envelope, identity_residuals,
                              integrate_growth_inequality, measured_constants, q_envelope, thm22_envelope,
                              thm24_envelope)
from vortiline.pipeline import diagnose


def record(time, Omega=5.0, L=1.0, V=0.5, U=0.5, int_kappa=0.1, int_tau=0.1, endpoint_speed=0.1,
           material_id='line', **extra):
    values = dict(time=time, material_id=material_id, L=L, Q=Omega, int_kappa=int_kappa, int_tau=int_tau,
                  U=U, V=V, Omega_L=Omega, Omega=Omega, c0_measured=1.0, endpoint_speed=endpoint_speed,
                  u_max=max(U, V), cu_ratio=max(U, V) / math.log(Omega) if Omega > math.e else math.nan,
                  resolved=True, inviscid=True, omega_end=Omega)
    values.update(extra)
    return SegmentDiagnostics(**values)


def still_segment(time, material_id='line', count=5):
    """A motionless straight segment with constant |w|."""
    s = np.linspace(0.0, 1.0, count)
    points = np.column_stack([s, np.zeros(count), np.zeros(count)])
    segment = CurveSegment(points=points, s=s, beta=s, time=time, h=0.25, material_id=material_id,
                           reference_time=0.0, omega_ref=np.full(count, 2.0))
    zeros = np.zeros(count)
    xi = np.tile([1.0, 0.0, 0.0], (count, 1))
    samples = DiagnosticSamples(s=s, beta=s, points=points, omega_mag=np.full(count, 2.0), xi=xi,
                                xi_perp=np.zeros((count, 3)), kappa=zeros, tau=zeros, u=np.zeros((count, 3)),
                                u_xi=zeros, u_xi_perp=zeros, kappa_u_perp=zeros, alpha=zeros,
                                alpha_curve=zeros, flags=np.ones(count, dtype=int))
    diagnostics = record(time, Omega=2.0, V=0.0, U=0.0, int_kappa=0.0, int_tau=0.0, endpoint_speed=0.0,
                         material_id=material_id)
    return segment, diagnostics, samples


# ==================== IDENTITY ====================

def test_centered_derivative_exact_for_quadratics():
    """Three-point stencils on a non-uniform grid are exact for t^2, ends included."""
    times = np.array([0.0, 0.1, 0.3, 0.6, 1.0])
    values = 3.0 * times ** 2 - times + 2.0
    for index, t in enumerate(times):
        assert centered_derivative(times, values, index) == pytest.approx(6.0 * t - 1.0, abs=1e-10)


def test_centered_derivative_two_points():
    assert centered_derivative([0.0, 0.5], [1.0, 2.0], 0) == pytest.approx(2.0)


def test_identity_vanishes_for_a_still_segment():
    series = [still_segment(t) for t in (0.0, 0.1, 0.3)]
    records = identity_residuals(series)
    assert len(records) == 3
    for r in records:
        assert r.dQdt == pytest.approx(0.0, abs=1e-12)
        assert (r.I1, r.I2, r.I3, r.I4) == pytest.approx((0.0, 0.0, 0.0, 0.0), abs=1e-12)
        assert r.residual == pytest.approx(0.0, abs=1e-12)
        assert r.i4_sign_ok and r.i1_bound_ok and r.i2_bound_ok and r.i3_bound_ok
    assert len(records[0].row()) == 13


def test_identity_needs_one_material_family():
    with pytest.raises(SegmentError, match='materially linked'):
        identity_residuals([still_segment(0.0, 'a'), still_segment(0.1, 'b')])
    with pytest.raises(SegmentError, match='at least two'):
        identity_residuals([still_segment(0.0)])
    with pytest.raises(SegmentError, match='increase'):
        identity_residuals([still_segment(0.1), still_segment(0.0)])


# ==================== CONSTANTS ====================

def test_derived_constants():
    constants = BoundConstants(c0=0.5, C0=0.2, Cl=1.0, Cu=2.0)
    C1 = math.exp(0.2)
    assert constants.C1 == pytest.approx(C1)
    assert constants.CU == pytest.approx(0.2 * (2 * C1 - 1))
    assert constants.CV == pytest.approx(2 * 0.2 * C1 + (C1 - 1) * 2.0 + 2 * C1)
    assert constants.C == pytest.approx(2.0 * max(constants.CU, constants.CV))


def test_bound_constants_validated():
    with pytest.raises(SegmentError, match='c0'):
        BoundConstants(c0=1.5, C0=0.0, Cl=0.0)
    with pytest.raises(SegmentError, match='C0'):
        BoundConstants(c0=0.5, C0=-1.0, Cl=0.0)


def test_constants_are_running_extrema():
    records = [record(0.0, int_kappa=0.1), record(0.1, int_kappa=0.3), record(0.2, int_kappa=0.2)]
    _, constants = measured_constants(records)
    assert [c.C0 for c in constants] == pytest.approx([0.1, 0.3, 0.3])
    assert [c.Cl for c in constants] == pytest.approx([0.2, 0.2, 0.2])


def test_overrides_replace_measurements():
    records = [record(0.0), record(0.1), record(0.2)]
    _, constants = measured_constants(records, BoundOverrides(C0=1.0, T0=0.1))
    assert len(constants) == 2
    assert all(c.C0 == 1.0 and c.T0 == 0.1 for c in constants)


# ==================== ENVELOPES ====================

def test_steady_record_is_dominated():
    records = [record(t) for t in np.linspace(0.0, 1.0, 6)]
    envelope = growth_envelope(records)
    assert np.all(envelope.hypotheses_ok)
    assert np.all(envelope.dominated_thm22)
    assert np.all(envelope.dominated_thm24)
    assert envelope.bound_thm22[0] == pytest.approx(5.0 * math.exp(0.1))
    assert envelope.violations('thm22').size == 0
    assert envelope.bkm_integral[-1] == pytest.approx(5.0)
    assert len(next(envelope.rows())) == 12


def test_c0_override_scales_the_bound():
    records = [record(t) for t in np.linspace(0.0, 1.0, 6)]
    plain = thm22_envelope(records)
    loose = thm22_envelope(records, BoundOverrides(c0=0.5))
    assert np.allclose(loose.bound_thm22, 2.0 * plain.bound_thm22)


def test_violation_reported_when_hypotheses_hold():
    """Omega doubling with no stretching budget exceeds the exponential envelope."""
    records = [record(0.0, Omega=5.0, V=0.0, U=0.0, int_kappa=0.0, int_tau=0.0, endpoint_speed=0.0),
               record(0.5, Omega=10.0, V=0.0, U=0.0, int_kappa=0.0, int_tau=0.0, endpoint_speed=0.0)]
    envelope = thm22_envelope(records, BoundOverrides(c0=1.0, C0=0.0, Cl=0.0))
    assert np.all(envelope.hypotheses_ok)
    assert envelope.bound_thm22 == pytest.approx([5.0, 5.0])
    assert envelope.violations('thm22').tolist() == [1]


def test_failed_hypothesis_is_flagged_not_violated():
    records = [record(0.0, Omega=5.0, V=0.0, U=0.0, int_kappa=0.0, int_tau=0.0, endpoint_speed=0.0),
               record(0.5, Omega=10.0, V=0.0, U=0.0, int_kappa=0.5, int_tau=0.0, endpoint_speed=0.0)]
    envelope = thm22_envelope(records, BoundOverrides(c0=1.0, C0=0.0, Cl=0.0))
    assert envelope.failed_flags(1) == ['kappa_ok']
    assert envelope.violations('thm22').size == 0
    assert envelope.hypotheses_violated
    assert any('hypotheses_violated' in note for note in envelope.notes)


def test_endpoint_not_at_max_is_flagged():
    records = [record(0.0), record(0.1, omega_end=4.0)]
    envelope = growth_envelope(records)
    assert envelope.endpoint_at_max.tolist() == [True, False]


def test_double_exponential_skipped_below_e():
    records = [record(t, Omega=2.0) for t in (0.0, 0.5, 1.0)]
    envelope = thm24_envelope(records)
    assert np.all(np.isnan(envelope.bound_thm24))
    assert any('skipped' in note for note in envelope.notes)


def test_double_exponential_with_fixed_length():
    records = [record(t, L=2.0) for t in (0.0, 0.5, 1.0)]
    constants = measured_constants(records)[1][-1]
    envelope = thm24_envelope(records, BoundOverrides(L0=4.0))
    expected = math.exp(math.log(constants.C1 * 5.0 / 1.0) * math.exp(constants.C * 0.25))
    assert envelope.bound_thm24[-1] == pytest.approx(expected)


def test_q_envelope_chain():
    records = [record(t) for t in (0.0, 0.5, 1.0)]
    q = q_envelope(records)
    assert np.all(q.dominated)
    assert np.all(q.chain_ok)


def test_growth_inequality_closed_form_matches_integration():
    times = np.linspace(0.0, 1.0, 11)
    numeric, closed = integrate_growth_inequality(times, np.full(11, 2.0), 0.5, 2.0, 1.1, 0.9)
    assert np.allclose(numeric, closed, rtol=1e-6)
    y0 = math.log(2.0) + math.log(1.1 / 0.9)
    assert closed[-1] == pytest.approx(math.exp(y0 * math.exp(0.25)))


# ==================== CRITICAL CASE ====================

def blowup_records(T=1.0, p=0.5, count=20):
    times = np.linspace(0.0, 0.8, count)
    return [record(t, Omega=2.0 * (T - t) ** (-p), V=0.2, U=0.1) for t in times]


def test_fit_singular_time():
    times = np.linspace(0.0, 0.8, 20)
    T, p, A = fit_singular_time(times, 2.0 * (1.0 - times) ** -0.5)
    assert T == pytest.approx(1.0, abs=1e-4)
    assert p == pytest.approx(0.5, abs=1e-3)
    assert A == pytest.approx(2.0, rel=1e-3)


def test_critical_monitor_with_given_time():
    constants = BoundConstants(c0=1.0, C0=0.1, Cl=0.2, Cu=1.0, Cw=0.5)
    report = critical_case_monitor(blowup_records(), constants, T=1.0)
    assert report.p == pytest.approx(0.5, abs=1e-9)
    assert not report.divergent
    assert report.bkm_tail == pytest.approx(2.0 * 0.2 ** 0.5 / 0.5, rel=1e-6)
    assert report.ratio[-1] == pytest.approx((constants.CV * 0.2 + constants.CU * 0.1) * 0.2)
    assert report.ratio_ok == (report.sup_ratio <= 0.5)


def test_critical_monitor_flags_divergent_integral():
    constants = BoundConstants(c0=1.0, C0=0.1, Cl=0.2, Cu=1.0)
    report = critical_case_monitor(blowup_records(p=1.5), constants, T=1.0)
    assert report.divergent
    assert math.isinf(report.bkm_integral)
    assert report.ratio_ok is None


def test_critical_monitor_rejects_early_time():
    constants = BoundConstants(c0=1.0, C0=0.1, Cl=0.2)
    with pytest.raises(SegmentError, match='not after the window end'):
        critical_case_monitor(blowup_records(), constants, T=0.5)


@pytest.mark.parametrize('p', [0.3, 0.5, 0.9])
def test_critical_monitor_recovers_the_exponent(p):
    constants = BoundConstants(c0=1.0, C0=0.1, Cl=0.2, Cu=1.0, Cw=0.5)
    report = critical_case_monitor(blowup_records(p=p), constants)
    assert report.T_fitted
    assert report.T == pytest.approx(1.0, abs=1e-3)
    assert report.p == pytest.approx(p, abs=0.02)
    assert not report.divergent
    assert math.isfinite(report.bkm_tail)


def test_critical_monitor_fitted_divergent():
    constants = BoundConstants(c0=1.0, C0=0.1, Cl=0.2, Cu=1.0)
    report = critical_case_monitor(blowup_records(p=1.1), constants)
    assert report.p == pytest.approx(1.1, abs=0.02)
    assert report.divergent


# ==================== IDENTITY ON A RUN ====================

def diagnosed_run(directory, n, interval):
    """Two-Gaussian SQG to t = 0.1, a segment on the flank of the right extremum."""
    text = (f'model = sqg\ngrid.n = {n}\ntime.t_end = 0.1\nic.name = two_gaussian\n'
            f'output.dir = {directory}\noutput.snapshot_interval = {interval}\n'
            f'segment.target_length = 0.5\nsegment.seed = {np.pi + 0.95!r}, {np.pi + 0.15!r}\n')
    config = parse_config(text)
    sqg.run(config)
    return diagnose(config, str(directory))


def test_identity_holds_on_an_evolving_run(tmp_path):
    report = diagnosed_run(tmp_path, 64, 0.025)
    assert report['identity']['max_relative_residual'] <= 1e-2


@pytest.mark.slow
def test_identity_residual_shrinks_with_resolution(tmp_path):
    coarse = diagnosed_run(tmp_path / 'coarse', 32, 0.05)
    fine = diagnosed_run(tmp_path / 'fine', 128, 0.0125)
    assert fine['identity']['median_relative_residual'] <= 0.25 * coarse['identity']['median_relative_residual']

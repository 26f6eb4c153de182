# vortiline -- https://github.com/vortiline/vortiline
#
# Copyright (C) 2025 The vortiline developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.


"""Identity residuals, growth envelopes and the critical-case monitor.

Everything here post-processes diagnostics records; nothing touches a
field. Constants are measured as running maxima and minima over the
window unless the configuration overrides them, and every hypothesis an
envelope rests on is recorded as a per-time flag.
"""

import logging
import math

import attr
import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp, trapezoid
from scipy.optimize import curve_fit

from .constants import DOMINANCE_RTOL, ENDPOINT_MATCH_RTOL, ENVELOPE_COLUMNS, IDENTITY_COLUMNS
from .errors import SegmentError

logger = logging.getLogger(__name__)


def _optional_float(value):
    return None if value is None else float(value)


@attr.s(frozen=True)
class BoundOverrides(object):
    """Constants fixed by the user; ``None`` means measure it."""

    c0 = attr.ib(default=None, converter=_optional_float)
    C0 = attr.ib(default=None, converter=_optional_float)
    Cl = attr.ib(default=None, converter=_optional_float)
    Cu = attr.ib(default=None, converter=_optional_float)
    Cw = attr.ib(default=None, converter=_optional_float)
    T0 = attr.ib(default=None, converter=_optional_float)
    T = attr.ib(default=(), converter=tuple)
    L0 = attr.ib(default=None, converter=_optional_float)


def _check_c0(instance, attribute, value):
    if not 0.0 < value <= 1.0:
        raise SegmentError(f'c0 must lie in (0, 1], got {value}')


def _non_negative(instance, attribute, value):
    if not value >= 0.0:
        raise SegmentError(f'{attribute.name} must be >= 0, got {value}')


@attr.s(frozen=True)
class BoundConstants(object):
    """The growth-estimate constants; ``C1``, ``CU``, ``CV`` and ``C`` are derived."""

    c0 = attr.ib(converter=float, validator=_check_c0)
    C0 = attr.ib(converter=float, validator=_non_negative)
    Cl = attr.ib(converter=float, validator=_non_negative)
    Cu = attr.ib(default=math.nan, converter=float)
    Cw = attr.ib(default=math.nan, converter=float)
    T0 = attr.ib(default=0.0, converter=float)
    T = attr.ib(default=None)

    @property
    def C1(self):
        return math.exp(self.C0)

    @property
    def CU(self):
        return self.C0 * (2.0 * self.C1 - 1.0)

    @property
    def CV(self):
        return 2.0 * self.C0 * self.C1 + (self.C1 - 1.0) * (self.Cl + 1.0) + 2.0 * self.C1

    @property
    def C(self):
        return self.Cu * max(self.CU, self.CV)


def columns(diagnostics):
    """Diagnostics as ``{column: array}``, from records or from a read CSV."""
    if isinstance(diagnostics, dict):
        data = {name: np.asarray(values) for name, values in diagnostics.items()}
    else:
        records = list(diagnostics)
        if not records:
            raise SegmentError('no diagnostics records')
        data = {name: np.array([getattr(r, name) for r in records]) for name in attr.fields_dict(type(records[0]))}
    order = np.argsort(data['time'], kind='stable')
    return {name: values[order] for name, values in data.items()}


def _float_column(data, name):
    return np.asarray(data[name], dtype=np.float64)


# Growth identity

def centered_derivative(times, values, index):
    """Three-point derivative at ``times[index]`` on a non-uniform grid (one-sided at the ends)."""
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.size < 2:
        raise SegmentError('a derivative needs at least two times')
    if times.size == 2:
        return (values[1] - values[0]) / (times[1] - times[0])
    i = min(max(index, 1), times.size - 2)
    h1 = times[i] - times[i - 1]
    h2 = times[i + 1] - times[i]
    weights = (-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2)))
    if index == i:
        return weights[0] * values[i - 1] + weights[1] * values[i] + weights[2] * values[i + 1]
    # second-order one-sided stencils at the ends
    if index == 0:
        a, b = h1, h2
        return (-(2 * a + b) / (a * (a + b)) * values[0] + (a + b) / (a * b) * values[1]
                - a / (b * (a + b)) * values[2])
    a, b = h2, h1
    return ((2 * a + b) / (a * (a + b)) * values[-1] - (a + b) / (a * b) * values[-2]
            + a / (b * (a + b)) * values[-3])


@attr.s(frozen=True)
class IdentityResidualRecord(object):
    time = attr.ib()
    dQdt = attr.ib()
    I1 = attr.ib()
    I2 = attr.ib()
    I3 = attr.ib()
    I4 = attr.ib()
    residual = attr.ib()
    relative_residual = attr.ib()
    L_t = attr.ib()
    i4_sign_ok = attr.ib()
    i1_bound_ok = attr.ib()
    i2_bound_ok = attr.ib()
    i3_bound_ok = attr.ib()

    def row(self):
        return tuple(getattr(self, name) for name in IDENTITY_COLUMNS)


def lemma_terms(diagnostics, samples, endpoint_velocity, L_t):
    """The four groups ``I1 .. I4`` of the evolution identity for ``Q`` at one time.

    ``endpoint_velocity`` is ``dx(0,t)/dt`` of the ``s = 0`` end and
    ``L_t`` the rate of change of the length.
    """
    s = samples.s
    w = samples.omega_mag
    length = diagnostics.L
    w_end = w[-1]
    transport = samples.kappa_u_perp
    i1 = (trapezoid(2.0 * samples.tau * w * samples.u_xi, s)
          - trapezoid(w * transport, s)
          - trapezoid((w - w_end) * transport, s)) / length
    i2 = (samples.u_xi[-1] - samples.u_xi[0]) * w_end / length
    start_motion = float(np.dot(endpoint_velocity, samples.xi[0])) + samples.u_xi[0]
    i3 = (w_end - w[0]) * start_motion / length
    i4 = L_t / length * (w_end - diagnostics.Q)
    return float(i1), float(i2), float(i3), float(i4)


def _bound_checks(diag, i1, i2, i3, i4, L_t):
    c0_local = max(diag.int_kappa, diag.int_tau)
    c1 = math.exp(c0_local)
    cl = diag.endpoint_speed / diag.V if diag.V > 0.0 and math.isfinite(diag.endpoint_speed) else 0.0
    scale = diag.Q / diag.L
    slack = 1.0 + DOMINANCE_RTOL
    tiny = 1e-12 * scale * (diag.U + diag.V + 1.0)
    i1_ok = abs(i1) <= (2 * c0_local * c1 * diag.V + c0_local * c1 * diag.U
                        + c0_local * (c1 - 1.0) * diag.U) * scale * slack + tiny
    i2_ok = abs(i2) <= 2.0 * c1 * diag.V * scale * slack + tiny
    i3_ok = abs(i3) <= (c1 - 1.0) * (cl + 1.0) * diag.V * scale * slack + tiny
    i4_ok = L_t > 0.0 or i4 <= tiny
    return bool(i4_ok), bool(i1_ok), bool(i2_ok), bool(i3_ok)


def identity_residuals(series):
    """IdentityResidualRecords for a materially linked series.

    ``series`` is a time-ordered list of ``(segment, diagnostics, samples)``
    for one material family. ``dQ/dt``, ``L_t`` and the velocity of the
    ``s = 0`` end come from three-point differences in time.
    """
    if len(series) < 2:
        raise SegmentError('the identity needs at least two diagnosed times')
    ids = {segment.material_id for segment, _, _ in series}
    if len(ids) != 1:
        raise SegmentError(f'segments are not materially linked: {", ".join(sorted(ids))}')
    times = np.array([d.time for _, d, _ in series])
    if np.any(np.diff(times) <= 0.0):
        raise SegmentError('diagnostics times must increase strictly')
    q = np.array([d.Q for _, d, _ in series])
    lengths = np.array([d.L for _, d, _ in series])
    starts = np.array([segment.points[0] for segment, _, _ in series])
    records = []
    for index, (segment, diag, samples) in enumerate(series):
        dqdt = centered_derivative(times, q, index)
        l_t = centered_derivative(times, lengths, index)
        v0 = np.array([centered_derivative(times, starts[:, axis], index) for axis in range(starts.shape[1])])
        i1, i2, i3, i4 = lemma_terms(diag, samples, v0, l_t)
        residual = dqdt - (i1 + i2 + i3 + i4)
        scale = max(abs(dqdt), diag.Q / diag.L * (diag.U + diag.V))
        relative = abs(residual) / scale if scale > 0.0 else abs(residual)
        if l_t > 0.0:
            logger.warning('%s: L grows at t=%.6g (L_t=%.3g)', segment.material_id, diag.time, l_t)
        records.append(IdentityResidualRecord(diag.time, dqdt, i1, i2, i3, i4, residual, relative, l_t,
                                              *_bound_checks(diag, i1, i2, i3, i4, l_t)))
    return records


# Envelopes

def _running(values, better):
    values = np.asarray(values, dtype=np.float64)
    cleaned = np.where(np.isfinite(values), values, -np.inf if better is np.maximum else np.inf)
    return better.accumulate(cleaned)


def measured_constants(diagnostics, overrides=None):
    """Per-time running constants on the window ``t >= T0``; returns ``(data, constants)``."""
    overrides = overrides or BoundOverrides()
    data = columns(diagnostics)
    times = _float_column(data, 'time')
    t0 = times[0] if overrides.T0 is None else overrides.T0
    keep = times >= t0 - 1e-12 * max(1.0, abs(t0))
    if not np.any(keep):
        raise SegmentError(f'no diagnostics at or after T0={t0}')
    data = {name: values[keep] for name, values in data.items()}
    geometry = np.maximum(_float_column(data, 'int_kappa'), _float_column(data, 'int_tau'))
    v = _float_column(data, 'V')
    speed = _float_column(data, 'endpoint_speed')
    with np.errstate(divide='ignore', invalid='ignore'):
        endpoint_ratio = np.where(v > 0.0, speed / v, np.nan)
    count = geometry.size
    c0_big = np.full(count, overrides.C0) if overrides.C0 is not None else _running(geometry, np.maximum)
    c0_small = np.full(count, overrides.c0) if overrides.c0 is not None else \
        _running(_float_column(data, 'c0_measured'), np.minimum)
    if overrides.Cl is not None:
        cl = np.full(count, overrides.Cl)
    else:
        cl = _running(endpoint_ratio, np.maximum)
        cl = np.where(np.isfinite(cl), cl, 0.0)
    if overrides.Cu is not None:
        cu = np.full(count, overrides.Cu)
    else:
        cu = _running(_float_column(data, 'cu_ratio'), np.maximum)
        cu = np.where(np.isfinite(cu), cu, np.nan)
    constants = [BoundConstants(c0=c0_small[i], C0=c0_big[i], Cl=cl[i], Cu=cu[i],
                                Cw=math.nan if overrides.Cw is None else overrides.Cw, T0=t0)
                 for i in range(count)]
    return data, constants


@attr.s
class GrowthEnvelope(object):
    """Bound time series with the hypotheses flags that qualify them."""

    times = attr.ib()
    Omega = attr.ib()
    bound_thm22 = attr.ib()
    bound_thm24 = attr.ib()
    bkm_integral = attr.ib()
    kappa_ok = attr.ib()
    tau_ok = attr.ib()
    endpoint_ok = attr.ib()
    c0_ok = attr.ib()
    endpoint_at_max = attr.ib()
    constants = attr.ib(factory=list)
    notes = attr.ib(factory=list)

    @property
    def hypotheses_ok(self):
        return self.kappa_ok & self.tau_ok & self.endpoint_ok & self.c0_ok & self.endpoint_at_max

    @property
    def hypotheses_violated(self):
        return not bool(np.all(self.hypotheses_ok))

    @property
    def dominated_thm22(self):
        return self.Omega <= self.bound_thm22 * (1.0 + DOMINANCE_RTOL)

    @property
    def dominated_thm24(self):
        # NaN bounds (skipped) compare False
        return self.Omega <= self.bound_thm24 * (1.0 + DOMINANCE_RTOL)

    def violations(self, which='thm22'):
        """Indices of times whose hypotheses all hold but whose bound is exceeded."""
        dominated = self.dominated_thm22 if which == 'thm22' else self.dominated_thm24
        bound = self.bound_thm22 if which == 'thm22' else self.bound_thm24
        return np.flatnonzero(self.hypotheses_ok & ~dominated & np.isfinite(bound))

    def failed_flags(self, index):
        names = ('kappa_ok', 'tau_ok', 'endpoint_ok', 'c0_ok', 'endpoint_at_max')
        return [name for name in names if not getattr(self, name)[index]]

    def rows(self):
        dominated22 = self.dominated_thm22
        dominated24 = self.dominated_thm24
        for i in range(self.times.size):
            yield (self.times[i], self.Omega[i], self.bound_thm22[i], self.bound_thm24[i],
                   self.bkm_integral[i], self.kappa_ok[i], self.tau_ok[i], self.endpoint_ok[i],
                   self.c0_ok[i], self.endpoint_at_max[i], dominated22[i], dominated24[i])

    csv_columns = ENVELOPE_COLUMNS


def _base_envelope(data, constants):
    times = _float_column(data, 'time')
    omega = _float_column(data, 'Omega')
    omega_l = _float_column(data, 'Omega_L')
    v = _float_column(data, 'V')
    c0_big = np.array([c.C0 for c in constants])
    c0_small = np.array([c.c0 for c in constants])
    cl = np.array([c.Cl for c in constants])
    notes = []
    ends = _float_column(data, 'omega_end') if 'omega_end' in data else np.full(times.size, np.nan)
    at_max = np.abs(ends - omega_l) <= ENDPOINT_MATCH_RTOL * omega_l
    if not np.all(np.isfinite(ends)):
        notes.append('|w| at s = L is unknown for some times; endpoint_at_max is false there')
    speed = _float_column(data, 'endpoint_speed')
    slack = 1.0 + DOMINANCE_RTOL
    envelope = GrowthEnvelope(
        times=times, Omega=omega,
        bound_thm22=np.full(times.size, np.nan), bound_thm24=np.full(times.size, np.nan),
        bkm_integral=cumulative_trapezoid(omega, times, initial=0.0),
        kappa_ok=_float_column(data, 'int_kappa') <= c0_big * slack,
        tau_ok=_float_column(data, 'int_tau') <= c0_big * slack,
        endpoint_ok=np.isfinite(speed) & (speed <= cl * v * slack + 1e-300),
        c0_ok=_float_column(data, 'c0_measured') >= c0_small / slack,
        endpoint_at_max=at_max, constants=constants, notes=notes)
    return envelope


def thm22_envelope(diagnostics, overrides=None):
    """``Omega(t) <= Q(T0)/c0 exp(C0 + int (C_V V + C_U U)/L)`` with running constants."""
    data, constants = measured_constants(diagnostics, overrides)
    envelope = _base_envelope(data, constants)
    times = envelope.times
    lengths = _float_column(data, 'L')
    i_v = cumulative_trapezoid(_float_column(data, 'V') / lengths, times, initial=0.0)
    i_u = cumulative_trapezoid(_float_column(data, 'U') / lengths, times, initial=0.0)
    q0 = float(_float_column(data, 'Q')[0])
    envelope.bound_thm22 = np.array([q0 / c.c0 * math.exp(c.C0 + c.CV * iv + c.CU * iu)
                                     for c, iv, iu in zip(constants, i_v, i_u)])
    if envelope.hypotheses_violated:
        bad = np.flatnonzero(~envelope.hypotheses_ok)
        envelope.notes.append(f'hypotheses_violated at {bad.size} of {times.size} times, first at '
                              f't={times[bad[0]]!r}: {", ".join(envelope.failed_flags(bad[0]))}')
    return envelope


def thm24_envelope(diagnostics, overrides=None):
    """Double-exponential envelope ``exp(log(C1 Q(T0)/c0) exp(int C/L))``, ``C = Cu max(C_U, C_V)``.

    With ``overrides.L0`` the integral becomes ``(t - T0)/L0``. Skipped
    (all NaN, with a note) when ``Omega <= e`` somewhere on the window.
    """
    overrides = overrides or BoundOverrides()
    data, constants = measured_constants(diagnostics, overrides)
    envelope = _base_envelope(data, constants)
    times = envelope.times
    if np.any(envelope.Omega <= math.e):
        envelope.notes.append('Omega <= e on the window; the double-exponential envelope is skipped')
        logger.info('skipping the double-exponential envelope: Omega <= e on the window')
        return envelope
    if overrides.L0 is not None:
        inverse_length = (times - times[0]) / overrides.L0
    else:
        inverse_length = cumulative_trapezoid(1.0 / _float_column(data, 'L'), times, initial=0.0)
    q0 = float(_float_column(data, 'Q')[0])
    bounds = []
    for c, integral in zip(constants, inverse_length):
        if not math.isfinite(c.Cu):
            bounds.append(math.nan)
            continue
        with np.errstate(over='ignore'):
            bounds.append(float(np.exp(math.log(c.C1 * q0 / c.c0) * np.exp(c.C * integral))))
    envelope.bound_thm24 = np.array(bounds)
    return envelope


def growth_envelope(diagnostics, overrides=None):
    """Both envelopes, the BKM integral and the flags in one GrowthEnvelope."""
    first = thm22_envelope(diagnostics, overrides)
    second = thm24_envelope(diagnostics, overrides)
    first.bound_thm24 = second.bound_thm24
    first.notes.extend(note for note in second.notes if note not in first.notes)
    return first


@attr.s(frozen=True)
class QEnvelope(object):
    """``Q(t) <= Q(T0) exp(int (C_V V + C_U U)/L)`` and the chain ``Omega <= Omega_L/c0 <= C1 Q/c0``."""

    times = attr.ib()
    Q = attr.ib()
    bound = attr.ib()
    dominated = attr.ib()
    chain_ok = attr.ib()


def q_envelope(diagnostics, overrides=None):
    data, constants = measured_constants(diagnostics, overrides)
    times = _float_column(data, 'time')
    lengths = _float_column(data, 'L')
    q = _float_column(data, 'Q')
    i_v = cumulative_trapezoid(_float_column(data, 'V') / lengths, times, initial=0.0)
    i_u = cumulative_trapezoid(_float_column(data, 'U') / lengths, times, initial=0.0)
    bound = np.array([q[0] * math.exp(c.CV * iv + c.CU * iu) for c, iv, iu in zip(constants, i_v, i_u)])
    slack = 1.0 + DOMINANCE_RTOL
    c0 = np.array([c.c0 for c in constants])
    c1 = np.array([c.C1 for c in constants])
    omega = _float_column(data, 'Omega')
    omega_l = _float_column(data, 'Omega_L')
    chain = (omega <= omega_l / c0 * slack) & (omega_l <= c1 * q * slack)
    return QEnvelope(times=times, Q=q, bound=bound, dominated=q <= bound * slack, chain_ok=chain)


def integrate_growth_inequality(times, lengths, C, Q0, C1, c0):
    """Integrate ``dy/dt = (C/L) y`` for ``y = log Q + log(C1/c0)`` and return ``(numeric, closed_form)``.

    Both are bounds on ``Omega``, ``exp(y)``; ``C`` may be a constant or an
    array over ``times``. ``C/L`` is taken piecewise linear in time.
    """
    times = np.asarray(times, dtype=np.float64)
    rate = np.broadcast_to(np.asarray(C, dtype=np.float64), times.shape) / np.asarray(lengths, dtype=np.float64)
    y0 = math.log(Q0) + math.log(C1 / c0)
    closed = y0 * np.exp(cumulative_trapezoid(rate, times, initial=0.0))
    if times.size == 1:
        return np.exp([y0]), np.exp(closed)
    solution = solve_ivp(lambda t, y: np.interp(t, times, rate) * y, (times[0], times[-1]), [y0],
                         t_eval=times, rtol=1e-11, atol=1e-13, max_step=float(np.min(np.diff(times))))
    if not solution.success:
        raise SegmentError(f'growth inequality integration failed: {solution.message}')
    return np.exp(solution.y[0]), np.exp(closed)


# Critical case

@attr.s(frozen=True)
class CriticalCaseReport(object):
    """What the critical-case monitor found on a window."""

    T = attr.ib()
    T_fitted = attr.ib()
    times = attr.ib()
    ratio = attr.ib()
    sup_ratio = attr.ib()
    Cw = attr.ib()
    p = attr.ib()
    amplitude = attr.ib()
    bkm_window = attr.ib()
    bkm_tail = attr.ib()
    divergent = attr.ib()
    velocity_integral = attr.ib()
    scaling_A = attr.ib()
    scaling_Cv = attr.ib()
    scaling_CL = attr.ib()
    scaling_ok = attr.ib()

    @property
    def bkm_integral(self):
        return self.bkm_window + self.bkm_tail

    @property
    def ratio_ok(self):
        """``sup r <= Cw`` with ``Cw < 1``; None when no ``Cw`` was given."""
        if not math.isfinite(self.Cw):
            return None
        return bool(self.Cw < 1.0 and self.sup_ratio <= self.Cw)


def fit_singular_time(times, omega):
    """Fit ``Omega = A (T - t)^(-p)`` with ``T`` free; returns ``(T, p, A)``."""
    times = np.asarray(times, dtype=np.float64)
    log_omega = np.log(np.asarray(omega, dtype=np.float64))
    if times.size < 4:
        raise SegmentError('fitting T needs at least four times')
    end = times[-1]
    span = end - times[0]

    def model(t, log_a, p, log_gap):
        return log_a - p * np.log(end + np.exp(log_gap) - t)

    try:
        params, _ = curve_fit(model, times, log_omega, p0=(log_omega[-1], 0.5, math.log(0.1 * span)),
                              maxfev=20000)
    except (RuntimeError, ValueError) as err:
        raise SegmentError(f'could not fit a singular time: {err}') from err
    log_a, p, log_gap = params
    return end + math.exp(log_gap), float(p), math.exp(log_a)


def critical_case_monitor(diagnostics, constants, T=None):
    """Ratio ``r(t) = (C_V V + C_U U)(T - t)/L``, the ``(T - t)^(-p)`` fit of ``Omega`` and BKM integral.

    ``constants`` supplies ``CV``, ``CU`` and ``Cw``; ``T`` is fitted when
    not given. A candidate ``T`` at or before the window end is rejected.
    """
    data = columns(diagnostics)
    times = _float_column(data, 'time')
    omega = _float_column(data, 'Omega')
    if times.size < 2:
        raise SegmentError('the critical-case monitor needs at least two times')
    fitted = T is None
    if fitted:
        T, _, _ = fit_singular_time(times, omega)
    if T <= times[-1]:
        raise SegmentError(f'candidate singular time T={T!r} is not after the window end t={times[-1]!r}')
    gap = T - times
    v = _float_column(data, 'V')
    u = _float_column(data, 'U')
    lengths = _float_column(data, 'L')
    ratio = (constants.CV * v + constants.CU * u) * gap / lengths
    slope, intercept = np.polyfit(np.log(gap), np.log(omega), 1)
    p = -float(slope)
    amplitude = math.exp(intercept)
    bkm_window = float(trapezoid(omega, times))
    if p >= 1.0:
        bkm_tail, divergent = math.inf, True
    else:
        bkm_tail, divergent = amplitude * gap[-1] ** (1.0 - p) / (1.0 - p), False
    velocity = float(trapezoid(_float_column(data, 'u_max'), times)) if 'u_max' in data else math.nan

    # V, U <= Cv (T-t)^-A and L >= CL (T-t)^(1-A)
    speed = np.maximum(v, u)
    if np.all(speed > 0.0):
        a_slope, _ = np.polyfit(np.log(gap), np.log(speed), 1)
        exponent = -float(a_slope)
        cv = float(np.max(speed * gap ** exponent))
        cl = float(np.min(lengths / gap ** (1.0 - exponent)))
        scaling_ok = bool(cv * (constants.CU + constants.CV) < cl)
    else:
        exponent, cv, cl, scaling_ok = math.nan, 0.0, float(np.min(lengths)), True
    report = CriticalCaseReport(T=float(T), T_fitted=fitted, times=times, ratio=ratio,
                                sup_ratio=float(np.max(ratio)), Cw=constants.Cw, p=p, amplitude=amplitude,
                                bkm_window=bkm_window, bkm_tail=bkm_tail, divergent=divergent,
                                velocity_integral=velocity, scaling_A=exponent, scaling_Cv=cv,
                                scaling_CL=cl, scaling_ok=scaling_ok)
    logger.info('critical case: T=%.6g%s, sup r=%.3g, p=%.3f, BKM %s', report.T,
                ' (fitted)' if fitted else '', report.sup_ratio, p, 'divergent' if divergent else 'finite')
    return report

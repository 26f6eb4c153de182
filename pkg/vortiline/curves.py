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


"""Vortex lines, level-set curves and their geometry.

A curve follows the unit direction ``xi = w / |w|`` of a line field ``w``:
the vorticity in 3D, ``grad-perp theta`` in 2D. Curves are stored as
arclength samples whose consecutive chords equal the ``s`` increments
exactly, together with a material label ``beta`` (arclength at the
reference time) that survives advection.

Curvature and ``tau = div xi`` are taken from the gradient tensor of the
unnormalised field, ``G = grad w``::

    xi . grad xi = (G xi - xi (xi . G xi)) / |w|
    div xi       = (tr G - xi . G xi) / |w|

so nothing is differentiated after normalisation.
"""

import logging
import math

import attr
import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from .constants import (DIAGNOSTICS_COLUMNS, DIRECTION_FLOOR, FLAG_NORMAL_UNDEFINED,
                        FLAG_UNRESOLVED, FLAG_UNTRUSTED, MIN_CURVATURE_RADIUS,
                        NORMAL_UNDEFINED_KAPPA, SAMPLE_SPACING, SAMPLE_SPACING_MAX,
                        SAMPLE_SPACING_MIN, TRACE_MAX_STEP, TRACE_MAX_STEPS,
                        TRACE_STOP_FRACTION, UNTRUSTED_DISPLACEMENT)
from .errors import SegmentError
from .fields import ScalarField, VectorField, gradient_tensor, perp_gradient
from .interpolation import FieldInterpolator
from .series import curve_columns, write_csv

logger = logging.getLogger(__name__)

ORIENTATIONS = ('max_at_end', 'centered', 'forward', 'backward')


def line_vector(field):
    """The traced field: ``grad-perp theta`` for a 2D scalar, the field itself otherwise."""
    if isinstance(field, ScalarField):
        if field.grid.dim != 2:
            raise SegmentError('only 2D scalar fields have level-set curves')
        return perp_gradient(field)
    return field


class VectorSampler(object):
    """Point evaluation of a vector field and, on demand, its gradient tensor."""

    def __init__(self, field, method='auto'):
        if isinstance(field, VectorSampler):
            field = field.field
        self.field = line_vector(field)
        self.grid = self.field.grid
        self.method = method
        self.max_magnitude = self.field.max_magnitude()
        self._values = FieldInterpolator(self.field, method=method)
        self._gradients = None

    def values(self, points):
        return self._values(points)

    def gradients(self, points):
        """``out[p, i, j] = d w_i / d x_j`` at each point."""
        if self._gradients is None:
            rows = [VectorField(self.grid, row) for row in gradient_tensor(self.field)]
            self._gradients = FieldInterpolator(rows, method=self.method)
        dim = self.grid.dim
        return self._gradients(points).reshape(-1, dim, dim)

    def argmax(self):
        return self.field.magnitude().argmax_abs()


def sampler(field, method='auto'):
    return field if isinstance(field, VectorSampler) else VectorSampler(field, method)


def chord_arclength(points):
    chords = np.sqrt(np.sum(np.diff(points, axis=0) ** 2, axis=1))
    return np.concatenate(([0.0], np.cumsum(chords)))


def _positive_increments(instance, attribute, value):
    if value.ndim != 1 or value.size < 2:
        raise SegmentError('a curve needs at least two samples')
    if value[0] != 0.0 or np.any(np.diff(value) <= 0.0):
        raise SegmentError('arclength must start at 0 and increase strictly')


def _array(value):
    return np.array(value, dtype=np.float64)


@attr.s(frozen=True, eq=False)
class CurveSegment(object):
    """Arclength-sampled curve ``x(s)`` with material labels.

    ``sign`` fixes the orientation: the tangent ``dx/ds`` is
    ``sign * w / |w|``. ``omega_ref`` holds ``|w|`` at the reference time
    for each sample, carried along with ``beta``.
    """

    points = attr.ib(converter=_array)
    s = attr.ib(converter=_array, validator=_positive_increments)
    beta = attr.ib(converter=_array)
    time = attr.ib(converter=float)
    h = attr.ib(converter=float)
    material_id = attr.ib()
    reference_time = attr.ib(converter=float)
    omega_ref = attr.ib(converter=_array)
    sign = attr.ib(default=1)
    resolved = attr.ib(default=True)
    trusted = attr.ib(default=None)

    def __attrs_post_init__(self):
        count = self.s.size
        if self.points.shape[0] != count or self.beta.size != count or self.omega_ref.size != count:
            raise SegmentError('points, s, beta and omega_ref must have one entry per sample')
        if self.sign not in (1, -1):
            raise SegmentError(f'orientation sign must be +1 or -1, got {self.sign}')
        trusted = np.ones(count, dtype=bool) if self.trusted is None else np.asarray(self.trusted, dtype=bool)
        object.__setattr__(self, 'trusted', trusted)

    @property
    def length(self):
        return float(self.s[-1])

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.s.size

    def spacing_ok(self):
        step = np.diff(self.s)
        return bool(np.all(step >= SAMPLE_SPACING_MIN * self.h * (1 - 1e-9))
                    and np.all(step <= SAMPLE_SPACING_MAX * self.h * (1 + 1e-9)))

    def flags(self):
        flags = np.where(self.trusted, 0, FLAG_UNTRUSTED)
        if not self.resolved:
            flags = flags | FLAG_UNRESOLVED
        return flags


# Tracing

def _rk4_point(rhs, x, ds):
    k1 = rhs(x)
    k2 = rhs(x + 0.5 * ds * k1)
    k3 = rhs(x + 0.5 * ds * k2)
    k4 = rhs(x + ds * k3)
    return x + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _trace_side(field, seed, direction, length, tolerance, floor):
    """Integrate ``dx/ds = direction * xi`` from ``seed`` with step doubling.

    Returns raw points, their arclengths and ``|w|`` at each; stops at
    ``length`` or once ``|w| < floor``.
    """
    h = field.grid.min_spacing
    step_max = TRACE_MAX_STEP * h

    def rhs(x):
        w = field.values(x[None, :])[0]
        norm = np.sqrt(np.dot(w, w))
        return direction * w / norm if norm > 0.0 else np.zeros_like(w)

    x = np.array(seed, dtype=np.float64)
    arc = 0.0
    ds = step_max
    points, arcs = [x], [0.0]
    mags = [float(np.linalg.norm(field.values(x[None, :])[0]))]
    for _ in range(TRACE_MAX_STEPS):
        remaining = length - arc
        if remaining <= 1e-12 * max(length, 1.0):
            break
        ds = min(ds, remaining)
        full = _rk4_point(rhs, x, ds)
        half = _rk4_point(rhs, _rk4_point(rhs, x, 0.5 * ds), 0.5 * ds)
        error = float(np.linalg.norm(full - half))
        if error > tolerance:
            if ds < 1e-6 * h:
                logger.warning('trace step underflow at s=%.6g; stopping', arc)
                break
            ds *= 0.5
            continue
        magnitude = float(np.linalg.norm(field.values(half[None, :])[0]))
        if magnitude < floor:
            break
        x = half
        arc += ds
        points.append(x)
        arcs.append(arc)
        mags.append(magnitude)
        if error < tolerance / 32.0:
            ds = min(2.0 * ds, step_max)
    else:
        logger.warning('trace stopped after %d steps at s=%.6g', TRACE_MAX_STEPS, arc)
    return np.array(points), np.array(arcs), np.array(mags)


def _uniform_samples(length, h):
    if length < SAMPLE_SPACING_MIN * h:
        raise SegmentError(f'traced curve is only {length:.3g} long, shorter than '
                           f'{SAMPLE_SPACING_MIN} grid spacings')
    count = max(1, int(math.ceil(length / (SAMPLE_SPACING * h))))
    return np.linspace(0.0, length, count + 1)


def _truncate_curved(spline, sigma, seed_index, h):
    """Drop samples beyond the first whose curvature radius is below ``MIN_CURVATURE_RADIUS * h``."""
    kappa = np.linalg.norm(spline(sigma, 2), axis=1)
    bad = kappa > 1.0 / (MIN_CURVATURE_RADIUS * h)
    if not np.any(bad):
        return sigma, True
    lo = hi = seed_index
    while lo > 0 and not bad[lo - 1]:
        lo -= 1
    while hi < sigma.size - 1 and not bad[hi + 1]:
        hi += 1
    if hi == lo:
        hi = min(lo + 1, sigma.size - 1)
        lo = hi - 1
    logger.warning('curvature radius below %.3g near the seed; keeping s in [%.4g, %.4g] of %.4g',
                   MIN_CURVATURE_RADIUS * h, sigma[lo], sigma[hi], sigma[-1])
    return sigma[lo:hi + 1], False


def trace_segment(field, seed=None, target_length=1.0, orientation='max_at_end', *, time=0.0,
                  tolerance=1e-8, method='auto', material_id=None):
    """Trace a vortex line (3D) or level-set curve (2D) through ``seed``.

    ``field`` is the vorticity, a 2D theta, a ``grad-perp theta`` field or
    a prepared VectorSampler; ``seed`` defaults to the grid argmax of
    ``|w|``. Orientations:

    - ``max_at_end``: one side of length ``target_length`` ending at the
      seed, so ``|w(x(L))|`` is the seed value;
    - ``centered``: half the length on each side of the seed;
    - ``forward`` / ``backward``: from the seed along ``+xi`` / ``-xi``.

    Tracing on a side stops early where ``|w|`` falls below
    ``TRACE_STOP_FRACTION`` of the seed value.
    """
    if orientation not in ORIENTATIONS:
        raise SegmentError(f'unknown orientation {orientation!r}, expected one of {", ".join(ORIENTATIONS)}')
    if not target_length > 0.0:
        raise SegmentError(f'target length must be positive, got {target_length}')
    field = sampler(field, method)
    grid = field.grid
    h = grid.min_spacing
    if seed is None:
        seed = field.argmax()
    seed = np.asarray(seed, dtype=np.float64)
    if seed.shape != (grid.dim,):
        raise SegmentError(f'seed must have {grid.dim} coordinates, got {seed.shape}')
    seed_mag = float(np.linalg.norm(field.values(seed[None, :])[0]))
    if seed_mag <= DIRECTION_FLOOR * field.max_magnitude:
        raise SegmentError(f'|w| = {seed_mag:.3e} at the seed is below {DIRECTION_FLOOR:.0e} of '
                           f'max|w| = {field.max_magnitude:.3e}; the direction is undefined')
    floor = TRACE_STOP_FRACTION * seed_mag

    def side(direction, length):
        return _trace_side(field, seed, direction, length, tolerance, floor)

    if orientation == 'centered':
        back, back_s, _ = side(-1.0, 0.5 * target_length)
        ahead, ahead_s, _ = side(1.0, 0.5 * target_length)
        points = np.concatenate((back[::-1], ahead[1:]))
        arcs = np.concatenate((back_s[-1] - back_s[::-1], back_s[-1] + ahead_s[1:]))
        seed_arc, sign = back_s[-1], 1
    elif orientation == 'forward':
        points, arcs, _ = side(1.0, target_length)
        seed_arc, sign = 0.0, 1
    elif orientation == 'backward':
        points, arcs, _ = side(-1.0, target_length)
        seed_arc, sign = 0.0, -1
    else:
        ahead, ahead_s, ahead_m = side(1.0, target_length)
        back, back_s, back_m = side(-1.0, target_length)
        if np.mean(ahead_m) > np.mean(back_m):
            points, arcs, sign = ahead[::-1], ahead_s[-1] - ahead_s[::-1], -1
        else:
            points, arcs, sign = back[::-1], back_s[-1] - back_s[::-1], 1
        seed_arc = arcs[-1]
    if points.shape[0] < 2:
        raise SegmentError('tracing stopped at the seed; |w| drops too fast around it')

    spline = CubicSpline(arcs, points, axis=0)
    sigma = _uniform_samples(arcs[-1], h)
    seed_index = int(np.argmin(np.abs(sigma - seed_arc)))
    sigma, resolved = _truncate_curved(spline, sigma, seed_index, h)
    samples = spline(sigma)
    s = chord_arclength(samples)
    if material_id is None:
        material_id = 'line@' + ','.join(f'{c:.6g}' for c in seed) + f'/t={time:.6g}'
    magnitudes = np.linalg.norm(field.values(samples), axis=1)
    logger.debug('traced %s: %d samples, L=%.6g', material_id, s.size, s[-1])
    return CurveSegment(points=samples, s=s, beta=s.copy(), time=time, h=h, material_id=material_id,
                        reference_time=time, omega_ref=magnitudes, sign=sign, resolved=resolved)


def reseed(field, target_length=1.0, orientation='max_at_end', *, time=0.0, tolerance=1e-8,
           method='auto'):
    """Start a new material family at the current global maximum of ``|w|``."""
    field = sampler(field, method)
    return trace_segment(field, None, target_length, orientation, time=time, tolerance=tolerance,
                         material_id=f'reseed@t={time:.6g}')


# Material transport

def advect_points(points, velocities, dt, substeps=1):
    """Move points with Heun's method, velocity linear in time between the two snapshots."""
    u_start, u_end = velocities
    x = np.array(points, dtype=np.float64)
    step = dt / substeps

    def velocity(p, a):
        if a == 0.0:
            return u_start.values(p)
        if a == 1.0:
            return u_end.values(p)
        return (1.0 - a) * u_start.values(p) + a * u_end.values(p)

    for k in range(substeps):
        a0, a1 = k / substeps, (k + 1) / substeps
        v0 = velocity(x, a0)
        v1 = velocity(x + step * v0, a1)
        x = x + 0.5 * step * (v0 + v1)
    return x


def advect_segment(segment, velocity_snapshots, dt, *, line_field=None, substeps=1, resample=True,
                   method='auto'):
    """Carry ``segment`` from ``t`` to ``t + dt`` with the flow.

    ``velocity_snapshots`` holds ``u`` at ``t`` and ``t + dt``. Samples
    that move more than ``UNTRUSTED_DISPLACEMENT`` grid spacings, or land
    where ``|w|`` (from ``line_field`` at ``t + dt``, when given) is below
    ``1e-6`` of its maximum, are marked untrusted. With ``resample`` the
    curve is re-sampled at the same relative arclength positions (a fresh
    uniform sampling when the spacing leaves ``[0.25 h, h]``) and ``beta``
    and ``omega_ref`` are interpolated along.
    """
    u_start, u_end = (sampler(u, method) for u in velocity_snapshots)
    moved = advect_points(segment.points, (u_start, u_end), dt, substeps)
    h = segment.h
    trusted = segment.trusted.copy()
    displacement = np.linalg.norm(moved - segment.points, axis=1)
    trusted &= displacement <= UNTRUSTED_DISPLACEMENT * h
    if line_field is not None:
        w = sampler(line_field, method)
        magnitude = np.linalg.norm(w.values(moved), axis=1)
        trusted &= magnitude >= DIRECTION_FLOOR * w.max_magnitude
    if not np.all(trusted):
        logger.warning('%s: %d of %d samples left the trust region by t=%.6g', segment.material_id,
                       int(np.sum(~trusted)), trusted.size, segment.time + dt)
    s_moved = chord_arclength(moved)
    if np.any(np.diff(s_moved) <= 0.0):
        raise SegmentError(f'{segment.material_id}: material samples collapsed onto each other')
    common = dict(time=segment.time + dt, h=h, material_id=segment.material_id,
                  reference_time=segment.reference_time, sign=segment.sign,
                  resolved=segment.resolved)
    if not resample:
        return CurveSegment(points=moved, s=s_moved, beta=segment.beta, omega_ref=segment.omega_ref,
                            trusted=trusted, **common)
    sigma = segment.s * (s_moved[-1] / segment.length)
    spline = CubicSpline(s_moved, moved, axis=0)
    points = spline(sigma)
    steps = np.diff(chord_arclength(points))
    if np.any(steps < SAMPLE_SPACING_MIN * h) or np.any(steps > SAMPLE_SPACING_MAX * h):
        sigma = _uniform_samples(s_moved[-1], h)
        points = spline(sigma)
        logger.info('%s: resampled to %d samples at t=%.6g', segment.material_id, sigma.size,
                    segment.time + dt)
    left = np.clip(np.searchsorted(s_moved, sigma, side='right') - 1, 0, s_moved.size - 2)
    return CurveSegment(points=points, s=chord_arclength(points),
                        beta=CubicSpline(s_moved, segment.beta)(sigma),
                        omega_ref=CubicSpline(s_moved, segment.omega_ref)(sigma),
                        trusted=trusted[left] & trusted[left + 1], **common)


@attr.s(frozen=True)
class StretchCheck(object):
    """Measured ``ds/dbeta`` ratios against the ``|w|`` ratios they should equal, per chord."""

    measured = attr.ib()
    predicted = attr.ib()

    @property
    def relative_error(self):
        return np.abs(self.measured - self.predicted) / np.abs(self.predicted)

    @property
    def max_relative_error(self):
        return float(np.max(self.relative_error))


def material_stretch(segment, velocity_snapshots, dt, line_fields, *, substeps=1, method='auto'):
    """Check that material chords stretch like ``|w|`` over one advection step.

    ``line_fields`` holds ``w`` at ``t`` and ``t + dt``. The chord ratio
    ``|dX(t+dt)| / |dx(t)|`` of neighbouring material points is compared
    with the endpoint-mean ratio ``|w(X, t+dt)| / |w(x, t)|``.
    """
    w_start, w_end = (sampler(w, method) for w in line_fields)
    velocities = tuple(sampler(u, method) for u in velocity_snapshots)
    moved = advect_points(segment.points, velocities, dt, substeps)
    before = np.linalg.norm(np.diff(segment.points, axis=0), axis=1)
    after = np.linalg.norm(np.diff(moved, axis=0), axis=1)
    mag_start = np.linalg.norm(w_start.values(segment.points), axis=1)
    mag_end = np.linalg.norm(w_end.values(moved), axis=1)
    predicted = (mag_end[:-1] + mag_end[1:]) / (mag_start[:-1] + mag_start[1:])
    return StretchCheck(measured=after / before, predicted=predicted)


# Diagnostics

@attr.s(frozen=True, eq=False)
class DiagnosticSamples(object):
    """Per-sample geometry and kinematics along a segment.

    ``kappa_u_perp`` is ``kappa * (u . xi_perp)``, which stays defined
    where the normal is not. ``alpha`` is the stretching rate
    ``xi . grad u . xi`` from the velocity gradient; ``alpha_curve`` the
    same rate from ``d(u . xi)/ds - kappa u . xi_perp``.
    """

    s = attr.ib()
    beta = attr.ib()
    points = attr.ib()
    omega_mag = attr.ib()
    xi = attr.ib()
    xi_perp = attr.ib()
    kappa = attr.ib()
    tau = attr.ib()
    u = attr.ib()
    u_xi = attr.ib()
    u_xi_perp = attr.ib()
    kappa_u_perp = attr.ib()
    alpha = attr.ib()
    alpha_curve = attr.ib()
    flags = attr.ib()

    def rows(self):
        for i in range(self.s.size):
            yield ((self.s[i], self.beta[i]) + tuple(self.points[i])
                   + (self.omega_mag[i], self.kappa[i], self.tau[i], self.u_xi[i],
                      self.u_xi_perp[i], self.alpha[i], int(self.flags[i])))


@attr.s(frozen=True)
class SegmentDiagnostics(object):
    time = attr.ib()
    material_id = attr.ib()
    L = attr.ib()
    Q = attr.ib()
    int_kappa = attr.ib()
    int_tau = attr.ib()
    U = attr.ib()
    V = attr.ib()
    Omega_L = attr.ib()
    Omega = attr.ib()
    c0_measured = attr.ib()
    endpoint_speed = attr.ib()
    u_max = attr.ib()
    cu_ratio = attr.ib()
    resolved = attr.ib()
    inviscid = attr.ib()
    omega_end = attr.ib(default=math.nan)

    def row(self):
        return tuple(getattr(self, name) for name in DIAGNOSTICS_COLUMNS)

    @classmethod
    def from_row(cls, row):
        """Rebuild from a ``diagnostics.csv`` mapping of column to value."""
        values = {name: row[name] for name in DIAGNOSTICS_COLUMNS}
        values['material_id'] = str(values['material_id'])
        values['resolved'] = bool(values['resolved'])
        values['inviscid'] = bool(values['inviscid'])
        return cls(**values)


def diagnose_segment(segment, omega, u, *, endpoint_velocity=None, resolved=True, inviscid=True,
                     method='auto'):
    """Geometry along ``segment`` and its summary record.

    ``omega`` is the line field (vorticity, theta or ``grad-perp theta``)
    and ``u`` the velocity at the segment's time; either may be a prepared
    VectorSampler. ``endpoint_velocity`` is ``dx(0,t)/dt`` of the ``s = 0``
    end, when known. Returns ``(SegmentDiagnostics, DiagnosticSamples)``.
    """
    w_field = sampler(omega, method)
    u_field = sampler(u, method)
    if w_field.grid != u_field.grid:
        raise SegmentError('line field and velocity live on different grids')
    points = segment.points
    w = segment.sign * w_field.values(points)
    grad_w = segment.sign * w_field.gradients(points)
    magnitude = np.linalg.norm(w, axis=1)
    if np.any(magnitude <= 0.0):
        raise SegmentError(f'{segment.material_id}: |w| vanishes on the curve')
    xi = w / magnitude[:, None]
    g_xi = np.einsum('pij,pj->pi', grad_w, xi)
    xi_g_xi = np.einsum('pi,pi->p', xi, g_xi)
    kappa_vec = (g_xi - xi * xi_g_xi[:, None]) / magnitude[:, None]
    kappa = np.linalg.norm(kappa_vec, axis=1)
    undefined = kappa < NORMAL_UNDEFINED_KAPPA
    kappa = np.where(undefined, 0.0, kappa)
    xi_perp = np.where(undefined[:, None], 0.0, kappa_vec / np.where(undefined, 1.0, kappa)[:, None])
    tau = (np.trace(grad_w, axis1=1, axis2=2) - xi_g_xi) / magnitude

    velocity = u_field.values(points)
    grad_u = u_field.gradients(points)
    u_xi = np.einsum('pi,pi->p', velocity, xi)
    u_xi_perp = np.einsum('pi,pi->p', velocity, xi_perp)
    kappa_u_perp = np.where(undefined, 0.0, np.einsum('pi,pi->p', velocity, kappa_vec))
    alpha = np.einsum('pi,pij,pj->p', xi, grad_u, xi)
    alpha_curve = np.gradient(u_xi, segment.s) - kappa_u_perp

    flags = segment.flags() | np.where(undefined, FLAG_NORMAL_UNDEFINED, 0)
    if not np.all(segment.trusted):
        logger.warning('%s: diagnosing %d untrusted samples', segment.material_id,
                       int(np.sum(~segment.trusted)))
    samples = DiagnosticSamples(s=segment.s, beta=segment.beta, points=points, omega_mag=magnitude,
                                xi=xi, xi_perp=xi_perp, kappa=kappa, tau=tau, u=velocity, u_xi=u_xi,
                                u_xi_perp=u_xi_perp, kappa_u_perp=kappa_u_perp, alpha=alpha,
                                alpha_curve=alpha_curve, flags=flags)

    length = segment.length
    omega_l = float(np.max(magnitude))
    omega_max = max(w_field.max_magnitude, omega_l)
    speed = np.linalg.norm(velocity, axis=1)
    u_max = float(np.max(speed))
    if endpoint_velocity is None:
        endpoint_speed = math.nan
    else:
        endpoint_speed = abs(float(np.dot(endpoint_velocity, xi[0])))
    cu_ratio = u_max / math.log(omega_max) if omega_max > math.e else math.nan
    diagnostics = SegmentDiagnostics(
        time=segment.time, material_id=segment.material_id, L=length,
        Q=float(trapezoid(magnitude, segment.s) / length),
        int_kappa=float(trapezoid(kappa, segment.s)),
        int_tau=float(trapezoid(np.abs(tau), segment.s)),
        U=float(np.max(np.abs(u_xi_perp))), V=float(np.max(np.abs(u_xi))),
        Omega_L=omega_l, Omega=omega_max, c0_measured=omega_l / omega_max,
        endpoint_speed=endpoint_speed, u_max=u_max, cu_ratio=cu_ratio,
        resolved=bool(resolved and segment.resolved and np.all(segment.trusted)),
        inviscid=bool(inviscid), omega_end=float(magnitude[-1]))
    return diagnostics, samples


def write_curve(path, samples):
    """Curve dump: ``s, beta, x, y[, z], omega_mag, kappa, tau, u_xi, u_xi_perp, alpha, flags``."""
    write_csv(path, curve_columns(samples.points.shape[1]), samples.rows())


def tau_relation_residual(samples):
    """Checks of ``d|w|/ds = -tau |w|`` in integrated form.

    Returns ``(max_deviation, comparable)``: the largest relative deviation
    of ``|w(s)|`` from ``|w(0)| exp(-int_0^s tau)``, and whether
    ``max|w| <= exp(int |tau|) min|w|`` holds.
    """
    predicted = samples.omega_mag[0] * np.exp(-cumulative_trapezoid(samples.tau, samples.s, initial=0.0))
    deviation = float(np.max(np.abs(samples.omega_mag - predicted) / samples.omega_mag))
    bound = math.exp(float(trapezoid(np.abs(samples.tau), samples.s)))
    comparable = bool(np.max(samples.omega_mag) <= bound * np.min(samples.omega_mag) * (1 + 1e-12))
    return deviation, comparable


def alpha_consistency(samples):
    """Largest ``|alpha - alpha_curve|`` relative to ``max|alpha|`` (interior samples)."""
    inner = slice(1, -1) if samples.s.size > 2 else slice(None)
    scale = float(np.max(np.abs(samples.alpha[inner])))
    difference = float(np.max(np.abs(samples.alpha[inner] - samples.alpha_curve[inner])))
    return difference / scale if scale > 0.0 else difference


def hausdorff_distance(first, second, refine=16):
    """Symmetric Hausdorff distance between two sampled curves, measured to their splines.

    Each point of one curve is projected onto the cubic spline through the
    other (nearest of ``refine`` sub-samples per chord, then a bounded
    scalar minimisation), so sample placement does not count as distance.
    """
    def directed(points, other):
        arcs = chord_arclength(other)
        spline = CubicSpline(arcs, other, axis=0)
        dense_s = np.linspace(0.0, arcs[-1], refine * (arcs.size - 1) + 1)
        tree = cKDTree(spline(dense_s))
        _, nearest = tree.query(points)
        worst = 0.0
        step = dense_s[1] - dense_s[0]
        for point, index in zip(points, nearest):
            lo = max(0.0, dense_s[index] - step)
            hi = min(arcs[-1], dense_s[index] + step)
            result = minimize_scalar(lambda t: float(np.sum((spline(t) - point) ** 2)),
                                     bounds=(lo, hi), method='bounded',
                                     options={'xatol': 1e-12 * max(1.0, arcs[-1])})
            worst = max(worst, math.sqrt(max(result.fun, 0.0)))
        return worst

    first = np.asarray(first.points if isinstance(first, CurveSegment) else first)
    second = np.asarray(second.points if isinstance(second, CurveSegment) else second)
    return max(directed(first, second), directed(second, first))

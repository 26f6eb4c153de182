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


"""Synthetic Clebsch vorticity and the split Biot-Savart velocity.

A field ``omega = grad phi x grad psi = curl(phi grad psi)`` is built from
two level-set functions. ``phi`` has a ``tanh`` front of width ``1 / lambda``
across ``x1``; ``psi`` is a smooth wave with bounded gradient (or, for the
counterexample family, a second front across ``x3``).

The velocity at a point ``x`` is split with the cut-off ``chi`` into::

    I1  = near field, |y| < 2 delta, weight chi(|y| / delta)
    I3  = middle field, weight chi(|y| / rho) (1 - chi(|y| / delta))
        = C + D + E after integrating by parts against phi grad psi
    I4  = far field, weight 1 - chi(|y| / rho)
        = A + B after integrating by parts against u

``I1``, ``I3``, ``C``, ``D``, ``E`` and ``A`` are spherical quadratures
around ``x``; ``I4`` is evaluated spectrally with the exact complement of
the local kernel, so ``I1 + I3 + I4`` reproduces the periodic
Biot-Savart velocity.
"""

import logging
import math

import attr
import numpy as np
from scipy.special import roots_legendre, spherical_jn

from .constants import (APPENDIX_AZIMUTH_NODES, APPENDIX_COLUMNS, APPENDIX_MIN_POINTS_PER_WIDTH,
                        APPENDIX_MULTIPLIER_NODES, APPENDIX_NEAR_OVERSAMPLING, APPENDIX_POLAR_NODES,
                        APPENDIX_PROBE_HALF_LENGTH, APPENDIX_RADIAL_NODES, CHI_INNER, CHI_OUTER,
                        CLEBSCH_AMPLITUDE, CLEBSCH_BUMP_SHIFT, CLEBSCH_PROFILE_KAPPA,
                        CLEBSCH_REGION_HALFWIDTH, LOG_VELOCITY_SPREAD)
from .errors import SegmentError
from .fields import ScalarField, VectorField, biot_savart_3d, curl, gradient, spectral_ops
from .interpolation import FieldInterpolator

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-10
_MULTIPLIER_BATCH = 4096


# Cut-off profile

def chi(r):
    """Quintic smooth step: 1 for ``r <= 1``, 0 for ``r >= 2``, C2 in between."""
    t = np.clip((np.asarray(r, dtype=np.float64) - CHI_INNER) / (CHI_OUTER - CHI_INNER), 0.0, 1.0)
    return 1.0 - t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)


def chi_prime(r):
    r = np.asarray(r, dtype=np.float64)
    width = CHI_OUTER - CHI_INNER
    t = np.clip((r - CHI_INNER) / width, 0.0, 1.0)
    return -30.0 * t ** 2 * (1.0 - t) ** 2 / width


# Fields

def _bump(angle):
    return np.exp(CLEBSCH_PROFILE_KAPPA * (np.cos(angle) - 1.0))


def _as_box(value):
    lower, upper = value
    return (np.array(lower, dtype=np.float64), np.array(upper, dtype=np.float64))


@attr.s(frozen=True, eq=False)
class ClebschField(object):
    """A Clebsch pair, its vorticity and the region where splits are allowed."""

    phi = attr.ib()
    psi = attr.ib()
    omega = attr.ib()
    flux = attr.ib()  # phi grad psi
    region = attr.ib(converter=_as_box)
    sharpness = attr.ib(converter=float)
    amplitude = attr.ib(converter=float)
    sharpen_psi = attr.ib(default=False)
    psi_sharpness = attr.ib(default=None)
    identity_error = attr.ib(default=0.0)
    psi_gradient_max = attr.ib(default=0.0)
    phi_gradient_max = attr.ib(default=0.0)

    @property
    def grid(self):
        return self.omega.grid

    @property
    def Omega(self):
        return self.omega.max_magnitude()

    @property
    def flux_max(self):
        return self.flux.max_magnitude()

    @property
    def centre(self):
        return np.asarray(self.grid.length) / 2.0

    def contains_ball(self, x, radius):
        lower, upper = self.region
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(x - radius >= lower) and np.all(x + radius <= upper))


def _minimum_points(sharpness):
    # the front is 1 / lambda wide in the phase variable, so n / (2 pi lambda) points cover it
    needed = APPENDIX_MIN_POINTS_PER_WIDTH * 2.0 * math.pi * sharpness
    return 1 << max(int(math.ceil(math.log2(needed))), 0)


def psi_front_sharpness(grid, sharpness):
    """Sharpness of the ``psi`` front in the counterexample family.

    The x3 front gets the same number of grid points per width as the x1
    front, so it is ``lambda`` on grids with ``n3 >= n1`` and
    ``lambda n3 / n1`` otherwise.
    """
    return sharpness * min(1.0, grid.n[2] / grid.n[0])


def make_clebsch_family(grid, sharpness, amplitude=CLEBSCH_AMPLITUDE, *, sharpen_psi=False,
                        region_halfwidth=CLEBSCH_REGION_HALFWIDTH):
    """Member ``lambda = sharpness`` of the Clebsch family on a 3D grid.

    ``phi = a tanh(lambda sin(t1 - pi)) b(t2 - pi) b(t3 - pi - s)`` with the
    von Mises bump ``b`` and ``t_i = 2 pi x_i / L_i``; ``psi = sin(t3)``.
    With ``sharpen_psi`` set, ``psi = (lambda / mu) tanh(mu sin(t3 - pi))``
    with ``mu`` from :func:`psi_front_sharpness`, so ``max|grad psi| = lambda``
    across the family while the x3 front stays resolved. The line through
    the box centre along ``x2`` is a vortex line.
    """
    if grid.dim != 3:
        raise SegmentError(f'Clebsch fields need a 3D grid, got {grid.dim}D')
    if not math.isfinite(sharpness) or sharpness < 1.0:
        raise SegmentError(f'sharpness must be finite and >= 1, got {sharpness}')
    if not math.isfinite(amplitude) or amplitude < 0.0:
        raise SegmentError(f'amplitude must be finite and >= 0, got {amplitude}')
    psi_sharpness = psi_front_sharpness(grid, sharpness) if sharpen_psi else None
    fronts = [(0, sharpness)] + ([(2, psi_sharpness)] if sharpen_psi else [])
    for axis, front in fronts:
        if grid.n[axis] < APPENDIX_MIN_POINTS_PER_WIDTH * 2.0 * math.pi * front:
            raise SegmentError(f'sharpness {front} under-resolves the front along x{axis + 1}: '
                               f'grid has {grid.n[axis]} points, needs at least {_minimum_points(front)}')
    t1, t2, t3 = (2.0 * np.pi * x / extent for x, extent in zip(grid.mesh(), grid.length))
    phi = ScalarField(grid, amplitude * np.tanh(sharpness * np.sin(t1 - np.pi))
                      * _bump(t2 - np.pi) * _bump(t3 - np.pi - CLEBSCH_BUMP_SHIFT))
    if sharpen_psi:
        if psi_sharpness < sharpness:
            logger.info('psi front sharpness %.4g for lambda=%g on %d x3 points', psi_sharpness, sharpness,
                        grid.n[2])
        psi = ScalarField(grid, (sharpness / psi_sharpness) * np.tanh(psi_sharpness * np.sin(t3 - np.pi)))
    else:
        psi = ScalarField(grid, np.sin(t3))
    grad_phi = gradient(phi)
    grad_psi = gradient(psi)
    flux = VectorField(grid, [phi.values * g for g in grad_psi.components])
    omega = curl(flux)
    a, b = grad_phi.components, grad_psi.components
    product = VectorField(grid, [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])
    scale = omega.max_magnitude()
    error = (omega - product).max_magnitude() / scale if scale > 0.0 else 0.0
    if error > IDENTITY_TOLERANCE:
        logger.warning('curl(phi grad psi) differs from grad phi x grad psi by %.3e (relative)', error)
    centre = np.asarray(grid.length) / 2.0
    field = ClebschField(phi=phi, psi=psi, omega=omega, flux=flux,
                         region=(centre - region_halfwidth, centre + region_halfwidth),
                         sharpness=sharpness, amplitude=amplitude, sharpen_psi=sharpen_psi,
                         psi_sharpness=psi_sharpness,
                         identity_error=error, psi_gradient_max=grad_psi.max_magnitude(),
                         phi_gradient_max=grad_phi.max_magnitude())
    logger.debug('Clebsch member lambda=%g: Omega=%.6g, max|grad psi|=%.6g', sharpness, field.Omega,
                 field.psi_gradient_max)
    return field


def vortex_line_probes(field, count=20, half_length=APPENDIX_PROBE_HALF_LENGTH):
    """``count`` points on the central ``x2`` vortex line, within ``half_length`` of the centre."""
    if count < 1:
        raise SegmentError(f'need at least one probe point, got {count}')
    offsets = np.linspace(-half_length, half_length, count) if count > 1 else np.zeros(1)
    points = np.tile(field.centre, (count, 1))
    points[:, 1] += offsets
    return points


# Quadrature

@attr.s(frozen=True)
class SplitConfig(object):
    """Outer cut-off ``rho`` and the inner one ``delta = min(1 / Omega, rho / 2)``."""

    rho = attr.ib(converter=float)
    Omega = attr.ib(converter=float)

    @rho.validator
    def _check_rho(self, attribute, value):
        if not value > 0.0 or not math.isfinite(value):
            raise SegmentError(f'rho must be positive, got {value}')

    @property
    def delta(self):
        if self.Omega <= 0.0:
            return self.rho / 2.0
        return min(1.0 / self.Omega, self.rho / 2.0)


def sphere_rule(polar=APPENDIX_POLAR_NODES, azimuth=APPENDIX_AZIMUTH_NODES):
    """Unit directions and weights summing to ``4 pi`` (Gauss-Legendre in cos, trapezoid in angle)."""
    mu, weights = roots_legendre(polar)
    angle = 2.0 * np.pi * np.arange(azimuth) / azimuth
    sine = np.sqrt(1.0 - mu ** 2)
    directions = np.stack([np.outer(sine, np.cos(angle)), np.outer(sine, np.sin(angle)),
                           np.outer(mu, np.ones(azimuth))], axis=-1).reshape(-1, 3)
    return directions, np.repeat(weights, azimuth) * (2.0 * np.pi / azimuth)


def radial_rule(intervals, nodes=APPENDIX_RADIAL_NODES):
    """Composite Gauss-Legendre over ``(start, stop, pieces)`` intervals; empty ones are skipped."""
    x, w = roots_legendre(nodes)
    radii, weights = [], []
    for start, stop, pieces in intervals:
        if stop <= start:
            continue
        edges = np.linspace(start, stop, pieces + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            radii.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
            weights.append(0.5 * (hi - lo) * w)
    if not radii:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(radii), np.concatenate(weights)


def far_multiplier(grid, rho):
    """``1/|k| - J(|k|)`` with ``J(k) = int_0^{2 rho} chi(r / rho) j1(k r) dr``.

    Integrating by parts leaves ``-(1 / (k rho)) int_rho^{2 rho} chi'(r / rho) j0(k r) dr``.
    """
    ops = spectral_ops(grid)
    unique, inverse = np.unique(ops.k2, return_inverse=True)
    k = np.sqrt(unique)
    x, w = roots_legendre(APPENDIX_MULTIPLIER_NODES)
    r = rho * (0.5 * (CHI_INNER + CHI_OUTER) + 0.5 * (CHI_OUTER - CHI_INNER) * x)
    weights = 0.5 * (CHI_OUTER - CHI_INNER) * rho * w * chi_prime(r / rho)
    values = np.zeros_like(k)
    for start in range(0, k.size, _MULTIPLIER_BATCH):
        chunk = k[start:start + _MULTIPLIER_BATCH]
        integral = spherical_jn(0, np.outer(chunk, r)) @ weights
        with np.errstate(divide='ignore', invalid='ignore'):
            values[start:start + chunk.size] = np.where(chunk > 0.0, -integral / (chunk * rho), 0.0)
    return values[np.ravel(inverse)].reshape(ops.k2.shape)


def far_velocity(omega, rho):
    """Velocity induced by vorticity outside the ``chi(|y| / rho)`` ball: ``i m(|k|) k_hat x omega_hat``."""
    grid = omega.grid
    ops = spectral_ops(grid)
    scale = far_multiplier(grid, rho) / ops.k_abs_safe
    wx, wy, wz = (ops.forward(c) * scale for c in omega.components)
    kx, ky, kz = ops.k_deriv
    return VectorField(grid, [
        ops.inverse(1j * (ky * wz - kz * wy)),
        ops.inverse(1j * (kz * wx - kx * wz)),
        ops.inverse(1j * (kx * wy - ky * wx)),
    ])


def _sphere_sum(integrand, radial_weights, angular_weights):
    return np.einsum('r,a,rai->i', radial_weights, angular_weights, integrand) / (4.0 * np.pi)


def _tangential(values, directions):
    return values - directions * np.sum(values * directions, axis=-1, keepdims=True)


def _norm(vector):
    return float(np.linalg.norm(vector))


@attr.s(frozen=True, eq=False)
class SplitTerms(object):
    """Every piece of the split velocity at one point, as 3-vectors."""

    csv_columns = APPENDIX_COLUMNS

    point = attr.ib()
    delta = attr.ib()
    Omega = attr.ib()
    I1 = attr.ib()
    C = attr.ib()
    D = attr.ib()
    E = attr.ib()
    I3 = attr.ib()
    A = attr.ib()
    B = attr.ib()
    I4 = attr.ib()
    u_direct = attr.ib()

    @property
    def total(self):
        return self.I1 + self.I3 + self.I4

    @property
    def relative_error(self):
        scale = _norm(self.u_direct)
        error = _norm(self.total - self.u_direct)
        if scale == 0.0:
            return 0.0 if error == 0.0 else math.inf
        return error / scale

    @property
    def middle_split_error(self):
        """``|C + D + E - I3| / |I3|``."""
        scale = _norm(self.I3)
        error = _norm(self.C + self.D + self.E - self.I3)
        if scale == 0.0:
            return 0.0 if error == 0.0 else math.inf
        return error / scale

    def row(self, sharpness, probe):
        x, y, z = (float(v) for v in self.point)
        row = (sharpness, probe, x, y, z, self.delta, self.Omega,
               _norm(self.I1), _norm(self.C), _norm(self.D), _norm(self.E), _norm(self.I3),
               _norm(self.A), _norm(self.B), _norm(self.I4), _norm(self.total), _norm(self.u_direct),
               self.relative_error)
        return row

    def to_dict(self):
        vectors = ('point', 'I1', 'C', 'D', 'E', 'I3', 'A', 'B', 'I4', 'u_direct')
        out = {name: [float(v) for v in getattr(self, name)] for name in vectors}
        out.update(delta=self.delta, Omega=self.Omega, total=[float(v) for v in self.total],
                   relative_error=self.relative_error, middle_split_error=self.middle_split_error)
        return out


class VelocitySplitter(object):
    """Evaluates :class:`SplitTerms` for one field and one ``rho``.

    Interpolators and the far field are built once; each call costs a few
    hundred thousand spline evaluations.
    """

    def __init__(self, field, config, method='quintic'):
        self.field = field
        self.config = config
        self.directions, self.angular_weights = sphere_rule()
        self.method = method
        self.velocity = biot_savart_3d(field.omega)
        self._local = None
        self._velocity = FieldInterpolator(self.velocity, method=method)
        self._direct = FieldInterpolator(self.velocity, method='spectral')
        self._far = FieldInterpolator(far_velocity(field.omega, config.rho), method='spectral')

    @property
    def local(self):
        if self._local is None:
            self._local = FieldInterpolator([self.field.omega, self.field.flux], method=self.method)
        return self._local

    def _sample(self, interpolator, x, radii):
        points = x[None, None, :] - radii[:, None, None] * self.directions[None, :, :]
        values = interpolator(points.reshape(-1, 3))
        return values.reshape(radii.size, self.directions.shape[0], -1)

    def _sum(self, integrand, radial_weights):
        return _sphere_sum(integrand, radial_weights, self.angular_weights)

    def far_terms(self, x):
        """``(A, B, I4)`` at ``x`` without the region check."""
        x = np.asarray(x, dtype=np.float64)
        rho = self.config.rho
        radii, weights = radial_rule([(CHI_INNER * rho, CHI_OUTER * rho, 1)])
        u = self._sample(self._velocity, x, radii)
        A = self._sum(-_tangential(u, self.directions) * (chi_prime(radii / rho) / rho)[:, None, None], weights)
        I4 = self._far(x[None, :])[0]
        return A, I4 - A, I4

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        rho = self.config.rho
        delta = self.config.delta
        if not self.field.contains_ball(x, rho):
            raise SegmentError(f'ball of radius {rho} around {x.tolist()} leaves the Clebsch region')
        dirs = self.directions[None, :, :]
        near = APPENDIX_NEAR_OVERSAMPLING

        radii, weights = radial_rule([(0.0, delta, near), (delta, 2.0 * delta, near)])
        omega = self._sample(self.local, x, radii)[..., :3]
        I1 = self._sum(np.cross(omega, dirs) * chi(radii / delta)[:, None, None], weights)

        radii, weights = radial_rule([(delta, 2.0 * delta, near), (2.0 * delta, rho, 1),
                                      (rho, 2.0 * rho, 1)])
        values = self._sample(self.local, x, radii)
        omega, flux = values[..., :3], values[..., 3:]
        inner = chi(radii / delta)[:, None, None]
        outer = chi(radii / rho)[:, None, None]
        I3 = self._sum(np.cross(omega, dirs) * outer * (1.0 - inner), weights)
        tangential = _tangential(flux, dirs)
        C = self._sum((1.0 - inner) * (chi_prime(radii / rho) / rho)[:, None, None] * tangential, weights)
        D = self._sum(-outer * (chi_prime(radii / delta) / delta)[:, None, None] * tangential, weights)
        radial = dirs * np.sum(flux * dirs, axis=-1, keepdims=True)
        E = self._sum(-outer * (1.0 - inner) * (flux - 3.0 * radial) / radii[:, None, None], weights)

        A, B, I4 = self.far_terms(x)
        u_direct = self._direct(x[None, :])[0]
        return SplitTerms(point=x, delta=delta, Omega=self.config.Omega, I1=I1, C=C, D=D, E=E, I3=I3,
                          A=A, B=B, I4=I4, u_direct=u_direct)


def split_velocity(field, config, x, method='quintic'):
    """One-off split at ``x``; use :class:`VelocitySplitter` for many points."""
    return VelocitySplitter(field, config, method=method)(x)


# Family checks

@attr.s(frozen=True)
class FamilyMember(object):
    sharpness = attr.ib(converter=float)
    Omega = attr.ib(converter=float)
    u_max = attr.ib(converter=float)
    u_max_grid = attr.ib(default=math.nan, converter=float)
    psi_gradient_max = attr.ib(default=math.nan, converter=float)


def family_member(field, terms, velocity=None):
    """Summarise one member from its split terms (``u_max`` over the probe points)."""
    u_max = max(_norm(t.u_direct) for t in terms)
    if velocity is None:
        velocity = biot_savart_3d(field.omega)
    return FamilyMember(field.sharpness, field.Omega, u_max, velocity.max_magnitude(), field.psi_gradient_max)


@attr.s(frozen=True)
class LogVelocityReport(object):
    sharpness = attr.ib()
    Omega = attr.ib()
    u_max = attr.ib()
    ratios = attr.ib()
    Cu_measured = attr.ib()
    intercept = attr.ib()
    residual = attr.ib()
    Cu_bound = attr.ib()
    spread = attr.ib()
    trend = attr.ib()
    growth_factor = attr.ib()
    bounded = attr.ib()

    @property
    def spread_ok(self):
        return self.spread < LOG_VELOCITY_SPREAD

    def to_dict(self):
        out = attr.asdict(self)
        for name in ('sharpness', 'Omega', 'u_max', 'ratios'):
            out[name] = [float(v) for v in out[name]]
        out['spread_ok'] = self.spread_ok
        return out


def _trend(ratios):
    steps = np.diff(ratios)
    scale = np.max(np.abs(ratios))
    if np.all(steps <= 1e-9 * scale):
        return 'nonincreasing'
    if np.all(steps >= -1e-9 * scale):
        return 'growing'
    return 'mixed'


def log_velocity_check(members, use_grid_max=False):
    """Fit ``max|u|`` against ``log Omega`` over a family.

    ``bounded`` holds when the ratio ``max|u| / log Omega`` never grows or
    stays within 1.1 times the least-squares bound through the origin.
    """
    members = sorted(members, key=lambda m: m.sharpness)
    if len(members) < 3:
        raise SegmentError(f'the log-velocity fit needs at least 3 family members, got {len(members)}')
    omega = np.array([m.Omega for m in members])
    if np.any(omega <= math.e):
        raise SegmentError(f'every family member needs Omega > e, smallest is {omega.min():.6g}')
    speed = np.array([m.u_max_grid if use_grid_max else m.u_max for m in members])
    logs = np.log(omega)
    if np.ptp(logs) <= 1e-12 * np.max(logs):
        raise SegmentError('log Omega has zero variance over the family; nothing to fit')
    slope, intercept = np.polyfit(logs, speed, 1)
    residual = float(np.sqrt(np.mean((slope * logs + intercept - speed) ** 2)))
    ratios = speed / logs
    bound = float(np.dot(speed, logs) / np.dot(logs, logs))
    trend = _trend(ratios)
    return LogVelocityReport(
        sharpness=np.array([m.sharpness for m in members]), Omega=omega, u_max=speed, ratios=ratios,
        Cu_measured=float(slope), intercept=float(intercept), residual=residual, Cu_bound=bound,
        spread=float(ratios.max() / ratios.min() - 1.0) if ratios.min() > 0.0 else math.inf,
        trend=trend, growth_factor=float(ratios[-1] / ratios[0]) if ratios[0] > 0.0 else math.inf,
        bounded=bool(trend == 'nonincreasing' or ratios.max() <= 1.1 * bound))


@attr.s(frozen=True)
class TermScaling(object):
    """Fitted constants of ``|I1| <= c delta Omega`` and ``|E| <= c' log(rho/delta) max|phi grad psi|``."""

    c_near = attr.ib()
    near_spread = attr.ib()
    c_middle = attr.ib()
    middle_spread = attr.ib()

    @property
    def near_ok(self):
        return self.near_spread <= 2.0

    @property
    def middle_ok(self):
        return self.middle_spread <= 2.0


def term_scaling(results, rho):
    """``results`` maps each family member (a :class:`ClebschField`) to its list of :class:`SplitTerms`."""
    near, middle = [], []
    for field, terms in results:
        near.append(max(_norm(t.I1) / (t.delta * t.Omega) for t in terms))
        middle.append(max(_norm(t.E) / (math.log(rho / t.delta) * field.flux_max) for t in terms))
    near = np.array(near)
    middle = np.array(middle)
    return TermScaling(c_near=float(near.max()), near_spread=float(near.max() / near.min()),
                       c_middle=float(middle.max()), middle_spread=float(middle.max() / middle.min()))


@attr.s(frozen=True)
class FarFieldScaling(object):
    """``|A|`` and ``|B|`` over a ``rho`` family; the box is periodic, so this is an analog."""

    rhos = attr.ib()
    A = attr.ib()
    B = attr.ib()
    u_l2 = attr.ib()
    exponent_A = attr.ib()
    exponent_B = attr.ib()
    note = attr.ib(default='periodic-kernel analog of the free-space rho^(-3/2) estimate')

    @property
    def in_range(self):
        return bool(-2.0 <= self.exponent_A <= -1.0 and -2.0 <= self.exponent_B <= -1.0)

    def to_dict(self):
        out = attr.asdict(self)
        for name in ('rhos', 'A', 'B'):
            out[name] = [float(v) for v in out[name]]
        out['in_range'] = self.in_range
        return out


def far_field_scaling(field, x, rhos=(0.5, 1.0, 2.0), method='quintic'):
    rhos = np.asarray(sorted(rhos), dtype=np.float64)
    if rhos.size < 2:
        raise SegmentError('far-field scaling needs at least two values of rho')
    a_terms, b_terms = [], []
    velocity = None
    for rho in rhos:
        splitter = VelocitySplitter(field, SplitConfig(rho, field.Omega), method=method)
        velocity = splitter.velocity
        A, B, _ = splitter.far_terms(x)
        a_terms.append(_norm(A))
        b_terms.append(_norm(B))
    a_terms = np.array(a_terms)
    b_terms = np.array(b_terms)
    if np.any(a_terms <= 0.0) or np.any(b_terms <= 0.0):
        raise SegmentError('far-field terms vanish; no exponent to fit')
    return FarFieldScaling(rhos=rhos, A=a_terms, B=b_terms,
                           u_l2=math.sqrt(velocity.integral_dot(velocity)),
                           exponent_A=float(np.polyfit(np.log(rhos), np.log(a_terms), 1)[0]),
                           exponent_B=float(np.polyfit(np.log(rhos), np.log(b_terms), 1)[0]))

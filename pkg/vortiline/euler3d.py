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


"""Inviscid 3D incompressible Euler in vorticity form.

``omega_t = -u . grad omega + omega . grad u`` with ``u`` recovered by the
periodic Biot-Savart law. Products are formed in physical space and
dealiased with the 2/3 rule; the tendency is projected onto solenoidal
fields so the vorticity stays divergence-free.
"""

import logging
import math

import attr
import numpy as np

from .constants import (DIVERGENCE_TOLERANCE, EULER_SERIES_COLUMNS, TUBE_CORE_EXTENT,
                        UNDER_RESOLVED_FRACTION)
from .errors import FieldError, NumericalError
from .fields import (VectorField, biot_savart_3d, curl, dealias_field, project_solenoidal,
                     relative_divergence, spectral_ops, spectral_tail_fraction)
from .runner import run_model
from .stepping import check_cfl, rk4

logger = logging.getLogger(__name__)


def _check_omega(instance, attribute, value):
    if value.grid.dim != 3:
        raise FieldError(f'Euler needs a 3D vorticity, got {value.grid.dim}D')
    if not value.is_finite():
        raise FieldError('vorticity contains non-finite values')


@attr.s(frozen=True)
class EulerState(object):
    omega = attr.ib(validator=[attr.validators.instance_of(VectorField), _check_omega])
    time = attr.ib(default=0.0, converter=float)

    @property
    def grid(self):
        return self.omega.grid

    def velocity(self):
        return biot_savart_3d(self.omega, project=True)


class EulerTendency(object):
    """Vorticity tendency on a ``(3, n0, n1, n2)`` array."""

    def __init__(self, grid, stepper=None):
        self.grid = grid
        self.ops = spectral_ops(grid)
        self.damping = None if stepper is None else stepper.hyperdiffusion(self.ops.k2)

    def velocity_coeffs(self, coeffs):
        kx, ky, kz = self.ops.k_deriv
        wx, wy, wz = (c / self.ops.k2_deriv_safe for c in coeffs)
        return [1j * (ky * wz - kz * wy), 1j * (kz * wx - kx * wz), 1j * (kx * wy - ky * wx)]

    def velocity(self, values):
        ops = self.ops
        return np.stack([ops.inverse(c) for c in self.velocity_coeffs([ops.forward(v) for v in values])])

    def __call__(self, values):
        ops = self.ops
        coeffs = [ops.forward(v) for v in values]
        u_coeffs = self.velocity_coeffs(coeffs)
        u = [ops.inverse(c) for c in u_coeffs]
        grad_w = [[ops.derivative(c, j) for j in range(3)] for c in coeffs]
        grad_u = [[ops.derivative(c, j) for j in range(3)] for c in u_coeffs]
        tendency = []
        for i in range(3):
            product = sum(values[j] * grad_u[i][j] - u[j] * grad_w[i][j] for j in range(3))
            if not np.all(np.isfinite(product)):
                raise NumericalError('non-finite velocity or vorticity gradient in the Euler tendency')
            tendency.append(np.where(ops.dealias_mask, ops.forward(product), 0.0))
        k_dot = sum(k * t for k, t in zip(ops.k_deriv, tendency)) / ops.k2_deriv_safe
        tendency = [t - k * k_dot for k, t in zip(ops.k_deriv, tendency)]
        if self.damping is not None:
            tendency = [t + self.damping * c for t, c in zip(tendency, coeffs)]
        return np.stack([ops.inverse(t) for t in tendency])

    def max_speed(self, values):
        u = self.velocity(values)
        return float(np.sqrt(np.max(np.sum(u ** 2, axis=0))))


def euler_rhs(state, stepper=None):
    """Tendency ``d omega / dt`` of the state as a VectorField."""
    excess = relative_divergence(state.omega)
    if excess > DIVERGENCE_TOLERANCE:
        raise FieldError(f'vorticity is not solenoidal: max|div w|/max|w| = {excess:.3e}')
    return VectorField(state.grid, list(EulerTendency(state.grid, stepper)(state.omega.array)))


def step(state, stepper, log=None):
    """One RK4 step; an over-CFL fixed step is logged and recorded in ``log`` when given."""
    tendency = EulerTendency(state.grid, stepper)
    h = state.grid.min_spacing
    values = state.omega.array
    speed = tendency.max_speed(values)
    dt = stepper.choose_dt(speed, h, np.inf)
    check_cfl(stepper, dt, speed, h, state.time, log)
    values = rk4(values, tendency, dt)
    if not np.all(np.isfinite(values)):
        raise NumericalError(f'non-finite vorticity after the step from t={state.time:.6g}')
    if log is not None:
        log.steps += 1
        log.final_time = state.time + dt
    return EulerState(VectorField(state.grid, list(values)), state.time + dt)


def energy(u):
    """Kinetic energy ``1/2 int |u|^2``."""
    return 0.5 * u.integral_dot(u)


def helicity(u, omega):
    return u.integral_dot(omega)


def enstrophy(omega):
    return 0.5 * omega.integral_dot(omega)


def is_under_resolved(omega, threshold=UNDER_RESOLVED_FRACTION):
    return spectral_tail_fraction(omega) > threshold


# Initial conditions

def _finish(omega):
    return EulerState(dealias_field(project_solenoidal(omega)), 0.0)


def abc_flow_ic(grid, a=1.0, b=1.0, c=1.0):
    """Arnold-Beltrami-Childress flow; ``curl u = u`` so ``omega = u``."""
    if grid.dim != 3:
        raise FieldError('ABC flow needs a 3D grid')
    x, y, z = grid.mesh()
    omega = VectorField(grid, [a * np.sin(z) + c * np.cos(y),
                               b * np.sin(x) + a * np.cos(z),
                               c * np.sin(y) + b * np.cos(x)])
    return EulerState(omega, 0.0)


def taylor_green_ic(grid, amplitude=1.0):
    """Vorticity of ``u = A (sin x cos y cos z, -cos x sin y cos z, 0)``."""
    if grid.dim != 3:
        raise FieldError('Taylor-Green flow needs a 3D grid')
    x, y, z = grid.mesh()
    u = VectorField(grid, [amplitude * np.sin(x) * np.cos(y) * np.cos(z),
                           -amplitude * np.cos(x) * np.sin(y) * np.cos(z),
                           np.zeros(grid.shape)])
    return _finish(curl(u))


def _tube_centres(grid, separation, amplitude, wavelength):
    cx = 0.5 * grid.length[0]
    z = grid.coordinates()[2]
    wobble = amplitude * np.cos(2.0 * np.pi * z / wavelength)
    slope = amplitude * (2.0 * np.pi / wavelength) * np.sin(2.0 * np.pi * z / wavelength)
    return cx + 0.5 * separation - wobble, slope


def tube_vorticity(grid, radius=0.3, separation=1.6, circulation=1.0, amplitude=0.1, wavelength=None):
    """Vorticity of two Gaussian-core tubes along z with opposite circulation.

    The tubes sit at ``x = L_x/2 +- (separation/2 - amplitude cos(2 pi z / wavelength))``,
    ``y = L_y/2``, so the pair is odd-symmetric across the plane
    ``x = L_x/2``: ``omega_x`` is even and ``omega_y, omega_z`` are odd
    under the reflection. Each tube's vorticity points along its own
    centre line, so the field is divergence-free before any projection.
    ``wavelength`` defaults to the box length in z.
    """
    if grid.dim != 3:
        raise FieldError('vortex tubes need a 3D grid')
    lx, ly, lz = grid.length
    if wavelength is None or wavelength == 0.0:
        wavelength = lz
    if radius <= 0.0 or separation <= 0.0:
        raise FieldError(f'tube radius and separation must be positive, got {radius}, {separation}')
    if separation <= 2.0 * abs(amplitude):
        raise FieldError(f'perturbation amplitude {amplitude} makes the tubes cross '
                         f'(separation {separation})')
    core = TUBE_CORE_EXTENT * radius
    if lx - separation - 2.0 * abs(amplitude) < 2.0 * core or ly < 2.0 * core:
        raise FieldError(f'tubes of radius {radius} and separation {separation} overlap their '
                         f'periodic images in a {lx:.4g} x {ly:.4g} box')
    if abs(round(lz / wavelength) * wavelength - lz) > 1e-12 * lz:
        raise FieldError(f'perturbation wavelength {wavelength} does not divide the box length {lz}')
    x, y, _ = grid.mesh()
    cx, cy = 0.5 * lx, 0.5 * ly
    centre, slope = _tube_centres(grid, separation, amplitude, wavelength)
    centre = centre[None, None, :]
    slope = slope[None, None, :]
    mirror = 2.0 * cx - centre
    peak = circulation / (math.pi * radius ** 2)
    # nearest periodic image in x
    right = peak * np.exp(-(((x - centre + 0.5 * lx) % lx - 0.5 * lx) ** 2 + (y - cy) ** 2) / radius ** 2)
    left = peak * np.exp(-(((x - mirror + 0.5 * lx) % lx - 0.5 * lx) ** 2 + (y - cy) ** 2) / radius ** 2)
    # the left tube runs along -z with centre slope -dc/dz, so both add +dc/dz to omega_x
    return VectorField(grid, [slope * (right + left), np.zeros(grid.shape), right - left])


def anti_parallel_tubes_ic(grid, radius=0.3, separation=1.6, circulation=1.0, amplitude=0.1,
                           wavelength=None):
    """The :func:`tube_vorticity` pair, projected and dealiased."""
    return _finish(tube_vorticity(grid, radius, separation, circulation, amplitude, wavelength))


def tube_circulation(omega, z_index=0):
    """Circulation of the tube on the ``x > L_x/2`` side through the plane ``z = z_index * h_z``."""
    grid = omega.grid
    n = grid.n[0]
    plane = omega.components[2][:, :, z_index]
    # nodes at x = L_x/2 and x = 0 lie on symmetry planes and get half weight
    weights = np.zeros(n)
    weights[n // 2 + 1:] = 1.0
    weights[n // 2] = 0.5
    weights[0] = 0.5
    return float(np.sum(weights[:, None] * plane) * grid.spacing[0] * grid.spacing[1])


INITIAL_CONDITIONS = {
    'abc': (abc_flow_ic, {'a': 1.0, 'b': 1.0, 'c': 1.0}),
    'taylor_green': (taylor_green_ic, {'amplitude': 1.0}),
    'anti_parallel_tubes': (anti_parallel_tubes_ic, {'radius': 0.3, 'separation': 1.6,
                                                     'circulation': 1.0, 'amplitude': 0.1,
                                                     'wavelength': 0.0}),
}


def initial_state(grid, name, params=None):
    try:
        builder, defaults = INITIAL_CONDITIONS[name]
    except KeyError:
        raise FieldError(f'unknown Euler initial condition {name!r}') from None
    kwargs = dict(defaults)
    kwargs.update(params or {})
    return builder(grid, **kwargs)


class EulerModel(object):
    """Adapter that lets the shared run driver march an Euler state."""

    name = 'euler3d'
    components = 3
    series_columns = EULER_SERIES_COLUMNS

    def __init__(self, grid, stepper):
        self.grid = grid
        self.stepper = stepper
        self.tendency = EulerTendency(grid, stepper)
        self.max_tail_fraction = 0.0
        self.under_resolved_since = None

    def initial_values(self, config):
        return initial_state(self.grid, config.ic_name, config.ic_params).omega.array

    def rhs(self, values):
        return self.tendency(values)

    def max_speed(self, values):
        return self.tendency.max_speed(values)

    def describe(self, values):
        finite = np.where(np.isfinite(values), values, 0.0)
        return float(np.sqrt(np.max(np.sum(finite ** 2, axis=0)))), float('nan')

    def to_field(self, values):
        return VectorField(self.grid, list(values))

    def series_row(self, values, time, dt):
        omega = VectorField(self.grid, list(values))
        u = VectorField(self.grid, list(self.tendency.velocity(values)))
        return (time, omega.max_magnitude(), energy(u), helicity(u, omega), dt)

    def observe(self, values, time):
        fraction = spectral_tail_fraction(VectorField(self.grid, list(values)))
        self.max_tail_fraction = max(self.max_tail_fraction, fraction)
        if fraction > UNDER_RESOLVED_FRACTION and self.under_resolved_since is None:
            self.under_resolved_since = time
            logger.warning('vorticity is under-resolved from t=%.6g (tail fraction %.2e)', time, fraction)

    def flags(self):
        return {
            'inviscid': self.stepper.inviscid,
            'under_resolved': self.under_resolved_since is not None,
            'under_resolved_since': self.under_resolved_since,
            'max_tail_fraction': self.max_tail_fraction,
        }


def run(config):
    """March ``config`` to ``time.t_end``, writing snapshots, ``series.csv`` and ``manifest.json``."""
    return run_model(config, EulerModel(config.grid, config.stepper))

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


"""Inviscid surface quasi-geostrophic dynamics.

``theta_t + u . grad theta = 0`` with ``u = grad-perp (-Laplacian)^(-1/2) theta``,
solved pseudo-spectrally with 2/3 dealiasing of the advection product and
classical RK4 in time.
"""

import attr
import numpy as np

from .constants import SQG_SERIES_COLUMNS
from .errors import FieldError, NumericalError
from .fields import ScalarField, dealias_field, perp_gradient, spectral_ops, sqg_velocity
from .runner import run_model
from .stepping import check_cfl, rk4


def _check_theta(instance, attribute, value):
    if value.grid.dim != 2:
        raise FieldError(f'SQG needs a 2D theta, got {value.grid.dim}D')
    if not value.is_finite():
        raise FieldError('theta contains non-finite values')


@attr.s(frozen=True)
class SqgState(object):
    theta = attr.ib(validator=[attr.validators.instance_of(ScalarField), _check_theta])
    time = attr.ib(default=0.0, converter=float)

    @property
    def grid(self):
        return self.theta.grid


class SqgTendency(object):
    """``-u . grad theta`` (dealiased, mean-free) plus optional hyperdiffusion, on raw arrays."""

    def __init__(self, grid, stepper=None):
        self.grid = grid
        self.ops = spectral_ops(grid)
        self.damping = None if stepper is None else stepper.hyperdiffusion(self.ops.k2)

    def velocity_and_gradient(self, coeffs):
        ops = self.ops
        scaled = coeffs / ops.k_abs_safe
        scaled[ops.zero_mode] = 0.0
        kx, ky = ops.k_deriv
        ux = ops.inverse(-1j * ky * scaled)
        uy = ops.inverse(1j * kx * scaled)
        tx = ops.inverse(1j * kx * coeffs)
        ty = ops.inverse(1j * ky * coeffs)
        return ux, uy, tx, ty

    def __call__(self, theta):
        ops = self.ops
        coeffs = ops.forward(theta)
        ux, uy, tx, ty = self.velocity_and_gradient(coeffs)
        product = ux * tx + uy * ty
        if not np.all(np.isfinite(product)):
            raise NumericalError('non-finite velocity or gradient in the SQG tendency')
        tendency = -ops.forward(product)
        tendency = np.where(ops.dealias_mask, tendency, 0.0)
        tendency[ops.zero_mode] = 0.0
        if self.damping is not None:
            tendency = tendency + self.damping * coeffs
        return ops.inverse(tendency)

    def max_speed(self, theta):
        coeffs = self.ops.forward(theta)
        ux, uy, _, _ = self.velocity_and_gradient(coeffs)
        return float(np.sqrt(np.max(ux ** 2 + uy ** 2)))


def sqg_rhs(state, stepper=None):
    """Tendency ``d theta / dt`` of the state as a ScalarField."""
    return ScalarField(state.grid, SqgTendency(state.grid, stepper)(state.theta.values))


def step(state, stepper, log=None):
    """Advance one RK4 step; the step size follows ``stepper``.

    A fixed step over the CFL target is logged and, when ``log`` is a
    :class:`~vortiline.stepping.MarchLog`, recorded in it.
    """
    tendency = SqgTendency(state.grid, stepper)
    h = state.grid.min_spacing
    speed = tendency.max_speed(state.theta.values)
    dt = stepper.choose_dt(speed, h, np.inf)
    check_cfl(stepper, dt, speed, h, state.time, log)
    values = rk4(state.theta.values, tendency, dt)
    if not np.all(np.isfinite(values)):
        raise NumericalError(f'non-finite theta after the step from t={state.time:.6g}')
    if log is not None:
        log.steps += 1
        log.final_time = state.time + dt
    return SqgState(ScalarField(state.grid, values), state.time + dt)


def velocity(state):
    return sqg_velocity(state.theta)


def max_grad_perp(theta):
    return perp_gradient(theta).max_magnitude()


# Initial conditions

def _centered(grid, center):
    if center is None:
        center = [0.5 * extent for extent in grid.length]
    return [x - c for x, c in zip(grid.mesh(), center)]


def radial_gaussian(grid, amplitude=1.0, width=0.3):
    """``amplitude * exp(-r^2 / width^2)`` about the box centre (a steady state)."""
    x, y = _centered(grid, None)
    return ScalarField(grid, amplitude * np.exp(-(x ** 2 + y ** 2) / width ** 2))


def two_gaussian(grid, amplitude=1.0, width=0.5, separation=1.2, offset=0.3, ratio=1.0):
    """Two off-axis Gaussian extrema whose mutual strain sharpens a front between them."""
    x, y = _centered(grid, None)
    dx, dy = 0.5 * separation, 0.5 * offset
    first = np.exp(-((x - dx) ** 2 + (y - dy) ** 2) / width ** 2)
    second = np.exp(-((x + dx) ** 2 + (y + dy) ** 2) / width ** 2)
    return ScalarField(grid, amplitude * (first + ratio * second))


def random_band_limited(grid, seed=0, k_min=2.0, k_max=6.0, amplitude=1.0):
    """Random phases and unit moduli on the shell ``k_min <= |k| <= k_max``, scaled to ``max|theta| = amplitude``."""
    ops = spectral_ops(grid)
    rng = np.random.default_rng(int(seed))
    k = np.sqrt(ops.k2)
    band = (k >= k_min) & (k <= k_max)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=ops.spectral_shape)
    coeffs = np.where(band, np.exp(1j * phases), 0.0)
    values = ops.inverse(coeffs)
    peak = np.max(np.abs(values))
    if peak == 0.0:
        raise FieldError(f'no modes with {k_min} <= |k| <= {k_max} on this grid')
    return ScalarField(grid, amplitude * values / peak)


INITIAL_CONDITIONS = {
    'radial_gaussian': (radial_gaussian, {'amplitude': 1.0, 'width': 0.3}),
    'two_gaussian': (two_gaussian, {'amplitude': 1.0, 'width': 0.5, 'separation': 1.2,
                                    'offset': 0.3, 'ratio': 1.0}),
    'random_band_limited': (random_band_limited, {'k_min': 2.0, 'k_max': 6.0, 'amplitude': 1.0}),
}


def initial_state(grid, name, params=None, seed=0):
    """Build the named initial condition, projected onto the dealiased band."""
    try:
        builder, defaults = INITIAL_CONDITIONS[name]
    except KeyError:
        raise FieldError(f'unknown SQG initial condition {name!r}') from None
    kwargs = dict(defaults)
    kwargs.update(params or {})
    if name == 'random_band_limited':
        kwargs['seed'] = seed
    return SqgState(dealias_field(builder(grid, **kwargs)), 0.0)


class SqgModel(object):
    """Adapter that lets the shared run driver march an SQG state."""

    name = 'sqg'
    components = 1

    def __init__(self, grid, stepper):
        self.grid = grid
        self.stepper = stepper
        self.tendency = SqgTendency(grid, stepper)

    series_columns = SQG_SERIES_COLUMNS

    def initial_values(self, config):
        state = initial_state(self.grid, config.ic_name, config.ic_params, config.seed)
        return state.theta.values.copy()

    def rhs(self, values):
        return self.tendency(values)

    def max_speed(self, values):
        return self.tendency.max_speed(values)

    def describe(self, values):
        finite = np.where(np.isfinite(values), values, 0.0)
        return float(np.max(np.abs(finite))), float('nan')

    def to_field(self, values):
        return ScalarField(self.grid, values)

    def series_row(self, values, time, dt):
        theta = ScalarField(self.grid, values)
        return (time, max_grad_perp(theta), theta.l2(), dt)

    def observe(self, values, time):
        pass

    def flags(self):
        return {'inviscid': self.stepper.inviscid}


def run(config):
    """March ``config`` to ``time.t_end``, writing snapshots, ``series.csv`` and ``manifest.json``."""
    return run_model(config, SqgModel(config.grid, config.stepper))

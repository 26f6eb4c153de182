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


"""Periodic gridded fields and their spectral operators.

Fields live in physical space on a uniform periodic box and are
transformed on demand. Transforms go through ``scipy.fft`` real-to-complex
plans; the worker count comes from ``VORTILINE_THREADS`` unless
:func:`set_workers` overrides it. All operators are pure: inputs are never
modified and every result is a fresh field.

Axis ``i`` of a value array corresponds to coordinate ``x_i`` (``ij``
indexing), so ``values[j0, j1]`` is the value at ``(j0 * h0, j1 * h1)``.
"""

import functools
import logging
import os

import attr
import numpy as np
import scipy.fft as spfft

from .constants import (DEALIAS_FRACTION, DEFAULT_DOMAIN_LENGTH,
                        DIVERGENCE_TOLERANCE, MIN_GRID_POINTS, THREADS_ENV)
from .errors import FieldError

logger = logging.getLogger(__name__)

_workers = None


def set_workers(count):
    """Cap the number of threads used by the FFTs (``None`` restores the default)."""
    global _workers
    if count is not None and int(count) < 1:
        raise FieldError(f'worker count must be at least 1, got {count}')
    _workers = None if count is None else int(count)


def fft_workers():
    if _workers is not None:
        return _workers
    raw = os.environ.get(THREADS_ENV, '').strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        logger.warning('ignoring %s=%r, expected a positive integer', THREADS_ENV, raw)
        return 1
    return max(count, 1)


def _int_tuple(value):
    if np.isscalar(value):
        return (int(value),)
    return tuple(int(v) for v in value)


def _float_tuple(value):
    if value is None:
        return None
    if np.isscalar(value):
        return (float(value),)
    return tuple(float(v) for v in value)


@attr.s(frozen=True)
class Grid(object):
    """A uniform periodic grid in two or three dimensions.

    Example:
        >>> grid = Grid((64, 64))
        >>> grid.dim, grid.spacing[0] == 2 * np.pi / 64
        (2, True)
    """

    n = attr.ib(converter=_int_tuple)
    length = attr.ib(default=None, converter=_float_tuple)

    def __attrs_post_init__(self):
        if self.length is None:
            object.__setattr__(self, 'length', (DEFAULT_DOMAIN_LENGTH,) * len(self.n))
        elif len(self.length) == 1 and len(self.n) > 1:
            object.__setattr__(self, 'length', self.length * len(self.n))
        if len(self.n) not in (2, 3):
            raise FieldError(f'grid must be 2D or 3D, got {len(self.n)} axes')
        if len(self.length) != len(self.n):
            raise FieldError(f'grid has {len(self.n)} axes but {len(self.length)} domain lengths')
        for count in self.n:
            if count < MIN_GRID_POINTS or count & (count - 1):
                raise FieldError(f'grid point counts must be powers of two >= {MIN_GRID_POINTS}, got {count}')
        for extent in self.length:
            if not np.isfinite(extent) or extent <= 0.0:
                raise FieldError(f'domain lengths must be positive, got {extent}')

    @property
    def dim(self):
        return len(self.n)

    @property
    def shape(self):
        return self.n

    @property
    def size(self):
        return int(np.prod(self.n))

    @property
    def spacing(self):
        return tuple(extent / count for extent, count in zip(self.length, self.n))

    @property
    def min_spacing(self):
        return min(self.spacing)

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @property
    def volume(self):
        return float(np.prod(self.length))

    def coordinates(self):
        """One 1D array of node coordinates per axis."""
        return [np.arange(count) * step for count, step in zip(self.n, self.spacing)]

    def mesh(self):
        return np.meshgrid(*self.coordinates(), indexing='ij')

    def wrap(self, points):
        """Map points into the fundamental box ``[0, length)``."""
        return np.mod(points, np.asarray(self.length))


def _frozen_array(values):
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


def _check_shape(instance, attribute, value):
    if value.shape != instance.grid.shape:
        raise FieldError(f'{attribute.name} has shape {value.shape}, grid expects {instance.grid.shape}')


@attr.s(frozen=True, eq=False)
class ScalarField(object):
    """A real scalar field on a periodic grid (theta, phi, psi, ...)."""

    grid = attr.ib(validator=attr.validators.instance_of(Grid))
    values = attr.ib(converter=_frozen_array, validator=_check_shape)

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func(*mesh)`` on the grid nodes."""
        return cls(grid, np.broadcast_to(func(*grid.mesh()), grid.shape))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.shape))

    def is_finite(self):
        return bool(np.all(np.isfinite(self.values)))

    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def mean(self):
        return float(np.mean(self.values))

    def integral(self):
        return float(np.sum(self.values) * self.grid.cell_volume)

    def l2(self):
        """Integral of the squared field over the box."""
        return float(np.sum(self.values ** 2) * self.grid.cell_volume)

    def argmax_abs(self):
        """Coordinates of the grid node where ``|f|`` is largest."""
        index = np.unravel_index(np.argmax(np.abs(self.values)), self.grid.shape)
        return np.array([i * h for i, h in zip(index, self.grid.spacing)])

    def __add__(self, other):
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - other.values)

    def scaled(self, factor):
        return ScalarField(self.grid, factor * self.values)


def _frozen_components(components):
    return tuple(_frozen_array(c) for c in components)


def _check_components(instance, attribute, value):
    for component in value:
        if component.shape != instance.grid.shape:
            raise FieldError(f'component has shape {component.shape}, grid expects {instance.grid.shape}')


@attr.s(frozen=True, eq=False)
class VectorField(object):
    """A real vector field with ``grid.dim`` components (u, omega, grad-perp theta)."""

    grid = attr.ib(validator=attr.validators.instance_of(Grid))
    components = attr.ib(converter=_frozen_components, validator=_check_components)

    def __attrs_post_init__(self):
        if len(self.components) != self.grid.dim:
            raise FieldError(f'{self.grid.dim}D grid needs {self.grid.dim} components, got {len(self.components)}')

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func(*mesh)``, which returns one array per component."""
        return cls(grid, [np.broadcast_to(c, grid.shape) for c in func(*grid.mesh())])

    @classmethod
    def zeros(cls, grid):
        return cls(grid, [np.zeros(grid.shape)] * grid.dim)

    @property
    def array(self):
        return np.stack(self.components)

    def is_finite(self):
        return all(np.all(np.isfinite(c)) for c in self.components)

    def magnitude(self):
        return ScalarField(self.grid, np.sqrt(sum(c ** 2 for c in self.components)))

    def max_magnitude(self):
        return float(np.max(np.sqrt(sum(c ** 2 for c in self.components))))

    def dot(self, other):
        return ScalarField(self.grid, sum(a * b for a, b in zip(self.components, other.components)))

    def integral_dot(self, other):
        return float(np.sum(sum(a * b for a, b in zip(self.components, other.components)))
                     * self.grid.cell_volume)

    def __add__(self, other):
        return VectorField(self.grid, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        return VectorField(self.grid, [a - b for a, b in zip(self.components, other.components)])

    def scaled(self, factor):
        return VectorField(self.grid, [factor * c for c in self.components])


class SpectralOps(object):
    """Wavenumbers, masks and transforms for one grid (real-to-complex layout).

    Use :func:`spectral_ops` to get the cached instance for a grid.
    """

    def __init__(self, grid):
        self.grid = grid
        dim = grid.dim
        self.modes = []
        self.k = []
        self.k_deriv = []
        for axis, (count, extent) in enumerate(zip(grid.n, grid.length)):
            if axis == dim - 1:
                modes = np.fft.rfftfreq(count, 1.0 / count)
            else:
                modes = np.fft.fftfreq(count, 1.0 / count)
            shape = [1] * dim
            shape[axis] = modes.size
            wavenumber = (2.0 * np.pi / extent) * modes
            derivative = np.where(np.abs(modes) == count // 2, 0.0, wavenumber)
            self.modes.append(modes.reshape(shape))
            self.k.append(wavenumber.reshape(shape))
            self.k_deriv.append(derivative.reshape(shape))
        self.spectral_shape = tuple(m.size for m in self.modes)
        self.k2 = sum(k ** 2 for k in self.k)
        self.k2_safe = np.where(self.k2 == 0.0, 1.0, self.k2)
        self.k_abs_safe = np.sqrt(self.k2_safe)
        # Laplacian seen by the first-derivative operators, which drop Nyquist modes
        self.k2_deriv = sum(k ** 2 for k in self.k_deriv)
        self.k2_deriv_safe = np.where(self.k2_deriv == 0.0, 1.0, self.k2_deriv)
        self.zero_mode = (0,) * dim
        keep = np.ones(self.spectral_shape, dtype=bool)
        for modes, count in zip(self.modes, grid.n):
            keep &= np.abs(modes) <= count * DEALIAS_FRACTION
        self.dealias_mask = keep
        # rfft halves the last axis; interior modes there stand for a conjugate pair
        weight = np.full(self.spectral_shape[-1], 2.0)
        weight[0] = 1.0
        if grid.n[-1] % 2 == 0:
            weight[-1] = 1.0
        self.half_weight = weight.reshape((1,) * (dim - 1) + (-1,))

    def forward(self, values):
        return spfft.rfftn(values, workers=fft_workers())

    def inverse(self, coeffs):
        return spfft.irfftn(coeffs, s=self.grid.n, workers=fft_workers())

    def derivative(self, coeffs, axis):
        return self.inverse(1j * self.k_deriv[axis] * coeffs)


@functools.lru_cache(maxsize=None)
def spectral_ops(grid):
    return SpectralOps(grid)


def _require_finite(field, name):
    if not field.is_finite():
        raise FieldError(f'{name} contains non-finite values')


def _require_dim(field, dim, operation):
    if field.grid.dim != dim:
        raise FieldError(f'{operation} needs a {dim}D field, got {field.grid.dim}D')


def gradient(f):
    """Spectral gradient of a scalar field (multiplier ``i k``)."""
    _require_finite(f, 'gradient input')
    ops = spectral_ops(f.grid)
    coeffs = ops.forward(f.values)
    return VectorField(f.grid, [ops.derivative(coeffs, axis) for axis in range(f.grid.dim)])


def gradient_tensor(v):
    """All first derivatives of a vector field as ``out[i][j] = d v_i / d x_j``."""
    ops = spectral_ops(v.grid)
    result = []
    for component in v.components:
        coeffs = ops.forward(component)
        result.append([ops.derivative(coeffs, axis) for axis in range(v.grid.dim)])
    return result


def perp_gradient(theta):
    """``(-d theta/dy, d theta/dx)`` on a 2D grid."""
    _require_dim(theta, 2, 'perp_gradient')
    grad = gradient(theta)
    return VectorField(theta.grid, [-grad.components[1], grad.components[0]])


def sqg_velocity(theta):
    """SQG velocity ``u = grad-perp (-Laplacian)^(-1/2) theta``.

    The mean of theta is dropped, so ``u_hat(0) = 0`` and the result is
    divergence-free to round-off.
    """
    _require_dim(theta, 2, 'sqg_velocity')
    _require_finite(theta, 'theta')
    ops = spectral_ops(theta.grid)
    coeffs = ops.forward(theta.values)
    coeffs[ops.zero_mode] = 0.0
    scaled = coeffs / ops.k_abs_safe
    ux = ops.inverse(-1j * ops.k_deriv[1] * scaled)
    uy = ops.inverse(1j * ops.k_deriv[0] * scaled)
    return VectorField(theta.grid, [ux, uy])


def divergence(v):
    ops = spectral_ops(v.grid)
    coeffs = sum(1j * ops.k_deriv[axis] * ops.forward(c) for axis, c in enumerate(v.components))
    return ScalarField(v.grid, ops.inverse(coeffs))


def curl(v):
    """Curl of a vector field: a VectorField in 3D, the scalar vorticity in 2D."""
    ops = spectral_ops(v.grid)
    if v.grid.dim == 2:
        vx, vy = (ops.forward(c) for c in v.components)
        return ScalarField(v.grid, ops.inverse(1j * ops.k_deriv[0] * vy - 1j * ops.k_deriv[1] * vx))
    kx, ky, kz = ops.k_deriv
    vx, vy, vz = (ops.forward(c) for c in v.components)
    return VectorField(v.grid, [
        ops.inverse(1j * (ky * vz - kz * vy)),
        ops.inverse(1j * (kz * vx - kx * vz)),
        ops.inverse(1j * (kx * vy - ky * vx)),
    ])


def laplacian(f):
    ops = spectral_ops(f.grid)
    return ScalarField(f.grid, ops.inverse(-ops.k2 * ops.forward(f.values)))


def antiderivative(v):
    """Mean-free potential ``phi`` whose gradient is the curl-free part of ``v``."""
    ops = spectral_ops(v.grid)
    coeffs = sum(-1j * ops.k_deriv[axis] * ops.forward(c) for axis, c in enumerate(v.components))
    coeffs = coeffs / ops.k2_deriv_safe
    coeffs[ops.zero_mode] = 0.0
    return ScalarField(v.grid, ops.inverse(coeffs))


def project_solenoidal(v):
    """Remove the gradient part of ``v``: ``v_hat - k (k . v_hat) / |k|^2``."""
    ops = spectral_ops(v.grid)
    coeffs = [ops.forward(c) for c in v.components]
    k_dot_v = sum(k * c for k, c in zip(ops.k_deriv, coeffs)) / ops.k2_deriv_safe
    return VectorField(v.grid, [ops.inverse(c - k * k_dot_v) for k, c in zip(ops.k_deriv, coeffs)])


def relative_divergence(v):
    """``max|div v| / max|v|`` (0 for the zero field)."""
    scale = v.max_magnitude()
    if scale == 0.0:
        return 0.0
    return divergence(v).max_abs() / scale


def biot_savart_3d(omega, project=False):
    """Velocity from vorticity, ``u_hat = i k x omega_hat / |k|^2``.

    The mean of omega cannot be inverted and is ignored. Input whose
    relative divergence exceeds ``DIVERGENCE_TOLERANCE`` is rejected unless
    ``project`` is set, in which case it is projected first.
    """
    _require_dim(omega, 3, 'biot_savart_3d')
    _require_finite(omega, 'vorticity')
    excess = relative_divergence(omega)
    if excess > DIVERGENCE_TOLERANCE:
        if not project:
            raise FieldError(f'vorticity is not solenoidal: max|div w|/max|w| = {excess:.3e} '
                             f'exceeds {DIVERGENCE_TOLERANCE:.0e}; project it first')
        omega = project_solenoidal(omega)
    ops = spectral_ops(omega.grid)
    wx, wy, wz = (ops.forward(c) / ops.k2_deriv_safe for c in omega.components)
    kx, ky, kz = ops.k_deriv
    return VectorField(omega.grid, [
        ops.inverse(1j * (ky * wz - kz * wy)),
        ops.inverse(1j * (kz * wx - kx * wz)),
        ops.inverse(1j * (kx * wy - ky * wx)),
    ])


def dealias(f_spectral, grid):
    """Zero every mode with some ``|m_i| > n_i / 3`` (real-to-complex layout)."""
    ops = spectral_ops(grid)
    if f_spectral.shape != ops.spectral_shape:
        raise FieldError(f'spectral array has shape {f_spectral.shape}, grid expects {ops.spectral_shape}')
    return np.where(ops.dealias_mask, f_spectral, 0.0)


def dealias_field(f):
    """Physical-space convenience wrapper around :func:`dealias`."""
    ops = spectral_ops(f.grid)
    if isinstance(f, ScalarField):
        return ScalarField(f.grid, ops.inverse(dealias(ops.forward(f.values), f.grid)))
    return VectorField(f.grid, [ops.inverse(dealias(ops.forward(c), f.grid)) for c in f.components])


def parseval_sum(f):
    """Spectral side of Parseval's identity, equal to ``sum(f.values ** 2)``."""
    ops = spectral_ops(f.grid)
    coeffs = ops.forward(f.values)
    return float(np.sum(ops.half_weight * np.abs(coeffs) ** 2) / f.grid.size)


def spectral_tail_fraction(v):
    """Fraction of ``sum |v_hat|^2`` in the top octave of the dealiased band."""
    ops = spectral_ops(v.grid)
    position = np.zeros(ops.spectral_shape)
    for modes, count in zip(ops.modes, v.grid.n):
        position = np.maximum(position, np.abs(modes) / (count * DEALIAS_FRACTION))
    tail = position > 0.5
    total = 0.0
    upper = 0.0
    for component in v.components:
        power = ops.half_weight * np.abs(ops.forward(component)) ** 2
        total += float(np.sum(power))
        upper += float(np.sum(power[tail]))
    if total == 0.0:
        return 0.0
    return upper / total

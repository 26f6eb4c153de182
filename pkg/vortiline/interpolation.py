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


"""Evaluation of gridded fields at arbitrary points.

Two methods are available. ``spectral`` sums the Fourier series of the
field exactly at each point and is used for grids with at most
``SPECTRAL_INTERPOLATION_MAX_N`` points per axis. ``cubic`` uses periodic
B-spline (tricubic in 3D) interpolation through ``scipy.ndimage`` and is the
default for larger grids; ``quintic`` is the same with fifth-order splines.
"""

import attr
import numpy as np
import scipy.ndimage as ndi

from .constants import SPECTRAL_BATCH, SPECTRAL_INTERPOLATION_MAX_N
from .errors import FieldError
from .fields import ScalarField, VectorField, spectral_ops

SPLINE_ORDERS = {'cubic': 3, 'quintic': 5}


def default_method(grid):
    return 'spectral' if max(grid.n) <= SPECTRAL_INTERPOLATION_MAX_N else 'cubic'


def _as_arrays(fields):
    if isinstance(fields, (ScalarField, VectorField)):
        fields = [fields]
    grid = None
    arrays = []
    for field in fields:
        if grid is None:
            grid = field.grid
        elif field.grid != grid:
            raise FieldError('all interpolated fields must share one grid')
        if isinstance(field, ScalarField):
            arrays.append(field.values)
        else:
            arrays.extend(field.components)
    if grid is None:
        raise FieldError('nothing to interpolate')
    return grid, arrays


@attr.s(init=False)
class FieldInterpolator(object):
    """Evaluate a stack of fields sharing one grid at a set of points.

    Vector fields contribute one column per component, in order.

    Example:
        >>> interp = FieldInterpolator([velocity, theta])
        >>> values = interp(points)   # shape (len(points), dim + 1)
    """

    grid = attr.ib()
    method = attr.ib()
    columns = attr.ib()

    def __init__(self, fields, method='auto'):
        grid, arrays = _as_arrays(fields)
        if method == 'auto':
            method = default_method(grid)
        if method != 'spectral' and method not in SPLINE_ORDERS:
            raise FieldError(f'unknown interpolation method {method!r}')
        self.grid = grid
        self.method = method
        self.columns = len(arrays)
        if method == 'spectral':
            ops = spectral_ops(grid)
            self._coeffs = [ops.half_weight * ops.forward(a) / grid.size for a in arrays]
            self._k = [np.ravel(k) for k in ops.k]
        else:
            order = SPLINE_ORDERS[method]
            self._order = order
            self._coeffs = [ndi.spline_filter(a, order=order, mode='grid-wrap') for a in arrays]

    def __call__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[1] != self.grid.dim:
            raise FieldError(f'points have {points.shape[1]} coordinates, grid is {self.grid.dim}D')
        if self.method == 'spectral':
            return self._spectral(points)
        return self._spline(points)

    def _spline(self, points):
        coords = (points / np.asarray(self.grid.spacing)).T
        out = np.empty((points.shape[0], self.columns))
        for column, coeffs in enumerate(self._coeffs):
            out[:, column] = ndi.map_coordinates(coeffs, coords, order=self._order,
                                                 mode='grid-wrap', prefilter=False)
        return out

    def _spectral(self, points):
        out = np.empty((points.shape[0], self.columns))
        for start in range(0, points.shape[0], SPECTRAL_BATCH):
            batch = points[start:start + SPECTRAL_BATCH]
            phases = [np.exp(1j * batch[:, axis, None] * k[None, :]) for axis, k in enumerate(self._k)]
            for column, coeffs in enumerate(self._coeffs):
                out[start:start + batch.shape[0], column] = self._contract(coeffs, phases)
        return out

    @staticmethod
    def _contract(coeffs, phases):
        # innermost axis first: (P, n_last) x (..., n_last) -> (P, ...)
        partial = np.tensordot(phases[-1], coeffs, axes=([1], [coeffs.ndim - 1]))
        for phase in reversed(phases[:-1]):
            partial = np.einsum('p...j,pj->p...', partial, phase)
        return partial.real


def evaluate(field, points, method='auto'):
    """One-off evaluation of a single field; returns ``(P,)`` or ``(P, dim)``."""
    values = FieldInterpolator(field, method=method)(points)
    if isinstance(field, ScalarField):
        return values[:, 0]
    return values

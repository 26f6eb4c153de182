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


"""Binary snapshot files.

Layout (all little-endian)::

    offset  size        content
    0       4           magic b'VLN1'
    4       4           u32 dim (2 or 3)
    8       4 * dim     u32 point count per axis
    ...     4           u32 component count
    ...     8           f64 time
    ...     8 * dim     f64 domain length per axis
    ...     8 * N * C   f64 payload, component after component, each row-major

where ``N`` is the product of the point counts and ``C`` the component
count. A scalar field has one component, a vector field ``dim``.
"""

import os
import struct

import attr
import numpy as np

from .constants import SNAPSHOT_MAGIC, SNAPSHOT_PATTERN, SNAPSHOT_SUFFIX
from .errors import FieldError, SnapshotError
from .fields import Grid, ScalarField, VectorField

_PAYLOAD = np.dtype('<f8')


@attr.s(frozen=True)
class SnapshotHeader(object):
    dim = attr.ib()
    n = attr.ib(converter=tuple)
    components = attr.ib()
    time = attr.ib()
    length = attr.ib(converter=tuple)

    @property
    def grid(self):
        return Grid(self.n, self.length)

    def pack(self):
        return (SNAPSHOT_MAGIC
                + struct.pack(f'<I{self.dim}II', self.dim, *self.n, self.components)
                + struct.pack(f'<d{self.dim}d', self.time, *self.length))

    @property
    def nbytes(self):
        return 4 + 4 + 4 * self.dim + 4 + 8 + 8 * self.dim


def snapshot_name(index):
    return SNAPSHOT_PATTERN.format(index=index)


def write_snapshot(path, field, time):
    """Write a ScalarField or VectorField with its time stamp; returns the header."""
    if isinstance(field, ScalarField):
        arrays = [field.values]
    elif isinstance(field, VectorField):
        arrays = list(field.components)
    else:
        raise FieldError(f'cannot write {type(field).__name__} as a snapshot')
    grid = field.grid
    header = SnapshotHeader(grid.dim, grid.n, len(arrays), float(time), grid.length)
    with open(path, 'wb') as fh:
        fh.write(header.pack())
        for array in arrays:
            fh.write(np.ascontiguousarray(array, dtype=_PAYLOAD).tobytes(order='C'))
    return header


def read_header(data):
    if len(data) < 8 or data[:4] != SNAPSHOT_MAGIC:
        raise SnapshotError(f'not a snapshot: expected magic {SNAPSHOT_MAGIC!r}')
    (dim,) = struct.unpack_from('<I', data, 4)
    if dim not in (2, 3):
        raise SnapshotError(f'snapshot dimension must be 2 or 3, got {dim}')
    fixed = 4 + 4 + 4 * dim + 4 + 8 + 8 * dim
    if len(data) < fixed:
        raise SnapshotError('snapshot header is truncated')
    counts = struct.unpack_from(f'<{dim}I', data, 8)
    (components,) = struct.unpack_from('<I', data, 8 + 4 * dim)
    (time,) = struct.unpack_from('<d', data, 12 + 4 * dim)
    length = struct.unpack_from(f'<{dim}d', data, 20 + 4 * dim)
    if components not in (1, dim):
        raise SnapshotError(f'snapshot has {components} components, expected 1 or {dim}')
    return SnapshotHeader(dim, counts, components, time, length)


def read_snapshot(path):
    """Return ``(header, field)`` for a snapshot file."""
    with open(path, 'rb') as fh:
        data = fh.read()
    header = read_header(data)
    size = int(np.prod(header.n))
    expected = header.nbytes + 8 * size * header.components
    if len(data) != expected:
        raise SnapshotError(f'{os.fspath(path)}: payload is {len(data) - header.nbytes} bytes, '
                            f'expected {expected - header.nbytes}')
    try:
        grid = header.grid
    except FieldError as err:
        raise SnapshotError(f'{os.fspath(path)}: {err}') from err
    payload = np.frombuffer(data, dtype=_PAYLOAD, offset=header.nbytes)
    arrays = payload.reshape((header.components,) + tuple(header.n)).astype(np.float64)
    if header.components == 1:
        return header, ScalarField(grid, arrays[0])
    return header, VectorField(grid, list(arrays))


def list_snapshots(directory):
    """Snapshot paths in a directory, in index order."""
    if not os.path.isdir(directory):
        return []
    names = sorted(name for name in os.listdir(directory)
                   if name.startswith('snapshot_') and name.endswith(SNAPSHOT_SUFFIX))
    return [os.path.join(directory, name) for name in names]

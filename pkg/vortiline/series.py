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


"""CSV schemas, writers and readers.

Every CSV starts with exactly one header line naming the columns listed in
:mod:`vortiline.constants`. Floats are written with ``repr`` so that a
value read back is bit-identical to the value written; booleans are
written as ``0``/``1``.
"""

import csv
import math

import numpy as np

from .errors import SnapshotError


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return '1' if value else '0'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def curve_columns(dim):
    coords = ('x', 'y', 'z')[:dim]
    return ('s', 'beta') + coords + ('omega_mag', 'kappa', 'tau', 'u_xi', 'u_xi_perp', 'alpha', 'flags')


class CsvWriter(object):
    """Write rows under a fixed header; use as a context manager.

    Rows are flushed as they are written so a run that aborts still leaves
    a readable partial file.
    """

    def __init__(self, path, columns):
        self.path = path
        self.columns = tuple(columns)
        self._fh = None
        self._writer = None
        self.rows = 0

    def __enter__(self):
        self._fh = open(self.path, 'w', newline='', encoding='utf-8')
        self._writer = csv.writer(self._fh, lineterminator='\n')
        self._writer.writerow(self.columns)
        return self

    def __exit__(self, exc_type, exc, tb):
        self._fh.close()
        return False

    def write(self, row):
        if len(row) != len(self.columns):
            raise ValueError(f'row has {len(row)} values, {self.path} has {len(self.columns)} columns')
        self._writer.writerow([format_value(v) for v in row])
        self._fh.flush()
        self.rows += 1


def write_csv(path, columns, rows):
    with CsvWriter(path, columns) as writer:
        for row in rows:
            writer.write(row)


def _parse(text):
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(path, columns=None):
    """Read a CSV into ``{column: numpy array}``; checks the header when ``columns`` is given."""
    with open(path, newline='', encoding='utf-8') as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SnapshotError(f'{path} is empty') from None
        if columns is not None and header != tuple(columns):
            raise SnapshotError(f'{path} has columns {",".join(header)}, expected {",".join(columns)}')
        data = {name: [] for name in header}
        for row in reader:
            for name, text in zip(header, row):
                data[name].append(_parse(text))
    result = {}
    for name, values in data.items():
        if all(isinstance(v, float) for v in values):
            result[name] = np.array(values, dtype=np.float64)
        else:
            result[name] = np.array(values, dtype=object)
    return result


def finite_or_nan(value):
    return value if value is not None and math.isfinite(value) else math.nan

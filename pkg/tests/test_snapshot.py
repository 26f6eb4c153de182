"""Test the binary snapshot format."""
import struct

import numpy as np
import pytest

from vortiline.errors import SnapshotError
from vortiline.fields import Grid, ScalarField, VectorField
from vortiline.snapshot import list_snapshots, read_header, read_snapshot, snapshot_name, write_snapshot


def test_scalar_snapshot_survives_bit_for_bit(tmp_path):
    grid = Grid((16, 8), (2.0, 1.0))
    values = np.random.default_rng(0).standard_normal(grid.shape)
    path = tmp_path / snapshot_name(0)
    write_snapshot(path, ScalarField(grid, values), 0.125)
    header, field = read_snapshot(path)
    assert header.time == 0.125
    assert header.grid == grid
    assert isinstance(field, ScalarField)
    assert np.array_equal(field.values, values)


def test_vector_snapshot_layout(tmp_path):
    """Header fields sit at the documented offsets, components follow in order."""
    grid = Grid((8, 8, 8))
    rng = np.random.default_rng(1)
    components = [rng.standard_normal(grid.shape) for _ in range(3)]
    path = tmp_path / 'w.vln'
    write_snapshot(path, VectorField(grid, components), 2.5)
    data = path.read_bytes()
    assert data[:4] == b'VLN1'
    assert struct.unpack_from('<I', data, 4) == (3,)
    assert struct.unpack_from('<3I', data, 8) == (8, 8, 8)
    assert struct.unpack_from('<I', data, 20) == (3,)
    assert struct.unpack_from('<d', data, 24) == (2.5,)
    assert len(data) == 24 + 8 + 24 + 3 * 8 * 512
    _, field = read_snapshot(path)
    for read, written in zip(field.components, components):
        assert np.array_equal(read, written)


def test_bad_magic_rejected():
    with pytest.raises(SnapshotError, match='magic'):
        read_header(b'NOPE' + bytes(64))


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / 'short.vln'
    write_snapshot(path, ScalarField.zeros(Grid((8, 8))), 0.0)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(SnapshotError, match='payload'):
        read_snapshot(path)


def test_invalid_grid_in_header_rejected(tmp_path):
    """A header announcing a non power-of-two grid is a snapshot error."""
    path = tmp_path / 'odd.vln'
    header = b'VLN1' + struct.pack('<I2II', 2, 6, 6, 1) + struct.pack('<d2d', 0.0, 1.0, 1.0)
    path.write_bytes(header + bytes(8 * 36))
    with pytest.raises(SnapshotError, match='powers of two'):
        read_snapshot(path)


def test_list_snapshots_in_index_order(tmp_path):
    grid = Grid((8, 8))
    for index in (2, 0, 10, 1):
        write_snapshot(tmp_path / snapshot_name(index), ScalarField.zeros(grid), float(index))
    (tmp_path / 'series.csv').write_text('time\n')
    names = [path.rsplit('/', 1)[-1] for path in list_snapshots(str(tmp_path))]
    assert names == [snapshot_name(i) for i in (0, 1, 2, 10)]


def test_list_snapshots_missing_directory(tmp_path):
    assert list_snapshots(str(tmp_path / 'absent')) == []

"""Test plot reports rendered from CSV outputs."""
import os
import shutil

import pytest

from vortiline.errors import SnapshotError
from vortiline.report import build_figure, load_tables, render_report

DATA = os.path.join(os.path.dirname(__file__), 'data')


def test_load_tables():
    tables = load_tables(DATA)
    assert set(tables) == {'series.csv', 'envelope.csv', 'identity.csv'}
    assert tables['envelope.csv']['endpoint_ok'].tolist() == [1.0, 1.0, 0.0, 1.0]


def test_load_tables_needs_a_csv(tmp_path):
    with pytest.raises(SnapshotError, match='nothing to plot'):
        load_tables(str(tmp_path))


def test_panels_follow_the_tables(tmp_path):
    assert len(build_figure(load_tables(DATA)).axes) == 3
    shutil.copy(os.path.join(DATA, 'series.csv'), tmp_path)
    assert len(build_figure(load_tables(str(tmp_path))).axes) == 1


def test_render_both_formats(tmp_path):
    paths = render_report(DATA, str(tmp_path), ('svg', 'png'))
    assert [os.path.basename(p) for p in paths] == ['report.svg', 'report.png']
    with open(paths[1], 'rb') as fh:
        assert fh.read(8) == b'\x89PNG\r\n\x1a\n'


def test_svg_is_reproducible(tmp_path):
    """No dates and salted ids: the same CSVs give the same bytes."""
    first, = render_report(DATA, str(tmp_path / 'a'), ('svg',))
    second, = render_report(DATA, str(tmp_path / 'b'), ('svg',))
    with open(first, 'rb') as a, open(second, 'rb') as b:
        content = a.read()
        assert content == b.read()
    assert b'<dc:date>' not in content


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError, match='unknown report format'):
        render_report(DATA, str(tmp_path), ('pdf',))

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


"""Static plot reports rendered from the CSV outputs alone.

Rendering is byte-for-byte reproducible: the Agg/SVG backends are used
without a display, SVG text is kept as text, element ids are salted with
a fixed string and no creation date or software tag is embedded.
"""

import logging
import os

import matplotlib
from matplotlib.figure import Figure
import numpy as np

from .constants import (DIAGNOSTICS_FILE, ENVELOPE_FILE, IDENTITY_FILE, REPORT_STEM, SERIES_FILE)
from .errors import SnapshotError
from .series import read_csv

logger = logging.getLogger(__name__)

FORMATS = ('svg', 'png')
FLAG_NAMES = ('kappa_ok', 'tau_ok', 'endpoint_ok', 'c0_ok', 'endpoint_at_max')

_STYLE = {
    'svg.hashsalt': 'vortiline',
    'svg.fonttype': 'none',
    'font.family': 'DejaVu Sans',
    'font.size': 9.0,
    'axes.grid': True,
    'grid.alpha': 0.3,
    'figure.dpi': 100,
}
_METADATA = {'svg': {'Date': None, 'Creator': None}, 'png': {'Software': None}}


def load_tables(directory):
    """Every known CSV found in ``directory``, keyed by file name."""
    tables = {}
    for name in (SERIES_FILE, DIAGNOSTICS_FILE, ENVELOPE_FILE, IDENTITY_FILE):
        path = os.path.join(directory, name)
        if os.path.isfile(path):
            tables[name] = read_csv(path)
    if not tables:
        raise SnapshotError(f'nothing to plot in {directory}: expected at least one of '
                            f'{SERIES_FILE}, {DIAGNOSTICS_FILE}, {ENVELOPE_FILE}, {IDENTITY_FILE}')
    return tables


def _growth_panel(ax, tables):
    if ENVELOPE_FILE in tables:
        data = tables[ENVELOPE_FILE]
        ax.semilogy(data['time'], data['Omega'], color='black', label='max |w|')
        ax.semilogy(data['time'], data['bound_thm22'], color='tab:blue', linestyle='--',
                    label='exponential envelope')
        ax.semilogy(data['time'], data['bound_thm24'], color='tab:red', linestyle=':',
                    label='double-exponential envelope')
    elif DIAGNOSTICS_FILE in tables:
        data = tables[DIAGNOSTICS_FILE]
        ax.semilogy(data['time'], data['Omega'], color='black', label='max |w|')
    else:
        data = tables[SERIES_FILE]
        column = [name for name in data if name not in ('time', 'dt')][0]
        ax.semilogy(data['time'], data[column], color='black', label=column)
    ax.set_ylabel('growth')
    ax.legend(loc='upper left', frameon=False)


def _identity_panel(ax, data):
    residual = np.asarray(data['relative_residual'], dtype=np.float64)
    ax.semilogy(data['time'], np.where(residual > 0.0, residual, np.nan), color='tab:green', marker='.',
                label='relative identity residual')
    ax.set_ylabel('residual')
    ax.legend(loc='upper left', frameon=False)


def _flags_panel(ax, data):
    for offset, name in enumerate(FLAG_NAMES):
        values = np.asarray(data[name], dtype=np.float64)
        ax.step(data['time'], 0.8 * values + 1.2 * offset, where='post', label=name)
    ax.set_yticks([1.2 * i + 0.4 for i in range(len(FLAG_NAMES))])
    ax.set_yticklabels(FLAG_NAMES)
    ax.set_ylim(-0.2, 1.2 * len(FLAG_NAMES))


def build_figure(tables, title='vortiline report'):
    panels = [_growth_panel]
    if IDENTITY_FILE in tables:
        panels.append(lambda ax, t: _identity_panel(ax, t[IDENTITY_FILE]))
    if ENVELOPE_FILE in tables:
        panels.append(lambda ax, t: _flags_panel(ax, t[ENVELOPE_FILE]))
    fig = Figure(figsize=(7.0, 2.6 * len(panels)))
    axes = fig.subplots(len(panels), 1, sharex=True, squeeze=False)[:, 0]
    for ax, panel in zip(axes, panels):
        panel(ax, tables)
    axes[-1].set_xlabel('t')
    axes[0].set_title(title)
    fig.tight_layout()
    return fig


def render_report(directory, output_dir=None, formats=FORMATS, title='vortiline report'):
    """Write ``report.svg`` and/or ``report.png`` for the CSVs in ``directory``; returns the paths."""
    output_dir = output_dir or directory
    for fmt in formats:
        if fmt not in FORMATS:
            raise ValueError(f'unknown report format {fmt!r}')
    tables = load_tables(directory)
    os.makedirs(output_dir, exist_ok=True)
    paths = []
    with matplotlib.rc_context(_STYLE):
        fig = build_figure(tables, title)
        for fmt in formats:
            path = os.path.join(output_dir, f'{REPORT_STEM}.{fmt}')
            fig.savefig(path, format=fmt, metadata=_METADATA[fmt])
            paths.append(path)
            logger.info('wrote %s', path)
    return paths

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


"""Run driver shared by the SQG and 3D Euler solvers.

A model adapter provides ``name``, ``series_columns``,
``initial_values(config)``, ``rhs``, ``max_speed``, ``describe``,
``to_field``, ``series_row(values, time, dt)``, ``observe(values, time)``
and ``flags()``; the driver owns the time loop and every file it writes.
"""

import logging
import os
import time as wallclock

from .constants import SERIES_FILE
from .errors import NumericalError
from .fields import set_workers
from .manifest import RunManifest
from .series import CsvWriter
from .snapshot import snapshot_name, write_snapshot
from .stepping import march, snapshot_times

logger = logging.getLogger(__name__)


def run_model(config, model):
    """March ``model`` from ``t = 0`` to ``config.t_end``; returns the RunManifest.

    Snapshots land at every ``config.snapshot_interval`` (and at both ends),
    ``series.csv`` gets the initial row with ``dt = 0`` and one row per step.
    On a numerical or I/O failure a manifest with ``status = 'aborted'``
    listing what was written so far is left behind and the error re-raised.
    """
    out = config.output_dir
    os.makedirs(out, exist_ok=True)
    set_workers(config.threads)
    manifest = RunManifest(command=f'run-{model.name}', config_text=config.text, model=model.name)
    outputs = [SERIES_FILE]
    started = wallclock.perf_counter()

    def on_output(values, time, index):
        name = snapshot_name(index)
        write_snapshot(os.path.join(out, name), model.to_field(values), time)
        manifest.add_snapshot(name, time)
        outputs.append(name)
        logger.info('snapshot %s at t=%.6g', name, time)

    try:
        values = model.initial_values(config)
        with CsvWriter(os.path.join(out, SERIES_FILE), model.series_columns) as writer:
            writer.write(model.series_row(values, 0.0, 0.0))
            model.observe(values, 0.0)

            def on_step(values, time, dt):
                writer.write(model.series_row(values, time, dt))
                model.observe(values, time)

            values, time, log = march(
                values, 0.0, config.stepper,
                rhs=model.rhs, max_speed=model.max_speed, spacing=config.grid.min_spacing,
                t_end=config.t_end,
                outputs=snapshot_times(0.0, config.t_end, config.snapshot_interval),
                on_step=on_step, on_output=on_output, max_steps=config.max_steps,
                describe=model.describe)
    except (NumericalError, OSError) as err:
        manifest.status = 'aborted'
        manifest.error = str(err)
        manifest.flags = model.flags()
        try:
            manifest.write(out, outputs)
        except OSError:
            logger.error('could not write the partial manifest to %s', out)
        raise
    manifest.status = 'complete'
    manifest.t_end = time
    manifest.steps = log.steps
    manifest.cfl_violations = [{'step': step, 'time': t, 'cfl': cfl} for step, t, cfl in log.cfl_violations]
    manifest.flags = model.flags()
    if time < config.t_end:
        manifest.note(f'stopped at t={time!r} before t_end={config.t_end!r} (max_steps)')
    manifest.write(out, outputs)
    logger.info('%s run: %d steps to t=%.6g in %.2fs', model.name, log.steps, time,
                wallclock.perf_counter() - started)
    return manifest

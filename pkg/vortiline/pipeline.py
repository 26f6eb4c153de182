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


"""Post-processing commands: ``trace``, ``diagnose`` and ``appendix-check``.

``diagnose`` reads the snapshots of a run, follows one material segment
through them (re-seeding when asked to, or when the segment cannot be
carried any further) and writes::

    diagnostics.csv        one row per snapshot
    curves/curve_NNNNNN.csv per-sample geometry for each snapshot
    identity.csv           evolution-identity residuals per material family
    envelope.csv           growth envelopes and hypothesis flags
    diagnose_report.json   constants, monitor results and notes
    manifest.json
"""

import json
import logging
import math
import os
import time as wallclock

import attr
import numpy as np

from .clebsch import (SplitConfig, VelocitySplitter, family_member, far_field_scaling, log_velocity_check,
                      make_clebsch_family, term_scaling, vortex_line_probes)
from .constants import (APPENDIX_COLUMNS, APPENDIX_FILE, APPENDIX_REPORT_FILE, CURVE_DIR, CURVE_PATTERN,
                        DIAGNOSE_REPORT_FILE, DIAGNOSTICS_COLUMNS, DIAGNOSTICS_FILE, ENVELOPE_COLUMNS,
                        ENVELOPE_FILE, IDENTITY_COLUMNS, IDENTITY_FILE, MANIFEST_FILE, SNAPSHOT_PATTERN)
from .curves import (advect_segment, alpha_consistency, diagnose_segment, reseed, sampler, tau_relation_residual,
                     trace_segment, write_curve)
from .errors import SegmentError, SnapshotError
from .fields import ScalarField, biot_savart_3d, perp_gradient, set_workers, sqg_velocity
from .growth import (critical_case_monitor, growth_envelope, identity_residuals, measured_constants,
                     q_envelope)
from .manifest import RunManifest, read_manifest
from .series import write_csv
from .snapshot import list_snapshots, read_snapshot

logger = logging.getLogger(__name__)

EXPECTED_LAYOUT = (
    'expected a run directory written by run-sqg or run-euler3d:\n'
    f'  {SNAPSHOT_PATTERN.format(index=0)}, {SNAPSHOT_PATTERN.format(index=1)}, ...  '
    '(theta for SQG, vorticity for Euler)\n'
    f'  {MANIFEST_FILE}  (optional; supplies the inviscid and under-resolved flags)')

# advection substeps move a point at most this many grid spacings
_SUBSTEP_CFL = 0.5


@attr.s(frozen=True, eq=False)
class Frame(object):
    """One snapshot with its line field and velocity ready for point evaluation."""

    index = attr.ib()
    time = attr.ib()
    line = attr.ib()
    velocity = attr.ib()


def frame_from_field(field, time, index=0, method='auto'):
    if isinstance(field, ScalarField):
        line, velocity = perp_gradient(field), sqg_velocity(field)
    else:
        line, velocity = field, biot_savart_3d(field, project=True)
    return Frame(index, float(time), sampler(line, method), sampler(velocity, method))


def load_frames(run_dir, method='auto'):
    paths = list_snapshots(run_dir)
    if not paths:
        raise SnapshotError(f'no snapshots in {run_dir}; {EXPECTED_LAYOUT}')
    frames = []
    for index, path in enumerate(paths):
        header, field = read_snapshot(path)
        frames.append(frame_from_field(field, header.time, index, method))
    times = np.array([f.time for f in frames])
    if np.any(np.diff(times) <= 0.0):
        raise SnapshotError(f'snapshot times in {run_dir} do not increase strictly')
    return frames


def _run_flags(run_dir, config):
    path = os.path.join(run_dir, MANIFEST_FILE)
    flags = {'inviscid': config.stepper.inviscid, 'under_resolved_since': None}
    if os.path.isfile(path):
        try:
            flags.update(read_manifest(path).flags)
        except (ValueError, TypeError) as err:
            logger.warning('ignoring unreadable run manifest %s: %s', path, err)
    return flags


def _trace(frame, config, reseeding=False):
    segment = config.segment
    if reseeding or segment.seed is None:
        return reseed(frame.line, segment.target_length, segment.orientation, time=frame.time,
                      tolerance=segment.tolerance)
    return trace_segment(frame.line, segment.seed, segment.target_length, segment.orientation,
                         time=frame.time, tolerance=segment.tolerance)


def trace_snapshot(config, snapshot_path, output_path, method='auto'):
    """Trace one segment on one snapshot and write its curve dump; returns the samples."""
    header, field = read_snapshot(snapshot_path)
    frame = frame_from_field(field, header.time, method=method)
    segment = _trace(frame, config)
    _, samples = diagnose_segment(segment, frame.line, frame.velocity)
    write_curve(output_path, samples)
    logger.info('traced %s: L=%.6g with %d samples', segment.material_id, segment.length, len(segment))
    return samples


def _substeps(start, end, dt, h):
    speed = max(start.velocity.max_magnitude, end.velocity.max_magnitude)
    return max(1, int(math.ceil(speed * dt / (_SUBSTEP_CFL * h))))


def track_segments(frames, config):
    """Diagnosed ``(segment, diagnostics, samples)`` for every frame, one material segment at a time."""
    interval = config.segment.reseed_interval
    segment = _trace(frames[0], config)
    series = []
    previous = None
    for frame in frames:
        if previous is not None:
            dt = frame.time - previous.time
            due = interval > 0.0 and frame.time - segment.reference_time >= interval * (1.0 - 1e-12)
            if due:
                segment = _trace(frame, config, reseeding=True)
            else:
                try:
                    segment = advect_segment(segment, (previous.velocity, frame.velocity), dt,
                                             line_field=frame.line,
                                             substeps=_substeps(previous, frame, dt, segment.h))
                except SegmentError as err:
                    logger.warning('re-seeding at t=%.6g: %s', frame.time, err)
                    segment = _trace(frame, config, reseeding=True)
        series.append(segment)
        previous = frame
    return series


def _families(entries):
    """Split ``(segment, diagnostics, samples)`` entries into runs of one material id."""
    families = []
    for entry in entries:
        if families and families[-1][-1][0].material_id == entry[0].material_id:
            families[-1].append(entry)
        else:
            families.append([entry])
    return families


def _finite(value):
    value = float(value)
    return value if math.isfinite(value) else None


def diagnose(config, run_dir, output_dir=None, method='auto'):
    """Diagnose every snapshot of ``run_dir``; returns the report dictionary."""
    output_dir = output_dir or run_dir
    started = wallclock.perf_counter()
    set_workers(config.threads)
    frames = load_frames(run_dir, method)
    flags = _run_flags(run_dir, config)
    since = flags.get('under_resolved_since')
    inviscid = bool(flags.get('inviscid', True))

    os.makedirs(os.path.join(output_dir, CURVE_DIR), exist_ok=True)
    outputs = [DIAGNOSTICS_FILE, IDENTITY_FILE, ENVELOPE_FILE, DIAGNOSE_REPORT_FILE]
    entries = []
    report = {'tau_relation': [], 'alpha_consistency': [], 'notes': []}
    for frame, segment in zip(frames, track_segments(frames, config)):
        resolved = since is None or frame.time < since
        endpoint = frame.velocity.values(segment.points[:1])[0]
        diag, samples = diagnose_segment(segment, frame.line, frame.velocity, endpoint_velocity=endpoint,
                                         resolved=resolved, inviscid=inviscid)
        entries.append((segment, diag, samples))
        name = os.path.join(CURVE_DIR, CURVE_PATTERN.format(index=frame.index))
        write_curve(os.path.join(output_dir, name), samples)
        outputs.append(name)
        deviation, comparable = tau_relation_residual(samples)
        report['tau_relation'].append({'time': frame.time, 'max_deviation': deviation, 'comparable': comparable})
        report['alpha_consistency'].append({'time': frame.time, 'relative_difference': alpha_consistency(samples)})

    records = [diag for _, diag, _ in entries]
    write_csv(os.path.join(output_dir, DIAGNOSTICS_FILE), DIAGNOSTICS_COLUMNS, (d.row() for d in records))

    identity = []
    for family in _families(entries):
        if len(family) < 2:
            report['notes'].append(f'{family[0][0].material_id}: one snapshot only, no identity residual')
            continue
        identity.extend(identity_residuals(family))
    write_csv(os.path.join(output_dir, IDENTITY_FILE), IDENTITY_COLUMNS, (r.row() for r in identity))
    if identity:
        relative = np.array([r.relative_residual for r in identity])
        report['identity'] = {'median_relative_residual': float(np.median(relative)),
                              'max_relative_residual': float(np.max(relative))}

    envelope = growth_envelope(records, config.bounds)
    write_csv(os.path.join(output_dir, ENVELOPE_FILE), ENVELOPE_COLUMNS, envelope.rows())
    report['notes'].extend(envelope.notes)
    report['envelope'] = {
        'violations_thm22': [float(envelope.times[i]) for i in envelope.violations('thm22')],
        'violations_thm24': [float(envelope.times[i]) for i in envelope.violations('thm24')],
        'hypotheses_violated': envelope.hypotheses_violated,
    }
    _, constants = measured_constants(records, config.bounds)
    final = constants[-1]
    report['constants'] = {'c0': final.c0, 'C0': final.C0, 'Cl': final.Cl, 'Cu': _finite(final.Cu),
                           'Cw': _finite(final.Cw), 'C1': final.C1, 'CU': final.CU, 'CV': final.CV,
                           'T0': final.T0}
    q = q_envelope(records, config.bounds)
    report['q_envelope'] = {'dominated': bool(np.all(q.dominated)), 'chain_ok': bool(np.all(q.chain_ok))}
    report['critical'] = _critical(records, final, config.bounds.T, report['notes'])
    if config.model == 'sqg':
        ratios = [d.cu_ratio for d in records if math.isfinite(d.cu_ratio)]
        report['log_velocity_ratio_max'] = max(ratios) if ratios else None

    with open(os.path.join(output_dir, DIAGNOSE_REPORT_FILE), 'w', encoding='utf-8') as fh:
        fh.write(json.dumps(report, sort_keys=True, indent=2) + '\n')
    manifest = RunManifest(command='diagnose', config_text=config.text, model=config.model,
                           t_start=frames[0].time, t_end=frames[-1].time, status='complete',
                           steps=len(frames), flags=flags, notes=list(report['notes']))
    manifest.windows = [{'material_id': family[0][0].material_id, 't_start': family[0][1].time,
                         't_end': family[-1][1].time} for family in _families(entries)]
    manifest.write(output_dir, outputs)
    logger.info('diagnosed %d snapshots in %.2fs', len(frames), wallclock.perf_counter() - started)
    return report


def _critical(records, constants, candidates, notes):
    results = []
    for T in (tuple(candidates) or (None,)):
        try:
            found = critical_case_monitor(records, constants, T)
        except SegmentError as err:
            notes.append(f'critical-case monitor (T={T}): {err}')
            continue
        results.append({'T': found.T, 'T_fitted': found.T_fitted, 'p': found.p, 'sup_ratio': found.sup_ratio,
                        'ratio_ok': found.ratio_ok, 'bkm_integral': _finite(found.bkm_integral),
                        'divergent': found.divergent, 'velocity_integral': _finite(found.velocity_integral),
                        'scaling_ok': found.scaling_ok})
    return results


def appendix_check(config, output_dir):
    """Split the velocity of every Clebsch family member at its probe points; returns the report."""
    appendix = config.appendix
    started = wallclock.perf_counter()
    set_workers(config.threads)
    os.makedirs(output_dir, exist_ok=True)
    grid = appendix.grid
    rows, results, members, terms_by_member = [], [], [], {}
    for sharpness in appendix.lambdas:
        field = make_clebsch_family(grid, sharpness, appendix.amplitude, sharpen_psi=appendix.counterexample)
        splitter = VelocitySplitter(field, SplitConfig(appendix.rho, field.Omega))
        terms = [splitter(x) for x in vortex_line_probes(field, appendix.probes)]
        rows.extend(t.row(sharpness, i) for i, t in enumerate(terms))
        results.append((field, terms))
        members.append(family_member(field, terms, splitter.velocity))
        terms_by_member[repr(sharpness)] = [t.to_dict() for t in terms]
        logger.info('lambda=%g: Omega=%.6g, worst relative split error %.3e', sharpness, field.Omega,
                    max(t.relative_error for t in terms))
    write_csv(os.path.join(output_dir, APPENDIX_FILE), APPENDIX_COLUMNS, rows)

    notes = []
    report = {
        'counterexample': appendix.counterexample,
        'rho': appendix.rho,
        'members': [attr.asdict(m) for m in members],
        'terms': terms_by_member,
        'max_relative_error': max(t.relative_error for _, terms in results for t in terms),
        'max_middle_split_error': max(t.middle_split_error for _, terms in results for t in terms),
        'notes': notes,
    }
    for key, use_grid_max in (('log_velocity', False), ('log_velocity_grid', True)):
        try:
            report[key] = log_velocity_check(members, use_grid_max=use_grid_max).to_dict()
        except SegmentError as err:
            notes.append(f'{key}: {err}')
    scaling = term_scaling(results, appendix.rho)
    report['term_scaling'] = dict(attr.asdict(scaling), near_ok=scaling.near_ok, middle_ok=scaling.middle_ok)
    field = results[0][0]
    try:
        report['far_field'] = far_field_scaling(field, field.centre).to_dict()
    except SegmentError as err:
        notes.append(f'far field: {err}')
    with open(os.path.join(output_dir, APPENDIX_REPORT_FILE), 'w', encoding='utf-8') as fh:
        fh.write(json.dumps(report, sort_keys=True, indent=2) + '\n')
    manifest = RunManifest(command='appendix-check', config_text=config.text, model='clebsch',
                           status='complete', notes=notes)
    manifest.write(output_dir, [APPENDIX_FILE, APPENDIX_REPORT_FILE])
    logger.info('appendix check over %d members in %.2fs', len(members), wallclock.perf_counter() - started)
    return report

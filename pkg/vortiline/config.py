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


"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment, sections are dotted keys::

    model = sqg
    grid.n = 64
    time.t_end = 2.0
    ic.name = two_gaussian
    ic.width = 0.4
    output.dir = runs/sqg64

Lists are comma separated; booleans accept true/false, yes/no and 1/0.
:func:`parse_config` reports every problem it finds in one
:class:`~vortiline.errors.ConfigError`.
"""

import math

import attr

from . import euler3d, sqg
from .constants import CFL_TARGET, HYPERDIFFUSION_ORDER
from .curves import ORIENTATIONS
from .errors import ConfigError, VortilineError
from .fields import Grid
from .growth import BoundOverrides
from .stepping import TimeStepper

MODELS = {'sqg': sqg.INITIAL_CONDITIONS, 'euler3d': euler3d.INITIAL_CONDITIONS}

REQUIRED = object()

_TRUE = ('true', 'yes', '1')
_FALSE = ('false', 'no', '0')


def _parse_bool(text):
    lowered = text.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f'expected a boolean, got {text!r}')


def _parse_int(text):
    return int(text)


def _parse_float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f'expected a finite number, got {text!r}')
    return value


def _list_of(item):
    def parse(text):
        parts = [p.strip() for p in text.split(',')]
        if not all(parts):
            raise ValueError(f'empty item in list {text!r}')
        return tuple(item(p) for p in parts)
    return parse


def _parse_str(text):
    if not text:
        raise ValueError('expected a non-empty string')
    return text


PARSERS = {
    'str': _parse_str,
    'int': _parse_int,
    'float': _parse_float,
    'bool': _parse_bool,
    'ints': _list_of(_parse_int),
    'floats': _list_of(_parse_float),
}

# key: (kind, default)
SCHEMA = {
    'model': ('str', REQUIRED),
    'grid.n': ('ints', REQUIRED),
    'grid.length': ('floats', None),
    'time.t_end': ('float', REQUIRED),
    'time.dt': ('float', None),
    'time.cfl': ('float', CFL_TARGET),
    'time.adaptive': ('bool', True),
    'time.max_steps': ('int', None),
    'hyper.nu': ('float', 0.0),
    'hyper.order': ('int', HYPERDIFFUSION_ORDER),
    'ic.name': ('str', REQUIRED),
    'output.dir': ('str', REQUIRED),
    'output.snapshot_interval': ('float', None),
    'seed': ('int', 0),
    'segment.target_length': ('float', 1.0),
    'segment.reseed_interval': ('float', 0.0),
    'segment.orientation': ('str', 'max_at_end'),
    'segment.tolerance': ('float', 1e-8),
    'segment.seed': ('floats', None),
    'bounds.c0': ('float', None),
    'bounds.C0': ('float', None),
    'bounds.Cl': ('float', None),
    'bounds.Cu': ('float', None),
    'bounds.Cw': ('float', None),
    'bounds.T0': ('float', None),
    'bounds.T': ('floats', ()),
    'bounds.L0': ('float', None),
    'appendix.lambdas': ('floats', (1.0, 2.0, 4.0, 8.0, 16.0)),
    'appendix.rho': ('float', 0.5),
    'appendix.amplitude': ('float', 4.0),
    'appendix.probes': ('int', 20),
    'appendix.grid.n': ('ints', (1024, 64, 64)),
    'appendix.counterexample': ('bool', False),
    'runtime.threads': ('int', None),
}


@attr.s(frozen=True)
class SegmentConfig(object):
    target_length = attr.ib(default=1.0)
    reseed_interval = attr.ib(default=0.0)
    orientation = attr.ib(default='max_at_end')
    tolerance = attr.ib(default=1e-8)
    seed = attr.ib(default=None)


@attr.s(frozen=True)
class AppendixConfig(object):
    lambdas = attr.ib(default=(1.0, 2.0, 4.0, 8.0, 16.0))
    rho = attr.ib(default=0.5)
    amplitude = attr.ib(default=4.0)
    probes = attr.ib(default=20)
    grid_n = attr.ib(default=(1024, 64, 64))
    counterexample = attr.ib(default=False)

    @property
    def grid(self):
        return Grid(self.grid_n)


@attr.s(frozen=True)
class RunConfig(object):
    """A validated configuration; ``text`` keeps the source for the manifest echo."""

    model = attr.ib()
    grid = attr.ib()
    stepper = attr.ib()
    t_end = attr.ib()
    ic_name = attr.ib()
    ic_params = attr.ib()
    output_dir = attr.ib()
    snapshot_interval = attr.ib()
    max_steps = attr.ib(default=None)
    seed = attr.ib(default=0)
    segment = attr.ib(default=SegmentConfig())
    bounds = attr.ib(default=BoundOverrides())
    appendix = attr.ib(default=AppendixConfig())
    threads = attr.ib(default=None)
    text = attr.ib(default='', eq=False, repr=False)


def read_pairs(text):
    """``{key: value}`` from config text, plus a list of syntax errors."""
    pairs = {}
    errors = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key = key.strip()
        if not sep or not key:
            errors.append(f'line {number}: expected "key = value", got {raw.strip()!r}')
        elif key in pairs:
            errors.append(f'line {number}: duplicate key {key!r}')
        else:
            pairs[key] = value.strip()
    return pairs, errors


def _ic_params(model, name, raw, errors):
    registry = MODELS.get(model)
    if registry is None:
        return {}
    if name not in registry:
        errors.append(f'ic.name: unknown {model} initial condition {name!r} '
                      f'(choose from {", ".join(sorted(registry))})')
        return {}
    defaults = registry[name][1]
    params = {}
    for key, text in sorted(raw.items()):
        if key not in defaults:
            errors.append(f'unknown key {"ic." + key!r} for initial condition {name!r}')
            continue
        try:
            params[key] = _parse_float(text)
        except ValueError as err:
            errors.append(f'ic.{key}: {err}')
    return params


def parse_config(text):
    """Validate config text and build a :class:`RunConfig`."""
    pairs, errors = read_pairs(text)
    values = {}
    ic_raw = {}
    for key, raw in pairs.items():
        if key.startswith('ic.') and key != 'ic.name':
            ic_raw[key[3:]] = raw
        elif key not in SCHEMA:
            errors.append(f'unknown key {key!r}')
        else:
            try:
                values[key] = PARSERS[SCHEMA[key][0]](raw)
            except ValueError as err:
                errors.append(f'{key}: {err}')
    for key, (kind, default) in SCHEMA.items():
        if key in values or key in pairs:
            continue
        if default is REQUIRED:
            errors.append(f'missing required key {key!r}')
        else:
            values[key] = default

    model = values.get('model')
    if model is not None and model not in MODELS:
        errors.append(f'model: expected one of {", ".join(sorted(MODELS))}, got {model!r}')
    ic_params = _ic_params(model, values.get('ic.name'), ic_raw, errors) if 'ic.name' in values else {}
    if values.get('segment.orientation') not in ORIENTATIONS:
        errors.append(f'segment.orientation: expected one of {", ".join(ORIENTATIONS)}, '
                      f'got {values.get("segment.orientation")!r}')
    for key in ('time.t_end', 'output.snapshot_interval', 'segment.target_length', 'segment.tolerance',
                'appendix.rho'):
        if values.get(key) is not None and not values[key] > 0.0:
            errors.append(f'{key} must be positive, got {values[key]!r}')
    for key in ('segment.reseed_interval', 'appendix.amplitude'):
        if key in values and values[key] < 0.0:
            errors.append(f'{key} must be >= 0, got {values[key]!r}')
    for key in ('time.max_steps', 'runtime.threads', 'appendix.probes'):
        if values.get(key) is not None and values[key] < 1:
            errors.append(f'{key} must be at least 1, got {values[key]!r}')

    grid = _build(errors, 'grid', lambda: _grid(values))
    stepper = _build(errors, 'time', lambda: TimeStepper(
        dt=values['time.dt'], cfl_target=values['time.cfl'], adaptive=values['time.adaptive'],
        nu_h=values['hyper.nu'], order=values['hyper.order']))
    appendix = _build(errors, 'appendix', lambda: _appendix(values))
    if grid is not None and values.get('segment.seed') is not None and len(values['segment.seed']) != grid.dim:
        errors.append(f'segment.seed has {len(values["segment.seed"])} coordinates, grid is {grid.dim}D')
    if grid is not None and model in MODELS and grid.dim != (2 if model == 'sqg' else 3):
        errors.append(f'grid.n: model {model} needs a {2 if model == "sqg" else 3}D grid, got {grid.dim}D')
    if errors:
        raise ConfigError(errors)

    t_end = values['time.t_end']
    interval = values['output.snapshot_interval']
    return RunConfig(
        model=model, grid=grid, stepper=stepper, t_end=t_end, ic_name=values['ic.name'],
        ic_params=ic_params, output_dir=values['output.dir'],
        snapshot_interval=t_end if interval is None else interval,
        max_steps=values['time.max_steps'], seed=values['seed'],
        segment=SegmentConfig(values['segment.target_length'], values['segment.reseed_interval'],
                              values['segment.orientation'], values['segment.tolerance'],
                              values['segment.seed']),
        bounds=BoundOverrides(c0=values['bounds.c0'], C0=values['bounds.C0'], Cl=values['bounds.Cl'],
                              Cu=values['bounds.Cu'], Cw=values['bounds.Cw'], T0=values['bounds.T0'],
                              T=values['bounds.T'], L0=values['bounds.L0']),
        appendix=appendix, threads=values['runtime.threads'], text=text)


def _build(errors, section, factory):
    try:
        return factory()
    except (KeyError, TypeError):
        # an earlier error already names the missing or malformed key
        return None
    except VortilineError as err:
        errors.append(f'{section}: {err}')
        return None


def _grid(values):
    n = values['grid.n']
    length = values['grid.length']
    if len(n) == 1:
        n = n * (2 if values.get('model') == 'sqg' else 3)
    return Grid(n, length)


def _appendix(values):
    appendix = AppendixConfig(values['appendix.lambdas'], values['appendix.rho'], values['appendix.amplitude'],
                              values['appendix.probes'], values['appendix.grid.n'],
                              values['appendix.counterexample'])
    if len(appendix.grid_n) != 3:
        raise ConfigError(f'appendix.grid.n needs 3 values, got {len(appendix.grid_n)}')
    Grid(appendix.grid_n)
    if any(v < 1.0 for v in appendix.lambdas):
        raise ConfigError(f'appendix.lambdas must all be >= 1, got {appendix.lambdas}')
    return appendix


def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ', '.join(_format(v) for v in value)
    return str(value)


def config_values(config):
    """The configuration as ``{key: value}`` with every optional unset key left out."""
    values = {
        'model': config.model,
        'grid.n': config.grid.n,
        'grid.length': config.grid.length,
        'time.t_end': config.t_end,
        'time.dt': config.stepper.dt,
        'time.cfl': config.stepper.cfl_target,
        'time.adaptive': config.stepper.adaptive,
        'time.max_steps': config.max_steps,
        'hyper.nu': config.stepper.nu_h,
        'hyper.order': config.stepper.order,
        'ic.name': config.ic_name,
        'output.dir': config.output_dir,
        'output.snapshot_interval': config.snapshot_interval,
        'seed': config.seed,
        'segment.target_length': config.segment.target_length,
        'segment.reseed_interval': config.segment.reseed_interval,
        'segment.orientation': config.segment.orientation,
        'segment.tolerance': config.segment.tolerance,
        'segment.seed': config.segment.seed,
        'appendix.lambdas': config.appendix.lambdas,
        'appendix.rho': config.appendix.rho,
        'appendix.amplitude': config.appendix.amplitude,
        'appendix.probes': config.appendix.probes,
        'appendix.grid.n': config.appendix.grid_n,
        'appendix.counterexample': config.appendix.counterexample,
        'runtime.threads': config.threads,
    }
    for name in ('c0', 'C0', 'Cl', 'Cu', 'Cw', 'T0', 'T', 'L0'):
        values['bounds.' + name] = getattr(config.bounds, name)
    for name, value in config.ic_params.items():
        values['ic.' + name] = float(value)
    return {key: value for key, value in values.items() if value is not None and value != ()}


def serialize_config(config):
    """Config text with sorted keys and ``repr`` floats; parses back to an equal config."""
    values = config_values(config)
    return ''.join(f'{key} = {_format(values[key])}\n' for key in sorted(values))


def load_config(path):
    with open(path, encoding='utf-8') as stream:
        return parse_config(stream.read())

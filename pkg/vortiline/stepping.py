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


"""Classical RK4 time stepping with an optional CFL-adaptive step."""

import logging
import math

import attr
import numpy as np

from .constants import CFL_TARGET, HYPERDIFFUSION_ORDER
from .errors import ConfigError, NumericalError, StepReport

logger = logging.getLogger(__name__)

SCHEMES = ('rk4',)


def _positive_or_none(instance, attribute, value):
    if value is not None and not (math.isfinite(value) and value > 0.0):
        raise ConfigError(f'{attribute.name} must be positive, got {value}')


@attr.s(frozen=True)
class TimeStepper(object):
    """Step-size policy and hyperdiffusion settings shared by both solvers.

    With ``adaptive`` set the step is ``cfl_target * h / max|u|``, capped by
    ``dt`` when that is given. Without it ``dt`` is used as is and steps
    whose CFL number exceeds ``cfl_target`` are logged and recorded.
    """

    dt = attr.ib(default=None, validator=_positive_or_none)
    cfl_target = attr.ib(default=CFL_TARGET, converter=float)
    adaptive = attr.ib(default=True)
    nu_h = attr.ib(default=0.0, converter=float)
    order = attr.ib(default=HYPERDIFFUSION_ORDER, converter=int)
    scheme = attr.ib(default='rk4')

    def __attrs_post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f'unknown time scheme {self.scheme!r}')
        if not self.cfl_target > 0.0:
            raise ConfigError(f'cfl_target must be positive, got {self.cfl_target}')
        if not self.adaptive and self.dt is None:
            raise ConfigError('a fixed-step run needs dt')
        if self.nu_h < 0.0:
            raise ConfigError(f'hyperdiffusion coefficient must be >= 0, got {self.nu_h}')
        if self.order < 1:
            raise ConfigError(f'hyperdiffusion order must be >= 1, got {self.order}')

    @property
    def inviscid(self):
        return self.nu_h == 0.0

    def cfl_dt(self, max_speed, spacing):
        if max_speed <= 0.0:
            return math.inf
        return self.cfl_target * spacing / max_speed

    def choose_dt(self, max_speed, spacing, remaining):
        if self.adaptive:
            dt = self.cfl_dt(max_speed, spacing)
            if self.dt is not None:
                dt = min(dt, self.dt)
            if not math.isfinite(dt):
                dt = remaining
        else:
            dt = self.dt
        return min(dt, remaining)

    def hyperdiffusion(self, k2):
        """Spectral damping rate ``-nu_h |k|^(2p)``, or None when switched off."""
        if self.inviscid:
            return None
        return -self.nu_h * k2 ** self.order


def rk4(values, rhs, dt):
    """One classical Runge-Kutta step of ``dy/dt = rhs(y)``."""
    k1 = rhs(values)
    k2 = rhs(values + 0.5 * dt * k1)
    k3 = rhs(values + 0.5 * dt * k2)
    k4 = rhs(values + dt * k3)
    return values + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@attr.s
class MarchLog(object):
    """What a march did, for the run manifest."""

    steps = attr.ib(default=0)
    cfl_violations = attr.ib(factory=list)
    final_time = attr.ib(default=0.0)


def snapshot_times(t_start, t_end, interval):
    """Output times ``t_start + k * interval`` up to and including ``t_end``."""
    if interval is None or interval <= 0.0 or interval >= t_end - t_start:
        times = [t_start, t_end] if t_end > t_start else [t_start]
        return times
    count = int(math.floor((t_end - t_start) / interval + 1e-9))
    times = [t_start + k * interval for k in range(count + 1)]
    if t_end - times[-1] > 1e-12 * max(1.0, abs(t_end)):
        times.append(t_end)
    else:
        times[-1] = t_end
    return times


def check_cfl(stepper, dt, speed, spacing, time, log=None):
    """Warn about a fixed step over the CFL target and record it in ``log``; returns the CFL number."""
    cfl = dt * speed / spacing
    if not stepper.adaptive and cfl > stepper.cfl_target * (1.0 + 1e-12):
        step = log.steps if log is not None else 0
        logger.warning('step %d at t=%.6g has CFL %.3f > %.3f', step, time, cfl, stepper.cfl_target)
        if log is not None:
            log.cfl_violations.append((step, time, cfl))
    return cfl


def march(values, time, stepper, *, rhs, max_speed, spacing, t_end, outputs,
          on_step=None, on_output=None, max_steps=None, describe=None):
    """Advance ``values`` to ``t_end`` with RK4, stopping exactly at each output time.

    ``on_output(values, time, index)`` fires for every entry of ``outputs``
    (the first one before any step), ``on_step(values, time, dt)`` after
    every step. Non-finite values raise NumericalError with a StepReport
    built from ``describe(values) -> (max_field, max_velocity)``.
    """
    log = MarchLog(final_time=time)
    eps = 1e-12 * max(1.0, abs(t_end))
    targets = list(outputs)
    if on_output is not None and targets and abs(targets[0] - time) <= eps:
        on_output(values, time, 0)
        targets = targets[1:]
        index = 1
    else:
        index = 0
    for target in targets:
        while target - time > eps:
            if max_steps is not None and log.steps >= max_steps:
                logger.warning('stopping at t=%.6g after max_steps=%d', time, max_steps)
                log.final_time = time
                return values, time, log
            speed = max_speed(values)
            dt = stepper.choose_dt(speed, spacing, target - time)
            if target - time - dt <= eps:
                dt = target - time
            check_cfl(stepper, dt, speed, spacing, time, log)
            values = rk4(values, rhs, dt)
            time = target if abs(target - (time + dt)) <= eps else time + dt
            log.steps += 1
            if not np.all(np.isfinite(values)):
                field, velocity = describe(values) if describe is not None else (math.nan, math.nan)
                raise NumericalError('non-finite values in the solution',
                                     StepReport(log.steps, time, dt, field, velocity))
            logger.debug('step %d t=%.6g dt=%.3g', log.steps, time, dt)
            if on_step is not None:
                on_step(values, time, dt)
        if on_output is not None:
            on_output(values, time, index)
        index += 1
    log.final_time = time
    return values, time, log

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


"""Exception types raised by vortiline."""

import attr


@attr.s(frozen=True)
class StepReport(object):
    """State of a run at the step where it was aborted."""

    step = attr.ib()
    time = attr.ib()
    dt = attr.ib()
    max_field = attr.ib()
    max_velocity = attr.ib()

    def __str__(self):
        return (f'step {self.step} at t={self.time:.6g} (dt={self.dt:.3g}, '
                f'max|field|={self.max_field:.3g}, max|u|={self.max_velocity:.3g})')


class VortilineError(Exception):
    """Base class for all vortiline errors."""


class FieldError(VortilineError, ValueError):
    """A field is non-finite, has the wrong shape or violates a constraint."""


class SnapshotError(VortilineError, ValueError):
    """A snapshot file is malformed."""


class SegmentError(VortilineError, ValueError):
    """A curve, diagnostics window or appendix probe cannot be processed."""


class ConfigError(VortilineError, ValueError):
    """A run configuration is invalid.

    Every problem found while parsing is kept in ``errors`` so that the
    user sees all of them at once.
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__('; '.join(self.errors))


class NumericalError(VortilineError, RuntimeError):
    """A run produced non-finite values and was aborted."""

    def __init__(self, message, report=None):
        self.report = report
        if report is not None:
            message = f'{message} ({report})'
        super().__init__(message)

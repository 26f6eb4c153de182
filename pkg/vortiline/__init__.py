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


from .fields import (Grid, ScalarField, VectorField, gradient, perp_gradient, sqg_velocity, divergence, curl,
                     biot_savart_3d, dealias, project_solenoidal, spectral_tail_fraction)
from .interpolation import FieldInterpolator
from .stepping import TimeStepper
from .sqg import SqgState, sqg_rhs
from .euler3d import EulerState, euler_rhs
from .curves import (CurveSegment, SegmentDiagnostics, trace_segment, reseed, advect_segment, diagnose_segment,
                     material_stretch, tau_relation_residual, hausdorff_distance)
from .growth import (BoundConstants, BoundOverrides, GrowthEnvelope, identity_residuals, thm22_envelope,
                     thm24_envelope, growth_envelope, q_envelope, critical_case_monitor)
from .clebsch import (ClebschField, SplitConfig, make_clebsch_family, split_velocity, log_velocity_check,
                      far_field_scaling)
from .config import RunConfig, parse_config, serialize_config
from .manifest import RunManifest
from .errors import (VortilineError, FieldError, SnapshotError, SegmentError, ConfigError, NumericalError)
from .constants import VERSION

__version__ = VERSION

__all__ = [
    'Grid',
    'ScalarField',
    'VectorField',
    'gradient',
    'perp_gradient',
    'sqg_velocity',
    'divergence',
    'curl',
    'biot_savart_3d',
    'dealias',
    'project_solenoidal',
    'spectral_tail_fraction',
    'FieldInterpolator',
    'TimeStepper',
    'SqgState',
    'sqg_rhs',
    'EulerState',
    'euler_rhs',
    'CurveSegment',
    'SegmentDiagnostics',
    'trace_segment',
    'reseed',
    'advect_segment',
    'diagnose_segment',
    'material_stretch',
    'tau_relation_residual',
    'hausdorff_distance',
    'BoundConstants',
    'BoundOverrides',
    'GrowthEnvelope',
    'identity_residuals',
    'thm22_envelope',
    'thm24_envelope',
    'growth_envelope',
    'q_envelope',
    'critical_case_monitor',
    'ClebschField',
    'SplitConfig',
    'make_clebsch_family',
    'split_velocity',
    'log_velocity_check',
    'far_field_scaling',
    'RunConfig',
    'parse_config',
    'serialize_config',
    'RunManifest',
    'VortilineError',
    'FieldError',
    'SnapshotError',
    'SegmentError',
    'ConfigError',
    'NumericalError',
]

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

"""Constants used throughout the vortiline package."""

import math

VERSION = '0.1.0'

# Grids
DEFAULT_DOMAIN_LENGTH = 2.0 * math.pi
MIN_GRID_POINTS = 8
DEALIAS_FRACTION = 1.0 / 3.0  # modes with |m_i| > n_i * fraction are removed

# Tolerances
DIVERGENCE_TOLERANCE = 1e-8  # relative, for accepting vorticity input
NORMAL_UNDEFINED_KAPPA = 1e-12
DIRECTION_FLOOR = 1e-6  # |w(seed)| / max|w| below which xi is undefined
ENDPOINT_MATCH_RTOL = 1e-3
DOMINANCE_RTOL = 1e-9

# Time stepping
CFL_TARGET = 0.5
HYPERDIFFUSION_ORDER = 2
UNDER_RESOLVED_FRACTION = 1e-3
TUBE_CORE_EXTENT = 3.0  # core radii a vortex tube occupies

# Curve tracing and resampling, in units of the grid spacing
TRACE_MAX_STEP = 0.5
SAMPLE_SPACING = 0.5
SAMPLE_SPACING_MIN = 0.25
SAMPLE_SPACING_MAX = 1.0
MIN_CURVATURE_RADIUS = 2.0
TRACE_STOP_FRACTION = 0.1  # stop once |w| < fraction * |w(seed)|
TRACE_MAX_STEPS = 100000
UNTRUSTED_DISPLACEMENT = 2.0

# Interpolation
SPECTRAL_INTERPOLATION_MAX_N = 128
SPECTRAL_BATCH = 256

# Sample flags (bit field written to the curve dump)
FLAG_NORMAL_UNDEFINED = 1
FLAG_UNTRUSTED = 2
FLAG_UNRESOLVED = 4

# Appendix cut-offs and quadrature
CHI_INNER = 1.0
CHI_OUTER = 2.0
APPENDIX_RADIAL_NODES = 16  # Gauss-Legendre nodes per radial sub-interval
APPENDIX_POLAR_NODES = 32
APPENDIX_AZIMUTH_NODES = 64
APPENDIX_NEAR_OVERSAMPLING = 8  # sub-intervals on each of [0, delta] and [delta, 2 delta]
APPENDIX_MULTIPLIER_NODES = 512
APPENDIX_MIN_POINTS_PER_WIDTH = 8.0
LOG_VELOCITY_SPREAD = 0.25
CLEBSCH_AMPLITUDE = 4.0
CLEBSCH_PROFILE_KAPPA = 2.0  # von Mises bump exp(kappa (cos t - 1))
CLEBSCH_BUMP_SHIFT = 0.3  # offsets the x3 bump so the centre line is not a symmetry axis
CLEBSCH_REGION_HALFWIDTH = 1.5
APPENDIX_PROBE_HALF_LENGTH = 0.5

# Snapshot file format
SNAPSHOT_MAGIC = b'VLN1'
SNAPSHOT_SUFFIX = '.vln'
SNAPSHOT_PATTERN = 'snapshot_{index:06d}' + SNAPSHOT_SUFFIX

# Output file names
SERIES_FILE = 'series.csv'
MANIFEST_FILE = 'manifest.json'
DIAGNOSTICS_FILE = 'diagnostics.csv'
IDENTITY_FILE = 'identity.csv'
ENVELOPE_FILE = 'envelope.csv'
APPENDIX_FILE = 'appendix_terms.csv'
APPENDIX_REPORT_FILE = 'appendix_report.json'
DIAGNOSE_REPORT_FILE = 'diagnose_report.json'
CURVE_DIR = 'curves'
CURVE_PATTERN = 'curve_{index:06d}.csv'
REPORT_STEM = 'report'

# CSV schemas
SQG_SERIES_COLUMNS = ('time', 'max_grad_perp_theta', 'theta_l2', 'dt')
EULER_SERIES_COLUMNS = ('time', 'max_vorticity', 'energy', 'helicity', 'dt')
DIAGNOSTICS_COLUMNS = (
    'time', 'material_id', 'L', 'Q', 'int_kappa', 'int_tau', 'U', 'V',
    'Omega_L', 'Omega', 'c0_measured', 'endpoint_speed', 'u_max',
    'cu_ratio', 'resolved', 'inviscid', 'omega_end')
IDENTITY_COLUMNS = (
    'time', 'dQdt', 'I1', 'I2', 'I3', 'I4', 'residual', 'relative_residual',
    'L_t', 'i4_sign_ok', 'i1_bound_ok', 'i2_bound_ok', 'i3_bound_ok')
ENVELOPE_COLUMNS = (
    'time', 'Omega', 'bound_thm22', 'bound_thm24', 'bkm_integral',
    'kappa_ok', 'tau_ok', 'endpoint_ok', 'c0_ok', 'endpoint_at_max',
    'dominated_thm22', 'dominated_thm24')
APPENDIX_COLUMNS = (
    'lambda', 'probe', 'x', 'y', 'z', 'delta', 'Omega', 'I1', 'C', 'D', 'E',
    'I3', 'A', 'B', 'I4', 'total', 'u_direct', 'relative_error')

# Runtime
THREADS_ENV = 'VORTILINE_THREADS'
EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

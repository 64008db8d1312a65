"""Conical ideal MHD on the unit sphere: residuals, characteristic speeds,
type classification and the pseudo-time spectrum."""

from .errors import *  # noqa: F401,F403
from .geometry import (MetricData, Chart, spherical_chart, embedding_chart, named_embedding_chart,
                       metric_at, christoffel_at, metric_grid, constant_metric, flat_metric,
                       project_vector, lift_vector, surface_divergence)
from .state import IdealGas, BarotropicGas, SurfaceState, sound_speed, derived
from .residual import FieldGrid, assemble_residual, residual_at, powell_divergence, grid_axes
from .characteristics import (QuasilinearPair, Spectrum, FlowType, build_quasilinear, explicit_speeds,
                              full_spectrum, quartic_residual, classify, type_map)
from .pseudotime import normalize_direction, pseudo_speeds_formula, pseudo_speeds_numeric

__version__ = "0.1.0"

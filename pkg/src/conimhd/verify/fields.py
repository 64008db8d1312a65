"""Manufactured fields on chart grids.

Conical solutions are fields whose value depends only on direction.  A
uniform Cartesian flow is the simplest: projecting constant (V, B) onto the
sphere gives an exact steady solution, so its discrete residual is pure
truncation error.
"""

from __future__ import annotations

import numpy as np

from ..errors import ThermoError
from ..geometry import metric_grid, project, spherical_chart
from ..residual import FieldGrid, grid_axes
from ..state import IdealGas

__all__ = [
    "freestream_field",
    "uniform_surface_field",
    "radial_field",
    "smooth_field",
    "interpolated_v1_field",
    "band_chart",
]


def band_chart():
    """Spherical chart on the band pi/4 <= theta <= 3pi/4, periodic in phi."""
    return spherical_chart(theta=(np.pi / 4, 3 * np.pi / 4))


def freestream_field(chart, n1, n2, rho, V, P, B=(0.0, 0.0, 0.0), mu=1.0, gamma=1.4):
    """Constant Cartesian velocity ``V`` and field ``B`` projected onto the
    grid with ``n1 x n2`` cells."""
    if rho <= 0 or P <= 0:
        raise ThermoError("free-stream density and pressure must be positive")
    xi1, xi2 = grid_axes(chart, n1, n2)
    m = metric_grid(chart, xi1, xi2)
    v, V3 = project(m, np.broadcast_to(np.asarray(V, float), m.position.shape))
    b, B3 = project(m, np.broadcast_to(np.asarray(B, float), m.position.shape))
    ones = np.ones(m.det.shape)
    phi = np.stack([rho * ones, v[..., 0], v[..., 1], V3, P * ones, b[..., 0], b[..., 1], B3])
    return FieldGrid(chart, xi1, xi2, phi, IdealGas(gamma), mu)


def uniform_surface_field(chart, n1, n2, phi, gas=None, mu=1.0):
    """Every node carries the same primitive vector ``phi`` (8,)."""
    xi1, xi2 = grid_axes(chart, n1, n2)
    phi = np.asarray(phi, float).reshape(8, 1, 1) * np.ones((1, xi1.size, xi2.size))
    return FieldGrid(chart, xi1, xi2, phi, gas or IdealGas(), mu)


def radial_field(chart, n1, n2, B3=1.0, rho=1.0, P=1.0, V3=0.0, gas=None, mu=1.0):
    """Purely radial magnetic field B = B3 e (not divergence free)."""
    return uniform_surface_field(chart, n1, n2, [rho, 0, 0, V3, P, 0, 0, B3], gas, mu)


# per-variable (mean, amplitude, k1, k2, phase1, phase2); integer k2 keeps
# the field periodic in xi2 = phi
_SMOOTH = (
    (1.2, 0.2, 1.0, 1, 0.3, 0.1),
    (0.7, 0.4, 2.0, 1, 0.5, 0.9),
    (-0.3, 0.3, 1.0, 2, 1.1, 0.2),
    (0.9, 0.3, 1.5, 1, 0.2, 1.7),
    (1.0, 0.25, 1.0, 1, 2.0, 0.4),
    (0.4, 0.3, 1.0, 2, 0.7, 0.8),
    (-0.2, 0.25, 2.0, 1, 1.4, 0.3),
    (0.3, 0.2, 1.0, 1, 0.9, 2.2),
)


def smooth_field(chart, n1, n2, gas=None, mu=1.0, scale=1.0):
    """Non-conical smooth field with exact xi-derivatives.

    Each variable is ``m + a sin(k1 xi1 + p1) cos(k2 xi2 + p2)``.  Returns
    ``(field, grad)`` with ``grad[alpha, k]`` the exact d phi_k / d xi^alpha
    on the grid.
    """
    xi1, xi2 = grid_axes(chart, n1, n2)
    X1, X2 = np.meshgrid(xi1, xi2, indexing="ij")
    phi = np.empty((8,) + X1.shape)
    grad = np.empty((2, 8) + X1.shape)
    for k, (m, a, k1, k2, p1, p2) in enumerate(_SMOOTH):
        a = a * scale
        s1, c1 = np.sin(k1 * X1 + p1), np.cos(k1 * X1 + p1)
        s2, c2 = np.sin(k2 * X2 + p2), np.cos(k2 * X2 + p2)
        phi[k] = m + a * s1 * c2
        grad[0, k] = a * k1 * c1 * c2
        grad[1, k] = -a * k2 * s1 * s2
    return FieldGrid(chart, xi1, xi2, phi, gas or IdealGas(), mu), grad


def interpolated_v1_field(n1=16, n2=32, v_lo=0.1, v_hi=2.0, c=1.0, gamma=1.4):
    """Crossflow v1 rising linearly from ``v_lo`` to ``v_hi`` along xi2.

    B = 0, v2 = 0 and rho = 1 with P chosen so the sound speed is ``c``.
    The chart is the equatorial band theta in [pi/4, 3pi/4], phi in
    [0, pi/2] (not periodic); with v2 = 0 and g^11 = 1 the acoustic pair is
    real exactly where v1 > c.
    """
    chart = spherical_chart(theta=(np.pi / 4, 3 * np.pi / 4), phi=(0.0, np.pi / 2), periodic_phi=False)
    xi1, xi2 = grid_axes(chart, n1, n2)
    t = (xi2 - xi2[0]) / (xi2[-1] - xi2[0])
    v1 = v_lo + (v_hi - v_lo) * t
    phi = np.zeros((8, xi1.size, xi2.size))
    phi[0] = 1.0
    phi[1] = v1[None, :]
    phi[4] = c * c / gamma
    return FieldGrid(chart, xi1, xi2, phi, IdealGas(gamma), 1.0)

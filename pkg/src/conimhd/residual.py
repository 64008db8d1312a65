"""Finite-difference residuals of the steady conical MHD equations with
Powell source terms, projected onto the unit sphere.

Each residual component is the left side minus the right side of its
equation, with every Powell term kept on the right exactly as it is
usually written, so a sign error shows up as a non-converging residual.
Components are ordered

    mass, momentum^1, momentum^2, momentum^3, energy,
    magnetic^1, magnetic^2, magnetic^3.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridError, ThermoError
from .geometry import metric_grid, partial, surface_divergence
from .state import ADMISSIBLE_FLOOR, VARIABLES, SurfaceState

__all__ = [
    "FieldGrid",
    "RESIDUAL_NAMES",
    "grid_axes",
    "powell_divergence",
    "residual_at",
    "assemble_residual",
    "write_field_csv",
    "read_field_csv",
    "write_residual_csv",
    "read_residual_csv",
    "FIELD_HEADER",
    "RESIDUAL_HEADER",
]

RESIDUAL_NAMES = ("r_mass", "r_mom1", "r_mom2", "r_mom3", "r_energy", "r_mag1", "r_mag2", "r_mag3")
FIELD_HEADER = ("xi1", "xi2") + VARIABLES
RESIDUAL_HEADER = ("xi1", "xi2") + RESIDUAL_NAMES


def grid_axes(chart, n1, n2):
    """Uniform node coordinates with ``n1 x n2`` cells over the chart domain.

    A periodic axis gets ``n`` nodes (the wrap node is not repeated); a
    bounded axis gets ``n + 1`` nodes including both ends.  Halving the
    spacing therefore means doubling ``n``.
    """
    axes = []
    for (a, b), n, per in zip(chart.domain, (n1, n2), chart.periodic):
        n = int(n)
        if n < (3 if per else 2):
            raise GridError(f"too few cells ({n}) along an axis")
        j = np.arange(n if per else n + 1)
        axes.append(a + (b - a) * j / n)
    return axes[0], axes[1]


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Primitive variables ``phi[8, n1, n2]`` on a structured chart grid."""

    chart: object
    xi1: np.ndarray
    xi2: np.ndarray
    phi: np.ndarray
    gas: object
    mu: float = 1.0

    def __post_init__(self):
        xi1 = np.asarray(self.xi1, float)
        xi2 = np.asarray(self.xi2, float)
        phi = np.asarray(self.phi, float)
        object.__setattr__(self, "xi1", xi1)
        object.__setattr__(self, "xi2", xi2)
        object.__setattr__(self, "phi", phi)
        if xi1.size < 3 or xi2.size < 3:
            raise GridError(f"grid needs at least 3 nodes per axis, got {xi1.size} x {xi2.size}")
        if phi.shape != (8, xi1.size, xi2.size):
            raise GridError(f"phi must have shape (8, {xi1.size}, {xi2.size}), got {phi.shape}")
        for k, x in enumerate((xi1, xi2)):
            dx = np.diff(x)
            h = self.spacing[k]
            if h <= 0 or np.max(np.abs(dx - h)) > 1e-9 * max(1.0, abs(h)):
                raise GridError(f"axis {k} is not uniformly increasing")
            if self.chart.periodic[k]:
                a, b = self.chart.domain[k]
                if abs((x[-1] - x[0]) + h - (b - a)) > 1e-9 * (b - a):
                    raise GridError(f"periodic axis {k} does not close over the chart period")
        if not np.all(np.isfinite(phi)):
            raise GridError("field contains non-finite values")
        if np.min(phi[0]) < ADMISSIBLE_FLOOR or np.min(phi[4]) < ADMISSIBLE_FLOOR:
            raise ThermoError("field contains non-positive density or pressure")
        if self.mu <= 0:
            raise ThermoError("permeability must be positive")

    @property
    def shape(self):
        return self.phi.shape[1:]

    @property
    def spacing(self):
        return ((self.xi1[-1] - self.xi1[0]) / (self.xi1.size - 1),
                (self.xi2[-1] - self.xi2[0]) / (self.xi2.size - 1))

    @property
    def periodic(self):
        return tuple(self.chart.periodic)

    @cached_property
    def metric(self):
        return metric_grid(self.chart, self.xi1, self.xi2)

    def state_at(self, i, j):
        return SurfaceState.from_array(self.phi[:, i, j], mu=self.mu)

    def with_phi(self, phi):
        return FieldGrid(self.chart, self.xi1, self.xi2, phi, self.gas, self.mu)


# ------------------------------------------------------------- residual

def _powell(field, b, B3):
    m = field.metric
    return surface_divergence("rank1_weight0", b, m, field.spacing, field.periodic) + 2.0 * B3


def powell_divergence(field, index=None):
    """The bracket ``b^n_{||n} + 2 B^3`` (the 3D divergence of B at r = 1).

    Returns the whole grid, or the value at ``index = (i, j)``.
    """
    phi = field.phi
    out = _powell(field, phi[5:7], phi[7])
    return out if index is None else float(out[index])


def assemble_residual(field):
    """Residuals of all eight equations at every node, shape (8, n1, n2)."""
    m = field.metric
    mu = field.mu
    h, per = field.spacing, field.periodic
    rho, V3, P, B3 = field.phi[0], field.phi[3], field.phi[4], field.phi[7]
    v, b = field.phi[1:3], field.phi[5:7]
    sg = m.sqrt_det
    dlog = np.moveaxis(m.contracted_christoffel, -1, 0)
    ginv = np.moveaxis(m.ginv, (-2, -1), (0, 1))

    vc2 = np.einsum("ijab,aij,bij->ij", m.g, v, v)
    bc2 = np.einsum("ijab,aij,bij->ij", m.g, b, b)
    vb = np.einsum("ijab,aij,bij->ij", m.g, v, b)
    B2 = bc2 + B3**2
    VB = vb + V3 * B3
    E = field.gas.energy(rho, P) + 0.5 * (vc2 + V3**2)
    D = _powell(field, b, B3)

    def div(kind, comps):
        return surface_divergence(kind, comps, m, h, per)

    R = np.empty_like(field.phi)
    R[0] = div("rank1_weight1", rho * sg * v) + 2.0 * rho * sg * V3

    # the isotropic part g^{ab} p has divergence g^{ab} dp/dxi^b by metric
    # compatibility; the gradient form keeps uniform pressure exactly steady
    T = rho * np.einsum("aij,bij->abij", v, v) - np.einsum("aij,bij->abij", b, b) / mu
    pt = P + 0.5 * B2 / mu
    grad_pt = np.stack([partial(pt, 0, h[0], per[0]), partial(pt, 1, h[1], per[1])])
    R[1:3] = (div("rank2_weight1", sg * T) + sg * np.einsum("abij,bij->aij", ginv, grad_pt)
              + 3.0 * sg * (rho * v * V3 - b * B3 / mu)
              + sg / mu * b * D)

    R[3] = (div("rank1_weight1", sg * (rho * V3 * v - B3 * b / mu))
            + 2.0 * sg * (rho * V3**2 - B3**2 / mu)
            - rho * sg * vc2 + sg / mu * bc2
            + sg / mu * B3 * D)

    H = rho * E + P + B2 / mu
    R[4] = (div("rank1_weight1", sg * (H * v - VB * b / mu))
            + 2.0 * sg * (H * V3 - VB * B3 / mu)
            + sg / mu * VB * D)

    w = np.einsum("bij,aij->abij", v, b) - np.einsum("aij,bij->abij", v, b)
    R[5:7] = div("rank2_weight0", w) + (V3 * b - v * B3) + v * D

    X = v * B3 - V3 * b
    R[7] = (partial(X[0], 0, h[0], per[0]) + partial(X[1], 1, h[1], per[1])
            + np.einsum("aij,aij->ij", X, dlog) + V3 * D)
    return R


def residual_at(field, i, j):
    """Residual vector (8,) at grid node ``(i, j)``."""
    return assemble_residual(field)[:, i, j].copy()


# ------------------------------------------------------------------ CSV

def _fmt(x):
    return format(float(x), ".17g")


def write_field_csv(path, field):
    """Row-major in xi1 then xi2; mu and gamma are not stored per row."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(FIELD_HEADER)
        for i, x1 in enumerate(field.xi1):
            for j, x2 in enumerate(field.xi2):
                wr.writerow([_fmt(x1), _fmt(x2)] + [_fmt(q) for q in field.phi[:, i, j]])


def _read_grid_csv(path, header):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(c.strip() for c in rows[0]) != header:
        raise GridError(f"{path}: expected header {','.join(header)}")
    data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    if data.ndim != 2 or data.shape[1] != len(header):
        raise GridError(f"{path}: malformed rows")
    xi1 = np.unique(data[:, 0])
    xi2 = np.unique(data[:, 1])
    n1, n2 = xi1.size, xi2.size
    if data.shape[0] != n1 * n2:
        raise GridError(f"{path}: {data.shape[0]} rows do not form a {n1}x{n2} grid")
    block = data.reshape(n1, n2, len(header))
    if not (np.array_equal(block[:, 0, 0], xi1) and np.array_equal(block[0, :, 1], xi2)):
        raise GridError(f"{path}: rows are not ordered xi1-major")
    return xi1, xi2, np.moveaxis(block[:, :, 2:], -1, 0)


def read_field_csv(path, chart, gas, mu=1.0):
    xi1, xi2, phi = _read_grid_csv(path, FIELD_HEADER)
    return FieldGrid(chart, xi1, xi2, phi, gas, mu)


def write_residual_csv(path, field, R=None):
    if R is None:
        R = assemble_residual(field)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(RESIDUAL_HEADER)
        for i, x1 in enumerate(field.xi1):
            for j, x2 in enumerate(field.xi2):
                wr.writerow([_fmt(x1), _fmt(x2)] + [_fmt(q) for q in R[:, i, j]])


def read_residual_csv(path):
    """Returns ``(xi1, xi2, R[8, n1, n2])``."""
    return _read_grid_csv(path, RESIDUAL_HEADER)

"""Charts on the unit sphere, surface metric, Christoffel symbols, vector
projection and finite-difference covariant divergences.

Everything lives on the shell r = 1, so the r-scaled surface components
``w^alpha`` coincide with the plain projected components.

Index conventions
-----------------
``MetricData.christoffel[..., a, b, c]`` is the Christoffel symbol
Gamma^a_{bc} (upper index first).  ``tangents[..., i, a]`` is the projection
factor d x^i / d xi^a and ``cotangents[..., a, i]`` = g^{ab} tangents[i, b].
Grid field components are stored component-first, e.g. a surface vector
sampled on an ``n1 x n2`` grid has shape ``(2, n1, n2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, GridError, SingularChartError

__all__ = [
    "Chart",
    "MetricData",
    "spherical_chart",
    "embedding_chart",
    "named_embedding_chart",
    "BUILTIN_EMBEDDINGS",
    "metric_at",
    "metric_grid",
    "christoffel_at",
    "christoffel_from_metric",
    "flat_metric",
    "constant_metric",
    "project",
    "lift",
    "project_vector",
    "lift_vector",
    "partial",
    "surface_divergence",
    "DIVERGENCE_KINDS",
]

# finite-difference steps for embedding charts; both stencils are
# Richardson-extrapolated (h, h/2) to fourth order
H_GEOM = 1e-3
H_GEOM2 = 1e-2
DET_FLOOR = 1e-12
THETA_MIN = 0.05


@dataclass(frozen=True)
class Chart:
    """A coordinate patch ``xi -> e(xi)`` on the unit sphere.

    ``embedding`` must broadcast over array arguments and return an array
    with a trailing axis of length 3.  ``jacobian`` (trailing shape (3, 2))
    and ``hessian`` (trailing shape (3, 2, 2)) are optional analytic
    derivatives; central differences are used when they are absent.
    """

    kind: str
    embedding: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain: tuple
    periodic: tuple = (False, False)
    jacobian: Optional[Callable] = None
    hessian: Optional[Callable] = None
    name: str = ""
    h_geom: float = H_GEOM

    def contains(self, xi1, xi2, slack=1e-12):
        (a1, b1), (a2, b2) = self.domain
        xi1 = np.asarray(xi1)
        xi2 = np.asarray(xi2)
        return bool(np.all((xi1 >= a1 - slack) & (xi1 <= b1 + slack)
                           & (xi2 >= a2 - slack) & (xi2 <= b2 + slack)))

    def embed(self, xi1, xi2):
        return np.asarray(self.embedding(np.asarray(xi1, float), np.asarray(xi2, float)))


@dataclass(frozen=True)
class MetricData:
    """Surface geometry at one point or over a grid (leading axes)."""

    position: np.ndarray      # (..., 3) unit normal e(xi)
    tangents: np.ndarray      # (..., 3, 2)
    g: np.ndarray             # (..., 2, 2)
    ginv: np.ndarray          # (..., 2, 2)
    det: np.ndarray           # (...)
    sqrt_det: np.ndarray      # (...)
    christoffel: np.ndarray   # (..., 2, 2, 2)

    @property
    def cotangents(self):
        return np.einsum("...ab,...ib->...ai", self.ginv, self.tangents)

    @property
    def contracted_christoffel(self):
        """Gamma^n_{bn}, which equals d(ln sqrt g)/d xi^b."""
        return np.einsum("...nbn->...b", self.christoffel)

    def lower(self, w):
        """Covariant components ``g_ab w^b`` of a single-point vector."""
        return self.g @ np.asarray(w)

    def norm2(self, w):
        w = np.asarray(w)
        return float(w @ self.g @ w)

    def at(self, *index):
        """Single-point geometry from grid geometry."""
        return MetricData(*(np.asarray(getattr(self, f))[index] for f in
                            ("position", "tangents", "g", "ginv", "det", "sqrt_det", "christoffel")))


# ---------------------------------------------------------------- charts

def _sphere(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) + 0 * phi], axis=-1)


def spherical_chart(theta=None, phi=(0.0, 2 * np.pi), periodic_phi=True, theta_min=THETA_MIN):
    """Standard (theta, phi) chart with closed-form metric and Christoffels.

    The theta range is clipped away from the poles by ``theta_min``.
    """
    if theta is None:
        theta = (theta_min, np.pi - theta_min)
    t0, t1 = float(theta[0]), float(theta[1])
    if t0 < theta_min - 1e-15 or t1 > np.pi - theta_min + 1e-15 or t0 >= t1:
        raise DomainError(f"theta range {theta} must lie inside [{theta_min}, pi - {theta_min}]")
    p0, p1 = float(phi[0]), float(phi[1])
    if p0 >= p1:
        raise DomainError(f"empty phi range {phi}")
    return Chart(kind="spherical", embedding=_sphere, domain=((t0, t1), (p0, p1)),
                 periodic=(False, bool(periodic_phi)), name="spherical")


def _gnomonic(x, y):
    n = np.sqrt(1.0 + x * x + y * y)
    return np.stack([x / n, y / n, 1.0 / n], axis=-1)


def _sheared(s, t):
    return _sphere(s, t + 0.5 * s)


# name -> (embedding, default domain, default periodicity)
BUILTIN_EMBEDDINGS = {
    "spherical": (_sphere, ((THETA_MIN, np.pi - THETA_MIN), (0.0, 2 * np.pi)), (False, True)),
    "gnomonic": (_gnomonic, ((-0.8, 0.8), (-0.8, 0.8)), (False, False)),
    "sheared": (_sheared, ((0.4, 2.7), (0.0, 2 * np.pi)), (False, True)),
}


def embedding_chart(embedding, domain, periodic=(False, False), jacobian=None,
                    hessian=None, name="embedding", h_geom=H_GEOM):
    """Wrap a user embedding ``(xi1, xi2) -> unit 3-vector`` as a chart."""
    domain = tuple((float(a), float(b)) for a, b in domain)
    return Chart(kind="embedding", embedding=embedding, domain=domain,
                 periodic=tuple(bool(p) for p in periodic), jacobian=jacobian,
                 hessian=hessian, name=name, h_geom=h_geom)


def named_embedding_chart(name, domain=None, periodic=None):
    """Chart from one of ``BUILTIN_EMBEDDINGS`` evaluated through the
    generic (finite-difference) path."""
    try:
        emb, dom, per = BUILTIN_EMBEDDINGS[name]
    except KeyError:
        raise DomainError(f"unknown embedding {name!r}; choose from {sorted(BUILTIN_EMBEDDINGS)}")
    return embedding_chart(emb, domain if domain is not None else dom,
                           periodic if periodic is not None else per, name=name)


# --------------------------------------------------------------- metric

def christoffel_from_metric(ginv, dg):
    """Levi-Civita connection.

    ``dg[..., n, a, b]`` holds d g_ab / d xi^n.  Returns Gamma^a_{bc}
    = 1/2 g^{ad} (d_b g_dc + d_c g_db - d_d g_bc).
    """
    low = 0.5 * (np.einsum("...bdc->...dbc", dg)
                 + np.einsum("...cdb->...dbc", dg)
                 - dg)
    return np.einsum("...ad,...dbc->...abc", ginv, low)


def _spherical_geometry(theta, phi):
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    zero = np.zeros(np.broadcast(theta, phi).shape)
    pos = np.stack([st * cp, st * sp, ct + zero], axis=-1)
    e_t = np.stack([ct * cp, ct * sp, -st + zero], axis=-1)
    e_p = np.stack([-st * sp, st * cp, zero], axis=-1)
    tangents = np.stack([e_t, e_p], axis=-1)
    s2 = st * st + zero
    g = np.zeros(zero.shape + (2, 2))
    g[..., 0, 0] = 1.0
    g[..., 1, 1] = s2
    chris = np.zeros(zero.shape + (2, 2, 2))
    chris[..., 0, 1, 1] = -st * ct
    chris[..., 1, 0, 1] = ct / st
    chris[..., 1, 1, 0] = ct / st
    return pos, tangents, g, chris


def _richardson(stencil, h):
    """Fourth-order estimate from a second-order stencil at h and h/2."""
    return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0


def _embedding_derivatives(chart, x1, x2):
    e = chart.embed
    if chart.jacobian is not None:
        jac = np.asarray(chart.jacobian(x1, x2))
    else:
        d1 = _richardson(lambda h: (e(x1 + h, x2) - e(x1 - h, x2)) / (2 * h), chart.h_geom)
        d2 = _richardson(lambda h: (e(x1, x2 + h) - e(x1, x2 - h)) / (2 * h), chart.h_geom)
        jac = np.stack([d1, d2], axis=-1)
    if chart.hessian is not None:
        hess = np.asarray(chart.hessian(x1, x2))
    else:
        c = e(x1, x2)
        d11 = _richardson(lambda h: (e(x1 + h, x2) - 2 * c + e(x1 - h, x2)) / h**2, H_GEOM2)
        d22 = _richardson(lambda h: (e(x1, x2 + h) - 2 * c + e(x1, x2 - h)) / h**2, H_GEOM2)
        d12 = _richardson(lambda h: (e(x1 + h, x2 + h) - e(x1 + h, x2 - h)
                                     - e(x1 - h, x2 + h) + e(x1 - h, x2 - h)) / (4 * h * h), H_GEOM2)
        hess = np.stack([np.stack([d11, d12], -1), np.stack([d12, d22], -1)], -1)
    return jac, hess


def _geometry(chart, x1, x2):
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    if chart.kind == "spherical":
        pos, tangents, g, chris = _spherical_geometry(x1, x2)
        ginv = np.zeros_like(g)
        ginv[..., 0, 0] = 1.0
        ginv[..., 1, 1] = 1.0 / g[..., 1, 1]
        det = g[..., 1, 1].copy()
    else:
        pos = chart.embed(x1, x2)
        tangents, hess = _embedding_derivatives(chart, x1, x2)
        g = np.einsum("...ia,...ib->...ab", tangents, tangents)
        det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
        ginv = None
        # d_n g_ab = e_an . e_b + e_a . e_bn
        part = np.einsum("...ian,...ib->...nab", hess, tangents)
        dg = part + np.einsum("...nab->...nba", part)
    if np.any(det < DET_FLOOR):
        raise SingularChartError(f"metric determinant below {DET_FLOOR:g} on chart {chart.name!r}")
    if chart.kind != "spherical":
        ginv = np.empty_like(g)
        ginv[..., 0, 0] = g[..., 1, 1] / det
        ginv[..., 1, 1] = g[..., 0, 0] / det
        ginv[..., 0, 1] = -g[..., 0, 1] / det
        ginv[..., 1, 0] = -g[..., 1, 0] / det
        chris = christoffel_from_metric(ginv, dg)
        chris = 0.5 * (chris + np.swapaxes(chris, -1, -2))
    return MetricData(position=pos, tangents=tangents, g=g, ginv=ginv, det=det,
                      sqrt_det=np.sqrt(det), christoffel=chris)


def metric_at(chart, xi1, xi2):
    """Metric, inverse, determinant, Christoffels and projection factors at
    a surface point, or at arrays of points (broadcast, leading axes)."""
    if not chart.contains(xi1, xi2):
        raise DomainError(f"point ({xi1}, {xi2}) outside chart domain {chart.domain}")
    if np.ndim(xi1) == 0 and np.ndim(xi2) == 0:
        return _geometry(chart, float(xi1), float(xi2))
    x1, x2 = np.broadcast_arrays(np.asarray(xi1, float), np.asarray(xi2, float))
    return _geometry(chart, x1, x2)


def christoffel_at(chart, xi1, xi2):
    return metric_at(chart, xi1, xi2).christoffel


def metric_grid(chart, xi1, xi2):
    """Geometry on the tensor-product grid ``xi1 x xi2`` (ij indexing)."""
    if not (chart.contains(np.min(xi1), np.min(xi2)) and chart.contains(np.max(xi1), np.max(xi2))):
        raise DomainError(f"grid extends outside chart domain {chart.domain}")
    x1, x2 = np.meshgrid(np.asarray(xi1, float), np.asarray(xi2, float), indexing="ij")
    return _geometry(chart, x1, x2)


def constant_metric(g):
    """Point geometry with a constant metric ``g`` and zero Christoffels.

    Useful for characteristic analysis, which only needs g_ab at a point.
    The tangent frame is a Cholesky-type factor placed in the plane
    orthogonal to +z so that projection stays self-consistent.
    """
    g = np.array(g, dtype=float)
    if g.shape != (2, 2) or not np.allclose(g, g.T):
        raise DomainError("metric must be a symmetric 2x2 matrix")
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if det < DET_FLOOR or g[0, 0] <= 0:
        raise SingularChartError("metric is not positive definite")
    L = np.linalg.cholesky(g)
    tangents = np.zeros((3, 2))
    tangents[:2, :] = L.T
    return MetricData(position=np.array([0.0, 0.0, 1.0]), tangents=tangents, g=g,
                      ginv=np.linalg.inv(g), det=np.float64(det), sqrt_det=np.sqrt(det),
                      christoffel=np.zeros((2, 2, 2)))


def flat_metric():
    return constant_metric(np.eye(2))


# ----------------------------------------------------------- projection

def project(metric, W):
    """Split Cartesian vectors ``W[..., 3]`` into contravariant surface
    components ``w[..., 2]`` and the radial component ``W3[...]``."""
    W = np.asarray(W, float)
    w = np.einsum("...ai,...i->...a", metric.cotangents, W)
    W3 = np.einsum("...i,...i->...", metric.position, W)
    return w, W3


def lift(metric, w, W3):
    """Inverse of :func:`project`."""
    return (np.einsum("...ia,...a->...i", metric.tangents, np.asarray(w, float))
            + np.asarray(W3, float)[..., None] * metric.position)


def project_vector(chart, xi1, xi2, W):
    """Return ``(w1, w2, W3)`` for a Cartesian 3-vector at chart point xi."""
    w, W3 = project(metric_at(chart, xi1, xi2), W)
    return np.array([w[0], w[1], W3])


def lift_vector(chart, xi1, xi2, comps):
    comps = np.asarray(comps, float)
    return lift(metric_at(chart, xi1, xi2), comps[:2], comps[2])


# ------------------------------------------------------ differentiation

def partial(f, axis, h, periodic):
    """Second-order derivative of grid data along grid axis 0 or 1.

    ``f`` has the two grid axes last.  Central differences in the interior,
    periodic wrap or second-order one-sided stencils at the ends.
    """
    f = np.asarray(f, float)
    ax = f.ndim - 2 + axis
    if f.shape[ax] < 3:
        raise GridError(f"need at least 3 points along grid axis {axis}, got {f.shape[ax]}")
    if periodic:
        return (np.roll(f, -1, axis=ax) - np.roll(f, 1, axis=ax)) / (2.0 * h)
    f = np.moveaxis(f, ax, 0)
    d = np.empty_like(f)
    d[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    # written in differences so constant data gives exactly zero
    d[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * h)
    d[-1] = ((f[-3] - f[-1]) - 4.0 * (f[-2] - f[-1])) / (2.0 * h)
    return np.moveaxis(d, 0, ax)


DIVERGENCE_KINDS = ("rank1_weight1", "rank1_weight0", "rank2_weight1", "rank2_weight0")


def surface_divergence(kind, comps, metric, spacing, periodic):
    """Contracted covariant derivative of a grid tensor field.

    Parameters
    ----------
    kind : str
        ``rank1_weight1``  d_b w^b  (densities such as rho sqrt(g) v^b);
        ``rank1_weight0``  d_b w^b + Gamma^n_{gn} w^g;
        ``rank2_weight1``  d_b w^{ab} + Gamma^a_{gn} w^{gn};
        ``rank2_weight0``  d_b w^{ab} + Gamma^a_{gn} w^{gn} + Gamma^n_{gn} w^{ag}.
    comps : ndarray
        Shape (2, n1, n2) for rank 1 or (2, 2, n1, n2) for rank 2, with
        ``comps[a, b]`` = w^{ab}.
    metric : MetricData
        Grid geometry (leading shape (n1, n2)).
    spacing, periodic : pair
        Grid spacing and periodicity per axis.
    """
    comps = np.asarray(comps, float)
    h1, h2 = spacing
    p1, p2 = periodic
    if kind.startswith("rank1"):
        if comps.shape[0] != 2 or comps.ndim != 3:
            raise GridError(f"rank-1 field must have shape (2, n1, n2), got {comps.shape}")
        out = partial(comps[0], 0, h1, p1) + partial(comps[1], 1, h2, p2)
        if kind == "rank1_weight0":
            out = out + np.einsum("ijg,gij->ij", metric.contracted_christoffel, comps)
        elif kind != "rank1_weight1":
            raise ValueError(f"unknown divergence kind {kind!r}")
        return out
    if kind not in ("rank2_weight1", "rank2_weight0"):
        raise ValueError(f"unknown divergence kind {kind!r}")
    if comps.shape[:2] != (2, 2) or comps.ndim != 4:
        raise GridError(f"rank-2 field must have shape (2, 2, n1, n2), got {comps.shape}")
    out = partial(comps[:, 0], 0, h1, p1) + partial(comps[:, 1], 1, h2, p2)
    out = out + np.einsum("ijagn,gnij->aij", metric.christoffel, comps)
    if kind == "rank2_weight0":
        out = out + np.einsum("ijg,agij->aij", metric.contracted_christoffel, comps)
    return out

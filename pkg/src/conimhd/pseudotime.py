"""Characteristic speeds of the pseudo-unsteady system.

Reinserting a time derivative and looking along a covariant unit direction
w gives eight real speeds

    v.w (twice), (v +- b / sqrt(mu rho)).w, v.w +- c_f, v.w +- c_s

so the pseudo-time system is hyperbolic everywhere but never strictly so.
The numeric cross-check takes the eigenvalues of ``w1 C1 + w2 C2``.
"""

from __future__ import annotations

import math

import numpy as np

from .characteristics import build_quasilinear
from .errors import ThermoError
from .state import sound_speed
from .verify.eigen import dense_eigen

__all__ = ["normalize_direction", "magnetosonic_speeds", "pseudo_speeds_formula", "pseudo_speeds_numeric"]


def normalize_direction(w, metric):
    """Scale a covariant direction so that g^{ab} w_a w_b = 1."""
    w = np.asarray(w, dtype=float)
    if w.shape != (2,) or not np.all(np.isfinite(w)):
        raise ValueError(f"direction must be a finite 2-vector, got {w!r}")
    n2 = float(w @ metric.ginv @ w)
    if n2 <= 0.0:
        raise ValueError("direction has zero length")
    return w / math.sqrt(n2)


def magnetosonic_speeds(c2, B2, bw, mr):
    """Fast and slow speeds ``(c_f, c_s)`` from c^2, |B|^2, b.w and mu rho."""
    a = c2 + B2 / mr
    rad = a * a - 4.0 * c2 * bw * bw / mr
    # rad >= 0 analytically since (b.w)^2 <= |b|^2 for unit w
    disc = math.sqrt(max(rad, 0.0))
    cf2 = 0.5 * (a + disc)
    cs2 = 0.5 * (a - disc)
    return math.sqrt(cf2), math.sqrt(max(cs2, 0.0))


def pseudo_speeds_formula(state, metric, gas, w):
    """Closed-form speeds along ``w`` (normalised internally).

    Returns ``(speeds, c_f, c_s)`` with ``speeds`` sorted ascending.
    """
    w = normalize_direction(w, metric)
    e = gas.energy(state.rho, state.P)
    c = float(sound_speed(gas, state.rho, e))
    if not np.isfinite(c):
        raise ThermoError("sound speed is not finite")
    mr = state.mu * state.rho
    vw = float(state.v @ w)
    bw = float(state.b @ w)
    B2 = metric.norm2(state.b) + state.B3**2
    cf, cs = magnetosonic_speeds(c * c, B2, bw, mr)
    va = bw / math.sqrt(mr)
    speeds = np.sort([vw, vw, vw + va, vw - va, vw + cf, vw - cf, vw + cs, vw - cs])
    return speeds, cf, cs


def pseudo_speeds_numeric(state, metric, gas, w, method="lapack"):
    """Eigenvalues of ``w1 C1 + w2 C2`` sorted by real then imaginary part."""
    w = normalize_direction(w, metric)
    q = build_quasilinear(state, metric, gas)
    vals = dense_eigen(q.combine(w), method=method).values
    return vals[np.lexsort((vals.imag, vals.real))]

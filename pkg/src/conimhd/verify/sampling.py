"""Seeded random states, metrics and directions for property suites."""

from __future__ import annotations

import math

import numpy as np

from ..characteristics import TAU_DEN
from ..geometry import constant_metric
from ..state import SurfaceState

__all__ = ["random_state", "admissible", "sample_states", "random_metric", "random_direction", "random_invertible"]


def random_state(rng, mu=1.0, lo=-2.0, hi=2.0, thermo=(0.5, 2.0)):
    """Velocity and field components from U[lo, hi], rho and P from U[thermo]."""
    rho, P = rng.uniform(*thermo, size=2)
    v1, v2, V3, b1, b2, B3 = rng.uniform(lo, hi, size=6)
    return SurfaceState(rho, v1, v2, V3, P, b1, b2, B3, mu=mu)


def admissible(state):
    """True when every closed-form speed denominator clears TAU_DEN * scale."""
    sm = math.sqrt(state.mu * state.rho)
    scale = max(1.0, abs(state.v1) * sm, abs(state.b1))
    dens = (state.v1, state.b1 + sm * state.v1, state.b1 - sm * state.v1)
    return min(abs(d) for d in dens) > TAU_DEN * scale


def sample_states(rng, n, mu=1.0, max_tries=None):
    """``n`` filtered states plus the number of rejected draws."""
    out = []
    rejected = 0
    max_tries = max_tries or 100 * n
    while len(out) < n:
        if len(out) + rejected >= max_tries:
            raise RuntimeError("state sampler rejects almost every draw")
        s = random_state(rng, mu=mu)
        if admissible(s):
            out.append(s)
        else:
            rejected += 1
    return out, rejected


def random_metric(rng, floor=0.5):
    """Constant SPD metric ``A A^T + floor I`` with A from U[-1, 1]."""
    A = rng.uniform(-1.0, 1.0, size=(2, 2))
    return constant_metric(A @ A.T + floor * np.eye(2))


def random_direction(rng):
    return rng.normal(size=2)


def random_invertible(rng, n=8, min_det=1e-3):
    while True:
        M = rng.uniform(-1.0, 1.0, size=(n, n))
        if abs(np.linalg.det(M)) > min_det:
            return M

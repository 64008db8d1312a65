"""Observed order of accuracy from dyadic grid refinement."""

from __future__ import annotations

import math

import numpy as np

from ..errors import NoiseFloorError

__all__ = ["convergence_order", "observed_orders", "NOISE_FLOOR"]

NOISE_FLOOR = 1e-13


def observed_orders(norms):
    """log2 of successive ratios ``norms[k] / norms[k + 1]``."""
    norms = [float(x) for x in norms]
    if len(norms) < 2:
        raise ValueError("need at least two norms")
    if min(norms) < NOISE_FLOOR:
        raise NoiseFloorError(f"norms {norms} reach the roundoff floor {NOISE_FLOOR:g}")
    return [math.log2(a / b) for a, b in zip(norms[:-1], norms[1:])]


def convergence_order(norms):
    """Average observed order over the refinement sequence.

    Parameters
    ----------
    norms : sequence of float
        Error or residual norms at spacings h, h/2, h/4, ...

    Raises
    ------
    NoiseFloorError
        If any norm is below ``NOISE_FLOOR``.
    """
    return float(np.mean(observed_orders(norms)))

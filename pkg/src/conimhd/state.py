"""Dependent variables, gas laws and derived scalar quantities.

The stored variable set is the primitive vector

    Phi = [rho, v1, v2, V3, P, b1, b2, B3]

where (v1, v2) and (b1, b2) are contravariant surface components and V3, B3
the radial components.  The specific internal energy is derived from
(rho, P) through the gas law when needed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import ThermoError

__all__ = [
    "GasLaw",
    "IdealGas",
    "BarotropicGas",
    "SurfaceState",
    "Derived",
    "ADMISSIBLE_FLOOR",
    "VARIABLES",
    "sound_speed",
    "state_sound_speed",
    "derived",
    "state_from_dict",
    "state_to_dict",
    "state_from_json",
    "state_to_json",
]

ADMISSIBLE_FLOOR = 1e-12
VARIABLES = ("rho", "v1", "v2", "V3", "P", "b1", "b2", "B3")


class GasLaw:
    """Interface for P(rho, e) closures.

    Subclasses provide ``pressure``, ``dp_drho`` (P_rho at fixed e),
    ``dp_de`` (P_e at fixed rho) and the inverse ``energy(rho, P)``.
    """

    def pressure(self, rho, e):
        raise NotImplementedError

    def dp_drho(self, rho, e):
        raise NotImplementedError

    def dp_de(self, rho, e):
        raise NotImplementedError

    def energy(self, rho, P):
        raise NotImplementedError


@dataclass(frozen=True)
class IdealGas(GasLaw):
    """P = (gamma - 1) rho e."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ThermoError(f"ideal gas needs gamma > 1, got {self.gamma}")

    def pressure(self, rho, e):
        return (self.gamma - 1.0) * rho * e

    def dp_drho(self, rho, e):
        return (self.gamma - 1.0) * e

    def dp_de(self, rho, e):
        return (self.gamma - 1.0) * rho

    def energy(self, rho, P):
        return P / ((self.gamma - 1.0) * rho)


@dataclass(frozen=True)
class BarotropicGas(GasLaw):
    """P = k rho, independent of e.

    The internal energy does not enter the pressure, so ``energy`` returns
    zero; the (rho, e) -> (rho, P) change of variables is singular here.
    """

    k: float = 1.0

    def pressure(self, rho, e):
        return self.k * rho

    def dp_drho(self, rho, e):
        return self.k + 0.0 * rho

    def dp_de(self, rho, e):
        return 0.0 * rho

    def energy(self, rho, P):
        return 0.0 * rho


def sound_speed(gas, rho, e):
    """c = sqrt(P P_e + rho^2 P_rho) / rho."""
    P = gas.pressure(rho, e)
    rad = P * gas.dp_de(rho, e) + rho * rho * gas.dp_drho(rho, e)
    if np.any(np.asarray(rad) < 0):
        raise ThermoError(f"negative sound-speed radicand {rad}")
    return np.sqrt(rad) / rho


@dataclass(frozen=True)
class SurfaceState:
    """The eight primitive unknowns at one point plus the permeability."""

    rho: float
    v1: float
    v2: float
    V3: float
    P: float
    b1: float
    b2: float
    B3: float
    mu: float = 1.0

    def __post_init__(self):
        for name in ("rho", "v1", "v2", "V3", "P", "b1", "b2", "B3", "mu"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ThermoError(f"{name} is not finite")
            object.__setattr__(self, name, val)
        if self.rho < ADMISSIBLE_FLOOR or self.P < ADMISSIBLE_FLOOR:
            raise ThermoError(f"inadmissible state: rho={self.rho}, P={self.P}")
        if self.mu <= 0:
            raise ThermoError(f"permeability must be positive, got {self.mu}")

    @property
    def v(self):
        return np.array([self.v1, self.v2])

    @property
    def b(self):
        return np.array([self.b1, self.b2])

    def as_array(self):
        return np.array([self.rho, self.v1, self.v2, self.V3, self.P, self.b1, self.b2, self.B3])

    @classmethod
    def from_array(cls, phi, mu=1.0):
        return cls(*(float(x) for x in phi), mu=mu)

    def replace(self, **changes):
        vals = {f.name: getattr(self, f.name) for f in fields(self)}
        vals.update(changes)
        return SurfaceState(**vals)


def state_sound_speed(state, gas):
    return float(sound_speed(gas, state.rho, gas.energy(state.rho, state.P)))


@dataclass(frozen=True)
class Derived:
    v_c: float
    b_c: float
    B2: float       # |B|^2 including the radial part
    V2: float       # |V|^2
    V_dot_B: float
    e: float
    E: float
    b_lower: np.ndarray
    c: float


def derived(state, metric, gas):
    """Magnitudes and contractions that appear in the governing equations."""
    g = metric.g
    v, b = state.v, state.b
    vc2 = float(v @ g @ v)
    bc2 = float(b @ g @ b)
    e = float(gas.energy(state.rho, state.P))
    V2 = vc2 + state.V3**2
    return Derived(
        v_c=math.sqrt(max(vc2, 0.0)),
        b_c=math.sqrt(max(bc2, 0.0)),
        B2=bc2 + state.B3**2,
        V2=V2,
        V_dot_B=float(v @ g @ b) + state.V3 * state.B3,
        e=e,
        E=e + 0.5 * V2,
        b_lower=g @ b,
        c=float(sound_speed(gas, state.rho, e)),
    )


# --------------------------------------------------------------- JSON I/O

def state_to_dict(state, gas=None):
    out = {name: getattr(state, name) for name in VARIABLES}
    out["mu"] = state.mu
    if isinstance(gas, IdealGas):
        out["gamma"] = gas.gamma
    return out


def state_from_dict(d, default_gamma=1.4):
    """Build ``(state, gas)`` from the flat state record.

    ``gamma`` selects an ideal gas; ``mu`` defaults to 1.
    """
    missing = [k for k in VARIABLES if k not in d]
    if missing:
        raise ThermoError(f"state record missing {missing}")
    state = SurfaceState(**{k: d[k] for k in VARIABLES}, mu=d.get("mu", 1.0))
    return state, IdealGas(float(d.get("gamma", default_gamma)))


def state_to_json(state, gas=None):
    return json.dumps(state_to_dict(state, gas))


def state_from_json(text, default_gamma=1.4):
    return state_from_dict(json.loads(text), default_gamma)

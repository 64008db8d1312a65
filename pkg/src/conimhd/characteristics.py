"""Steady characteristic analysis of the projected conical MHD system.

The primitive system reads ``C1 Phi_xi1 + C2 Phi_xi2 + S* = 0`` with
``Phi = [rho, v1, v2, V3, P, b1, b2, B3]``.  Treating xi1 as time-like the
characteristic speeds are the roots of det(C2 - lambda C1) = 0, solved here
as a generalized pencil so that v1 -> 0 produces infinite speeds instead of
a failed inversion.

Four speeds are known in closed form (streamline pair and Alfven pair).
The remaining four satisfy a quartic relation that is only used as a
residual check.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchError, ConimhdError, DegenerateError, EigenError, SingularPencilError
from .state import SurfaceState, sound_speed
from .verify.eigen import generalized_eigen

__all__ = [
    "QuasilinearPair",
    "Spectrum",
    "FlowType",
    "TypeMap",
    "build_quasilinear",
    "transformation_matrices",
    "energy_form_matrices",
    "source_terms",
    "explicit_speeds",
    "full_spectrum",
    "match_explicit",
    "quartic_residual",
    "classify",
    "type_map",
    "write_type_map_csv",
    "read_type_map_csv",
    "TAU_DEN",
    "TYPEMAP_HEADER",
]

TAU_DEN = 1e-10
TAU_IMAG_REL = 1e-7
TAU_IMAG_FLOOR = 1e-9


class FlowType(str, enum.Enum):
    HYPERBOLIC = "H"
    ELLIPTIC = "E"
    DEGENERATE = "D"


@dataclass(frozen=True)
class QuasilinearPair:
    C1: np.ndarray
    C2: np.ndarray

    def combine(self, w):
        """``w1 C1 + w2 C2``."""
        return w[0] * self.C1 + w[1] * self.C2


def _thermo(state, gas):
    e = gas.energy(state.rho, state.P)
    return e, float(sound_speed(gas, state.rho, e)) ** 2


def build_quasilinear(state, metric, gas):
    """The two 8x8 coefficient matrices of the primitive system at a point.

    Only ``metric.g`` and ``metric.ginv`` are used.
    """
    rho, B3 = state.rho, state.B3
    v, b = state.v, state.b
    gi = metric.ginv
    bl = metric.g @ b
    mr = state.mu * rho
    _, c2 = _thermo(state, gas)

    C = np.zeros((2, 8, 8))
    for a in range(2):
        Ca = C[a]
        np.fill_diagonal(Ca, v[a])
        Ca[0, 1 + a] = rho
        # momentum rows: pressure gradient and Lorentz force
        Ca[1, 4] = gi[a, 0] / rho
        Ca[2, 4] = gi[a, 1] / rho
        Ca[1, 7] = gi[a, 0] * B3 / mr
        Ca[2, 7] = gi[a, 1] * B3 / mr
        Ca[3, 7] = -b[a] / mr
        Ca[4, 1 + a] = c2 * rho
        Ca[7, 1 + a] = B3
        Ca[7, 3] = -b[a]
    C1, C2 = C
    C1[1, 5] = -gi[0, 1] * bl[1] / mr
    C1[1, 6] = gi[0, 0] * bl[1] / mr
    C1[2, 5] = gi[0, 1] * bl[0] / mr
    C1[2, 6] = -gi[0, 0] * bl[0] / mr
    C2[1, 5] = -gi[1, 1] * bl[1] / mr
    C2[1, 6] = gi[0, 1] * bl[1] / mr
    C2[2, 5] = gi[1, 1] * bl[0] / mr
    C2[2, 6] = -gi[0, 1] * bl[0] / mr
    # induction rows
    C1[6, 1] = b[1]
    C1[6, 2] = -b[0]
    C2[5, 1] = -b[1]
    C2[5, 2] = b[0]
    return QuasilinearPair(C1, C2)


def transformation_matrices(state, metric, gas):
    """``(DPhi, M)``: the Jacobian of (rho, .., e, ..) -> (rho, .., P, ..) and
    the matrix taking primitive equations back to the conservative rows."""
    rho = state.rho
    e, _ = _thermo(state, gas)
    DPhi = np.eye(8)
    DPhi[4, 0] = gas.dp_drho(rho, e)
    DPhi[4, 4] = gas.dp_de(rho, e)

    sg = float(metric.sqrt_det)
    vl = metric.g @ state.v
    bl = metric.g @ state.b
    mu = state.mu
    E = e + 0.5 * (float(state.v @ vl) + state.V3**2)
    M = np.eye(8)
    M[:5, :5] = 0.0
    M[0, 0] = sg
    M[1:4, 0] = sg * np.array([state.v1, state.v2, state.V3])
    M[1, 1] = M[2, 2] = M[3, 3] = sg * rho
    M[4] = sg * np.array([E, rho * vl[0], rho * vl[1], rho * state.V3, rho,
                          bl[0] / mu, bl[1] / mu, state.B3 / mu])
    return DPhi, M


def energy_form_matrices(state, metric, gas):
    """Coefficient pair in the variables (rho, v1, v2, V3, e, b1, b2, B3).

    Built directly from the internal-energy equation
    ``v^a e_a + (P / rho) v^a_a = 0`` and the chain rule
    ``P_a = P_rho rho_a + P_e e_a`` in the momentum rows, without reference
    to the P-form matrices.
    """
    rho, B3 = state.rho, state.B3
    v, b = state.v, state.b
    gi = metric.ginv
    bl = metric.g @ b
    mr = state.mu * rho
    e, _ = _thermo(state, gas)
    Pr = gas.dp_drho(rho, e)
    Pe = gas.dp_de(rho, e)
    P = state.P
    out = []
    for a in range(2):
        A = np.diag(np.full(8, v[a]))
        A[0, 1 + a] = rho
        for k in range(2):
            A[1 + k, 0] = gi[a, k] * Pr / rho
            A[1 + k, 4] = gi[a, k] * Pe / rho
            A[1 + k, 7] = gi[a, k] * B3 / mr
        # magnetic-pressure / tension in the crossflow momentum
        A[1, 5] = -gi[a, 1] * bl[1] / mr
        A[2, 5] = gi[a, 1] * bl[0] / mr
        A[1, 6] = gi[a, 0] * bl[1] / mr
        A[2, 6] = -gi[a, 0] * bl[0] / mr
        A[3, 7] = -b[a] / mr
        A[4, 1 + a] = P / rho
        A[7, 1 + a] = B3
        A[7, 3] = -b[a]
        out.append(A)
    E1, E2 = out
    # the B1 row only couples through xi2, the B2 row through xi1
    E1[6, 1], E1[6, 2] = b[1], -b[0]
    E2[5, 1], E2[5, 2] = -b[1], b[0]
    return QuasilinearPair(E1, E2)


def source_terms(state, metric, gas):
    """Primitive-form source vector S* at a point (needs Christoffels)."""
    rho, V3, B3, mu = state.rho, state.V3, state.B3, state.mu
    v, b = state.v, state.b
    G = np.asarray(metric.christoffel)
    d = np.einsum("nbn->b", G)
    g = metric.g
    mr = mu * rho
    _, c2 = _thermo(state, gas)
    dv = float(d @ v)
    vc2 = float(v @ g @ v)
    bc2 = float(b @ g @ b)
    bl = g @ b

    S = np.empty(8)
    S[0] = rho * (dv + 2.0 * V3)
    S[1:3] = (np.einsum("abc,b,c->a", G, v, v) + v * V3
              - (np.einsum("abc,b,c->a", G, b, b) + b * B3) / mr
              + metric.ginv @ np.einsum("n,nbc,c->b", bl, G, b) / mr)
    S[3] = -vc2 + bc2 / mr
    S[4] = rho * c2 * (dv + 2.0 * V3)
    S[5:7] = b * (dv + V3) + v * B3
    S[7] = B3 * (dv + 2.0 * V3)
    return S


# -------------------------------------------------------------- speeds

def _den_scale(state):
    return max(1.0, abs(state.v1) * math.sqrt(state.mu * state.rho), abs(state.b1))


def explicit_speeds(state, metric=None):
    """The four closed-form speeds ``[v2/v1, v2/v1, alfven+, alfven-]``.

    Raises DegenerateError when a denominator is below ``TAU_DEN * scale``.
    """
    sm = math.sqrt(state.mu * state.rho)
    v1, v2, b1, b2 = state.v1, state.v2, state.b1, state.b2
    tau = TAU_DEN * _den_scale(state)
    dens = (v1, b1 + sm * v1, b1 - sm * v1)
    if min(abs(x) for x in dens) <= tau:
        raise DegenerateError("closed-form speed has a vanishing denominator")
    s = v2 / v1
    return np.array([s, s, (b2 + sm * v2) / dens[1], (b2 - sm * v2) / dens[2]])


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray     # (8,) complex, sorted; infinite ones last
    infinite: np.ndarray        # (8,) bool
    max_imag: float
    n_infinite: int
    flow_type: FlowType
    tau_imag: float
    singular: bool = False

    @property
    def finite(self):
        return self.eigenvalues[~self.infinite]


def _sort_key(z):
    return (not np.isfinite(z.real), z.real, z.imag)


def default_tau_imag(finite):
    m = float(np.max(np.abs(finite))) if len(finite) else 0.0
    return max(TAU_IMAG_REL * m, TAU_IMAG_FLOOR)


def _label(finite, n_inf, singular, tau):
    if singular:
        return FlowType.DEGENERATE
    if len(finite) and np.max(np.abs(finite.imag)) > tau:
        return FlowType.ELLIPTIC
    if n_inf:
        return FlowType.DEGENERATE
    return FlowType.HYPERBOLIC


def full_spectrum(state, metric, gas, tau_imag=None, method="lapack"):
    """All eight roots of det(C2 - lambda C1) = 0 with a type label.

    A singular pencil yields a Degenerate spectrum of NaNs rather than an
    exception; convergence failures propagate as EigenError.
    """
    q = build_quasilinear(state, metric, gas)
    try:
        res = generalized_eigen(q.C2, q.C1, method=method)
    except SingularPencilError:
        nan = np.full(8, np.nan + 0j)
        return Spectrum(nan, np.zeros(8, bool), float("nan"), 0, FlowType.DEGENERATE,
                        float("nan") if tau_imag is None else tau_imag, singular=True)
    order = sorted(range(8), key=lambda k: _sort_key(res.values[k]))
    vals = res.values[order]
    inf = res.infinite[order]
    finite = vals[~inf]
    # exact conjugate pairing is guaranteed by real arithmetic; clean -0j noise
    tau = default_tau_imag(finite) if tau_imag is None else float(tau_imag)
    max_imag = float(np.max(np.abs(finite.imag))) if finite.size else 0.0
    n_inf = int(inf.sum())
    return Spectrum(vals, inf, max_imag, n_inf, _label(finite, n_inf, False, tau), tau)


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def match_explicit(eigenvalues, closed):
    """Greedy pairing of closed-form speeds to numeric eigenvalues.

    Pairs are taken in order of increasing relative distance.  Returns
    ``(deviations, matched_index, remaining_index)`` where ``deviations[k]``
    is the relative distance for ``closed[k]``.
    """
    ev = np.asarray(eigenvalues)
    cand = []
    for i, c in enumerate(closed):
        for j, z in enumerate(ev):
            if np.isfinite(z):
                cand.append((_rel(z, c), i, j))
    cand.sort()
    dev = np.full(len(closed), np.inf)
    idx = np.full(len(closed), -1)
    used = set()
    for d, i, j in cand:
        if idx[i] < 0 and j not in used:
            dev[i], idx[i] = d, j
            used.add(j)
    rest = [j for j in range(len(ev)) if j not in used]
    return dev, idx, rest


def quartic_residual(state, metric, gas, lam, form="literal", relative=True):
    """Residual of the quartic relation for the last four speeds.

    ``form="literal"`` evaluates the relation with the covariant b_1 and
    the determinant factors in their closed form; ``form="covariant"``
    uses the metric-consistent relation

        (v2 - lam v1)^2 = [N a +- sqrt(N (N a^2 - 4 c^2 (b2 - b1 lam)^2 / (mu rho)))] / 2

    with N = g^22 - 2 g^12 lam + g^11 lam^2 and a = c^2 + |B|^2 / (mu rho).
    The two agree when g = I.

    ``lam`` may be complex (elliptic roots); square roots are then taken on
    the principal complex branch.  The result is minimised over the two
    branches.  With ``relative=True`` it is divided by
    max(1, |(v2 - lam v1)^2|, |first bracket term|).

    Raises BranchError when the literal-form denominator b_c^2 - (b^2)^2 is below
    TAU_DEN * scale, or when lam is real and the inner radicand is negative.
    """
    lam = complex(lam)
    rho, mu = state.rho, state.mu
    v, b = state.v, state.b
    g, gi = metric.g, metric.ginv
    det = float(metric.det)
    mr = mu * rho
    _, c2 = _thermo(state, gas)
    bc2 = float(b @ g @ b)
    B2 = bc2 + state.B3**2
    N = gi[1, 1] - 2.0 * gi[0, 1] * lam + gi[0, 0] * lam**2
    X = (v[1] - lam * v[0]) ** 2
    if form == "literal":
        den = bc2 - b[1] ** 2
        if abs(den) <= TAU_DEN * max(1.0, bc2):
            raise BranchError("quartic denominator b_c^2 - (b^2)^2 vanishes")
        K = (g[0] @ b) ** 2 * (B2 + c2 * mr) / den
        pre = det / (2.0 * mr)
        first = N * K
        rad = N * (-4.0 * c2 * (b[1] - b[0] * lam) ** 2 * mr / det**2 + N * K * K)
    elif form == "covariant":
        a = c2 + B2 / mr
        pre = 0.5
        first = N * a
        rad = N * (N * a * a - 4.0 * c2 * (b[1] - b[0] * lam) ** 2 / mr)
    else:
        raise ValueError(f"unknown form {form!r}")
    if lam.imag == 0.0 and rad.real < 0.0 and abs(rad.imag) == 0.0:
        raise BranchError("negative radicand on both branches")
    s = np.sqrt(complex(rad))
    r = min(abs(X - pre * (first + s)), abs(X - pre * (first - s)))
    if relative:
        r /= max(1.0, abs(X), abs(pre * first))
    return float(r)


def classify(state, metric, gas, tau_imag=None):
    return full_spectrum(state, metric, gas, tau_imag).flow_type


# ------------------------------------------------------------- type map

@dataclass(frozen=True, eq=False)
class TypeMap:
    xi1: np.ndarray
    xi2: np.ndarray
    labels: np.ndarray          # (n1, n2) of 'H' / 'E' / 'D'
    eigenvalues: np.ndarray     # (8, n1, n2) complex
    max_imag: np.ndarray        # (n1, n2)
    errors: dict = field(default_factory=dict)

    def counts(self):
        return {t.value: int(np.count_nonzero(self.labels == t.value)) for t in FlowType}


def type_map(fieldgrid, gas=None, tau_imag=None):
    """Classify every node of a field.

    Errors at a node (inadmissible state, eigensolver failure) are stored in
    ``errors[(i, j)]`` and the node is labelled Degenerate.
    """
    gas = fieldgrid.gas if gas is None else gas
    n1, n2 = fieldgrid.shape
    m = fieldgrid.metric
    labels = np.empty((n1, n2), dtype="<U1")
    ev = np.full((8, n1, n2), np.nan + 0j)
    mi = np.full((n1, n2), np.nan)
    errors = {}
    for i in range(n1):
        for j in range(n2):
            try:
                sp = full_spectrum(fieldgrid.state_at(i, j), m.at(i, j), gas, tau_imag)
            except (ConimhdError, EigenError) as exc:
                labels[i, j] = FlowType.DEGENERATE.value
                errors[(i, j)] = f"{type(exc).__name__}: {exc}"
                continue
            labels[i, j] = sp.flow_type.value
            ev[:, i, j] = sp.eigenvalues
            mi[i, j] = sp.max_imag
    return TypeMap(fieldgrid.xi1, fieldgrid.xi2, labels, ev, mi, errors)


TYPEMAP_HEADER = ("xi1", "xi2", "type", "max_imag") + tuple(
    f"l{k}_{p}" for k in range(1, 9) for p in ("re", "im"))


def _fmt(x):
    return format(float(x), ".17g")


def write_type_map_csv(path, tmap):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(TYPEMAP_HEADER)
        for i, x1 in enumerate(tmap.xi1):
            for j, x2 in enumerate(tmap.xi2):
                row = [_fmt(x1), _fmt(x2), tmap.labels[i, j], _fmt(tmap.max_imag[i, j])]
                for z in tmap.eigenvalues[:, i, j]:
                    row += [_fmt(z.real), _fmt(z.imag)]
                wr.writerow(row)


def read_type_map_csv(path):
    """Returns a list of row dicts (labels as strings, numbers as floats)."""
    with open(path, newline="") as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != TYPEMAP_HEADER:
            raise ValueError(f"{path}: unexpected type-map header")
        return [{k: (v if k == "type" else float(v)) for k, v in row.items()} for row in rd]

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conimhd.characteristics import (
    FlowType,
    build_quasilinear,
    classify,
    explicit_speeds,
    full_spectrum,
    match_explicit,
    quartic_residual,
    read_type_map_csv,
    type_map,
    write_type_map_csv,
)
from conimhd.errors import BranchError, DegenerateError
from conimhd.geometry import constant_metric, flat_metric, spherical_chart
from conimhd.state import IdealGas, SurfaceState
from conimhd.verify.fields import interpolated_v1_field, uniform_surface_field

I2 = flat_metric()
AIR = IdealGas(1.4)
MONO = IdealGas(5 / 3)


def euler_state(v1, v2=0.0, c=1.0):
    return SurfaceState(1.0, v1, v2, 0.0, c * c / 1.4, 0.0, 0.0, 0.0)


MAGNETIZED = SurfaceState(1.0, 3.0, 0.2, 0.1, 1.0, 0.8, -0.4, 0.5)

finite = st.floats(-2.0, 2.0)
thermo = st.floats(0.5, 2.0)


@st.composite
def states(draw):
    return SurfaceState(draw(thermo), draw(finite), draw(finite), draw(finite), draw(thermo),
                        draw(finite), draw(finite), draw(finite))


def test_rest_state_matrix_entries():
    s = SurfaceState(1.3, 0.0, 0.0, 0.0, 0.9, 0.0, 0.0, 0.0)
    C1 = build_quasilinear(s, I2, AIR).C1
    c2 = 1.4 * 0.9 / 1.3
    assert C1[0, 1] == 1.3
    assert C1[1, 4] == pytest.approx(1 / 1.3)
    assert C1[4, 1] == pytest.approx(c2 * 1.3)
    assert np.all(np.diag(C1) == 0)
    nz = {(0, 1), (1, 4), (4, 1)}
    assert {tuple(ix) for ix in np.argwhere(C1 != 0)} == nz


def test_lorentz_entries():
    s = SurfaceState(1.0, 2.0, 1.0, 0.0, 1.0, 1.0, 0.5, 0.7, mu=2.0)
    q = build_quasilinear(s, I2, AIR)
    assert q.C1[3, 7] == pytest.approx(-1.0 / 2.0)
    assert q.C1[1, 6] == pytest.approx(0.5 / 2.0)
    assert q.C2[5, 2] == 1.0 and q.C1[6, 2] == -1.0


def test_explicit_speeds_aligned():
    s = SurfaceState(1.0, 2.0, 1.0, 0.0, 1.0, 1.0, 0.5, 0.0)
    np.testing.assert_allclose(explicit_speeds(s), [0.5] * 4)


def test_explicit_speeds_crossed():
    s = SurfaceState(1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0)
    np.testing.assert_allclose(explicit_speeds(s), [0.0, 0.0, 1.0, -1.0])


@pytest.mark.parametrize("mu", [0.3, 1.0, 4.0])
def test_explicit_speeds_without_field(mu):
    s = SurfaceState(1.7, 2.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, mu=mu)
    np.testing.assert_allclose(explicit_speeds(s), [0.5] * 4)


def test_explicit_speeds_degenerate():
    with pytest.raises(DegenerateError):
        explicit_speeds(euler_state(0.0))
    with pytest.raises(DegenerateError):
        # b1 = sqrt(mu rho) v1 zeroes an Alfven denominator
        explicit_speeds(SurfaceState(1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.3, 0.0))


def test_supersonic_euler_spectrum():
    sp = full_spectrum(euler_state(2.0), I2, AIR)
    r = 1 / np.sqrt(3)
    np.testing.assert_allclose(sp.eigenvalues, [-r] + [0] * 6 + [r], atol=1e-12)
    assert sp.flow_type is FlowType.HYPERBOLIC
    assert sp.n_infinite == 0


def test_subsonic_euler_spectrum():
    sp = full_spectrum(euler_state(0.1), I2, AIR)
    # lambda^2 (0.01 - 1) = 1
    acoustic = sp.eigenvalues[np.abs(sp.eigenvalues.imag) > 1e-9]
    np.testing.assert_allclose(np.sort(acoustic.imag), [-1 / np.sqrt(0.99), 1 / np.sqrt(0.99)], rtol=1e-10)
    assert sp.flow_type is FlowType.ELLIPTIC


def test_magnetized_spectrum_contains_explicit_speeds():
    sp = full_spectrum(MAGNETIZED, I2, MONO)
    dev, idx, rest = match_explicit(sp.eigenvalues, explicit_speeds(MAGNETIZED))
    assert np.max(dev) < 1e-8
    assert len(rest) == 4
    for lam in sp.eigenvalues[rest]:
        assert quartic_residual(MAGNETIZED, I2, MONO, lam) < 1e-6
        assert quartic_residual(MAGNETIZED, I2, MONO, lam, form="covariant") < 1e-6


def test_quartic_negative_control():
    lam = MAGNETIZED.v2 / MAGNETIZED.v1
    assert quartic_residual(MAGNETIZED, I2, MONO, lam) > 1e-3


def test_quartic_branch_error():
    s = MAGNETIZED.replace(b1=0.0)
    with pytest.raises(BranchError):
        quartic_residual(s, I2, MONO, 0.3)


def test_quartic_covariant_on_general_metric():
    g = constant_metric([[1.5, 0.4], [0.4, 0.8]])
    sp = full_spectrum(MAGNETIZED, g, MONO)
    _, _, rest = match_explicit(sp.eigenvalues, explicit_speeds(MAGNETIZED))
    for lam in sp.eigenvalues[rest]:
        assert quartic_residual(MAGNETIZED, g, MONO, lam, form="covariant") < 1e-8


def test_quartic_unknown_form():
    with pytest.raises(ValueError):
        quartic_residual(MAGNETIZED, I2, MONO, 0.1, form="other")


def test_classify_examples():
    assert classify(euler_state(2.0), I2, AIR) is FlowType.HYPERBOLIC
    assert classify(euler_state(0.1), I2, AIR) is FlowType.ELLIPTIC
    # v1 = b1 = 0 gives an infinite root; supersonic v2 keeps the rest real
    assert classify(euler_state(0.0, v2=2.0), I2, AIR) is FlowType.DEGENERATE


def test_singular_pencil_is_degenerate():
    # v = b = 0: every crossflow derivative coefficient vanishes together
    s = SurfaceState(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0)
    sp = full_spectrum(s, I2, AIR)
    assert sp.flow_type is FlowType.DEGENERATE
    assert sp.singular


def test_explicit_tau_imag_controls_label():
    s = euler_state(0.1)
    assert full_spectrum(s, I2, AIR, tau_imag=10.0).flow_type is FlowType.HYPERBOLIC


def test_spectrum_sorted_and_conjugate():
    sp = full_spectrum(euler_state(0.1), I2, AIR)
    ev = sp.eigenvalues
    key = [(z.real, z.imag) for z in ev]
    assert key == sorted(key)
    cplx = ev[np.abs(ev.imag) > 0]
    for z in cplx:
        assert np.min(np.abs(cplx - np.conj(z))) < 1e-12


def test_type_map_transition_band():
    f = interpolated_v1_field()
    tm = type_map(f)
    counts = tm.counts()
    assert counts["H"] > 0 and counts["E"] > 0 and counts["D"] == 0
    # labels depend on xi2 only and switch exactly once
    row = tm.labels[0]
    assert np.all(tm.labels == row)
    switches = np.count_nonzero(row[1:] != row[:-1])
    assert switches == 1
    v1 = f.phi[1, 0]
    assert np.all((row == "H") == (v1 > 1.0))


@pytest.mark.parametrize("v1,label", [(2.0, "H"), (0.1, "E")])
def test_type_map_uniform(v1, label):
    ch = spherical_chart(theta=(np.pi / 3, 2 * np.pi / 3))
    f = uniform_surface_field(ch, 6, 6, euler_state(v1).as_array(), AIR)
    tm = type_map(f)
    assert np.all(tm.labels == label)


def test_type_map_records_node_errors():
    ch = spherical_chart(theta=(np.pi / 3, 2 * np.pi / 3))
    f = uniform_surface_field(ch, 4, 4, euler_state(2.0).as_array(), AIR)

    class Broken(IdealGas):
        def dp_drho(self, rho, e):
            return -100.0

    tm = type_map(f, gas=Broken(1.4))
    assert np.all(tm.labels == "D")
    assert len(tm.errors) == tm.labels.size


def test_type_map_csv(tmp_path):
    tm = type_map(interpolated_v1_field(4, 8))
    p = tmp_path / "t.csv"
    write_type_map_csv(p, tm)
    rows = read_type_map_csv(p)
    assert len(rows) == tm.labels.size
    assert [r["type"] for r in rows] == list(tm.labels.ravel())
    np.testing.assert_array_equal([r["l1_im"] for r in rows], tm.eigenvalues[0].imag.ravel())


@given(states())
def test_pencil_contains_explicit_speeds(s):
    try:
        closed = explicit_speeds(s)
    except DegenerateError:
        return
    sp = full_spectrum(s, I2, MONO)
    if sp.singular or sp.n_infinite:
        return
    # stay away from nearly defective clusters where roots move like sqrt(eps)
    if min(abs(s.v1), abs(s.b1 + s.v1 * np.sqrt(s.rho)), abs(s.b1 - s.v1 * np.sqrt(s.rho))) < 0.05:
        return
    dev, _, _ = match_explicit(sp.eigenvalues, closed)
    assert np.max(dev) < 1e-6


@settings(max_examples=40)
@given(states(), st.floats(0.3, 3.0), st.floats(-0.5, 0.5))
def test_spectrum_is_conjugate_closed(s, k, off):
    g = constant_metric([[k, off], [off, 1.0]])
    sp = full_spectrum(s, g, MONO)
    if sp.singular:
        return
    fin = sp.finite
    cplx = fin[np.abs(fin.imag) > 1e-12]
    for z in cplx:
        assert np.min(np.abs(cplx - np.conj(z))) <= 1e-8 * max(1.0, abs(z))


def test_literal_and_covariant_agree_on_identity():
    for lam in (0.1, -0.7, 1.3):
        a = quartic_residual(MAGNETIZED, I2, MONO, lam, relative=False)
        b = quartic_residual(MAGNETIZED, I2, MONO, lam, form="covariant", relative=False)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)

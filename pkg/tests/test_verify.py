import numpy as np
import pytest

from conimhd.characteristics import build_quasilinear
from conimhd.errors import NoiseFloorError
from conimhd.geometry import flat_metric, spherical_chart
from conimhd.residual import assemble_residual, partial
from conimhd.state import IdealGas, SurfaceState
from conimhd.verify.convergence import convergence_order, observed_orders
from conimhd.verify.eigen import generalized_eigen
from conimhd.verify.fields import band_chart, freestream_field, uniform_surface_field
from conimhd.verify.sampling import admissible, random_metric, random_state, sample_states
from conimhd.verify.suites import SUITES, report_json, run_all, run_suite, spectral_deviation


def test_order_of_exact_quarters():
    assert convergence_order([4e-3, 1e-3, 2.5e-4]) == pytest.approx(2.0)
    assert observed_orders([4e-3, 1e-3]) == [pytest.approx(2.0)]


def test_order_of_sine_central_difference():
    errs = []
    for n in (32, 64, 128):
        x = np.linspace(0.0, np.pi, n + 1)
        f = np.sin(x)[:, None] * np.ones((1, 3))
        d = partial(f, 0, x[1] - x[0], False)[1:-1, 0]
        errs.append(np.max(np.abs(d - np.cos(x[1:-1]))))
    assert convergence_order(errs) == pytest.approx(2.0, abs=0.1)


def test_noise_floor():
    with pytest.raises(NoiseFloorError):
        convergence_order([1e-14, 9e-15, 1.1e-14])
    with pytest.raises(ValueError):
        convergence_order([1e-3])


def test_freestream_radial_node():
    f = freestream_field(spherical_chart(), 8, 8, 1.0, (1.0, 0.0, 0.0), 1.0)
    i = np.argmin(np.abs(f.xi1 - np.pi / 2))
    np.testing.assert_allclose(f.phi[1:4, i, 0], [0.0, 0.0, 1.0], atol=1e-15)


def test_rest_state_residual_vanishes():
    f = uniform_surface_field(band_chart(), 16, 16, [1.3, 0, 0, 0, 0.7, 0, 0, 0])
    assert np.max(np.abs(assemble_residual(f))) < 1e-10


def test_pencil_invariance_trivial_multipliers():
    s = SurfaceState(1.2, 0.7, -0.4, 0.2, 0.9, 0.3, 0.5, -0.1)
    q = build_quasilinear(s, flat_metric(), IdealGas(5 / 3))
    ref = generalized_eigen(q.C2, q.C1).values
    assert spectral_deviation(generalized_eigen(q.C2, q.C1).values, ref) == 0.0
    assert spectral_deviation(generalized_eigen(2 * q.C2, 2 * q.C1).values, ref) < 1e-13


def test_spectral_deviation():
    assert spectral_deviation([1, 2j, -2j], [-2j, 1, 2j]) == 0.0
    assert spectral_deviation([1.0, 3.0], [1.0, 2.0]) == pytest.approx(0.5)
    assert spectral_deviation([1.0, np.inf], [1.0, 2.0]) == np.inf


def test_sampler_filter():
    states, rejected = sample_states(np.random.default_rng(0), 50)
    assert len(states) == 50 and rejected >= 0
    assert all(admissible(s) for s in states)
    assert not admissible(SurfaceState(1.0, 0.0, 0.2, 0.0, 1.0, 0.5, 0.1, 0.0))


def test_random_draws_are_seeded():
    a = random_state(np.random.default_rng(7))
    b = random_state(np.random.default_rng(7))
    assert a == b
    g = random_metric(np.random.default_rng(1))
    assert np.all(np.linalg.eigvalsh(g.g) >= 0.5 - 1e-12)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    results = run_suite(name, 42)
    assert results
    for r in results:
        assert r["passed"], r


def test_report_is_deterministic():
    names = ["eigen_match", "pseudotime", "b_limit"]
    a = report_json(run_all(42, names))
    b = report_json(run_all(42, names))
    assert a == b
    assert report_json(run_all(43, names)) != a

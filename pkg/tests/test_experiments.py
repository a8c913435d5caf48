import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holling_dyn import experiments
from holling_dyn.errors import HypothesisViolated, NoCycleDetected, ValidationError
from holling_dyn.model import FullParams, ReducedParams

CANON = FullParams(beta_N=2, mu_N=1, delta=0.01, kappa=0.2, rho=0.5, gamma=2, mu_P=1, eta=3, beta_P=1.5)
EXTINCT = dataclasses.replace(CANON, kappa=0.1)
SMALL_REDUCED = ReducedParams(beta_N=2, mu_N=1, K=100, kappa=0.2, chi=0.25, beta_P=1.5, mu_P=1, eta=3)


def test_uniform_grid_hits_endpoints():
    g = experiments.uniform_grid(0.0, 1.0, 0.3)
    assert g[0] == 0.0 and g[-1] == 1.0
    assert np.max(np.diff(g)) <= 0.3


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-3, 10), st.floats(1e-3, 10), st.floats(0, 1e5), st.floats(0, 1e4))
def test_slow_manifold_split_conserves_predators(chi, kappa, N0, P0):
    S, H = experiments.slow_manifold_split(chi, kappa, N0, P0)
    assert S >= 0 and H >= 0
    assert S + H == pytest.approx(P0, rel=1e-12, abs=1e-12)


def test_limit_study_errors_decrease():
    res = experiments.singular_limit_study(SMALL_REDUCED, (1e-1, 1e-2, 1e-3), (50.0, 5.0), 10.0)
    assert all(b < a for a, b in zip(res.sup_err_N, res.sup_err_N[1:]))
    assert all(b < a for a, b in zip(res.sup_err_P, res.sup_err_P[1:]))
    assert len(res.full) == 3
    assert res.rel_err_N[-1] < 0.01


@pytest.mark.parametrize("eps", [(), (1e-3, 1e-2), (1e-2, 0.0), (1e-2, 1e-2)])
def test_limit_study_rejects_bad_epsilon_lists(eps):
    with pytest.raises(ValidationError):
        experiments.singular_limit_study(SMALL_REDUCED, eps, (50.0, 5.0), 1.0)


def test_limit_study_explicit_split():
    res = experiments.singular_limit_study(SMALL_REDUCED, (1e-2,), (50.0, 5.0), 1.0, split=(5.0, 0.0))
    assert res.full[0].states[0, 1] == 5.0


def test_extinction_run_converges():
    res = experiments.extinction_run(EXTINCT, (50.0, 10.0, 10.0), 500.0)
    assert res.converged_to_E2
    assert res.terminal[0] == pytest.approx(EXTINCT.N_hat, rel=1e-6)


def test_extinction_run_short_horizon_not_converged():
    # The slowest E2 eigenvalue is about -0.048, so 200 years leave ~1e-4 predators.
    res = experiments.extinction_run(EXTINCT, (50.0, 10.0, 10.0), 200.0)
    assert not res.converged_to_E2


def test_extinction_run_requires_stable_e2():
    with pytest.raises(HypothesisViolated):
        experiments.extinction_run(CANON, (50.0, 1.0, 1.0), 10.0)
    with pytest.raises(ValidationError):
        experiments.extinction_run(EXTINCT, (50.0, 0.0, 0.0), 10.0)


def test_persistence_probe_canonical():
    m = experiments.persistence_probe(CANON, [(10.0, 1.0, 1.0), (150.0, 20.0, 5.0)], grid_step=0.1)
    assert m.shape == (2, 2)
    np.testing.assert_allclose(m[:, 0], 60.0, rtol=1e-3)
    np.testing.assert_allclose(m[:, 1], 12.0, rtol=1e-3)


def test_persistence_probe_validation():
    with pytest.raises(HypothesisViolated):
        experiments.persistence_probe(EXTINCT, [(1.0, 1.0, 1.0)])
    with pytest.raises(ValidationError):
        experiments.persistence_probe(CANON, [(1.0, 1.0, 1.0)], horizon=10, window=20)
    with pytest.raises(ValidationError):
        experiments.persistence_probe(CANON, [(0.0, 1.0, 1.0)], horizon=10, window=5)


def test_hopf_boundary_bracket_checked():
    with pytest.raises(ValidationError):
        experiments.hopf_boundary_rho(CANON, 0.5, 0.6)


def test_refined_peaks_recover_sine_maxima():
    t = np.arange(0, 20, 0.05)
    times, values = experiments._refined_peaks(t, np.sin(t))
    np.testing.assert_allclose(times, np.pi / 2 + 2 * np.pi * np.arange(len(times)), atol=1e-4)
    np.testing.assert_allclose(values, 1.0, atol=1e-5)


def test_detect_limit_cycle_past_boundary():
    rho_c = experiments.hopf_boundary_rho(CANON, 0.5, 2.0)
    p = dataclasses.replace(CANON, rho=1.5 * rho_c)
    rep = experiments.detect_limit_cycle(p, (60.0, 2.0, 10.0), settle=300.0, observe=150.0, grid_step=0.02)
    assert rep.found
    assert rep.period == pytest.approx(20.6894, rel=1e-3)
    assert rep.amplitude_N > 0 and rep.amplitude_P > 0


def test_detect_limit_cycle_rejects_stable_interior():
    with pytest.raises(HypothesisViolated):
        experiments.detect_limit_cycle(CANON, (60.0, 2.0, 10.0), 10.0, 10.0)


def test_detect_limit_cycle_short_window():
    p = dataclasses.replace(CANON, rho=1.3)
    with pytest.raises(NoCycleDetected):
        experiments.detect_limit_cycle(p, (60.0, 2.0, 10.0), settle=10.0, observe=15.0)


def test_slow_manifold_split_reference_numbers():
    S, H = experiments.slow_manifold_split(0.11, 3.2e-5, 3e4, 4e3)
    assert S == pytest.approx(3617.9, abs=0.05)
    assert H == pytest.approx(382.1, abs=0.05)


def test_extinction_without_prey_stays_on_predator_face():
    res = experiments.extinction_run(EXTINCT, (0.0, 1.0, 1.0), 100.0)
    assert np.all(res.trajectory.states[:, 0] == 0.0)
    assert res.terminal[1] + res.terminal[2] < 1e-10

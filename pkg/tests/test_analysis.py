import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holling_dyn import analysis, sampling
from holling_dyn.errors import (
    AssumptionViolated,
    EmptyFeasibleInterval,
    NoInteriorEquilibrium,
    UnsupportedExponents,
    ValidationError,
)
from holling_dyn.experiments import hopf_boundary_rho
from holling_dyn.model import FullParams, jacobian_full, rhs_full

CANON = FullParams(beta_N=2, mu_N=1, delta=0.01, kappa=0.2, rho=0.5, gamma=2, mu_P=1, eta=3, beta_P=1.5)
EXTINCT = dataclasses.replace(CANON, kappa=0.1)

seeds = st.integers(0, 2**32 - 1)


def interior_draw(seed):
    return sampling.draw(np.random.default_rng(seed), "interior")


def test_canonical_interior_equilibrium():
    assert analysis.interior_equilibrium(CANON) == pytest.approx((60.0, 2.0, 10.0))
    np.testing.assert_allclose(rhs_full(CANON, (60.0, 2.0, 10.0)), 0.0, atol=1e-12)


def test_canonical_routh_hurwitz():
    rh = analysis.routh_hurwitz_interior(CANON)
    assert (rh.p1, rh.p2, rh.p3) == pytest.approx((12.1, 4.5, 1.2))
    assert rh.stable
    assert rh.hurwitz_product == pytest.approx(12.1 * 4.5 - 1.2)


def test_canonical_report():
    rep = analysis.check_assumptions(CANON)
    assert rep.a21_holds and rep.a22_holds and rep.interior_exists
    assert not rep.e2_stable
    eq = analysis.equilibria(CANON)
    assert eq.classification_at == {"E1": "unstable", "E2": "unstable", "E_star": "stable"}
    assert max(eq.eigenvalues_at["E1"].real) == pytest.approx(1.0)


def test_extinction_regime_has_no_interior():
    rep = analysis.check_assumptions(EXTINCT)
    assert rep.e2_stable and not rep.interior_exists
    eq = analysis.equilibria(EXTINCT)
    assert eq.E_star is None and "E_star" not in eq.points()
    assert eq.classification_at["E2"] == "stable"
    with pytest.raises(NoInteriorEquilibrium):
        analysis.routh_hurwitz_interior(EXTINCT)


def test_unsupported_exponents():
    with pytest.raises(UnsupportedExponents):
        analysis.equilibria(dataclasses.replace(CANON, l=2.0))


def test_standing_assumptions_enforced():
    bad = dataclasses.replace(CANON, eta=0.1)
    assert not analysis.check_assumptions(bad).a21_holds
    with pytest.raises(AssumptionViolated):
        analysis.equilibria(bad)


def test_classify():
    assert analysis.classify([-1.0, -2.0]) == "stable"
    assert analysis.classify([-1.0, 0.5]) == "unstable"
    assert analysis.classify([-1.0, 1e-12]) == "marginal"


def test_lambda_star_canonical():
    data = analysis.predator_subsystem(CANON)
    assert data.lambda_star == pytest.approx(0.613999, abs=1e-6)
    assert data.lambda_star == pytest.approx(-max(np.linalg.eigvals(data.M).real), abs=1e-10)
    w = np.array(data.left_vec)
    np.testing.assert_allclose(w @ data.M, -data.lambda_star * w, atol=1e-10)
    assert np.all(w > 0)


def test_dissipativity_bound_uses_initial_prey():
    small = analysis.predator_subsystem(CANON)
    big = analysis.predator_subsystem(CANON, N0=10 * CANON.N_hat)
    assert big.dissipativity_M == pytest.approx(10 * small.dissipativity_M)


def test_dissipative_weight_at_equilibrium_below_bound():
    data = analysis.predator_subsystem(CANON)
    v = analysis.dissipative_weight(CANON, data, [analysis.interior_equilibrium(CANON)])
    assert 0 < v[0] < data.dissipativity_M


def test_lyapunov_weights():
    c1, c2 = analysis.lyapunov_coefficients(EXTINCT)
    assert (c1, c2) == pytest.approx((5.6, 7.6))
    first, second = analysis.lyapunov_inequalities(EXTINCT, c1, c2)
    assert first < 0 and second < 0


def test_lyapunov_needs_stable_e2():
    with pytest.raises(EmptyFeasibleInterval):
        analysis.lyapunov_coefficients(CANON)


def test_lyapunov_value():
    c1, c2 = analysis.lyapunov_coefficients(EXTINCT)
    assert analysis.lyapunov_value(EXTINCT, c1, c2, (EXTINCT.N_hat, 0, 0)) == 0.0
    assert analysis.lyapunov_value(EXTINCT, c1, c2, (50.0, 1.0, 1.0)) > 0
    vals = analysis.lyapunov_value(EXTINCT, c1, c2, [(50.0, 1.0, 1.0), (150.0, 0.0, 2.0)])
    assert vals.shape == (2,)
    with pytest.raises(ValidationError):
        analysis.lyapunov_value(EXTINCT, c1, c2, (0.0, 1.0, 1.0))


def test_published_stability_inequality_disagrees_near_boundary():
    rho_c = hopf_boundary_rho(CANON, 0.5, 2.0)
    assert rho_c == pytest.approx(0.8517248437633, abs=1e-9)
    between = dataclasses.replace(CANON, rho=0.86)
    rep = analysis.check_assumptions(between)
    assert rep.interior_stable_published and not rep.interior_stable
    eigs = np.linalg.eigvals(jacobian_full(between, analysis.interior_equilibrium(between)))
    assert max(eigs.real) > 0


def test_k_competitive_pattern():
    assert analysis.k_competitive_check(CANON)
    J = jacobian_full(CANON, (1.0, 1.0, 1.0))
    J[0, 2] = 0.1
    assert not analysis.k_competitive_pattern(J)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_routh_hurwitz_coefficients_are_the_characteristic_polynomial(seed):
    p = interior_draw(seed)
    J = jacobian_full(p, analysis.interior_equilibrium(p))
    _, c1, c2, c3 = np.poly(J)
    rh = analysis.routh_hurwitz_interior(p)
    scale = max(1.0, abs(c1), abs(c2), abs(c3))
    np.testing.assert_allclose((rh.p1, rh.p2, rh.p3), (c1, c2, c3), rtol=1e-8, atol=1e-10 * scale)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_interior_equilibrium_is_positive_root(seed):
    p = interior_draw(seed)
    e = np.array(analysis.interior_equilibrium(p))
    assert np.all(e > 0)
    scale = np.abs(jacobian_full(p, e)).max() * e.max()
    np.testing.assert_allclose(rhs_full(p, e), 0.0, atol=1e-11 * scale)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_existence_exactly_when_e2_unstable(seed):
    p = sampling.draw(np.random.default_rng(seed))
    rep = analysis.check_assumptions(p)
    assert rep.interior_exists != rep.e2_stable


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_lambda_star_is_bracketed_and_solves_psi(seed):
    p = sampling.draw(np.random.default_rng(seed))
    lam = analysis.predator_subsystem(p).lambda_star
    assert 0 < lam < min(p.mu_P + p.eta, p.mu_P + p.gamma - p.beta_P)
    assert analysis.psi(p, lam) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_lyapunov_weights_feasible_whenever_e2_stable(seed):
    p = sampling.draw(np.random.default_rng(seed), "extinction")
    c1, c2 = analysis.lyapunov_coefficients(p)
    assert c2 == pytest.approx(c1 + 1 / p.rho)
    assert all(v < 0 for v in analysis.lyapunov_inequalities(p, c1, c2))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_k_competitive_for_random_draws(seed):
    assert analysis.k_competitive_check(sampling.draw(np.random.default_rng(seed)), samples=200, seed=seed)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_left_vector_ordering(seed):
    p = sampling.draw(np.random.default_rng(seed))
    w_S, w_H = analysis.predator_subsystem(p).left_vec
    assert w_H > w_S > 0


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_interior_handling_ratio(seed):
    p = interior_draw(seed)
    e = analysis.interior_equilibrium(p)
    ratio = -(p.beta_P - p.mu_P - p.eta) / (p.beta_P - p.mu_P)
    assert e.P_H == pytest.approx(ratio * e.P_S, rel=1e-12)

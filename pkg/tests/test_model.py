import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holling_dyn.errors import ValidationError
from holling_dyn.fitting import table2_params
from holling_dyn.model import (
    FullParams,
    ReducedParams,
    convert_logistic,
    embed_reduced,
    epsilon_embed,
    jacobian_full,
    rhs_full,
    rhs_reduced,
    rhs_scaled,
)

CANON = FullParams(beta_N=2, mu_N=1, delta=0.01, kappa=0.2, rho=0.5, gamma=2, mu_P=1, eta=3, beta_P=1.5)

positive = st.floats(1e-3, 1e3)
state3 = st.tuples(positive, positive, positive)


def test_full_rhs_by_hand():
    N, S, H = 10.0, 2.0, 3.0
    dN, dS, dH = rhs_full(CANON, (N, S, H))
    assert dN == pytest.approx(1 * N - 0.01 * N * N - 0.2 * N * S)
    assert dS == pytest.approx(-4 * S - 0.1 * N * S + 2 * H)
    assert dH == pytest.approx(-H + 0.1 * N * S - 2 * H + 1.5 * (S + H))


def test_rhs_rejects_wrong_shape():
    with pytest.raises(ValidationError):
        rhs_full(CANON, (1.0, 2.0))


@pytest.mark.parametrize("field", ["delta", "kappa", "gamma", "mu_P", "beta_N"])
def test_nonpositive_rate_rejected(field):
    with pytest.raises(ValidationError):
        dataclasses.replace(CANON, **{field: 0.0})


def test_exponents_below_one_rejected():
    with pytest.raises(ValidationError):
        dataclasses.replace(CANON, l=0.5)


def test_reduced_invariants():
    good = table2_params()
    with pytest.raises(ValidationError):
        dataclasses.replace(good, mu_N=good.beta_N + 1)
    with pytest.raises(ValidationError):
        dataclasses.replace(good, eta=0.1)


def test_logistic_conversion_roundtrip():
    d = convert_logistic(1.6567, 1.0, 303000.0)
    assert d == pytest.approx(0.6567 / 303000.0)
    with pytest.raises(ValidationError):
        convert_logistic(1.0, 1.0, 10.0)


def test_epsilon_embed():
    assert epsilon_embed(0.11, 1e-3) == pytest.approx((110.0, 1000.0))
    with pytest.raises(ValidationError):
        epsilon_embed(0.11, 0.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-4, 1e-1), state3)
def test_scaled_field_matches_embedded_full_field(eps, s):
    p = table2_params()
    s = np.array(s) * 1e3
    np.testing.assert_allclose(rhs_scaled(p, eps, s), rhs_full(embed_reduced(p, eps), s), rtol=1e-9, atol=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.tuples(positive, positive))
def test_reduced_field_is_scaled_field_on_slow_manifold_limit(s):
    # As eps -> 0, total predator growth on the quasi-steady split equals the reduced rate.
    p = table2_params()
    N, P = s[0] * 1e3, s[1] * 1e2
    h = p.chi * p.kappa * N
    S, H = P / (1 + h), P * h / (1 + h)
    full = rhs_scaled(p, 1e-3, (N, S, H))
    red = rhs_reduced(p, (N, P))
    assert full[0] == pytest.approx(red[0], rel=1e-9, abs=1e-6)
    assert full[1] + full[2] == pytest.approx(red[1], rel=1e-9, abs=1e-6)


@settings(max_examples=80, deadline=None)
@given(state3, st.sampled_from([1.0, 1.5, 2.0]), st.sampled_from([1.0, 2.0]))
def test_jacobian_matches_finite_differences(s, l, m):
    p = dataclasses.replace(CANON, l=l, m=m)
    y = np.array(s)
    J = jacobian_full(p, y)
    for j in range(3):
        h = 1e-6 * max(1.0, abs(y[j]))
        e = np.zeros(3)
        e[j] = h
        fd = (rhs_full(p, y + e) - rhs_full(p, y - e)) / (2 * h)
        np.testing.assert_allclose(J[:, j], fd, rtol=1e-5, atol=1e-6 * np.max(np.abs(J)))


@settings(max_examples=80, deadline=None)
@given(state3)
def test_orthant_faces_are_invariant(s):
    # Each component's derivative is nonnegative on its own zero face.
    for i in range(3):
        y = np.array(s)
        y[i] = 0.0
        assert rhs_full(CANON, y)[i] >= 0.0


def test_reduced_params_dict_roundtrip():
    p = table2_params()
    assert ReducedParams(**p.to_dict()) == p


@settings(max_examples=80, deadline=None)
@given(state3)
def test_total_predator_bookkeeping(s):
    _, dS, dH = rhs_full(CANON, s)
    expected = (CANON.beta_P - CANON.mu_P) * (s[1] + s[2]) - CANON.eta * s[1]
    assert dS + dH == pytest.approx(expected, rel=1e-12, abs=1e-9)

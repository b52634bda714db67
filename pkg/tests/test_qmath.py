import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qkla.errors import DomainError
from qkla.qmath import (
    EPS_BRANCH,
    EntropicIndex,
    digamma,
    log_gamma,
    q_exp,
    q_log,
    q_product_expand,
)

positive = st.floats(min_value=1e-6, max_value=1e6)
q_range = st.floats(min_value=-1.0, max_value=2.0)


def test_q_log_examples():
    assert q_log(math.e, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert q_log(3.0, 0.0) == pytest.approx(2.0, rel=1e-15)
    assert q_log(2.0, 0.5) == pytest.approx((math.sqrt(2) - 1) / 0.5, rel=1e-15)
    assert q_log(2.0, 0.5) == pytest.approx(0.8284271, abs=1e-7)


def test_q_log_rejects_nonpositive():
    with pytest.raises(DomainError):
        q_log(0.0, 0.5)
    with pytest.raises(DomainError):
        q_log(np.array([1.0, -2.0]), 1.0)


def test_q_exp_examples():
    assert q_exp(1.0, 1.0) == pytest.approx(math.e, rel=1e-15)
    assert q_exp(-3.0, 0.0) == 0.0
    assert q_exp(q_log(5.0, 1.5), 1.5) == pytest.approx(5.0, rel=1e-14)


def test_q_exp_divergent_bracket():
    with pytest.raises(DomainError):
        q_exp(3.0, 1.5)  # 1 - 0.5 * 3 < 0


def test_q_exp_vectorised_cutoff():
    out = q_exp(np.array([-3.0, 0.0, 0.5]), 0.0)
    np.testing.assert_allclose(out, [0.0, 1.0, 1.5])


def test_q_product_examples():
    assert q_product_expand(2.0, 3.0, 1.0) == pytest.approx(math.log(6), rel=1e-15)
    assert q_product_expand(2.0, 0.5, 0.7) == pytest.approx(0.0, abs=1e-15)
    assert q_product_expand(2.0, 3.0, 0.5) == pytest.approx(q_log(6.0, 0.5), rel=1e-13)


def test_entropic_index():
    idx = EntropicIndex(0.3)
    assert idx.Q + idx.q == 2.0
    with pytest.raises(DomainError):
        EntropicIndex(float("inf"))


ULP = np.finfo(float).eps


def roundtrip_condition(x, q):
    # relative error of exp_q(y) per relative error of y = ln_q x is
    # |x^{1-q} - 1| / x^{1-q}; large when 1 + (1-q) y cancels
    t = math.exp((1 - q) * math.log(x))
    return abs(t - 1) / t


@settings(max_examples=1000, deadline=None)
@given(x=positive, q=q_range)
def test_inversion(x, q):
    tol = 1e-10 + 4 * ULP * roundtrip_condition(x, q)
    assert q_exp(q_log(x, q), q) == pytest.approx(x, rel=tol)


@settings(max_examples=1000, deadline=None)
@given(x=st.floats(min_value=1e-2, max_value=1e2), q=q_range)
def test_inversion_well_conditioned(x, q):
    assert q_exp(q_log(x, q), q) == pytest.approx(x, rel=1e-10)


@settings(max_examples=1000, deadline=None)
@given(u=positive, v=positive, q=q_range)
def test_product_identity(u, v, q):
    lhs = q_log(u * v, q)
    lu, lv = q_log(u, q), q_log(v, q)
    # relative to the largest summed term, since the identity itself cancels;
    # x^{1-q} bounds the error of ln_q from rounding its argument (u*v, u, v)
    scale = max(abs(lhs), abs(lu), abs(lv), abs((1 - q) * lu * lv),
                (u * v) ** (1 - q), u ** (1 - q), v ** (1 - q))
    assert abs(q_product_expand(u, v, q) - lhs) <= 1e-12 * scale


@settings(max_examples=1000, deadline=None)
@given(u=st.floats(min_value=0.5, max_value=2.0), v=st.floats(min_value=0.5, max_value=2.0),
       q=q_range)
def test_product_identity_well_conditioned(u, v, q):
    assert q_product_expand(u, v, q) == pytest.approx(q_log(u * v, q), rel=1e-12, abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(x=positive, sign=st.sampled_from([-1.0, 1.0]))
def test_branch_continuity(x, sign):
    lx = math.log(x)
    assert abs(q_log(x, 1.0 + sign * EPS_BRANCH) - lx) <= 1e-9
    # just outside the branch the only departure from ln x is the true
    # (1-q) ln^2 x / 2 term, no cancellation error
    q = 1.0 + sign * 2 * EPS_BRANCH
    expected = float(mpmath.expm1((1 - mpmath.mpf(q)) * mpmath.log(x)) / (1 - mpmath.mpf(q)))
    assert q_log(x, q) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(5.0) == pytest.approx(math.log(24), rel=1e-15)
    assert log_gamma(0.5) == pytest.approx(float(mpmath.loggamma(0.5)), rel=1e-14)
    assert log_gamma(0.5) == pytest.approx(0.5723649, abs=1e-7)


@pytest.mark.parametrize("x", [1e-3, 0.1, 0.7, 2.5, 17.3, 1234.5, 99999.0, 1e5])
def test_log_gamma_precision(x):
    ref = float(mpmath.loggamma(x))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_log_gamma_vectorised():
    xs = np.array([0.5, 1.0, 5.0])
    np.testing.assert_allclose(log_gamma(xs), [0.5 * math.log(math.pi), 0.0, math.log(24)], rtol=1e-14)


def test_special_function_domain():
    for fn in (log_gamma, digamma):
        with pytest.raises(DomainError):
            fn(0.0)
        with pytest.raises(DomainError):
            fn(-1.5)


def test_digamma_examples():
    euler = float(mpmath.euler)
    assert digamma(1.0) == pytest.approx(-euler, rel=1e-12)
    assert digamma(1.0) == pytest.approx(-0.5772156649, abs=1e-10)
    assert digamma(2.0) == pytest.approx(1 - euler, rel=1e-12)
    assert digamma(10.0) - digamma(9.0) == pytest.approx(1 / 9, abs=1e-14)


@pytest.mark.parametrize("x", [0.01, 0.3, 1.7, 42.0, 5000.5])
def test_digamma_precision(x):
    assert digamma(x) == pytest.approx(float(mpmath.digamma(x)), rel=1e-10)


@settings(max_examples=1000, deadline=None)
@given(x=st.floats(min_value=0.1, max_value=1e4))
def test_digamma_recurrence(x):
    assert abs(digamma(x + 1) - digamma(x) - 1 / x) <= 1e-12

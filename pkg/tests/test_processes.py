import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from qkla.analysis import autocorrelation, fit_qc_exponential, shuffle
from qkla.errors import DomainError, ParameterError
from qkla.generators import Seed
from qkla.processes import (
    ArchParams,
    FellerParams,
    arch_covariance_targets,
    arch_kernel,
    default_window,
    relaxation_diagnostics,
    simulate_feller,
    simulate_qarch,
    stationary_constants,
    stationary_density,
    stationary_entropy,
)
from qkla.theory import ref_entropy


def _mass(p):
    return integrate.quad(lambda x: stationary_density(x, p), -np.inf, np.inf,
                          epsabs=1e-12, epsrel=1e-10, limit=400)[0]


def test_standard_density_is_unit_t3():
    p = FellerParams.standard()
    Z, beta = stationary_constants(p)
    assert Z == pytest.approx(math.pi / 2, rel=1e-12)
    assert beta == pytest.approx(2.0, rel=1e-12)
    xs = np.linspace(-8, 8, 41)
    # exp_{3/2}(-2 x^2)/Z is the t3 density rescaled to unit variance
    np.testing.assert_allclose(stationary_density(xs, p), math.sqrt(3) * stats.t(3).pdf(math.sqrt(3) * xs),
                               rtol=1e-12)
    assert _mass(p) == pytest.approx(1.0, abs=1e-9)


def test_ou_limit_density():
    p = FellerParams(gamma=0.02, theta=0.05, nu=0.0)
    var = p.theta / (2 * p.gamma)
    xs = np.linspace(-4, 4, 17)
    np.testing.assert_allclose(stationary_density(xs, p), stats.norm(scale=math.sqrt(var)).pdf(xs),
                               rtol=1e-12)


@settings(max_examples=5, deadline=None, derandomize=True)
@given(gamma=st.floats(0.001, 1.0), theta=st.floats(0.001, 1.0), nu=st.floats(-0.95, 0.9))
def test_density_normalised(gamma, theta, nu):
    assert _mass(FellerParams(gamma=gamma, theta=theta, nu=nu)) == pytest.approx(1.0, abs=1e-7)


def test_stationary_form_needs_nu_above_minus_one():
    p = FellerParams(nu=-1.25)
    with pytest.raises(DomainError):
        stationary_constants(p)
    with pytest.raises(DomainError):
        simulate_feller(p)


def test_stationary_entropy_matches_t3_scaling():
    # unit-variance t3 is t3 scaled by 1/sqrt(3): S_Q picks up the q-scaling law
    from qkla.theory import scaled_entropy
    p = FellerParams.standard()
    for q in (0.5, 1.0, 1.3):
        assert stationary_entropy(q, p) == pytest.approx(
            scaled_entropy(ref_entropy("student_t3", q), 1 / math.sqrt(3), q), abs=1e-9)


def test_feller_validation():
    with pytest.raises(ParameterError):
        FellerParams(nu=1.0)
    with pytest.raises(ParameterError):
        FellerParams(gamma=0.01, dt=2.0)
    with pytest.raises(ParameterError):
        FellerParams(gamma=-1)
    p = FellerParams.standard()
    assert p.dt == pytest.approx(0.1) and p.stride == 100 and p.q == 1.5


def test_feller_deterministic():
    p = FellerParams.standard(length=500, seed=Seed(3))
    np.testing.assert_array_equal(simulate_feller(p), simulate_feller(p))


def test_ou_autocorrelation_rate():
    gamma = 0.01
    p = FellerParams(gamma=gamma, theta=0.02, nu=0.0, length=100_000, seed=Seed(5))
    x = simulate_feller(p)
    assert x.var() == pytest.approx(p.theta / (2 * gamma), rel=0.05)
    rho = autocorrelation(x, 10)
    lags = np.arange(1, 11)
    slope = np.polyfit(lags * p.dt * p.stride, np.log(rho[1:]), 1)[0]
    assert -slope == pytest.approx(gamma, rel=0.10)


def test_feller_correlations_exponential():
    p = FellerParams.standard(length=100_000, seed=Seed(6))
    x = simulate_feller(p)
    rho = autocorrelation(x, 15)
    lags = np.arange(1, 16)
    res = stats.linregress(lags, np.log(rho[1:]))
    assert res.rvalue ** 2 >= 0.95
    assert res.slope < 0


def test_feller_shuffle_preserves_values():
    x = simulate_feller(FellerParams.standard(length=100_000, seed=Seed(7)))
    y = shuffle(x, Seed(8))
    np.testing.assert_array_equal(np.sort(x), np.sort(y))
    assert abs(autocorrelation(y, 1)[1]) < 0.02
    assert autocorrelation(x, 1)[1] > 0.5


def test_relaxation_examples():
    p = FellerParams.standard()
    Z0, b0 = 1.3, 0.7
    r0 = relaxation_diagnostics(p, 0.0, Z0, b0)
    assert r0.Z_t == pytest.approx(Z0, rel=1e-14) and r0.beta_t == pytest.approx(b0, rel=1e-14)
    rinf = relaxation_diagnostics(p, 1e6, Z0, b0)
    assert rinf.Z_t == pytest.approx(Z0 * r0.K ** (-1 / (2 + p.nu)), rel=1e-12)
    assert r0.tau == pytest.approx(1 / (p.gamma * 1.5))

    ou = FellerParams(gamma=0.1, theta=0.5, nu=0.0)
    b_fix = ou.gamma / ou.theta  # K = 1
    for t in (0.0, 3.0, 100.0):
        r = relaxation_diagnostics(ou, t, 2.0, b_fix)
        assert r.K == pytest.approx(1.0) and r.Z_t == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(ParameterError):
        relaxation_diagnostics(p, -1.0, Z0, b0)


def test_stationary_point_is_relaxation_fixed_point():
    p = FellerParams.standard()
    Z, beta = stationary_constants(p)
    r = relaxation_diagnostics(p, 50.0, Z, beta)
    assert r.K == pytest.approx(1.0, rel=1e-12)
    assert r.Z_t == pytest.approx(Z, rel=1e-12)


# ---------------------------------------------------------------- q-ARCH

def _arch1(a, b, z):
    out = np.empty(z.size)
    prev = a / (1 - b)
    for t, zt in enumerate(z):
        out[t] = math.sqrt(a + b * prev) * zt
        prev = out[t] ** 2
    return out


@pytest.mark.parametrize("kw", [dict(zeta=-1e6), dict(window=1)])
def test_arch1_limit(kw):
    p = ArchParams(a=0.2, b=0.5, length=2000, seed=Seed(9), **kw)
    assert arch_kernel(p)[0] == pytest.approx(1.0)
    z = p.seed.generator().standard_normal(p.window + p.length)
    np.testing.assert_allclose(simulate_qarch(p), _arch1(0.2, 0.5, z)[p.window:], rtol=1e-12)


def test_kernel_normalised_and_window():
    p = ArchParams.standard(length=10**6)
    w = arch_kernel(p)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(w) < 0)
    assert p.window == default_window(1.375, 1.0, 10**6)
    assert ArchParams.standard(length=50).window == 50
    assert p.unconditional_variance == pytest.approx(1.0)


def test_arch_validation():
    with pytest.raises(ParameterError):
        ArchParams(zeta=2.0)
    with pytest.raises(ParameterError):
        ArchParams(T=0.0)
    with pytest.raises(ParameterError):
        ArchParams(b=-0.1)


@pytest.mark.parametrize("zeta,qc,lam", [(1.375, 1.6, 0.625), (1.0, 1.0, 1.0), (0.0, 0.5, 2.0)])
def test_covariance_targets(zeta, qc, lam):
    got = arch_covariance_targets(ArchParams(zeta=zeta))
    assert got[0] == pytest.approx(qc, rel=1e-15) and got[1] == pytest.approx(lam, rel=1e-15)


def test_covariance_targets_diverge():
    with pytest.raises(DomainError):
        arch_covariance_targets(2.0)


@pytest.fixture(scope="module")
def qarch_run():
    return simulate_qarch(ArchParams.standard(length=10**6, seed=Seed(42)))


def test_qarch_linear_vs_volatility_memory(qarch_run):
    rho = autocorrelation(qarch_run, 50)
    assert np.max(np.abs(rho[1:])) < 0.02
    rho2 = autocorrelation(qarch_run ** 2, 50)
    assert np.all(rho2[1:] > 0)
    assert rho2[41:].mean() < rho2[1:11].mean()


def test_qarch_qc_soft(qarch_run):
    qc, _, _ = fit_qc_exponential(autocorrelation(qarch_run ** 2, 300))
    assert abs(qc - 1.6) <= 0.15

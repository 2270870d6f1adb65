"""OLS, bias/variance estimators, tests, and confidence sets."""

import math

import numpy as np
import pytest

from centreg import (
    DiffusionParams,
    ScalingPolicy,
    SymmetricBinaryMatrix,
    bias_correct,
    confidence,
    degree,
    degree_bias_variance,
    diffusion,
    diffusion_bias_variance,
    eigen_bias_variance,
    eigenvector_centrality,
    leading_eigenpair,
    ols,
    test_beta,
)
from centreg.errors import (
    MissingComponents,
    NonpositiveAttenuation,
    InvalidLevel,
    ZeroRegressor,
)
from centreg.inference import RegressionFit

K3 = SymmetricBinaryMatrix.from_edges(3, [0, 0, 1], [1, 2, 2])


def random_binary(n, p, seed):
    rng = np.random.default_rng(seed)
    dense = np.triu(rng.random((n, n)) < p, k=1)
    return SymmetricBinaryMatrix.from_dense(dense | dense.T)


def make_fit(beta_hat=1.0, V0=1.0, B=None, V=None, mode="noisy-degree", n=10):
    return RegressionFit(
        beta_hat=beta_hat,
        ssq_c=1.0,
        residuals=np.zeros(n),
        V0_hat=V0,
        mode=mode,
        n=n,
        B_hat=B,
        V_hat=V,
    )


# ---------------------------------------------------------------------------
# OLS


def test_ols_perfect_fit():
    c = degree(K3)
    fit = ols(2.0 * c.values, c)
    assert fit.beta_hat == pytest.approx(2.0)
    assert np.allclose(fit.residuals, 0.0)
    assert fit.V0_hat == pytest.approx(0.0)


def test_ols_k3_example():
    fit = ols(np.array([1.0, 2.0, 3.0]), degree(K3))
    assert fit.beta_hat == pytest.approx(1.0)


def test_ols_orthogonal_outcome():
    c = np.array([1.0, -1.0, 0.0])
    fit = ols(np.array([1.0, 1.0, 5.0]), c)
    assert fit.beta_hat == pytest.approx(0.0)


def test_ols_zero_regressor():
    with pytest.raises(ZeroRegressor):
        ols(np.ones(3), np.zeros(3))


def test_residual_identity_and_orthogonality():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(5, 60))
        c = rng.random(n) * 3
        y = rng.standard_normal(n) + 0.7 * c
        fit = ols(y, c)
        assert np.allclose(fit.beta_hat * c + fit.residuals, y, rtol=1e-12, atol=1e-12)
        scale = max(1.0, float(np.abs(c @ y)))
        assert abs(float(c @ fit.residuals)) <= 1e-9 * scale


def test_scale_equivariance_of_statistic():
    # the nonzero-null statistic is 0-homogeneous in (beta_hat, beta0):
    # dividing both by kappa leaves it unchanged (self-normalization)
    rng = np.random.default_rng(3)
    n = 40
    m = random_binary(n, 0.3, 5)
    c = degree(m)
    y = 1.5 * c.values + rng.standard_normal(n)
    fit = ols(y, c, mode="noisy-degree")
    degree_bias_variance(m, fit)
    s1 = test_beta(fit, 2.0).statistic

    kappa = 3.7
    fit2 = make_fit(
        beta_hat=fit.beta_hat / kappa, V0=fit.V0_hat, B=fit.B_hat, V=fit.V_hat
    )
    s2 = test_beta(fit2, 2.0 / kappa).statistic
    assert s2 == pytest.approx(s1, rel=1e-10)


def test_eigenvector_statistic_invariant_to_a_n():
    # for the eigenvector case the full estimator pipeline is equivariant in
    # the scale a_n: recomputing everything under a_n -> kappa a_n leaves the
    # case-b statistic for beta0/kappa unchanged
    m = random_binary(30, 0.4, seed=21)
    rng = np.random.default_rng(9)
    lam, v = leading_eigenpair(m)
    y = v + rng.standard_normal(30) * 0.3
    stats = []
    for a_n in (2.0, 7.4):
        c = a_n * v
        fit = ols(y, c, mode="noisy-eigenvector-case-b")
        eigen_bias_variance(lam, _wrap(c, lam), m, fit)
        stats.append(test_beta(fit, 0.5 / a_n).statistic)
    assert stats[0] == pytest.approx(stats[1], rel=1e-10)


def _wrap(values, lam):
    from centreg import CentralityVector

    return CentralityVector(values=values, recipe={"kind": "eigenvector"}, lambda1=lam)


# ---------------------------------------------------------------------------
# bias / variance estimators


def test_degree_bias_variance_k3():
    fit = ols(np.array([1.0, 2.0, 3.0]), degree(K3), mode="noisy-degree")
    B, V = degree_bias_variance(K3, fit)
    assert B == pytest.approx(0.5)
    assert V == pytest.approx(1.0 / 3.0)
    assert bias_correct(fit) == pytest.approx(2.0)


@pytest.mark.parametrize("seed", range(12))
def test_degree_diffusion_agreement_at_t1_delta1(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 101))
    m = random_binary(n, 0.25, seed + 1000)
    if m.n_edges == 0:
        return
    y = rng.standard_normal(n) + degree(m).values
    fit_deg = ols(y, degree(m), mode="noisy-degree")
    Bd, Vd = degree_bias_variance(m, fit_deg)
    params = DiffusionParams(delta=1.0, T=1)
    fit_dif = ols(y, diffusion(m, params), mode="noisy-diffusion")
    Bt, Vt = diffusion_bias_variance(m, params, fit_dif)
    assert fit_deg.beta_hat == pytest.approx(fit_dif.beta_hat, rel=1e-12)
    assert Bd == pytest.approx(Bt, rel=1e-12)
    assert Vd == pytest.approx(Vt, rel=1e-12)
    assert fit_deg.V0_hat == pytest.approx(fit_dif.V0_hat, rel=1e-12)


def test_diffusion_bias_k3_t2():
    # numerator (d^2 - 3d^3 + 3d^4) m1 + (3d^3 - 2d^4) m2 + 2 d^4 m3
    # with m1, m2, m3 = 6, 12, 24 on K3
    d = 0.5
    params = DiffusionParams(delta=d, T=2)
    c = diffusion(K3, params)
    fit = ols(np.array([1.0, 2.0, 3.0]), c, mode="noisy-diffusion")
    B, _ = diffusion_bias_variance(K3, params, fit)
    numer = (d**2 - 3 * d**3 + 3 * d**4) * 6 + (3 * d**3 - 2 * d**4) * 12 + 2 * d**4 * 24
    assert B == pytest.approx(numer / fit.ssq_c, rel=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_diffusion_variance_matches_hadamard_formula(seed):
    # edge-local V-hat vs the literal dense Hadamard-product expression
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 16))
    T = int(rng.integers(1, 4))
    m = random_binary(n, 0.4, seed + 2000)
    if m.n_edges == 0:
        return
    delta = float(rng.uniform(0.2, 1.0))
    params = DiffusionParams(delta=delta, T=T)
    c = diffusion(m, params)
    y = rng.standard_normal(n) + c.values
    fit = ols(y, c, mode="noisy-diffusion")
    _, V = diffusion_bias_variance(m, params, fit)

    dense = m.toarray()
    iota = np.ones(n)
    M = np.zeros((n, n))
    for t in range(1, 2 * T + 1):
        u = np.linalg.matrix_power(dense, 2 * T - t) @ iota
        w = np.linalg.matrix_power(dense, t - 1) @ iota
        M += np.outer(u, w)
    literal = 0.5 * delta ** (2 * T) * float(iota @ ((dense * M**2) @ iota)) / fit.ssq_c**2
    assert V == pytest.approx(literal, rel=1e-9)


def test_eigen_bias_variance_k3():
    lam, _ = leading_eigenpair(K3)
    c = eigenvector_centrality(K3, ScalingPolicy(kind="sqrt-lambda1"))
    fit = ols(c.values + 0.0, c, mode="noisy-eigenvector-case-b")
    B, V = eigen_bias_variance(lam, c, K3, fit)
    assert B == pytest.approx(0.5, rel=1e-9)
    assert V == pytest.approx(1.0, rel=1e-9)


# ---------------------------------------------------------------------------
# tests and intervals


def test_statistic_zero_null():
    fit = make_fit(beta_hat=0.0, V0=1.0)
    res = test_beta(fit, 0.0)
    assert res.statistic == pytest.approx(0.0)
    assert res.p_value == pytest.approx(1.0)
    assert res.branch == "null-zero"


def test_statistic_nonzero_null_arithmetic():
    fit = make_fit(beta_hat=1.0, B=0.5, V=0.25)
    res = test_beta(fit, 2.0)
    assert res.statistic == pytest.approx(0.0)
    assert res.p_value == pytest.approx(1.0)


def test_boundary_rejection_inclusive():
    fit = make_fit(beta_hat=1.96, V0=1.0)
    res = test_beta(fit, 0.0, alphas=(0.05,))
    assert res.p_value == pytest.approx(0.05, abs=5e-5)
    assert res.reject_at[0.05] is True


def test_nonzero_null_requires_components():
    fit = make_fit(beta_hat=1.0)
    with pytest.raises(MissingComponents):
        test_beta(fit, 1.0)


def test_no_error_mode_always_robust():
    fit = make_fit(beta_hat=1.3, V0=0.04, mode="no-error")
    res = test_beta(fit, 1.0)
    assert res.statistic == pytest.approx(0.3 / 0.2)
    assert res.branch == "robust"


def test_eigen_case_a_uses_robust_denominator():
    fit = make_fit(beta_hat=1.0, V0=0.25, B=0.2, V=99.0, mode="noisy-eigenvector-case-a")
    res = test_beta(fit, 1.0)
    assert res.statistic == pytest.approx((1.0 - 0.8) / 0.5)


def test_eigen_case_b_denominator_free_of_beta0():
    fit = make_fit(beta_hat=1.0, V0=99.0, B=0.2, V=0.25, mode="noisy-eigenvector-case-b")
    res = test_beta(fit, 2.0)
    assert res.statistic == pytest.approx((1.0 - 2.0 * 0.8) / 0.5)


def test_corollary5_mode_robust_t():
    fit = make_fit(beta_hat=1.5, V0=0.25, mode="noisy-eigenvector-corollary-5")
    res = test_beta(fit, 1.0)
    assert res.statistic == pytest.approx(1.0)
    assert res.branch == "corollary-5"


def test_bias_correct_guards():
    fit = make_fit(beta_hat=0.5, B=0.5, V=1.0)
    assert bias_correct(fit) == pytest.approx(1.0)
    fit0 = make_fit(beta_hat=0.5, B=0.0, V=1.0)
    assert bias_correct(fit0) == pytest.approx(0.5)
    fit1 = make_fit(beta_hat=0.5, B=1.0, V=1.0)
    with pytest.raises(NonpositiveAttenuation):
        bias_correct(fit1)


def test_confidence_coincides_when_b_zero():
    fit = make_fit(beta_hat=1.0, V0=0.04, B=0.0, V=0.04)
    iv = confidence(fit, 0.05)
    # C and C0 invert to slightly different shapes (division vs addition),
    # but with B=0 and matching variances they agree at first order; the
    # exact coincidence the spec asks for is C0 == C when the test inverts
    # linearly, i.e. in an eigenvector case-a fit
    fit_a = make_fit(beta_hat=1.0, V0=0.04, B=0.0, V=0.04, mode="noisy-eigenvector-case-a")
    iva = confidence(fit_a, 0.05)
    assert iva.c[0].lo == pytest.approx(iva.c0.lo)
    assert iva.c[0].hi == pytest.approx(iva.c0.hi)
    assert len(iva.c_star) == 1


def test_confidence_halfline_at_zero_denominator():
    from scipy.special import ndtri

    z = float(ndtri(0.975))
    V = 0.25
    B = 1.0 - z * math.sqrt(V)  # makes 1 - B - z sqrt(V) == 0 exactly
    fit = make_fit(beta_hat=2.0, B=B, V=V, V0=0.01)
    iv = confidence(fit, 0.05)
    assert iv.c[0].hi == math.inf
    assert iv.c[0].lo == pytest.approx(2.0 / (1 - B + z * math.sqrt(V)))
    assert not iv.wraps


def test_confidence_wraps_when_denominators_straddle():
    fit = make_fit(beta_hat=2.0, B=0.9, V=1.0, V0=0.01)
    iv = confidence(fit, 0.05)
    assert iv.wraps
    assert len(iv.c) == 2
    assert iv.c[0].lo == -math.inf and iv.c[1].hi == math.inf


def test_confidence_invalid_level():
    fit = make_fit(beta_hat=1.0, B=0.1, V=0.1)
    for alpha in (0.0, 1.0, -0.5):
        with pytest.raises(InvalidLevel):
            confidence(fit, alpha)


def test_confidence_singleton_policy():
    fit = make_fit(beta_hat=1.0, B=0.2, V=0.001, V0=0.001)
    iv = confidence(fit, 0.1, c0_policy="singleton-zero")
    assert iv.c0.lo == iv.c0.hi == 0.0


def test_one_sided_interval_shape():
    fit = make_fit(beta_hat=-11604.0, B=0.26, V=0.009, V0=1.0)
    iv = confidence(fit, 0.10, sided="lower", c0_policy="singleton-zero")
    assert iv.c[0].hi == math.inf
    assert iv.c[0].lo == pytest.approx(-11604.0 / (0.74 - 1.2815515655446004 * math.sqrt(0.009)))


@pytest.mark.parametrize("seed", range(25))
def test_interval_test_duality(seed):
    # beta0 in C_star(alpha) iff neither branch's test rejects at alpha
    rng = np.random.default_rng(seed)
    fit = make_fit(
        beta_hat=float(rng.normal(scale=2)),
        V0=float(rng.uniform(0.01, 1.0)),
        B=float(rng.uniform(-0.5, 0.9)),
        V=float(rng.uniform(0.01, 0.5)),
    )
    alpha = 0.05
    iv = confidence(fit, alpha)
    for beta0 in rng.normal(scale=3, size=12):
        if beta0 == 0.0:
            continue
        rej_c = test_beta(fit, float(beta0), alphas=(alpha,)).reject_at[alpha]
        stat0 = (fit.beta_hat - beta0) / math.sqrt(fit.V0_hat)
        from scipy.special import ndtri

        rej_c0 = abs(stat0) >= ndtri(1 - alpha / 2)
        union_rejects = rej_c and rej_c0
        assert iv.contains(float(beta0)) == (not union_rejects)


def test_fit_serialization_fields():
    fit = make_fit(beta_hat=1.0, B=0.5, V=0.3)
    d = fit.to_json_dict()
    assert set(d) == {
        "beta_hat",
        "B_hat",
        "attenuation",
        "beta_check",
        "V_hat",
        "V0_hat",
        "n",
        "mode",
    }
    assert d["attenuation"] == pytest.approx(0.5)
    assert d["beta_check"] == pytest.approx(2.0)

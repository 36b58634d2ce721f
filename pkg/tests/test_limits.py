import math

import numpy as np
import pytest
from scipy import stats

from cevlab.errors import DomainError, SpecError
from cevlab.estimate import conditional_sample
from cevlab.limits import (
    INNER_SEED,
    cond_moment_limit,
    expar1_limit,
    expar1_limit_cdf,
    explin_limit,
    explin_limit_cdf,
    homogeneity_residual,
    limit_for,
    product_tail_constant,
    sv_innov_limit_cdf,
)
from cevlab.models import (
    ExpAR1,
    ExpLinear,
    GaussianSquareExp,
    SVHeavyInnov,
    SVHeavyVol,
    SVLeverage,
    SwitchingExpAR1,
    simulate_top,
)
from cevlab.randomness import CenteredLogParetoLaw, RandomStream, innovation_log_mgf
from cevlab.tailchain import TailChainSpec

INF = math.inf


def closed_form_survival(alpha, phi, a, y):
    """nu((a, inf] x [-inf, y]) for the exponential AR(1) at lag one."""
    vstar = (y * math.exp(1 / alpha)) ** (1 / phi)
    if a >= vstar:
        return 0.0
    e = alpha * (phi - 1)
    return a**-alpha - vstar**-alpha - math.exp(-1) * y**-alpha * (a**e - vstar**e) / (1 - phi)


def oracle_psi(alpha, phi, y0, y1):
    return closed_form_survival(alpha, phi, 1.0, y1) - (0.0 if y0 == INF else closed_form_survival(alpha, phi, y0, y1))


def numpy_chain(alpha, phi, h, n, seed):
    rng = np.random.default_rng(seed)
    y = rng.pareto(alpha, n) + 1.0
    out = [y]
    for _ in range(h):
        w = np.exp(rng.exponential(1 / alpha, n) - 1 / alpha)
        y = y**phi * w
        out.append(y)
    return np.array(out)


# --------------------------------------------------------- ExpAR1 h=1


@pytest.mark.parametrize("alpha,phi", [(2.0, 0.5), (1.5, 0.8), (3.0, 0.2)])
def test_quadrature_matches_closed_form(alpha, phi):
    lim = expar1_limit(alpha, phi, 1)
    for y0 in (1.5, 3.0, 20.0, INF):
        for y1 in (0.3, 1.0, 2.5, 10.0):
            assert lim.query([y0, y1]) == pytest.approx(oracle_psi(alpha, phi, y0, y1), abs=1e-6)


def test_expar1_edge_values():
    assert expar1_limit_cdf(2, 0.5, 1, [1.0, 3.0]) == 0.0
    assert expar1_limit_cdf(2, 0.5, 1, [INF, INF]) == 1.0
    assert expar1_limit_cdf(2, 0.5, 2, [1.0, 3.0, 2.0]) == 0.0
    assert expar1_limit_cdf(2, 0.5, 2, [INF, INF, INF]) == 1.0
    with pytest.raises(DomainError):
        expar1_limit_cdf(2, 0.5, 1, [0.5, 1.0])


def test_expar1_value_against_direct_monte_carlo():
    v = numpy_chain(2.0, 0.5, 1, 4 * 10**6, 1)
    oracle = np.mean(v[1] <= 1.0)
    assert expar1_limit_cdf(2, 0.5, 1, [INF, 1.0]) == pytest.approx(oracle, abs=2e-3)


def test_expar1_value_against_conditional_simulation():
    spec = ExpAR1(2, 0.5)
    block = simulate_top(spec, 1, 2 * 10**7, RandomStream(3), keep=100_001)
    cond = conditional_sample(block, q=0.995, b=[0.5])
    assert cond.count >= 10**5
    emp = np.mean(cond.column(1) <= 1.0)
    assert expar1_limit_cdf(2, 0.5, 1, [INF, 1.0]) == pytest.approx(emp, abs=0.01)


def test_expar1_h2_against_direct_monte_carlo():
    v = numpy_chain(2.0, 0.5, 2, 4 * 10**6, 2)
    lim = expar1_limit(2, 0.5, 2)
    for y in ([3.0, 1.5, 1.2], [INF, 1.0, 1.0], [10.0, 4.0, 0.8], [2.0, INF, 1.5]):
        oracle = np.mean((v[0] <= y[0]) & (v[1] <= y[1]) & (v[2] <= y[2]))
        assert lim.query(y) == pytest.approx(oracle, abs=3e-3)


def test_expar1_h2_is_deterministic():
    a = expar1_limit_cdf(2, 0.5, 2, [3.0, 1.5, 1.2], n_inner=1 << 16)
    b = expar1_limit_cdf(2, 0.5, 2, [3.0, 1.5, 1.2], n_inner=1 << 16)
    c = expar1_limit_cdf(2, 0.5, 2, [3.0, 1.5, 1.2], n_inner=1 << 16, seed=INNER_SEED + 1)
    assert a == b and a != c


def test_quadrature_marginal_tail():
    alpha, phi = 2.0, 0.5
    lim = expar1_limit(alpha, phi, 1)
    y = np.geomspace(1e2, 1e4, 9)
    sf = lim.marginal_sf(1, y)
    slope = np.polyfit(np.log(y), np.log(sf), 1)[0]
    assert abs(slope + alpha) <= 0.05
    # P(Y_1 > y) ~ P(W > y) / (1 - phi)
    np.testing.assert_allclose(sf * y**alpha, math.exp(-1) / (1 - phi), rtol=1e-2)


def test_marginal_cdf_agrees_with_query():
    for lim in (expar1_limit(2, 0.5, 1), expar1_limit(2, 0.5, 2, n_inner=1 << 18)):
        for y in (0.5, 1.0, 3.0):
            full = [INF] * (lim.h + 1)
            full[1] = y
            assert lim.marginal_cdf(1, y) == pytest.approx(lim.query(full), abs=1e-9)
    assert expar1_limit(2, 0.5, 1).marginal_sf(0, 4.0) == pytest.approx(1 / 16)


# ------------------------------------------------------------- ExpLinear


def test_reduction_to_expar1_on_grid():
    geo = explin_limit(2.0, {"rule": "geometric", "phi": 0.5}, 1)
    quad = expar1_limit(2.0, 0.5, 1)
    worst = 0.0
    for y0 in (1.5, 2.0, 4.0, 10.0, INF):
        for y1 in (0.3, 0.7, 1.0, 2.0, 5.0):
            worst = max(worst, abs(geo.query([y0, y1]) - quad.query([y0, y1])))
    assert worst <= 2e-3


def test_plain_and_tilted_linear_samplers_agree():
    spec = ExpLinear(2.0, "explicit", coeffs=(0.6, 0.3, 0.1))
    tilted = limit_for(spec, 2, n_inner=1 << 21)
    plain = limit_for(spec, 2, n_inner=1 << 21, method="plain")
    for y in ([2.0, 1.0, 1.0], [INF, 0.5, 2.0], [5.0, 3.0, INF]):
        assert tilted.query(y) == pytest.approx(plain.query(y), abs=5e-3)


def test_explin_marginal_in_y0():
    lim = explin_limit(2.0, [0.6, 0.3, 0.1], 1)
    for y0 in (1.0, 2.0, 7.0):
        assert lim.survival(y0, [INF]) == pytest.approx(y0**-2)
        assert lim.query([y0, INF]) == pytest.approx(1 - y0**-2)


def test_explin_coefficient_forms():
    spec = ExpLinear(2.0, "explicit", coeffs=(0.5, 0.25))
    a = explin_limit(2.0, spec, 1, n_inner=1 << 16).query([3.0, 1.0])
    b = explin_limit(2.0, [0.5, 0.25], 1, n_inner=1 << 16).query([3.0, 1.0])
    assert a == b
    with pytest.raises(SpecError):
        explin_limit(2.0, [0.5, 1.5], 1)


def test_long_memory_is_reproducible():
    spec = ExpLinear(2.0, "long_memory", truncation=200)
    y = [3.0, 1.0, 1.5]
    base = limit_for(spec, 2)
    assert base.query(y) == limit_for(spec, 2).query(y)
    oracle = limit_for(spec, 2, n_inner=10 * base.n_inner, seed=INNER_SEED + 7)
    assert abs(base.query(y) - oracle.query(y)) <= 1e-3


# --------------------------------------------------------------- SV innov


def test_sv_innov_degenerate_volatility():
    spec = SVHeavyInnov(z_alpha=3, vol_mean=0.0, vol_sd=0.0, z_sign="symmetric")
    lim = limit_for(spec, 2, n_inner=1 << 12)
    fz = lambda z: 1 - 0.5 * z**-3 if z >= 1 else (0.5 * abs(z) ** -3 if z <= -1 else 0.5)
    for y0, y1, y2 in [(1.0, 2.0, -1.5), (4.0, 0.5, 3.0)]:
        assert lim.survival(y0, [y1, y2]) == pytest.approx(y0**-3 * fz(y1) * fz(y2))
    assert sv_innov_limit_cdf(spec, 1, [2.0, INF]) == pytest.approx(1 - 2.0**-3)


def test_sv_innov_marginal_y0():
    lim = limit_for(SVHeavyInnov(), 1)
    assert lim.survival(2.0, [INF]) == pytest.approx(2.0**-3)


def test_sv_innov_matches_conditional_simulation():
    spec = SVHeavyInnov(z_alpha=3, vol_mean=0.0, vol_rho=0.5, vol_sd=0.5, z_sign="symmetric")
    block = simulate_top(spec, 1, 10**7, RandomStream(4), keep=10_001)
    cond = conditional_sample(block, q=0.999)
    lim = limit_for(spec, 1)
    ks = stats.kstest(cond.column(1), lambda y: lim.marginal_cdf(1, y)).statistic
    assert ks <= 0.02


# ------------------------------------------------------------- invariants

FAMILIES = [
    (ExpAR1(2, 0.5), 1),
    (ExpAR1(2, 0.5), 2),
    (SwitchingExpAR1(2, 0.5, 0.3), 2),
    (ExpLinear(2, "explicit", coeffs=(0.6, 0.3)), 2),
    (SVHeavyVol(2, 0.5), 2),
    (SVHeavyInnov(), 2),
    (SVLeverage(), 2),
]


@pytest.mark.parametrize("spec,h", FAMILIES)
def test_monotone_and_total_mass(spec, h):
    lim = limit_for(spec, h, n_inner=1 << 16)
    grid0 = [1.0, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0, INF]
    grid = [-INF, -3.0, -1.0, 0.0, 0.3, 1.0, 2.0, 5.0, 20.0, INF]
    axes = [grid0] + [grid] * h
    shape = tuple(len(a) for a in axes)
    vals = np.empty(shape)
    for idx in np.ndindex(*shape):
        vals[idx] = lim.query([axes[d][i] for d, i in enumerate(idx)])
    assert vals.min() >= 0.0 and vals.max() <= 1.0
    for d in range(h + 1):
        assert np.all(np.diff(vals, axis=d) >= -1e-12)
    assert vals[(-1,) * (h + 1)] == pytest.approx(1.0)


@pytest.mark.parametrize("spec,h", FAMILIES)
def test_homogeneity(spec, h):
    lim = limit_for(spec, h, n_inner=1 << 18)
    for t in (0.5, 2.0, 5.0):
        for y in ([1.0] + [1.0] * h, [2.0] + [0.5] * h, [1.5] + [-0.5] * h):
            assert homogeneity_residual(lim, t, y) <= lim.accuracy


def test_homogeneity_examples():
    assert homogeneity_residual(expar1_limit(2, 0.5, 1), 1.0, [1.0, 1.0]) == 0.0
    assert homogeneity_residual(expar1_limit(2, 0.5, 1), 2.0, [1.0, 1.0]) <= 1e-3
    assert homogeneity_residual(limit_for(SVHeavyInnov(), 1), 3.0, [1.0, 1.0]) <= 1e-3


def test_no_limit_for_gaussian_square():
    with pytest.raises(DomainError):
        limit_for(GaussianSquareExp(), 1)


# --------------------------------------------------------------- moments


def _geo_log_moment(alpha, phi, s, terms=200):
    # E[exp(s xi_0)] as the product of innovation moments
    total = 0.0
    for j in range(terms):
        x = s * phi**j
        total += -x / alpha + math.log(alpha / (alpha - x))
    return math.exp(total)


def test_cond_moment_expar1_closed_form():
    a, phi = 2.0, 0.5
    oracle = a * _geo_log_moment(a, phi, 1.0) / ((a - 0.5) * _geo_log_moment(a, phi, 0.5))
    value = cond_moment_limit(ExpAR1(a, phi), 1)
    assert value == pytest.approx(oracle, rel=1e-12)
    assert value == pytest.approx(1.6174150925670223, rel=1e-12)


def test_cond_moment_expar1_against_simulation():
    block = simulate_top(ExpAR1(2, 0.5), 1, 10**7, RandomStream(8), keep=1001)
    cond = conditional_sample(block, q=0.9999, b=[0.5])
    assert cond.count == 1000
    emp = np.mean(cond.column(1))
    assert emp == pytest.approx(cond_moment_limit(ExpAR1(2, 0.5), 1), rel=0.10)


def test_cond_moment_kappa_zero_gives_mean():
    # phi = 0: X_1 independent of X_0, limit is E[V_0] = E[exp(eps)]
    assert cond_moment_limit(ExpAR1(2, 0.0), 1) == pytest.approx(innovation_log_mgf(2, 1.0))


def test_cond_moment_sv_innov_degenerate():
    spec = SVHeavyInnov(z_alpha=3, vol_sd=0.0, z_sign="symmetric")
    assert cond_moment_limit(spec, 1) == pytest.approx(0.5 * 3 / 2)


def test_cond_moment_sv_innov_weighted_mc():
    spec = SVHeavyInnov(z_alpha=3, vol_mean=0.1, vol_rho=0.6, vol_sd=0.5)
    rng = np.random.default_rng(3)
    n, h = 4 * 10**6, 2
    l0 = 0.1 + 0.5 * rng.standard_normal(n)
    lh = 0.1 + 0.6**h * (l0 - 0.1) + 0.5 * math.sqrt(1 - 0.6 ** (2 * h)) * rng.standard_normal(n)
    w = np.exp(3 * l0)
    oracle = 1.5 * np.sum(w * np.exp(lh)) / np.sum(w)
    assert cond_moment_limit(spec, h) == pytest.approx(oracle, rel=5e-3)


def test_cond_moment_explinear_reduces_to_expar1():
    geo = cond_moment_limit(ExpLinear(2, "geometric", phi=0.5), 2)
    assert geo == pytest.approx(cond_moment_limit(ExpAR1(2, 0.5), 2), rel=1e-6)


def test_cond_moment_switching():
    spec = SwitchingExpAR1(2.0, 0.5, eta=0.3, r_mu=0.0, r_sigma=0.5)
    # a/(a-k) * prod_j (1-eta) E[R^{phi^{h-j}}]
    h = 2
    expected = 2 / (2 - 0.25) * 0.7 * math.exp(0.125 * 0.25) * 0.7 * math.exp(0.125)
    assert cond_moment_limit(spec, h) == pytest.approx(expected)


@pytest.mark.parametrize("spec,h", [(SVHeavyVol(2.5, 0.5), 1), (SVLeverage(3, (0.6, 0.2)), 2), (ExpLinear(2, "explicit", coeffs=(0.6, 0.3)), 2)])
def test_cond_moment_against_weighted_sampler(spec, h):
    # plain Monte Carlo of E[(Y_h)_+] = E[(J_h)_+ Y_0**kappa_h] with Y_0 Pareto independent of J
    from cevlab.limits import sample_j

    kappas, J, w = sample_j(spec, h, 1 << 21, RandomStream(99), method="plain" if isinstance(spec, ExpLinear) else "tilted")
    a = spec.alpha if hasattr(spec, "alpha") else spec.z_alpha
    k = kappas[h - 1]
    vals = np.maximum(J[h - 1], 0.0) * a / (a - k)
    if w is not None:
        vals = vals * w
    assert cond_moment_limit(spec, h) == pytest.approx(np.mean(vals), rel=0.03)


def test_cond_moment_requires_alpha_above_one():
    with pytest.raises(DomainError):
        cond_moment_limit(ExpAR1(0.9, 0.5), 1)
    with pytest.raises(DomainError):
        cond_moment_limit(GaussianSquareExp(), 1)


# ------------------------------------------------------- product constant


def test_product_constant_expar1_lag_one():
    res = product_tail_constant(ExpAR1(2, 0.5), 1, n=1 << 22)
    assert res.exponent == pytest.approx(4 / 3)
    assert res.value == pytest.approx(3 * math.exp(-2 / 3), rel=0.02)
    assert innovation_log_mgf(2, 4 / 3) == pytest.approx(3 * math.exp(-2 / 3))


def test_product_constant_unit_steps():
    class One:
        def sample_from_uniform(self, u):
            return np.ones_like(u)

    res = product_tail_constant(TailChainSpec(2.0, 0.5, One()), 3, n=1 << 12)
    assert res.value == 1.0 and not res.diverging


def test_product_constant_lag_two():
    res = product_tail_constant(ExpAR1(2, 0.5), 2, n=1 << 22)
    assert res.exponent == pytest.approx(1.6)
    rng = np.random.default_rng(4)
    law = CenteredLogParetoLaw(2.0)
    w1, w2 = (law.exp_from_uniform(rng.random(4 * 10**6)) for _ in range(2))
    mc = np.mean((w1**0.5 * w2) ** 1.6)
    exact = innovation_log_mgf(2, 0.8) * innovation_log_mgf(2, 1.6)
    # the naive summand has tail index 1.25, so the plain mean converges slowly
    assert mc == pytest.approx(exact, rel=0.06)
    assert res.value == pytest.approx(exact, rel=0.02)
    assert not res.diverging and res.summand_tail_index > 2


def test_product_constant_flags_divergence():
    # W with tail index 1: E[W**(alpha/(1+kappa))] infinite for alpha/(1+kappa) >= 1
    class Heavy:
        def sample_from_uniform(self, u):
            return u**-1.0

    res = product_tail_constant(TailChainSpec(2.0, 0.0, Heavy()), 1, n=1 << 18)
    assert res.diverging
    # closed-form step moment of order 2 is infinite for a tail index of 1.5
    res = product_tail_constant(TailChainSpec(2.0, 0.0, CenteredLogParetoLaw(1.5)), 1)
    assert res.diverging and math.isinf(res.value)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from cevlab.errors import SpecError
from cevlab.estimate import hill
from cevlab.models import (
    BANK,
    ExpAR1,
    ExpLinear,
    GaussianSquareExp,
    SVHeavyInnov,
    SVHeavyVol,
    SVLeverage,
    SwitchingExpAR1,
    expar1_paths,
    read_block_csv,
    scaling_b,
    simulate_block,
    simulate_top,
    spec_from_dict,
    spec_to_dict,
    theoretical_alpha,
    theoretical_kappa,
    validate_spec,
)
from cevlab.randomness import RandomStream, stationary_log_moment

S = RandomStream(42)


# ----------------------------------------------------------- validation


def test_validate_examples():
    assert validate_spec(ExpAR1(2, 0.5)) == []
    assert validate_spec(ExpAR1(2, 1.0)) == ["phi out of [0,1)"]
    assert "gamma ≤ 1/2" in validate_spec(ExpLinear(2, "long_memory", gamma=0.4))


@pytest.mark.parametrize(
    "spec,fragment",
    [
        (ExpAR1(-1, 0.5), "alpha"),
        (SwitchingExpAR1(eta=1.5), "eta"),
        (SwitchingExpAR1(phi=0.0), "phi"),
        (ExpLinear(2, "long_memory", c=1.2), "c out of"),
        (ExpLinear(2, "explicit", coeffs=(0.5, 1.0)), "coefficient"),
        (ExpLinear(2, "wiggly"), "unknown coefficient rule"),
        (SVHeavyVol(z_law="student_t", z_df=1.5), "z_df"),
        (SVHeavyInnov(vol_rho=1.0), "vol_rho"),
        (SVLeverage(coeffs=(0.6, 1.2)), "coefficient out of (0,1)"),
        (GaussianSquareExp(c=0.5), "c out of"),
        (GaussianSquareExp(ar1_rho=-1.0), "ar1_rho"),
    ],
)
def test_validate_names_each_violation(spec, fragment):
    errs = validate_spec(spec)
    assert errs and any(fragment in e for e in errs)


def test_validate_collects_all_violations():
    errs = validate_spec(ExpAR1(-2, 1.5))
    assert len(errs) == 2


def test_simulate_rejects_invalid_spec():
    with pytest.raises(SpecError, match="phi out of"):
        simulate_block(ExpAR1(2, 1.5), 1, 10, S)


@given(st.floats(-2, 2, allow_nan=False))
def test_phi_range_rule(phi):
    assert (validate_spec(ExpAR1(2, phi)) == []) == (0 <= phi < 1)


@pytest.mark.parametrize(
    "spec",
    [ExpAR1(), SwitchingExpAR1(), ExpLinear(rule="explicit", coeffs=(0.3, 0.1)), SVHeavyVol(z_law="student_t", z_df=4.0), SVHeavyInnov(), SVLeverage(), GaussianSquareExp()],
)
def test_spec_dict_round_trip(spec):
    assert spec_from_dict(spec_to_dict(spec)) == spec


# ------------------------------------------------------------- theory


def test_theoretical_kappa_examples():
    assert theoretical_kappa(ExpAR1(2, 0.5), 3) == 0.125
    assert theoretical_kappa(SVHeavyInnov(), 7) == 0
    assert theoretical_kappa(GaussianSquareExp(), 1) is None
    assert theoretical_kappa(SwitchingExpAR1(phi=0.6), 2) == pytest.approx(0.36)
    assert theoretical_kappa(SVHeavyVol(phi=0.5), 2) == 0.25
    assert theoretical_kappa(SVLeverage(coeffs=(0.6, 0.2)), 2) == 0.2
    assert theoretical_kappa(SVLeverage(coeffs=(0.6, 0.2)), 3) == 0.0
    assert theoretical_kappa(ExpLinear(2, "long_memory", c=0.8, gamma=0.8), 2) == pytest.approx(0.8 * 3**-0.8)


def test_theoretical_alpha_examples():
    assert theoretical_alpha(ExpAR1(2)) == 2
    assert theoretical_alpha(SVHeavyInnov(z_alpha=3)) == 3
    assert theoretical_alpha(GaussianSquareExp(c=0.25)) == 2


def test_scaling_b_examples():
    assert scaling_b(SVLeverage(coeffs=(0.5,)), 1, 100) == pytest.approx(10)
    assert scaling_b(SVHeavyInnov(), 1, 12345.0) == 1
    assert scaling_b(ExpAR1(2, 0.5), 2, 16) == pytest.approx(2)
    with pytest.raises(ValueError):
        scaling_b(GaussianSquareExp(), 1, 2.0)


# --------------------------------------------------------- simulation


def test_zero_innovations_give_a_constant_path():
    eps = np.zeros((5, 21 + 4))
    np.testing.assert_array_equal(expar1_paths(eps, 0.5, 21), np.ones((5, 5)))


def test_chunked_simulator_agrees_with_reference_recursion():
    spec = ExpAR1(2, 0.5)
    J = spec.presample
    n, h = 1000, 3
    eps = np.column_stack([-np.log(S.uniforms(s, 0, n)) / 2 - 0.5 for s in range(J + h)])
    np.testing.assert_allclose(simulate_block(spec, h, n, S).rows, expar1_paths(eps, 0.5, J), rtol=1e-12)


@pytest.mark.parametrize(
    "spec",
    [ExpAR1(), SwitchingExpAR1(), ExpLinear(rule="long_memory", truncation=50), SVHeavyVol(), SVHeavyInnov(z_sign="symmetric"), SVLeverage(), GaussianSquareExp()],
)
def test_simulation_is_pure(spec):
    a = simulate_block(spec, 2, 2000, S)
    b = simulate_block(spec, 2, 2000, S)
    assert a.rows.shape == (2000, 3)
    np.testing.assert_array_equal(a.rows, b.rows)


def test_simulation_independent_of_threads():
    spec = SVHeavyVol()
    n = 600_000  # three chunks
    a = simulate_block(spec, 2, n, S, threads=1)
    b = simulate_block(spec, 2, n, S, threads=4)
    np.testing.assert_array_equal(a.rows, b.rows)


def test_longer_horizon_extends_shorter_one():
    for spec in (ExpAR1(), SVHeavyVol(), SVHeavyInnov(z_sign="symmetric"), SVLeverage(), SwitchingExpAR1()):
        a = simulate_block(spec, 1, 500, S).rows
        b = simulate_block(spec, 3, 500, S).rows
        np.testing.assert_array_equal(a, b[:, :2])


def test_breiman_tail_constant_of_expar1():
    spec = ExpAR1(2, 0.5)
    x0 = simulate_block(spec, 1, 10**6, S).rows[:, 0]
    # P(V_0 > x) ~ e^{-1} E[exp(2 xi_0*)] x^{-2}, xi_0* = sum_{j>=1} phi^j eps_{-j}
    const = math.exp(-1) * stationary_log_moment(2.0, lambda j: 0.5 ** (j + 1), 2.0, 60)
    for x in (10.0, 30.0, 100.0):
        p = const * x**-2
        se = math.sqrt(p / len(x0))
        assert abs(np.mean(x0 > x) - p) < 4 * se


def test_switching_always_switching_resets_to_r():
    spec = SwitchingExpAR1(2, 0.5, eta=1.0)
    rows = simulate_block(spec, 2, 1000, S).rows
    r1 = np.exp(0.5 * special.ndtri(S.uniforms(2, 0, 1000)))
    np.testing.assert_array_equal(rows[:, 1], r1)


def test_switching_never_switching_is_lognormal_expar1():
    spec = SwitchingExpAR1(2, 0.5, eta=0.0, r_mu=0.1, r_sigma=0.4)
    n = 1000
    rows = simulate_block(spec, 3, n, S).rows
    x = S.uniforms(0, 0, n) ** -0.5
    for t in range(1, 4):
        r = np.exp(0.1 + 0.4 * special.ndtri(S.uniforms(2 * t, 0, n)))
        x = r * x**0.5
        np.testing.assert_allclose(rows[:, t], x, rtol=1e-13)


def test_sv_heavy_innov_uses_bank_slots():
    spec = SVHeavyInnov(vol_sd=0.0)
    rows = simulate_block(spec, 1, 100, S).rows
    np.testing.assert_allclose(rows[:, 1], S.uniforms(BANK + 1, 0, 100) ** (-1 / 3))


@pytest.mark.parametrize(
    "spec,tol",
    [
        (ExpAR1(2, 0.5), 0.10),
        (SwitchingExpAR1(2, 0.5, 0.3), 0.10),
        (ExpLinear(2, "long_memory", truncation=200), 0.10),
        (SVHeavyVol(2, 0.5), 0.10),
        (SVHeavyInnov(3), 0.10),
        (SVLeverage(3, (0.6, 0.2)), 0.10),
        (GaussianSquareExp(0.25, 0.5), 0.25),
    ],
)
def test_marginal_tail_index(spec, tol):
    x0 = simulate_block(spec, 1, 10**6, RandomStream(7)).rows[:, 0]
    a = theoretical_alpha(spec)
    assert abs(hill(x0, 2000) - a) <= tol * a


def test_extremal_independence_witness():
    rows = simulate_block(ExpAR1(2, 0.5), 1, 10**6, S).rows
    x = np.quantile(rows[:, 0], 0.999)
    joint = np.mean((rows[:, 0] > x) & (rows[:, 1] > x)) / np.mean(rows[:, 0] > x)
    assert joint < 0.02


def test_joint_exceedance_ratio_matches_first_order_prediction():
    # given X_0 = xP, X_1 > x iff W > (x/P)**0.5, so the ratio is ~ e^{-1} E[P] / x
    rows = simulate_block(ExpAR1(2, 0.5), 1, 4 * 10**6, S).rows
    ratios = []
    for q in (0.999, 0.9999):
        x = np.quantile(rows[:, 0], q)
        hit = rows[:, 0] > x
        r = np.mean(rows[hit, 1] > x)
        se = math.sqrt(r * (1 - r) / hit.sum())
        assert abs(r - math.exp(-1) * 2 / x) < 4 * se + 0.1 * r
        ratios.append(r)
    assert ratios[1] < ratios[0]


def test_overflow_is_saturated_and_counted():
    blk = simulate_block(ExpAR1(0.01, 0.5), 1, 20_000, S)
    assert blk.saturation > 0
    assert np.all(np.isfinite(blk.rows))
    assert blk.rows.max() == np.finfo(float).max


# --------------------------------------------------------------- top-K


@pytest.mark.parametrize("by", ["x0", "product:2"])
def test_top_rows_equal_sorted_full_block(by):
    spec = ExpAR1(2, 0.5)
    n, keep = 600_000, 2500
    full = simulate_block(spec, 2, n, S).rows
    top = simulate_top(spec, 2, n, S, keep, by=by, threads=3)
    key = full[:, 0] if by == "x0" else full[:, 0] * full[:, 2]
    order = np.lexsort((np.arange(n), -key))[:keep]
    np.testing.assert_array_equal(top.rows, full[order])
    np.testing.assert_array_equal(top.replicates, order)
    assert top.n_total == n


# ----------------------------------------------------------------- I/O


def test_csv_round_trip(tmp_path):
    blk = simulate_block(SVLeverage(), 2, 50, S)
    path = tmp_path / "block.csv"
    sidecar = blk.to_csv(path)
    assert path.read_text().splitlines()[0] == "x0,x1,x2"
    back = read_block_csv(path)
    np.testing.assert_array_equal(back.rows, blk.rows)
    assert back.spec == blk.spec and back.seed == 42 and back.h == 2
    meta = sidecar.read_text()
    assert '"saturation": 0' in meta


def test_csv_without_sidecar(tmp_path):
    path = tmp_path / "ext.csv"
    path.write_text("x0,x1\n1.5,2.0\n3.0,0.5\n")
    blk = read_block_csv(path)
    assert blk.spec is None and blk.n == 2 and blk.h == 1


def test_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_block_csv(path)

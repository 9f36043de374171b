"""Toy weights and distances, characteristic function, WLLT schedule, sampling."""

import math

import numpy as np
import pytest

from lrising.model import (
    MeasureMarginal,
    ModelParams,
    coupling,
    window_distance,
)
from lrising.toy import (
    LambdaHistogram,
    boundary_coefficients,
    characteristic_function,
    characteristic_tail_factor,
    empirical_variance_difference,
    exact_variance,
    histogram_from_lambdas,
    sample_boundary_energies,
    smallball_scaling_experiment,
    toy_distances,
    toy_lambdas,
    toy_metastate_histogram,
    toy_mixture_marginal,
    toy_threshold,
    toy_weights,
    variance_scaling,
    wllt_integral_check,
    wllt_schedule,
    wllt_speed_margin,
)


# ---------------------------------------------------------------------------
# Weights and distances
# ---------------------------------------------------------------------------

def test_toy_weights_examples():
    tw = toy_weights(0.0, beta=3.0)
    assert tw.w_plus == 0.5 and tw.w_minus == 0.5
    tw = toy_weights(math.log(2.0) / 2.0, beta=1.0)
    assert tw.w_plus == pytest.approx(2.0 / 3.0, rel=1e-12)
    tw = toy_weights(1e6, beta=1.0)
    assert (tw.w_plus, tw.w_minus) == (1.0, 0.0)
    with pytest.raises(ValueError):
        toy_weights(1.0, beta=0.0)


def test_toy_weights_antisymmetry_is_exact():
    for W in (0.013, 0.7, 2.5, 40.0):
        a = toy_weights(W, beta=1.3)
        b = toy_weights(-W, beta=1.3)
        assert a.w_plus == b.w_minus and a.w_minus == b.w_plus


def test_toy_weights_monotone_in_W():
    ws = [toy_weights(W, beta=0.7).w_plus for W in np.linspace(-5, 5, 41)]
    assert all(b > a for a, b in zip(ws, ws[1:]))


def test_toy_distances_examples():
    assert toy_distances(0.0, beta=1.0) == (1.0, 1.0)
    d_plus, _ = toy_distances(5.0, beta=1.0)
    assert d_plus == pytest.approx(2.0 / (1.0 + math.exp(10.0)), rel=1e-12)


def test_toy_threshold_characterizes_distance_floor():
    beta = 1.7
    for tau in (0.1, 0.5, 0.9):
        bound = toy_threshold(beta, tau)
        for W in (bound * 0.999, -bound * 0.999):
            assert min(toy_distances(W, beta)) >= tau
        for W in (bound * 1.001, -bound * 1.001):
            assert min(toy_distances(W, beta)) < tau


def test_toy_mixture_matches_window_distance():
    window = (-2, 0, 3)
    for W, beta in ((0.4, 1.0), (-1.2, 2.0), (0.0, 0.5)):
        mix = toy_mixture_marginal(W, beta, window)
        d_plus, d_minus = toy_distances(W, beta)
        plus = MeasureMarginal.point_mass(window, 1)
        minus = MeasureMarginal.point_mass(window, -1)
        assert window_distance(mix, plus) == pytest.approx(d_plus, abs=1e-10)
        assert window_distance(mix, minus) == pytest.approx(d_minus, abs=1e-10)


# ---------------------------------------------------------------------------
# Boundary-energy sampling
# ---------------------------------------------------------------------------

def test_boundary_coefficients_symmetric_order():
    p = ModelParams(alpha=0.75, N=4, Y=12)
    c = boundary_coefficients(p)
    assert c.size == 2 * (p.Y - p.N)
    np.testing.assert_allclose(c, c[::-1], rtol=0)
    direct = sum(coupling(x, p.N + 1, p) for x in range(-p.N, p.N + 1))
    assert c[p.Y - p.N] == pytest.approx(direct, rel=1e-12)


def test_sampling_is_chunk_invariant_and_reproducible():
    p = ModelParams(alpha=0.6, N=8)
    a = sample_boundary_energies(p, seed=5, count=10)
    b = sample_boundary_energies(p, seed=5, count=10)
    np.testing.assert_array_equal(a, b)
    tail = sample_boundary_energies(p, seed=5, count=4, start=6)
    # signs are bit-identical per row; the dot-product summation order can
    # differ between matrix shapes, so compare up to rounding
    np.testing.assert_allclose(a[6:], tail, rtol=1e-12)


def test_empirical_variance_matches_exact():
    p = ModelParams(alpha=0.75, N=64)
    W = sample_boundary_energies(p, seed=21, count=20000)
    exact = exact_variance(p)
    stderr = exact * math.sqrt(2.0 / W.size)
    assert abs(np.var(W, ddof=1) - exact) < 4 * stderr


def test_variance_difference_helper():
    d, se = empirical_variance_difference(0.1, (2**6, 2**8), 2000, seed=3)
    assert d >= 0 and se > 0


# ---------------------------------------------------------------------------
# Characteristic function and WLLT
# ---------------------------------------------------------------------------

def test_characteristic_function_basics():
    p = ModelParams(alpha=0.75, N=4)
    assert characteristic_function(0.0, p) == 1.0
    for t in (0.1, 0.7, 2.0):
        v = characteristic_function(t, p)
        assert 0.0 <= v <= 1.0
        assert v == characteristic_function(-t, p)
    assert characteristic_tail_factor(0.0, p) == 1.0
    assert characteristic_tail_factor(1.0, p) < 1.0


def test_characteristic_function_matches_monte_carlo():
    p = ModelParams(alpha=0.75, N=4)
    W = sample_boundary_energies(p, seed=100, count=300_000)
    t = 0.3
    emp = float(np.mean(np.cos(t * W)))
    se = float(np.std(np.cos(t * W), ddof=1) / math.sqrt(W.size))
    assert characteristic_function(t, p) == pytest.approx(emp, abs=3 * se)


def test_wllt_schedule_values_and_bounds():
    with pytest.raises(ValueError):
        wllt_schedule(ModelParams(alpha=0.4, N=16))
    s = wllt_schedule(ModelParams(alpha=0.75, N=64))
    assert s.delta_N == 1.0 and s.delta_cos == 1.5
    assert s.A_N <= math.sqrt(12.0) * 64**0.25
    # tau doubles by 2^(1-alpha) when N doubles
    s2 = wllt_schedule(ModelParams(alpha=0.75, N=128))
    assert s2.tau_N / s.tau_N == pytest.approx(2.0**0.25, rel=1e-12)


def test_wllt_A_N_matches_direct_summation():
    # independent route: dense |x - y| powers, no prefix sums
    p = ModelParams(alpha=0.8, N=16, Y=10**5)
    xs = np.arange(-p.N, p.N + 1)[:, None]
    ys = np.arange(p.N + 1, p.Y + 1)[None, :]
    d = np.abs(xs - ys).astype(float)
    vals = d ** (p.alpha - 2.0)
    vals[d == 1.0] = p.J
    S = vals.sum(axis=0)
    far = ys[0] > 2 * p.N
    direct = math.sqrt(2.0 * float(np.sum(S[far] ** 2)))
    s = wllt_schedule(p)
    assert s.A_N == pytest.approx(direct, rel=1e-10)
    assert s.A_N < math.sqrt(18.0 / (3.0 - 2.0 * p.alpha)) * p.N ** (p.alpha - 0.5)


def test_wllt_integral_frozen_and_bounded():
    val = wllt_integral_check(ModelParams(alpha=0.75, N=16))
    assert val == pytest.approx(0.9634, abs=5e-4)
    for alpha, N in ((0.6, 16), (0.9, 64)):
        v = wllt_integral_check(ModelParams(alpha=alpha, N=N))
        assert 0.0 < v <= 2.0 * math.pi * 1.05


def test_wllt_gaussian_bracket():
    # closed form: A int exp(-A^2 t^2 / 2) over [-tau, tau] < sqrt(2 pi)
    from scipy.special import erf

    s = wllt_schedule(ModelParams(alpha=0.75, N=64))
    closed = math.sqrt(2.0 * math.pi) * erf(s.A_N * s.tau_N / math.sqrt(2.0))
    assert 0.0 < closed < math.sqrt(2.0 * math.pi)


def test_wllt_speed_margin_decreasing():
    for alpha in (0.6, 0.75, 0.9):
        m = wllt_speed_margin(alpha, [16, 64, 256])
        assert np.all(np.diff(m) < 0)


# ---------------------------------------------------------------------------
# Scaling experiments
# ---------------------------------------------------------------------------

def test_smallball_slope_mode():
    tab = smallball_scaling_experiment(
        0.75, 1.0, [2**6, 2**7, 2**8], samples=20_000, seed=11
    )
    assert tab.slope is not None and -0.45 < tab.slope < -0.05
    assert tab.quantiles is None
    for row in tab.rows:
        assert 0.0 < row.estimate < 1.0
        assert row.scaled_estimate == pytest.approx(
            row.N**0.25 * row.estimate, rel=1e-12
        )
    with pytest.raises(ValueError):
        smallball_scaling_experiment(0.75, 1.0, [64], samples=100, seed=1)


def test_smallball_quantile_mode():
    tab = smallball_scaling_experiment(
        0.25, 1.0, [2**6, 2**7], samples=10_000, seed=12
    )
    assert tab.slope is None
    assert set(tab.quantiles) == {64, 128}
    q = tab.quantiles[64]
    assert np.all(np.diff(q) >= 0)
    assert np.all(tab.quantile_stderr[64] > 0)


def test_variance_scaling_slope_positive_and_frozen_point():
    Ns, var, slope = variance_scaling(0.75, [2**6, 2**7, 2**8])
    assert np.all(np.diff(var) > 0)
    assert 0.4 < slope < 0.7


# ---------------------------------------------------------------------------
# Toy metastate histogram
# ---------------------------------------------------------------------------

def test_histogram_mechanics():
    lam = np.array([0.005, 0.005, 0.5, 0.995])
    h = histogram_from_lambdas(lam)
    assert h.masses.sum() == pytest.approx(1.0)
    assert h.pure_mass == pytest.approx(0.75)
    assert h.band_mass(0.4, 0.6) == pytest.approx(0.25)
    assert h.n_samples == 4


def test_toy_lambda_symmetry_and_histogram():
    lam = toy_lambdas(0.75, beta=2.0, N=2**8, samples=4000, seed=19)
    assert np.all((lam >= 0) & (lam <= 1))
    h = toy_metastate_histogram(0.75, beta=2.0, N=2**8, samples=4000, seed=19)
    assert isinstance(h, LambdaHistogram)
    assert abs(h.mean_lambda - 0.5) < 4 * h.stderr_lambda
    assert h.masses.sum() == pytest.approx(1.0)

"""Schedules, good boundary conditions, decoupled gaps, and the empirical
metastate.  Frozen constants come from independent oracle runs noted inline."""

import math

import numpy as np
import pytest

from lrising.metastate import (
    DichotomyReport,
    GoodEtaReport,
    MetastateHistogram,
    SparseSchedule,
    SparseScheduleError,
    _coupling_cumsum,
    _eta_from_row,
    _master_rows,
    _toy_categories,
    _toy_energies,
    decoupled_gap_bound,
    decoupled_measure_gap,
    dichotomy_report,
    empirical_metastate,
    exp_tail,
    good_eta_classifier,
    good_eta_fraction,
    mixed_ball_distance,
    null_recurrence_profile,
    sparse_schedule,
)
from lrising.gibbs import exact_measure, mixture_weight
from lrising.model import (
    BoundaryCondition,
    ModelParams,
    boundary_energy,
    coefficient_profile,
    window_distance,
)
from lrising.toy import toy_mixture_marginal


def brute_tail(m: int, eps: float) -> float:
    total, lo = 0.0, m
    while True:
        ls = np.arange(lo, lo + 2_000_000, dtype=np.float64)
        terms = np.exp(-(ls**eps))
        total += float(terms.sum())
        if terms[-1] < 1e-30:
            return total
        lo += 2_000_000


class TestExpTail:
    def test_matches_direct_summation(self):
        for eps in (0.4, 0.6):
            for m in (1, 2, 17, 57, 200):
                assert exp_tail(m, eps) == pytest.approx(
                    brute_tail(m, eps), rel=1e-12
                )

    def test_decreasing_in_m(self):
        vals = [exp_tail(m, 0.4) for m in range(1, 40)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_is_an_upper_bound_on_the_integral_path(self):
        # small eps forces the pure remainder bound; it must stay above
        # the true sum
        assert exp_tail(1, 0.2) >= brute_tail(1, 0.2)

    def test_domain(self):
        with pytest.raises(ValueError, match="positive"):
            exp_tail(0, 0.4)
        with pytest.raises(ValueError, match="eps"):
            exp_tail(3, 1.0)


class TestSparseSchedule:
    def test_minimal_m_frozen(self):
        # brute-force minima: eps=0.4 -> 17, 57, 91, 120, 146, 169;
        # eps=0.6 -> 2, 6, 10, 13
        s = sparse_schedule(0.3, 0.4, 1.0, 6)
        assert s.m_k == (17, 57, 91, 120, 146, 169)
        s2 = sparse_schedule(0.3, 0.6, 2.0, 4)
        assert s2.m_k == (2, 6, 10, 13)

    def test_m_k_minimality_and_monotonicity(self):
        s = sparse_schedule(0.3, 0.4, 1.0, 6)
        for k, m in enumerate(s.m_k, start=1):
            assert exp_tail(m, 0.4) < 1.0 / k**2
            assert exp_tail(m - 1, 0.4) >= 1.0 / k**2
        assert list(s.m_k) == sorted(s.m_k)

    def test_geometric_volumes_below_threshold(self):
        s = sparse_schedule(0.3, 0.4, 1.0, 6)
        assert s.N_k == (4, 8, 16, 32, 64, 128)
        assert s.n_k == (0,) * 6

    def test_geometric_overflow_names_largest_feasible_k(self):
        with pytest.raises(SparseScheduleError) as exc:
            sparse_schedule(0.3, 0.4, 1.0, 31)
        assert exc.value.largest_feasible_k == 30
        assert "2^31" in str(exc.value)

    def test_supercritical_alpha_is_infeasible_at_k_1(self):
        # the volume condition N_1 > m_1^(2/(alpha-1/2)) needs N_1 around
        # 2^142 at alpha=0.75, eps=0.2 (and worse for smaller eps)
        for alpha, eps in ((0.75, 0.2), (0.75, 0.1), (0.6, 0.3)):
            with pytest.raises(SparseScheduleError) as exc:
                sparse_schedule(alpha, eps, 1.0, 2)
            assert exc.value.largest_feasible_k == 0

    def test_domain(self):
        with pytest.raises(ValueError, match="threshold"):
            sparse_schedule(0.5, 0.2, 1.0, 3)
        with pytest.raises(ValueError, match="epsilon"):
            sparse_schedule(0.75, 0.3, 1.0, 3)
        with pytest.raises(ValueError, match="epsilon"):
            sparse_schedule(0.3, 0.0, 1.0, 3)
        with pytest.raises(ValueError, match="a must"):
            sparse_schedule(0.3, 0.4, 0.0, 3)
        with pytest.raises(ValueError, match="k_max"):
            sparse_schedule(0.3, 0.4, 1.0, 0)

    def test_invariants_reasserted_on_construction(self):
        with pytest.raises(AssertionError, match="tail condition"):
            SparseSchedule(0.3, 0.6, 1.0, (1,), (4,), (0,))
        with pytest.raises(AssertionError, match="volume condition"):
            SparseSchedule(0.75, 0.6, 1.0, (2,), (10,), (1,))
        with pytest.raises(AssertionError, match="margin condition"):
            SparseSchedule(0.75, 0.6, 1.0, (2,), (300,), (3,))
        ok = SparseSchedule(0.75, 0.6, 1.0, (2,), (300,), (1,))
        assert ok.N_k == (300,)


class TestGoodEta:
    def test_all_plus_is_bad(self):
        # frozen: 121 violating sites, worst ratio 10.516
        p = ModelParams(alpha=0.75, N=64)
        rep = good_eta_classifier(BoundaryCondition.all_plus(p), p, 4, 0.1)
        assert not rep.good
        assert len(rep.violations) == 121
        assert rep.max_ratio == pytest.approx(10.51625120704546, rel=1e-9)
        assert 0 in rep.violations

    def test_zero_is_good(self):
        p = ModelParams(alpha=0.75, N=64)
        rep = good_eta_classifier(BoundaryCondition.zero(p), p, 4, 0.1)
        assert rep.good
        assert rep.violations == ()
        assert rep.max_ratio == 0.0

    def test_random_draw_frozen(self):
        p = ModelParams(alpha=0.75, N=64)
        rep = good_eta_classifier(BoundaryCondition.random(p, seed=7), p, 4, 0.1)
        assert rep.good
        assert rep.max_ratio == pytest.approx(0.6398653036264462, rel=1e-9)

    def test_c_constant(self):
        p = ModelParams(alpha=0.75, N=64)
        rep = good_eta_classifier(BoundaryCondition.zero(p), p, 4, 0.1)
        assert rep.c_constant == math.exp(1.0 / 1.5)

    def test_negation_invariance(self):
        # |h| is even in eta, so the verdict and the violation set match
        p = ModelParams(alpha=0.75, N=32)
        eta = BoundaryCondition.random(p, seed=3)
        a = good_eta_classifier(eta, p, 2, 0.1)
        b = good_eta_classifier(eta.negated(), p, 2, 0.1)
        assert a.good == b.good
        assert a.violations == b.violations
        assert a.max_ratio == b.max_ratio

    def test_verdict_against_hand_check(self):
        from lrising.model import boundary_field

        p = ModelParams(alpha=0.6, N=8)
        eta = BoundaryCondition.random(p, seed=12)
        n, eps = 2, 0.2
        rep = good_eta_classifier(eta, p, n, eps)
        ex = p.alpha - 1.5 + eps
        hand_bad = []
        for x in range(-p.N + n, p.N - n + 1):
            cap = (p.N + x) ** ex + (p.N - x) ** ex
            if abs(boundary_field(x, eta, p)) > cap:
                hand_bad.append(x)
        assert list(rep.violations) == hand_bad
        assert rep.good == (not hand_bad)

    def test_fraction_increases_with_margin(self):
        # measured at 300 draws, seed 7000: 0.84, 0.9167, 0.9733
        p = ModelParams(alpha=0.75, N=64)
        fracs = [good_eta_fraction(p, n, 0.1, 300, seed=7000) for n in (2, 8, 32)]
        assert fracs[0] == pytest.approx(0.8400, abs=1e-4)
        assert fracs[1] == pytest.approx(0.9167, abs=1e-4)
        assert fracs[2] == pytest.approx(0.9733, abs=1e-4)
        assert fracs[0] < fracs[1] < fracs[2]

    def test_domain(self):
        p = ModelParams(alpha=0.75, N=8)
        eta = BoundaryCondition.zero(p)
        with pytest.raises(ValueError, match="epsilon"):
            good_eta_classifier(eta, p, 2, 0.3)
        with pytest.raises(ValueError, match="n must"):
            good_eta_classifier(eta, p, 0, 0.1)
        with pytest.raises(ValueError, match="n must"):
            good_eta_classifier(eta, p, 8, 0.1)


class TestDecoupledGap:
    def test_grid_frozen(self):
        # measured gaps on the (alpha, beta, N') grid with the seed-11 eta;
        # N'=64 equals the truncation radius, so the gap vanishes exactly
        expect = {
            (0.6, 0.5, 16): 0.1916150425015019,
            (0.6, 1.0, 16): 0.17612667784379815,
            (0.75, 0.5, 16): 0.3175929346205122,
            (0.75, 1.0, 16): 0.2696837967195891,
        }
        for alpha in (0.6, 0.75):
            for beta in (0.5, 1.0):
                p = ModelParams(alpha=alpha, N=4, beta=beta)
                eta = BoundaryCondition.random(p, seed=11)
                g16 = decoupled_measure_gap(p, eta, 16, X=(0,))
                assert g16 == pytest.approx(expect[(alpha, beta, 16)], rel=1e-9)
                assert decoupled_measure_gap(p, eta, 64, X=(0,)) == 0.0

    def test_bound_formula(self):
        p = ModelParams(alpha=0.75, N=4, beta=1.0)
        by_hand = math.expm1(12.0 * 1.0 / 0.25 * 4.0 / 12.0**0.25)
        assert decoupled_gap_bound(p, 16) == by_hand

    def test_gap_vanishes_beyond_truncation(self):
        p = ModelParams(alpha=0.6, N=4, beta=1.0)
        eta = BoundaryCondition.random(p, seed=11)
        assert decoupled_measure_gap(p, eta, 200, X=(-1, 0, 1)) == 0.0

    def test_mean_gap_decreases(self):
        # per-eta gaps are not monotone (seed 11 at alpha=0.6 has gap
        # 0.070 at N'=8 but 0.176 at N'=16); the mean over draws is
        p = ModelParams(alpha=0.6, N=4, beta=1.0)
        means = []
        for N_next in (8, 16, 32, 48):
            gaps = [
                decoupled_measure_gap(
                    p, BoundaryCondition.random(p, seed=100 + i), N_next
                )
                for i in range(20)
            ]
            means.append(float(np.mean(gaps)))
        assert means[0] == pytest.approx(0.18233, abs=1e-4)
        assert all(a > b for a, b in zip(means, means[1:]))

    def test_pathwise_non_monotone_instance(self):
        p = ModelParams(alpha=0.6, N=4, beta=1.0)
        eta = BoundaryCondition.random(p, seed=11)
        g8 = decoupled_measure_gap(p, eta, 8)
        g16 = decoupled_measure_gap(p, eta, 16)
        assert g8 == pytest.approx(0.06954418564695479, rel=1e-9)
        assert g8 < g16

    def test_domain(self):
        p = ModelParams(alpha=0.6, N=4)
        eta = BoundaryCondition.zero(p)
        with pytest.raises(ValueError, match="N_next"):
            decoupled_measure_gap(p, eta, 4)


class TestMasterRows:
    def test_toy_energies_match_coefficient_profile(self):
        Y_max = 16 * 64
        rows = _master_rows(3, 0, 4, Y_max)
        F = _coupling_cumsum(0.75, 1.0, 17 * 64 + 1)
        for N in (4, 16, 64):
            W = _toy_energies(rows, F, N, Y_max)
            S = coefficient_profile(ModelParams(alpha=0.75, N=N)).S
            for i in range(4):
                right = rows[i, N : 16 * N]
                left = rows[i, Y_max + N : Y_max + 16 * N]
                assert W[i] == pytest.approx(
                    float(S @ right + S @ left), rel=1e-12
                )

    def test_toy_energies_match_brute_boundary_energy(self):
        Y_max = 16 * 16
        rows = _master_rows(3, 0, 2, Y_max)
        F = _coupling_cumsum(0.6, 1.0, 17 * 16 + 1)
        p = ModelParams(alpha=0.6, N=16)
        W = _toy_energies(rows, F, 16, Y_max)
        for i in range(2):
            eta = _eta_from_row(rows[i], p, seed=0)
            assert W[i] == pytest.approx(boundary_energy(eta, p).W, rel=1e-10)

    def test_eta_from_row_layout(self):
        Y_max = 16 * 8
        row = _master_rows(5, 0, 1, Y_max)[0]
        p = ModelParams(alpha=0.3, N=8)
        eta = _eta_from_row(row, p, seed=5)
        assert eta.N == 8 and eta.Y == 128
        for y in (9, 40, 128):
            assert eta.sign(y) == int(row[y - 1])
            assert eta.sign(-y) == int(row[Y_max + y - 1])
        assert all(eta.sign(y) == 0 for y in range(-8, 9))

    def test_rows_are_substream_stable(self):
        a = _master_rows(7, 0, 3, 64)
        b = _master_rows(7, 1, 2, 64)
        assert np.array_equal(a[1:], b)


class TestToyCategories:
    def test_mirror_symmetry(self):
        W = np.array([-3.0, -0.4, -1e-9, 0.0, 1e-9, 0.4, 3.0])
        c = _toy_categories(W, 2.0, 0.2)
        c_neg = _toy_categories(-W, 2.0, 0.2)
        assert c.tolist() == [1, 2, 2, 2, 2, 2, 0]
        swap = {0: 1, 1: 0, 2: 2}
        assert [swap[v] for v in c.tolist()] == c_neg.tolist()

    def test_threshold_consistency(self):
        from lrising.toy import toy_threshold

        thr = toy_threshold(2.0, 0.2)
        eps = 1e-9
        cats = _toy_categories(
            np.array([thr + eps, thr - eps, -thr - eps]), 2.0, 0.2
        )
        assert cats.tolist() == [0, 2, 1]


class TestEmpiricalMetastateToy:
    def test_supercritical_concentrates_on_pure_states(self):
        # frozen: 400 draws, volumes 16..1024
        h = empirical_metastate(
            0.75, 2.0, volumes=(16, 64, 256, 1024), mode="toy",
            tau=0.2, eta_samples=400, seed=5,
        )
        assert h.ball_frequencies == (0.47625, 0.49, 0.03375)
        assert h.pure_ball_frequency >= 0.95
        assert h.lambda_hist.pure_mass == 0.9375
        assert h.lambda_hist.mean_lambda == pytest.approx(
            0.517620572808752, rel=1e-9
        )

    def test_ball_symmetry_within_stderr(self):
        h = empirical_metastate(
            0.75, 2.0, volumes=(16, 64, 256, 1024), mode="toy",
            tau=0.2, eta_samples=400, seed=5,
        )
        fp, fm, _ = h.ball_frequencies
        ep, em, _ = h.ball_stderr
        assert abs(fp - fm) <= 3.0 * math.hypot(ep, em)

    def test_subcritical_keeps_mixtures(self):
        # frozen: the complement holds the majority at tau=0.01
        h = empirical_metastate(
            0.25, 1.0, volumes=(16, 64, 256, 1024), mode="toy",
            tau=0.01, eta_samples=400, seed=5,
        )
        assert h.ball_frequencies[2] == 0.54125
        assert h.ball_frequencies[2] >= 0.5

    def test_determinism_and_frozen_small_run(self):
        a = empirical_metastate(
            0.75, 2.0, volumes=(64, 256), mode="toy", eta_samples=100, seed=4
        )
        b = empirical_metastate(
            0.75, 2.0, volumes=(64, 256), mode="toy", eta_samples=100, seed=4
        )
        assert a.ball_frequencies == b.ball_frequencies == (0.43, 0.52, 0.05)
        assert np.array_equal(a.lambda_hist.masses, b.lambda_hist.masses)
        assert a.lambda_hist.pure_mass == 0.96
        assert a.lambda_hist.mean_lambda == pytest.approx(
            0.528324239060092, rel=1e-9
        )

    def test_schedule_supplies_volumes(self):
        s = sparse_schedule(0.3, 0.4, 1.0, 3)
        h = empirical_metastate(
            0.3, 1.0, schedule=s, tau=0.2, eta_samples=50, seed=1
        )
        assert h.params.volumes == s.N_k == (4, 8, 16)

    def test_frequencies_and_masses_sum_to_one(self):
        h = empirical_metastate(
            0.3, 1.0, volumes=(8, 32), mode="toy", eta_samples=80, seed=2
        )
        assert sum(h.ball_frequencies) == pytest.approx(1.0, abs=1e-12)
        assert h.lambda_bins.sum() == pytest.approx(1.0, abs=1e-12)

    def test_validation(self):
        s = sparse_schedule(0.3, 0.4, 1.0, 2)
        with pytest.raises(ValueError, match="exactly one"):
            empirical_metastate(0.3, 1.0, schedule=s, volumes=(4, 8))
        with pytest.raises(ValueError, match="exactly one"):
            empirical_metastate(0.3, 1.0)
        with pytest.raises(ValueError, match="increasing"):
            empirical_metastate(0.3, 1.0, volumes=(8, 8))
        with pytest.raises(ValueError, match="beta"):
            empirical_metastate(0.3, 0.0, volumes=(8,))
        with pytest.raises(ValueError, match="tau"):
            empirical_metastate(0.3, 1.0, volumes=(8,), tau=1.5)
        with pytest.raises(ValueError, match="mode"):
            empirical_metastate(0.3, 1.0, volumes=(8,), mode="fast")
        with pytest.raises(ValueError, match="toy mode supports"):
            empirical_metastate(0.3, 1.0, volumes=(2**15,), mode="toy")
        with pytest.raises(ValueError, match="exact mode supports"):
            empirical_metastate(0.3, 1.0, volumes=(12,), mode="exact")

    def test_histogram_invariants_enforced(self):
        h = empirical_metastate(
            0.3, 1.0, volumes=(8,), mode="toy", eta_samples=10, seed=0
        )
        with pytest.raises(AssertionError, match="sum to 1"):
            MetastateHistogram(
                lambda_hist=h.lambda_hist,
                ball_frequencies=(0.5, 0.4, 0.3),
                ball_stderr=(0.0, 0.0, 0.0),
                params=h.params,
            )


class TestEmpiricalMetastateExact:
    def test_frozen_small_run(self):
        # frozen: 24 draws over volumes (5, 7); per-eta averages make
        # half-integer counts possible
        h = empirical_metastate(
            0.75, 1.5, volumes=(5, 7), mode="exact", tau=0.35,
            X=(0,), eta_samples=24, seed=9,
        )
        assert h.ball_frequencies == pytest.approx(
            (0.4166666666666667, 0.4791666666666667, 0.10416666666666667),
            abs=1e-12,
        )
        assert h.lambda_hist.mean_lambda == pytest.approx(
            0.49310860549134455, rel=1e-9
        )
        assert h.params.mode == "exact"

    def test_lambda_is_the_exact_mixture_weight(self):
        h = empirical_metastate(
            0.75, 1.5, volumes=(5, 7), mode="exact", tau=0.35,
            X=(0,), eta_samples=1, seed=9,
        )
        p7 = ModelParams(alpha=0.75, N=7, beta=1.5)
        row = _master_rows(9, 0, 1, 16 * 7)[0]
        eta = _eta_from_row(row, p7, seed=9)
        assert h.lambda_hist.mean_lambda == mixture_weight(p7, eta)

    def test_single_eta_category_matches_direct_computation(self):
        from lrising.gibbs import plus_reference_marginal

        tau = 0.35
        h = empirical_metastate(
            0.75, 1.5, volumes=(5,), mode="exact", tau=tau,
            X=(0,), eta_samples=1, seed=9,
        )
        p5 = ModelParams(alpha=0.75, N=5, beta=1.5)
        row = _master_rows(9, 0, 1, 16 * 5)[0]
        eta = _eta_from_row(row, p5, seed=9)
        marg = exact_measure(p5, eta).marginal((0,))
        ref = plus_reference_marginal(p5, (0,))
        d_plus = window_distance(marg, ref)
        d_minus = window_distance(marg, ref.negated())
        if d_plus <= tau and (d_minus > tau or d_plus <= d_minus):
            expected = (1.0, 0.0, 0.0)
        elif d_minus <= tau:
            expected = (0.0, 1.0, 0.0)
        else:
            expected = (0.0, 0.0, 1.0)
        assert h.ball_frequencies == expected


class TestNullRecurrence:
    def test_frozen_small_profile(self):
        prof = null_recurrence_profile(0.75, 2.0, 64, tau=0.2, seed=0)
        assert prof.final_plus == 0.34375
        assert prof.final_minus == 0.578125
        assert prof.final_mixed == 0.015625
        assert prof.W[0] == pytest.approx(0.5530006969188994, rel=1e-9)
        assert prof.W[2] == pytest.approx(7.391991659357637, rel=1e-9)

    def test_energies_match_coefficient_profile(self):
        N_max = 32
        prof = null_recurrence_profile(0.6, 1.0, N_max, seed=3)
        Y_max = 16 * N_max
        row = _master_rows(3, 0, 1, Y_max)[0]
        for n in (1, 7, 32):
            S = coefficient_profile(ModelParams(alpha=0.6, N=n)).S
            right = row[n : 16 * n]
            left = row[Y_max + n : Y_max + 16 * n]
            assert prof.W[n - 1] == pytest.approx(
                float(S @ (right + left)), rel=1e-12
            )

    def test_running_frequencies_are_frequencies(self):
        prof = null_recurrence_profile(0.75, 2.0, 256, tau=0.2, seed=1)
        for f in (prof.freq_plus, prof.freq_minus, prof.freq_mixed):
            assert np.all(f >= 0.0) and np.all(f <= 1.0)
        # the three balls are disjoint at tau=0.2, so the frequencies
        # cannot add up beyond 1
        total = prof.freq_plus + prof.freq_minus + prof.freq_mixed
        assert np.all(total <= 1.0 + 1e-12)

    def test_mixed_ball_distance_identity(self):
        for W in (-1.3, 0.0, 0.2, 2.4):
            direct = window_distance(
                toy_mixture_marginal(W, 2.0, (0, 1)),
                toy_mixture_marginal(0.0, 2.0, (0, 1)),
            )
            assert mixed_ball_distance(W, 2.0) == pytest.approx(
                direct, abs=1e-12
            )

    def test_threshold_asserts(self):
        # seed 1 spends 74.5% of volumes in the plus ball at N_max=2^13;
        # a (0.4, 0.6) band must reject it
        with pytest.raises(AssertionError, match="plus-ball"):
            null_recurrence_profile(
                0.75, 2.0, 2**13, tau=0.2, seed=1, pure_band=(0.4, 0.6)
            )
        with pytest.raises(AssertionError, match="mixed-ball"):
            null_recurrence_profile(
                0.75, 2.0, 256, tau=0.2, seed=1, mixed_max=0.0
            )

    def test_domain(self):
        with pytest.raises(ValueError, match="N_max"):
            null_recurrence_profile(0.75, 2.0, 2**15)
        with pytest.raises(ValueError, match="beta"):
            null_recurrence_profile(0.75, 0.0, 16)
        with pytest.raises(ValueError, match="tau"):
            null_recurrence_profile(0.75, 2.0, 16, tau=0.0)


class TestDichotomyReport:
    def test_frozen_report(self):
        rep = dichotomy_report(
            [0.25, 0.3, 0.7, 0.75], 2.0, N=1024, eta_samples=2000,
            seed=2, var_grid=(2**13, 2**14, 2**15, 2**16),
        )
        pure = [r.pure_mass for r in rep.rows]
        assert pure == [0.7585, 0.7785, 0.9485, 0.9565]
        assert all(a < b for a, b in zip(pure, pure[1:]))
        for r in rep.rows:
            assert r.pure_mass + r.mixed_mass == pytest.approx(1.0, abs=1e-12)
            assert abs(r.mean_lambda - 0.5) <= 3.0 * r.stderr_lambda

    def test_variance_exponents(self):
        rep = dichotomy_report(
            [0.25, 0.75], 2.0, N=256, eta_samples=100, seed=2,
            var_grid=(2**13, 2**14, 2**15, 2**16),
        )
        assert rep.rows[0].var_exponent == pytest.approx(
            0.004749506608389633, rel=1e-9
        )
        assert rep.rows[1].var_exponent == pytest.approx(
            0.5041356167585349, rel=1e-9
        )
        assert abs(rep.rows[1].var_exponent - 0.5) < 0.05

    def test_threshold_band_rejected(self):
        with pytest.raises(ValueError, match="0.52"):
            dichotomy_report([0.3, 0.52], 1.0, N=64, eta_samples=10, seed=0)

    def test_report_is_a_report(self):
        rep = dichotomy_report([0.3], 1.0, N=64, eta_samples=20, seed=0)
        assert isinstance(rep, DichotomyReport)
        assert rep.rows[0].alpha == 0.3
        assert rep.N == 64 and rep.eta_samples == 20

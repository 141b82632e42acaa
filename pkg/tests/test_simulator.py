import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import poisson

from qfp.chernoff import VisibilityPair
from qfp.errors import CapacityError, DomainError
from qfp.protocol import ProtocolConfig, derive, photocount_pmf
from qfp.simulator import (
    CountPair,
    Hypothesis,
    ToeplitzCode,
    TrialMode,
    apply_awgn,
    beam_split_intensities,
    char_fn_approx,
    char_fn_exact,
    detect,
    qpsk_phases,
    referee_decide,
    run_trials,
    toeplitz_encode,
    wilson_interval,
)


class TestToeplitzCode:
    def test_dense_matrix_matches_convolution(self):
        code = ToeplitzCode.random(7, 16, seed=3)
        dense = code.dense_matrix()
        rng = np.random.default_rng(0)
        for _ in range(20):
            x = rng.integers(0, 2, size=7, dtype=np.uint8)
            assert np.array_equal(toeplitz_encode(x, code), dense @ x % 2)

    def test_all_ones_generator(self):
        # With an all-ones diagonal every output bit is the parity of the
        # whole input.
        diag = np.ones(4 + 8 - 1, dtype=np.uint8)
        code = ToeplitzCode(n=4, m=8, diag=diag, seed=0)
        x = np.array([1, 0, 1, 1], dtype=np.uint8)
        expected = np.full(8, int(x.sum()) % 2, dtype=np.uint8)
        assert np.array_equal(toeplitz_encode(x, code), expected)

    def test_linearity(self):
        code = ToeplitzCode.random(12, 40, seed=9)
        rng = np.random.default_rng(4)
        for _ in range(20):
            x = rng.integers(0, 2, size=12, dtype=np.uint8)
            y = rng.integers(0, 2, size=12, dtype=np.uint8)
            lhs = toeplitz_encode(x ^ y, code)
            rhs = toeplitz_encode(x, code) ^ toeplitz_encode(y, code)
            assert np.array_equal(lhs, rhs)

    def test_validation(self):
        with pytest.raises(DomainError):
            ToeplitzCode.random(8, 6, seed=0)
        with pytest.raises(DomainError):
            ToeplitzCode.random(8, 9, seed=0)
        with pytest.raises(DomainError):
            ToeplitzCode(n=4, m=8, diag=np.zeros(3, dtype=np.uint8), seed=0)
        code = ToeplitzCode.random(4, 8, seed=0)
        with pytest.raises(DomainError):
            toeplitz_encode(np.zeros(5, dtype=np.uint8), code)

    def test_random_code_distance_near_gv(self):
        # Spot check: distinct inputs map to codewords whose relative
        # distance concentrates near 1/2 well above the design distance.
        code = ToeplitzCode.random(32, 320, seed=11)
        rng = np.random.default_rng(5)
        dists = []
        for _ in range(200):
            x = rng.integers(0, 2, size=32, dtype=np.uint8)
            y = rng.integers(0, 2, size=32, dtype=np.uint8)
            if np.array_equal(x, y):
                continue
            dists.append(int((toeplitz_encode(x, code) ^ toeplitz_encode(y, code)).sum()))
        rel = np.array(dists) / 320.0
        assert abs(float(rel.mean()) - 0.5) < 0.05
        assert float(rel.min()) > 0.25


class TestQpskPhases:
    def test_truth_table(self):
        word = np.array([0, 0, 0, 1, 1, 1, 1, 0], dtype=np.uint8)
        assert np.allclose(
            qpsk_phases(word), [0.0, np.pi / 2, np.pi, 3 * np.pi / 2]
        )

    def test_phase_difference_cosine(self):
        # cos of the phase difference is +1 on agreeing bit pairs and
        # -1 on complementary ones; neighbors give 0.
        pairs = [(a, b) for a in range(4) for b in range(4)]
        for a, b in pairs:
            wa = np.array([a >> 1, a & 1], dtype=np.uint8)
            wb = np.array([b >> 1, b & 1], dtype=np.uint8)
            c = math.cos(qpsk_phases(wa)[0] - qpsk_phases(wb)[0])
            ham = int((wa ^ wb).sum())
            assert c == pytest.approx({0: 1.0, 1: 0.0, 2: -1.0}[ham], abs=1e-12)

    def test_odd_length_rejected(self):
        with pytest.raises(DomainError):
            qpsk_phases(np.array([1, 0, 1], dtype=np.uint8))


class TestAwgnChannel:
    def test_noiseless_passthrough(self):
        rng = np.random.default_rng(0)
        phases = np.array([0.0, np.pi / 2, np.pi])
        amps = apply_awgn(phases, 2.0, 8.0, 0.0, rng)
        assert np.allclose(amps, 0.5 * np.exp(1j * phases))

    def test_moments(self):
        rng = np.random.default_rng(7)
        n = 200_000
        amps = apply_awgn(np.zeros(n), 1.0, 4.0, 0.3, rng)
        noise = amps - 0.5
        # Mean 0, E|xi|^2 = nu split evenly between quadratures.
        se = math.sqrt(0.15 / n)
        assert abs(float(noise.real.mean())) < 4 * se
        assert abs(float(noise.imag.mean())) < 4 * se
        assert float(np.abs(noise) ** 2 @ np.ones(n) / n) == pytest.approx(
            0.3, rel=0.02
        )
        assert float((noise.real**2).mean()) == pytest.approx(0.15, rel=0.03)

    def test_domain(self):
        rng = np.random.default_rng(0)
        with pytest.raises(DomainError):
            apply_awgn(np.zeros(3), 0.0, 1.0, 0.1, rng)


class TestBeamSplitter:
    def test_energy_conservation_exact(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=50) + 1j * rng.normal(size=50)
        b = rng.normal(size=50) + 1j * rng.normal(size=50)
        i_plus, i_minus = beam_split_intensities(a, b)
        total_in = float(np.sum(np.abs(a) ** 2 + np.abs(b) ** 2))
        assert i_plus + i_minus == pytest.approx(total_in, rel=1e-12)

    def test_identical_trains_dark_port(self):
        a = np.exp(1j * np.linspace(0, 3, 20))
        i_plus, i_minus = beam_split_intensities(a, a)
        assert i_minus == pytest.approx(0.0, abs=1e-24)
        assert i_plus == pytest.approx(2.0 * 20, rel=1e-12)

    def test_opposite_trains_bright_port(self):
        a = np.exp(1j * np.linspace(0, 3, 20))
        i_plus, i_minus = beam_split_intensities(a, -a)
        assert i_plus == pytest.approx(0.0, abs=1e-24)

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            beam_split_intensities(np.zeros(3), np.zeros(4))


class TestDetect:
    def test_noiseless_identical_inputs_silent_dark_port(self):
        rng = np.random.default_rng(2)
        a = np.full(10, 0.4 + 0.0j)
        for _ in range(200):
            counts = detect(a, a, rng)
            assert counts.k_minus == 0

    def test_capacity_guard(self):
        rng = np.random.default_rng(0)
        a = np.full(10, 1000.0 + 0.0j)
        with pytest.raises(CapacityError):
            detect(a, a, rng)

    def test_mean_counts(self):
        rng = np.random.default_rng(3)
        a = np.full(40, 0.5 + 0.0j)
        b = np.full(40, 0.5j)
        kp = np.array([detect(a, b, rng).k_plus for _ in range(4000)])
        # Orthogonal phases split the energy evenly: mean 10 per port.
        assert float(kp.mean()) == pytest.approx(10.0, rel=0.03)


class TestReferee:
    def test_exhaustive_against_pmf_oracle(self):
        # For every count pair with non-negligible mass, the decision must
        # agree with the sign of the exact pmf ratio.
        mu, vis = 5.0, VisibilityPair(0.5, 0.25)
        rng = np.random.default_rng(0)
        for kp in range(0, 60):
            for km in range(0, 60):
                p_e = photocount_pmf(kp, km, mu, vis.v_e)
                p_d = photocount_pmf(kp, km, mu, vis.v_d)
                if math.isclose(p_e, p_d, rel_tol=1e-12):
                    continue
                got = referee_decide(CountPair(kp, km), mu, vis, rng)
                want = Hypothesis.EQUAL if p_e > p_d else Hypothesis.DIFFERENT
                assert got is want, (kp, km)

    def test_tie_is_fair_coin(self):
        # v_e = v_d makes every count pair a tie.
        vis = VisibilityPair(0.3, 0.3)
        rng = np.random.default_rng(5)
        outcomes = [
            referee_decide(CountPair(1, 1), 2.0, vis, rng) for _ in range(2000)
        ]
        frac = sum(o is Hypothesis.EQUAL for o in outcomes) / 2000
        assert abs(frac - 0.5) < 0.04

    def test_many_dark_counts_mean_different(self):
        vis = VisibilityPair(0.9, 0.1)
        rng = np.random.default_rng(0)
        assert (
            referee_decide(CountPair(0, 10), 5.0, vis, rng)
            is Hypothesis.DIFFERENT
        )
        assert (
            referee_decide(CountPair(10, 0), 5.0, vis, rng) is Hypothesis.EQUAL
        )


class TestWilsonInterval:
    def test_contains_point_estimate(self):
        lo, hi = wilson_interval(7, 100)
        assert lo < 0.07 < hi

    def test_zero_errors(self):
        lo, hi = wilson_interval(0, 1000)
        assert lo == pytest.approx(0.0, abs=1e-15)
        assert 0.0 < hi < 0.01

    def test_matches_scipy(self):
        from scipy.stats import binomtest

        res = binomtest(13, 250).proportion_ci(confidence_level=0.95, method="wilson")
        lo, hi = wilson_interval(13, 250)
        assert (lo, hi) == pytest.approx((res.low, res.high), rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            wilson_interval(5, 0)
        with pytest.raises(DomainError):
            wilson_interval(5, 4)


def _small_cfg(**over):
    base = dict(n=64, nu=1e-3, eps=1e-3, s=1.0, delta=0.2, beta=1.0)
    base.update(over)
    return ProtocolConfig(**base)


class TestRunTrials:
    def test_reproducible(self):
        cfg = _small_cfg()
        a = run_trials(cfg, TrialMode.WORST_CASE_DISTANCE, 2000, seed=42)
        b = run_trials(cfg, TrialMode.WORST_CASE_DISTANCE, 2000, seed=42)
        assert a == b

    def test_seed_changes_outcome(self):
        cfg = _small_cfg()
        a = run_trials(cfg, TrialMode.RANDOM_INPUTS, 2000, seed=1)
        b = run_trials(cfg, TrialMode.RANDOM_INPUTS, 2000, seed=2)
        assert a.count_histogram != b.count_histogram

    def test_histogram_mass(self):
        cfg = _small_cfg()
        batch = run_trials(cfg, TrialMode.WORST_CASE_DISTANCE, 1500, seed=7)
        assert sum(batch.count_histogram.values()) == 2 * 1500
        assert batch.trials == 1500
        assert 0.0 <= batch.wilson_ci[0] <= batch.avg_error <= batch.wilson_ci[1]

    def test_equal_inputs_single_branch(self):
        cfg = _small_cfg()
        batch = run_trials(cfg, TrialMode.EQUAL_INPUTS, 1000, seed=3)
        assert batch.errors_different == 0
        assert sum(batch.count_histogram.values()) == 1000
        assert batch.avg_error == batch.errors_equal / 2000

    def test_noiseless_equal_inputs_never_errs(self):
        cfg = ProtocolConfig(
            n=64, nu=0.0, eps=1e-3, s=1.0, delta=0.2, bandwidth=50.0
        )
        batch = run_trials(cfg, TrialMode.EQUAL_INPUTS, 3000, seed=9)
        # Dark port silent and v_e = 1: a wrong call is possible only on
        # the uninformative (0, 0) tie, which the referee coin-flips.
        assert all(k.k_minus == 0 for k in batch.count_histogram)
        zeros = batch.count_histogram.get(CountPair(0, 0), 0)
        assert batch.errors_equal <= zeros

    def test_empirical_counts_match_model_moments(self):
        # nu L / mu is tiny here, so the product-Poisson model holds to
        # high accuracy; check port means at 4 sigma.
        cfg = ProtocolConfig(
            n=800, nu=6.25e-4, eps=1e-5, s=1.0, delta=0.0, beta=1.0
        )
        model = derive(cfg)
        trials = 100_000
        batch = run_trials(cfg, TrialMode.EQUAL_INPUTS, trials, seed=21)
        kp = np.array([k.k_plus for k in batch.count_histogram])
        km = np.array([k.k_minus for k in batch.count_histogram])
        w = np.array(list(batch.count_histogram.values()))
        mean_plus = float((kp * w).sum() / trials)
        mean_minus = float((km * w).sum() / trials)
        mu, v = model.mu, model.vis.v_e
        se_plus = math.sqrt(mu * (1 + v) / trials) * 5
        assert abs(mean_plus - mu * (1 + v)) < se_plus
        assert abs(mean_minus - mu * (1 - v)) < 5 * math.sqrt(
            mu * (1 - v) / trials
        ) + 2 * cfg.nu * model.l_slots * 0.01

    def test_worst_case_errors_within_chernoff_bound(self):
        from qfp.chernoff import error_bound

        cfg = _small_cfg(delta=0.3, beta=0.5)
        model = derive(cfg)
        bound = error_bound(model.mu, model.vis)
        batch = run_trials(cfg, TrialMode.WORST_CASE_DISTANCE, 20_000, seed=13)
        assert batch.wilson_ci[0] <= bound

    def test_random_inputs_easier_than_worst_case(self):
        # Typical random pairs sit near relative distance 1/2 > delta, so
        # the error rate cannot be meaningfully above the worst case.
        cfg = _small_cfg(delta=0.1, beta=2.0)
        worst = run_trials(cfg, TrialMode.WORST_CASE_DISTANCE, 20_000, seed=17)
        rand = run_trials(cfg, TrialMode.RANDOM_INPUTS, 20_000, seed=17)
        margin = 3 * math.sqrt(worst.avg_error / 40_000 + 1e-9)
        assert rand.avg_error <= worst.avg_error + margin

    def test_mismatched_code_rejected(self):
        cfg = _small_cfg()
        bad = ToeplitzCode.random(32, 64, seed=0)
        with pytest.raises(DomainError):
            run_trials(cfg, TrialMode.RANDOM_INPUTS, 10, seed=0, code=bad)

    def test_slot_limit(self):
        cfg = _small_cfg(n=10**6)
        with pytest.raises(CapacityError):
            run_trials(cfg, TrialMode.EQUAL_INPUTS, 10, seed=0, slot_limit=10**3)

    def test_trials_domain(self):
        with pytest.raises(DomainError):
            run_trials(_small_cfg(), TrialMode.EQUAL_INPUTS, 0, seed=0)

    def test_reduced_sampler_matches_explicit_chain(self):
        # Distributional agreement between the noncentral-chi-square path
        # and the explicit per-slot AWGN chain, equal hypothesis.
        with pytest.warns(UserWarning, match="noise PSD"):
            cfg = ProtocolConfig(
                n=16, nu=0.05, eps=1e-3, s=1.0, delta=0.2, beta=0.5
            )
        model = derive(cfg)
        trials = 30_000
        batch = run_trials(cfg, TrialMode.EQUAL_INPUTS, trials, seed=31)
        rng = np.random.default_rng(99)
        m = 2 * model.l_slots
        word = np.zeros(m, dtype=np.uint8)
        phases = qpsk_phases(word)
        explicit = np.empty((trials, 2), dtype=np.int64)
        for t in range(trials):
            a = apply_awgn(phases, cfg.s, cfg.bandwidth, cfg.nu, rng)
            b = apply_awgn(phases, cfg.s, cfg.bandwidth, cfg.nu, rng)
            c = detect(a, b, rng)
            explicit[t] = (c.k_plus, c.k_minus)
        for axis, getter in ((0, lambda k: k.k_plus), (1, lambda k: k.k_minus)):
            sim_mean = (
                sum(getter(k) * w for k, w in batch.count_histogram.items())
                / trials
            )
            exp_mean = float(explicit[:, axis].mean())
            pooled_se = math.sqrt(
                (explicit[:, axis].var() + explicit[:, axis].var()) / trials
            )
            assert abs(sim_mean - exp_mean) < 5 * pooled_se + 1e-9


class TestCharacteristicFunctions:
    def test_normalization(self):
        assert char_fn_exact(np.zeros(5), 1.0, 2.0, 0.1, 0.0, 0.0) == pytest.approx(
            1.0 + 0.0j
        )
        assert char_fn_approx(0.5, 3.0, 0.0, 0.0) == pytest.approx(1.0 + 0.0j)

    def test_noiseless_agreement(self):
        # With nu = 0 the exact form reduces to the product-Poisson form at
        # the bare visibility.
        rng = np.random.default_rng(8)
        phase_diffs = rng.uniform(0, 2 * np.pi, size=30)
        s, bandwidth = 1.0, 10.0
        v0 = float(np.mean(np.cos(phase_diffs)))
        mu = 30 * s / bandwidth
        for lp, lm in [(0.3, -0.7), (1.1, 0.4), (-2.0, 2.5)]:
            exact = char_fn_exact(phase_diffs, s, bandwidth, 0.0, lp, lm)
            approx = char_fn_approx(v0, mu, lp, lm)
            assert exact == pytest.approx(approx, rel=1e-12)

    def test_exact_matches_pmf_fourier_sum(self):
        # Weak noise: compare the exact characteristic function against the
        # DFT of the product-Poisson pmf; they differ only at O(nu L s/B).
        l_slots, s, bandwidth, nu = 20, 1.0, 10.0, 1e-4
        mu = l_slots * (s / bandwidth + nu)
        v = 1.0 / (1.0 + bandwidth * nu / s)
        lam = 0.7
        exact = char_fn_exact(np.zeros(l_slots), s, bandwidth, nu, lam, 0.0)
        ks = np.arange(0, 80)
        pmf = poisson.pmf(ks, mu * (1 + v))
        fourier = complex(np.sum(pmf * np.exp(1j * lam * ks)))
        # Dark-port factor at lambda_minus = 0 is exactly 1.
        assert exact == pytest.approx(fourier, abs=2e-3)

    def test_worst_case_placement_irrelevant(self):
        # Only the cosine sum enters, not which slots differ.
        s, bandwidth, nu = 1.0, 8.0, 0.01
        base = np.zeros(12)
        a = base.copy()
        a[:3] = np.pi
        b = base.copy()
        b[-3:] = np.pi
        za = char_fn_exact(a, s, bandwidth, nu, 0.4, -0.9)
        zb = char_fn_exact(b, s, bandwidth, nu, 0.4, -0.9)
        assert za == pytest.approx(zb, rel=1e-12)

    @given(
        st.floats(min_value=-1.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=20.0),
        st.floats(min_value=-math.pi, max_value=math.pi),
        st.floats(min_value=-math.pi, max_value=math.pi),
    )
    @settings(max_examples=50, deadline=None)
    def test_approx_modulus_bounded(self, v, mu, lp, lm):
        assert abs(char_fn_approx(v, mu, lp, lm)) <= 1.0 + 1e-12

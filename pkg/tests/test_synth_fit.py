import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dissipspec import (
    Band,
    CanonicalParams,
    EnvelopeGrid,
    FiniteSignalModel,
    ParameterError,
    SpectrumSamples,
    estimate_psd,
    fit_spectrum,
    initial_guess,
    instantaneous_power,
    loglog_slope,
    lognormal_factors,
    psd_finite,
    psd_infinite,
    synthesize_grid,
    uniform_times,
)

UNIT = FiniteSignalModel.from_values(1.0, 1.0, 1.0, 1.0)
FIT_FREQS = np.geomspace(1e-3, 1e2, 50)


def canonical_samples(a, b, y, freqs=FIT_FREQS, noise=0.0, seed=0):
    p = CanonicalParams(a, b, y).evaluate(freqs)
    return SpectrumSamples(freqs, p * lognormal_factors(p.shape, noise, seed))


class TestGrid:
    def test_noise_free_matches_closed_form(self):
        freqs = np.geomspace(0.1, 10, 7)
        times = uniform_times(1.0, 50)
        grid = synthesize_grid(UNIT, freqs, times)
        expected = instantaneous_power(UNIT.params, freqs[:, None], times[None, :])
        np.testing.assert_allclose(grid.power, expected, rtol=1e-15)

    def test_seeded_determinism(self):
        args = (UNIT, np.geomspace(0.1, 10, 5), uniform_times(1.0, 30), 0.1, 7)
        a, b = synthesize_grid(*args), synthesize_grid(*args)
        assert a.power.tobytes() == b.power.tobytes()
        assert a.seed == 7 and a.noise_level == 0.1

    def test_different_seeds_differ(self):
        freqs, times = np.geomspace(0.1, 10, 5), uniform_times(1.0, 30)
        a = synthesize_grid(UNIT, freqs, times, 0.1, 1)
        b = synthesize_grid(UNIT, freqs, times, 0.1, 2)
        assert not np.array_equal(a.power, b.power)

    def test_noise_log_std(self):
        freqs = np.geomspace(0.1, 10, 64)
        times = uniform_times(1.0, 1023)
        grid = synthesize_grid(UNIT, freqs, times, 0.01, 42)
        clean = synthesize_grid(UNIT, freqs, times)
        log_std = np.log(grid.power / clean.power).std(ddof=1)
        assert abs(log_std - 0.01) <= 0.2 * 0.01

    @pytest.mark.parametrize("freqs, times", [
        ([1.0, 1.0], [0.0, 1.0]),
        ([0.0, 1.0], [0.0, 1.0]),
        ([2.0, 1.0], [0.0, 1.0]),
        ([1.0], [0.1, 1.0]),
        ([1.0], [0.0, 0.9]),
        ([1.0], [0.0]),
        ([1.0], [0.0, 0.5, 0.5, 1.0]),
        ([math.nan], [0.0, 1.0]),
    ])
    def test_invalid_grids(self, freqs, times):
        with pytest.raises(ParameterError):
            synthesize_grid(UNIT, freqs, times)

    def test_negative_noise(self):
        with pytest.raises(ParameterError):
            synthesize_grid(UNIT, [1.0], [0.0, 1.0], -0.1)

    def test_grid_record_validates_shape(self):
        with pytest.raises(ParameterError):
            EnvelopeGrid(np.array([1.0, 2.0]), np.array([0.0, 1.0]), np.ones((2, 3)))
        with pytest.raises(ParameterError):
            EnvelopeGrid(np.array([1.0]), np.array([0.0, 1.0]), -np.ones((1, 2)))


class TestEstimate:
    def test_fine_grid_matches_closed_form(self):
        freqs = np.geomspace(1e-3, 10.0, 30)
        grid = synthesize_grid(UNIT, freqs, uniform_times(1.0, 2**14))
        est = estimate_psd(grid)
        np.testing.assert_allclose(est.powers, psd_finite(UNIT, freqs), rtol=1e-6)

    def test_two_point_overestimates(self):
        freqs = np.array([0.5, 1.0, 3.0])
        grid = synthesize_grid(UNIT, freqs, np.array([0.0, 1.0]))
        assert np.all(estimate_psd(grid).powers >= psd_finite(UNIT, freqs))

    def test_constant_power_exact(self):
        times = np.sort(np.random.default_rng(3).random(40))
        times = np.concatenate(([0.0], times, [2.5]))
        grid = EnvelopeGrid(np.array([1.0, 2.0]), times, np.full((2, times.size), 1.75))
        assert np.all(estimate_psd(grid).powers == pytest.approx(1.75 * 2.5, rel=1e-15))

    @given(y=st.floats(0, 2), f=st.floats(0.1, 3))
    def test_second_order_refinement(self, y, f):
        m = FiniteSignalModel.from_values(1.0, 1.0, y, 1.0)
        exact = psd_finite(m, f)
        errs = []
        for n in (64, 128):
            grid = synthesize_grid(m, np.array([f]), uniform_times(1.0, n))
            errs.append(abs(estimate_psd(grid).powers[0] - exact))
        assert errs[0] / errs[1] == pytest.approx(4.0, abs=0.3)


class TestSlope:
    def test_pure_power_law(self):
        p = FiniteSignalModel.from_values(1.0, 2.0, 1.2, 1.0).params
        f = np.geomspace(0.5, 20, 40)
        s = SpectrumSamples(f, psd_infinite(p, f))
        assert loglog_slope(s, Band(1, 10)) == pytest.approx(-1.2, abs=1e-6)

    def test_flat(self):
        m = FiniteSignalModel.from_values(1.0, 2.0, 0.0, 1.0)
        f = np.geomspace(0.5, 20, 40)
        assert loglog_slope(SpectrumSamples(f, psd_finite(m, f)), Band(1, 10)) == pytest.approx(
            0.0, abs=1e-12)

    def test_plateau(self):
        m = FiniteSignalModel.from_values(1.0, 1.0, 1.5, 2.0)
        b = m.alpha0 * m.duration
        f_hi = (1e-4 / b) ** (1 / m.y)
        f = np.geomspace(f_hi / 100, f_hi, 30)
        assert abs(loglog_slope(SpectrumSamples(f, psd_finite(m, f)), Band(0, f_hi))) <= 1e-3

    @given(y=st.floats(0.3, 2), b=st.floats(0.5, 20))
    def test_crossover(self, y, b):
        m = CanonicalParams(1.0, b, y).to_model(1.0)
        corner = b ** (-1 / y)
        f = np.geomspace(corner * 1e-4, corner * 1e4, 400)
        s = SpectrumSamples(f, psd_finite(m, f))
        low = loglog_slope(s, Band(corner * 1e-4, corner * 1e-2))
        high = loglog_slope(s, Band(corner * 1e2, corner * 1e4))
        assert abs(low) <= 0.05
        assert abs(high + y) <= 0.05

    def test_too_few_points(self):
        s = SpectrumSamples(np.array([1.0, 5.0]), np.array([1.0, 0.5]))
        with pytest.raises(ParameterError):
            loglog_slope(s, Band(0.5, 2))


class TestCanonical:
    @given(i0=st.floats(0.1, 10), alpha0=st.floats(0.1, 10), y=st.floats(0, 2),
           duration=st.floats(0.1, 10), k=st.floats(0.2, 5))
    def test_identifiability(self, i0, alpha0, y, duration, k):
        # scale alpha0 up and duration down by k, i0 up by k: A and B unchanged
        a = FiniteSignalModel.from_values(i0, alpha0, y, duration)
        b = FiniteSignalModel.from_values(i0 * k, alpha0 * k, y, duration / k)
        ca, cb = CanonicalParams.from_model(a), CanonicalParams.from_model(b)
        assert ca.A == pytest.approx(cb.A, rel=1e-15)
        assert ca.B == pytest.approx(cb.B, rel=1e-15)
        f = np.geomspace(1e-3, 1e3, 40)
        np.testing.assert_allclose(psd_finite(a, f), psd_finite(b, f), rtol=1e-14)
        np.testing.assert_allclose(ca.evaluate(f), psd_finite(a, f), rtol=1e-13)

    def test_plateau_is_i0_t(self):
        m = FiniteSignalModel.from_values(3.0, 0.5, 1.0, 4.0)
        assert CanonicalParams.from_model(m).plateau == pytest.approx(12.0)

    def test_round_trip_model(self):
        c = CanonicalParams(2.5, 2.0, 1.2)
        m = c.to_model(5.0)
        assert (m.i0, m.alpha0) == pytest.approx((1.0, 0.4))

    @pytest.mark.parametrize("kwargs", [dict(A=0, B=1, y=1), dict(A=1, B=-1, y=1),
                                        dict(A=1, B=1, y=2.5)])
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            CanonicalParams(**kwargs)


class TestFit:
    def test_exact_recovery(self):
        res = fit_spectrum(canonical_samples(2.0, 5.0, 1.2))
        assert res.converged
        assert res.residual < 1e-10
        got = (res.params.A, res.params.B, res.params.y)
        np.testing.assert_allclose(got, (2.0, 5.0, 1.2), rtol=1e-6)

    def test_flat_boundary(self):
        res = fit_spectrum(canonical_samples(2.0, 5.0, 0.0))
        assert res.converged
        assert abs(res.params.y) <= 1e-6

    def test_upper_boundary(self):
        res = fit_spectrum(canonical_samples(1.0, 3.0, 2.0))
        assert res.converged
        assert res.params.y == pytest.approx(2.0, abs=1e-6)

    @pytest.mark.parametrize("seed", range(10))
    def test_noisy_recovery(self, seed):
        res = fit_spectrum(canonical_samples(2.0, 5.0, 1.2, noise=0.01, seed=seed))
        assert res.converged
        got = np.array([res.params.A, res.params.B, res.params.y])
        assert np.all(np.abs(got / [2.0, 5.0, 1.2] - 1) <= 0.05)

    @given(a=st.floats(0.1, 10), b=st.floats(0.1, 50), y=st.floats(0.2, 2))
    def test_idempotent(self, a, b, y):
        res = fit_spectrum(canonical_samples(a, b, y))
        assert res.converged
        assert res.residual < 1e-10
        assert res.params.plateau == pytest.approx(a * b, rel=1e-8)

    def test_deterministic(self):
        s = canonical_samples(2.0, 5.0, 1.2, noise=0.05, seed=3)
        assert fit_spectrum(s) == fit_spectrum(s)

    def test_explicit_init(self):
        res = fit_spectrum(canonical_samples(2.0, 5.0, 1.2), init=CanonicalParams(1.0, 1.0, 1.0))
        assert res.converged
        assert res.params.y == pytest.approx(1.2, rel=1e-6)

    def test_iteration_budget_reports_unconverged(self):
        res = fit_spectrum(canonical_samples(2.0, 5.0, 1.2), init=CanonicalParams(50.0, 0.01, 0.1),
                           max_iter=2)
        assert not res.converged
        assert res.iterations == 2

    def test_initial_guess_near_truth(self):
        guess = initial_guess(canonical_samples(2.0, 5.0, 1.2))
        assert guess.y == pytest.approx(1.2, rel=1e-3)
        assert guess.A == pytest.approx(2.0, rel=1e-2)
        assert guess.B == pytest.approx(5.0, rel=5e-2)

    def test_needs_three_samples(self):
        with pytest.raises(ParameterError):
            fit_spectrum(SpectrumSamples(np.array([1.0, 2.0]), np.array([1.0, 0.5])))

    def test_needs_positive_powers(self):
        with pytest.raises(ParameterError):
            fit_spectrum(SpectrumSamples(np.array([1.0, 2.0, 3.0]), np.array([1.0, 0.0, 0.5])))

    def test_end_to_end_from_grid(self):
        m = FiniteSignalModel.from_values(1.0, 0.4, 1.2, 5.0)
        grid = synthesize_grid(m, np.geomspace(1e-3, 10, 40), uniform_times(5.0, 2**16))
        res = fit_spectrum(estimate_psd(grid))
        got = (res.params.A, res.params.B, res.params.y)
        np.testing.assert_allclose(got, (2.5, 2.0, 1.2), rtol=1e-4)

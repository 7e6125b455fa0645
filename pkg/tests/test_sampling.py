import numpy as np
import pytest

from pickands.errors import DomainError, NonPositiveInput, ParameterError
from pickands.models import AsymmetricLogistic, Independence, SymmetricLogistic
from pickands.sampling import (
    RngStream,
    SampleY,
    draw_sample,
    sample_asymlog_frechet,
    sample_from_csv,
    sample_positive_stable,
    sample_symlog_frechet,
    sample_to_csv,
    symlog_frechet_transform,
    to_exponential_margins,
)


def ks_statistic_exp1(values: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance to the unit exponential distribution."""
    n = len(values)
    u = 1.0 - np.exp(-np.sort(values))
    i = np.arange(1, n + 1)
    return max((i / n - u).max(), (u - (i - 1) / n).max())


class TestPositiveStable:
    def test_alpha_one_is_degenerate(self):
        assert sample_positive_stable(1.0, 0.3, 2.0) == 1.0
        out = sample_positive_stable(1.0, np.array([0.1, 0.9]), np.array([1.0, 2.0]))
        np.testing.assert_array_equal(out, [1.0, 1.0])

    def test_hand_value_alpha_half(self):
        # a(0.5) = sin(pi/4) * sin(pi/4) / sin(pi/2)^2 = 1/2, S = (1/2 / 1)^1
        assert sample_positive_stable(0.5, 0.5, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            sample_positive_stable(0.0, 0.5, 1.0)
        with pytest.raises(DomainError):
            sample_positive_stable(1.5, 0.5, 1.0)
        with pytest.raises(DomainError):
            sample_positive_stable(0.5, 0.0, 1.0)
        with pytest.raises(DomainError):
            sample_positive_stable(0.5, 1.0, 1.0)
        with pytest.raises(DomainError):
            sample_positive_stable(0.5, 0.5, 0.0)

    def test_laplace_transform_monte_carlo(self):
        # E[exp(-t S)] = exp(-t^alpha); checked at t = 1 with a 3 sigma band
        rng = RngStream(2024, 0).generator()
        n = 1_000_000
        u = rng.random(n)
        u[u == 0] = 0.5
        e = rng.standard_exponential(n)
        e[e == 0] = 1.0
        s = sample_positive_stable(0.5, u, e)
        probe = np.exp(-s)
        target = np.exp(-(1.0**0.5))
        band = 3.0 * probe.std(ddof=1) / np.sqrt(n)
        assert abs(probe.mean() - target) <= band


class TestSymmetricLogistic:
    def test_transform_hand_value(self):
        # r=2, S=0.5 forced, E=(0.5, 2) -> Z = (1, 0.5)
        z = symlog_frechet_transform(np.array(0.5), np.array([0.5, 2.0]), 2.0)
        np.testing.assert_allclose(z, [1.0, 0.5], rtol=1e-15)

    def test_r_one_reduces_to_reciprocal_exponentials(self):
        rng1 = RngStream(5, 0).generator()
        z = sample_symlog_frechet(1.0, 3, rng1, size=100)
        # replay the draw order: stable uniform, stable exponential, then E
        rng2 = RngStream(5, 0).generator()
        rng2.random(100)
        rng2.standard_exponential(100)
        e = rng2.standard_exponential((100, 3))
        np.testing.assert_array_equal(z, 1.0 / e)

    def test_joint_cdf_monte_carlo(self):
        # P(Z <= (1,1,1)) = exp(-ell(1,1,1)) = exp(-3^(1/3)) for r = 3
        rng = RngStream(77, 0).generator()
        n = 1_000_000
        z = sample_symlog_frechet(3.0, 3, rng, size=n)
        hits = np.all(z <= 1.0, axis=1)
        target = np.exp(-(3.0 ** (1.0 / 3.0)))
        band = 3.0 * np.sqrt(target * (1 - target) / n)
        assert abs(hits.mean() - target) <= band

    def test_invalid_r(self):
        with pytest.raises(ParameterError):
            sample_symlog_frechet(0.5, 3, RngStream(1).generator())


class TestAsymmetricLogistic:
    def test_symmetric_subcase_bitwise(self):
        # (r, 0, 0, 1) consumes the same draws as the pure symmetric sampler
        za = sample_asymlog_frechet(3.0, 0.0, 0.0, 1.0, RngStream(9, 3).generator(), size=50)
        zs = sample_symlog_frechet(3.0, 3, RngStream(9, 3).generator(), size=50)
        np.testing.assert_array_equal(za, zs)

    def test_total_singleton_mass_is_independence(self):
        z = sample_asymlog_frechet(2.0, 0.0, 0.0, 0.0, RngStream(10, 0).generator(), size=200)
        rng2 = RngStream(10, 0).generator()
        e = rng2.standard_exponential((200, 3))
        np.testing.assert_array_equal(z, 1.0 / e)

    def test_stable_tail_monte_carlo(self):
        # -log P(Z <= (1,1,1)) = ell(1,1,1) of the paper's asymmetric model
        model = AsymmetricLogistic(r=6.0, theta=0.6, phi=0.3, psi=0.0)
        target_ell = model.stable_tail([1.0, 1.0, 1.0])
        rng = RngStream(123, 0).generator()
        n = 1_000_000
        z = sample_asymlog_frechet(6.0, 0.6, 0.3, 0.0, rng, size=n)
        phat = np.all(z <= 1.0, axis=1).mean()
        p_target = np.exp(-target_ell)
        band = 3.0 * np.sqrt(p_target * (1 - p_target) / n)
        assert abs(phat - p_target) <= band

    def test_parameter_validation(self):
        with pytest.raises(ParameterError):
            sample_asymlog_frechet(2.0, 0.7, 0.4, 0.0, RngStream(1).generator())


class TestExponentialMargins:
    def test_reciprocal(self):
        np.testing.assert_allclose(
            to_exponential_margins([1.0, 2.0, 4.0]), [1.0, 0.5, 0.25], rtol=0
        )

    def test_infinite_frechet_clamped(self):
        y = to_exponential_margins(np.array([np.inf, 1.0]))
        assert y[0] == 1e-300
        assert y[0] > 0.0

    def test_non_positive_rejected(self):
        with pytest.raises(NonPositiveInput):
            to_exponential_margins([0.0, 1.0])
        with pytest.raises(NonPositiveInput):
            to_exponential_margins([-1.0, 1.0])

    def test_margin_mean_monte_carlo(self):
        rng = RngStream(55, 0).generator()
        z = sample_symlog_frechet(3.0, 3, rng, size=1_000_000)
        y = to_exponential_margins(z)
        band = 3.0 / np.sqrt(len(y))  # Exp(1) has unit standard deviation
        assert abs(y[:, 0].mean() - 1.0) <= band


class TestDrawSample:
    def test_determinism(self):
        model = SymmetricLogistic(r=3.0)
        s1 = draw_sample(model, 50, seed=42)
        s2 = draw_sample(model, 50, seed=42)
        np.testing.assert_array_equal(s1.data, s2.data)
        s3 = draw_sample(model, 50, seed=42, stream_id=1)
        assert not np.array_equal(s1.data, s3.data)

    def test_independence_correlation(self):
        sample = draw_sample(Independence(3), 100_000, seed=7)
        corr = np.corrcoef(sample.data[:, 0], sample.data[:, 1])[0, 1]
        assert abs(corr) <= 0.01

    def test_row_minimum_mean(self):
        # min_j Y_j is exponential with mean 1 / (3 A(centroid)) = 9^(1/3) / 3
        model = SymmetricLogistic(r=3.0)
        sample = draw_sample(model, 200_000, seed=11)
        m = sample.data.min(axis=1)
        target = 9.0 ** (1.0 / 3.0) / 3.0
        band = 3.0 * target / np.sqrt(len(m))  # Exp(rate) has sd = mean
        assert abs(m.mean() - target) <= band

    def test_margins_pass_ks(self):
        # KS statistic <= 1.95 / sqrt(n) (about the 1 percent level)
        for model in (
            SymmetricLogistic(r=3.0),
            AsymmetricLogistic(r=6.0, theta=0.6, phi=0.3, psi=0.0),
        ):
            sample = draw_sample(model, 100_000, seed=31)
            for j in range(3):
                assert ks_statistic_exp1(sample.data[:, j]) <= 1.95 / np.sqrt(sample.n)

    def test_joint_survivor_matches_stable_tail(self):
        # P(Y > y) = exp(-ell(y)) at a non-trivial threshold
        model = AsymmetricLogistic(r=6.0, theta=0.6, phi=0.3, psi=0.0)
        sample = draw_sample(model, 500_000, seed=99)
        y0 = np.array([0.5, 0.8, 1.2])
        phat = np.all(sample.data > y0, axis=1).mean()
        target = np.exp(-model.stable_tail(y0))
        band = 3.0 * np.sqrt(target * (1 - target) / sample.n)
        assert abs(phat - target) <= band

    def test_invalid_inputs(self):
        with pytest.raises(ParameterError):
            draw_sample(SymmetricLogistic(r=2.0), 0, seed=1)
        with pytest.raises(ParameterError):
            RngStream(-1, 0)

    def test_sample_validation(self):
        with pytest.raises(NonPositiveInput):
            SampleY(np.array([[1.0, -1.0]]), "bad", 0)


class TestCsvRoundTrip:
    def test_round_trip_preserves_doubles(self):
        sample = draw_sample(SymmetricLogistic(r=3.0), 25, seed=13)
        text = sample_to_csv(sample)
        assert text.splitlines()[0] == "y1,y2,y3"
        back = sample_from_csv(text)
        np.testing.assert_array_equal(back.data, sample.data)

    def test_rejects_garbage(self):
        with pytest.raises(NonPositiveInput):
            sample_from_csv("y1,y2\n")
        with pytest.raises(NonPositiveInput):
            sample_from_csv("a,b\n1,2\n")

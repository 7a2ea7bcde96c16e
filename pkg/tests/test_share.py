import math

import numpy as np
import pytest
from scipy.integrate import quad

import feegame as fg
from feegame.share import Mechanism, ShareModel


class TestRfaShare:
    def test_full_collision_gives_one_over_n(self):
        assert fg.rfa_share(1.0, 10) == pytest.approx(0.1, abs=1e-15)

    def test_half_coverage_two_validators(self):
        assert fg.rfa_share(0.5, 2) == pytest.approx(0.75, abs=1e-15)

    def test_direct_evaluation(self):
        assert fg.rfa_share(0.1, 10) == pytest.approx(0.6513215599, abs=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            fg.rfa_share(0.0, 5)
        with pytest.raises(ValueError):
            fg.rfa_share(1.2, 5)
        with pytest.raises(ValueError):
            fg.rfa_share(0.5, 1)

    def test_tiny_p_series_branch(self):
        # the series branch below the cutoff must match the exact sum form
        for p in (1e-12, 1e-9, 0.999e-8, 1.001e-8):
            assert fg.rfa_share(p, 12) == pytest.approx(
                fg.rfa_share_sum_form(p, 12), abs=1e-13
            )
        assert fg.rfa_share(1e-9, 12) == pytest.approx(1.0, abs=1e-7)


class TestSumForm:
    def test_only_last_term_survives_at_one(self):
        assert fg.rfa_share_sum_form(1.0, 10) == pytest.approx(0.1, abs=1e-15)

    def test_hand_computed(self):
        # 1 * 0.5 + 0.5 * 0.5
        assert fg.rfa_share_sum_form(0.5, 2) == pytest.approx(0.75, abs=1e-15)

    def test_identity_with_closed_form_on_grid(self):
        for n in range(2, 51):
            for p in np.arange(0.01, 1.0001, 0.01):
                p = float(p)
                assert abs(fg.rfa_share(p, n) - fg.rfa_share_sum_form(p, n)) <= 1e-12


class TestAlphaHat:
    def test_limit_at_zero(self):
        assert fg.alpha_hat(0.0, 10) == 1.0

    def test_matches_rfa_share_inside(self):
        assert fg.alpha_hat(1.0, 10) == pytest.approx(0.1, abs=1e-15)
        assert fg.alpha_hat(0.5, 2) == pytest.approx(0.75, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            fg.alpha_hat(-0.1, 5)
        with pytest.raises(ValueError):
            fg.alpha_hat(1.1, 5)


class TestCfsShare:
    def test_examples(self):
        assert fg.cfs_share(0.0, 10) == pytest.approx(0.1, abs=1e-15)
        assert fg.cfs_share(1.0, 5) == 0.0
        assert fg.cfs_share(0.5, 3) == pytest.approx(1.0 / 12.0, abs=1e-12)

    def test_inverse_examples(self):
        assert fg.cfs_share_inverse(0.1, 10) == pytest.approx(0.0, abs=1e-12)
        assert fg.cfs_share_inverse(0.0, 5) == 1.0
        assert fg.cfs_share_inverse(1.0 / 12.0, 3) == pytest.approx(0.5, abs=1e-12)

    def test_inverse_domain(self):
        with pytest.raises(ValueError):
            fg.cfs_share_inverse(-0.01, 5)
        with pytest.raises(ValueError):
            fg.cfs_share_inverse(0.21, 5)


class TestRfaInverse:
    def test_endpoints(self):
        assert fg.rfa_share_inverse(1.0, 10) == 0.0
        assert fg.rfa_share_inverse(0.1, 10) == 1.0

    def test_inverts_hand_value(self):
        assert fg.rfa_share_inverse(0.75, 2) == pytest.approx(0.5, abs=1e-10)

    def test_domain(self):
        with pytest.raises(ValueError):
            fg.rfa_share_inverse(0.05, 10)
        with pytest.raises(ValueError):
            fg.rfa_share_inverse(1.01, 10)


@pytest.mark.parametrize("n", [2, 3, 5, 10, 20, 50])
class TestShapeProperties:
    def test_strict_monotonicity(self, n):
        grid = np.linspace(0.001, 1.0, 400)
        rfa = fg.rfa_share(grid, n)
        cfs = fg.cfs_share(grid, n)
        assert np.all(np.diff(rfa) < 0)
        assert np.all(np.diff(cfs) < 0)

    def test_bounds(self, n):
        grid = np.linspace(1e-9, 1.0, 300)
        rfa = fg.rfa_share(grid, n)
        cfs = fg.cfs_share(grid, n)
        assert np.all(rfa >= 1.0 / n - 1e-15) and np.all(rfa <= 1.0 + 1e-15)
        assert np.all(cfs >= 0.0) and np.all(cfs <= 1.0 / n + 1e-15)

    def test_round_trips(self, n):
        for x in np.linspace(0.0, 1.0 / n, 30):
            x = float(x)
            assert fg.cfs_share(fg.cfs_share_inverse(x, n), n) == pytest.approx(x, abs=1e-10)
        for x in np.linspace(1.0 / n, 1.0, 30):
            x = float(x)
            p = fg.rfa_share_inverse(x, n)
            assert fg.alpha_hat(p, n) == pytest.approx(x, abs=1e-10)


class TestRfaPotential:
    def test_empty_integral(self):
        assert fg.rfa_potential(0.0, 7) == 0.0

    def test_hand_value(self):
        # integral of (1 - q/2) from 0 to 0.5
        assert fg.rfa_potential(0.5, 2) == pytest.approx(0.4375, abs=1e-14)

    def test_harmonic_value_at_one(self):
        for n in (2, 7, 33, 120):
            h_n = math.fsum(1.0 / k for k in range(1, n + 1))
            assert fg.rfa_potential(1.0, n) == pytest.approx(h_n / n, abs=1e-13)

    def test_matches_quadrature_of_alpha_hat(self):
        # independent numeric integration, including n past any expansion regime
        for n in (2, 10, 59, 61, 100):
            for p in (0.05, 0.4, 0.85, 1.0):
                ref, _ = quad(lambda t: fg.alpha_hat(t, n), 0.0, p, epsabs=1e-12, limit=200)
                assert fg.rfa_potential(p, n) == pytest.approx(ref, abs=1e-10)

    def test_derivative_is_alpha_hat(self):
        h = 1e-6
        for n in (2, 5, 17, 40):
            for p in np.linspace(0.05, 0.95, 19):
                p = float(p)
                fd = (fg.rfa_potential(p + h, n) - fg.rfa_potential(p - h, n)) / (2 * h)
                assert fd == pytest.approx(fg.alpha_hat(p, n), abs=1e-6)

    def test_monotone_and_concave(self):
        grid = np.linspace(0.0, 1.0, 200)
        for n in (2, 9, 30):
            vals = fg.rfa_potential(grid, n)
            assert np.all(np.diff(vals) >= 0)
            assert np.all(np.diff(vals, 2) <= 1e-12)


class TestShareModel:
    def test_single_validator_rejected(self):
        with pytest.raises(ValueError):
            ShareModel(Mechanism.RFA, 1)

    def test_clamped_inverse_rfa(self):
        model = ShareModel(Mechanism.RFA, 2)
        assert model.clamped_inverse(1.5) == 0.0
        assert model.clamped_inverse(1.0) == 0.0
        assert model.clamped_inverse(0.3) == 1.0
        assert model.clamped_inverse(0.75) == pytest.approx(0.5, abs=1e-10)

    def test_clamped_inverse_cfs(self):
        model = ShareModel(Mechanism.CFS, 2)
        assert model.clamped_inverse(0.6) == 0.0
        assert model.clamped_inverse(0.25) == pytest.approx(0.5, abs=1e-12)
        assert model.clamped_inverse(0.0) == 1.0

    def test_share_dispatch(self):
        rfa = ShareModel(Mechanism.RFA, 4)
        cfs = ShareModel(Mechanism.CFS, 4)
        assert rfa.share(0.0) == rfa.share_at_zero == 1.0
        assert cfs.share(0.0) == cfs.share_at_zero == 0.25
        assert rfa.share(1.0) == rfa.share_at_one == 0.25
        assert cfs.share(1.0) == cfs.share_at_one == 0.0

import numpy as np
import pytest

from costsense.acog import (
    AdaptiveCSGD,
    covariance_update,
    covariance_update_diag,
    mean_update,
)
from costsense.baselines import CostSensitiveGD
from costsense.losses import LossVariant


def random_stream(rng, d, T, one_hot=False):
    stream = []
    for _ in range(T):
        if one_hot:
            pos = np.array([rng.integers(0, d)])
            vals = np.array([rng.standard_normal()])
        else:
            nnz = rng.integers(1, d + 1)
            pos = np.sort(rng.choice(d, size=nnz, replace=False))
            vals = rng.standard_normal(nnz)
        y = 1 if rng.random() < 0.4 else -1
        stream.append((pos, vals, y))
    return stream


class TestInit:
    def test_full_starts_at_identity(self):
        m = AdaptiveCSGD(3, eta=1.0, gamma=1.0)
        np.testing.assert_array_equal(m.sigma, np.eye(3))
        np.testing.assert_array_equal(m.mu, np.zeros(3))

    def test_diag_starts_at_ones(self):
        m = AdaptiveCSGD(3, eta=1.0, gamma=1.0, diagonal=True)
        np.testing.assert_array_equal(m.sigma, np.ones(3))

    def test_degenerate_parameters_rejected(self):
        with pytest.raises(ValueError):
            AdaptiveCSGD(3, eta=0.0, gamma=1.0)
        with pytest.raises(ValueError):
            AdaptiveCSGD(3, eta=1.0, gamma=0.0)
        with pytest.raises(ValueError):
            AdaptiveCSGD(3, eta=1.0, gamma=1.0, update_rule="sideways")


class TestCovarianceUpdate:
    def test_axis_vector_halves_entry(self):
        # oracle: (I + x x^T)^{-1} = diag(1/2, 1) for x = e_1, gamma = 1
        out = covariance_update(np.eye(2), np.array([1.0, 0.0]), gamma=1.0)
        np.testing.assert_allclose(out, np.diag([0.5, 1.0]), atol=1e-15)

    def test_scalar_case(self):
        # oracle: sigma^{-1} = 2, add 1 -> 3, invert -> 1/3
        out = covariance_update(np.array([[0.5]]), np.array([1.0]), gamma=1.0)
        np.testing.assert_allclose(out, [[1.0 / 3.0]], atol=1e-15)

    def test_shrinks_along_any_direction(self):
        rng = np.random.default_rng(6)
        sigma = np.eye(4)
        for _ in range(30):
            x = rng.standard_normal(4)
            before = float(x @ sigma @ x)
            sigma = covariance_update(sigma, x, gamma=0.7)
            assert float(x @ sigma @ x) < before

    def test_matches_direct_inverse_oracle(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            d = int(rng.integers(1, 11))
            gamma = float(rng.uniform(0.2, 5.0))
            sigma = np.eye(d)
            inv_acc = np.eye(d)
            for _ in range(rng.integers(1, 200)):
                x = rng.standard_normal(d)
                if rng.random() < 0.35:  # loss-inactive round: no update
                    continue
                sigma = covariance_update(sigma, x, gamma)
                inv_acc += np.outer(x, x) / gamma
                np.testing.assert_allclose(
                    sigma, np.linalg.inv(inv_acc), atol=1e-8
                )

    def test_diag_matches_full_on_one_hot(self):
        rng = np.random.default_rng(8)
        full = np.eye(5)
        diag = np.ones(5)
        for _ in range(100):
            j = int(rng.integers(0, 5))
            v = float(rng.standard_normal())
            x = np.zeros(5)
            x[j] = v
            full = covariance_update(full, x, gamma=1.3)
            diag = covariance_update_diag(
                diag, np.array([j]), np.array([v]), gamma=1.3
            )
            np.testing.assert_allclose(np.diag(full), diag, atol=1e-12)
            assert np.abs(full - np.diag(np.diag(full))).max() < 1e-15


class TestMeanUpdate:
    def test_matrix_vector_product(self):
        mu = mean_update(
            np.zeros(2), np.diag([0.5, 1.0]), np.array([-1.0, 0.0]), eta=0.1
        )
        np.testing.assert_allclose(mu, [0.05, 0.0])

    def test_zero_gradient_is_identity(self):
        mu = mean_update(np.array([3.0, -2.0]), np.eye(2), np.zeros(2), eta=5.0)
        np.testing.assert_allclose(mu, [3.0, -2.0])

    def test_scalar_case(self):
        mu = mean_update(np.array([0.0]), np.array([[0.5]]), np.array([-2.0]), eta=1.0)
        np.testing.assert_allclose(mu, [1.0])

    def test_diagonal_sigma_accepted(self):
        mu = mean_update(np.zeros(2), np.array([0.5, 1.0]), np.array([-1.0, 0.0]), 0.1)
        np.testing.assert_allclose(mu, [0.05, 0.0])


class TestStep:
    def test_fresh_model_composition(self):
        m = AdaptiveCSGD(2, eta=1.0, gamma=1.0, variant=LossVariant.I)
        l = m.update(np.array([0]), np.array([1.0]), y=1, rho=3.0)
        assert l == pytest.approx(3.0)
        np.testing.assert_allclose(m.sigma, np.diag([0.5, 1.0]), atol=1e-15)
        np.testing.assert_allclose(m.mu, [0.5, 0.0], atol=1e-15)

    def test_zero_loss_leaves_state_bitwise(self):
        m = AdaptiveCSGD(2, eta=1.0, gamma=1.0, variant=LossVariant.I)
        m.mu[0] = 10.0
        sigma_before = m.sigma.copy()
        mu_before = m.mu.copy()
        l = m.update(np.array([0]), np.array([1.0]), y=1, rho=3.0)
        assert l == 0.0
        assert np.array_equal(m.sigma, sigma_before)
        assert np.array_equal(m.mu, mu_before)

    def test_full_equals_diag_on_one_hot_stream(self):
        rng = np.random.default_rng(9)
        full = AdaptiveCSGD(6, eta=0.8, gamma=1.0, variant=LossVariant.II)
        diag = AdaptiveCSGD(6, eta=0.8, gamma=1.0, variant=LossVariant.II, diagonal=True)
        for pos, vals, y in random_stream(rng, 6, 300, one_hot=True):
            full.update(pos, vals, y, rho=2.0)
            diag.update(pos, vals, y, rho=2.0)
            np.testing.assert_allclose(full.mu, diag.mu, atol=1e-12)
            np.testing.assert_allclose(np.diag(full.sigma), diag.sigma, atol=1e-12)

    def test_full_and_diag_differ_on_correlated_data(self):
        # correlated samples build off-diagonal covariance mass the diagonal
        # mode cannot represent; the trajectories must separate
        rng = np.random.default_rng(14)
        full = AdaptiveCSGD(4, eta=1.0, gamma=1.0, variant=LossVariant.I)
        diag = AdaptiveCSGD(4, eta=1.0, gamma=1.0, variant=LossVariant.I, diagonal=True)
        pos = np.arange(4)
        for _ in range(50):
            vals = rng.standard_normal(2) @ np.array(
                [[1.0, 0.8, 0.0, 0.3], [0.0, 0.5, 1.0, 0.7]]
            )
            y = 1 if rng.random() < 0.4 else -1
            full.update(pos, vals, y, rho=2.0)
            diag.update(pos, vals, y, rho=2.0)
        assert np.abs(full.mu - diag.mu).max() > 1e-3
        assert np.abs(full.sigma - np.diag(np.diag(full.sigma))).max() > 1e-3

    def test_old_sigma_rule_differs_and_uses_stale_covariance(self):
        new = AdaptiveCSGD(2, eta=1.0, gamma=1.0, update_rule="new")
        old = AdaptiveCSGD(2, eta=1.0, gamma=1.0, update_rule="old")
        x, y = np.array([0]), 1
        new.update(x, np.array([1.0]), y, rho=3.0)
        old.update(x, np.array([1.0]), y, rho=3.0)
        # stale rule preconditions with the identity: mu step 1.0, not 0.5
        np.testing.assert_allclose(old.mu, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(new.mu, [0.5, 0.0], atol=1e-15)
        # covariance ends up identical either way
        np.testing.assert_allclose(old.sigma, new.sigma, atol=1e-15)


class TestInvariants:
    def test_sigma_symmetric_and_eigenvalues_in_unit_interval(self):
        rng = np.random.default_rng(10)
        m = AdaptiveCSGD(8, eta=0.5, gamma=1.0, variant=LossVariant.I)
        for pos, vals, y in random_stream(rng, 8, 400):
            m.update(pos, vals, y, rho=2.0)
            assert np.abs(m.sigma - m.sigma.T).max() < 1e-10
            eig = np.linalg.eigvalsh(m.sigma)
            assert eig.min() > 0.0
            assert eig.max() <= 1.0 + 1e-12

    def test_trace_monotone_strict_on_active_rounds(self):
        rng = np.random.default_rng(11)
        m = AdaptiveCSGD(5, eta=0.5, gamma=1.0, variant=LossVariant.I)
        for pos, vals, y in random_stream(rng, 5, 300):
            before = np.trace(m.sigma)
            l = m.update(pos, vals, y, rho=2.0)
            after = np.trace(m.sigma)
            if l > 0:
                assert after < before
            else:
                assert after == before

    def test_gamma_to_infinity_degenerates_to_first_order(self):
        rng = np.random.default_rng(12)
        d = 10
        acog = AdaptiveCSGD(d, eta=0.3, gamma=1e12, variant=LossVariant.II)
        cog = CostSensitiveGD(d, eta=0.3, variant=LossVariant.II)
        for pos, vals, y in random_stream(rng, d, 1000):
            acog.update(pos, vals, y, rho=3.0)
            cog.update(pos, vals, y, rho=3.0)
            assert np.abs(acog.mu - cog.w).max() <= 1e-6

    def test_prediction_ignores_sigma(self):
        rng = np.random.default_rng(13)
        m = AdaptiveCSGD(4, eta=0.5, gamma=1.0)
        for pos, vals, y in random_stream(rng, 4, 50):
            m.update(pos, vals, y, rho=2.0)
        probe = random_stream(rng, 4, 40)
        before = [m.predict(p, v)[1] for p, v, _ in probe]
        m.sigma = 0.5 * np.eye(4)  # any positive-definite stand-in
        after = [m.predict(p, v)[1] for p, v, _ in probe]
        assert before == after

import numpy as np
import pytest
from scipy import stats

from rhomnk.copula import (
    CorrelationMatrix,
    copula_factor,
    sample_correlated_uniform,
    sample_correlated_uniform_many,
    validate,
)
from rhomnk.errors import InfeasibleCorrelation


class TestValidate:
    @pytest.mark.parametrize("m, rho", [(2, -0.9), (2, 1.0), (3, -0.4), (5, -0.2), (1, -5.0), (1, 3.0)])
    def test_feasible(self, m, rho):
        validate(CorrelationMatrix(m, rho))

    @pytest.mark.parametrize("m, rho", [(3, -0.7), (5, -0.25), (2, -1.0), (2, 1.01), (4, -1 / 3)])
    def test_infeasible(self, m, rho):
        with pytest.raises(InfeasibleCorrelation):
            validate(CorrelationMatrix(m, rho))

    def test_matrix_layout(self):
        c = CorrelationMatrix(3, 0.4).to_array()
        np.testing.assert_array_equal(np.diag(c), np.ones(3))
        assert np.all(c[~np.eye(3, dtype=bool)] == 0.4)


class TestSampling:
    def test_single_dimension(self):
        v = sample_correlated_uniform(CorrelationMatrix(1, 0.3), np.random.default_rng(0))
        assert v.shape == (1,)
        assert 0.0 <= v[0] < 1.0

    def test_perfect_correlation_gives_equal_coordinates(self):
        x = sample_correlated_uniform_many(CorrelationMatrix(3, 1.0), 1000, np.random.default_rng(1))
        assert np.all(x[:, 0] == x[:, 1])
        assert np.all(x[:, 1] == x[:, 2])

    def test_propagates_infeasible(self):
        with pytest.raises(InfeasibleCorrelation):
            sample_correlated_uniform(CorrelationMatrix(3, -0.6), np.random.default_rng(0))

    def test_values_in_half_open_unit_interval(self):
        x = sample_correlated_uniform_many(CorrelationMatrix(4, 0.2), 50_000, np.random.default_rng(2))
        assert x.min() >= 0.0 and x.max() < 1.0

    @pytest.mark.parametrize("rho", [-0.9, -0.4, 0.0, 0.4, 0.9])
    def test_pearson_correlation_targets_rho(self, rho):
        x = sample_correlated_uniform_many(CorrelationMatrix(2, rho), 100_000, np.random.default_rng(3))
        assert abs(np.corrcoef(x.T)[0, 1] - rho) <= 0.02

    @pytest.mark.parametrize("m, rho", [(2, -0.9), (3, 0.4), (5, -0.2)])
    def test_marginals_uniform(self, m, rho):
        rng = np.random.default_rng(0)
        x = sample_correlated_uniform_many(CorrelationMatrix(m, rho), 100_000, rng)
        for j in range(m):
            # p > 0.01 <=> statistic below the 1% critical value
            assert stats.kstest(x[:, j], "uniform").pvalue > 0.01

    def test_deterministic_for_equal_seeds(self):
        c = CorrelationMatrix(3, 0.2)
        a = sample_correlated_uniform_many(c, 100, np.random.default_rng(9))
        b = sample_correlated_uniform_many(c, 100, np.random.default_rng(9))
        np.testing.assert_array_equal(a, b)

    def test_block_equals_successive_draws(self):
        c = CorrelationMatrix(2, -0.4)
        block = sample_correlated_uniform_many(c, 20, np.random.default_rng(5))
        rng = np.random.default_rng(5)
        single = np.array([sample_correlated_uniform(c, rng) for _ in range(20)])
        np.testing.assert_array_equal(block, single)

    def test_boundary_matrix_still_factorises(self):
        # sine adjustment pushes the normal correlation below -1/4 here
        f = copula_factor(CorrelationMatrix(5, -0.245))
        r = f @ f.T
        np.testing.assert_allclose(np.diag(r), 1.0, atol=1e-12)
        assert np.all(np.linalg.eigvalsh(r) > 0)
        x = sample_correlated_uniform_many(CorrelationMatrix(5, -0.245), 100_000, np.random.default_rng(0))
        off = np.corrcoef(x.T)[~np.eye(5, dtype=bool)]
        assert np.all(off < -0.2)

from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tdslearn.core import LabeledDataset, SparsePolynomial, make_rng
from tdslearn.moments import UniformHypercube, enumerate_multi_indices
from tdslearn.regression import (
    RegressionProblem,
    fit_bounded_polynomial,
    projected_gradient,
    squared_loss,
    transfer_gap,
)


def cube(d):
    return np.array(list(product((-1.0, 1.0), repeat=d)))


def random_poly(rng, d, k, scale):
    alphas = enumerate_multi_indices(d, k)
    mask = rng.uniform(size=len(alphas)) < 0.6
    coefs = rng.uniform(-scale, scale, len(alphas)) * mask
    return SparsePolynomial(d, alphas, coefs, k)


def noisy_dataset(seed, n=200, d=2):
    rng = make_rng(seed)
    X = rng.standard_normal((n, d))
    y = np.where(X[:, 0] + 0.3 * X[:, 1] ** 2 + 0.5 * rng.standard_normal(n) >= 0, 1, -1)
    return LabeledDataset(X, y)


class TestSquaredLoss:
    def test_examples(self):
        S = LabeledDataset(np.array([[1.0, 0.0]]), np.array([-1]))
        x1 = SparsePolynomial.from_terms(2, {(1, 0): 1.0}, 1)
        assert squared_loss(x1, S) == 4
        zero = SparsePolynomial.from_terms(2, {}, 1)
        assert squared_loss(zero, S) == 1

    def test_duplicate_weighting(self):
        S = noisy_dataset(0, n=20)
        p = SparsePolynomial.from_terms(2, {(1, 0): 0.7, (0, 0): -0.1}, 1)
        r = (S.y[0] - p(S.X[:1])[0]) ** 2
        dup = LabeledDataset(np.vstack([S.X, S.X[:1]]), np.append(S.y, S.y[0]))
        assert squared_loss(p, dup) == pytest.approx((20 * squared_loss(p, S) + r) / 21, rel=1e-12)


class TestFit:
    def test_realizable_in_basis(self):
        X = cube(3)
        S = LabeledDataset(X, X[:, 0].astype(int))
        p = fit_bounded_polynomial(RegressionProblem(S, 1, 2.0, 0.01))
        assert squared_loss(p, S) < 1e-12
        np.testing.assert_allclose(p(X), X[:, 0], atol=1e-9)

    def test_constant_labels(self):
        S = LabeledDataset(cube(2), np.ones(4, dtype=int))
        p = fit_bounded_polynomial(RegressionProblem(S, 0, 2.0, 0.01))
        assert p.coefs[0] == pytest.approx(1.0)

    def test_conflicting_duplicate_against_grid_search(self):
        S = LabeledDataset(np.array([[1.0], [-1.0], [1.0]]), np.array([1, 1, -1]))
        p = fit_bounded_polynomial(RegressionProblem(S, 1, 2.0, 1e-6))
        grid = np.arange(-2000, 2001) / 1000
        a, b = np.meshgrid(grid, grid, indexing="ij")
        loss = ((1 - a - b) ** 2 + (1 - a + b) ** 2 + (-1 - a - b) ** 2) / 3
        i, j = np.unravel_index(np.argmin(loss), loss.shape)
        assert p.terms()[(0,)] == pytest.approx(grid[i], abs=1e-3)
        assert p.terms()[(1,)] == pytest.approx(grid[j], abs=1e-3)
        assert squared_loss(p, S) == pytest.approx(loss.min(), abs=1e-6)
        assert squared_loss(p, S) == pytest.approx(2 / 3)

    def test_box_binds(self):
        # unconstrained optimum y = 3 x1 lies outside the box
        X = np.linspace(-1, 1, 41).reshape(-1, 1)
        S = LabeledDataset(X, np.where(X[:, 0] >= 0, 1, -1))
        p = fit_bounded_polynomial(RegressionProblem(S, 3, 0.5, 1e-4))
        assert np.abs(p.coefs).max() <= 0.5

    @given(st.integers(0, 10_000), st.integers(0, 3), st.floats(0.05, 2.0))
    def test_box_and_zero_baseline(self, seed, k, B):
        S = noisy_dataset(seed, n=60)
        eps = 0.01
        p = fit_bounded_polynomial(RegressionProblem(S, k, B, eps))
        assert np.abs(p.coefs).max() <= B
        assert p.degree == k
        assert squared_loss(p, S) <= 1.0 + eps  # zero polynomial has loss 1 on +-1 labels

    def test_constrained_optimum_against_slsqp(self):
        from scipy.optimize import minimize

        S = noisy_dataset(4, n=300)
        alphas = enumerate_multi_indices(2, 2)
        B = 0.3
        p = fit_bounded_polynomial(RegressionProblem(S, 2, B, 1e-4))
        from tdslearn.core import monomials
        Phi = monomials(S.X, alphas)
        res = minimize(lambda w: np.mean((S.y - Phi @ w) ** 2), np.zeros(len(alphas)),
                       bounds=[(-B, B)] * len(alphas), method="L-BFGS-B", options={"ftol": 1e-14})
        assert squared_loss(p, S) <= res.fun + 1e-4

    def test_pgd_monotone(self):
        rng = make_rng(9)
        A = rng.standard_normal((30, 6))
        G = A.T @ A / 30
        b = rng.standard_normal(6)
        _, hist = projected_gradient(G, b, 1.0, 0.2, np.zeros(6), 1e-12)
        assert len(hist) > 2
        assert np.all(np.diff(hist) <= 1e-12)

    def test_invalid_problem(self):
        S = noisy_dataset(0, n=5)
        with pytest.raises(ValueError):
            RegressionProblem(S, 1, 0.0, 0.1)


class TestTransferGap:
    def test_single_monomial(self):
        x1 = SparsePolynomial.from_terms(2, {(1, 0): 1.0}, 1)
        zero = SparsePolynomial.from_terms(2, {}, 1)
        g = transfer_gap(x1, zero, np.array([[1.0, 1.0], [1.0, -1.0]]), UniformHypercube(2))
        assert (g.empirical, g.reference, g.gap) == (1, 1, 0)

    def test_sum_example(self):
        q = SparsePolynomial.from_terms(2, {(1, 0): 1.0, (0, 1): 1.0}, 1)
        zero = SparsePolynomial.from_terms(2, {}, 1)
        g = transfer_gap(q, zero, np.array([[1.0, 1.0], [-1.0, -1.0]]), UniformHypercube(2))
        assert (g.empirical, g.reference, g.gap, g.delta, g.bound) == (4, 2, 2, 1, 16)
        # reference side by enumerating the cube
        assert np.mean(q(cube(2)) ** 2) == 2

    def test_identical_polynomials(self):
        p = random_poly(make_rng(1), 3, 2, 1.0)
        g = transfer_gap(p, p, make_rng(2).choice([-1.0, 1.0], (7, 3)), UniformHypercube(3))
        assert g.gap == 0

    @given(st.integers(0, 100_000))
    def test_inequality_holds_for_d_at_least_2(self, seed):
        rng = make_rng(seed)
        d, k = int(rng.integers(2, 5)), int(rng.integers(1, 3))
        p1, p2 = random_poly(rng, d, k, 1.0), random_poly(rng, d, k, 1.0)
        X = rng.choice([-1.0, 1.0], (int(rng.integers(1, 30)), d))
        g = transfer_gap(p1, p2, X, UniformHypercube(d))
        assert g.gap <= g.bound * (1 + 1e-9) + 1e-12

    def test_one_dimension_counterexample(self):
        # q = 1 + x on X = {1}: gap 2 exceeds B^2 d^(4k) Delta = 1, so the
        # inequality needs d >= 2 (see the decisions ledger)
        q = SparsePolynomial.from_terms(1, {(0,): 1.0, (1,): 1.0}, 1)
        zero = SparsePolynomial.from_terms(1, {}, 1)
        g = transfer_gap(q, zero, np.array([[1.0]]), UniformHypercube(1))
        assert g.gap == 2 and g.bound == 1

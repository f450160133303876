import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from tdslearn.core import Constant, Halfspace, LabeledDataset, Majority, TdsOutcome, make_rng
from tdslearn.learners import (
    amplify,
    gaussian_halfspace_eps_prime,
    gaussian_halfspace_member,
    gaussian_region_mass,
    halfspace_erm_oracle,
    pq_to_tds,
    shard,
    tds_disagreement,
    tds_moment_matching,
)
from tdslearn.moments import StandardGaussian, StrictnessInfeasible, UniformHypercube
from tdslearn.scenarios import (
    Cube,
    DecisionTree,
    RandomClassificationNoise,
    label,
    lambda_oracle,
    sample_marginal,
    trees_up_to_depth2,
)


def cube(d):
    return np.array(list(product((-1.0, 1.0), repeat=d)))


def cube_sample(seed, n, d=4):
    return sample_marginal(Cube(d), n, make_rng(seed))


class TestMomentMatching:
    def test_degree_one_concept_exact(self):
        X = cube_sample(0, 5000)
        S = LabeledDataset(X, X[:, 0].astype(int))
        out = tds_moment_matching(S, cube_sample(1, 5000), UniformHypercube(4), 1, 2.0, 0.3,
                                  mode="practical", moment_tol=0.1)
        assert out.accepted
        V = cube(4)
        assert np.all(out.hypothesis.predict(V) == V[:, 0])

    def test_point_mass_rejects(self):
        S = LabeledDataset(cube(4), np.ones(16, dtype=int))
        X_test = np.ones((50, 4))
        for tol in (0.1, 0.5, 0.99):
            out = tds_moment_matching(S, X_test, UniformHypercube(4), 1, 2.0, 0.3,
                                      mode="practical", moment_tol=tol)
            assert not out.accepted
            assert out.diagnostics["worst_gap"] == 1

    def test_noisy_tree_error_gate(self):
        tree = DecisionTree((0, (1, -1, 1), (2, 1, -1)), 4)
        noise = RandomClassificationNoise(0.1)
        S = label(tree, noise, cube_sample(2, 5000), make_rng(3))
        out = tds_moment_matching(S, cube_sample(4, 10_000), UniformHypercube(4), 2, 2.0, 0.3,
                                  mode="practical", moment_tol=0.05)
        assert out.accepted
        S_eval = label(tree, noise, cube_sample(5, 5000), make_rng(6))
        lam = lambda_oracle(trees_up_to_depth2(4), S, S_eval)
        err = float(np.mean(out.hypothesis.predict(S_eval.X) != S_eval.y))
        assert lam <= 0.2 + 0.03
        assert err <= 32 * lam + 0.3

    def test_paper_mode_tolerance(self):
        S = LabeledDataset(cube(2), np.array([1, -1, 1, -1]))
        out = tds_moment_matching(S, cube(2), UniformHypercube(2), 1, 2.0, 1.0, mode="paper")
        assert out.diagnostics["delta"] == pytest.approx(0.01 / 64)
        assert out.accepted

    def test_paper_mode_infeasible(self):
        S = LabeledDataset(np.ones((3, 10)), np.ones(3, dtype=int))
        with pytest.raises(StrictnessInfeasible):
            tds_moment_matching(S, np.ones((3, 10)), UniformHypercube(10), 6, 2.0, 1.0, mode="paper")

    @given(st.integers(0, 1000))
    def test_verdict_depends_on_moments_only(self, seed):
        rng = make_rng(seed)
        X = rng.standard_normal((500, 2))
        S = LabeledDataset(X, np.where(X[:, 0] >= 0, 1, -1))
        X_test = rng.standard_normal((300, 2))
        kw = dict(mode="practical", moment_tol=0.3)
        a = tds_moment_matching(S, X_test, StandardGaussian(2), 1, 2.0, 0.3, **kw)
        b = tds_moment_matching(S, X_test[rng.permutation(300)], StandardGaussian(2), 1, 2.0, 0.3, **kw)
        assert a.verdict == b.verdict
        if a.accepted:
            np.testing.assert_array_equal(a.hypothesis.poly.coefs, b.hypothesis.poly.coefs)

    def test_same_moments_different_points(self):
        # {+-1}^2 and its coordinate swap have identical moment vectors
        S = LabeledDataset(cube(2), np.array([1, -1, -1, 1]))
        a = tds_moment_matching(S, cube(2), UniformHypercube(2), 1, 2.0, 0.3, mode="practical", moment_tol=1e-9)
        b = tds_moment_matching(S, cube(2)[:, ::-1], UniformHypercube(2), 1, 2.0, 0.3, mode="practical",
                                moment_tol=1e-9)
        assert a.verdict == b.verdict == "accept"
        np.testing.assert_array_equal(a.hypothesis.poly.coefs, b.hypothesis.poly.coefs)


class TestDisagreement:
    def test_same_marginal_accepts(self):
        eps = 0.2
        eps_prime = gaussian_halfspace_eps_prime(eps, 2)
        accepts = 0
        for t in range(20):
            rng = make_rng(10, t)
            X = rng.standard_normal((2000, 2))
            S = LabeledDataset(X, Halfspace(np.array([1.0, 0.5]), 0.0).predict(X))
            out = tds_disagreement(S, rng.standard_normal((2000, 2)), eps, eps_prime,
                                   halfspace_erm_oracle(rng), gaussian_halfspace_member)
            accepts += out.accepted
        assert accepts >= 18

    def test_region_saturated_rejects(self):
        X = make_rng(11).standard_normal((500, 2))
        S = LabeledDataset(X, Halfspace(np.array([1.0, 0.0]), 0.0).predict(X))
        X_test = np.column_stack([np.zeros(100), np.linspace(1, 2, 100)])
        out = tds_disagreement(S, X_test, 0.2, 0.05, halfspace_erm_oracle(make_rng(12)),
                               gaussian_halfspace_member)
        assert not out.accepted and out.diagnostics["region_fraction"] == 1

    def test_empty_region_accepts(self):
        X = make_rng(13).standard_normal((100, 2))
        S = LabeledDataset(X, np.ones(100, dtype=int))
        out = tds_disagreement(S, X, 0.01, 0.0, lambda S_, e: Constant(1, 2),
                               lambda f, e, Z: np.zeros(len(Z), dtype=bool))
        assert out.accepted

    def test_region_mass_matches_monte_carlo(self):
        X = make_rng(14).standard_normal((200_000, 3))
        f = Halfspace(np.array([0.0, 0.0, 1.0]), 0.0)
        mc = gaussian_halfspace_member(f, 0.02, X).mean()
        assert abs(mc - gaussian_region_mass(0.02, 3)) < 4 * math.sqrt(0.06 / 200_000)

    def test_eps_prime_helper(self):
        e = gaussian_halfspace_eps_prime(0.2, 5)
        assert gaussian_region_mass(e, 5) == pytest.approx(0.05, rel=1e-9)


def bernoulli_stub(p):
    def base(S, X, rng):
        if rng.uniform() < p:
            return TdsOutcome.accept(Constant(1))
        return TdsOutcome.reject()
    return base


class TestAmplify:
    S = LabeledDataset(np.zeros((40, 1)), np.ones(40, dtype=int))
    X = np.zeros((40, 1))

    def test_always_accept(self):
        h = Halfspace(np.array([1.0]), 0.0)
        out = amplify(lambda S, X, r: TdsOutcome.accept(h), 10)(self.S, self.X, make_rng(0))
        assert out.accepted and isinstance(out.hypothesis, Majority)
        Z = np.linspace(-3, 3, 13).reshape(-1, 1)
        np.testing.assert_array_equal(out.hypothesis.predict(Z), h.predict(Z))

    def test_always_reject(self):
        out = amplify(lambda S, X, r: TdsOutcome.reject(), 4)(self.S, self.X, make_rng(0))
        assert not out.accepted

    def test_t2_is_first_accepting_shard(self):
        hs = iter([Halfspace(np.array([1.0]), 0.5), Halfspace(np.array([-1.0]), 0.0)])
        out = amplify(lambda S, X, r: TdsOutcome.accept(next(hs)), 2)(self.S, self.X, make_rng(0))
        Z = np.linspace(-2, 2, 9).reshape(-1, 1)
        np.testing.assert_array_equal(out.hypothesis.predict(Z), np.where(Z[:, 0] >= 0.5, 1, -1))

    def test_shards_disjoint(self):
        S = LabeledDataset(np.arange(10.0).reshape(-1, 1), np.ones(10, dtype=int))
        blocks = shard(S, np.arange(10.0).reshape(-1, 1) + 100, 4)
        seen = np.concatenate([s.X[:, 0] for s, _ in blocks])
        assert sorted(seen) == list(range(10))

    def test_odd_t_rejected(self):
        with pytest.raises(ValueError):
            amplify(bernoulli_stub(0.9), 3)

    def test_bernoulli_meta_trials(self):
        learner = amplify(bernoulli_stub(0.9), 20)
        rejects = sum(not learner(self.S, self.X, make_rng(99, t)).accepted for t in range(500))
        assert stats.binom.sf(10, 20, 0.1) < 1e-6
        assert rejects == 0


class TestPq:
    S = LabeledDataset(np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([1, -1]))

    def test_everything_region(self):
        out = pq_to_tds(lambda S, X1: (Constant(1), lambda Z: np.ones(len(Z), bool)), self.S,
                        make_rng(0).standard_normal((100, 2)), 0.1)
        assert out.accepted

    def test_empty_region(self):
        for eps in (0.1, 1.0, 2.9):
            out = pq_to_tds(lambda S, X1: (Constant(1), lambda Z: np.zeros(len(Z), bool)), self.S,
                            make_rng(0).standard_normal((100, 2)), eps)
            assert not out.accepted

    def test_eighty_percent_region(self):
        X_test = np.column_stack([np.arange(20.0), np.zeros(20)])
        # X2 = points 10..19, region x1 <= 17 keeps exactly 8 of them
        out = pq_to_tds(lambda S, X1: (Constant(1), lambda Z: Z[:, 0] <= 17), self.S, X_test, 0.3)
        assert not out.accepted
        assert out.diagnostics["outside_fraction"] == pytest.approx(0.2)

    def test_pq_sees_unlabeled_half(self):
        seen = {}

        def pq(S, X1):
            seen["X1"] = X1
            return Constant(1), lambda Z: np.ones(len(Z), bool)
        X_test = make_rng(1).standard_normal((10, 2))
        pq_to_tds(pq, self.S, X_test, 0.1)
        assert isinstance(seen["X1"], np.ndarray) and len(seen["X1"]) == 5

"""Saddle value, gradient, inner minimization, and OLS closed forms."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from subsetsel.core import DesignMatrix, ResponseBlock, SelectionProblem
from subsetsel.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InfeasibleBudget,
    NotOLS,
)
from subsetsel.losses import logistic, pinball
from subsetsel.saddle import (
    eval_f,
    feature_score,
    feature_scores,
    grad_alpha_f,
    min_s,
    ols_alpha_closed_form,
    ols_objective,
)


def tiny_problem(gamma=1.0, k=1, m=1):
    return SelectionProblem.ols(m, k, gamma)


class TestFeatureScores:
    def test_hand_values(self):
        X = np.array([[1.0, 0.0], [0.0, 2.0]])
        A = np.array([[1.0], [3.0]])
        assert_allclose(feature_scores(X, A), [1.0, 36.0])
        assert_allclose(feature_score(X, A, 1), 36.0)

    def test_multi_coordinate_sums(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(7, 4))
        A = rng.normal(size=(7, 3))
        G = X.T @ A
        assert_allclose(feature_scores(X, A), (G * G).sum(axis=1))

    def test_index_checked(self):
        X = np.ones((2, 2))
        A = np.ones((2, 1))
        with pytest.raises(IndexOutOfRange):
            feature_score(X, A, 2)
        with pytest.raises(IndexOutOfRange):
            feature_score(X, A, -3)


class TestEvalF:
    def test_scalar_hand_value(self):
        # X = Y = [[1]], gamma = 1: f(-1/2, [1]) = 3/8 - 1/8 = 1/4
        X, Y = np.array([[1.0]]), np.array([[1.0]])
        val = eval_f(X, Y, np.array([[-0.5]]), np.array([1.0]), tiny_problem())
        assert_allclose(val, 0.25)

    def test_linear_in_s(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(10, 4))
        Y = rng.normal(size=(10, 2))
        A = rng.normal(size=(10, 2))
        problem = SelectionProblem.ols(2, 2, 0.3)
        e1 = np.array([1.0, 0.0, 0.0, 0.0])
        e2 = np.array([0.0, 0.0, 1.0, 0.0])
        lhs = eval_f(X, Y, A, 0.25 * e1 + 0.75 * e2, problem)
        rhs = 0.25 * eval_f(X, Y, A, e1, problem) + 0.75 * eval_f(X, Y, A, e2, problem)
        assert_allclose(lhs, rhs, rtol=1e-12)

    def test_outside_domain_is_minus_inf(self):
        X = np.array([[1.0]])
        Y = np.array([[1.0]])
        problem = SelectionProblem((logistic(),), 1, 1.0)
        assert eval_f(X, Y, np.array([[0.5]]), np.array([1.0]), problem) == -np.inf

    def test_support_shape_checked(self):
        X = np.ones((3, 2))
        Y = np.ones((3, 1))
        with pytest.raises(DimensionMismatch):
            eval_f(X, Y, np.zeros((3, 1)), np.array([1.0]), tiny_problem())


class TestGradAlpha:
    def test_hand_value_at_zero(self):
        X, Y = np.array([[1.0]]), np.array([[1.0]])
        g = grad_alpha_f(X, Y, np.zeros((1, 1)), np.array([0.0]), tiny_problem())
        assert_allclose(g, [[-1.0]])

    def test_matches_finite_differences_boolean_support(self):
        rng = np.random.default_rng(17)
        X = rng.normal(size=(8, 5))
        Y = rng.normal(size=(8, 3))
        A = rng.normal(size=(8, 3)) * 0.3
        s = np.array([1.0, 0.0, 1.0, 0.0, 0.0])
        problem = SelectionProblem.ols(3, 2, 0.7)
        g = grad_alpha_f(X, Y, A, s, problem)
        h = 1e-6
        num = np.zeros_like(A)
        for i in range(A.shape[0]):
            for t in range(A.shape[1]):
                up, dn = A.copy(), A.copy()
                up[i, t] += h
                dn[i, t] -= h
                num[i, t] = (
                    eval_f(X, Y, up, s, problem) - eval_f(X, Y, dn, s, problem)
                ) / (2 * h)
        assert_allclose(g, num, rtol=1e-5, atol=1e-7)

    def test_matches_finite_differences_fractional_support(self):
        rng = np.random.default_rng(18)
        X = rng.normal(size=(6, 4))
        Y = rng.normal(size=(6, 2))
        A = rng.normal(size=(6, 2)) * 0.2
        s = np.array([0.5, 0.1, 0.0, 0.9])
        problem = SelectionProblem.ols(2, 2, 0.4)
        g = grad_alpha_f(X, Y, A, s, problem)
        h = 1e-6
        num = np.zeros_like(A)
        for i in range(A.shape[0]):
            for t in range(A.shape[1]):
                up, dn = A.copy(), A.copy()
                up[i, t] += h
                dn[i, t] -= h
                num[i, t] = (
                    eval_f(X, Y, up, s, problem) - eval_f(X, Y, dn, s, problem)
                ) / (2 * h)
        assert_allclose(g, num, rtol=1e-5, atol=1e-7)


class TestMinS:
    def test_keeps_largest(self):
        s = min_s(np.array([0.1, 5.0, 3.0]), 2)
        assert list(s) == [False, True, True]

    def test_ties_take_lowest_index(self):
        s = min_s(np.array([3.0, 1.0, 3.0]), 1)
        assert list(s) == [True, False, False]
        s2 = min_s(np.array([2.0, 2.0, 2.0]), 2)
        assert list(s2) == [True, True, False]

    def test_budget_checked(self):
        with pytest.raises(InfeasibleBudget):
            min_s(np.array([1.0, 2.0]), 3)
        with pytest.raises(InfeasibleBudget):
            min_s(np.array([1.0, 2.0]), 0)


class TestClosedForm:
    def test_scalar_hand_value(self):
        X, Y = np.array([[1.0]]), np.array([[1.0]])
        s = np.array([True])
        assert_allclose(ols_alpha_closed_form(X, Y, s, 1.0), [[-0.5]])
        assert_allclose(ols_objective(X, Y, s, 1.0), 0.25)

    def test_gamma_zero_and_empty_support(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(5, 3))
        Y = rng.normal(size=(5, 2))
        s = np.array([True, False, True])
        assert_allclose(ols_alpha_closed_form(X, Y, s, 0.0), -Y)
        none = np.zeros(3, dtype=bool)
        assert_allclose(ols_alpha_closed_form(X, Y, none, 1.0), -Y)
        assert_allclose(ols_objective(X, Y, none, 1.0), 0.5 * np.sum(Y * Y))

    def test_woodbury_agrees_with_dense(self):
        rng = np.random.default_rng(21)
        X = rng.normal(size=(30, 8))
        Y = rng.normal(size=(30, 3))
        s = np.zeros(8, dtype=bool)
        s[[1, 4, 6]] = True
        # tall case routes through the low-rank identity
        a_tall = ols_alpha_closed_form(X, Y, s, 0.7)
        M = np.eye(30) + 0.7 * X[:, s] @ X[:, s].T
        assert_allclose(a_tall, -np.linalg.solve(M, Y), rtol=1e-9, atol=1e-11)
        # short-and-wide case takes the direct solve
        Xw = rng.normal(size=(4, 8))
        Yw = rng.normal(size=(4, 2))
        a_dense = ols_alpha_closed_form(Xw, Yw, s, 0.7)
        Mw = np.eye(4) + 0.7 * Xw[:, s] @ Xw[:, s].T
        assert_allclose(a_dense, -np.linalg.solve(Mw, Yw), rtol=1e-9, atol=1e-11)

    def test_dual_optimum_attains_saddle_value(self):
        rng = np.random.default_rng(22)
        X = rng.normal(size=(12, 5))
        Y = rng.normal(size=(12, 2))
        s = np.array([True, True, False, False, True])
        gamma = 0.5
        alpha = ols_alpha_closed_form(X, Y, s, gamma)
        problem = SelectionProblem.ols(2, 3, gamma)
        assert_allclose(
            eval_f(X, Y, alpha, s.astype(float), problem),
            ols_objective(X, Y, s, gamma),
            rtol=1e-10,
        )

    def test_matches_primal_ridge_value(self):
        rng = np.random.default_rng(23)
        X = rng.normal(size=(15, 6))
        Y = rng.normal(size=(15, 2))
        s = np.array([True, False, True, False, False, True])
        gamma = 0.9
        Xs = X[:, s]
        beta = np.linalg.solve(Xs.T @ Xs + np.eye(3) / gamma, Xs.T @ Y)
        primal = 0.5 * np.sum((Y - Xs @ beta) ** 2) + 0.5 / gamma * np.sum(beta * beta)
        assert_allclose(ols_objective(X, Y, s, gamma), primal, rtol=1e-10)

    def test_requires_ols(self):
        X = np.ones((3, 2))
        Y = np.ones((3, 1))
        with pytest.raises(NotOLS):
            ols_alpha_closed_form(X, Y, np.array([True, False]), 1.0, [pinball(0.4)])

    def test_indicator_support_accepted(self):
        rng = np.random.default_rng(24)
        X = rng.normal(size=(9, 4))
        Y = rng.normal(size=(9, 1))
        by_mask = ols_alpha_closed_form(X, Y, np.array([False, True, True, False]), 0.3)
        by_indicator = ols_alpha_closed_form(X, Y, np.array([0.0, 1.0, 1.0, 0.0]), 0.3)
        assert_allclose(by_mask, by_indicator)
        # index lists are not a supported encoding; supports have length p
        with pytest.raises(DimensionMismatch):
            ols_alpha_closed_form(X, Y, np.array([1, 2]), 0.3)


class TestAcceptsWrapperTypes:
    def test_design_and_response_objects(self):
        X = DesignMatrix(np.array([[1.0], [2.0]]))
        Y = ResponseBlock(np.array([[1.0], [0.0]]))
        val = eval_f(X, Y, np.zeros((2, 1)), np.array([0.0]), tiny_problem())
        assert np.isfinite(val)

    def test_one_dimensional_alpha(self):
        X = np.array([[1.0], [2.0]])
        Y = np.array([[1.0], [0.0]])
        a2 = eval_f(X, Y, np.array([[0.1], [0.2]]), np.array([1.0]), tiny_problem())
        a1 = eval_f(X, Y, np.array([0.1, 0.2]), np.array([1.0]), tiny_problem())
        assert_allclose(a1, a2)

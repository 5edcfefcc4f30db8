"""Data containers, grouping, standardization, and CSV ingestion."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from subsetsel.core import (
    DesignMatrix,
    GroupStructure,
    ResponseBlock,
    SelectionProblem,
    center_responses,
    read_numeric_csv,
    standardize,
)
from subsetsel.errors import (
    ConstantColumn,
    CsvFormatError,
    DimensionMismatch,
    InfeasibleBudget,
    InvalidGrouping,
    InvalidLabel,
    InvalidPenalty,
    NonFiniteData,
    TooFewSamples,
)
from subsetsel.losses import logistic, ols, pinball


class TestDesignMatrix:
    def test_defaults_and_norms(self):
        X = DesignMatrix(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert X.n == 2 and X.p == 2
        assert X.feature_names == ["x1", "x2"]
        assert_allclose(X.column_norms_sq, [10.0, 20.0])

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteData):
            DesignMatrix(np.array([[1.0, np.nan]]))
        with pytest.raises(NonFiniteData):
            DesignMatrix(np.array([[np.inf, 1.0]]))

    def test_rejects_wrong_rank(self):
        with pytest.raises(DimensionMismatch):
            DesignMatrix(np.zeros((2, 2, 2)))

    def test_one_dimensional_input_becomes_column(self):
        X = DesignMatrix(np.array([1.0, 2.0, 3.0]))
        assert X.values.shape == (3, 1)

    def test_name_count_checked(self):
        with pytest.raises(DimensionMismatch):
            DesignMatrix(np.ones((2, 2)), feature_names=["a"])

    def test_from_csv(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b\n1,2\n3,4\n")
        X = DesignMatrix.from_csv(path)
        assert X.feature_names == ["a", "b"]
        assert_allclose(X.values, [[1.0, 2.0], [3.0, 4.0]])


class TestResponseBlock:
    def test_defaults(self):
        Y = ResponseBlock(np.ones((3, 2)))
        assert Y.n == 3 and Y.m == 2
        assert Y.coordinate_labels == ["y1", "y2"]

    def test_vector_becomes_single_column(self):
        Y = ResponseBlock(np.array([1.0, -1.0]))
        assert Y.values.shape == (2, 1)

    def test_label_count_checked(self):
        with pytest.raises(DimensionMismatch):
            ResponseBlock(np.ones((2, 2)), coordinate_labels=["only"])


class TestGroupStructure:
    def test_from_labels_first_appearance_order(self):
        g = GroupStructure.from_labels(["b", "a", "b", "c"])
        assert list(g.assignment) == [0, 1, 0, 2]
        assert g.q == 3
        assert list(g.sizes) == [2, 1, 1]

    def test_singleton(self):
        g = GroupStructure.singleton(4)
        assert list(g.assignment) == [0, 1, 2, 3]
        assert g.q == 4

    def test_empty_group_rejected(self):
        with pytest.raises(InvalidGrouping):
            GroupStructure(np.array([0, 2]), num_groups=3)
        with pytest.raises(InvalidGrouping):
            GroupStructure(np.array([], dtype=np.int64))

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidGrouping):
            GroupStructure(np.array([0, 3]), num_groups=2)
        with pytest.raises(InvalidGrouping):
            GroupStructure(np.array([-1, 0]))

    def test_aggregate_sums_member_scores(self):
        g = GroupStructure.from_labels(["u", "v", "u"])
        assert_allclose(g.aggregate(np.array([1.0, 10.0, 2.0])), [3.0, 10.0])

    def test_column_mask_expands(self):
        g = GroupStructure.from_labels(["u", "v", "u"])
        mask = g.column_mask(np.array([True, False]))
        assert list(mask) == [True, False, True]


class TestSelectionProblem:
    def test_validation(self):
        with pytest.raises(InfeasibleBudget):
            SelectionProblem((ols(),), 0, 1.0)
        with pytest.raises(InvalidPenalty):
            SelectionProblem((ols(),), 1, 0.0)
        with pytest.raises(InvalidPenalty):
            SelectionProblem((ols(),), 1, np.inf)

    def test_ols_factory(self):
        problem = SelectionProblem.ols(3, 2, 0.5)
        assert problem.m == 3
        assert all(spec == ols() for spec in problem.losses)

    def test_validate_against(self):
        X = DesignMatrix(np.ones((4, 3)))
        Y = ResponseBlock(np.ones((4, 2)))
        SelectionProblem.ols(2, 2, 1.0).validate_against(X, Y)
        with pytest.raises(DimensionMismatch):
            SelectionProblem.ols(3, 2, 1.0).validate_against(X, Y)
        with pytest.raises(InfeasibleBudget):
            SelectionProblem.ols(2, 4, 1.0).validate_against(X, Y)
        Yrows = ResponseBlock(np.ones((5, 2)))
        with pytest.raises(DimensionMismatch):
            SelectionProblem.ols(2, 2, 1.0).validate_against(X, Yrows)

    def test_validate_against_checks_labels(self):
        X = DesignMatrix(np.ones((3, 2)))
        Y = ResponseBlock(np.array([[1.0], [0.5], [-1.0]]))
        problem = SelectionProblem((logistic(),), 1, 1.0)
        with pytest.raises(InvalidLabel):
            problem.validate_against(X, Y)

    def test_group_budget_counts_groups(self):
        X = DesignMatrix(np.ones((4, 4)))
        Y = ResponseBlock(np.ones((4, 1)))
        groups = GroupStructure.from_labels(["a", "a", "b", "b"])
        SelectionProblem((ols(),), 2, 1.0, groups).validate_against(X, Y)
        with pytest.raises(InfeasibleBudget):
            SelectionProblem((ols(),), 3, 1.0, groups).validate_against(X, Y)
        wrong = GroupStructure.from_labels(["a", "b", "b"])
        with pytest.raises(DimensionMismatch):
            SelectionProblem((ols(),), 1, 1.0, wrong).validate_against(X, Y)


class TestStandardize:
    def test_unit_scale_and_zero_mean(self):
        rng = np.random.default_rng(5)
        X = DesignMatrix(rng.normal(loc=3.0, scale=2.0, size=(50, 4)))
        Xs, record = standardize(X)
        assert_allclose(Xs.values.mean(axis=0), np.zeros(4), atol=1e-12)
        assert_allclose(Xs.values.std(axis=0, ddof=1), np.ones(4), rtol=1e-12)
        assert_allclose(record.transform(X.values), Xs.values)
        assert_allclose(record.invert(Xs.values), X.values, atol=1e-12)

    def test_constant_column_rejected(self):
        X = DesignMatrix(np.column_stack([np.ones(5), np.arange(5.0)]))
        with pytest.raises(ConstantColumn):
            standardize(X)

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            standardize(DesignMatrix(np.array([[1.0, 2.0]])))


class TestCenterResponses:
    def test_centers_and_returns_offsets(self):
        Y = ResponseBlock(np.array([[1.0, 10.0], [3.0, 14.0]]))
        Yc, offsets = center_responses(Y)
        assert_allclose(offsets, [2.0, 12.0])
        assert_allclose(Yc.values.mean(axis=0), [0.0, 0.0], atol=1e-15)

    def test_logistic_columns_left_alone(self):
        Y = ResponseBlock(np.array([[1.0, 5.0], [1.0, 7.0], [-1.0, 9.0]]))
        Yc, offsets = center_responses(Y, [logistic(), ols()])
        assert_allclose(Yc.values[:, 0], Y.values[:, 0])
        assert offsets[0] == 0.0
        assert_allclose(offsets[1], 7.0)

    def test_pinball_columns_centered(self):
        Y = ResponseBlock(np.array([[2.0], [4.0]]))
        Yc, offsets = center_responses(Y, [pinball(0.4)])
        assert_allclose(offsets, [3.0])


class TestReadNumericCsv:
    def test_reads_plain_table(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("u,v\n1.5,2\n-3,4\n")
        frame = read_numeric_csv(path)
        assert list(frame.columns) == ["u", "v"]
        assert_allclose(frame.to_numpy(), [[1.5, 2.0], [-3.0, 4.0]])

    def test_missing_file(self, tmp_path):
        with pytest.raises((OSError, CsvFormatError)):
            read_numeric_csv(tmp_path / "nope.csv")

    def test_headerless_numbers_rejected(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("1,2\n3,4\n")
        with pytest.raises(CsvFormatError):
            read_numeric_csv(path)

    def test_non_numeric_cell_rejected(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("a,b\n1,apple\n2,3\n")
        with pytest.raises(CsvFormatError):
            read_numeric_csv(path)

    def test_nan_rejected(self, tmp_path):
        path = tmp_path / "n.csv"
        path.write_text("a,b\n1,\n2,3\n")
        with pytest.raises(NonFiniteData):
            read_numeric_csv(path)

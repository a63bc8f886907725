import math

import numpy as np
import pytest

from mbrank import DataMatrix, GramMatrix, KernelSpec, center, compute_gram, median_bandwidth
from mbrank.errors import AlreadyCenteredError, EmptySubsetError


def one_col(*points):
    return DataMatrix(values=np.array([[float(p)] for p in points]), column_names=("x",))


LINEAR = KernelSpec(family="linear")


class TestDataMatrix:
    def test_basic_properties(self):
        d = DataMatrix(values=np.zeros((3, 2)), column_names=("a", "b"))
        assert d.n_samples == 3
        assert d.n_columns == 2
        assert d.column_kinds == ("continuous", "continuous")
        assert d.index_of("b") == 1

    def test_rejects_single_sample(self):
        with pytest.raises(ValueError):
            DataMatrix(values=np.zeros((1, 2)), column_names=("a", "b"))

    def test_rejects_zero_columns(self):
        with pytest.raises(ValueError):
            DataMatrix(values=np.zeros((3, 0)), column_names=())

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_rejects_non_finite(self, bad):
        values = np.zeros((2, 2))
        values[1, 1] = bad
        with pytest.raises(ValueError):
            DataMatrix(values=values, column_names=("a", "b"))

    def test_rejects_duplicate_names(self):
        with pytest.raises(ValueError):
            DataMatrix(values=np.zeros((2, 2)), column_names=("a", "a"))

    def test_rejects_wrong_kind_count(self):
        with pytest.raises(ValueError):
            DataMatrix(values=np.zeros((2, 2)), column_names=("a", "b"), column_kinds=("continuous",))

    def test_values_are_frozen(self):
        d = DataMatrix(values=np.zeros((2, 2)), column_names=("a", "b"))
        with pytest.raises(ValueError):
            d.values[0, 0] = 1.0

    def test_unknown_column_raises(self):
        d = DataMatrix(values=np.zeros((2, 2)), column_names=("a", "b"))
        with pytest.raises(KeyError):
            d.index_of("c")


class TestKernelSpec:
    def test_defaults(self):
        spec = KernelSpec()
        assert spec.family == "gaussian"
        assert spec.sigma is None
        assert spec.epsilon == 1e-3

    @pytest.mark.parametrize("kwargs", [
        {"family": "cubic"},
        {"sigma": 0.0},
        {"sigma": -1.0},
        {"epsilon": 0.0},
        {"epsilon": -1e-3},
    ])
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            KernelSpec(**kwargs)


class TestComputeGram:
    def test_linear_scalar_points(self):
        g = compute_gram(one_col(0, 1), [0], LINEAR)
        assert not g.centered
        np.testing.assert_array_equal(g.entries, [[0.0, 0.0], [0.0, 1.0]])

    def test_gaussian_fixed_sigma(self):
        g = compute_gram(one_col(0, 1), [0], KernelSpec(family="gaussian", sigma=1.0))
        e = math.exp(-0.5)
        np.testing.assert_allclose(g.entries, [[1.0, e], [e, 1.0]], rtol=1e-15)

    def test_gaussian_median_heuristic(self):
        # distances {1, 2, 3} -> sigma 2, so K[0][2] = exp(-9/8)
        g = compute_gram(one_col(0, 1, 3), [0], KernelSpec(family="gaussian"))
        assert g.entries[0, 2] == pytest.approx(math.exp(-9.0 / 8.0), rel=1e-12)
        assert g.entries[0, 2] == pytest.approx(0.3247, abs=1e-4)
        assert g.entries[0, 1] == pytest.approx(math.exp(-1.0 / 8.0), rel=1e-12)

    def test_empty_subset_rejected(self):
        with pytest.raises(EmptySubsetError):
            compute_gram(one_col(0, 1), [], LINEAR)

    def test_out_of_range_column_rejected(self):
        with pytest.raises(IndexError):
            compute_gram(one_col(0, 1), [1], LINEAR)

    def test_column_order_irrelevant(self):
        rng = np.random.default_rng(3)
        d = DataMatrix(values=rng.standard_normal((8, 4)), column_names=tuple("abcd"))
        for spec in (LINEAR, KernelSpec(family="gaussian")):
            g1 = compute_gram(d, [0, 2, 3], spec)
            g2 = compute_gram(d, [3, 0, 2], spec)
            np.testing.assert_array_equal(g1.entries, g2.entries)

    def test_row_permutation_permutes_gram(self):
        rng = np.random.default_rng(4)
        values = rng.standard_normal((7, 3))
        perm = rng.permutation(7)
        d1 = DataMatrix(values=values, column_names=tuple("abc"))
        d2 = DataMatrix(values=values[perm], column_names=tuple("abc"))
        for spec in (LINEAR, KernelSpec(family="gaussian", sigma=0.7)):
            g1 = compute_gram(d1, [0, 1, 2], spec).entries
            g2 = compute_gram(d2, [0, 1, 2], spec).entries
            np.testing.assert_allclose(g2, g1[np.ix_(perm, perm)], rtol=1e-12, atol=0)

    def test_uncentered_gram_is_psd(self):
        rng = np.random.default_rng(5)
        for trial in range(20):
            n = int(rng.integers(3, 12))
            d = DataMatrix(
                values=rng.standard_normal((n, 3)), column_names=tuple("abc")
            )
            spec = LINEAR if trial % 2 else KernelSpec(family="gaussian")
            g = compute_gram(d, [0, 1, 2], spec)
            eigs = np.linalg.eigvalsh(g.entries)
            assert eigs.min() >= -1e-8 * np.trace(g.entries)

    def test_deterministic(self):
        rng = np.random.default_rng(6)
        d = DataMatrix(values=rng.standard_normal((10, 2)), column_names=("a", "b"))
        spec = KernelSpec(family="gaussian")
        np.testing.assert_array_equal(
            compute_gram(d, [0, 1], spec).entries, compute_gram(d, [0, 1], spec).entries
        )


class TestCenter:
    def test_constant_kernel_annihilated(self):
        g = center(GramMatrix(entries=np.full((2, 2), 3.7)))
        assert g.centered
        np.testing.assert_allclose(g.entries, np.zeros((2, 2)), atol=1e-15)

    def test_two_by_two_hand_value(self):
        g = center(GramMatrix(entries=np.array([[0.0, 0.0], [0.0, 1.0]])))
        np.testing.assert_allclose(g.entries, [[0.25, -0.25], [-0.25, 0.25]], atol=1e-15)

    def test_identity_hand_value(self):
        g = center(GramMatrix(entries=np.eye(2)))
        np.testing.assert_allclose(g.entries, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)

    def test_matches_projection_formula(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal((9, 2))
        k = x @ x.T
        n = k.shape[0]
        h = np.eye(n) - np.ones((n, n)) / n
        g = center(GramMatrix(entries=k))
        np.testing.assert_allclose(g.entries, h @ k @ h, atol=1e-12)

    def test_double_centering_rejected(self):
        g = center(GramMatrix(entries=np.eye(3)))
        with pytest.raises(AlreadyCenteredError):
            center(g)

    def test_idempotent_in_value(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal((12, 3))
        once = center(GramMatrix(entries=x @ x.T)).entries
        # strip the flag to re-center the same entries
        twice = center(GramMatrix(entries=once, centered=False)).entries
        np.testing.assert_allclose(twice, once, atol=1e-12 * max(1.0, np.abs(once).max()))

    def test_centered_row_sums_vanish(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            d = DataMatrix(values=rng.standard_normal((15, 4)), column_names=tuple("abcd"))
            g = center(compute_gram(d, [0, 1, 2, 3], KernelSpec(family="gaussian")))
            bound = 1e-8 * g.n * np.abs(g.entries).max()
            assert np.abs(g.entries.sum(axis=1)).max() <= bound

    def test_zero_mean_linear_column_unchanged(self):
        rng = np.random.default_rng(10)
        col = rng.standard_normal(20)
        col -= col.mean()
        d = DataMatrix(values=col[:, None], column_names=("x",))
        g = compute_gram(d, [0], LINEAR)
        c = center(GramMatrix(entries=g.entries, centered=False))
        np.testing.assert_allclose(c.entries, g.entries, atol=1e-10 * np.abs(g.entries).max())


class TestGramMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            GramMatrix(entries=np.zeros((2, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            GramMatrix(entries=np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_symmetry_tolerance_is_relative(self):
        k = np.array([[1e12, 2e12], [2e12 + 1e2, 1e12]])
        g = GramMatrix(entries=k)  # 1e2 asymmetry on 2e12 scale is below 1e-10 relative
        assert g.n == 2
        with pytest.raises(ValueError):
            GramMatrix(entries=np.array([[1e12, 2e12], [2e12 + 1e4, 1e12]]))


class TestMedianBandwidth:
    def test_three_points(self):
        assert median_bandwidth(one_col(0, 1, 3), [0]) == 2.0

    def test_identical_points_fallback(self):
        assert median_bandwidth(one_col(5, 5), [0]) == 1.0

    def test_two_points(self):
        assert median_bandwidth(one_col(0, 1), [0]) == 1.0

    def test_even_count_averages_middle_pair(self):
        # distances {1, 2, 3, 4, 6, 7}: median = (3 + 4) / 2
        assert median_bandwidth(one_col(0, 1, 3, 7), [0]) == 3.5

    def test_zero_distances_excluded(self):
        # duplicates contribute zero distances which must not drag the median down
        assert median_bandwidth(one_col(0, 0, 0, 4), [0]) == 4.0

    def test_multicolumn_euclidean(self):
        d = DataMatrix(
            values=np.array([[0.0, 0.0], [3.0, 4.0]]), column_names=("a", "b")
        )
        assert median_bandwidth(d, [0, 1]) == 5.0

    def test_empty_subset_rejected(self):
        with pytest.raises(EmptySubsetError):
            median_bandwidth(one_col(0, 1), [])

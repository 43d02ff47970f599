"""
Tests for the sampled RKHS models: grids, kernels, restriction and direct sums.
"""

import numpy as np
from django.test import SimpleTestCase

from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidGridError,
    ModelGridMismatchError,
)
from .rkhs_model import (
    SpaceSpec,
    build_space,
    direct_sum,
    normalized_kernel,
    restrict,
    space_from_spec,
    subsample,
)

DISC = {"type": "disc", "radial": 20, "angular": 64, "rmax": 0.95}


class KernelClosedFormTestCase(SimpleTestCase):
    """Test kernel vectors against their closed forms."""

    def test_hardy_kernel_at_one_half(self):
        """Test the normalized Hardy kernel at 0.5 in dimension 3."""
        space = build_space("hardy", 3, {"type": "interval", "a": 0.5, "b": 0.5, "count": 1})
        expected = np.array([1, 0.5, 0.25]) / np.sqrt(1.3125)
        np.testing.assert_allclose(normalized_kernel(space, 0), expected, atol=1e-15)
        self.assertAlmostEqual(space.kernel_norms[0], np.sqrt(1.3125), places=14)

    def test_hardy_norms_match_geometric_sum(self):
        """Test ||k_lam||^2 = (1 - |lam|^2n) / (1 - |lam|^2) on every disc point."""
        n = 8
        space = build_space("hardy", n, DISC)
        r2 = np.abs(space.grid.points) ** 2
        expected = np.sqrt((1 - r2 ** n) / (1 - r2))
        np.testing.assert_allclose(space.kernel_norms, expected, rtol=1e-12, atol=1e-12)

    def test_bergman_norms_match_weighted_sum(self):
        """Test ||k_lam||^2 = sum (j+1) |lam|^2j on every disc point."""
        n = 6
        space = build_space("bergman", n, DISC)
        r2 = np.abs(space.grid.points) ** 2
        expected = np.sqrt(sum((j + 1) * r2 ** j for j in range(n)))
        np.testing.assert_allclose(space.kernel_norms, expected, rtol=1e-12, atol=1e-12)

    def test_diagonal_kernels_are_basis_vectors(self):
        """Test the diagonal model samples the standard basis."""
        space = build_space("diagonal", 4, {"type": "index"})
        np.testing.assert_array_equal(space.kernels, np.eye(4))
        self.assertEqual(space.size, 4)

    def test_all_kernels_are_unit_vectors(self):
        """Test every stored kernel has norm one."""
        space = build_space("bergman", 5, {"type": "disc", "radial": 3, "angular": 7, "rmax": 0.9})
        np.testing.assert_allclose(np.linalg.norm(space.kernels, axis=1), 1.0, atol=1e-14)


class GridTestCase(SimpleTestCase):
    """Test grid construction and its validation."""

    def test_disc_grid_holds_origin_once(self):
        """Test a disc grid is the origin plus radial x angular points."""
        space = build_space("hardy", 8, DISC)
        self.assertEqual(space.size, 1 + 20 * 64)
        self.assertEqual(space.grid.points[0], 0)
        self.assertEqual(np.count_nonzero(space.grid.points == 0), 1)
        self.assertLessEqual(np.max(np.abs(space.grid.points)), 0.95 + 1e-15)

    def test_rmax_must_stay_inside_disc(self):
        """Test rmax >= 1 is rejected."""
        with self.assertRaises(InvalidGridError):
            build_space("hardy", 3, {"type": "disc", "radial": 2, "angular": 4, "rmax": 1.0})

    def test_interval_leaving_disc(self):
        """Test an interval reaching |lam| >= 1 is rejected for disc models."""
        with self.assertRaises(InvalidGridError):
            build_space("hardy", 3, {"type": "interval", "a": -1.0, "b": 0.5, "count": 4})

    def test_empty_and_repeated_grids(self):
        """Test empty grids and repeated points are rejected."""
        with self.assertRaises(InvalidGridError):
            build_space("hardy", 3, {"type": "interval", "a": 0.1, "b": 0.5, "count": 0})
        with self.assertRaises(InvalidGridError):
            build_space("hardy", 3, {"type": "interval", "a": 0.2, "b": 0.2, "count": 2})

    def test_model_grid_mismatches(self):
        """Test models sampled on the wrong kind of grid."""
        with self.assertRaises(ModelGridMismatchError):
            build_space("diagonal", 3, DISC)
        with self.assertRaises(ModelGridMismatchError):
            build_space("hardy", 3, {"type": "index"})
        with self.assertRaises(ModelGridMismatchError):
            build_space("diagonal", 3, {"type": "index", "size": 4})

    def test_label(self):
        """Test the space label names model, dimension and grid."""
        spec = SpaceSpec(model="hardy", dim=8, grid=DISC)
        self.assertEqual(spec.label, "hardy-8-disc20x64r0.95")
        self.assertEqual(space_from_spec(spec).label, "hardy-8-disc20x64r0.95")


class CustomModelTestCase(SimpleTestCase):
    """Test the custom kernel model."""

    def test_kernels_from_pairs(self):
        """Test [re, im] encoded kernels are decoded and normalized."""
        kernels = [[[3, 0], [0, 4]], [[1, 0], [0, 0]]]
        space = build_space("custom", 2, {"type": "index"}, kernels=kernels)
        np.testing.assert_allclose(space.kernels[0], [0.6, 0.8j])
        self.assertEqual(space.kernel_norms[0], 5.0)

    def test_zero_kernel_rejected(self):
        """Test a vanishing kernel cannot be normalized."""
        with self.assertRaises(InvalidGridError):
            build_space("custom", 2, {"type": "index"}, kernels=np.array([[1, 0], [0, 0]], dtype=complex))

    def test_kernel_shape_checked(self):
        """Test kernels of the wrong dimension."""
        with self.assertRaises(DimensionMismatchError):
            build_space("custom", 3, {"type": "index"}, kernels=np.eye(2, dtype=complex))

    def test_custom_kernels_need_custom_model(self):
        """Test kernel vectors are refused by built-in models."""
        with self.assertRaises(ModelGridMismatchError):
            build_space("diagonal", 2, {"type": "index"}, kernels=np.eye(2, dtype=complex))


class KernelAccessTestCase(SimpleTestCase):
    """Test kernel lookup, immutability and sub-spaces."""

    def setUp(self):
        self.space = build_space("hardy", 4, {"type": "disc", "radial": 4, "angular": 8})

    def test_index_out_of_range(self):
        """Test out-of-range and non-integer indices."""
        with self.assertRaises(IndexOutOfRangeError):
            normalized_kernel(self.space, self.space.size)
        with self.assertRaises(IndexOutOfRangeError):
            normalized_kernel(self.space, -1)
        with self.assertRaises(IndexError):
            self.space.normalized_kernel(1.5)

    def test_arrays_are_read_only(self):
        """Test the stored kernels cannot be modified in place."""
        with self.assertRaises(ValueError):
            self.space.kernels[0, 0] = 2.0

    def test_restrict_keeps_selected_rows(self):
        """Test restriction keeps the chosen kernels in order."""
        sub = restrict(self.space, [5, 2])
        self.assertEqual(sub.size, 2)
        np.testing.assert_array_equal(sub.kernels[0], self.space.kernels[5])
        np.testing.assert_array_equal(sub.kernels[1], self.space.kernels[2])
        with self.assertRaises(IndexOutOfRangeError):
            restrict(self.space, [self.space.size])
        with self.assertRaises(InvalidGridError):
            restrict(self.space, [1, 1])

    def test_subsample_bounds_grid_size(self):
        """Test stride subsampling stays under the point budget."""
        space = build_space("hardy", 8, DISC)
        sub = subsample(space, 64)
        self.assertLessEqual(sub.size, 64)
        self.assertEqual(sub.size, len(range(0, space.size, 21)))
        self.assertIs(subsample(self.space, 1000), self.space)


class DirectSumTestCase(SimpleTestCase):
    """Test direct sums sampled on the product grid."""

    def test_pair_kernel_layout(self):
        """Test row i * m2 + j stacks the two kernels and is renormalized."""
        left = build_space("diagonal", 2, {"type": "index"})
        right = build_space("diagonal", 3, {"type": "index"})
        total = direct_sum(left, right)
        self.assertEqual(total.dim, 5)
        self.assertEqual(total.size, 6)
        np.testing.assert_array_equal(total.pairs[1], [0, 1])
        np.testing.assert_allclose(total.kernels[1], np.array([1, 0, 0, 1, 0]) / np.sqrt(2))
        np.testing.assert_allclose(np.linalg.norm(total.kernels, axis=1), 1.0)

    def test_unequal_kernel_norms(self):
        """Test the stacked kernel is weighted by the unnormalized norms."""
        left = build_space("hardy", 2, {"type": "interval", "a": 0.5, "b": 0.5, "count": 1})
        right = build_space("diagonal", 1, {"type": "index"})
        total = direct_sum(left, right)
        expected = np.array([1, 0.5, 1]) / np.sqrt(2.25)
        np.testing.assert_allclose(total.kernels[0], expected)

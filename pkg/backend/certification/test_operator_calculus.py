"""
Tests for the dense operator toolkit: functional calculus, polar factors and norms.
"""

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from .errors import (
    DimensionMismatchError,
    NotPositiveSemidefiniteError,
    NumericFailureError,
    PairViolationError,
    ParameterDomainError,
)
from .generators import InstanceSpec, random_general, random_psd
from .operator_calculus import (
    FunctionPair,
    apply_pair,
    as_operator,
    block_diag,
    block_offdiag,
    cartesian_parts,
    from_spectrum,
    herm_fun,
    hermitian_spectrum,
    inner,
    is_hermitian,
    min_modulus,
    modulus,
    op_norm,
    polar_decompose,
    quadratic_form,
    spectral_radius,
)

seeds = st.integers(min_value=0, max_value=2 ** 32)


class FunctionalCalculusTestCase(SimpleTestCase):
    """Test f(H) for Hermitian H."""

    @given(seed=seeds, dim=st.integers(min_value=1, max_value=10))
    @settings(deadline=None, max_examples=50)
    def test_square_root_squares_back(self, seed, dim):
        """Test sqrt(H)^2 = H for random PSD H."""
        H = random_psd(InstanceSpec(dim=dim, seed=seed))
        R = herm_fun(np.sqrt, H)
        np.testing.assert_allclose(R @ R, H, atol=1e-12)
        self.assertTrue(is_hermitian(R))

    def test_negative_spectrum_rejected(self):
        """Test psd mode refuses a clearly negative eigenvalue."""
        with self.assertRaises(NotPositiveSemidefiniteError):
            herm_fun(np.sqrt, np.diag([1.0, -1.0]))

    def test_real_domain_accepts_negative_spectrum(self):
        """Test real mode applies f to the raw spectrum."""
        result = herm_fun(np.abs, np.diag([2.0, -3.0]), domain="real")
        np.testing.assert_allclose(result, np.diag([2.0, 3.0]))

    def test_round_off_negatives_clamped(self):
        """Test eigenvalues just below zero are clamped to zero."""
        result = herm_fun(np.sqrt, np.diag([1.0, -1e-12]))
        np.testing.assert_allclose(result, np.diag([1.0, 0.0]), atol=1e-15)

    def test_non_hermitian_rejected(self):
        """Test the calculus refuses non-Hermitian input."""
        with self.assertRaises(DimensionMismatchError):
            herm_fun(np.sqrt, np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_precomputed_spectrum(self):
        """Test apply_pair on a precomputed spectrum matches a fresh decomposition."""
        H = random_psd(InstanceSpec(dim=4, seed=3))
        pair = FunctionPair.power(0.3)
        spectrum = hermitian_spectrum(H)
        np.testing.assert_allclose(apply_pair(pair, 2, H, "g", spectrum=spectrum), apply_pair(pair, 2, H, "g"),
                                   atol=1e-12)
        np.testing.assert_allclose(from_spectrum(*spectrum), H, atol=1e-10)

    def test_non_finite_entries(self):
        """Test NaN entries surface as numeric failures."""
        with self.assertRaises(NumericFailureError):
            as_operator([[np.nan, 0], [0, 1]])
        with self.assertRaises(DimensionMismatchError):
            as_operator(np.ones((2, 3)))


class PolarDecompositionTestCase(SimpleTestCase):
    """Test polar factors and the modulus."""

    @given(seed=seeds, dim=st.integers(min_value=1, max_value=16))
    @settings(deadline=None, max_examples=1000)
    def test_reconstruction_residual(self, seed, dim):
        """Test ||U |A| - A|| <= 1e-10 max(1, ||A||) with U unitary."""
        A = random_general(InstanceSpec(dim=dim, seed=seed))
        U, P = polar_decompose(A)
        self.assertLessEqual(op_norm(U @ P - A), 1e-10 * max(1.0, op_norm(A)))
        np.testing.assert_allclose(U @ U.conj().T, np.eye(dim), atol=1e-12)
        np.testing.assert_allclose(P, modulus(A), atol=1e-12)

    def test_partial_isometry_for_singular_input(self):
        """Test partial=True drops the kernel of A."""
        A = np.array([[2.0, 0.0], [0.0, 0.0]])
        U, P = polar_decompose(A, partial=True)
        np.testing.assert_allclose(U, [[1, 0], [0, 0]], atol=1e-15)
        np.testing.assert_allclose(P, [[2, 0], [0, 0]], atol=1e-15)

    def test_modulus_of_rectangular(self):
        """Test |A| of a 2x3 matrix is 3x3 with |A|^2 = A*A."""
        A = np.arange(6, dtype=float).reshape(2, 3)
        M = modulus(A)
        self.assertEqual(M.shape, (3, 3))
        np.testing.assert_allclose(M @ M, A.T @ A, atol=1e-10)


class NormsTestCase(SimpleTestCase):
    """Test spectral radius, norm and minimum modulus."""

    def test_spectral_radius(self):
        """Test r([[0, 1], [0.5, 0]]) = sqrt(0.5)."""
        self.assertAlmostEqual(spectral_radius([[0, 1], [0.5, 0]]), np.sqrt(0.5), places=14)

    def test_norm_and_minimum_modulus(self):
        """Test ||diag(3, -2)|| = 3 and l(diag(3, -2)) = 2."""
        D = np.diag([3.0, -2.0])
        self.assertAlmostEqual(op_norm(D), 3.0, places=14)
        self.assertAlmostEqual(min_modulus(D), 2.0, places=14)

    def test_quadratic_form_and_inner(self):
        """Test <Mx, x> and the convention that <x, y> is linear in x."""
        x = np.array([1, 1j])
        y = np.array([1, 0])
        self.assertEqual(quadratic_form(np.diag([2, 3]), x), 5)
        self.assertEqual(inner(2j * x, y), 2j)


class BlockAndCartesianTestCase(SimpleTestCase):
    """Test Cartesian parts and block assembly."""

    def test_cartesian_parts_reassemble(self):
        """Test A = B + iC with B and C Hermitian."""
        A = random_general(InstanceSpec(dim=5, seed=3))
        B, C = cartesian_parts(A)
        self.assertTrue(is_hermitian(B))
        self.assertTrue(is_hermitian(C))
        np.testing.assert_allclose(B + 1j * C, A, atol=1e-15)

    def test_offdiag_layout(self):
        """Test [[0, B], [C, 0]] with a 1x2 B and a 2x1 C."""
        T = block_offdiag([[1, 2]], [[3], [4]])
        np.testing.assert_array_equal(T, [[0, 1, 2], [3, 0, 0], [4, 0, 0]])
        with self.assertRaises(DimensionMismatchError):
            block_offdiag([[1, 2]], [[3, 4]])

    def test_block_diag(self):
        """Test diag(A, D) places the blocks on the diagonal."""
        M = block_diag([[1]], [[2, 0], [0, 3]])
        np.testing.assert_array_equal(np.diag(M), [1, 2, 3])
        self.assertEqual(M[0, 1], 0)


class FunctionPairTestCase(SimpleTestCase):
    """Test function pairs and their application to operators."""

    def test_power_pair(self):
        """Test f = t^alpha, g = t^(1-alpha) multiply to t."""
        pair = FunctionPair.power(0.3)
        t = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(pair.f(t) * pair.g(t), t)
        self.assertEqual(pair.label, "power:0.3")
        with self.assertRaises(ParameterDomainError):
            FunctionPair.power(1.2)

    def test_tabulated_pair(self):
        """Test a tabulated pair keeps f g = t between samples."""
        t = np.array([0.0, 1.0, 4.0])
        pair = FunctionPair.tabulated(t, np.sqrt(t), np.sqrt(t), label="root-table")
        mid = np.array([2.5])
        np.testing.assert_allclose(pair.f(mid) * pair.g(mid), mid)

    def test_tabulated_pair_violation(self):
        """Test samples with f g != t are rejected."""
        with self.assertRaises(PairViolationError):
            FunctionPair.tabulated([0, 1, 2], [0, 1, 1], [0, 1, 1])
        with self.assertRaises(PairViolationError):
            FunctionPair.tabulated([1, 0], [1, 0], [1, 0])

    def test_apply_pair(self):
        """Test f(H)^2 = H for the square-root pair."""
        H = random_psd(InstanceSpec(dim=4, seed=11))
        np.testing.assert_allclose(apply_pair(FunctionPair.power(0.5), 2, H, "f"), H, atol=1e-12)
        np.testing.assert_allclose(apply_pair(FunctionPair.power(0.0), 1, H, "g"), H, atol=1e-12)
        with self.assertRaises(ParameterDomainError):
            apply_pair(FunctionPair.power(0.5), 0, H)

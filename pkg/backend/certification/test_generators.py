"""
Tests for the seeded instance generators.
"""

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from .errors import PairViolationError, ParameterDomainError
from .generators import (
    INTERTWINING_TOL,
    InstanceSpec,
    gen_cartesian_family,
    gen_function_pair,
    gen_intertwined_pair,
    identity_pair,
    intertwined_pair_from,
    mix_seed,
    random_general,
    random_hermitian,
    random_psd,
    random_unit_vector,
    random_unitary,
)
from .operator_calculus import is_hermitian, modulus, op_norm

seeds = st.integers(min_value=0, max_value=2 ** 64 - 1)


class SeedingTestCase(SimpleTestCase):
    """Test seed derivation and reproducibility."""

    def test_mix_seed_is_deterministic(self):
        """Test the same keys give the same seed and different keys differ."""
        self.assertEqual(mix_seed(42, 3), mix_seed(42, 3))
        self.assertNotEqual(mix_seed(42, 3), mix_seed(42, 4))
        self.assertNotEqual(mix_seed(42, 3), mix_seed(43, 3))
        self.assertLess(mix_seed(2 ** 64 - 1, 7, 1), 2 ** 64)

    @given(seed=seeds, dim=st.integers(min_value=1, max_value=8))
    @settings(deadline=None, max_examples=30)
    def test_generators_are_pure(self, seed, dim):
        """Test two calls with one spec produce identical arrays."""
        spec = InstanceSpec(dim=dim, seed=seed)
        for make in (random_general, random_hermitian, random_unitary, random_psd):
            np.testing.assert_array_equal(make(spec), make(spec))

    def test_condition_cap_alias(self):
        """Test conditionCap is accepted as the JSON spelling."""
        spec = InstanceSpec.model_validate({"dim": 2, "seed": 1, "conditionCap": 10})
        self.assertEqual(spec.condition_cap, 10)


class MatrixFamiliesTestCase(SimpleTestCase):
    """Test the structural properties of each family."""

    @given(seed=seeds, dim=st.integers(min_value=1, max_value=12))
    @settings(deadline=None, max_examples=50)
    def test_structures(self, seed, dim):
        """Test Hermitian, unitary and PSD outputs."""
        spec = InstanceSpec(dim=dim, seed=seed, condition_cap=100)
        self.assertTrue(is_hermitian(random_hermitian(spec)))
        U = random_unitary(spec)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(dim), atol=1e-12)
        w = np.linalg.eigvalsh(random_psd(spec))
        self.assertGreaterEqual(w.min(), 1 / 100 - 1e-12)
        self.assertLessEqual(w.max(), 1 + 1e-12)

    def test_unit_vector(self):
        """Test random unit vectors have norm one."""
        self.assertAlmostEqual(np.linalg.norm(random_unit_vector(5, 7)), 1.0, places=14)

    def test_cartesian_family(self):
        """Test k operators drawn from one stream."""
        family = gen_cartesian_family(InstanceSpec(dim=3, seed=2), 4)
        self.assertEqual(len(family), 4)
        self.assertFalse(np.allclose(family[0], family[1]))
        with self.assertRaises(ParameterDomainError):
            gen_cartesian_family(InstanceSpec(dim=3, seed=2), 0)


class IntertwinedPairTestCase(SimpleTestCase):
    """Test pairs with |A| B = B* |A|."""

    def test_residuals_on_1000_instances(self):
        """Test the intertwining residual and |A| = P up to dimension 16."""
        for seed in range(1000):
            dim = 1 + seed % 16
            family = "commuting" if seed % 4 == 3 else "inverse"
            pair = gen_intertwined_pair(InstanceSpec(dim=dim, seed=seed), family=family)
            self.assertLessEqual(pair.intertwining_residual(), INTERTWINING_TOL)
            if seed % 50 == 0:
                np.testing.assert_allclose(modulus(pair.A), pair.P, atol=1e-10)
                np.testing.assert_allclose(modulus(pair.A.conj().T), pair.modulus_adjoint, atol=1e-10)

    def test_commuting_family(self):
        """Test the commuting family has B Hermitian and commuting with P."""
        pair = gen_intertwined_pair(InstanceSpec(dim=5, seed=8), family="commuting")
        self.assertTrue(is_hermitian(pair.B))
        self.assertLessEqual(op_norm(pair.P @ pair.B - pair.B @ pair.P), 1e-12)

    def test_from_explicit_factors(self):
        """Test B = P^{-1} C for P = diag(1, 2), C = [[0, 1], [1, 0]]."""
        pair = intertwined_pair_from(np.diag([1.0, 2.0]), [[0, 1], [1, 0]], np.eye(2))
        np.testing.assert_allclose(pair.B, [[0, 1], [0.5, 0]])
        np.testing.assert_allclose(pair.A, np.diag([1.0, 2.0]))

    def test_identity_pair(self):
        """Test the identity witness pair."""
        pair = identity_pair(3)
        np.testing.assert_array_equal(pair.A @ pair.B, np.eye(3))
        self.assertEqual(pair.intertwining_residual(), 0.0)

    def test_unknown_family(self):
        """Test an unknown family name."""
        with self.assertRaises(ParameterDomainError):
            gen_intertwined_pair(InstanceSpec(dim=2, seed=0), family="triangular")


class FunctionPairSpecTestCase(SimpleTestCase):
    """Test function pair descriptors."""

    def test_power_descriptor(self):
        """Test "power:0.3" and the named square-root pair."""
        self.assertEqual(gen_function_pair("power:0.3").alpha, 0.3)
        self.assertEqual(gen_function_pair("sqrt").alpha, 0.5)
        self.assertEqual(gen_function_pair({"kind": "power", "alpha": 0.25}).alpha, 0.25)

    def test_shifted_root_pair(self):
        """Test f = t / sqrt(1 + t), g = sqrt(1 + t) keeps f g = t."""
        pair = gen_function_pair("shifted-root")
        t = np.array([0.0, 1e-3, 0.5, 1.0, 7.0])
        pair.check(t)
        np.testing.assert_allclose(pair.g(t), np.sqrt(1 + t), rtol=1e-2)

    def test_custom_samples(self):
        """Test a custom pair from raw samples."""
        pair = gen_function_pair({"kind": "custom", "samples": {"t": [0, 1, 4], "f": [0, 1, 2], "g": [0, 1, 2]}})
        self.assertEqual(pair.kind, "custom")
        with self.assertRaises(PairViolationError):
            gen_function_pair({"kind": "custom", "samples": {"t": [0, 1]}})

    def test_bad_descriptors(self):
        """Test unknown names and malformed exponents."""
        with self.assertRaises(ParameterDomainError):
            gen_function_pair("cube-root")
        with self.assertRaises(ParameterDomainError):
            gen_function_pair("power:x")
        with self.assertRaises(ParameterDomainError):
            gen_function_pair("power:1.5")

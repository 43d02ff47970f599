"""
Tests for the suite registry: catalogue coverage, instance construction and parameter validation.
"""

import numpy as np
from django.test import SimpleTestCase

from .errors import ConfigError
from .rkhs_model import build_space
from .suites import (
    TrialContext,
    expand_grid,
    get_suite,
    prepare_sum_space,
    registered_suites,
    run_trial,
)
from .utils import get_available_suites, get_bundle, get_suite_config


def context_for(suite, trial, space, sum_space, params):
    return TrialContext(
        suite_id=suite.suite_id,
        trial=trial,
        seed=1000 + trial,
        params=params,
        space=space if suite.needs_space else None,
        sum_space=sum_space if suite.family == "block" else None,
        angle_count=360,
        witness=suite.witness and trial == 0,
    )


class CatalogueTestCase(SimpleTestCase):
    """Test the YAML catalogue against the registry."""

    def test_every_catalogue_suite_is_registered(self):
        """Test catalogue and registry list the same suite ids."""
        self.assertEqual(set(get_available_suites()), set(registered_suites()))

    def test_default_bundle(self):
        """Test the default bundle: 500 trials, diagonal dims 2..8 and one Hardy space."""
        bundle = get_bundle("all")
        self.assertEqual(bundle["trials"], 500)
        models = [space["model"] for space in bundle["spaces"]]
        self.assertEqual(models.count("diagonal"), 7)
        self.assertEqual(models.count("hardy"), 1)

    def test_unknown_suite(self):
        """Test unknown ids raise a configuration error."""
        with self.assertRaises(ConfigError):
            get_suite("no-such-suite")
        with self.assertRaises(ConfigError):
            get_suite_config("no-such-suite")
        with self.assertRaises(ConfigError):
            get_bundle("nightly")

    def test_default_grids_are_valid(self):
        """Test every default parameter grid passes validation."""
        for suite_id in registered_suites():
            self.assertGreaterEqual(len(get_suite(suite_id).param_grid()), 1)


class ParameterGridTestCase(SimpleTestCase):
    """Test grid expansion and validation."""

    def test_expand_grid(self):
        """Test the Cartesian product keeps key order."""
        combos = expand_grid({"p": [2, 3], "alpha": [2]})
        self.assertEqual(combos, [{"p": 2, "alpha": 2}, {"p": 3, "alpha": 2}])
        self.assertEqual(expand_grid({}), [{}])

    def test_overrides_replace_defaults(self):
        """Test per-suite overrides replace only the named keys."""
        combos = get_suite("thm-power-young").param_grid({"p": [2]})
        self.assertEqual({c["p"] for c in combos}, {2})
        self.assertEqual({c["alpha"] for c in combos}, {2, 3})

    def test_precondition_violations(self):
        """Test grids violating certifier preconditions are refused."""
        cases = [
            ("thm-power-young", {"alpha": [1.5]}),
            ("prop-refined", {"p": [1]}),
            ("cor-alpha", {"alpha": [1.2]}),
            ("thm-minmod", {"exponent": ["square"]}),
            ("offdiag-convex", {"h": ["power:0.5"]}),
            ("lemma-schwarz", {"fp": ["cube-root"]}),
            ("power-sum", {"k": [0]}),
            ("mixed-schwarz", {"p": [2]}),
            ("young-scalar", {"alpha": [0.5]}),
        ]
        for suite_id, overrides in cases:
            with self.assertRaises(ConfigError, msg=suite_id):
                get_suite(suite_id).param_grid(overrides)


class TrialContextTestCase(SimpleTestCase):
    """Test seeded instance construction."""

    def setUp(self):
        self.space = build_space("diagonal", 3, {"type": "index"})

    def test_matched_instances(self):
        """Test refined and unrefined suites see the same pair for a trial."""
        a = TrialContext(suite_id="thm-half-rB", trial=5, seed=77, params={}, space=self.space)
        b = TrialContext(suite_id="thm-young-refined", trial=5, seed=77, params={}, space=self.space)
        np.testing.assert_array_equal(a.pair().A, b.pair().A)
        np.testing.assert_array_equal(a.pair().B, b.pair().B)

    def test_commuting_family_every_fourth_trial(self):
        """Test trial 3 draws the commuting family."""
        self.assertEqual(TrialContext("thm-half-rB", 3, 9, {}, self.space).pair().family, "commuting")
        self.assertEqual(TrialContext("thm-half-rB", 2, 9, {}, self.space).pair().family, "inverse")

    def test_space_free_dimension(self):
        """Test space-free suites draw their dimension from the configured range."""
        dims = {TrialContext("sum-norm", t, t, {}, dims=(2, 8)).dim for t in range(200)}
        self.assertTrue(dims <= set(range(2, 9)))
        self.assertGreater(len(dims), 1)

    def test_witness_trial(self):
        """Test the witness trial uses the identity pair."""
        ctx = TrialContext("thm-half-rB", 0, 1, {"fp": "sqrt"}, self.space, witness=True)
        self.assertEqual(ctx.pair().family, "identity")
        cert = run_trial(get_suite("thm-half-rB"), ctx)
        self.assertLessEqual(abs(cert.gap), 1e-12)

    def test_schwarz_suites_switch_family(self):
        """Test pairs other than t^{1/2} move the Schwarz-based suites to the commuting family."""
        other = TrialContext("prop-refined", 2, 9, {"fp": "power:0.3", "p": 2}, self.space)
        self.assertEqual(other.schwarz_pair(other.fp()).family, "commuting")
        root = TrialContext("prop-refined", 2, 9, {"fp": "sqrt", "p": 2}, self.space)
        self.assertEqual(root.schwarz_pair(root.fp()).family, "inverse")
        cases = [
            ("lemma-schwarz", {"fp": "power:0.3"}),
            ("prop-refined", {"fp": "shifted-root", "p": 2}),
            ("cor-alpha", {"p": 2, "alpha": 1}),
        ]
        for suite_id, params in cases:
            for trial in range(1, 9):
                ctx = TrialContext(suite_id, trial, 500 + trial, params, self.space)
                cert = run_trial(get_suite(suite_id), ctx)
                self.assertTrue(cert.passed, (suite_id, trial))
                self.assertTrue(cert.details["schwarz_applies"])

    def test_combinations_share_the_pair(self):
        """Test contexts of one trial hand out the same pair object."""
        shared = {}
        a = TrialContext("thm-power-young", 2, 9, {"p": 2}, self.space, shared=shared)
        b = TrialContext("thm-power-young", 2, 9, {"p": 3}, self.space, shared=shared)
        self.assertIs(a.pair(), b.pair())
        self.assertIsNot(a.pair(), TrialContext("thm-power-young", 2, 9, {}, self.space).pair())


class SuiteExecutionTestCase(SimpleTestCase):
    """Test every suite end to end on small spaces."""

    def test_all_suites_pass_on_diagonal_and_hardy(self):
        """Test the first parameter combination of every suite over a few trials."""
        spaces = [
            build_space("diagonal", 3, {"type": "index"}),
            build_space("hardy", 4, {"type": "disc", "radial": 4, "angular": 16, "rmax": 0.95}),
        ]
        for space in spaces:
            sum_space = prepare_sum_space(space, 256)
            for suite_id in registered_suites():
                suite = get_suite(suite_id)
                for params in suite.param_grid()[:2]:
                    for trial in range(4):
                        cert = run_trial(suite, context_for(suite, trial, space, sum_space, params))
                        self.assertTrue(cert.passed, f"{suite_id} {params} trial {trial} on {space.label}")

    def test_sum_space_respects_limit(self):
        """Test the block suites' direct sum stays under the grid limit."""
        space = build_space("hardy", 8, {"type": "disc", "radial": 20, "angular": 64, "rmax": 0.95})
        sum_space = prepare_sum_space(space, 4096)
        self.assertLessEqual(sum_space.size, 4096)
        self.assertEqual(sum_space.dim, 16)

"""
Suite registry.

A suite turns a trial seed into a concrete instance and hands it to one
certifier. Instances depend only on (trial seed, dimension), so suites that are
compared with each other (refined vs unrefined) see the same operators.

lemma-schwarz, prop-refined and cor-alpha move to the commuting family
whenever the function pair is not t^{1/2}: only there is the Schwarz-type
bound |<ABx,y>| <= r(B) ||f(|A|)x|| ||g(|A*|)y|| guaranteed for other pairs.

Sub-seed keys used by ``TrialContext``:
    0 dimension of space-free suites
    1 first operator (pair, PSD, general, family)
    2 second operator / first vector
    3 second vector
    4 grid indices and scalar draws
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, List, Optional, Tuple

import numpy as np

from .certifiers import (
    Certificate,
    Tolerance,
    cert_block_diagonal,
    cert_cartesian_1,
    cert_cartesian_2,
    cert_cor_alpha,
    cert_half_power_norm,
    cert_lemma_refined_cs,
    cert_lemma_schwarz,
    cert_mccarthy,
    cert_mixed_schwarz,
    cert_offdiag_convex,
    cert_offdiag_norm,
    cert_offdiag_power,
    cert_polarization,
    cert_power_sum,
    cert_prop_refined,
    cert_remark_chain,
    cert_rotation_scan,
    cert_spectral_radius_product,
    cert_sum_norm,
    cert_thm_half_rB,
    cert_thm_minmod,
    cert_thm_power_young,
    cert_thm_power_young_refined,
    cert_thm_young_refined,
    cert_young_scalar,
)
from .certifiers.block_operators import convex_map
from .certifiers.products import _check_power_young, is_sqrt_pair
from .errors import ConfigError, ParameterDomainError
from .generators import (
    InstanceSpec,
    IntertwinedPair,
    gen_cartesian_family,
    gen_function_pair,
    gen_intertwined_pair,
    identity_pair,
    mix_seed,
    random_general,
    random_psd,
    random_unit_vector,
)
from .operator_calculus import FunctionPair
from .rkhs_model import DirectSumSpace, SampledSpace, direct_sum, subsample
from .utils import load_yaml_config

logger = logging.getLogger(__name__)

# Every fourth trial draws from the commuting intertwined family
COMMUTING_EVERY = 4


@dataclass(frozen=True)
class TrialContext:
    suite_id: str
    trial: int
    seed: int
    params: Dict[str, Any]
    space: Optional[SampledSpace] = None
    sum_space: Optional[DirectSumSpace] = None
    tol: Tolerance = Tolerance()
    condition_cap: float = 1e3
    angle_count: int = 720
    dims: Tuple[int, int] = (2, 8)
    witness: bool = False
    # instances shared by every parameter combination of one trial
    shared: Dict[Hashable, Any] = field(default_factory=dict, compare=False, repr=False)

    @property
    def dim(self) -> int:
        if self.space is not None:
            return self.space.dim
        lo, hi = self.dims
        return lo + mix_seed(self.seed, 0) % (hi - lo + 1)

    def spec(self, key: int, kind: str = "general") -> InstanceSpec:
        return InstanceSpec(dim=self.dim, seed=mix_seed(self.seed, key),
                            condition_cap=self.condition_cap, kind=kind)

    def rng(self, key: int) -> np.random.Generator:
        return np.random.default_rng(mix_seed(self.seed, key))

    def unit_vector(self, key: int) -> np.ndarray:
        return random_unit_vector(mix_seed(self.seed, key), self.dim)

    def pair(self, family: Optional[str] = None) -> IntertwinedPair:
        """
        The trial's intertwined pair: the identity on the witness trial, otherwise
        ``family`` or, when not given, the commuting family on every fourth trial.
        """
        if self.witness:
            family = "identity"
        elif family is None:
            family = "commuting" if self.trial % COMMUTING_EVERY == COMMUTING_EVERY - 1 else "inverse"
        key = ("pair", family)
        if key not in self.shared:
            self.shared[key] = (identity_pair(self.dim) if family == "identity"
                                else gen_intertwined_pair(self.spec(1, "intertwined-pair"), family=family))
        return self.shared[key]

    def schwarz_pair(self, fp: FunctionPair) -> IntertwinedPair:
        """The trial's pair, moved to the commuting family when ``fp`` needs it for the Schwarz bound."""
        return self.pair(None if is_sqrt_pair(fp) else "commuting")

    def fp(self) -> FunctionPair:
        return gen_function_pair(self.params["fp"])

    def grid_indices(self, count: int) -> List[int]:
        return [int(i) for i in self.rng(4).integers(0, self.space.size, count)]


SuiteFn = Callable[[TrialContext], Certificate]
_REGISTRY: Dict[str, SuiteFn] = {}


def register(suite_id: str):
    def decorator(fn: SuiteFn) -> SuiteFn:
        _REGISTRY[suite_id] = fn
        return fn
    return decorator


def registered_suites() -> List[str]:
    return list(_REGISTRY)


# --- products of intertwined pairs ---

@register("lemma-schwarz")
def _lemma_schwarz(ctx: TrialContext) -> Certificate:
    fp = ctx.fp()
    x = ctx.unit_vector(2)
    y = x if ctx.witness else ctx.unit_vector(3)
    return cert_lemma_schwarz(ctx.schwarz_pair(fp), fp, ctx.space, x, y, ctx.tol)


@register("lemma-refined-cs")
def _lemma_refined_cs(ctx: TrialContext) -> Certificate:
    H = random_psd(ctx.spec(1, "psd"))
    return cert_lemma_refined_cs(H, ctx.params["p"], ctx.unit_vector(2), ctx.unit_vector(3), ctx.tol)


@register("thm-half-rB")
def _thm_half_rb(ctx: TrialContext) -> Certificate:
    return cert_thm_half_rB(ctx.pair(), ctx.fp(), ctx.space, ctx.tol)


@register("remark-chain")
def _remark_chain(ctx: TrialContext) -> Certificate:
    return cert_remark_chain(ctx.pair(), ctx.fp(), ctx.space, ctx.tol)


@register("thm-power-young")
def _thm_power_young(ctx: TrialContext) -> Certificate:
    return cert_thm_power_young(ctx.pair(), ctx.fp(), ctx.space, ctx.params["p"], ctx.params["alpha"], ctx.tol)


@register("prop-refined")
def _prop_refined(ctx: TrialContext) -> Certificate:
    fp = ctx.fp()
    lam, mu = ctx.grid_indices(2)
    return cert_prop_refined(ctx.schwarz_pair(fp), fp, ctx.space, ctx.params["p"], lam, mu, ctx.tol)


@register("cor-alpha")
def _cor_alpha(ctx: TrialContext) -> Certificate:
    alpha = ctx.params["alpha"]
    lam, mu = ctx.grid_indices(2)
    pair = ctx.schwarz_pair(FunctionPair.power(alpha))
    return cert_cor_alpha(pair, ctx.space, ctx.params["p"], alpha, lam, mu, ctx.tol)


@register("thm-minmod")
def _thm_minmod(ctx: TrialContext) -> Certificate:
    return cert_thm_minmod(ctx.pair(), ctx.fp(), ctx.space, ctx.params["p"],
                           ctx.params.get("exponent", "reciprocal"), ctx.tol)


@register("young-scalar")
def _young_scalar(ctx: TrialContext) -> Certificate:
    rng = ctx.rng(4)
    a, b = np.exp(rng.uniform(-5, 5, 2))
    return cert_young_scalar(float(a), float(b), float(rng.random()), ctx.tol)


@register("thm-young-refined")
def _thm_young_refined(ctx: TrialContext) -> Certificate:
    return cert_thm_young_refined(ctx.pair(), ctx.fp(), ctx.space, ctx.tol)


@register("thm-power-young-refined")
def _thm_power_young_refined(ctx: TrialContext) -> Certificate:
    return cert_thm_power_young_refined(ctx.pair(), ctx.fp(), ctx.space, ctx.params["p"],
                                        ctx.params["alpha"], ctx.tol)


# --- block operators ---

def _blocks(ctx: TrialContext) -> Tuple[np.ndarray, np.ndarray]:
    return random_general(ctx.spec(1)), random_general(ctx.spec(2))


@register("offdiag-convex")
def _offdiag_convex(ctx: TrialContext) -> Certificate:
    B, C = _blocks(ctx)
    return cert_offdiag_convex(B, C, ctx.fp(), ctx.params["h"], ctx.sum_space, ctx.angle_count, ctx.tol)


@register("offdiag-power")
def _offdiag_power(ctx: TrialContext) -> Certificate:
    B, C = _blocks(ctx)
    return cert_offdiag_power(B, C, ctx.params["alpha"], ctx.params["p"], ctx.sum_space, ctx.tol)


@register("block-diagonal")
def _block_diagonal(ctx: TrialContext) -> Certificate:
    A, D = _blocks(ctx)
    return cert_block_diagonal(A, D, ctx.sum_space, ctx.tol)


@register("offdiag-norm")
def _offdiag_norm(ctx: TrialContext) -> Certificate:
    B, C = _blocks(ctx)
    return cert_offdiag_norm(B, C, ctx.sum_space, ctx.tol)


@register("rotation-scan")
def _rotation_scan(ctx: TrialContext) -> Certificate:
    return cert_rotation_scan(random_general(ctx.spec(1)), ctx.space, ctx.angle_count, ctx.tol)


@register("polarization")
def _polarization(ctx: TrialContext) -> Certificate:
    scale = np.exp(ctx.rng(4).uniform(-3, 3, 2))
    return cert_polarization(scale[0] * ctx.unit_vector(2), scale[1] * ctx.unit_vector(3))


# --- Cartesian decomposition and scalar lemmas ---

@register("mccarthy")
def _mccarthy(ctx: TrialContext) -> Certificate:
    H = random_psd(ctx.spec(1, "psd"))
    x = np.exp(ctx.rng(4).uniform(-2, 2)) * ctx.unit_vector(2)
    return cert_mccarthy(H, ctx.params["p"], x, ctx.tol)


@register("mixed-schwarz")
def _mixed_schwarz(ctx: TrialContext) -> Certificate:
    return cert_mixed_schwarz(random_general(ctx.spec(1)), ctx.params["p"],
                              ctx.unit_vector(2), ctx.unit_vector(3), ctx.tol)


@register("power-sum")
def _power_sum(ctx: TrialContext) -> Certificate:
    xs = np.exp(ctx.rng(4).uniform(-3, 3, int(ctx.params["k"])))
    return cert_power_sum(xs, ctx.params["p"], ctx.tol)


def _family(ctx: TrialContext) -> List[np.ndarray]:
    k = int(ctx.params["k"])
    if ctx.witness:
        return [np.eye(ctx.dim, dtype=complex) for _ in range(k)]
    return gen_cartesian_family(ctx.spec(1), k)


@register("cartesian-1")
def _cartesian_1(ctx: TrialContext) -> Certificate:
    return cert_cartesian_1(_family(ctx), ctx.space, ctx.params["p"], ctx.tol)


@register("cartesian-2")
def _cartesian_2(ctx: TrialContext) -> Certificate:
    return cert_cartesian_2(_family(ctx), ctx.space, ctx.params["p"], ctx.tol)


# --- classical norm inequalities ---

@register("spectral-radius-product")
def _spectral_radius_product(ctx: TrialContext) -> Certificate:
    return cert_spectral_radius_product(random_general(ctx.spec(1)), random_general(ctx.spec(2)), ctx.tol)


@register("half-power-norm")
def _half_power_norm(ctx: TrialContext) -> Certificate:
    return cert_half_power_norm(random_psd(ctx.spec(1, "psd")), random_psd(ctx.spec(2, "psd")), ctx.tol)


@register("sum-norm")
def _sum_norm(ctx: TrialContext) -> Certificate:
    return cert_sum_norm(random_psd(ctx.spec(1, "psd")), random_psd(ctx.spec(2, "psd")), ctx.tol)


# --- parameter validation ---

def _at_least(name: str, bound: float):
    def check(params):
        if params[name] < bound:
            raise ParameterDomainError(f"{name} must be at least {bound}, got {params[name]}")
    return check


def _within(name: str, lo: float, hi: float):
    def check(params):
        if not lo <= params[name] <= hi:
            raise ParameterDomainError(f"{name} must lie in [{lo}, {hi}], got {params[name]}")
    return check


def _positive(name: str):
    def check(params):
        if params[name] <= 0:
            raise ParameterDomainError(f"{name} must be positive, got {params[name]}")
    return check


def _positive_int(name: str):
    def check(params):
        value = params[name]
        if isinstance(value, bool) or int(value) != value or value < 1:
            raise ParameterDomainError(f"{name} must be a positive integer, got {value}")
    return check


def _exponent(params):
    if params["exponent"] not in ("reciprocal", "power-of-two"):
        raise ParameterDomainError(f"exponent must be 'reciprocal' or 'power-of-two', got {params['exponent']}")


PARAM_CHECKS: Dict[str, List[Callable[[Dict[str, Any]], None]]] = {
    "lemma-refined-cs": [_at_least("p", 2)],
    "thm-power-young": [lambda prm: _check_power_young(prm["p"], prm["alpha"])],
    "thm-power-young-refined": [lambda prm: _check_power_young(prm["p"], prm["alpha"])],
    "prop-refined": [_at_least("p", 2)],
    "cor-alpha": [_at_least("p", 2), _within("alpha", 0, 1)],
    "thm-minmod": [_at_least("p", 2), _exponent],
    "offdiag-power": [_within("alpha", 0, 1), _at_least("p", 1)],
    "mccarthy": [_positive("p")],
    "mixed-schwarz": [_within("p", 0, 1)],
    "power-sum": [_at_least("p", 1), _positive_int("k")],
    "cartesian-1": [_at_least("p", 1), _positive_int("k")],
    "cartesian-2": [_at_least("p", 1), _positive_int("k")],
}


def validate_params(suite_id: str, params: Dict[str, Any], expected_keys) -> None:
    """Raise ``ConfigError`` when a parameter combination violates the certifier's preconditions."""
    missing = set(expected_keys) - set(params)
    unknown = set(params) - set(expected_keys)
    if missing or unknown:
        raise ConfigError(
            f"{suite_id}: parameters must be {sorted(expected_keys)} "
            f"(missing {sorted(missing)}, unknown {sorted(unknown)})"
        )
    try:
        if "fp" in params:
            gen_function_pair(params["fp"])
        if "h" in params:
            convex_map(params["h"])
        for check in PARAM_CHECKS.get(suite_id, []):
            check(params)
    except (ParameterDomainError, TypeError, ValueError) as exc:
        raise ConfigError(f"{suite_id}: invalid parameters {params}: {exc}") from exc


def expand_grid(grid: Dict[str, List[Any]]) -> List[Dict[str, Any]]:
    """Cartesian product of a parameter grid, keys in their given order."""
    keys = list(grid)
    values = [v if isinstance(v, list) else [v] for v in grid.values()]
    return [dict(zip(keys, combo)) for combo in itertools.product(*values)]


@dataclass(frozen=True)
class Suite:
    suite_id: str
    name: str
    family: str
    needs_space: bool
    witness: bool
    default_params: Dict[str, List[Any]]

    @property
    def evaluate(self) -> SuiteFn:
        return _REGISTRY[self.suite_id]

    def param_grid(self, overrides: Optional[Dict[str, List[Any]]] = None) -> List[Dict[str, Any]]:
        grid = dict(self.default_params)
        grid.update(overrides or {})
        combos = expand_grid(grid)
        for combo in combos:
            validate_params(self.suite_id, combo, self.default_params.keys())
        return combos


def get_suite(suite_id: str) -> Suite:
    suites = load_yaml_config().get("suites", {})
    if suite_id not in suites or suite_id not in _REGISTRY:
        raise ConfigError(f"Unknown suite: {suite_id}")
    cfg = suites[suite_id]
    return Suite(
        suite_id=suite_id,
        name=cfg.get("name", suite_id),
        family=cfg.get("family", "general"),
        needs_space=bool(cfg.get("needs_space", True)),
        witness=bool(cfg.get("witness", False)),
        default_params=dict(cfg.get("params") or {}),
    )


def prepare_sum_space(space: SampledSpace, block_grid_limit: int) -> DirectSumSpace:
    """space (+) space, with both factors stride-subsampled so the product grid stays under the limit."""
    per_factor = max(1, math.isqrt(block_grid_limit))
    factor = subsample(space, per_factor)
    if factor.size < space.size:
        logger.info("Subsampled %s to %d points per block factor", space.label, factor.size,
                    extra={"suite": "-"})
    return direct_sum(factor, factor)


def run_trial(suite: Suite, ctx: TrialContext) -> Certificate:
    cert = suite.evaluate(ctx)
    logger.debug("%s trial %d: lhs=%.6g rhs=%.6g passed=%s", suite.suite_id, ctx.trial, cert.lhs, cert.rhs,
                 cert.passed, extra={"suite": suite.suite_id, "trial": ctx.trial})
    return cert

"""
Seeded random instances.

Every generator is a pure function of its ``InstanceSpec``: a fresh
``numpy.random.default_rng(seed)`` is created per call and consumed in a fixed
order. Entry distribution for "general" matrices: independent standard complex
Gaussians (X + iY)/sqrt(2).

Per-trial seeds come from ``mix_seed(master_seed, trial)``, which hashes the
pair through ``numpy.random.SeedSequence`` so that trial seeds do not depend on
evaluation order.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, List, Literal, Optional, Union

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import unitary_group

from .errors import NumericFailureError, PairViolationError, ParameterDomainError
from .operator_calculus import FunctionPair, as_operator, op_norm

logger = logging.getLogger(__name__)

INTERTWINING_TOL = 1e-9

# Tabulation grid for the built-in custom pair
SHIFTED_ROOT_T = np.concatenate([[0.0], np.logspace(-6, 3, 400)])


class InstanceSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    dim: int = Field(..., ge=1)
    seed: int = Field(..., ge=0, lt=2 ** 64)
    condition_cap: float = Field(1e3, ge=1, alias="conditionCap")
    kind: Literal["hermitian", "psd", "unitary", "intertwined-pair", "general"] = "general"


class PairSpec(BaseModel):
    """``{"kind": "power", "alpha": a}`` or ``{"kind": "custom", "name": ...}`` / ``{"kind": "custom", "samples": {...}}``."""
    kind: Literal["power", "custom"]
    alpha: Optional[float] = None
    name: Optional[str] = None
    samples: Optional[Dict[str, List[float]]] = None


@dataclass(frozen=True)
class IntertwinedPair:
    """A = U P with P = |A| and P B = B* P (= C, Hermitian)."""
    A: np.ndarray
    B: np.ndarray
    P: np.ndarray
    U: np.ndarray
    C: np.ndarray
    family: str = "inverse"
    # derived operators shared by every certifier evaluated on this instance
    cache: Dict[Hashable, Any] = field(default_factory=dict, compare=False, repr=False)

    def memo(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        if key not in self.cache:
            self.cache[key] = compute()
        return self.cache[key]

    @property
    def modulus_adjoint(self) -> np.ndarray:
        """|A*| = U P U*, valid because U is unitary."""
        return self.memo("modulus_adjoint", self._modulus_adjoint)

    def _modulus_adjoint(self) -> np.ndarray:
        M = self.U @ self.P @ self.U.conj().T
        return (M + M.conj().T) / 2

    def intertwining_residual(self) -> float:
        return op_norm(self.P @ self.B - self.B.conj().T @ self.P)


def mix_seed(master_seed: int, *keys: int) -> int:
    """Derive an independent 64-bit seed from the master seed and integer keys (e.g. trial index)."""
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def _rng(spec: InstanceSpec) -> np.random.Generator:
    return np.random.default_rng(spec.seed)


def _general(rng: np.random.Generator, dim: int) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)


def _hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    G = _general(rng, dim)
    return (G + G.conj().T) / 2


def _unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(dim, random_state=rng).astype(complex)


def _psd(rng: np.random.Generator, dim: int, condition_cap: float) -> np.ndarray:
    # log-uniform spectrum in [1/cap, 1]
    w = np.exp(-rng.random(dim) * np.log(condition_cap))
    Q = _unitary(rng, dim)
    P = (Q * w) @ Q.conj().T
    return (P + P.conj().T) / 2


def random_general(spec: InstanceSpec) -> np.ndarray:
    return _general(_rng(spec), spec.dim)


def random_hermitian(spec: InstanceSpec) -> np.ndarray:
    return _hermitian(_rng(spec), spec.dim)


def random_unitary(spec: InstanceSpec) -> np.ndarray:
    return _unitary(_rng(spec), spec.dim)


def random_psd(spec: InstanceSpec) -> np.ndarray:
    """PSD matrix with eigenvalues in [1/condition_cap, 1]."""
    return _psd(_rng(spec), spec.dim, spec.condition_cap)


def random_unit_vector(seed: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def intertwined_pair_from(P, C, U, family: str = "inverse") -> IntertwinedPair:
    """
    Build the pair from explicit factors: B = P^{-1} C, A = U P.

    P must be positive definite and C Hermitian; then P B = C = C* = B* P.
    """
    P = as_operator(P)
    C = as_operator(C)
    U = as_operator(U)
    try:
        B = scipy.linalg.solve(P, C, assume_a="pos")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericFailureError(f"Cannot invert the positive part: {exc}") from exc
    pair = IntertwinedPair(A=U @ P, B=B, P=P, U=U, C=C, family=family)
    _check_pair(pair)
    return pair


def _check_pair(pair: IntertwinedPair) -> None:
    residual = pair.intertwining_residual()
    scale = max(1.0, op_norm(pair.P) * op_norm(pair.B))
    if not np.isfinite(residual) or residual > INTERTWINING_TOL * scale:
        raise NumericFailureError(
            f"Intertwining residual {residual:.3e} exceeds {INTERTWINING_TOL:.0e} x {scale:.3g}"
        )
    logger.debug("%s pair: intertwining residual %.2e", pair.family, residual)


def gen_intertwined_pair(spec: InstanceSpec, family: str = "inverse") -> IntertwinedPair:
    """
    Random (A, B) with |A| B = B* |A|.

    family "inverse": P random PSD, C random Hermitian, B = P^{-1} C.
    family "commuting": B = c0 + c1 P + c2 P^2 with real Gaussian c's.
    In both cases A = U P for a Haar unitary U.
    """
    rng = _rng(spec)
    P = _psd(rng, spec.dim, spec.condition_cap)

    if family == "inverse":
        C = _hermitian(rng, spec.dim)
        U = _unitary(rng, spec.dim)
        return intertwined_pair_from(P, C, U, family=family)

    if family == "commuting":
        c0, c1, c2 = rng.standard_normal(3)
        B = c0 * np.eye(spec.dim) + c1 * P + c2 * (P @ P)
        B = (B + B.conj().T) / 2
        U = _unitary(rng, spec.dim)
        C = P @ B
        pair = IntertwinedPair(A=U @ P, B=B, P=P, U=U, C=(C + C.conj().T) / 2, family=family)
        _check_pair(pair)
        return pair

    raise ParameterDomainError(f"Unknown intertwined family: {family}")


def identity_pair(dim: int) -> IntertwinedPair:
    """A = B = I, the equality witness of the product theorems."""
    eye = np.eye(dim, dtype=complex)
    return IntertwinedPair(A=eye, B=eye.copy(), P=eye.copy(), U=eye.copy(), C=eye.copy(), family="identity")


def gen_cartesian_family(spec: InstanceSpec, k: int) -> List[np.ndarray]:
    """k independent general operators drawn in sequence from one seeded stream."""
    if k < 1:
        raise ParameterDomainError(f"Family size must be positive, got {k}")
    rng = _rng(spec)
    return [_general(rng, spec.dim) for _ in range(k)]


def _shifted_root_pair() -> FunctionPair:
    t = SHIFTED_ROOT_T
    return FunctionPair.tabulated(t, t / np.sqrt(1 + t), np.sqrt(1 + t), label="shifted-root")


NAMED_PAIRS = {
    "sqrt": lambda: FunctionPair.power(0.5),
    "shifted-root": _shifted_root_pair,
}


def gen_function_pair(spec: Union[str, Dict[str, Any], PairSpec]) -> FunctionPair:
    """
    Build a FunctionPair from ``"power:0.3"``, a named pair ("sqrt", "shifted-root"),
    or a PairSpec / its JSON dict.
    """
    if isinstance(spec, str):
        if spec.startswith("power:"):
            try:
                alpha = float(spec.split(":", 1)[1])
            except ValueError as exc:
                raise ParameterDomainError(f"Bad power pair descriptor: {spec}") from exc
            return FunctionPair.power(alpha)
        if spec in NAMED_PAIRS:
            return NAMED_PAIRS[spec]()
        raise ParameterDomainError(f"Unknown function pair: {spec}")

    if not isinstance(spec, PairSpec):
        spec = PairSpec.model_validate(spec)

    if spec.kind == "power":
        if spec.alpha is None:
            raise ParameterDomainError("Power pair needs alpha")
        return FunctionPair.power(spec.alpha)

    if spec.name:
        return gen_function_pair(spec.name)
    if not spec.samples or not {"t", "f", "g"} <= set(spec.samples):
        raise PairViolationError("Custom pair needs samples with keys t, f, g")
    return FunctionPair.tabulated(spec.samples["t"], spec.samples["f"], spec.samples["g"])

"""Berezin-number bounds for 2x2 block operators on H1 (+) H2."""

from typing import Callable, Tuple, Union

import numpy as np

from ..berezin_engine import BerezinEvaluation, berezin_number, berezin_set, rotation_scan_ber
from ..errors import DimensionMismatchError, ParameterDomainError
from ..operator_calculus import (
    FunctionPair,
    apply_pair,
    as_operator,
    block_diag,
    block_offdiag,
    herm_fun,
    hermitian_spectrum,
    inner,
    modulus,
    op_norm,
)
from ..rkhs_model import DirectSumSpace, KernelSpace
from .base import DEFAULT_TOLERANCE, Certificate, Tolerance, agreement, certificate, compare

POLARIZATION_TOL = 1e-10
SCALAR_AGREEMENT_TOL = 1e-10


def convex_map(spec: str) -> Tuple[Callable[[np.ndarray], np.ndarray], str]:
    """
    Whitelisted convex maps with h(0) = 0: ``"power:p"`` (p >= 1) and ``"expm1"``.

    Returns:
        (vectorized map, label)
    """
    if spec == "expm1":
        return np.expm1, "expm1"
    if spec.startswith("power:"):
        try:
            p = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ParameterDomainError(f"Bad convex map descriptor: {spec}") from exc
        if p < 1:
            raise ParameterDomainError(f"t^p is convex only for p >= 1, got {p}")
        return (lambda t: np.power(np.clip(t, 0, None), p)), f"power:{p:g}"
    raise ParameterDomainError(f"Convex map must be 'power:p' or 'expm1', got {spec}")


def _check_blocks(B, C, sum_space: DirectSumSpace) -> Tuple[np.ndarray, np.ndarray]:
    B = as_operator(B, square=False)
    C = as_operator(C, square=False)
    n1, n2 = sum_space.left.dim, sum_space.right.dim
    if B.shape != (n1, n2) or C.shape != (n2, n1):
        raise DimensionMismatchError(
            f"Blocks {B.shape}, {C.shape} do not fit a direct sum of dims ({n1}, {n2})"
        )
    return B, C


def _h_of_pair(h, fp: FunctionPair, X: np.ndarray) -> np.ndarray:
    """h(f^2(|X|)) + h(g^2(|X|))."""
    abs_X = modulus(X)
    spectrum = hermitian_spectrum(abs_X)
    return (herm_fun(h, apply_pair(fp, 2, abs_X, "f", spectrum=spectrum), domain="real")
            + herm_fun(h, apply_pair(fp, 2, abs_X, "g", spectrum=spectrum), domain="real"))


def _convex_rhs(h, fp: FunctionPair, B: np.ndarray, C: np.ndarray) -> float:
    return 0.25 * op_norm(_h_of_pair(h, fp, C)) + 0.25 * op_norm(_h_of_pair(h, fp, B))


def _offdiag_evaluation(B, C, sum_space: DirectSumSpace) -> Tuple[np.ndarray, np.ndarray, np.ndarray,
                                                                   BerezinEvaluation]:
    B, C = _check_blocks(B, C, sum_space)
    T = block_offdiag(B, C)
    return B, C, T, berezin_set(T, sum_space)


def cert_offdiag_convex(B, C, fp: FunctionPair, h: Union[str, Tuple[Callable, str]], sum_space: DirectSumSpace,
                        angle_count: int = 720, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    h(ber(T)) <= ||h(f^2(|C|)) + h(g^2(|C|))||/4 + ||h(f^2(|B|)) + h(g^2(|B|))||/4
    for T = [[0, B], [C, 0]] and a whitelisted convex h.

    Links: ber(T) <= (||B|| + ||C||)/2 and the rotation-scan bracket of ber(T).
    """
    h_fn, h_label = convex_map(h) if isinstance(h, str) else h
    B, C, T, evaluation = _offdiag_evaluation(B, C, sum_space)
    ber_T = evaluation.ber_value

    rhs = _convex_rhs(h_fn, fp, B, C)
    lhs = float(h_fn(np.array(ber_T)))
    headline = compare("offdiag-convex", lhs, rhs, tol, witness_index=evaluation.argmax_index)

    scan = rotation_scan_ber(T, sum_space, angle_count)
    links = [
        compare("offdiag-norm", ber_T, 0.5 * (op_norm(B) + op_norm(C)), tol),
        compare("rotation-scan-upper", scan, ber_T, tol),
        compare("rotation-scan-lower", np.cos(np.pi / angle_count) * ber_T, scan, tol),
    ]
    return certificate("offdiag-convex", headline, "sup",
                       params={"fp": fp.label, "h": h_label, "angle_count": angle_count},
                       links=links, details={"ber_T": ber_T, "rotation_scan": scan})


def cert_offdiag_power(B, C, alpha: float, p: float, sum_space: DirectSumSpace,
                       tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    ber(T)^p <= ||(|B|^{2p alpha} + |B|^{2p(1-alpha)})||/4 + ||(|C|^{2p alpha} + |C|^{2p(1-alpha)})||/4.

    Cross-checked against the convex bound with h = t^p and the power pair,
    evaluated on the same Berezin set.
    """
    if not 0 <= alpha <= 1:
        raise ParameterDomainError(f"alpha must lie in [0, 1], got {alpha}")
    if p < 1:
        raise ParameterDomainError(f"p must be at least 1, got {p}")
    B, C, _, evaluation = _offdiag_evaluation(B, C, sum_space)

    def term(X):
        abs_X = modulus(X)
        return op_norm(herm_fun(lambda t: np.power(t, 2 * p * alpha), abs_X)
                       + herm_fun(lambda t: np.power(t, 2 * p * (1 - alpha)), abs_X))

    rhs = 0.25 * term(B) + 0.25 * term(C)
    headline = compare("offdiag-power", evaluation.ber_value ** p, rhs, tol,
                       witness_index=evaluation.argmax_index)
    h_fn, _ = convex_map(f"power:{p}")
    links = [
        agreement("matches-offdiag-convex-lhs", headline.lhs, float(h_fn(np.array(evaluation.ber_value))),
                  SCALAR_AGREEMENT_TOL),
        agreement("matches-offdiag-convex-rhs", rhs, _convex_rhs(h_fn, FunctionPair.power(alpha), B, C),
                  SCALAR_AGREEMENT_TOL),
    ]
    return certificate("offdiag-power", headline, "sup", params={"alpha": alpha, "p": p}, links=links)


def cert_polarization(x, y) -> Certificate:
    """<x, y> = 1/4 sum_{k=0..3} i^k ||x + i^k y||^2; lhs is the reconstruction error."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError(f"Vectors of shapes {x.shape} and {y.shape}")
    phases = 1j ** np.arange(4)
    reconstructed = 0.25 * sum(ph * np.linalg.norm(x + ph * y) ** 2 for ph in phases)
    direct = inner(x, y)
    error = abs(reconstructed - direct)
    bound = POLARIZATION_TOL * (1 + np.linalg.norm(x) * np.linalg.norm(y))
    headline = compare("polarization", error, bound, Tolerance(rel=0.0, abs=0.0))
    return certificate("polarization", headline, "scalar", details={
        "reconstructed": [reconstructed.real, reconstructed.imag],
        "direct": [direct.real, direct.imag],
    })


def cert_block_diagonal(A, D, sum_space: DirectSumSpace, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """ber(diag(A, D)) <= max(ber(A), ber(D)), component bers on their own spaces."""
    evaluation = berezin_set(block_diag(A, D), sum_space)
    rhs = max(berezin_number(A, sum_space.left), berezin_number(D, sum_space.right))
    headline = compare("block-diagonal", evaluation.ber_value, rhs, tol, witness_index=evaluation.argmax_index)
    return certificate("block-diagonal", headline, "sup")


def cert_offdiag_norm(B, C, sum_space: DirectSumSpace, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """ber([[0, B], [C, 0]]) <= (||B|| + ||C||)/2."""
    B, C = _check_blocks(B, C, sum_space)
    evaluation = berezin_set(block_offdiag(B, C), sum_space)
    headline = compare("offdiag-norm", evaluation.ber_value, 0.5 * (op_norm(B) + op_norm(C)), tol,
                       witness_index=evaluation.argmax_index)
    return certificate("offdiag-norm", headline, "sup")


def cert_rotation_scan(A, space: KernelSpace, angle_count: int = 720,
                       tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """cos(pi/N) ber(A) <= max_theta ber(Re(e^{i theta} A)) <= ber(A) on N sampled angles."""
    evaluation = berezin_set(A, space)
    scan = rotation_scan_ber(A, space, angle_count)
    headline = compare("rotation-scan-upper", scan, evaluation.ber_value, tol,
                       witness_index=evaluation.argmax_index)
    lower = compare("rotation-scan-lower", np.cos(np.pi / angle_count) * evaluation.ber_value, scan, tol)
    return certificate("rotation-scan", headline, "sup", params={"angle_count": angle_count}, links=[lower])

"""Scalar lemmas and the Cartesian-decomposition bounds for sums of operators."""

from typing import Callable, List, Sequence

import numpy as np

from ..berezin_engine import berezin_symbols
from ..errors import DimensionMismatchError, ParameterDomainError
from ..operator_calculus import as_operator, cartesian_parts, herm_fun, inner, modulus, quadratic_form
from ..rkhs_model import KernelSpace
from .base import DEFAULT_TOLERANCE, Certificate, Tolerance, argmax_link, certificate, compare, pointwise


def cert_mccarthy(H, p: float, x, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    <H^p x,x> >= ||x||^{2(1-p)} <Hx,x>^p for p >= 1, reversed for 0 < p < 1 (H PSD, x != 0).
    """
    if p <= 0:
        raise ParameterDomainError(f"p must be positive, got {p}")
    x = np.asarray(x, dtype=complex)
    norm_x = np.linalg.norm(x)
    if norm_x == 0:
        raise ParameterDomainError("x must be nonzero")
    H = as_operator(H)
    power_form = quadratic_form(herm_fun(lambda t: t ** p, H), x).real
    scaled = norm_x ** (2 * (1 - p)) * max(quadratic_form(H, x).real, 0.0) ** p

    if p >= 1:
        headline, branch = compare("mccarthy", scaled, power_form, tol), "convex"
    else:
        headline, branch = compare("mccarthy", power_form, scaled, tol), "concave"
    return certificate("mccarthy", headline, "scalar", params={"p": p, "branch": branch})


def cert_mixed_schwarz(A, p: float, x, y, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """|<Ax,y>|^2 <= <|A|^{2p} x,x> <|A*|^{2(1-p)} y,y>, 0 <= p <= 1."""
    if not 0 <= p <= 1:
        raise ParameterDomainError(f"p must lie in [0, 1], got {p}")
    A = as_operator(A)
    lhs = abs(inner(A @ np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))) ** 2
    left = quadratic_form(herm_fun(lambda t: np.power(t, 2 * p), modulus(A)), x).real
    right = quadratic_form(herm_fun(lambda t: np.power(t, 2 * (1 - p)), modulus(A.conj().T)), y).real
    return certificate("mixed-schwarz", compare("mixed-schwarz", lhs, left * right, tol), "scalar",
                       params={"p": p})


def cert_power_sum(xs: Sequence[float], p: float, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """(sum x_n)^p <= k^{p-1} sum x_n^p for positive x_n and p >= 1."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0 or np.any(xs <= 0):
        raise ParameterDomainError("Power-sum inputs must be a non-empty list of positive reals")
    if p < 1:
        raise ParameterDomainError(f"p must be at least 1, got {p}")
    k = xs.size
    lhs = xs.sum() ** p
    rhs = k ** (p - 1) * np.sum(xs ** p)
    return certificate("power-sum", compare("power-sum", lhs, rhs, tol), "scalar", params={"p": p, "k": k})


def _check_family(family: Sequence, space: KernelSpace) -> List[np.ndarray]:
    if not family:
        raise ParameterDomainError("Operator family must not be empty")
    ops = [as_operator(A) for A in family]
    if any(A.shape != (space.dim, space.dim) for A in ops):
        raise DimensionMismatchError(f"Family members must all be {space.dim}x{space.dim}")
    return ops


def _cartesian_bound(theorem_id: str, family: Sequence, space: KernelSpace, p: float,
                     constant: Callable[[int], float], parts: Callable, tol: Tolerance) -> Certificate:
    if p < 1:
        raise ParameterDomainError(f"p must be at least 1, got {p}")
    ops = _check_family(family, space)
    k = len(ops)

    def symbol_power(H):
        values = berezin_symbols(herm_fun(lambda t: np.abs(t) ** (2 * p), H, domain="real"), space).real
        return np.maximum(values, 0.0)

    per_point = np.zeros(space.size)
    for A in ops:
        X, Y = parts(*cartesian_parts(A))
        per_point += np.sqrt(symbol_power(X) + symbol_power(Y))

    c = constant(k)
    lhs_values = np.abs(berezin_symbols(sum(ops), space)) ** p
    headline = argmax_link(f"{theorem_id}-sup", lhs_values, c * per_point.max(), tol)
    link = pointwise(f"{theorem_id}-pointwise", lhs_values, c * per_point, tol)
    return certificate(theorem_id, headline, "sup", params={"p": p, "k": k}, links=[link])


def cert_cartesian_1(family: Sequence, space: KernelSpace, p: float,
                     tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """ber(sum A_n)^p <= (sqrt(2) k)^{p-1} sup_lam sum_n (|B_n|^{2p}~(lam) + |C_n|^{2p}~(lam))^{1/2}."""
    return _cartesian_bound("cartesian-1", family, space, p,
                            lambda k: (np.sqrt(2) * k) ** (p - 1),
                            lambda B, C: (B, C), tol)


def cert_cartesian_2(family: Sequence, space: KernelSpace, p: float,
                     tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """ber(sum A_n)^p <= k^{p-1} 2^{p/2-1} sup_lam sum_n (|B_n+C_n|^{2p}~(lam) + |B_n-C_n|^{2p}~(lam))^{1/2}."""
    return _cartesian_bound("cartesian-2", family, space, p,
                            lambda k: k ** (p - 1) * 2 ** (p / 2 - 1),
                            lambda B, C: (B + C, B - C), tol)

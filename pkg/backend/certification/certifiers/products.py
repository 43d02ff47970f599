"""
Inequalities for products AB of an intertwined pair (|A| B = B* |A|).

Every bound here is first proven per grid point (a quadratic form at one
normalized kernel) and then lifted to Berezin numbers. Sampled suprema only
under-estimate, so the sup-mode comparison is paired with its per-point form
whenever the right-hand side itself contains ber(.).
"""

from functools import cached_property
from typing import Dict, Literal, Optional, Tuple

import numpy as np

from ..berezin_engine import berezin_symbols
from ..errors import DimensionMismatchError, ParameterDomainError
from ..generators import IntertwinedPair
from ..operator_calculus import (
    FunctionPair,
    apply_pair,
    as_operator,
    from_spectrum,
    herm_fun,
    hermitian_spectrum,
    min_modulus,
    op_norm,
    quadratic_form,
    spectral_radius,
)
from ..rkhs_model import KernelSpace, normalized_kernel
from .base import (
    DEFAULT_TOLERANCE,
    DOMINANCE_TOLERANCE,
    Certificate,
    Tolerance,
    agreement,
    argmax_link,
    certificate,
    clamp_nonneg,
    compare,
    pointwise,
)

UNIT_TOL = 1e-12
CONJUGATE_TOL = 1e-12
# cor-alpha against the spectral refined bounds of the power pair
SPECIALIZATION_TOL = 1e-10
# Families whose B is Hermitian and commutes with |A|
COMMUTING_FAMILIES = ("commuting", "identity")


def is_sqrt_pair(fp: FunctionPair) -> bool:
    return fp.kind == "power" and fp.alpha == 0.5


def schwarz_applies(pair: IntertwinedPair, fp: FunctionPair) -> bool:
    """
    Whether |<ABx,y>| <= r(B) ||f(|A|)x|| ||g(|A*|)y|| is guaranteed for this instance.

    For f = g = t^{1/2} it holds on every intertwined pair, since
    |A|^{1/2} B |A|^{-1/2} is Hermitian with norm r(B). Other function pairs
    need B Hermitian and commuting with |A|. On the inverse family it fails:
    |A| = diag(1, 4), C = [[0, 2], [2, 0]], f(t) = t, x = e1, y = e2 gives 2 <= 1.
    """
    return pair.family in COMMUTING_FAMILIES or is_sqrt_pair(fp)


class ProductTerms:
    """Lazily evaluated operators and symbols shared by the product certifiers."""

    def __init__(self, pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace):
        if pair.A.shape[0] != space.dim:
            raise DimensionMismatchError(f"Pair of dim {pair.A.shape[0]} on a space of dim {space.dim}")
        self.pair = pair
        self.fp = fp
        self.space = space
        self._powers: Dict[Tuple[str, float], np.ndarray] = {}

    @classmethod
    def of(cls, pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace) -> "ProductTerms":
        """The instance cached on ``pair``; every parameter combination of a trial reuses it."""
        # the cached value holds ``space``, so its id cannot be reused while cached
        return pair.memo(("terms", fp, id(space)), lambda: cls(pair, fp, space))

    @property
    def AB(self) -> np.ndarray:
        return self.pair.memo("AB", lambda: self.pair.A @ self.pair.B)

    @property
    def r_B(self) -> float:
        return self.pair.memo("r_B", lambda: spectral_radius(self.pair.B))

    @property
    def norm_chain_factor(self) -> float:
        """(||B|| + ||B^2||^{1/2}) / 2, an upper bound for r(B)."""
        B = self.pair.B
        return self.pair.memo("norm_chain_factor", lambda: 0.5 * (op_norm(B) + np.sqrt(op_norm(B @ B))))

    @property
    def abs_A(self) -> np.ndarray:
        return self.pair.P

    @property
    def abs_A_adj(self) -> np.ndarray:
        return self.pair.modulus_adjoint

    def spectrum(self, side: str) -> Tuple[np.ndarray, np.ndarray]:
        """Eigen-pairs of |A| (side "f") or |A*| (side "g")."""
        if side == "f":
            return self.pair.memo("spectrum_A", lambda: hermitian_spectrum(self.abs_A))
        return self.pair.memo("spectrum_A_adj", lambda: hermitian_spectrum(self.abs_A_adj))

    def _power(self, side: str, s: float) -> np.ndarray:
        key = (side, float(s))
        if key not in self._powers:
            H = self.abs_A if side == "f" else self.abs_A_adj
            self._powers[key] = apply_pair(self.fp, s, H, side, spectrum=self.spectrum(side))
        return self._powers[key]

    def f_pow(self, s: float) -> np.ndarray:
        return self._power("f", s)

    def g_pow(self, s: float) -> np.ndarray:
        return self._power("g", s)

    @cached_property
    def F2(self) -> np.ndarray:
        return self.f_pow(2)

    @cached_property
    def G2(self) -> np.ndarray:
        return self.g_pow(2)

    def symbols(self, M) -> np.ndarray:
        return berezin_symbols(M, self.space)

    def hermitian_symbols(self, M) -> np.ndarray:
        return self.symbols(M).real

    @property
    def ab_moduli(self) -> np.ndarray:
        return self.pair.memo(("ab_moduli", id(self.space)), lambda: np.abs(self.symbols(self.AB)))

    @cached_property
    def f2_symbols(self) -> np.ndarray:
        return clamp_nonneg(self.hermitian_symbols(self.F2))

    @cached_property
    def g2_symbols(self) -> np.ndarray:
        return clamp_nonneg(self.hermitian_symbols(self.G2))

    @cached_property
    def sum_ber(self) -> float:
        """ber(f^2(|A|) + g^2(|A*|))."""
        return float(np.max(np.abs(self.hermitian_symbols(self.F2 + self.G2))))

    def refined_factors(self, side: str, p: float, k: np.ndarray) -> Tuple[float, float]:
        """
        (<H^p k,k> - <|H - <Hk,k>|^p k,k>, <H^p k,k>) for H = f^2(|A|) or g^2(|A*|),
        evaluated in the eigenbasis of |A| or |A*|.
        """
        self._power(side, 2)  # checks the pair on the spectrum
        w, V = self.spectrum(side)
        values = self.fp.f(w) ** 2 if side == "f" else self.fp.g(w) ** 2
        weights = np.abs(V.conj().T @ k) ** 2
        m = float(weights @ values)
        outer = float(weights @ values ** p)
        return outer - float(weights @ np.abs(values - m) ** p), outer


def _check_power_young(p: float, alpha: float) -> float:
    if alpha <= 1:
        raise ParameterDomainError(f"alpha must exceed 1, got {alpha}")
    beta = alpha / (alpha - 1)
    if alpha < beta - CONJUGATE_TOL:
        raise ParameterDomainError(f"Need alpha >= beta; alpha={alpha}, beta={beta:g}")
    if p < 1:
        raise ParameterDomainError(f"p must be at least 1, got {p}")
    if beta * p < 2 - CONJUGATE_TOL:
        raise ParameterDomainError(f"Need beta * p >= 2, got {beta * p:g}")
    return beta


def _check_unit(name: str, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if abs(np.linalg.norm(v) - 1) > UNIT_TOL:
        raise ParameterDomainError(f"{name} must be a unit vector")
    return v


def cert_lemma_schwarz(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace, x, y,
                       tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """|<ABx, y>| <= r(B) ||f(|A|) x|| ||g(|A*|) y||, guaranteed only where ``schwarz_applies``."""
    terms = ProductTerms.of(pair, fp, space)
    x = _check_unit("x", x)
    y = _check_unit("y", y)
    if x.shape != (space.dim,) or y.shape != (space.dim,):
        raise DimensionMismatchError("Vectors do not match the space dimension")

    lhs = abs(np.vdot(y, terms.AB @ x))
    rhs = terms.r_B * np.linalg.norm(terms.f_pow(1) @ x) * np.linalg.norm(terms.g_pow(1) @ y)
    return certificate("lemma-schwarz", compare("lemma-schwarz", lhs, rhs, tol), "pointwise",
                       params={"fp": fp.label}, details={"schwarz_applies": schwarz_applies(pair, fp)})


def _refined_middle(H: np.ndarray, Hp: np.ndarray, k: np.ndarray, p: float) -> tuple:
    """(<H k, k>, <H^p k, k> - <|H - <Hk,k>|^p k, k>, <H^p k, k>) for PSD H."""
    m = quadratic_form(H, k).real
    deviation = herm_fun(lambda t: np.abs(t - m) ** p, H, domain="real")
    outer = quadratic_form(Hp, k).real
    return m, outer - quadratic_form(deviation, k).real, outer


def cert_lemma_refined_cs(H, p: float, x, y, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    <Hx,x>^{2p} <= mid(x)^2 and mid(x) mid(y) <= <H^p x,x><H^p y,y> for PSD H, p >= 2,
    with mid(v) = <H^p v,v> - <|H - <Hv,v>|^p v,v>.

    The first link is the x = y application; the mixed form
    <Hx,x>^{2p} <= mid(x) mid(y) is only reported.
    """
    if p < 2:
        raise ParameterDomainError(f"p must be at least 2, got {p}")
    x = _check_unit("x", x)
    y = _check_unit("y", y)
    H = as_operator(H)
    if x.shape != (H.shape[0],) or y.shape != (H.shape[0],):
        raise DimensionMismatchError("Vectors do not match the operator dimension")
    Hp = herm_fun(lambda t: t ** p, H)

    m_x, mid_x, outer_x = _refined_middle(H, Hp, x, p)
    _, mid_y, outer_y = _refined_middle(H, Hp, y, p)

    lhs = max(m_x, 0.0) ** (2 * p)
    headline = compare("refined-cs-equal-vectors", lhs, mid_x ** 2, tol)
    chain = compare("refined-cs-middle-outer", mid_x * mid_y, outer_x * outer_y, tol)
    mixed_rhs = mid_x * mid_y
    return certificate(
        "lemma-refined-cs", headline, "pointwise",
        params={"p": p},
        links=[chain],
        details={
            "middle": mid_x * mid_y,
            "outer": outer_x * outer_y,
            "mixed_lhs": lhs,
            "mixed_rhs": mixed_rhs,
            "mixed_holds": tol.holds(lhs, mixed_rhs),
        },
    )


def cert_thm_half_rB(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace,
                     tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """ber(AB) <= r(B)/2 ber(f^2(|A|) + g^2(|A*|)), sup and per-point."""
    t = ProductTerms.of(pair, fp, space)
    headline = argmax_link("half-rB-sup", t.ab_moduli, 0.5 * t.r_B * t.sum_ber, tol)
    per_point = pointwise("half-rB-pointwise", t.ab_moduli,
                          0.5 * t.r_B * (t.f2_symbols + t.g2_symbols), tol)
    return certificate("thm-half-rB", headline, "sup", params={"fp": fp.label}, links=[per_point],
                       details={"r_B": t.r_B, "ber_sum": t.sum_ber})


def cert_remark_chain(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace,
                      tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    ber(AB) <= r(B)/2 ber(f^2 + g^2)
            <= (||B|| + ||B^2||^{1/2})/8 [||f^2|| + ||g^2|| + sqrt((||f^2|| - ||g^2||)^2 + 4 ||f g||^2)]
    with f = f(|A|), g = g(|A*|).
    """
    t = ProductTerms.of(pair, fp, space)
    middle = 0.5 * t.r_B * t.sum_ber
    nf2, ng2 = op_norm(t.F2), op_norm(t.G2)
    cross = op_norm(t.f_pow(1) @ t.g_pow(1))
    outer = 0.25 * t.norm_chain_factor * (nf2 + ng2 + np.sqrt((nf2 - ng2) ** 2 + 4 * cross ** 2))

    headline = argmax_link("remark-first", t.ab_moduli, middle, tol)
    second = compare("remark-second", middle, outer, tol)
    return certificate("remark-chain", headline, "sup", params={"fp": fp.label}, links=[second],
                       details={"middle": middle, "outer": outer})


def _young_operator(t: ProductTerms, p: float, alpha: float, beta: float) -> np.ndarray:
    return t.f_pow(alpha * p) / alpha + t.g_pow(beta * p) / beta


def cert_thm_power_young(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace, p: float, alpha: float,
                         tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """ber(AB)^p <= r(B)^p ber((1/alpha) f^{alpha p}(|A|) + (1/beta) g^{beta p}(|A*|))."""
    beta = _check_power_young(p, alpha)
    t = ProductTerms.of(pair, fp, space)
    M_symbols = t.hermitian_symbols(_young_operator(t, p, alpha, beta))
    ber_M = float(np.max(np.abs(M_symbols)))
    rB_p = t.r_B ** p

    headline = argmax_link("power-young-sup", t.ab_moduli ** p, rB_p * ber_M, tol)
    per_point = pointwise("power-young-pointwise", t.ab_moduli ** p, rB_p * M_symbols, tol)
    return certificate("thm-power-young", headline, "sup",
                       params={"fp": fp.label, "p": p, "alpha": alpha, "beta": beta},
                       links=[per_point], details={"ber_M": ber_M})


def _check_refined_p(p: float) -> None:
    if p < 2:
        raise ParameterDomainError(f"p must be at least 2, got {p}")


def _chain_bounds(f_factors: Tuple[float, float], g_factors: Tuple[float, float], r_B: float,
                  p: float) -> Tuple[float, float]:
    """(middle, outer) of the refined chain from the (mid, outer) factors of each side."""
    (mid_f, outer_f), (mid_g, outer_g) = f_factors, g_factors
    e = 1 / (2 * p)
    return (r_B * max(mid_f, 0.0) ** e * max(mid_g, 0.0) ** e,
            r_B * max(outer_f, 0.0) ** e * max(outer_g, 0.0) ** e)


def _refined_chain(theorem_id: str, lhs: float, f_factors: Tuple[float, float], g_factors: Tuple[float, float],
                   r_B: float, p: float, params: dict, tol: Tolerance, witness: int,
                   details: Optional[dict] = None) -> Certificate:
    middle, outer = _chain_bounds(f_factors, g_factors, r_B, p)

    headline = compare(f"{theorem_id}-first", lhs, middle, tol, witness_index=witness)
    second = compare(f"{theorem_id}-second", middle, outer, tol)
    return certificate(theorem_id, headline, "pointwise", params=params, links=[second],
                       details={"middle": middle, "outer": outer, **(details or {})})


def cert_prop_refined(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace, p: float,
                      lam: int, mu: int, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    |<AB k_lam, k_mu>| <= r(B) [<f^{2p} k_lam,k_lam> - <|f^2 - <f^2 k_lam,k_lam>|^p k_lam,k_lam>]^{1/2p}
                              [same with g(|A*|), k_mu]^{1/2p}
                      <= r(B) <f^{2p} k_lam,k_lam>^{1/2p} <g^{2p} k_mu,k_mu>^{1/2p}.

    The first inequality rests on ``schwarz_applies``; its value is in the details.
    """
    _check_refined_p(p)
    t = ProductTerms.of(pair, fp, space)
    k_lam = normalized_kernel(space, lam)
    k_mu = normalized_kernel(space, mu)
    return _refined_chain("prop-refined", abs(np.vdot(k_mu, t.AB @ k_lam)),
                          t.refined_factors("f", p, k_lam), t.refined_factors("g", p, k_mu), t.r_B, p,
                          {"fp": fp.label, "p": p, "lam": lam, "mu": mu}, tol, lam,
                          details={"schwarz_applies": schwarz_applies(pair, fp)})


def cert_cor_alpha(pair: IntertwinedPair, space: KernelSpace, p: float, alpha: float, lam: int, mu: int,
                   tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    The refined chain for f = t^alpha, g = t^(1-alpha), written with powers of |A| and |A*|.

    The ``matches-prop-refined`` links compare with the refined bounds that
    ``cert_prop_refined`` evaluates for the power pair.
    """
    _check_refined_p(p)
    if not 0 <= alpha <= 1:
        raise ParameterDomainError(f"alpha must lie in [0, 1], got {alpha}")
    fp = FunctionPair.power(alpha)
    t = ProductTerms.of(pair, fp, space)
    k_lam = normalized_kernel(space, lam)
    k_mu = normalized_kernel(space, mu)

    def powers(side: str, s: float) -> Tuple[np.ndarray, np.ndarray]:
        w, V = t.spectrum(side)
        return from_spectrum(w ** (2 * s), V), from_spectrum(w ** (2 * p * s), V)

    cert = _refined_chain(
        "cor-alpha", abs(np.vdot(k_mu, t.AB @ k_lam)),
        _refined_middle(*powers("f", alpha), k_lam, p)[1:],
        _refined_middle(*powers("g", 1 - alpha), k_mu, p)[1:],
        t.r_B, p, {"p": p, "alpha": alpha, "lam": lam, "mu": mu}, tol, lam,
        details={"schwarz_applies": schwarz_applies(pair, fp)},
    )
    ref_middle, ref_outer = _chain_bounds(t.refined_factors("f", p, k_lam), t.refined_factors("g", p, k_mu),
                                          t.r_B, p)
    cert.links.append(agreement("matches-prop-refined-middle", cert.details["middle"], ref_middle,
                                SPECIALIZATION_TOL))
    cert.links.append(agreement("matches-prop-refined-outer", cert.details["outer"], ref_outer,
                                SPECIALIZATION_TOL))
    return cert


def cert_thm_minmod(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace, p: float,
                    exponent: Literal["reciprocal", "power-of-two"] = "reciprocal",
                    tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    ber(AB) <= (||B|| + ||B^2||^{1/2})/2 [ber(f^{2p}(|A|)) - l(|f^2(|A|) - ||f(|A|)||^2|^p)]^e
                                         [same with g, |A*|]^e

    e = 1/(2p) ("reciprocal") or 1/2^p ("power-of-two"). The other exponent is
    evaluated as well and reported in the details.
    """
    _check_refined_p(p)
    t = ProductTerms.of(pair, fp, space)

    def term(X2: np.ndarray, X2p: np.ndarray, X1: np.ndarray) -> Tuple[float, float]:
        shift = op_norm(X1) ** 2
        correction = min_modulus(herm_fun(lambda w: np.abs(w - shift) ** p, X2, domain="real"))
        ber_2p = float(np.max(np.abs(t.hermitian_symbols(X2p))))
        return max(ber_2p - correction, 0.0), correction

    F2p, G2p = t.f_pow(2 * p), t.g_pow(2 * p)
    term_f, corr_f = term(t.F2, F2p, t.f_pow(1))
    term_g, corr_g = term(t.G2, G2p, t.g_pow(1))

    exponents = {"reciprocal": 1 / (2 * p), "power-of-two": 2.0 ** -p}
    if exponent not in exponents:
        raise ParameterDomainError(f"Unknown exponent variant: {exponent}")
    bounds = {name: t.norm_chain_factor * term_f ** e * term_g ** e for name, e in exponents.items()}
    other = "power-of-two" if exponent == "reciprocal" else "reciprocal"

    headline = argmax_link("minmod-sup", t.ab_moduli, bounds[exponent], tol)
    e = 1 / (2 * p)
    per_point = pointwise(
        "minmod-pointwise", t.ab_moduli,
        t.norm_chain_factor * clamp_nonneg(t.hermitian_symbols(F2p)) ** e
        * clamp_nonneg(t.hermitian_symbols(G2p)) ** e,
        tol,
    )
    return certificate(
        "thm-minmod", headline, "sup",
        params={"fp": fp.label, "p": p, "exponent": exponent},
        links=[per_point],
        details={
            "correction_f": corr_f,
            "correction_g": corr_g,
            f"rhs_{other}": bounds[other],
            f"holds_{other}": tol.holds(headline.lhs, bounds[other]),
        },
    )


def cert_young_scalar(a: float, b: float, alpha: float, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """a^alpha b^(1-alpha) <= alpha a + (1-alpha) b - r0 (sqrt a - sqrt b)^2, r0 = min(alpha, 1-alpha)."""
    if a <= 0 or b <= 0:
        raise ParameterDomainError(f"a and b must be positive, got a={a}, b={b}")
    if not 0 <= alpha <= 1:
        raise ParameterDomainError(f"alpha must lie in [0, 1], got {alpha}")
    r0 = min(alpha, 1 - alpha)
    lhs = a ** alpha * b ** (1 - alpha)
    rhs = alpha * a + (1 - alpha) * b - r0 * (np.sqrt(a) - np.sqrt(b)) ** 2
    return certificate("young-scalar", compare("young-scalar", lhs, rhs, tol), "scalar",
                       params={"a": a, "b": b, "alpha": alpha, "r0": r0})


def cert_thm_young_refined(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace,
                           tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    Per grid point:
        |<AB k,k>| <= r(B)/2 (ber(f^2(|A|) + g^2(|A*|)) - (<f^2 k,k>^{1/2} - <g^2 k,k>^{1/2})^2)

    Links: the sup form with the smallest correction over the grid, and
    dominance of every refined bound by the unrefined r(B)/2 ber(f^2 + g^2).
    """
    t = ProductTerms.of(pair, fp, space)
    correction = (np.sqrt(t.f2_symbols) - np.sqrt(t.g2_symbols)) ** 2
    unrefined = 0.5 * t.r_B * t.sum_ber
    refined = 0.5 * t.r_B * (t.sum_ber - correction)

    headline = pointwise("young-refined-pointwise", t.ab_moduli, refined, tol)
    sup = argmax_link("young-refined-sup", t.ab_moduli, 0.5 * t.r_B * (t.sum_ber - correction.min()), tol)
    dominance = argmax_link("young-refined-dominance", refined, unrefined, DOMINANCE_TOLERANCE)
    return certificate("thm-young-refined", headline, "pointwise", params={"fp": fp.label},
                       links=[sup, dominance],
                       details={"unrefined_rhs": unrefined, "min_correction": float(correction.min())})


def cert_thm_power_young_refined(pair: IntertwinedPair, fp: FunctionPair, space: KernelSpace, p: float,
                                 alpha: float, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    Per grid point, with r0 = min(1/alpha, 1/beta):
        |<AB k,k>|^p <= r(B)^p (ber(M) - r0 (<f^2 k,k>^{alpha p/4} - <g^2 k,k>^{beta p/4})^2)
    where M = (1/alpha) f^{alpha p}(|A|) + (1/beta) g^{beta p}(|A*|).
    """
    beta = _check_power_young(p, alpha)
    t = ProductTerms.of(pair, fp, space)
    r0 = min(1 / alpha, 1 / beta)
    ber_M = float(np.max(np.abs(t.hermitian_symbols(_young_operator(t, p, alpha, beta)))))
    rB_p = t.r_B ** p
    correction = (t.f2_symbols ** (alpha * p / 4) - t.g2_symbols ** (beta * p / 4)) ** 2
    unrefined = rB_p * ber_M
    refined = rB_p * (ber_M - r0 * correction)
    lhs = t.ab_moduli ** p

    headline = pointwise("power-young-refined-pointwise", lhs, refined, tol)
    sup = argmax_link("power-young-refined-sup", lhs, rB_p * (ber_M - r0 * correction.min()), tol)
    dominance = argmax_link("power-young-refined-dominance", refined, unrefined, DOMINANCE_TOLERANCE)
    return certificate("thm-power-young-refined", headline, "pointwise",
                       params={"fp": fp.label, "p": p, "alpha": alpha, "beta": beta, "r0": r0},
                       links=[sup, dominance],
                       details={"unrefined_rhs": unrefined, "min_correction": float(correction.min())})

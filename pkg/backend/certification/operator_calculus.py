"""
Dense complex-matrix calculus used by every certifier.

Operators are plain ``numpy`` complex arrays written in the orthonormal basis
of the space they act on. Hermitian functions go through ``scipy.linalg.eigh``
with eigenvalue clamping; singular values through ``scipy.linalg.svdvals``.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NotPositiveSemidefiniteError,
    NumericFailureError,
    PairViolationError,
    ParameterDomainError,
    numeric_guard,
)

HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-10
PAIR_RTOL = 1e-10
PAIR_ATOL = 1e-14

ScalarMap = Callable[[np.ndarray], np.ndarray]


def as_operator(A, square: bool = True) -> np.ndarray:
    """Coerce ``A`` to a finite complex matrix."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or (square and M.shape[0] != M.shape[1]):
        raise DimensionMismatchError(f"Expected a {'square ' if square else ''}matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericFailureError("Operator has non-finite entries")
    return M


def adjoint(A) -> np.ndarray:
    return as_operator(A, square=False).conj().T


def _symmetrize(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def is_hermitian(H, tol: float = HERMITIAN_TOL) -> bool:
    H = as_operator(H)
    scale = max(1.0, float(np.linalg.norm(H, 2)))
    return float(np.linalg.norm(H - H.conj().T, 2)) <= tol * scale


@numeric_guard
def _spectrum(H, domain: str = "psd") -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-pairs of a Hermitian matrix; ``domain="psd"`` clamps small negative eigenvalues to 0."""
    H = as_operator(H)
    if not is_hermitian(H):
        raise DimensionMismatchError("Operator is not Hermitian within tolerance")
    w, V = scipy.linalg.eigh(_symmetrize(H))
    if domain == "psd":
        floor = -PSD_CLAMP * max(1.0, float(np.max(np.abs(w), initial=0.0)))
        if np.any(w < floor):
            raise NotPositiveSemidefiniteError(f"Smallest eigenvalue {w.min():.3e} is below {floor:.1e}")
        w = np.clip(w, 0, None)
    elif domain != "real":
        raise ValueError(f"Unknown spectral domain: {domain}")
    return w, V


def _compose(w: np.ndarray, V: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(w)):
        raise NumericFailureError("Functional calculus produced non-finite eigenvalues")
    return _symmetrize((V * w) @ V.conj().T)


def hermitian_spectrum(H, domain: str = "psd") -> Tuple[np.ndarray, np.ndarray]:
    """(w, V) for callers that apply several functions to one operator; see ``herm_fun`` for ``domain``."""
    return _spectrum(H, domain)


def from_spectrum(values, V: np.ndarray) -> np.ndarray:
    """V diag(values) V*."""
    return _compose(np.asarray(values, dtype=float), V)


def herm_fun(f: ScalarMap, H, domain: str = "psd") -> np.ndarray:
    """
    Hermitian functional calculus f(H) = V diag(f(w)) V*.

    Args:
        f: vectorized scalar map applied to the eigenvalues
        H: Hermitian matrix
        domain: "psd" clamps eigenvalues in [-1e-10, 0) to 0 and rejects anything
                lower; "real" applies f to the raw spectrum

    Returns:
        Hermitian matrix with H's eigenvectors and eigenvalues f(w)
    """
    w, V = _spectrum(H, domain)
    return _compose(np.asarray(f(w), dtype=float), V)


@numeric_guard
def modulus(A) -> np.ndarray:
    """|A| = (A*A)^{1/2}; rectangular input allowed."""
    A = as_operator(A, square=False)
    w, V = scipy.linalg.eigh(_symmetrize(A.conj().T @ A))
    w = np.clip(w, 0, None)
    return _compose(np.sqrt(w), V)


@numeric_guard
def polar_decompose(A, partial: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Polar factors (U, |A|) with A = U |A|.

    U = W V* from the SVD A = W S V*. It is unitary for every square A, i.e. the
    partial isometry completed on ker A by the SVD's own ordering. With
    ``partial=True`` only the singular vectors of nonzero singular values are
    kept, giving the canonical partial isometry.
    """
    A = as_operator(A)
    W, s, Vh = scipy.linalg.svd(A)
    if partial:
        rank = int(np.sum(s > s.max(initial=0.0) * A.shape[0] * np.finfo(float).eps))
        U = W[:, :rank] @ Vh[:rank, :]
    else:
        U = W @ Vh
    return U, modulus(A)


@numeric_guard
def spectral_radius(A) -> float:
    return float(np.max(np.abs(scipy.linalg.eigvals(as_operator(A)))))


@numeric_guard
def op_norm(A) -> float:
    A = as_operator(A, square=False)
    if A.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(A)[0])


@numeric_guard
def min_modulus(A) -> float:
    """inf ||Ax|| over unit x, i.e. the smallest singular value of a square matrix."""
    return float(scipy.linalg.svdvals(as_operator(A))[-1])


def cartesian_parts(A) -> Tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts: A = B + iC with B, C Hermitian."""
    A = as_operator(A)
    Ah = A.conj().T
    return (A + Ah) / 2, -0.5j * (A - Ah)


def block_offdiag(B, C) -> np.ndarray:
    """[[0, B], [C, 0]] with B: H2 -> H1 and C: H1 -> H2."""
    B = as_operator(B, square=False)
    C = as_operator(C, square=False)
    if B.shape != C.shape[::-1]:
        raise DimensionMismatchError(f"Off-diagonal blocks {B.shape} and {C.shape} do not fit together")
    n1, n2 = B.shape
    return np.block([
        [np.zeros((n1, n1), dtype=complex), B],
        [C, np.zeros((n2, n2), dtype=complex)],
    ])


def block_diag(A, D) -> np.ndarray:
    """diag(A, D) on H1 (+) H2."""
    return scipy.linalg.block_diag(as_operator(A), as_operator(D)).astype(complex)


def quadratic_form(M, x) -> complex:
    """<Mx, x>."""
    return complex(np.vdot(x, M @ x))


def inner(x, y) -> complex:
    """<x, y>, linear in x."""
    return complex(np.vdot(y, x))


@dataclass(frozen=True)
class FunctionPair:
    """
    Nonnegative maps f, g on [0, inf) with f(t) g(t) = t.

    ``power`` pairs are f = t^alpha, g = t^(1-alpha). ``custom`` pairs are
    tabulated: f is interpolated linearly and g = t / f(t) wherever f(t) > 0.
    """
    kind: str
    alpha: Optional[float] = None
    t_samples: Optional[Tuple[float, ...]] = None
    f_samples: Optional[Tuple[float, ...]] = None
    g_samples: Optional[Tuple[float, ...]] = None
    label: str = ""

    @classmethod
    def power(cls, alpha: float) -> "FunctionPair":
        if not 0 <= alpha <= 1:
            raise ParameterDomainError(f"Power pair needs alpha in [0, 1], got {alpha}")
        return cls(kind="power", alpha=float(alpha), label=f"power:{alpha:g}")

    @classmethod
    def tabulated(cls, t, f, g, label: str = "custom") -> "FunctionPair":
        t = np.asarray(t, dtype=float)
        f = np.asarray(f, dtype=float)
        g = np.asarray(g, dtype=float)
        if not (t.ndim == 1 and t.shape == f.shape == g.shape and len(t) >= 2):
            raise PairViolationError("Tabulated pair needs matching 1-d samples (at least two)")
        if np.any(np.diff(t) <= 0) or t[0] < 0:
            raise PairViolationError("Tabulation points must be increasing and nonnegative")
        if np.any(f < 0) or np.any(g < 0):
            raise PairViolationError("Tabulated f and g must be nonnegative")
        if not np.allclose(f * g, t, rtol=PAIR_RTOL, atol=PAIR_ATOL):
            raise PairViolationError("Tabulated samples violate f(t) g(t) = t")
        return cls(kind="custom", t_samples=tuple(t), f_samples=tuple(f), g_samples=tuple(g), label=label)

    def f(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return np.power(t, self.alpha)
        return np.interp(t, self.t_samples, self.f_samples)

    def g(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            return np.power(t, 1 - self.alpha)
        fv = self.f(t)
        gv = np.interp(t, self.t_samples, self.g_samples)
        positive = fv > 0
        return np.where(positive, t / np.where(positive, fv, 1.0), gv)

    def check(self, t: np.ndarray) -> None:
        """Raise ``PairViolationError`` unless f(t) g(t) = t at every point of ``t``."""
        t = np.asarray(t, dtype=float)
        product = self.f(t) * self.g(t)
        bad = ~np.isclose(product, t, rtol=PAIR_RTOL, atol=PAIR_ATOL)
        if np.any(bad):
            where = t[bad][0]
            raise PairViolationError(f"{self.label}: f(t) g(t) != t at t = {where:.6g}")


def apply_pair(pair: FunctionPair, exponent: float, H, side: str = "f",
               spectrum: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> np.ndarray:
    """
    f(H)^s (or g(H)^s) for PSD H after checking the pair on H's spectrum.

    ``spectrum`` is a precomputed ``hermitian_spectrum(H)``; H is then not decomposed again.
    """
    if exponent <= 0:
        raise ParameterDomainError(f"Pair exponent must be positive, got {exponent}")
    if side not in ("f", "g"):
        raise ValueError(f"side must be 'f' or 'g', got {side}")
    w, V = spectrum if spectrum is not None else _spectrum(H, "psd")
    pair.check(w)
    values = pair.f(w) if side == "f" else pair.g(w)
    return _compose(np.power(values, exponent), V)

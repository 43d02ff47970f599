"""Classical norm and spectral-radius inequalities the Berezin bounds build on."""

import numpy as np

from ..errors import NotPositiveSemidefiniteError
from ..operator_calculus import as_operator, herm_fun, is_hermitian, op_norm, spectral_radius
from .base import DEFAULT_TOLERANCE, Certificate, Tolerance, certificate, compare


def _check_psd(*ops) -> None:
    for M in ops:
        if not is_hermitian(M):
            raise NotPositiveSemidefiniteError("Operator is not Hermitian")
        # herm_fun rejects spectra below the clamping threshold
        herm_fun(lambda t: t, M)


def cert_spectral_radius_product(A, B, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """
    r(AB) <= (||AB|| + ||BA|| + sqrt((||AB|| - ||BA||)^2 + 4 m(A, B))) / 4
    with m(A, B) = min(||A|| ||BAB||, ||B|| ||ABA||).
    """
    A, B = as_operator(A), as_operator(B)
    AB, BA = A @ B, B @ A
    n_ab, n_ba = op_norm(AB), op_norm(BA)
    m = min(op_norm(A) * op_norm(B @ AB), op_norm(B) * op_norm(AB @ A))
    rhs = 0.25 * (n_ab + n_ba + np.sqrt((n_ab - n_ba) ** 2 + 4 * m))
    return certificate("spectral-radius-product",
                       compare("spectral-radius-product", spectral_radius(AB), rhs, tol), "scalar",
                       details={"m": m})


def cert_half_power_norm(A, B, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """||A^{1/2} B^{1/2}|| <= ||AB||^{1/2} for PSD A, B."""
    A, B = as_operator(A), as_operator(B)
    _check_psd(A, B)
    lhs = op_norm(herm_fun(np.sqrt, A) @ herm_fun(np.sqrt, B))
    return certificate("half-power-norm",
                       compare("half-power-norm", lhs, np.sqrt(op_norm(A @ B)), tol), "scalar")


def cert_sum_norm(A, B, tol: Tolerance = DEFAULT_TOLERANCE) -> Certificate:
    """||A + B|| <= (||A|| + ||B|| + sqrt((||A|| - ||B||)^2 + 4 min(||AB||, ||BA||))) / 2 for PSD A, B."""
    A, B = as_operator(A), as_operator(B)
    _check_psd(A, B)
    na, nb = op_norm(A), op_norm(B)
    cross = min(op_norm(A @ B), op_norm(B @ A))
    rhs = 0.5 * (na + nb + np.sqrt((na - nb) ** 2 + 4 * cross))
    return certificate("sum-norm", compare("sum-norm", op_norm(A + B), rhs, tol), "scalar")

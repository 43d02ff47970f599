"""Berezin symbols, sampled Berezin set and Berezin number."""

import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from .errors import DimensionMismatchError, ParameterDomainError
from .operator_calculus import as_operator, cartesian_parts
from .rkhs_model import KernelSpace, normalized_kernel
from .utils import complex_pairs


@dataclass(frozen=True)
class BerezinEvaluation:
    values: np.ndarray
    argmax_index: int
    ber_value: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "values": complex_pairs(self.values),
            "berValue": self.ber_value,
            "argmaxIndex": self.argmax_index,
        }


def _check_dims(A, space: KernelSpace) -> np.ndarray:
    A = as_operator(A)
    if A.shape[0] != space.dim:
        raise DimensionMismatchError(f"Operator of dim {A.shape[0]} on a space of dim {space.dim}")
    return A


def berezin_symbols(A, space: KernelSpace) -> np.ndarray:
    """<A k_lam, k_lam> for every grid point, in storage order."""
    A = _check_dims(A, space)
    K = space.kernels
    return np.sum(K.conj() * (K @ A.T), axis=1)


def berezin_symbol(A, space: KernelSpace, index: int) -> complex:
    A = _check_dims(A, space)
    k = normalized_kernel(space, index)
    return complex(np.vdot(k, A @ k))


def berezin_set(A, space: KernelSpace) -> BerezinEvaluation:
    values = berezin_symbols(A, space)
    moduli = np.abs(values)
    # np.argmax returns the first maximizer, which fixes ties
    idx = int(np.argmax(moduli))
    return BerezinEvaluation(values=values, argmax_index=idx, ber_value=float(moduli[idx]))


def berezin_number(A, space: KernelSpace) -> float:
    return berezin_set(A, space).ber_value


def rotation_scan(A, space: KernelSpace, angle_count: int) -> np.ndarray:
    """ber(Re(e^{i theta} A)) for theta = 2 pi j / angle_count, j = 0..angle_count-1."""
    if angle_count < 4:
        raise ParameterDomainError(f"angle_count must be at least 4, got {angle_count}")
    # Re(e^{i theta} A) has symbol Re(e^{i theta} A~(lam)), so one pass over the grid suffices
    values = berezin_symbols(A, space)
    thetas = 2 * np.pi * np.arange(angle_count) / angle_count
    rotated = np.real(np.exp(1j * thetas)[:, None] * values[None, :])
    return np.max(np.abs(rotated), axis=1)


def rotation_scan_ber(A, space: KernelSpace, angle_count: int) -> float:
    """
    sup over sampled theta of ber(Re(e^{i theta} A)), i.e. ``max(rotation_scan(...))``.

    |Re(e^{i theta} s)| = |s| |cos(theta + arg s)| has period pi in theta, and the
    sampled angles reduce mod pi to a lattice of step pi gcd(2, N) / N. Each grid
    point therefore contributes |s| cos(d), d the distance from -arg s to that
    lattice, and no angle-by-grid array is built.
    """
    if angle_count < 4:
        raise ParameterDomainError(f"angle_count must be at least 4, got {angle_count}")
    values = berezin_symbols(A, space)
    step = np.pi * math.gcd(2, angle_count) / angle_count
    offset = np.mod(np.angle(values), step)
    distance = np.minimum(offset, step - offset)
    return float(np.max(np.abs(values) * np.cos(distance)))


def real_part_ber(A, space: KernelSpace, theta: float) -> float:
    """ber(Re(e^{i theta} A)) evaluated through the operator itself."""
    B, _ = cartesian_parts(np.exp(1j * theta) * as_operator(A))
    return berezin_number(B, space)

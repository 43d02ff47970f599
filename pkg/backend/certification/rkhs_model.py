"""
Finite-dimensional sampled models of reproducing kernel Hilbert spaces.

A space is the span of the first ``dim`` orthonormal basis functions together
with a finite grid of domain points. For every grid point we store the kernel
coordinates ``(conj(e_0(lam)), ..., conj(e_{n-1}(lam)))`` and their normalized
version. Grid indices are 0-based in storage order.

Models:
    hardy     e_j(z) = z^j on the unit disc
    bergman   e_j(z) = sqrt(j+1) z^j on the unit disc
    diagonal  standard basis, grid = index set {1..n}
    custom    user supplied (unnormalized) kernel coordinate vectors
"""

import logging
from dataclasses import dataclass, field
from typing import Annotated, Any, Dict, List, Literal, Optional, Protocol, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field

from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidGridError,
    ModelGridMismatchError,
)
from .utils import complex_array

logger = logging.getLogger(__name__)

DEFAULT_RMAX = 0.95
KERNEL_NORM_TOL = 1e-12

DISC_MODELS = ("hardy", "bergman")


class DiscGridSpec(BaseModel):
    """Polar grid: the origin plus ``radial x angular`` points up to ``rmax``."""
    type: Literal["disc"] = "disc"
    radial: int = Field(..., ge=0, description="Number of radii")
    angular: int = Field(..., ge=0, description="Number of angles per radius")
    rmax: float = Field(DEFAULT_RMAX, gt=0, description="Outer radius, must stay below 1")


class IntervalGridSpec(BaseModel):
    """Equally spaced real points ``linspace(a, b, count)``."""
    type: Literal["interval"] = "interval"
    a: float
    b: float
    count: int = Field(..., ge=0)


class IndexGridSpec(BaseModel):
    """Index set ``{1..size}``; size defaults to the space dimension."""
    type: Literal["index"] = "index"
    size: Optional[int] = Field(None, ge=0)


GridSpec = Annotated[
    Union[DiscGridSpec, IntervalGridSpec, IndexGridSpec],
    Field(discriminator="type"),
]


class SpaceSpec(BaseModel):
    """JSON space descriptor as found in run configs."""
    model: Literal["hardy", "bergman", "diagonal", "custom"]
    dim: int = Field(..., ge=1)
    grid: GridSpec
    kernels: Optional[List[List[List[float]]]] = Field(
        None, description="custom model only: one [re, im] vector per grid point"
    )

    @property
    def label(self) -> str:
        grid = self.grid
        if isinstance(grid, DiscGridSpec):
            tag = f"disc{grid.radial}x{grid.angular}r{grid.rmax:g}"
        elif isinstance(grid, IntervalGridSpec):
            tag = f"interval{grid.count}[{grid.a:g},{grid.b:g}]"
        else:
            tag = "index" if grid.size is None else f"index{grid.size}"
        return f"{self.model}-{self.dim}-{tag}"


class KernelSpace(Protocol):
    """Anything carrying unit kernel vectors row by row (sampled or direct-sum space)."""
    dim: int
    kernels: np.ndarray

    @property
    def size(self) -> int: ...


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class DomainGrid:
    points: np.ndarray
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SampledSpace:
    """
    Finite RKHS model. ``raw_kernels`` holds k_lam, ``kernels`` holds k_lam/||k_lam||,
    ``kernel_norms`` holds ||k_lam||. All arrays are read-only.
    """
    model: str
    dim: int
    grid: DomainGrid
    raw_kernels: np.ndarray
    kernel_norms: np.ndarray
    kernels: np.ndarray
    label: str = ""

    @property
    def size(self) -> int:
        return len(self.grid)

    def normalized_kernel(self, index: int) -> np.ndarray:
        return normalized_kernel(self, index)


@dataclass(frozen=True)
class DirectSumSpace:
    """
    H1 (+) H2 sampled on the product grid. Row ``i * right.size + j`` belongs to
    the pair (left point i, right point j).
    """
    left: SampledSpace
    right: SampledSpace
    pairs: np.ndarray
    kernels: np.ndarray

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def label(self) -> str:
        return f"{self.left.label}+{self.right.label}"


def _make_grid(model: str, dim: int, grid: Any, n_custom: Optional[int]) -> DomainGrid:
    if isinstance(grid, DiscGridSpec):
        if model not in DISC_MODELS + ("custom",):
            raise ModelGridMismatchError(f"Model '{model}' cannot be sampled on a disc grid")
        if grid.rmax >= 1:
            raise InvalidGridError(f"Disc grid needs rmax < 1, got {grid.rmax}")
        radii = grid.rmax * np.arange(1, grid.radial + 1) / max(grid.radial, 1)
        angles = 2 * np.pi * np.arange(grid.angular) / max(grid.angular, 1)
        ring = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
        points = np.concatenate([np.zeros(1, dtype=complex), ring])
        params = {"radial": grid.radial, "angular": grid.angular, "rmax": grid.rmax}

    elif isinstance(grid, IntervalGridSpec):
        if model not in DISC_MODELS + ("custom",):
            raise ModelGridMismatchError(f"Model '{model}' cannot be sampled on an interval grid")
        if grid.count == 0:
            raise InvalidGridError("Interval grid is empty")
        points = np.linspace(grid.a, grid.b, grid.count).astype(complex)
        if model in DISC_MODELS and np.any(np.abs(points) >= 1):
            raise InvalidGridError(f"Interval [{grid.a}, {grid.b}] leaves the open unit disc")
        params = {"a": grid.a, "b": grid.b, "count": grid.count}

    else:
        if model in DISC_MODELS:
            raise ModelGridMismatchError(f"Model '{model}' lives on the disc, not on an index set")
        expected = dim if model == "diagonal" else n_custom
        size = expected if grid.size is None else grid.size
        if size != expected:
            raise ModelGridMismatchError(
                f"Index grid of size {size} does not match model '{model}' (expected {expected})"
            )
        points = np.arange(1, size + 1).astype(complex)
        params = {"size": size}

    if len(points) == 0:
        raise InvalidGridError("Grid is empty")
    if len(np.unique(points)) != len(points):
        raise InvalidGridError("Grid points are not distinct")

    return DomainGrid(points=_frozen(points), kind=grid.type, params=params)


def _raw_kernels(model: str, dim: int, grid: DomainGrid, custom: Optional[np.ndarray]) -> np.ndarray:
    if model == "diagonal":
        return np.eye(dim, dtype=complex)
    if model == "custom":
        return custom
    # Columns conj(lam)^0 .. conj(lam)^(n-1), built by repeated multiplication
    raw = np.vander(np.conj(grid.points), dim, increasing=True)
    if model == "bergman":
        raw = raw * np.sqrt(np.arange(1, dim + 1))
    return raw


def build_space(model: str, dim: int, grid: Union[GridSpec, Dict[str, Any]],
                kernels: Optional[Any] = None) -> SampledSpace:
    """
    Build a sampled RKHS model.

    Args:
        model: "hardy", "bergman", "diagonal" or "custom"
        dim: number of orthonormal basis functions kept
        grid: grid descriptor (pydantic model or its JSON dict)
        kernels: custom model only, unnormalized kernel vectors as [re, im] pairs
                 or a complex array of shape (points, dim)

    Returns:
        SampledSpace with unit-norm kernel rows
    """
    spec = SpaceSpec(model=model, dim=dim, grid=grid)
    return space_from_spec(spec, kernels=kernels)


def space_from_spec(spec: Union[SpaceSpec, Dict[str, Any]], kernels: Optional[Any] = None) -> SampledSpace:
    if not isinstance(spec, SpaceSpec):
        spec = SpaceSpec.model_validate(spec)
    model, dim = spec.model, spec.dim
    custom = None

    if model == "custom":
        source = kernels if kernels is not None else spec.kernels
        if source is None:
            raise ModelGridMismatchError("Custom model needs kernel vectors")
        arr = np.asarray(source)
        custom = arr.astype(complex) if np.iscomplexobj(arr) else complex_array(source)
        if custom.ndim != 2 or custom.shape[1] != dim:
            raise DimensionMismatchError(
                f"Custom kernels must have shape (points, {dim}), got {custom.shape}"
            )
        if not np.all(np.isfinite(custom)):
            raise InvalidGridError("Custom kernels contain non-finite entries")
    elif kernels is not None or spec.kernels is not None:
        raise ModelGridMismatchError(f"Kernel vectors are only accepted by the custom model, not '{model}'")

    grid = _make_grid(model, dim, spec.grid, None if custom is None else len(custom))
    if custom is not None and len(custom) != len(grid):
        raise ModelGridMismatchError(
            f"{len(custom)} custom kernels for a grid of {len(grid)} points"
        )
    raw = _raw_kernels(model, dim, grid, custom)

    norms = np.linalg.norm(raw, axis=1)
    if np.any(norms <= KERNEL_NORM_TOL):
        raise InvalidGridError("A kernel vector vanishes; cannot normalize it")

    space = SampledSpace(
        model=model,
        dim=dim,
        grid=grid,
        raw_kernels=_frozen(raw),
        kernel_norms=_frozen(norms),
        kernels=_frozen(raw / norms[:, None]),
        label=spec.label,
    )
    logger.debug("Built space %s with %d grid points", space.label, space.size)
    return space


def normalized_kernel(space: KernelSpace, index: int) -> np.ndarray:
    """Stored unit kernel vector at grid ``index`` (read-only view, no recomputation)."""
    if isinstance(index, (bool, np.bool_)) or not isinstance(index, (int, np.integer)):
        raise IndexOutOfRangeError(f"Grid index must be an integer, got {index!r}")
    if not 0 <= index < space.size:
        raise IndexOutOfRangeError(f"Grid index {index} outside [0, {space.size})")
    return space.kernels[index]


def restrict(space: SampledSpace, indices: Sequence[int]) -> SampledSpace:
    """Sub-space on the grid points ``indices`` (kept in the given order)."""
    idx = np.asarray(indices, dtype=int)
    if idx.size == 0:
        raise InvalidGridError("Restriction to an empty set of grid points")
    if np.any(idx < 0) or np.any(idx >= space.size):
        raise IndexOutOfRangeError(f"Restriction indices outside [0, {space.size})")
    if len(np.unique(idx)) != len(idx):
        raise InvalidGridError("Restriction indices repeat")

    grid = DomainGrid(
        points=_frozen(space.grid.points[idx]),
        kind=space.grid.kind,
        params={**space.grid.params, "restricted": int(idx.size)},
    )
    return SampledSpace(
        model=space.model,
        dim=space.dim,
        grid=grid,
        raw_kernels=_frozen(space.raw_kernels[idx]),
        kernel_norms=_frozen(space.kernel_norms[idx]),
        kernels=_frozen(space.kernels[idx]),
        label=f"{space.label}@{idx.size}",
    )


def subsample(space: SampledSpace, max_points: int) -> SampledSpace:
    """Every ``ceil(size / max_points)``-th grid point; the space itself when small enough."""
    if max_points < 1:
        raise InvalidGridError("max_points must be positive")
    if space.size <= max_points:
        return space
    stride = -(-space.size // max_points)
    return restrict(space, range(0, space.size, stride))


def direct_sum(left: SampledSpace, right: SampledSpace) -> DirectSumSpace:
    """
    Direct sum sampled on the full product grid.

    The pair kernel is the stack ``[k_lam1, k_lam2]`` of the unnormalized kernels,
    renormalized to unit length.
    """
    m1, m2 = left.size, right.size
    stacked = np.concatenate(
        [np.repeat(left.raw_kernels, m2, axis=0), np.tile(right.raw_kernels, (m1, 1))],
        axis=1,
    )
    norms = np.sqrt(np.repeat(left.kernel_norms ** 2, m2) + np.tile(right.kernel_norms ** 2, m1))
    pairs = np.stack([np.repeat(np.arange(m1), m2), np.tile(np.arange(m2), m1)], axis=1)
    return DirectSumSpace(
        left=left,
        right=right,
        pairs=_frozen(pairs),
        kernels=_frozen(stacked / norms[:, None]),
    )

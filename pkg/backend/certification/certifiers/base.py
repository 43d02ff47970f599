"""
Certificate model and the tolerance policy shared by all certifiers.

A certificate carries one headline comparison (``lhs <= rhs``) plus optional
``links``: further comparisons that belong to the same statement (the second
inequality of a chain, the per-grid-point form of a sup statement, a dominance
check). ``details`` holds reported values that are not asserted.
"""

from typing import Any, Dict, List, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field
from pydantic.alias_generators import to_camel

Param = Union[float, int, str, bool]
Mode = Literal["pointwise", "sup", "scalar"]


class Tolerance(BaseModel):
    """holds iff lhs <= rhs (1 + rel) + abs * max(1, rhs)."""
    model_config = ConfigDict(frozen=True)

    rel: float = Field(1e-9, ge=0)
    abs: float = Field(1e-12, ge=0)

    def slack(self, lhs, rhs):
        """Signed room left under the tolerant bound; vectorized."""
        lhs = np.asarray(lhs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        return rhs * (1 + self.rel) + self.abs * np.maximum(1.0, rhs) - lhs

    def holds(self, lhs: float, rhs: float) -> bool:
        slack = float(self.slack(lhs, rhs))
        return bool(np.isfinite(slack) and slack >= 0)


DEFAULT_TOLERANCE = Tolerance()
# Refined-vs-unrefined comparisons use a pure absolute slack
DOMINANCE_TOLERANCE = Tolerance(rel=0.0, abs=1e-12)


class Link(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    name: str
    lhs: float
    rhs: float
    gap: float
    holds: bool
    witness_index: Optional[int] = None


class Certificate(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    theorem_id: str
    params: Dict[str, Param] = Field(default_factory=dict)
    lhs: float
    rhs: float
    gap: float
    holds: bool
    witness_index: Optional[int] = None
    mode: Mode = "sup"
    links: List[Link] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    @computed_field
    @property
    def passed(self) -> bool:
        return self.holds and all(link.holds for link in self.links)

    def link(self, name: str) -> Link:
        for item in self.links:
            if item.name == name:
                return item
        raise KeyError(name)


def compare(name: str, lhs: float, rhs: float, tol: Tolerance = DEFAULT_TOLERANCE,
            witness_index: Optional[int] = None) -> Link:
    lhs, rhs = float(lhs), float(rhs)
    return Link(name=name, lhs=lhs, rhs=rhs, gap=rhs - lhs,
                holds=tol.holds(lhs, rhs), witness_index=witness_index)


def pointwise(name: str, lhs_values, rhs_values, tol: Tolerance = DEFAULT_TOLERANCE) -> Link:
    """
    Per-grid-point comparison.

    The link holds iff the comparison holds at every grid point. It is reported
    at the point of smallest relative gap (rhs - lhs) / max(1, rhs).
    """
    lhs_values = np.asarray(lhs_values, dtype=float)
    rhs_values = np.broadcast_to(np.asarray(rhs_values, dtype=float), lhs_values.shape)
    slack = tol.slack(lhs_values, rhs_values)
    all_hold = bool(np.all(np.isfinite(slack) & (slack >= 0)))
    rel_gap = relative_gap(lhs_values, rhs_values)
    idx = int(np.argmin(np.where(np.isnan(rel_gap), -np.inf, rel_gap)))
    lhs, rhs = float(lhs_values[idx]), float(rhs_values[idx])
    return Link(name=name, lhs=lhs, rhs=rhs, gap=rhs - lhs, holds=all_hold, witness_index=idx)


def relative_gap(lhs, rhs):
    """(rhs - lhs) / max(1, rhs), nondecreasing in rhs for fixed lhs >= 0."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    return (rhs - lhs) / np.maximum(1.0, rhs)


def agreement(name: str, a: float, b: float, atol: float) -> Link:
    """|a - b| <= atol * max(1, |b|), as a link with no extra slack."""
    return compare(name, abs(float(a) - float(b)), atol * max(1.0, abs(float(b))), Tolerance(rel=0.0, abs=0.0))


def certificate(theorem_id: str, headline: Link, mode: Mode, params: Optional[Dict[str, Param]] = None,
                links: Sequence[Link] = (), details: Optional[Dict[str, Any]] = None) -> Certificate:
    return Certificate(
        theorem_id=theorem_id,
        params=dict(params or {}),
        lhs=headline.lhs,
        rhs=headline.rhs,
        gap=headline.gap,
        holds=headline.holds,
        witness_index=headline.witness_index,
        mode=mode,
        links=list(links),
        details={k: _plain(v) for k, v in (details or {}).items()},
    )


def _plain(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    return value


def argmax_link(name: str, values, rhs: float, tol: Tolerance = DEFAULT_TOLERANCE) -> Link:
    """Sup-mode comparison: max(values) against rhs, witnessed by the first maximizer."""
    values = np.asarray(values, dtype=float)
    idx = int(np.argmax(values))
    return compare(name, values[idx], rhs, tol, witness_index=idx)


def clamp_nonneg(values):
    return np.maximum(np.asarray(values, dtype=float), 0.0)

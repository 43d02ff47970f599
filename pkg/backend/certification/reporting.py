"""
Suite reports and their JSON / CSV serialization.

JSON: ``{"meta": {...}, "suites": [...], "dominance": [...]}``. The only
time-dependent value is ``meta.generatedAt``.
CSV: one row per certificate, plot-ready, params flattened into ``param_*``.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from .certifiers import Certificate
from .certifiers.base import relative_gap
from .errors import ReportIOError

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "suite_id", "space", "trial", "seed", "theorem_id", "mode",
    "lhs", "rhs", "gap", "holds", "passed", "witness_index",
]


class TrialCertificate(BaseModel):
    trial: int
    seed: int
    certificate: Certificate


class TrialError(BaseModel):
    trial: int
    seed: int
    params: Dict[str, Any] = Field(default_factory=dict)
    message: str


class SuiteSummary(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    certificates: int = 0
    min_gap: Optional[float] = Field(None, alias="minGap")
    mean_gap: Optional[float] = Field(None, alias="meanGap")
    worst_rel_margin: Optional[float] = Field(
        None, alias="worstRelMargin", description="Smallest relative gap over headlines and links"
    )
    # tighten mode only
    min_rel_gap: Optional[float] = Field(None, alias="minRelGap")
    min_rel_gap_seed: Optional[int] = Field(None, alias="minRelGapSeed")
    min_rel_gap_trial: Optional[int] = Field(None, alias="minRelGapTrial")
    min_rel_gap_params: Optional[Dict[str, Any]] = Field(None, alias="minRelGapParams")


class SuiteReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    suite_id: str = Field(..., alias="suiteId")
    space: Optional[str] = None
    trials: int
    violations: List[TrialCertificate] = Field(default_factory=list)
    errors: List[TrialError] = Field(default_factory=list)
    summary: SuiteSummary = Field(default_factory=SuiteSummary)
    # flat CSV rows, kept only when the run writes CSV
    rows: List[Dict[str, Any]] = Field(default_factory=list, exclude=True)

    @property
    def failed(self) -> bool:
        return bool(self.violations or self.errors)


class DominanceRow(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    refined: str
    unrefined: str
    space: Optional[str] = None
    refined_min_rel_gap: Optional[float] = Field(None, alias="refinedMinRelGap")
    unrefined_min_rel_gap: Optional[float] = Field(None, alias="unrefinedMinRelGap")
    holds: bool


def _improves(value: float, best: Optional[float]) -> bool:
    """First strict minimum wins; NaN counts as smallest, as with ``np.argmin``."""
    if best is None:
        return True
    if np.isnan(best):
        return False
    return bool(np.isnan(value) or value < best)


def certificate_row(suite_id: str, space: Optional[str], item: TrialCertificate) -> Dict[str, Any]:
    cert = item.certificate
    row = {
        "suite_id": suite_id,
        "space": space,
        "trial": item.trial,
        "seed": str(item.seed),
        "theorem_id": cert.theorem_id,
        "mode": cert.mode,
        "lhs": cert.lhs,
        "rhs": cert.rhs,
        "gap": cert.gap,
        "holds": cert.holds,
        "passed": cert.passed,
        "witness_index": cert.witness_index,
    }
    row.update({f"param_{k}": v for k, v in cert.params.items()})
    return row


class SuiteAccumulator:
    """
    Builds a SuiteReport from trial results as they arrive.

    Each certificate is folded into the counters and the tightest-instance
    record, then dropped unless it is a violation. Results must be added in
    trial order for ties to resolve to the earliest trial.
    """

    def __init__(self, suite_id: str, space: Optional[str], trials: int,
                 tighten: bool = False, keep_rows: bool = False):
        self.suite_id = suite_id
        self.space = space
        self.trials = trials
        self.tighten = tighten
        self.keep_rows = keep_rows
        self.count = 0
        self.gap_sum = 0.0
        self.min_gap = np.inf
        self.worst_margin = np.inf
        self.min_rel_gap: Optional[float] = None
        self.tightest: Optional[TrialCertificate] = None
        self.violations: List[TrialCertificate] = []
        self.errors: List[TrialError] = []
        self.rows: List[Dict[str, Any]] = []

    def add(self, item: Union[TrialCertificate, TrialError]) -> None:
        if isinstance(item, TrialError):
            self.errors.append(item)
            return
        cert = item.certificate
        rel = float(relative_gap(cert.lhs, cert.rhs))
        self.count += 1
        self.gap_sum += cert.gap
        self.min_gap = float(np.minimum(self.min_gap, cert.gap))
        margins = [rel] + [float(relative_gap(link.lhs, link.rhs)) for link in cert.links]
        self.worst_margin = float(np.min([self.worst_margin] + margins))
        if self.tighten and _improves(rel, self.min_rel_gap):
            self.min_rel_gap = rel
            self.tightest = item
        if not cert.passed:
            self.violations.append(item)
        if self.keep_rows:
            self.rows.append(certificate_row(self.suite_id, self.space, item))

    def summary(self) -> SuiteSummary:
        if not self.count:
            return SuiteSummary()
        summary = SuiteSummary(
            certificates=self.count,
            min_gap=self.min_gap,
            mean_gap=self.gap_sum / self.count,
            worst_rel_margin=self.worst_margin,
        )
        if self.tighten:
            summary.min_rel_gap = self.min_rel_gap
            summary.min_rel_gap_seed = self.tightest.seed
            summary.min_rel_gap_trial = self.tightest.trial
            summary.min_rel_gap_params = dict(self.tightest.certificate.params)
        return summary

    def report(self) -> SuiteReport:
        return SuiteReport(
            suite_id=self.suite_id,
            space=self.space,
            trials=self.trials,
            violations=self.violations,
            errors=self.errors,
            summary=self.summary(),
            rows=self.rows,
        )


def summarize(certificates: Iterable[TrialCertificate], tighten: bool = False) -> SuiteSummary:
    accumulator = SuiteAccumulator("", None, 0, tighten=tighten)
    for item in certificates:
        accumulator.add(item)
    return accumulator.summary()


def build_suite_report(suite_id: str, space: Optional[str], trials: int,
                       certificates: Iterable[TrialCertificate], errors: Iterable[TrialError],
                       tighten: bool = False, keep_rows: bool = True) -> SuiteReport:
    accumulator = SuiteAccumulator(suite_id, space, trials, tighten=tighten, keep_rows=keep_rows)
    for item in certificates:
        accumulator.add(item)
    for error in errors:
        accumulator.add(error)
    return accumulator.report()


def report_document(reports: Iterable[SuiteReport], meta: Dict[str, Any],
                    dominance: Optional[List[DominanceRow]] = None) -> Dict[str, Any]:
    document = {
        "meta": meta,
        "suites": [report.model_dump(mode="json", by_alias=True) for report in reports],
    }
    if dominance is not None:
        document["dominance"] = [row.model_dump(mode="json", by_alias=True) for row in dominance]
    return document


def certificate_rows(reports: Iterable[SuiteReport]) -> pd.DataFrame:
    rows = [row for report in reports for row in report.rows]
    params = sorted({key for row in rows for key in row if key.startswith("param_")})
    return pd.DataFrame(rows, columns=CSV_COLUMNS + params)


def emit_report(reports: List[SuiteReport], format: Literal["json", "csv"], path,
                meta: Optional[Dict[str, Any]] = None,
                dominance: Optional[List[DominanceRow]] = None) -> Path:
    """
    Write reports to ``path``.

    Args:
        reports: Suite reports in run order
        format: "json" or "csv"
        path: Target file; parent directories are created
        meta: JSON metadata block (config echo, generatedAt)
        dominance: Tighten-mode dominance table (JSON only)

    Returns:
        The written path
    """
    path = Path(path)
    if format not in ("json", "csv"):
        raise ReportIOError(f"Unknown report format: {format}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if format == "json":
            with open(path, "w") as f:
                json.dump(report_document(reports, meta or {}, dominance), f, indent=2, default=str)
        else:
            certificate_rows(reports).to_csv(path, index=False)
    except OSError as exc:
        raise ReportIOError(f"Could not write report to {path}: {exc}") from exc

    logger.info("Wrote %s report (%d suites) to %s", format, len(reports), path)
    return path

"""
Run configuration.

A run config file (JSON or YAML) is merged over the ``BEREZIN_*`` settings and
the "all" bundle of the suite catalogue, then CLI overrides are applied on top.
Everything is validated, including every parameter combination of every
selected suite, before a single trial runs.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .certifiers import Tolerance
from .errors import ConfigError
from .rkhs_model import SpaceSpec
from .suites import Suite, get_suite
from .utils import get_available_suites, get_bundle, load_yaml_config

logger = logging.getLogger(__name__)


class SuiteSelection(BaseModel):
    """One selected suite with optional parameter grid overrides."""
    id: str
    params: Dict[str, List[Any]] = Field(default_factory=dict)

    @field_validator("params", mode="before")
    @classmethod
    def _listify(cls, value):
        if value is None:
            return {}
        return {k: v if isinstance(v, list) else [v] for k, v in dict(value).items()}


class RunConfig(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    spaces: List[SpaceSpec] = Field(default_factory=list)
    suites: List[SuiteSelection] = Field(..., min_length=1, description="Suites to run, in report order")
    trials: int = Field(..., ge=1)
    master_seed: int = Field(..., ge=0, lt=2 ** 64, alias="masterSeed")
    tol_rel: float = Field(..., ge=0, alias="tolRel")
    tol_abs: float = Field(..., ge=0, alias="tolAbs")
    out: str = Field(..., description="Output directory for reports")
    format: Literal["json", "csv"] = "json"
    mode: Literal["certify", "tighten"] = "certify"
    workers: int = Field(1, ge=1)
    condition_cap: float = Field(1e3, ge=1, alias="conditionCap")
    angle_count: int = Field(720, ge=4, alias="angleCount")
    block_grid_limit: int = Field(4096, ge=1, alias="blockGridLimit")
    dims: Tuple[int, int] = Field((2, 8), description="Dimension range of space-free suites")

    @field_validator("suites", mode="before")
    @classmethod
    def _selections(cls, value):
        return [{"id": item} if isinstance(item, str) else item for item in value or []]

    @field_validator("dims")
    @classmethod
    def _dims(cls, value):
        lo, hi = value
        if lo < 1 or hi < lo:
            raise ValueError(f"dims must satisfy 1 <= lo <= hi, got {value}")
        return value

    @property
    def tolerance(self) -> Tolerance:
        return Tolerance(rel=self.tol_rel, abs=self.tol_abs)

    @property
    def report_path(self) -> Path:
        return Path(self.out) / f"{self.mode}-report.{self.format}"

    def resolve_suites(self) -> List[Tuple[Suite, List[Dict[str, Any]]]]:
        """Known suites with their expanded, validated parameter combinations."""
        known = get_available_suites()
        resolved = []
        for selection in self.suites:
            if selection.id not in known:
                raise ConfigError(f"Unknown suite '{selection.id}'. Known suites: {', '.join(known)}")
            suite = get_suite(selection.id)
            resolved.append((suite, suite.param_grid(selection.params)))
        if any(suite.needs_space for suite, _ in resolved) and not self.spaces:
            raise ConfigError("Selected suites need at least one space")
        return resolved


def _defaults() -> Dict[str, Any]:
    bundle = get_bundle("all")
    return {
        "spaces": bundle.get("spaces", []),
        "suites": list(get_available_suites()),
        "trials": getattr(settings, "BEREZIN_TRIALS", bundle.get("trials", 500)),
        "dims": tuple(bundle.get("dims", (2, 8))),
        "masterSeed": getattr(settings, "BEREZIN_MASTER_SEED", 42),
        "tolRel": getattr(settings, "BEREZIN_TOL_REL", 1e-9),
        "tolAbs": getattr(settings, "BEREZIN_TOL_ABS", 1e-12),
        "out": getattr(settings, "BEREZIN_OUTPUT_DIR", "reports"),
        "format": getattr(settings, "BEREZIN_REPORT_FORMAT", "json"),
        "workers": getattr(settings, "BEREZIN_WORKERS", 1),
        "conditionCap": getattr(settings, "BEREZIN_CONDITION_CAP", 1e3),
        "angleCount": getattr(settings, "BEREZIN_ANGLE_COUNT", 720),
        "blockGridLimit": getattr(settings, "BEREZIN_BLOCK_GRID_LIMIT", 4096),
    }


# snake_case file keys are accepted and folded onto their aliases
_ALIASES = {
    "master_seed": "masterSeed",
    "tol_rel": "tolRel",
    "tol_abs": "tolAbs",
    "condition_cap": "conditionCap",
    "angle_count": "angleCount",
    "block_grid_limit": "blockGridLimit",
}


def build_run_config(data: Optional[Dict[str, Any]] = None,
                     overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Merge settings defaults, a parsed config mapping and CLI overrides.

    Args:
        data: Parsed config file contents
        overrides: Non-None values win (e.g. ``{"trials": 10, "suite": ["young-scalar"]}``)

    Returns:
        Validated RunConfig; suite ids and parameter grids are checked too
    """
    merged = _defaults()
    for source in (data or {}, {k: v for k, v in (overrides or {}).items() if v is not None}):
        for key, value in source.items():
            merged[_ALIASES.get(key, key)] = value

    # --suite on the command line narrows the selection, keeping any file-level params
    suite_ids = merged.pop("suite", None)
    if suite_ids:
        from_file = {}
        for item in merged.get("suites") or []:
            if isinstance(item, dict) and "id" in item:
                from_file[item["id"]] = item
        merged["suites"] = [from_file.get(suite_id, suite_id) for suite_id in suite_ids]

    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as exc:
        raise ConfigError(f"Invalid run config: {exc}") from exc

    config.resolve_suites()
    logger.info("Run config: %d suites, %d spaces, %d trials, seed %d", len(config.suites),
                len(config.spaces), config.trials, config.master_seed)
    return config


def load_run_config(path: Union[str, Path, None] = None,
                    overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Read a JSON/YAML run config (optional) and build the RunConfig from it."""
    data = load_yaml_config(path) if path else {}
    return build_run_config(data, overrides)

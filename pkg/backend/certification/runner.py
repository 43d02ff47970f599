"""
Certification and tightness runs.

Each (suite, space) pair yields one SuiteReport. A task is one trial of one
suite on one space and evaluates every parameter combination, so the
combinations share the trial's pair and its derived operators. With more than
one worker the tasks fan out over a process pool whose workers build their own
spaces. ``Executor.map`` yields results in submission order and each one is
folded into its report on arrival, so reports are byte-identical whatever the
worker count.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from contextlib import ExitStack
from functools import partial
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Tuple, Union

from django.utils import timezone

from .config import RunConfig
from .errors import BerezinLabError
from .generators import mix_seed
from .reporting import DominanceRow, SuiteAccumulator, SuiteReport, TrialCertificate, TrialError
from .rkhs_model import DirectSumSpace, SampledSpace, space_from_spec
from .suites import Suite, TrialContext, prepare_sum_space, run_trial
from .utils import load_yaml_config

logger = logging.getLogger(__name__)

TrialResult = Union[TrialCertificate, TrialError]
# (suite, parameter combinations, index into the run's spaces or None, trial)
Task = Tuple[Suite, List[Dict[str, Any]], Optional[int], int]
Evaluate = Callable[[Iterable[Task]], Iterator[List[TrialResult]]]

# Tasks per pool round-trip, as a fraction of trials per worker
CHUNKS_PER_WORKER = 4


class _Run:
    """Spaces built once per process; block suites share the subsampled direct sums."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.spaces: List[SampledSpace] = [space_from_spec(spec) for spec in config.spaces]
        self._sums: Dict[int, DirectSumSpace] = {}

    def sum_space(self, index: int) -> DirectSumSpace:
        if index not in self._sums:
            self._sums[index] = prepare_sum_space(self.spaces[index], self.config.block_grid_limit)
        return self._sums[index]

    def targets(self, suite: Suite) -> List[Optional[int]]:
        return list(range(len(self.spaces))) if suite.needs_space else [None]

    def evaluate(self, task: Task) -> List[TrialResult]:
        """Every parameter combination of one trial, in combination order."""
        suite, combos, index, trial = task
        config = self.config
        space = self.spaces[index] if index is not None else None
        sum_space = self.sum_space(index) if index is not None and suite.family == "block" else None
        seed = mix_seed(config.master_seed, trial)
        shared: Dict[Hashable, Any] = {}
        results: List[TrialResult] = []
        for params in combos:
            ctx = TrialContext(
                suite_id=suite.suite_id,
                trial=trial,
                seed=seed,
                params=params,
                space=space,
                sum_space=sum_space,
                tol=config.tolerance,
                condition_cap=config.condition_cap,
                angle_count=config.angle_count,
                dims=config.dims,
                witness=suite.witness and trial == 0,
                shared=shared,
            )
            try:
                results.append(TrialCertificate(trial=trial, seed=seed, certificate=run_trial(suite, ctx)))
            except BerezinLabError as exc:
                logger.warning("Trial %d (seed %d) failed: %s", trial, seed, exc,
                               extra={"suite": suite.suite_id, "trial": trial})
                results.append(TrialError(trial=trial, seed=seed, params=params, message=str(exc)))
        return results

    def run_suite(self, evaluate: Evaluate, suite: Suite, combos: List[Dict[str, Any]],
                  index: Optional[int], tighten: bool) -> SuiteReport:
        config = self.config
        label = self.spaces[index].label if index is not None else None
        accumulator = SuiteAccumulator(suite.suite_id, label, config.trials, tighten=tighten,
                                       keep_rows=config.format == "csv")
        tasks = [(suite, combos, index, trial) for trial in range(config.trials)]
        for results in evaluate(tasks):
            for item in results:
                accumulator.add(item)
        report = accumulator.report()

        log = logger.warning if report.failed else logger.info
        log("%s: %d certificates, %d violations, %d errors", label or "no space",
            report.summary.certificates, len(report.violations), len(report.errors),
            extra={"suite": suite.suite_id})
        return report


_worker_run: Optional[_Run] = None


def _start_worker(config: RunConfig) -> None:
    global _worker_run
    _worker_run = _Run(config)


def _evaluate_in_worker(task: Task) -> List[TrialResult]:
    return _worker_run.evaluate(task)


def _run(config: RunConfig, tighten: bool) -> List[SuiteReport]:
    resolved = config.resolve_suites()
    run = _Run(config)
    with ExitStack() as stack:
        if config.workers > 1:
            executor = stack.enter_context(ProcessPoolExecutor(
                max_workers=config.workers, initializer=_start_worker, initargs=(config,),
            ))
            chunksize = max(1, config.trials // (config.workers * CHUNKS_PER_WORKER))
            evaluate = partial(executor.map, _evaluate_in_worker, chunksize=chunksize)
        else:
            evaluate = partial(map, run.evaluate)
        return [
            run.run_suite(evaluate, suite, combos, index, tighten)
            for suite, combos in resolved
            for index in run.targets(suite)
        ]


def run_certify(config: RunConfig) -> List[SuiteReport]:
    """One SuiteReport per (suite, space); deterministic per config."""
    return _run(config, tighten=False)


def run_tighten(config: RunConfig) -> List[SuiteReport]:
    """As run_certify, with the minimum relative gap and its seed in every summary."""
    return _run(config, tighten=True)


def dominance_table(reports: List[SuiteReport], slack: float = 1e-12) -> List[DominanceRow]:
    """
    Compare refined and unrefined suites run on matched instances.

    Rows are produced for every catalogue pair whose two suites are both present
    for the same space.
    """
    by_key = {(report.suite_id, report.space): report for report in reports}
    rows = []
    for pair in load_yaml_config().get("dominance", []):
        refined_id, unrefined_id = pair["refined"], pair["unrefined"]
        for (suite_id, space), refined in by_key.items():
            unrefined = by_key.get((unrefined_id, space))
            if suite_id != refined_id or unrefined is None:
                continue
            r_gap, u_gap = refined.summary.min_rel_gap, unrefined.summary.min_rel_gap
            holds = r_gap is not None and u_gap is not None and r_gap <= u_gap + slack
            rows.append(DominanceRow(refined=refined_id, unrefined=unrefined_id, space=space,
                                     refined_min_rel_gap=r_gap, unrefined_min_rel_gap=u_gap,
                                     holds=holds))
            if not holds:
                logger.warning("Refined min gap %s exceeds unrefined %s on %s", r_gap, u_gap, space,
                               extra={"suite": refined_id})
    return rows


def report_meta(config: RunConfig, with_timestamp: bool = True) -> Dict[str, Any]:
    meta = {
        "mode": config.mode,
        "config": config.model_dump(mode="json", by_alias=True),
    }
    if with_timestamp:
        meta["generatedAt"] = timezone.now().isoformat()
    return meta

import logging
import time
from typing import List, Sequence

from nullasym.experiments import ExperimentRegistry, ExperimentRun
from nullasym.models.report import ExperimentConfig, ExperimentReport, MergeSummary, report_merge

logger = logging.getLogger(__name__)


class Runner:
    """Runs registered experiments under one configuration and writes their reports."""

    def __init__(self, settings, registry: ExperimentRegistry):
        self.settings = settings
        self.registry = registry

    def run(self, config: ExperimentConfig, write: bool = True) -> ExperimentReport:
        experiment = self.registry.get(config.experiment)
        run = ExperimentRun(experiment, config, self.settings)
        logger.info('running %s (seed %d, presets %s)', experiment.name, run.seed,
                    ', '.join(run.presets) or 'none')

        started = time.perf_counter()
        experiment.func(run)
        elapsed = time.perf_counter() - started

        report = ExperimentReport(
            experiment=experiment.name,
            config=config.to_dict(),
            cases=run.cases,
            fits=run.fits,
            tables=run.tables,
            timing=elapsed if config.include_timing else None,
        )
        logger.info('%s finished in %.2fs: %d cases, %d failed', experiment.name, elapsed,
                    len(report.cases), len(report.failures))
        if write:
            report.write(config.out_dir or self.settings.OUT_DIR)
        return report

    def merge(self, paths: Sequence[str], out: str = None) -> MergeSummary:
        summary = report_merge([ExperimentReport.load(path) for path in paths])
        if out:
            summary.write(out)
            logger.info('merged %d reports into %s', len(paths), out)
        return summary

    def experiments(self) -> List[tuple]:
        return self.registry.describe()

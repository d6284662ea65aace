"""Experiment registry.

Experiments are grouped the way routes are grouped into blueprints: each
module builds an ``ExperimentGroup``, decorates its experiment functions with
``@group.experiment(...)`` and the catalog registers every group once.
"""
from dataclasses import dataclass, field
import logging
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from nullasym.exceptions import InvalidInputError, UnknownExperimentError
from nullasym.models.profiles import get_preset
from nullasym.models.report import CaseResult, ExperimentConfig

logger = logging.getLogger(__name__)


@dataclass
class Experiment:
    name: str
    func: Callable[['ExperimentRun'], None]
    group: str
    description: str = ''
    presets: Tuple[str, ...] = ()
    lists: Dict[str, List[float]] = field(default_factory=dict)
    grid: Dict[str, int] = field(default_factory=dict)
    options: Dict[str, object] = field(default_factory=dict)
    tolerance: float = None


class ExperimentGroup:
    def __init__(self, name: str):
        self.name = name
        self.experiments: List[Experiment] = []

    def experiment(self, name: str, description: str = '', presets: Sequence[str] = (), lists: dict = None,
                   grid: dict = None, options: dict = None, tolerance: float = None):
        def decorator(func):
            self.experiments.append(Experiment(
                name=name,
                func=func,
                group=self.name,
                description=description or (func.__doc__ or '').strip().split('\n')[0],
                presets=tuple(presets),
                lists={k: list(v) for k, v in (lists or {}).items()},
                grid=dict(grid or {}),
                options=dict(options or {}),
                tolerance=tolerance,
            ))
            return func
        return decorator


class ExperimentRegistry:
    def __init__(self):
        self._experiments: Dict[str, Experiment] = {}

    def register_group(self, group: ExperimentGroup):
        for experiment in group.experiments:
            if experiment.name in self._experiments:
                raise InvalidInputError(f"experiment {experiment.name!r} is registered twice")
            self._experiments[experiment.name] = experiment

    def get(self, name: str) -> Experiment:
        experiment = self._experiments.get(name)
        if experiment is None:
            raise UnknownExperimentError(f"unknown experiment {name!r}; known: {', '.join(self.names())}")
        return experiment

    def names(self) -> List[str]:
        return sorted(self._experiments)

    def describe(self) -> List[Tuple[str, str, str]]:
        return [(name, self._experiments[name].group, self._experiments[name].description)
                for name in self.names()]

    def __contains__(self, name):
        return name in self._experiments


registry = ExperimentRegistry()


class ExperimentRun:
    """Everything one experiment function sees, plus the rows it records."""

    def __init__(self, experiment: Experiment, config: ExperimentConfig, settings):
        unknown = set(config.lists) - set(experiment.lists)
        if unknown:
            takes = ', '.join(sorted(experiment.lists)) or 'none'
            raise InvalidInputError(f"experiment {experiment.name!r} takes no list "
                                    f"{', '.join(sorted(unknown))} (lists: {takes})")
        self.experiment = experiment
        self.config = config
        self.settings = settings
        self.seed = config.seed if config.seed is not None else settings.SEED
        self.tolerance = config.tolerance if config.tolerance is not None else (
            experiment.tolerance if experiment.tolerance is not None else settings.TOLERANCE)
        self.threads = settings.LCA_THREADS
        self.rng = np.random.default_rng(self.seed)
        self.cases: List[CaseResult] = []
        self.fits: Dict[str, object] = {}
        self.tables: Dict[str, List[dict]] = {}

    @property
    def presets(self) -> Tuple[str, ...]:
        return self.config.presets or self.experiment.presets

    def preset(self, name: str):
        return get_preset(name)

    def values(self, name: str) -> List[float]:
        return self.config.values(name, self.experiment.lists[name])

    def order(self, name: str) -> int:
        return self.config.order(name, self.experiment.grid.get(name, self.settings.N_THETA))

    def option(self, name: str):
        return self.config.option(name, self.experiment.options.get(name))

    def tol(self, default: float) -> float:
        """The --tol override when given, else the gate the experiment states."""
        return self.config.tolerance if self.config.tolerance is not None else default

    def case_id(self, label: str) -> str:
        return f"{self.experiment.name}/{label}"

    def compare(self, label: str, measured, reference, provenance: str, tolerance: float = None,
                relative: bool = False, **inputs) -> CaseResult:
        case = CaseResult.compare(self.case_id(label), measured, reference, provenance,
                                  self.tolerance if tolerance is None else tolerance, relative, inputs)
        return self._add(case)

    def check(self, label: str, measured, passed: bool, provenance: str, reference=None, error: float = None,
              tolerance: float = None, **inputs) -> CaseResult:
        case = CaseResult.check(self.case_id(label), measured, passed, provenance, reference, error, tolerance,
                                inputs)
        return self._add(case)

    def fit(self, name: str, value):
        self.fits[name] = value

    def table(self, name: str, rows: List[dict]):
        self.tables.setdefault(name, []).extend(rows)

    def _add(self, case: CaseResult) -> CaseResult:
        if any(existing.case_id == case.case_id for existing in self.cases):
            raise InvalidInputError(f"case id {case.case_id!r} recorded twice")
        if not case.passed:
            logger.warning('case %s failed: measured %s, reference %s, error %s, tolerance %s',
                           case.case_id, case.measured, case.reference, case.error, case.tolerance)
        self.cases.append(case)
        return case

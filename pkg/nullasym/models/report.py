import csv
import io
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from nullasym.exceptions import CaseCollisionError, InvalidInputError, SchemaMismatchError
from nullasym.models.profiles import get_preset
from nullasym.utils.helpers import format_value, is_monotone, jsonable

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

PAPER = 'PAPER'
TRIVIAL = 'TRIVIAL'
DERIVED = 'DERIVED'
PROVENANCES = (PAPER, TRIVIAL, DERIVED)

CASE_COLUMNS = ('case_id', 'provenance', 'passed', 'measured', 'reference', 'error', 'tolerance')


@dataclass
class ExperimentConfig:
    experiment: str
    presets: Tuple[str, ...] = ()
    grid: Dict[str, int] = field(default_factory=dict)
    lists: Dict[str, List[float]] = field(default_factory=dict)
    options: Dict[str, object] = field(default_factory=dict)
    tolerance: Optional[float] = None
    out_dir: Optional[str] = None
    seed: Optional[int] = None
    include_timing: bool = False

    def __post_init__(self):
        if not self.experiment:
            raise InvalidInputError('experiment name is required')
        self.presets = tuple(self.presets)
        for name in self.presets:
            get_preset(name)
        for name, values in self.lists.items():
            values = [float(v) for v in values]
            if not values:
                raise InvalidInputError(f"list {name!r} is empty; nothing to run")
            if not is_monotone(values):
                raise InvalidInputError(f"list {name!r} must be strictly monotone, got {values}")
            self.lists[name] = values
        for name, order in self.grid.items():
            if int(order) < 1:
                raise InvalidInputError(f"grid order {name!r} must be positive, got {order}")
            self.grid[name] = int(order)
        if self.tolerance is not None and not self.tolerance > 0:
            raise InvalidInputError(f"tolerance must be positive, got {self.tolerance}")

    @classmethod
    def from_dict(cls, data: dict, **overrides) -> 'ExperimentConfig':
        known = {'experiment', 'presets', 'grid', 'lists', 'options', 'tolerance', 'out_dir', 'seed',
                 'include_timing'}
        unknown = set(data) - known
        if unknown:
            raise InvalidInputError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged = {key: value for key, value in data.items()}
        for key, value in overrides.items():
            if value is None:
                continue
            if key in ('grid', 'lists', 'options'):
                merged[key] = {**merged.get(key, {}), **value}
            else:
                merged[key] = value
        return cls(
            experiment=merged.get('experiment'),
            presets=tuple(merged.get('presets') or ()),
            grid=dict(merged.get('grid') or {}),
            lists={k: list(v) for k, v in (merged.get('lists') or {}).items()},
            options=dict(merged.get('options') or {}),
            tolerance=merged.get('tolerance'),
            out_dir=merged.get('out_dir'),
            seed=merged.get('seed'),
            include_timing=bool(merged.get('include_timing', False)),
        )

    @classmethod
    def from_json(cls, path: str, **overrides) -> 'ExperimentConfig':
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInputError(f"cannot read config {path}: {e}")
        if not isinstance(data, dict):
            raise InvalidInputError(f"config {path} must hold a JSON object")
        return cls.from_dict(data, **overrides)

    def to_dict(self) -> dict:
        return {
            'experiment': self.experiment,
            'presets': list(self.presets),
            'grid': dict(self.grid),
            'lists': {k: list(v) for k, v in self.lists.items()},
            'options': dict(self.options),
            'tolerance': self.tolerance,
            'seed': self.seed,
        }

    def values(self, name: str, default: Sequence[float]) -> List[float]:
        return list(self.lists.get(name, default))

    def option(self, name: str, default=None):
        return self.options.get(name, default)

    def order(self, name: str, default: int) -> int:
        return int(self.grid.get(name, default))


@dataclass
class CaseResult:
    case_id: str
    inputs: Dict[str, object]
    measured: object
    reference: object
    provenance: str
    error: Optional[float]
    tolerance: Optional[float]
    passed: bool

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise InvalidInputError(f"provenance must be one of {PROVENANCES}, got {self.provenance!r}")

    @classmethod
    def compare(cls, case_id: str, measured, reference, provenance: str, tolerance: float,
                relative: bool = False, inputs: dict = None) -> 'CaseResult':
        """|measured - reference| (or its relative form) against the tolerance."""
        error = float(abs(measured - reference))
        if relative and reference != 0:
            error /= float(abs(reference))
        return cls(case_id, dict(inputs or {}), measured, reference, provenance, error, tolerance,
                   bool(error <= tolerance))

    @classmethod
    def check(cls, case_id: str, measured, passed: bool, provenance: str, reference=None,
              error: float = None, tolerance: float = None, inputs: dict = None) -> 'CaseResult':
        """A case decided by an inequality or a predicate rather than a distance."""
        return cls(case_id, dict(inputs or {}), measured, reference, provenance,
                   None if error is None else float(error), tolerance, bool(passed))

    def to_dict(self) -> dict:
        return {
            'case_id': self.case_id,
            'inputs': self.inputs,
            'measured': self.measured,
            'reference': self.reference,
            'provenance': self.provenance,
            'error': self.error,
            'tolerance': self.tolerance,
            'passed': self.passed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'CaseResult':
        return cls(data['case_id'], dict(data.get('inputs') or {}), data.get('measured'), data.get('reference'),
                   data['provenance'], data.get('error'), data.get('tolerance'), bool(data['passed']))


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    cases: List[CaseResult] = field(default_factory=list)
    fits: Dict[str, object] = field(default_factory=dict)
    tables: Dict[str, List[dict]] = field(default_factory=dict)
    timing: Optional[float] = None
    schema: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def failures(self) -> List[str]:
        return [case.case_id for case in self.cases if not case.passed]

    def to_dict(self) -> dict:
        data = {
            'schema': self.schema,
            'experiment': self.experiment,
            'config': self.config,
            'cases': [case.to_dict() for case in self.cases],
            'fits': self.fits,
            'passed': self.passed,
        }
        if self.timing is not None:
            data['timing'] = self.timing
        return jsonable(data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + '\n'

    def to_csv(self) -> str:
        input_keys = sorted({key for case in self.cases for key in case.inputs})
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(list(CASE_COLUMNS) + input_keys)
        for case in self.cases:
            row = [case.case_id, case.provenance, case.passed, case.measured, case.reference, case.error,
                   case.tolerance]
            row += [case.inputs.get(key, '') for key in input_keys]
            writer.writerow([_cell(value) for value in row])
        return buffer.getvalue()

    def write(self, out_dir: str) -> List[str]:
        """Write <experiment>.csv, <experiment>.json and one CSV per plot table."""
        os.makedirs(out_dir, exist_ok=True)
        stem = self.experiment.replace('/', '_')
        paths = []

        csv_path = os.path.join(out_dir, f"{stem}.csv")
        with open(csv_path, 'w', newline='', encoding='utf-8') as f:
            f.write(self.to_csv())
        paths.append(csv_path)

        for name in sorted(self.tables):
            table_path = os.path.join(out_dir, f"{stem}_{name}.csv")
            with open(table_path, 'w', newline='', encoding='utf-8') as f:
                f.write(table_csv(self.tables[name]))
            paths.append(table_path)

        json_path = os.path.join(out_dir, f"{stem}.json")
        with open(json_path, 'w', encoding='utf-8') as f:
            f.write(self.to_json())
        paths.append(json_path)

        logger.info('report %s written to %s (%d cases)', self.experiment, out_dir, len(self.cases))
        return paths

    @classmethod
    def from_dict(cls, data: dict) -> 'ExperimentReport':
        if 'schema' not in data or 'experiment' not in data:
            raise InvalidInputError('report is missing its schema or experiment field')
        return cls(
            experiment=data['experiment'],
            config=dict(data.get('config') or {}),
            cases=[CaseResult.from_dict(case) for case in data.get('cases', [])],
            fits=dict(data.get('fits') or {}),
            timing=data.get('timing'),
            schema=data['schema'],
        )

    @classmethod
    def load(cls, path: str) -> 'ExperimentReport':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInputError(f"cannot read report {path}: {e}")
        return cls.from_dict(data)


def _cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, (list, tuple)):
        return ' '.join(format_value(v) for v in value)
    return format_value(value)


def table_csv(rows: List[dict]) -> str:
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(key)) for key in columns])
    return buffer.getvalue()


# --- merging ---------------------------------------------------------------------


@dataclass
class MergeSummary:
    cases: List[CaseResult]
    matrix: Dict[str, Dict[str, int]]
    sources: List[str]
    schema: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    def to_dict(self) -> dict:
        return jsonable({
            'schema': self.schema,
            'sources': self.sources,
            'matrix': self.matrix,
            'cases': [case.to_dict() for case in self.cases],
            'passed': self.passed,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + '\n'

    def write(self, path: str) -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.to_json())
        return path


def report_merge(reports: Sequence[ExperimentReport]) -> MergeSummary:
    """Union of the case rows of several reports with a per-experiment pass/fail matrix."""
    if not reports:
        raise InvalidInputError('nothing to merge')

    schemas = sorted({report.schema for report in reports})
    if schemas != [SCHEMA_VERSION]:
        raise SchemaMismatchError(f"cannot merge schema versions {schemas}; this build reads {SCHEMA_VERSION}")

    seen: Dict[str, Tuple[str, CaseResult]] = {}
    for report in reports:
        for case in report.cases:
            if case.case_id in seen:
                other_source, other = seen[case.case_id]
                raise CaseCollisionError(case.case_id, [f"{other_source} [{other.provenance}]",
                                                        f"{report.experiment} [{case.provenance}]"])
            seen[case.case_id] = (report.experiment, case)

    matrix: Dict[str, Dict[str, int]] = {}
    for report in reports:
        row = matrix.setdefault(report.experiment, {'passed': 0, 'failed': 0, 'total': 0})
        for case in report.cases:
            row['passed' if case.passed else 'failed'] += 1
            row['total'] += 1

    cases = [case for _, case in seen.values()]
    failed = sum(row['failed'] for row in matrix.values())
    if failed:
        logger.warning('merged summary has %d failing cases', failed)
    return MergeSummary(cases, matrix, [report.experiment for report in reports])

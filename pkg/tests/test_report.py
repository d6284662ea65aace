import json

import pytest

from nullasym.exceptions import CaseCollisionError, InvalidInputError, SchemaMismatchError
from nullasym.models.report import (
    CASE_COLUMNS,
    DERIVED,
    PAPER,
    SCHEMA_VERSION,
    TRIVIAL,
    CaseResult,
    ExperimentConfig,
    ExperimentReport,
    report_merge,
    table_csv,
)


def make_report(experiment, passed=(True, True), schema=SCHEMA_VERSION):
    cases = [
        CaseResult.check(f"{experiment}/case{index}", float(index), ok, PAPER, reference=0.0, inputs={'r': 10.0})
        for index, ok in enumerate(passed)
    ]
    return ExperimentReport(experiment, {'experiment': experiment}, cases, schema=schema)


class TestExperimentConfig:
    def test_defaults(self):
        config = ExperimentConfig('asymptote')
        assert config.presets == ()
        assert config.tolerance is None
        assert not config.include_timing

    def test_unknown_preset_rejected(self):
        with pytest.raises(InvalidInputError):
            ExperimentConfig('asymptote', presets=('nope',))

    def test_empty_list_rejected(self):
        with pytest.raises(InvalidInputError, match='empty'):
            ExperimentConfig('asymptote', lists={'r': []})

    def test_unsorted_list_rejected(self):
        with pytest.raises(InvalidInputError, match='monotone'):
            ExperimentConfig('asymptote', lists={'r': [10, 40, 20]})

    def test_descending_list_accepted(self):
        config = ExperimentConfig('fock-spectral', lists={'mu': [0.4, 0.2, 0.1]})
        assert config.values('mu', []) == [0.4, 0.2, 0.1]

    @pytest.mark.parametrize('tolerance', [0.0, -1e-3])
    def test_tolerance_must_be_positive(self, tolerance):
        with pytest.raises(InvalidInputError):
            ExperimentConfig('asymptote', tolerance=tolerance)

    def test_grid_order_must_be_positive(self):
        with pytest.raises(InvalidInputError):
            ExperimentConfig('asymptote', grid={'n_theta': 0})

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(InvalidInputError, match='unknown config keys'):
            ExperimentConfig.from_dict({'experiment': 'tail', 'colour': 'blue'})

    def test_overrides_win_and_merge(self):
        data = {'experiment': 'tail', 'seed': 1, 'lists': {'r': [10, 20]}, 'options': {'a': 1}}
        config = ExperimentConfig.from_dict(data, seed=7, tolerance=None, lists={'S': [1, 2]},
                                            options={'b': 2})
        assert config.seed == 7
        assert config.tolerance is None
        assert config.lists == {'r': [10.0, 20.0], 'S': [1.0, 2.0]}
        assert config.options == {'a': 1, 'b': 2}

    def test_from_json(self, tmp_path):
        path = tmp_path / 'config.json'
        path.write_text(json.dumps({'experiment': 'tail', 'presets': ['tanh'], 'tolerance': 1e-3}))
        config = ExperimentConfig.from_json(str(path), out_dir='elsewhere')
        assert config.presets == ('tanh',)
        assert config.tolerance == 1e-3
        assert config.out_dir == 'elsewhere'

    def test_unreadable_json(self, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{not json')
        with pytest.raises(InvalidInputError):
            ExperimentConfig.from_json(str(path))

    def test_to_dict_leaves_out_output_dir(self):
        assert 'out_dir' not in ExperimentConfig('tail', out_dir='somewhere').to_dict()


class TestCaseResult:
    def test_compare_absolute(self):
        case = CaseResult.compare('x/a', 1.00001, 1.0, DERIVED, 1e-4)
        assert case.passed
        assert case.error == pytest.approx(1e-5)

    def test_compare_relative(self):
        case = CaseResult.compare('x/a', 110.0, 100.0, DERIVED, 0.05, relative=True)
        assert not case.passed
        assert case.error == pytest.approx(0.1)

    def test_compare_complex(self):
        case = CaseResult.compare('x/a', 1.0 + 1e-9j, 1.0, DERIVED, 1e-8)
        assert case.passed

    def test_check_keeps_predicate(self):
        case = CaseResult.check('x/b', 0.9, False, TRIVIAL, reference=0.8)
        assert not case.passed
        assert case.error is None

    def test_unknown_provenance_rejected(self):
        with pytest.raises(InvalidInputError):
            CaseResult.check('x/c', 1.0, True, 'GUESS')

    def test_dict_round_trip(self):
        case = CaseResult.compare('x/d', 2.0, 2.5, PAPER, 1.0, inputs={'mu': 0.1})
        assert CaseResult.from_dict(case.to_dict()) == case


class TestExperimentReport:
    def test_passed_and_failures(self):
        report = make_report('tail', passed=(True, False))
        assert not report.passed
        assert report.failures == ['tail/case1']

    def test_csv_columns(self):
        header = make_report('tail').to_csv().splitlines()[0]
        assert header.split(',') == list(CASE_COLUMNS) + ['r']

    def test_csv_formats_values(self):
        report = ExperimentReport('tail', {}, [
            CaseResult.compare('tail/a', 0.1, 0.0, TRIVIAL, 1.0, inputs={'y': [0.0, 1.0]}),
        ])
        row = report.to_csv().splitlines()[1]
        assert row == 'tail/a,TRIVIAL,true,0.1,0.0,0.1,1.0,0.0 1.0'

    def test_json_is_sorted_and_versioned(self):
        text = make_report('tail').to_json()
        data = json.loads(text)
        assert data['schema'] == SCHEMA_VERSION
        assert 'timing' not in data
        assert text == json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + '\n'

    def test_timing_only_when_present(self):
        report = make_report('tail')
        report.timing = 1.5
        assert report.to_dict()['timing'] == 1.5

    def test_complex_values_are_split(self):
        report = ExperimentReport('x', {}, [CaseResult.check('x/z', 1 + 2j, True, DERIVED)])
        assert report.to_dict()['cases'][0]['measured'] == {'re': 1.0, 'im': 2.0}

    def test_write_and_load(self, tmp_path):
        report = make_report('wave-check')
        report.tables = {'wave': [{'h': 0.1, 'residual': 1e-3}]}
        paths = report.write(str(tmp_path / 'out'))
        names = [p.split('/')[-1] for p in paths]
        assert names == ['wave-check.csv', 'wave-check_wave.csv', 'wave-check.json']
        loaded = ExperimentReport.load(paths[-1])
        assert loaded.cases == report.cases
        assert loaded.experiment == 'wave-check'

    def test_write_is_deterministic(self, tmp_path):
        report = make_report('tail')
        first = report.write(str(tmp_path / 'a'))
        second = report.write(str(tmp_path / 'b'))
        for a, b in zip(first, second):
            assert open(a, 'rb').read() == open(b, 'rb').read()

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(InvalidInputError):
            ExperimentReport.load(str(tmp_path / 'missing.json'))


class TestTableCsv:
    def test_column_union_in_first_seen_order(self):
        text = table_csv([{'r': 1.0, 'value': 2.0}, {'r': 2.0, 'extra': True}])
        assert text.splitlines() == ['r,value,extra', '1.0,2.0,', '2.0,,true']


class TestReportMerge:
    def test_single_report_is_identity(self):
        report = make_report('tail', passed=(True, False))
        summary = report_merge([report])
        assert summary.cases == report.cases
        assert summary.matrix == {'tail': {'passed': 1, 'failed': 1, 'total': 2}}
        assert not summary.passed

    def test_disjoint_reports_union(self):
        summary = report_merge([make_report('tail'), make_report('smear')])
        assert [case.case_id for case in summary.cases] == ['tail/case0', 'tail/case1', 'smear/case0',
                                                            'smear/case1']
        assert summary.sources == ['tail', 'smear']
        assert summary.passed

    def test_collision_lists_both_provenances(self):
        first = make_report('tail')
        second = ExperimentReport('other', {}, [CaseResult.check('tail/case0', 1.0, True, TRIVIAL)])
        with pytest.raises(CaseCollisionError) as excinfo:
            report_merge([first, second])
        assert excinfo.value.case_id == 'tail/case0'
        assert excinfo.value.provenances == ('other [TRIVIAL]', 'tail [PAPER]')

    def test_schema_mismatch(self):
        with pytest.raises(SchemaMismatchError):
            report_merge([make_report('tail'), make_report('smear', schema=SCHEMA_VERSION + 1)])

    def test_nothing_to_merge(self):
        with pytest.raises(InvalidInputError):
            report_merge([])

    def test_summary_written(self, tmp_path):
        path = report_merge([make_report('tail')]).write(str(tmp_path / 'merged' / 'summary.json'))
        data = json.loads(open(path).read())
        assert data['matrix']['tail']['total'] == 2
        assert data['passed'] is True

import csv
import json

from src.output_writer import dump_json, format_summary, iter_checks, save_results


def sample_report():
    return {
        'command': 'reduce',
        'scalars': {'mode': 'symbolic'},
        'provenance': ['reduce.centralizer'],
        'entries': [
            {
                'key': 'centralizer',
                'command': 'reduce',
                'checks': [
                    {'check': 'closed', 'provenance': 'reduce.closure', 'passed': True},
                    {'check': 'lambda', 'provenance': 'reduce.lambda', 'passed': False, 'value': '1/2'},
                ],
                'passed': False,
            },
            {'key': 'broken', 'command': 'induce', 'error': 'boom', 'passed': False},
        ],
        'summary': {'total': 2, 'passed': 0, 'failed': 2},
        'passed': False,
    }


def test_dump_json_is_deterministic():
    report = sample_report()
    text = dump_json(report)
    assert text == dump_json(json.loads(text))
    assert text.index('"command"') < text.index('"entries"')


def test_iter_checks_rows():
    rows = list(iter_checks(sample_report()))
    assert rows[0][:3] == ('centralizer', 'closed', 'pass')
    assert rows[1][2] == 'fail'
    assert json.loads(rows[1][3]) == {'provenance': 'reduce.lambda', 'value': '1/2'}
    assert rows[2] == ('broken', 'induce', 'error', 'boom')


def test_save_results_writes_each_format(tmp_path):
    paths = save_results(sample_report(), tmp_path, ['json', 'csv', 'xml'])
    assert [p.suffix for p in paths] == ['.json', '.csv']
    assert all(p.name.startswith('hecke_reduce_') for p in paths)
    assert json.loads(paths[0].read_text(encoding='utf-8'))['summary']['failed'] == 2
    with open(paths[1], encoding='utf-8', newline='') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['entry', 'check', 'status', 'detail']
    assert len(rows) == 4


def test_format_summary():
    text = format_summary(sample_report())
    assert 'コマンド: reduce' in text
    assert '[×] broken: induce' in text


def test_skipped_checks_are_marked():
    report = sample_report()
    report['entries'][0]['checks'].append(
        {'check': 'series', 'provenance': 'induce.series', 'passed': None, 'skipped': True})
    report['summary']['skipped'] = 1
    rows = list(iter_checks(report))
    assert rows[2][:3] == ('centralizer', 'series', 'skip')
    assert json.loads(rows[2][3]) == {'provenance': 'induce.series'}
    assert 'スキップしたチェック: 1' in format_summary(report)

import json
import sys
from fractions import Fraction

import pytest

import src.main as cli
from src.errors import MisuseError, SchemaError


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    monkeypatch.setattr(cli, 'setup_logging', lambda *args, **kwargs: None)
    monkeypatch.delenv('HECKE_MODE', raising=False)
    monkeypatch.delenv('HECKE_CONFIG_DIR', raising=False)


def test_join_value_flags():
    argv = ['reduce', '--signs', '-,+', '--exponents', '1/2,1/3', '--m1', '-1/3', '--verbose']
    assert cli._join_value_flags(argv) == [
        'reduce', '--signs=-,+', '--exponents', '1/2,1/3', '--m1=-1/3', '--verbose']


def test_parsers():
    assert cli.parse_signs('-,+,1') == [-1, 1, 1]
    assert cli.parse_params('1,0;2,1/2') == [(1, 0), (2, Fraction(1, 2))]
    with pytest.raises(SchemaError):
        cli.parse_signs('0')
    with pytest.raises(SchemaError):
        cli.parse_params('1,0,2')


def test_reduce_centralizer():
    code, report = cli.run(['reduce', '--signs', '-,+', '--exponents', '1/2,1/3', '--m1', '1', '--m2', '2'])
    assert code == cli.EXIT_OK
    assert report['provenance'] == ['reduce.centralizer', 'reduce.closure', 'reduce.lambda']
    datum = report['entries'][0]['checks'][0]['datum']
    assert [b['lambda_s'] for b in datum['blocks']] == ['1', '2']
    assert report['scalars'] == {'mode': 'symbolic'}


def test_reduce_specialization():
    code, report = cli.run(['reduce', '--specialization', 'o(2n)'])
    assert code == cli.EXIT_OK
    assert 'clifford' in report['entries'][0]['checks'][0]


def test_reduce_without_input_is_usage_error():
    code, report = cli.run(['reduce'])
    assert code == cli.EXIT_USAGE
    assert report['kind'] == 'SchemaError'


def test_induce_unknown_report():
    code, report = cli.run(['induce', '--n', '1', '--pi', 'ps:1/2', '--report', 'weights,bogus'])
    assert code == cli.EXIT_USAGE
    assert report['passed'] is False


def test_induce_reports():
    code, report = cli.run(['induce', '--n', '1', '--mplus', '1', '--pi', 'ps:1/2',
                            '--report', 'weights,verdict'])
    assert code == cli.EXIT_OK
    entry = report['entries'][0]
    assert entry['dim'] == 2
    assert entry['checks'][1]['verdict']['status'] == 'absolutely-irreducible'


def test_verify_finite():
    code, report = cli.run(['verify', '--suite', 'finite', '--n', '2'])
    assert code == cli.EXIT_OK
    assert report['provenance'] == ['finite.steinberg', 'finite.trivial']
    assert report['summary'] == {'total': 1, 'passed': 1, 'failed': 0, 'skipped': 0}


def test_overlap_failure_is_reported_not_raised():
    code, report = cli.run(['overlap', '--pi', 'ps:1/3'])
    assert code == cli.EXIT_FAILED
    assert 'MisuseError' in report['entries'][0]['error']


def test_overlap_passes():
    code, report = cli.run(['overlap', '--pi', 'ps:1'])
    assert code == cli.EXIT_OK
    assert report['provenance'] == ['overlap.mplus_only']


def test_numeric_mode_is_reported():
    code, report = cli.run(['reduce', '--specialization', 'hb0', '--mode', 'numeric', '--t0', '5'])
    assert code == cli.EXIT_OK
    assert report['scalars'] == {'mode': 'numeric', 't0': '5'}


def test_numeric_zero_t0_is_usage_error():
    code, report = cli.run(['reduce', '--specialization', 'hb0', '--mode', 'numeric', '--t0', '0'])
    assert code == cli.EXIT_USAGE
    assert report['kind'] == 'ConfigurationError'


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.run(['verify'])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        cli.run(['rank1', '--family', 'g2'])


def test_run_manifest(tmp_path):
    manifest = tmp_path / 'manifest.json'
    manifest.write_text(json.dumps({
        'version': 1,
        'entries': [
            {'key': 'ok', 'pi': 'ps:1', 'params': [[1, 0]], 'checks': ['verdict']},
            {'key': 'bad', 'pi': 'ps:1/3', 'params': [[1, 0]], 'checks': ['overlap']},
        ],
    }), encoding='utf-8')
    code, report = cli.run(['run', '--manifest', str(manifest)])
    assert code == cli.EXIT_FAILED
    assert [e['key'] for e in report['entries']] == ['bad', 'ok']
    assert report['summary'] == {'total': 2, 'passed': 1, 'failed': 1, 'skipped': 0}


def test_run_manifest_schema_error(tmp_path):
    manifest = tmp_path / 'manifest.yaml'
    manifest.write_text("version: 3\nentries: []\n", encoding='utf-8')
    code, report = cli.run(['run', '--manifest', str(manifest)])
    assert code == cli.EXIT_USAGE


def test_output_dir(tmp_path):
    code, _ = cli.run(['reduce', '--specialization', 'hb0', '--output-dir', str(tmp_path), '--format', 'both'])
    assert code == cli.EXIT_OK
    assert sorted(p.suffix for p in tmp_path.iterdir()) == ['.csv', '.json']


def test_main_prints_json(monkeypatch, capsys):
    monkeypatch.setattr(sys, 'argv', ['run_workbench.py', 'reduce', '--specialization', 'hb0'])
    with pytest.raises(SystemExit) as exc:
        cli.main()
    assert exc.value.code == 0
    assert json.loads(capsys.readouterr().out)['command'] == 'reduce'


def test_context_failure_still_builds_report(monkeypatch):
    def broken_context(args, config):
        raise MisuseError('context unavailable')

    monkeypatch.setattr(cli, '_Context', broken_context)
    code, report = cli.run(['reduce', '--specialization', 'hb0'])
    assert code == cli.EXIT_FAILED
    assert 'MisuseError' in report['entries'][0]['error']
    assert report['scalars'] == {'mode': 'symbolic'}


def test_max_span_words_reaches_verdict(tmp_path):
    (tmp_path / 'workbench.yaml').write_text(
        "scalars:\n  crosscheck_t0: []\nexperiments:\n  max_span_words: 1\n", encoding='utf-8')
    code, report = cli.run(['induce', '--n', '1', '--mplus', '1', '--pi', 'ps:1/2',
                            '--report', 'verdict', '--config-dir', str(tmp_path)])
    assert report['entries'][0]['checks'][0]['verdict']['status'] == 'inconclusive-numeric'
    assert code == cli.EXIT_OK

import json
import random
from fractions import Fraction

import pytest

from src.errors import SchemaError
from src.linalg import NUMERIC, ScalarField
from src.manifest import (
    build_pi,
    check_ok,
    load_manifest,
    manifest_field,
    random_overlap_spec,
    random_separated_spec,
    run_checks,
    run_manifest,
    validate_manifest,
)
from src.modules_fd import module_spec_weight
from src.reducibility import is_strongly_separated


def manifest_payload(**overrides):
    payload = {
        'version': 1,
        'seed': 11,
        'entries': [
            {'key': 'b', 'pi': 'ps:1', 'params': [[1, 0]], 'checks': ['verdict', 'overlap']},
            {'key': 'a', 'pi': 'ps:1/3', 'params': [[1, 0]], 'checks': ['overlap']},
        ],
    }
    payload.update(overrides)
    return payload


@pytest.mark.parametrize('overrides', [
    {'version': 2},
    {'mode': 'float'},
    {'seed': '11'},
    {'entries': []},
    {'entries': [{'key': 'x', 'pi': 'ps:1', 'params': [[1, 0]], 'checks': ['verdict']}] * 2},
    {'entries': [{'key': 'x', 'pi': 'ps:1', 'params': [[1, 0]], 'checks': ['bogus']}]},
    {'entries': [{'key': 'x', 'params': [[1, 0]], 'checks': ['verdict']}]},
    {'entries': [{'key': 'x', 'pi': 'ps:1', 'params': [[1]], 'checks': ['verdict']}]},
    {'entries': [{'key': 'x', 'pi': {'random': 'separated'}, 'params': [[1, 0]], 'checks': ['verdict']}]},
])
def test_validate_manifest_rejects(overrides):
    with pytest.raises(SchemaError):
        validate_manifest(manifest_payload(**overrides))


def test_validate_manifest_defaults():
    manifest = validate_manifest({
        'version': 1,
        'entries': [{'pi': 'ps:1', 'params': [['1/2', 0]], 'checks': ['verdict']}],
    })
    assert manifest.seed == 0
    assert manifest.entries[0].key == 'entry000'
    assert manifest.entries[0].params == ((Fraction(1, 2), Fraction(0)),)
    assert manifest.to_json()['entries'] == ['entry000']


def test_load_manifest_formats(tmp_path):
    yaml_path = tmp_path / 'm.yaml'
    yaml_path.write_text(
        "version: 1\nentries:\n  - key: k\n    pi: 'ps:1'\n    params: [[1, 0]]\n    checks: [verdict]\n",
        encoding='utf-8')
    assert load_manifest(yaml_path).base_dir == tmp_path
    json_path = tmp_path / 'm.json'
    json_path.write_text('{"version": 1,', encoding='utf-8')
    with pytest.raises(SchemaError):
        load_manifest(json_path)
    with pytest.raises(SchemaError):
        load_manifest(tmp_path / 'missing.json')


def test_build_pi_uses_common_root_index():
    pi = build_pi('ps:1/2', [(Fraction(1, 3), Fraction(0))])
    assert pi.algebra.root_index == 6


def test_random_separated_spec_is_deterministic():
    params = [(Fraction(1), Fraction(0)), (Fraction(2), Fraction(0))]
    spec = random_separated_spec(random.Random(5), 2, params)
    assert spec == random_separated_spec(random.Random(5), 2, params)
    nu = module_spec_weight(spec)
    assert all(is_strongly_separated(nu, mp, mm) for mp, mm in params)


def test_random_overlap_spec_hits_set():
    spec = random_overlap_spec(random.Random(3), 2, 1, 0)
    coords = module_spec_weight(spec).coords
    assert any(c in ((1, Fraction(1)), (1, Fraction(-1))) for c in coords)


def test_run_checks_records_provenance():
    pi = build_pi('ps:1', [(Fraction(1), Fraction(0))])
    records = run_checks(pi, 'ps:1', [(Fraction(1), Fraction(0))], ['verdict', 'series'])
    assert [r['provenance'] for r in records] == ['induce.verdict', 'induce.series']
    assert records[0]['verdict']['status'] == 'reducible'
    assert records[1]['series'] == {'length': 2, 'dims': [1, 1]}


def test_unavailable_checks_are_skipped_not_passed():
    params = [(Fraction(1), Fraction(0))]
    pi = build_pi('ps:1', params, fld=ScalarField(NUMERIC, 1, 5))
    records = run_checks(pi, 'ps:1', params, ['crosscheck'])
    assert records[0]['passed'] is None
    assert records[0]['skipped'] is True
    assert check_ok(records[0])


def test_check_ok():
    assert check_ok({'passed': True})
    assert not check_ok({'passed': False})
    assert not check_ok({'passed': None})
    assert check_ok({'passed': None, 'skipped': True})


def test_run_manifest_sorts_and_isolates_failures():
    results = run_manifest(validate_manifest(manifest_payload()), max_workers=2)
    assert [r['key'] for r in results] == ['a', 'b']
    assert 'MisuseError' in results[0]['error']
    assert results[1]['passed']
    assert json.loads(json.dumps(results, default=str))[1]['command'] == 'run'


def test_manifest_field():
    manifest = validate_manifest(manifest_payload(mode='numeric', t0='5'))
    fld = manifest_field(manifest, 'symbolic', 4)
    assert fld.mode == NUMERIC
    assert fld.t0 == 5
    assert manifest_field(validate_manifest(manifest_payload()), 'symbolic', 4) is None

from fractions import Fraction
from pathlib import Path

import pytest

from src.config_loader import (
    get_batch_count,
    get_experiment_settings,
    get_log_settings,
    get_output_settings,
    get_scalar_settings,
    load_config,
)
from src.errors import ConfigurationError, SchemaError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv('HECKE_MODE', raising=False)
    monkeypatch.delenv('HECKE_CONFIG_DIR', raising=False)


def write_config(tmp_path, text):
    (tmp_path / 'workbench.yaml').write_text(text, encoding='utf-8')
    return tmp_path


def test_repository_config_loads():
    config = load_config()
    assert get_scalar_settings(config)['mode'] in ('symbolic', 'numeric')
    assert get_batch_count(config, 'tau_modules', 1) == 10


def test_missing_file_uses_defaults(tmp_path):
    config = load_config(tmp_path)
    scalars = get_scalar_settings(config)
    assert scalars == {'mode': 'symbolic', 't0': Fraction(4), 'crosscheck_t0': [4, 7]}
    assert get_output_settings(config) == {'directory': Path('output'), 'formats': ['json']}
    assert get_batch_count(config, 'overlap_per_regime', 3) == 3


def test_sections_merge_with_defaults(tmp_path):
    write_config(tmp_path, "scalars:\n  mode: numeric\n  t0: 5/2\nexperiments:\n  seed: 7\n")
    config = load_config(tmp_path)
    scalars = get_scalar_settings(config)
    assert scalars['mode'] == 'numeric'
    assert scalars['t0'] == Fraction(5, 2)
    assert scalars['crosscheck_t0'] == [4, 7]
    experiments = get_experiment_settings(config)
    assert experiments['seed'] == 7
    assert experiments['max_workers'] == 4
    assert experiments['max_span_words'] is None
    assert get_log_settings(config)['log_dir'] == Path('logs')


def test_env_overrides_mode(tmp_path, monkeypatch):
    monkeypatch.setenv('HECKE_MODE', 'numeric')
    assert load_config(tmp_path)['scalars']['mode'] == 'numeric'


def test_env_config_dir(tmp_path, monkeypatch):
    write_config(tmp_path, "output:\n  formats: [json, csv]\n")
    monkeypatch.setenv('HECKE_CONFIG_DIR', str(tmp_path))
    assert get_output_settings(load_config())['formats'] == ['json', 'csv']


def test_invalid_mode(tmp_path):
    write_config(tmp_path, "scalars:\n  mode: float\n")
    with pytest.raises(ConfigurationError):
        load_config(tmp_path)


def test_invalid_yaml(tmp_path):
    write_config(tmp_path, "scalars: [unclosed\n")
    with pytest.raises(SchemaError):
        load_config(tmp_path)


def test_max_span_words_is_parsed(tmp_path):
    write_config(tmp_path, "experiments:\n  max_span_words: '500'\n")
    assert get_experiment_settings(load_config(tmp_path))['max_span_words'] == 500


def test_max_span_words_must_be_positive(tmp_path):
    write_config(tmp_path, "experiments:\n  max_span_words: 0\n")
    with pytest.raises(ConfigurationError):
        get_experiment_settings(load_config(tmp_path))

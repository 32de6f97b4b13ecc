"""設定ファイル読み込みモジュール"""

import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict

import yaml

from .errors import ConfigurationError, SchemaError

logger = logging.getLogger(__name__)

CONFIG_FILE = 'workbench.yaml'

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'scalars': {
        'mode': 'symbolic',
        't0': 4,
        'crosscheck_t0': [4, 7],
    },
    'experiments': {
        'seed': 20240607,
        'max_span_words': None,
        'timeout_seconds': 600,
        'max_workers': 4,
        'batches': {},
    },
    'output': {
        'directory': 'output',
        'formats': ['json'],
    },
    'settings': {
        'log_level': 'INFO',
        'log_dir': 'logs',
    },
}


def load_yaml(file_path: Path) -> Dict[str, Any]:
    """YAMLファイルを読み込む"""
    with open(file_path, 'r', encoding='utf-8') as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise SchemaError(f"YAML を解釈できません: {file_path}: {e}") from e
    return data or {}


def default_config_dir() -> Path:
    env_dir = os.environ.get('HECKE_CONFIG_DIR')
    if env_dir:
        return Path(env_dir)
    return Path(__file__).parent.parent / 'config'


def load_config(config_dir: Path = None) -> Dict[str, Any]:
    """workbench.yaml を読み込み、既定値と環境変数で補う"""
    if config_dir is None:
        config_dir = default_config_dir()
    config_path = Path(config_dir) / CONFIG_FILE

    raw: Dict[str, Any] = {}
    if config_path.exists():
        raw = load_yaml(config_path)
    else:
        logger.warning(f"設定ファイルがありません（既定値を使用）: {config_path}")

    config: Dict[str, Any] = {}
    for section, defaults in DEFAULTS.items():
        merged = dict(defaults)
        merged.update(raw.get(section) or {})
        config[section] = merged

    # HECKE_MODE は scalars.mode を上書き
    env_mode = os.environ.get('HECKE_MODE')
    if env_mode:
        config['scalars']['mode'] = env_mode
    if config['scalars']['mode'] not in ('symbolic', 'numeric'):
        raise ConfigurationError(f"scalars.mode が不正です: {config['scalars']['mode']}")
    config['config_path'] = str(config_path)
    return config


def get_scalar_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    """スカラー設定を取得"""
    scalars = config['scalars']
    return {
        'mode': scalars.get('mode', 'symbolic'),
        't0': Fraction(str(scalars.get('t0', 4))),
        'crosscheck_t0': [Fraction(str(v)) for v in scalars.get('crosscheck_t0', [4, 7])],
    }


def get_experiment_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    """実験設定を取得"""
    experiments = config['experiments']
    max_words = experiments.get('max_span_words')
    if max_words is not None:
        max_words = int(max_words)
        if max_words <= 0:
            raise ConfigurationError(f"experiments.max_span_words は正の整数: {max_words}")
    return {
        'seed': int(experiments.get('seed', 20240607)),
        'max_span_words': max_words,
        'timeout_seconds': experiments.get('timeout_seconds', 600),
        'max_workers': int(experiments.get('max_workers', 4)),
        'batches': experiments.get('batches', {}) or {},
    }


def get_output_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    """出力設定を取得"""
    output = config['output']
    return {
        'directory': Path(output.get('directory', 'output')),
        'formats': list(output.get('formats', ['json'])),
    }


def get_log_settings(config: Dict[str, Any]) -> Dict[str, Any]:
    settings = config['settings']
    return {
        'log_level': settings.get('log_level', 'INFO'),
        'log_dir': Path(settings.get('log_dir', 'logs')),
    }


def get_batch_count(config: Dict[str, Any], name: str, default: int) -> int:
    batches: Dict[str, Any] = get_experiment_settings(config)['batches']
    return int(batches.get(name, default))

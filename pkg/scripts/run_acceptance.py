"""受け入れバッチ一括実行スクリプト

全スイートと、設定ファイルの件数でランダムに作ったマニフェストを実行する。

使い方:
  python scripts/run_acceptance.py
  python scripts/run_acceptance.py --mode numeric --seed 7 --output-dir output
"""

import argparse
import logging
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config_loader import (  # noqa: E402
    get_batch_count,
    get_experiment_settings,
    get_log_settings,
    get_output_settings,
    get_scalar_settings,
    load_config,
)
from src.linalg import MODES  # noqa: E402
from src.main import build_report, setup_logging  # noqa: E402
from src.manifest import random_separated_spec, run_manifest, validate_manifest  # noqa: E402
from src.output_writer import dump_json, format_summary, save_results  # noqa: E402
from src.verify_suites import run_suite, scalar_field  # noqa: E402

logger = logging.getLogger(__name__)

INDEPENDENCE_PARAMS = [[1, 0], [2, 0], [0, 0]]
OVERLAP_REGIMES = {'zero': [0, 0], 'mplus_only': [1, 0], 'nonzero': [2, 1]}


def acceptance_manifest(config, seed: int) -> dict:
    """設定の件数からマニフェストを組み立てる（random の π は seed とキーで決まる）"""
    entries = []
    for n, name in ((2, 'independence_n2'), (3, 'independence_n3')):
        for i in range(get_batch_count(config, name, 0)):
            entries.append({
                'key': f"{name}_{i:03d}",
                'pi': {'random': 'separated', 'n': n},
                'params': INDEPENDENCE_PARAMS,
                'checks': ['independence', 'prediction'],
            })
    for regime, pair in OVERLAP_REGIMES.items():
        for i in range(get_batch_count(config, 'overlap_per_regime', 0)):
            entries.append({
                'key': f"overlap_{regime}_{i:03d}",
                'pi': {'random': 'overlap', 'n': 2},
                'params': [pair],
                'checks': ['overlap'],
            })
    for i in range(get_batch_count(config, 'typeD_modules', 0)):
        entries.append({
            'key': f"typeD_{i:03d}",
            'pi': {'random': 'separated', 'n': 2},
            'params': [[0, 0]],
            'checks': ['typeD'],
        })
    return {'version': 1, 'seed': seed, 'entries': entries}


def suite_entries(config, seed: int, fld, sample_t0s, max_words=None) -> list:
    rng = random.Random(seed)
    tau_modules = [
        (random_separated_spec(rng, 2, [(1, 0)]), 1, 0)
        for _ in range(get_batch_count(config, 'tau_modules', 0))
    ]
    runs = [
        ('relations', {'samples': get_batch_count(config, 'associativity_triples', 5), 'seed': seed, 'fld': fld}),
        ('intertwiners', {'samples': get_batch_count(config, 'intertwiner_functions', 5), 'seed': seed,
                          'fld': fld, **({'tau_modules': tau_modules} if tau_modules else {})}),
        ('rank1', {'family': 'so3', 'lam': 2, 'lam_star': 1, 'fld': fld, 'sample_t0s': sample_t0s,
                   'max_words': max_words}),
        ('rank1', {'family': 'sl2', 'lam': 1, 'fld': fld, 'sample_t0s': sample_t0s,
                   'max_words': max_words}),
        ('finite', {}),
        ('clifford', {'fld': fld, 'sample_t0s': sample_t0s, 'max_words': max_words}),
    ]
    entries = []
    for name, options in runs:
        result = run_suite(name, **options)
        key = f"{name}.{options['family']}" if 'family' in options else name
        entries.append({'key': key, 'command': 'verify', 'suite': name,
                        'checks': result['checks'], 'passed': result['passed']})
    return entries


def main():
    parser = argparse.ArgumentParser(description='受け入れバッチを一括実行')
    parser.add_argument('--mode', choices=MODES, default=None, help='スカラーモード')
    parser.add_argument('--seed', type=int, default=None, help='乱数シード（既定: 設定ファイル）')
    parser.add_argument('--config-dir', default=None, help='workbench.yaml のあるディレクトリ')
    parser.add_argument('--output-dir', default=None, help='レポートの保存先（既定: 設定ファイル）')
    parser.add_argument('--skip-suites', action='store_true', help='スイートを省きマニフェストだけ実行')
    args = parser.parse_args()

    config = load_config(Path(args.config_dir) if args.config_dir else None)
    log_settings = get_log_settings(config)
    setup_logging(log_settings['log_dir'], log_settings['log_level'])

    scalars = get_scalar_settings(config)
    experiments = get_experiment_settings(config)
    mode = args.mode or scalars['mode']
    seed = args.seed if args.seed is not None else experiments['seed']
    fld = scalar_field(mode, scalars['t0'])
    sample_t0s = tuple(scalars['crosscheck_t0'])

    entries = [] if args.skip_suites else suite_entries(
        config, seed, fld, sample_t0s, experiments['max_span_words'])

    manifest = validate_manifest(acceptance_manifest(config, seed))
    logger.info(f"マニフェストのエントリ数: {len(manifest.entries)}")
    entries.extend(run_manifest(
        manifest,
        fld=fld,
        sample_t0s=sample_t0s,
        max_workers=experiments['max_workers'],
        timeout_seconds=experiments['timeout_seconds'],
        max_words=experiments['max_span_words'],
    ))

    scalar_info = {'mode': mode}
    if fld is not None:
        scalar_info['t0'] = str(scalars['t0'])
    report = build_report('acceptance', scalar_info, entries)
    logger.info('\n' + format_summary(report))

    output = get_output_settings(config)
    output_dir = Path(args.output_dir) if args.output_dir else output['directory']
    for f in save_results(report, output_dir, output['formats']):
        logger.info(f"結果保存: {f}")

    print(dump_json(report))
    sys.exit(0 if report['passed'] else 1)


if __name__ == '__main__':
    main()

"""アフィン Hecke 代数ワークベンチ メインモジュール

サブコマンド: verify / induce / rank1 / compare / reduce / overlap / run
標準出力には JSON レポートのみを書き、ログは標準エラーとログファイルに出す。
"""

import argparse
import logging
import sys
from datetime import datetime, timedelta, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .config_loader import (
    get_experiment_settings,
    get_log_settings,
    get_output_settings,
    get_scalar_settings,
    load_config,
)
from .errors import ConfigurationError, SchemaError, WorkbenchError
from .linalg import MODES, NUMERIC, ScalarField
from .manifest import (
    build_pi,
    check_ok,
    failed_entry,
    load_manifest,
    manifest_field,
    run_checks,
    run_manifest,
)
from .modules_fd import (
    induce_from_A,
    module_spec_weight,
    parse_module_spec,
    weight_report,
)
from .output_writer import dump_json, format_summary, save_results
from .reducibility import (
    burnside_irreducible,
    composition_series,
    numeric_crosscheck,
    series_summary,
    verify_certificate,
)
from .reduction_spec import (
    SemisimplePoint,
    centralizer_datum,
    polar_decompose,
    specialization_lookup,
    specialization_parameters,
    specialized_overlap_experiment,
)
from .root_data import gl_subalgebra, make_descriptor
from .scalars import to_rational
from .verify_suites import SUITES, rank_one_table, run_suite, scalar_field

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

REPORT_CHOICES = ('weights', 'verdict', 'series', 'crosscheck')

# 値が '-' で始まりうるフラグ（'--signs -,+' を '--signs=-,+' にまとめる）
VALUE_FLAGS = ('--signs', '--exponents', '--pi', '--params', '--mplus', '--mminus',
               '--lambda', '--lambdastar', '--m1', '--m2', '--t0')


# ロギング設定
def setup_logging(log_dir: Path = None, level: str = 'INFO'):
    """ロギングを設定（標準出力は JSON 専用なので StreamHandler は stderr）"""
    if log_dir is None:
        log_dir = Path(__file__).parent.parent / 'logs'
    elif not log_dir.is_absolute():
        log_dir = Path(__file__).parent.parent / log_dir

    log_dir.mkdir(parents=True, exist_ok=True)

    JST = timezone(timedelta(hours=9))
    timestamp = datetime.now(JST).strftime('%Y%m%d_%H%M%S')
    log_file = log_dir / f'hecke_workbench_{timestamp}.log'

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file, encoding='utf-8'),
            logging.StreamHandler(sys.stderr)
        ]
    )


# =============================================================
# 引数の解釈
# =============================================================

def _join_value_flags(argv: Sequence[str]) -> List[str]:
    out: List[str] = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith('-') \
                and not argv[i + 1].startswith('--'):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def parse_rational_list(text: str) -> List[Fraction]:
    try:
        return [to_rational(tok) for tok in text.split(',') if tok.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"有理数のリストを解釈できません: {text!r}") from e


def parse_signs(text: str) -> List[int]:
    signs = []
    for tok in text.split(','):
        tok = tok.strip()
        if tok in ('+', '+1', '1'):
            signs.append(1)
        elif tok in ('-', '-1'):
            signs.append(-1)
        else:
            raise SchemaError(f"符号は + か -: {tok!r}")
    return signs


def parse_params(text: str) -> List[Tuple[Fraction, Fraction]]:
    """'1,0;2,0;0,0' → [(1, 0), (2, 0), (0, 0)]"""
    pairs = []
    for chunk in text.split(';'):
        values = parse_rational_list(chunk)
        if len(values) != 2:
            raise SchemaError(f"パラメータ組は m₊,m₋ の二つ: {chunk!r}")
        pairs.append((values[0], values[1]))
    return pairs


def _rational(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"有理数を解釈できません: {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--mode', choices=MODES, default=None, help='スカラーモード（既定: 設定ファイル / HECKE_MODE）')
    common.add_argument('--t0', default=None, help='numeric モードの t の値（既定: 4）')
    common.add_argument('--output-dir', default=None, help='レポートを保存するディレクトリ')
    common.add_argument('--format', choices=['json', 'csv', 'both'], default=None,
                        help='保存形式（--output-dir 指定時、既定: 設定ファイル）')
    common.add_argument('--config-dir', default=None, help='workbench.yaml のあるディレクトリ')
    common.add_argument('--verbose', action='store_true', help='DEBUG ログを出す')

    parser = argparse.ArgumentParser(
        description='古典型アフィン Hecke 代数ワークベンチ（厳密計算）',
        parents=[common],
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify', parents=[common], help='恒等式スイートを実行')
    p.add_argument('--suite', choices=SUITES, required=True)
    p.add_argument('--family', default='so3', help='rank1: so3 | sl2')
    p.add_argument('--lambda', dest='lam', default='1')
    p.add_argument('--lambdastar', dest='lam_star', default=None)
    p.add_argument('--n', type=int, default=None, help='finite / clifford の階数')
    p.add_argument('--samples', type=int, default=5, help='ランダム検査の件数')
    p.add_argument('--seed', type=int, default=None)

    p = sub.add_parser('induce', parents=[common], help='I(π) を構成して報告')
    p.add_argument('--family', default='B', help='B | C | D | O')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--mplus', default='0')
    p.add_argument('--mminus', default='0')
    p.add_argument('--lambda', dest='lam', default=None, help='C 型の λ')
    p.add_argument('--lambda-a', dest='lambda_a', default='1')
    p.add_argument('--pi', required=True, help="'ps:λ1,…' または 'char:T=q;theta=…'")
    p.add_argument('--report', default='weights,verdict,series',
                   help=f"カンマ区切り: {', '.join(REPORT_CHOICES)}")

    p = sub.add_parser('rank1', parents=[common], help='階数 1 の可約点の表')
    p.add_argument('--family', default='so3', choices=['so3', 'sl2'])
    p.add_argument('--lambda', dest='lam', default='1')
    p.add_argument('--lambdastar', dest='lam_star', default=None)

    p = sub.add_parser('compare', parents=[common], help='パラメータ非依存性の実験')
    p.add_argument('--pi', required=True)
    p.add_argument('--params', default='1,0;2,0;0,0', help="'m₊,m₋;m₊,m₋;…'")
    p.add_argument('--lambda-a', dest='lambda_a', default='1')

    p = sub.add_parser('reduce', parents=[common], help='中心化群のデータ / 特殊化辞書')
    p.add_argument('--signs', default=None)
    p.add_argument('--exponents', default=None)
    p.add_argument('--m1', default='0')
    p.add_argument('--m2', default='0')
    p.add_argument('--root-family', dest='root_family', default='B', choices=['A', 'B'])
    p.add_argument('--specialization', default=None, help='特殊化の名前')
    p.add_argument('--m', default='1')

    p = sub.add_parser('overlap', parents=[common], help='重なり ⇒ 可約 の実験')
    p.add_argument('--pi', required=True)
    p.add_argument('--mplus', default='1')
    p.add_argument('--mminus', default='0')
    p.add_argument('--specialization', default=None)
    p.add_argument('--m', default='1')
    p.add_argument('--lambda-a', dest='lambda_a', default='1')

    p = sub.add_parser('run', parents=[common], help='マニフェストを実行')
    p.add_argument('--manifest', required=True)
    return parser


# =============================================================
# サブコマンド
# =============================================================

class _Context:
    """設定と CLI フラグを合わせた実行時の値"""

    def __init__(self, args: argparse.Namespace, config: Dict[str, Any]):
        scalars = get_scalar_settings(config)
        self.mode = args.mode or scalars['mode']
        self.t0 = _rational(args.t0) if args.t0 is not None else scalars['t0']
        if self.mode == NUMERIC and self.t0 == 0:
            raise ConfigurationError("numeric モードでは t0 ≠ 0 が必要です")
        self.sample_t0s = tuple(scalars['crosscheck_t0'])
        self.experiments = get_experiment_settings(config)
        self.max_words = self.experiments['max_span_words']

    @property
    def field(self) -> Optional[ScalarField]:
        return scalar_field(self.mode, self.t0)

    def scalars(self) -> Dict[str, Any]:
        payload = {'mode': self.mode}
        if self.mode == NUMERIC:
            payload['t0'] = str(self.t0)
        return payload


def _entry(key: str, command: str, checks: List[Dict[str, Any]], **extra) -> Dict[str, Any]:
    entry = {'key': key, 'command': command, 'checks': checks,
             'passed': all(check_ok(c) for c in checks)}
    entry.update(extra)
    return entry


def cmd_verify(args, ctx: _Context) -> List[Dict[str, Any]]:
    options: Dict[str, Any] = {}
    seed = args.seed if args.seed is not None else ctx.experiments['seed']
    if args.suite in ('relations', 'intertwiners'):
        options.update(samples=args.samples, seed=seed, fld=ctx.field)
    elif args.suite == 'rank1':
        options.update(family=args.family, lam=_rational(args.lam), lam_star=_rational(args.lam_star),
                       fld=ctx.field, sample_t0s=ctx.sample_t0s, max_words=ctx.max_words)
    elif args.suite == 'finite':
        if args.n is not None:
            options['n_values'] = (args.n,)
    elif args.suite == 'clifford':
        options.update(fld=ctx.field, sample_t0s=ctx.sample_t0s, max_words=ctx.max_words)
        if args.n is not None:
            options['n_values'] = (args.n,)
    result = run_suite(args.suite, **options)
    extra = {k: v for k, v in result.items() if k not in ('suite', 'checks', 'passed')}
    return [_entry(args.suite, 'verify', result['checks'], suite=args.suite, **extra)]


def _induce_descriptor(args):
    nu = module_spec_weight(args.pi)
    if nu.rank != args.n:
        raise SchemaError(f"π のウェイトの階数 {nu.rank} が --n {args.n} と一致しません")
    lambda_a = _rational(args.lambda_a)
    family = args.family.upper()
    if family == 'B':
        return make_descriptor('B', args.n, lambda_a=lambda_a, m_plus=_rational(args.mplus),
                               m_minus=_rational(args.mminus), extra_exponents=nu.exponents)
    if family == 'C':
        lam = _rational(args.lam) if args.lam is not None else lambda_a
        return make_descriptor('C', args.n, lambda_a=lambda_a, lam=lam, extra_exponents=nu.exponents)
    if family in ('D', 'O'):
        return make_descriptor(family, args.n, lambda_a=lambda_a, extra_exponents=nu.exponents)
    raise SchemaError(f"induce の族は B / C / D / O: {args.family}")


def cmd_induce(args, ctx: _Context) -> List[Dict[str, Any]]:
    reports = [r.strip() for r in args.report.split(',') if r.strip()]
    unknown = [r for r in reports if r not in REPORT_CHOICES]
    if unknown:
        raise SchemaError(f"未知の --report: {unknown}（候補: {', '.join(REPORT_CHOICES)}）")
    desc = _induce_descriptor(args)
    pi = parse_module_spec(args.pi, gl_subalgebra(desc), ctx.field)
    module = induce_from_A(desc, pi)
    checks: List[Dict[str, Any]] = []
    verdict = None
    if 'verdict' in reports or 'crosscheck' in reports:
        verdict = burnside_irreducible(module, ctx.sample_t0s, ctx.max_words)
    if 'weights' in reports:
        report = weight_report(module)
        checks.append({'check': 'weights', 'provenance': 'induce.weights', 'weights': report.to_json(),
                       'multiplicity_one': report.multiplicity_one(), 'passed': True})
    if 'verdict' in reports:
        ok = verify_certificate(module, verdict)
        checks.append({'check': 'verdict', 'provenance': 'induce.verdict', 'verdict': verdict.to_json(),
                       'certificate_verified': ok, 'passed': ok})
    if 'series' in reports:
        try:
            series = composition_series(module)
            checks.append({'check': 'series', 'provenance': 'induce.series', 'series': series_summary(series),
                           'factors': [f.to_json() for f in series], 'passed': True})
        except WorkbenchError as e:
            checks.append({'check': 'series', 'provenance': 'induce.series', 'series': None,
                           'note': str(e), 'passed': None, 'skipped': True})
    if 'crosscheck' in reports and module.field.is_symbolic:
        rows = numeric_crosscheck(module, ctx.sample_t0s, verdict, ctx.max_words)
        checks.append({'check': 'crosscheck', 'provenance': 'induce.crosscheck', 'rows': rows,
                       'passed': all(r['agrees'] for r in rows)})
    return [_entry('induce', 'induce', checks, algebra=desc.to_json(), pi=args.pi, dim=module.dim)]


def cmd_rank1(args, ctx: _Context) -> List[Dict[str, Any]]:
    rows = rank_one_table(args.family, _rational(args.lam), _rational(args.lam_star),
                          fld=ctx.field, sample_t0s=ctx.sample_t0s, max_words=ctx.max_words)
    provenance = f"rank1.{args.family}.points"
    checks = [dict(row, check=f"I({row['nu']})", provenance=provenance) for row in rows]
    return [_entry('rank1', 'rank1', checks, family=args.family)]


def cmd_compare(args, ctx: _Context) -> List[Dict[str, Any]]:
    pairs = parse_params(args.params)
    pi = build_pi(args.pi, pairs, _rational(args.lambda_a), ctx.field)
    checks = run_checks(pi, args.pi, pairs, ['independence', 'prediction'], ctx.sample_t0s, ctx.max_words)
    return [_entry('compare', 'compare', checks, pi=args.pi,
                   params=[[str(a), str(b)] for a, b in pairs])]


def cmd_reduce(args, ctx: _Context) -> List[Dict[str, Any]]:
    entries = []
    if args.specialization is not None:
        lookup = specialization_lookup(args.specialization, m=_rational(args.m))
        entries.append(_entry('specialization', 'reduce', [dict(
            lookup, check='specialization', provenance='reduce.specialization', passed=True)]))
    if args.signs is not None or args.exponents is not None:
        if args.signs is None or args.exponents is None:
            raise SchemaError("--signs と --exponents は両方必要です")
        point = SemisimplePoint.create(parse_signs(args.signs), parse_rational_list(args.exponents),
                                       _rational(args.m1), _rational(args.m2))
        s_e, s_h = polar_decompose(point)
        datum = centralizer_datum(point, family=args.root_family)
        checks = [
            {'check': 'centralizer', 'provenance': 'reduce.centralizer', 'datum': datum.to_json(),
             'polar': {'elliptic': s_e.to_json(), 'hyperbolic': s_h.to_json()}, 'passed': True},
            {'check': 'closed under reflections', 'provenance': 'reduce.closure',
             'passed': datum.closed_under_reflections()},
            {'check': 'λ_s invariant', 'provenance': 'reduce.lambda',
             'passed': datum.lambda_invariant()},
        ]
        entries.append(_entry('centralizer', 'reduce', checks))
    if not entries:
        raise SchemaError("reduce には --signs/--exponents か --specialization が必要です")
    return entries


def cmd_overlap(args, ctx: _Context) -> List[Dict[str, Any]]:
    if args.specialization is not None:
        params = specialization_parameters(args.specialization, m=_rational(args.m))
        pair = (params['m_plus'], params['m_minus'])
        pi = build_pi(args.pi, [pair], params['lambda_a'], ctx.field)
        report = specialized_overlap_experiment(args.specialization, pi, ctx.sample_t0s, ctx.max_words,
                                                m=_rational(args.m))
    else:
        pair = (_rational(args.mplus), _rational(args.mminus))
        pi = build_pi(args.pi, [pair], _rational(args.lambda_a), ctx.field)
        report = run_checks(pi, args.pi, [pair], ['overlap'], ctx.sample_t0s, ctx.max_words)[0]
    record = dict(report, check='overlap')
    return [_entry('overlap', 'overlap', [record], pi=args.pi)]


def cmd_run(args, ctx: _Context) -> List[Dict[str, Any]]:
    manifest = load_manifest(Path(args.manifest))
    fld = manifest_field(manifest, ctx.mode, ctx.t0)
    if manifest.mode is not None:
        ctx.mode = manifest.mode
    if manifest.t0 is not None:
        ctx.t0 = manifest.t0
    return run_manifest(
        manifest,
        fld=fld,
        sample_t0s=ctx.sample_t0s,
        max_workers=ctx.experiments['max_workers'],
        timeout_seconds=ctx.experiments['timeout_seconds'],
        max_words=ctx.max_words,
    )


COMMANDS = {
    'verify': cmd_verify,
    'induce': cmd_induce,
    'rank1': cmd_rank1,
    'compare': cmd_compare,
    'reduce': cmd_reduce,
    'overlap': cmd_overlap,
    'run': cmd_run,
}


# =============================================================
# レポート
# =============================================================

def build_report(command: str, scalars: Dict[str, Any], entries: List[Dict[str, Any]]) -> Dict[str, Any]:
    entries = sorted(entries, key=lambda e: e['key'])
    provenance = sorted({c['provenance'] for e in entries for c in e.get('checks', []) if 'provenance' in c})
    passed = sum(1 for e in entries if e['passed'])
    skipped = sum(1 for e in entries for c in e.get('checks', []) if c.get('skipped'))
    return {
        'command': command,
        'scalars': scalars,
        'provenance': provenance,
        'entries': entries,
        'summary': {'total': len(entries), 'passed': passed, 'failed': len(entries) - passed,
                    'skipped': skipped},
        'passed': passed == len(entries),
    }


def run(argv: Sequence[str] = None) -> Tuple[int, Dict[str, Any]]:
    """
    コマンドラインを実行

    Args:
        argv: 引数（None なら sys.argv[1:]）

    Returns:
        (終了コード, レポート)
    """
    parser = build_parser()
    argv = _join_value_flags(list(sys.argv[1:] if argv is None else argv))
    args = parser.parse_args(argv)

    try:
        config = load_config(Path(args.config_dir) if args.config_dir else None)
    except (SchemaError, ConfigurationError) as e:
        return EXIT_USAGE, {'command': args.command, 'error': str(e), 'kind': type(e).__name__, 'passed': False}
    log_settings = get_log_settings(config)
    setup_logging(log_settings['log_dir'], 'DEBUG' if args.verbose else log_settings['log_level'])

    ctx = None
    try:
        ctx = _Context(args, config)
        entries = COMMANDS[args.command](args, ctx)
    except (SchemaError, ConfigurationError) as e:
        logger.error(f"入力エラー: {e}")
        return EXIT_USAGE, {'command': args.command, 'error': str(e), 'kind': type(e).__name__, 'passed': False}
    except WorkbenchError as e:
        logger.error(f"{args.command} が失敗: {e}")
        entries = [failed_entry(args.command, args.command, e)]

    if ctx is not None:
        scalars = ctx.scalars()
    else:
        scalars = {'mode': args.mode or get_scalar_settings(config)['mode']}
    report = build_report(args.command, scalars, entries)
    logger.info('\n' + format_summary(report))

    if args.output_dir:
        output = get_output_settings(config)
        if args.format == 'both':
            formats = ['json', 'csv']
        elif args.format:
            formats = [args.format]
        else:
            formats = output['formats']
        for f in save_results(report, Path(args.output_dir), formats):
            logger.info(f"結果保存: {f}")

    return (EXIT_OK if report['passed'] else EXIT_FAILED), report


def main():
    """メイン関数（エントリーポイント）"""
    code, report = run()
    print(dump_json(report))
    sys.exit(code)


if __name__ == '__main__':
    main()

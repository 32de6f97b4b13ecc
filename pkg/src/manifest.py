"""実験マニフェスト（run --manifest）

マニフェストの形（JSON または YAML）:

    version: 1
    mode: symbolic            # 省略時は設定・CLI の値
    t0: 4
    seed: 20240607
    algebra: {n: 2, lambda_a: 1}
    entries:
      - key: example
        pi: "ps:4/5,1/5"      # または {file: module.json} / {random: separated, n: 2}
        params: [[1, 0], [2, 0], [0, 0]]
        checks: [verdict, series, independence]

エントリはスレッドプールで並行に実行し、結果はキー順に並べる。
"""

import asyncio
import json
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import yaml

from .errors import MisuseError, SchemaError, UnsupportedRegimeError
from .linalg import MODES, NUMERIC, ScalarField
from .modules_fd import (
    FDModule,
    induce_from_A,
    module_from_json,
    module_spec_weight,
    parse_module_spec,
)
from .reducibility import (
    DEFAULT_SAMPLE_T0S,
    burnside_irreducible,
    composition_series,
    induction_descriptor,
    is_strongly_separated,
    module_weights,
    numeric_crosscheck,
    overlap_experiment,
    overlap_regime,
    parameter_independence_experiment,
    separated_ps_prediction,
    series_summary,
    verify_certificate,
)
from .reduction_spec import typeD_experiment
from .root_data import format_coordinate, make_descriptor
from .scalars import Number, common_root_index, to_rational

logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1

CHECKS = ('verdict', 'series', 'crosscheck', 'independence', 'overlap', 'typeD', 'prediction')

ParamPair = Tuple[Fraction, Fraction]


# =============================================================
# スキーマ
# =============================================================

@dataclass(frozen=True)
class ManifestEntry:
    key: str
    pi: Any
    params: Tuple[ParamPair, ...]
    checks: Tuple[str, ...]


@dataclass(frozen=True)
class ExperimentManifest:
    version: int
    seed: int
    entries: Tuple[ManifestEntry, ...]
    mode: Optional[str] = None
    t0: Optional[Fraction] = None
    lambda_a: Fraction = Fraction(1)
    n: Optional[int] = None
    base_dir: Path = field(default=Path('.'))

    def to_json(self) -> Dict[str, Any]:
        return {
            'version': self.version,
            'seed': self.seed,
            'mode': self.mode,
            't0': None if self.t0 is None else str(self.t0),
            'lambda_a': str(self.lambda_a),
            'entries': [e.key for e in self.entries],
        }


def _parse_pairs(raw: Any, where: str) -> Tuple[ParamPair, ...]:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{where}: params は [[m₊, m₋], …] の空でないリスト")
    pairs = []
    for item in raw:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise SchemaError(f"{where}: パラメータ組の形式が不正です: {item!r}")
        pairs.append((to_rational(item[0]), to_rational(item[1])))
    return tuple(pairs)


def _check_pi(raw: Any, where: str) -> Any:
    if isinstance(raw, str):
        module_spec_weight(raw)
        return raw
    if isinstance(raw, dict) and 'file' in raw:
        return {'file': str(raw['file'])}
    if isinstance(raw, dict) and raw.get('random') in ('separated', 'overlap'):
        if not isinstance(raw.get('n'), int) or raw['n'] < 1:
            raise SchemaError(f"{where}: random の π には正の整数 n が必要です")
        return {'random': raw['random'], 'n': raw['n']}
    raise SchemaError(f"{where}: π は 'ps:…' / 'char:…' / {{file: …}} / {{random: …, n: …}}: {raw!r}")


def validate_manifest(payload: Any, base_dir: Path = Path('.')) -> ExperimentManifest:
    """マニフェストを検証して ExperimentManifest にする（不正なら SchemaError）"""
    if not isinstance(payload, dict):
        raise SchemaError("マニフェストはオブジェクトである必要があります")
    if payload.get('version') != MANIFEST_VERSION:
        raise SchemaError(f"未対応のマニフェストのバージョン: {payload.get('version')!r}")
    mode = payload.get('mode')
    if mode is not None and mode not in MODES:
        raise SchemaError(f"mode は {MODES} のいずれか: {mode!r}")
    seed = payload.get('seed', 0)
    if not isinstance(seed, int):
        raise SchemaError(f"seed は整数: {seed!r}")
    algebra = payload.get('algebra') or {}
    if not isinstance(algebra, dict):
        raise SchemaError("algebra はオブジェクト")

    raw_entries = payload.get('entries', payload.get('experiments'))
    if not isinstance(raw_entries, list) or not raw_entries:
        raise SchemaError("entries は空でないリスト")
    entries, keys = [], set()
    for idx, raw in enumerate(raw_entries):
        if not isinstance(raw, dict):
            raise SchemaError(f"entries[{idx}] はオブジェクト")
        key = str(raw.get('key', f"entry{idx:03d}"))
        if key in keys:
            raise SchemaError(f"キーが重複しています: {key}")
        keys.add(key)
        checks = raw.get('checks')
        if not isinstance(checks, list) or not checks:
            raise SchemaError(f"{key}: checks は空でないリスト")
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise SchemaError(f"{key}: 未知のチェック {unknown}（候補: {', '.join(CHECKS)}）")
        if 'pi' not in raw:
            raise SchemaError(f"{key}: pi がありません")
        entries.append(ManifestEntry(key, _check_pi(raw['pi'], key),
                                     _parse_pairs(raw.get('params'), key), tuple(checks)))

    t0 = payload.get('t0')
    return ExperimentManifest(
        version=MANIFEST_VERSION,
        seed=seed,
        entries=tuple(entries),
        mode=mode,
        t0=None if t0 is None else to_rational(t0),
        lambda_a=to_rational(algebra.get('lambda_a', 1)),
        n=algebra.get('n'),
        base_dir=base_dir,
    )


def load_manifest(path: Path) -> ExperimentManifest:
    """JSON / YAML のマニフェストを読み込む"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            if path.suffix == '.json':
                payload = json.load(f)
            else:
                payload = yaml.safe_load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise SchemaError(f"マニフェストを解釈できません: {path}: {e}") from e
    except OSError as e:
        raise SchemaError(f"マニフェストを読めません: {path}: {e}") from e
    return validate_manifest(payload, path.parent)


# =============================================================
# π の構成
# =============================================================

def _simple_ps(coords: Sequence[Tuple[int, Fraction]]) -> bool:
    """ℋ_A の主系列が既約で重複度 1 か（同符号の座標で比が q^{±1} にならない）"""
    for i, (s1, e1) in enumerate(coords):
        for s2, e2 in coords[i + 1:]:
            if (s1, e1) == (s2, e2):
                return False
            if s1 == s2 and abs(e1 - e2) == 1:
                return False
    return True


def _format_ps(coords: Sequence[Tuple[int, Fraction]]) -> str:
    return 'ps:' + ','.join(format_coordinate(s, e) for s, e in coords)


def random_separated_spec(rng: random.Random, n: int, params: Sequence[ParamPair],
                          denominator: int = 7, attempts: int = 500) -> str:
    """全てのパラメータ組について強く分離した単純な ps: を一つ選ぶ"""
    for _ in range(attempts):
        coords = [(rng.choice((1, 1, -1)), Fraction(rng.randint(-2 * denominator, 2 * denominator), denominator))
                  for _ in range(n)]
        if not _simple_ps(coords):
            continue
        weight_ok = all(
            e != 0 and all((s, e) not in bad for bad in (_bad_coordinates(mp, mm) for mp, mm in params))
            for s, e in coords
        )
        if weight_ok:
            return _format_ps(coords)
    raise MisuseError(f"強く分離した π が見つかりません: n={n} params={params}")


def _bad_coordinates(m_plus: Fraction, m_minus: Fraction) -> List[Tuple[int, Fraction]]:
    return [(1, m_plus), (1, -m_plus), (-1, m_minus), (-1, -m_minus), (1, Fraction(0)), (-1, Fraction(0))]


def random_overlap_spec(rng: random.Random, n: int, m_plus: Number, m_minus: Number,
                        denominator: int = 7, attempts: int = 500) -> str:
    """重なりの集合に当たる座標を含む単純な ps: を一つ選ぶ"""
    _, bad = overlap_regime(m_plus, m_minus)
    for _ in range(attempts):
        hit = rng.choice(bad)
        coords = [(1, Fraction(rng.randint(-2 * denominator, 2 * denominator), denominator))
                  for _ in range(n - 1)]
        coords.insert(rng.randrange(n), hit)
        if _simple_ps(coords):
            return _format_ps(coords)
    raise MisuseError(f"重なりを持つ π が見つかりません: n={n} (m₊, m₋)=({m_plus}, {m_minus})")


def common_index(weight_exponents: Sequence[Fraction], params: Sequence[ParamPair],
                 lambda_a: Fraction = Fraction(1)) -> int:
    """π のウェイトと全パラメータ組を表せるルートインデックス"""
    n_idx = common_root_index(list(weight_exponents) + [lambda_a])
    for mp, mm in params:
        n_idx = math.lcm(n_idx, common_root_index([mp, mm, mp + mm, mp - mm]))
    return n_idx


def build_pi(spec: str, params: Sequence[ParamPair] = (), lambda_a: Number = 1,
             fld: ScalarField = None) -> FDModule:
    """略記から π を作る。N は全パラメータ組で誘導できるように最初から揃える"""
    nu = module_spec_weight(spec)
    n_idx = common_index(nu.exponents, params, Fraction(lambda_a))
    desc_a = make_descriptor('A', nu.rank, lambda_a=lambda_a, root_index=n_idx)
    return parse_module_spec(spec, desc_a, fld)


def resolve_pi(entry: ManifestEntry, manifest: ExperimentManifest,
               fld: ScalarField = None) -> Tuple[str, FDModule]:
    raw = entry.pi
    if isinstance(raw, dict) and 'file' in raw:
        path = Path(raw['file'])
        if not path.is_absolute():
            path = manifest.base_dir / path
        try:
            with open(path, 'r', encoding='utf-8') as f:
                payload = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise SchemaError(f"{entry.key}: 加群ファイルを読めません: {path}: {e}") from e
        return str(path), module_from_json(payload, fld)
    if isinstance(raw, dict):
        rng = random.Random(f"{manifest.seed}:{entry.key}")
        if raw['random'] == 'separated':
            spec = random_separated_spec(rng, raw['n'], entry.params)
        else:
            spec = random_overlap_spec(rng, raw['n'], *entry.params[0])
    else:
        spec = raw
    return spec, build_pi(spec, entry.params, manifest.lambda_a, fld)


# =============================================================
# チェック
# =============================================================

class _EntryRun:
    """一つのエントリの実行状態（誘導加群と判定はパラメータ組ごとに一度だけ作る）"""

    def __init__(self, pi: FDModule, spec: str, params: Sequence[ParamPair],
                 sample_t0s: Sequence[Number], max_words: Optional[int] = None):
        self.pi = pi
        self.spec = spec
        self.params = list(params)
        self.sample_t0s = tuple(sample_t0s)
        self.max_words = max_words
        self._induced: Dict[ParamPair, Any] = {}

    def induced(self, pair: ParamPair):
        cached = self._induced.get(pair)
        if cached is None:
            desc, pi2 = induction_descriptor(self.pi, *pair)
            module = induce_from_A(desc, pi2)
            verdict = burnside_irreducible(module, self.sample_t0s, self.max_words)
            cached = (desc, module, verdict)
            self._induced[pair] = cached
        return cached


def _pair_text(pair: ParamPair) -> List[str]:
    return [str(pair[0]), str(pair[1])]


def check_ok(record: Dict[str, Any]) -> bool:
    """スキップしたチェック（passed=None, skipped=True）は失敗に数えない"""
    return bool(record.get('skipped')) or bool(record['passed'])


def _check_verdict(run: _EntryRun) -> List[Dict[str, Any]]:
    records = []
    for pair in run.params:
        desc, module, verdict = run.induced(pair)
        ok = verify_certificate(module, verdict)
        records.append({
            'check': f"verdict {_pair_text(pair)}",
            'provenance': 'induce.verdict',
            'algebra': desc.to_json(),
            'dim': module.dim,
            'verdict': verdict.to_json(),
            'certificate_verified': ok,
            'passed': ok,
        })
    return records


def _check_series(run: _EntryRun) -> List[Dict[str, Any]]:
    records = []
    for pair in run.params:
        _, module, _ = run.induced(pair)
        try:
            series = composition_series(module)
            summary = series_summary(series)
            factors = [f.to_json() for f in series]
        except UnsupportedRegimeError as e:
            summary, factors = None, str(e)
        record = {
            'check': f"series {_pair_text(pair)}",
            'provenance': 'induce.series',
            'series': summary,
            'factors': factors,
            'passed': True,
        }
        if summary is None:
            record.update({'passed': None, 'skipped': True})
        records.append(record)
    return records


def _check_crosscheck(run: _EntryRun) -> List[Dict[str, Any]]:
    records = []
    for pair in run.params:
        _, module, verdict = run.induced(pair)
        if not module.field.is_symbolic:
            records.append({'check': f"crosscheck {_pair_text(pair)}", 'provenance': 'induce.crosscheck',
                            'note': 'numeric mode', 'passed': None, 'skipped': True})
            continue
        rows = numeric_crosscheck(module, run.sample_t0s, verdict, run.max_words)
        records.append({
            'check': f"crosscheck {_pair_text(pair)}",
            'provenance': 'induce.crosscheck',
            'rows': rows,
            'passed': all(r['agrees'] for r in rows),
        })
    return records


def _experiment_record(name: str, report: Dict[str, Any]) -> Dict[str, Any]:
    record = {'check': name}
    record.update(report)
    return record


def _check_independence(run: _EntryRun) -> List[Dict[str, Any]]:
    report = parameter_independence_experiment(run.pi, run.params, run.sample_t0s,
                                               max_words=run.max_words)
    return [_experiment_record('independence', report)]


def _check_overlap(run: _EntryRun) -> List[Dict[str, Any]]:
    return [_experiment_record(f"overlap {_pair_text(pair)}",
                               overlap_experiment(run.pi, *pair, run.sample_t0s, run.max_words))
            for pair in run.params]


def _check_typeD(run: _EntryRun) -> List[Dict[str, Any]]:
    return [_experiment_record('typeD', typeD_experiment(run.pi, run.sample_t0s, run.max_words))]


def _check_prediction(run: _EntryRun) -> List[Dict[str, Any]]:
    weights = module_weights(run.pi)
    nu = weights[0]
    prediction = separated_ps_prediction(nu.exponents, nu.signs)
    record = {'check': 'prediction', 'provenance': 'independence.prediction', 'prediction': prediction}
    if not prediction['applicable'] or run.pi.dim != math.factorial(nu.rank):
        record.update({'note': 'not a real minimal principal series', 'passed': None, 'skipped': True})
        return [record]
    statuses = {}
    for pair in run.params:
        if not all(is_strongly_separated(w, *pair) for w in weights):
            continue
        statuses[str(_pair_text(pair))] = run.induced(pair)[2].is_reducible
    record['computed'] = statuses
    record['passed'] = all(v == prediction['reducible'] for v in statuses.values())
    return [record]


CHECK_RUNNERS: Dict[str, Callable[[_EntryRun], List[Dict[str, Any]]]] = {
    'verdict': _check_verdict,
    'series': _check_series,
    'crosscheck': _check_crosscheck,
    'independence': _check_independence,
    'overlap': _check_overlap,
    'typeD': _check_typeD,
    'prediction': _check_prediction,
}


def run_checks(pi: FDModule, spec: str, params: Sequence[ParamPair], checks: Sequence[str],
               sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
               max_words: Optional[int] = None) -> List[Dict[str, Any]]:
    """π に対してチェックを順に実行し、記録を返す"""
    run = _EntryRun(pi, spec, params, sample_t0s, max_words)
    records: List[Dict[str, Any]] = []
    for name in checks:
        records.extend(CHECK_RUNNERS[name](run))
    return records


def run_entry(entry: ManifestEntry, manifest: ExperimentManifest, fld: ScalarField = None,
              sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
              max_words: Optional[int] = None) -> Dict[str, Any]:
    """一つのエントリを実行（スレッドプールから呼ばれる）"""
    spec, pi = resolve_pi(entry, manifest, fld)
    logger.info(f"エントリ開始: {entry.key} π={spec}")
    records = run_checks(pi, spec, entry.params, entry.checks, sample_t0s, max_words)
    return {
        'key': entry.key,
        'command': 'run',
        'pi': spec,
        'algebra_A': pi.algebra.to_json(),
        'params': [_pair_text(p) for p in entry.params],
        'scalars': pi.field.describe(),
        'checks': records,
        'passed': all(check_ok(r) for r in records),
    }


# =============================================================
# 並行実行
# =============================================================

def failed_entry(key: str, command: str, error: BaseException) -> Dict[str, Any]:
    return {
        'key': key,
        'command': command,
        'error': f"{type(error).__name__}: {error}",
        'checks': [],
        'passed': False,
    }


async def run_manifest_async(
    manifest: ExperimentManifest,
    fld: ScalarField = None,
    sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
    max_workers: int = 4,
    timeout_seconds: Optional[float] = 600,
    max_words: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """
    全エントリを並行に実行

    Args:
        manifest: 検証済みのマニフェスト
        fld: スカラー体（None なら symbolic）
        sample_t0s: burnside の特殊化点
        max_workers: スレッド数
        timeout_seconds: バッチ全体のタイムアウト（None で無制限）
        max_words: burnside の語閉包の上限（None で無制限）

    Returns:
        キー順に並べたエントリ結果のリスト
    """
    loop = asyncio.get_running_loop()
    sem = asyncio.Semaphore(max_workers)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        async def _run_one(entry: ManifestEntry):
            async with sem:
                return await loop.run_in_executor(
                    executor, run_entry, entry, manifest, fld, sample_t0s, max_words)

        tasks = [_run_one(entry) for entry in manifest.entries]
        try:
            completed = await asyncio.wait_for(
                asyncio.gather(*tasks, return_exceptions=True),
                timeout=timeout_seconds
            )
        except asyncio.TimeoutError:
            logger.error(f"マニフェスト全体が {timeout_seconds} 秒でタイムアウト")
            completed = [TimeoutError(f"{timeout_seconds} 秒タイムアウト")] * len(tasks)

    results = []
    for entry, item in zip(manifest.entries, completed):
        if isinstance(item, Exception):
            logger.error(f"エントリ失敗: {entry.key}: {item}")
            results.append(failed_entry(entry.key, 'run', item))
            continue
        results.append(item)
    return sorted(results, key=lambda r: r['key'])


def run_manifest(manifest: ExperimentManifest, **kwargs) -> List[Dict[str, Any]]:
    return asyncio.run(run_manifest_async(manifest, **kwargs))


def manifest_field(manifest: ExperimentManifest, mode: str, t0: Number) -> Optional[ScalarField]:
    """マニフェストの mode / t0 を CLI・設定の値より優先する"""
    mode = manifest.mode or mode
    t0 = manifest.t0 if manifest.t0 is not None else t0
    if mode == NUMERIC:
        return ScalarField(NUMERIC, 1, t0)
    return None

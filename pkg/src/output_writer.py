"""出力処理モジュール"""

import csv
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Dict, Iterator, List, Tuple


def dump_json(report: Dict[str, Any]) -> str:
    """レポートの JSON 文字列（標準出力用、入力が同じならバイト単位で同一）"""
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True, default=str)


def write_json(report: Dict[str, Any], output_path: Path) -> None:
    """JSON形式で出力"""
    with open(output_path, 'w', encoding='utf-8') as f:
        f.write(dump_json(report))
        f.write('\n')


def iter_checks(report: Dict[str, Any]) -> Iterator[Tuple[str, str, str, str]]:
    """(entry, check, status, detail) の行"""
    for entry in report.get('entries', []):
        key = entry.get('key', '')
        if 'error' in entry:
            yield key, entry.get('command', ''), 'error', entry['error']
            continue
        for check in entry.get('checks', []):
            if check.get('skipped'):
                status = 'skip'
            else:
                status = 'pass' if check.get('passed') else 'fail'
            detail = {k: v for k, v in check.items() if k not in ('check', 'passed', 'skipped')}
            yield key, str(check.get('check', '')), status, json.dumps(
                detail, ensure_ascii=False, sort_keys=True, default=str)


def write_csv(report: Dict[str, Any], output_path: Path) -> None:
    """CSV形式で出力（チェック単位で1行）"""
    with open(output_path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['entry', 'check', 'status', 'detail'])
        for row in iter_checks(report):
            writer.writerow(row)


def create_output_filename(output_dir: Path, command: str, extension: str) -> Path:
    """出力ファイル名を生成"""
    JST = timezone(timedelta(hours=9))
    timestamp = datetime.now(JST).strftime('%Y%m%d_%H%M%S')
    filename = f"hecke_{command}_{timestamp}.{extension}"
    return output_dir / filename


def save_results(
    report: Dict[str, Any],
    output_dir: Path = None,
    formats: List[str] = None
) -> List[Path]:
    """
    レポートを保存

    Args:
        report: CLI のレポート
        output_dir: 出力ディレクトリ
        formats: 出力形式リスト ['json', 'csv']

    Returns:
        作成されたファイルパスのリスト
    """
    if output_dir is None:
        output_dir = Path(__file__).parent.parent / 'output'

    if formats is None:
        formats = ['json']

    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    command = report.get('command', 'report')
    created_files = []

    for fmt in formats:
        output_path = create_output_filename(output_dir, command, fmt)

        if fmt == 'json':
            write_json(report, output_path)
        elif fmt == 'csv':
            write_csv(report, output_path)
        else:
            continue

        created_files.append(output_path)

    return created_files


def format_summary(report: Dict[str, Any]) -> str:
    """結果サマリーをフォーマット（ログ出力用）"""
    summary = report.get('summary', {})
    lines = [
        "=" * 50,
        "ワークベンチ実行サマリー",
        "=" * 50,
        f"コマンド: {report.get('command', '')}",
        f"スカラー: {report.get('scalars', {}).get('mode', '')}",
        f"エントリ数: {summary.get('total', 0)}",
        f"成功: {summary.get('passed', 0)}",
        f"失敗: {summary.get('failed', 0)}",
        f"スキップしたチェック: {summary.get('skipped', 0)}",
        "-" * 50,
    ]

    for entry in report.get('entries', []):
        status = '○' if entry.get('passed', False) else '×'
        lines.append(f"[{status}] {entry.get('key', '')}: {entry.get('command', '')}")

    lines.append("=" * 50)
    return '\n'.join(lines)

"""厳密線形代数ヘルパー

係数体は二通り:
  - symbolic: 有理関数体 QQ(t)（t = q^{1/N}、sympy の FracField）
  - numeric:  QQ（t ↦ t0 に特殊化済み）
行列は sympy の DomainMatrix（dense）で保持する。
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.matrices import DomainMatrix

from .errors import ConfigurationError, ScalarDomainError
from .scalars import FractionScalar, LaurentScalar, Number, fraction_reduce

logger = logging.getLogger(__name__)

SYMBOLIC = 'symbolic'
NUMERIC = 'numeric'
MODES = (SYMBOLIC, NUMERIC)

# QQ(t) は N に依存しない（N は t の意味だけを決める）
_FRAC_FIELD, _T_GEN = field('t', QQ)
_FRAC_DOMAIN = _FRAC_FIELD.to_domain()


def _qq(value: Number):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


# =============================================================
# スカラー体
# =============================================================

class ScalarField:
    """加群の行列成分が住む体

    Args:
        mode: 'symbolic' | 'numeric'
        root_index: t = q^{1/N} の N
        t0: numeric モードでの t の値（t0 > 1 を推奨）
    """

    def __init__(self, mode: str = SYMBOLIC, root_index: int = 1, t0: Number = 4):
        if mode not in MODES:
            raise ConfigurationError(f"未知のスカラーモード: {mode}")
        self.mode = mode
        self.root_index = root_index
        self.t0 = Fraction(t0)
        if mode == NUMERIC and self.t0 == 0:
            raise ScalarDomainError("numeric モードでは t0 ≠ 0 が必要です")
        self.domain = _FRAC_DOMAIN if mode == SYMBOLIC else QQ

    @property
    def is_symbolic(self) -> bool:
        return self.mode == SYMBOLIC

    def __eq__(self, other):
        if not isinstance(other, ScalarField):
            return NotImplemented
        if self.mode != other.mode or self.root_index != other.root_index:
            return False
        return self.is_symbolic or self.t0 == other.t0

    def __hash__(self):
        return hash((self.mode, self.root_index, None if self.is_symbolic else self.t0))

    def describe(self) -> Dict[str, Any]:
        payload = {'mode': self.mode, 'N': self.root_index}
        if not self.is_symbolic:
            payload['t0'] = str(self.t0)
        return payload

    def with_root_index(self, root_index: int) -> 'ScalarField':
        return ScalarField(self.mode, root_index, self.t0)

    # --- 変換 ---

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def from_rational(self, value: Number):
        if self.is_symbolic:
            return _FRAC_FIELD(_qq(value))
        return _qq(value)

    def from_laurent(self, a: LaurentScalar):
        if a.root_index != self.root_index:
            raise ConfigurationError(
                f"ルートインデックスが一致しません: N={a.root_index}, N={self.root_index}"
            )
        if self.is_symbolic:
            acc = _FRAC_FIELD.zero
            for k, c in a.terms:
                acc += _qq(c) * _T_GEN ** k
            return acc
        total = Fraction(0)
        for k, c in a.terms:
            total += c * self.t0 ** k
        return _qq(total)

    def from_fraction(self, f: FractionScalar):
        den = self.from_laurent(f.den)
        if self.is_zero(den):
            raise ScalarDomainError(f"t0={self.t0} で分母が消えます: {f}")
        return self.from_laurent(f.num) / den

    def convert(self, value: Any):
        if isinstance(value, LaurentScalar):
            return self.from_laurent(value)
        if isinstance(value, FractionScalar):
            return self.from_fraction(value)
        return self.from_rational(value)

    def to_fraction_scalar(self, x) -> FractionScalar:
        """symbolic の元を FractionScalar に戻す"""
        if not self.is_symbolic:
            value = _to_fraction(x)
            one = LaurentScalar.one(self.root_index)
            return FractionScalar(LaurentScalar.constant(self.root_index, value), one)
        num = _poly_to_laurent(self.root_index, x.numer)
        den = _poly_to_laurent(self.root_index, x.denom)
        return fraction_reduce(num, den)

    def to_rational(self, x) -> Fraction:
        if self.is_symbolic:
            raise ScalarDomainError("symbolic の元は有理数ではありません")
        return _to_fraction(x)

    def specialize(self, x, t0: Number) -> Fraction:
        """t ↦ t0（symbolic の元のみ）"""
        if not self.is_symbolic:
            return _to_fraction(x)
        return self.to_fraction_scalar(x).evaluate(t0)

    def is_zero(self, x) -> bool:
        return not x

    def encode(self, x) -> Any:
        """ワイヤ形式（symbolic は {num, den}、numeric は "p/q" 文字列）"""
        if self.is_symbolic:
            f = self.to_fraction_scalar(x)
            if f.is_laurent():
                return f.num.to_json()
            return f.to_json()
        return str(_to_fraction(x))

    def decode(self, payload: Any):
        if isinstance(payload, dict):
            return self.from_fraction(FractionScalar.from_json(payload, self.root_index))
        if isinstance(payload, (int, str)) and not isinstance(payload, bool):
            return self.from_rational(Fraction(str(payload)))
        raise ScalarDomainError(f"スカラーを解釈できません: {payload!r}")


def _poly_to_laurent(root_index: int, poly) -> LaurentScalar:
    mapping = {}
    for (k,), c in poly.terms():
        mapping[k] = _to_fraction(c)
    return LaurentScalar.from_dict(root_index, mapping)


# =============================================================
# 行列
# =============================================================

def matrix(rows: Sequence[Sequence[Any]], fld: ScalarField) -> DomainMatrix:
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (m, n), fld.domain)


def identity_matrix(d: int, fld: ScalarField) -> DomainMatrix:
    rows = [[fld.one if i == j else fld.zero for j in range(d)] for i in range(d)]
    return DomainMatrix(rows, (d, d), fld.domain)


def zero_matrix(m: int, n: int, fld: ScalarField) -> DomainMatrix:
    return DomainMatrix([[fld.zero] * n for _ in range(m)], (m, n), fld.domain)


def scalar_matrix(d: int, value, fld: ScalarField) -> DomainMatrix:
    rows = [[value if i == j else fld.zero for j in range(d)] for i in range(d)]
    return DomainMatrix(rows, (d, d), fld.domain)


def entries(mat: DomainMatrix) -> List[List[Any]]:
    return mat.to_list()


def matrices_equal(a: DomainMatrix, b: DomainMatrix) -> bool:
    if a.shape != b.shape:
        return False
    return (a - b).is_zero_matrix


def is_zero_vector(v: Sequence[Any]) -> bool:
    return all(not x for x in v)


def apply(mat: DomainMatrix, v: Sequence[Any]) -> List[Any]:
    """行列 × 列ベクトル"""
    out = []
    for row in mat.to_list():
        acc = None
        for a, b in zip(row, v):
            if a and b:
                acc = a * b if acc is None else acc + a * b
        out.append(acc if acc is not None else mat.domain.zero)
    return out


def columns_to_matrix(columns: Sequence[Sequence[Any]], fld: ScalarField) -> DomainMatrix:
    """列ベクトルの並びを d × k 行列にする"""
    if not columns:
        raise ConfigurationError("空の列集合")
    d = len(columns[0])
    rows = [[col[i] for col in columns] for i in range(d)]
    return DomainMatrix(rows, (d, len(columns)), fld.domain)


def nullspace_columns(mat: DomainMatrix) -> List[List[Any]]:
    """核の基底（列ベクトルのリスト）"""
    null = mat.nullspace()
    return [list(row) for row in null.to_list()]


def rank(mat: DomainMatrix) -> int:
    return mat.rank()


def stable_power(mat: DomainMatrix) -> DomainMatrix:
    """ランクが止まるまで冪を取った A^k（ker A^k = 一般化固有空間）"""
    d = mat.shape[0]
    power = mat
    current = power.rank()
    for _ in range(d):
        if current == 0:
            break
        nxt = power * mat
        r = nxt.rank()
        if r == current:
            break
        power, current = nxt, r
    return power


def generalized_kernel(mat: DomainMatrix) -> List[List[Any]]:
    return nullspace_columns(stable_power(mat))


def stacked_nullspace(mats: Sequence[DomainMatrix]) -> List[List[Any]]:
    """共通核 ∩ ker(M_j)"""
    stacked = mats[0]
    if len(mats) > 1:
        stacked = stacked.vstack(*mats[1:])
    return nullspace_columns(stacked)


class EchelonSpan:
    """ベクトルを一本ずつ追加する縮約行階段形の張る空間

    各行は自分のピボット位置で 1、他の行のピボット位置で 0。
    """

    def __init__(self, length: int, fld: ScalarField):
        self.length = length
        self.field = fld
        self._rows: Dict[int, List[Any]] = {}

    @property
    def dimension(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rows)

    def reduce(self, v: Sequence[Any]) -> List[Any]:
        v = list(v)
        for p, row in self._rows.items():
            c = v[p]
            if c:
                v = [a - c * b if b else a for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence[Any]) -> bool:
        return is_zero_vector(self.reduce(v))

    def add(self, v: Sequence[Any]) -> bool:
        """張る空間が広がったら True"""
        if len(v) != self.length:
            raise ConfigurationError(f"ベクトル長が一致しません: {len(v)} != {self.length}")
        w = self.reduce(v)
        pivot = next((i for i, x in enumerate(w) if x), None)
        if pivot is None:
            return False
        inv = self.field.one / w[pivot]
        w = [x * inv if x else x for x in w]
        for p, row in self._rows.items():
            c = row[pivot]
            if c:
                self._rows[p] = [a - c * b if b else a for a, b in zip(row, w)]
        self._rows[pivot] = w
        return True

    def basis(self) -> List[List[Any]]:
        return [list(self._rows[p]) for p in self.pivots]


def cyclic_span(generators: Sequence[DomainMatrix], v: Sequence[Any], fld: ScalarField) -> List[List[Any]]:
    """v を含む最小の不変部分空間の基底"""
    span = EchelonSpan(len(v), fld)
    if not span.add(v):
        return []
    frontier = [list(v)]
    while frontier:
        nxt = []
        for u in frontier:
            for g in generators:
                gu = apply(g, u)
                if span.add(gu):
                    nxt.append(gu)
        frontier = nxt
    return span.basis()


def is_invariant(generators: Sequence[DomainMatrix], basis: Sequence[Sequence[Any]], fld: ScalarField) -> bool:
    if not basis:
        return True
    span = EchelonSpan(len(basis[0]), fld)
    for b in basis:
        span.add(b)
    return all(span.contains(apply(g, b)) for g in generators for b in basis)


def split_by_subspace(
    generators: Sequence[DomainMatrix],
    basis: Sequence[Sequence[Any]],
    fld: ScalarField,
) -> Tuple[List[DomainMatrix], List[DomainMatrix]]:
    """不変部分空間 U に関する (U への制限, 商 V/U) の表現行列

    U の基底を座標単位ベクトルで補って基底変換し、ブロック上三角の左上・右下を取り出す。
    """
    d = len(basis[0])
    span = EchelonSpan(d, fld)
    for b in basis:
        span.add(b)
    k = span.dimension
    sub_basis = span.basis()
    pivots = set(span.pivots)
    complement = []
    for i in range(d):
        if i not in pivots:
            e = [fld.zero] * d
            e[i] = fld.one
            complement.append(e)
    change = columns_to_matrix(sub_basis + complement, fld)
    change_inv = change.inv()
    sub_mats, quot_mats = [], []
    for g in generators:
        conj = change_inv * g * change
        if k:
            sub_mats.append(conj.extract(list(range(k)), list(range(k))))
        if k < d:
            rest = list(range(k, d))
            quot_mats.append(conj.extract(rest, rest))
    return sub_mats, quot_mats


def word_span(
    generators: Sequence[DomainMatrix],
    fld: ScalarField,
    max_words: Optional[int] = None,
) -> Tuple[int, bool]:
    """生成行列の語が張る代数の次元と、上限で打ち切ったかどうか（単位行列から出発する語閉包）"""
    d = generators[0].shape[0] if generators else 1
    target = d * d
    span = EchelonSpan(target, fld)
    ident = identity_matrix(d, fld)
    span.add(_flatten(ident))
    frontier = [ident]
    visited = 1
    while frontier and span.dimension < target:
        nxt = []
        for w in frontier:
            for g in generators:
                gw = g * w
                visited += 1
                if span.add(_flatten(gw)):
                    nxt.append(gw)
                    if span.dimension == target:
                        return target, False
                if max_words is not None and visited > max_words:
                    logger.warning(f"語閉包が上限 {max_words} に達しました: dim={span.dimension}")
                    return span.dimension, True
        frontier = nxt
    return span.dimension, False


def word_span_dimension(
    generators: Sequence[DomainMatrix],
    fld: ScalarField,
    max_words: Optional[int] = None,
) -> int:
    return word_span(generators, fld, max_words)[0]


def _flatten(mat: DomainMatrix) -> List[Any]:
    return [x for row in mat.to_list() for x in row]

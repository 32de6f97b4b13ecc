"""厳密スカラー演算モジュール

係数はすべて t = q^{1/N} の Laurent 多項式（LaurentScalar）か、その分数（FractionScalar）。
有理数は fractions.Fraction をそのまま使う。浮動小数点は一切使わない。
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Tuple, Union

from sympy import QQ
from sympy.polys.rings import ring

from .errors import ConfigurationError, DivisionByZeroError, SchemaError, ScalarDomainError

Rational = Fraction
Number = Union[int, Fraction]

# 分数の約分に使う一変数多項式環 QQ[t]
_POLY_RING, _T = ring('t', QQ)


def to_rational(value: Any) -> Fraction:
    """int / str / Fraction を Fraction に変換"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SchemaError(f"有理数として解釈できません: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(f"有理数として解釈できません: {value!r}") from e
    raise SchemaError(f"有理数として解釈できません: {value!r}")


def common_root_index(values: Iterable[Number]) -> int:
    """全指数の分母の最小公倍数（ルートインデックス N）"""
    n = 1
    for v in values:
        n = math.lcm(n, Fraction(v).denominator)
    return n


@dataclass(frozen=True)
class LaurentScalar:
    """Σ c_k t^k（t = q^{1/N}）

    terms は指数の昇順に並んだ (k, c_k) の組で、c_k = 0 の項は持たない。
    """

    root_index: int
    terms: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        if self.root_index <= 0:
            raise ConfigurationError(f"ルートインデックスは正の整数: {self.root_index}")

    @classmethod
    def from_dict(cls, root_index: int, mapping: Mapping[int, Number]) -> 'LaurentScalar':
        items = []
        for k, c in mapping.items():
            if isinstance(c, (float, bool)):
                raise SchemaError(f"係数は有理数で指定してください: {c!r}")
            c = Fraction(c)
            if c != 0:
                items.append((int(k), c))
        items.sort()
        return cls(root_index, tuple(items))

    @classmethod
    def constant(cls, root_index: int, value: Number) -> 'LaurentScalar':
        return cls.from_dict(root_index, {0: value})

    @classmethod
    def zero(cls, root_index: int) -> 'LaurentScalar':
        return cls(root_index, ())

    @classmethod
    def one(cls, root_index: int) -> 'LaurentScalar':
        return cls.constant(root_index, 1)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def lowest_exponent(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def highest_exponent(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def coefficient(self, k: int) -> Fraction:
        return self.as_dict().get(k, Fraction(0))

    def shift(self, k: int) -> 'LaurentScalar':
        """t^k を掛ける"""
        return LaurentScalar(self.root_index, tuple((e + k, c) for e, c in self.terms))

    # --- 算術 ---

    def _coerce(self, other: Any) -> 'LaurentScalar':
        if isinstance(other, LaurentScalar):
            if other.root_index != self.root_index:
                raise ConfigurationError(
                    f"ルートインデックスが一致しません: N={self.root_index}, N={other.root_index}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentScalar.constant(self.root_index, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = self.as_dict()
        for k, c in other.terms:
            acc[k] = acc.get(k, 0) + c
        return LaurentScalar.from_dict(self.root_index, acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar(self.root_index, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return scalar_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if not self.is_monomial():
                raise DivisionByZeroError(f"単項式でない元の負冪は取れません: {self}")
            (k, c), = self.terms
            return LaurentScalar(self.root_index, ((k * e, c ** e),))
        result = LaurentScalar.one(self.root_index)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for k, c in reversed(self.terms):
            if k == 0:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(f"t^{k}")
            elif c == -1:
                parts.append(f"-t^{k}")
            else:
                parts.append(f"{c}*t^{k}")
        return ' + '.join(parts).replace('+ -', '- ')

    # --- ワイヤ形式 ---

    def to_json(self) -> Dict[str, Any]:
        return {
            'N': self.root_index,
            'terms': [[k, c.numerator, c.denominator] for k, c in self.terms],
        }

    @classmethod
    def from_json(cls, payload: Any, root_index: int = None) -> 'LaurentScalar':
        if isinstance(payload, (int, str)) and root_index is not None:
            return cls.constant(root_index, to_rational(payload))
        if not isinstance(payload, dict) or 'terms' not in payload:
            raise SchemaError(f"スカラーの形式が不正です: {payload!r}")
        n = payload.get('N', root_index)
        if not isinstance(n, int) or n <= 0:
            raise SchemaError(f"N が不正です: {n!r}")
        if root_index is not None and n != root_index:
            raise ConfigurationError(f"ルートインデックスが一致しません: N={n}, N={root_index}")
        mapping: Dict[int, Fraction] = {}
        for term in payload['terms']:
            if not isinstance(term, list) or len(term) != 3 or not all(isinstance(v, int) for v in term):
                raise SchemaError(f"項の形式が不正です: {term!r}")
            k, num, den = term
            if den == 0:
                raise SchemaError(f"係数の分母が 0 です: {term!r}")
            mapping[k] = mapping.get(k, 0) + Fraction(num, den)
        return cls.from_dict(n, mapping)


def monomial(root_index: int, exponent: Number, coeff: Number = 1) -> LaurentScalar:
    """coeff · q^{exponent} = coeff · t^{N·exponent}"""
    k = Fraction(exponent) * root_index
    if k.denominator != 1:
        raise ConfigurationError(
            f"指数 {exponent} は N={root_index} で表現できません"
        )
    return LaurentScalar.from_dict(root_index, {int(k): coeff})


def q_power(root_index: int, exponent: Number) -> LaurentScalar:
    """q^{exponent}"""
    return monomial(root_index, exponent)


def scalar_mul(a: LaurentScalar, b: LaurentScalar) -> LaurentScalar:
    """項ごとの畳み込み"""
    if a.root_index != b.root_index:
        raise ConfigurationError(
            f"ルートインデックスが一致しません: N={a.root_index}, N={b.root_index}"
        )
    acc: Dict[int, Fraction] = {}
    for k1, c1 in a.terms:
        for k2, c2 in b.terms:
            acc[k1 + k2] = acc.get(k1 + k2, 0) + c1 * c2
    return LaurentScalar.from_dict(a.root_index, acc)


def scalar_eval(a: LaurentScalar, t0: Number) -> Fraction:
    """t ↦ t0 を代入"""
    t0 = Fraction(t0)
    if t0 == 0:
        if a.terms and a.lowest_exponent() < 0:
            raise ScalarDomainError(f"t0=0 で負冪を含むスカラーは評価できません: {a}")
        return a.coefficient(0)
    total = Fraction(0)
    for k, c in a.terms:
        total += c * t0 ** k
    return total


# --- 分数 ---

def _to_poly(a: LaurentScalar):
    """a = t^s · P(t)（P(0) ≠ 0）となる (s, P) を返す"""
    s = a.lowest_exponent()
    poly = _POLY_RING.from_dict({(k - s,): QQ(c.numerator, c.denominator) for k, c in a.terms})
    return s, poly


def _from_poly(root_index: int, poly, shift: int = 0) -> LaurentScalar:
    mapping = {}
    for (k,), c in poly.terms():
        mapping[k + shift] = Fraction(int(c.numerator), int(c.denominator))
    return LaurentScalar.from_dict(root_index, mapping)


@dataclass(frozen=True)
class FractionScalar:
    """num / den（den はモニックで最低次数 0）"""

    num: LaurentScalar
    den: LaurentScalar

    @property
    def root_index(self) -> int:
        return self.num.root_index

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.terms == ((0, Fraction(1)),)

    def __add__(self, other: 'FractionScalar') -> 'FractionScalar':
        other = _as_fraction(other, self.root_index)
        return fraction_reduce(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> 'FractionScalar':
        return FractionScalar(-self.num, self.den)

    def __sub__(self, other: 'FractionScalar') -> 'FractionScalar':
        return self + (-_as_fraction(other, self.root_index))

    def __mul__(self, other: 'FractionScalar') -> 'FractionScalar':
        other = _as_fraction(other, self.root_index)
        return fraction_reduce(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: 'FractionScalar') -> 'FractionScalar':
        other = _as_fraction(other, self.root_index)
        return fraction_reduce(self.num * other.den, self.den * other.num)

    def evaluate(self, t0: Number) -> Fraction:
        d = scalar_eval(self.den, t0)
        if d == 0:
            raise ScalarDomainError(f"t0={t0} で分母が消えます: {self}")
        return scalar_eval(self.num, t0) / d

    def __str__(self):
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> Dict[str, Any]:
        return {'num': self.num.to_json(), 'den': self.den.to_json()}

    @classmethod
    def from_json(cls, payload: Any, root_index: int = None) -> 'FractionScalar':
        if isinstance(payload, dict) and 'num' in payload:
            num = LaurentScalar.from_json(payload['num'], root_index)
            den = LaurentScalar.from_json(payload.get('den', {'N': num.root_index, 'terms': [[0, 1, 1]]}),
                                          num.root_index)
            return fraction_reduce(num, den)
        a = LaurentScalar.from_json(payload, root_index)
        return FractionScalar(a, LaurentScalar.one(a.root_index))


def _as_fraction(value: Any, root_index: int) -> FractionScalar:
    if isinstance(value, FractionScalar):
        return value
    if isinstance(value, LaurentScalar):
        return FractionScalar(value, LaurentScalar.one(value.root_index))
    return FractionScalar(LaurentScalar.constant(root_index, value), LaurentScalar.one(root_index))


def fraction_reduce(num: LaurentScalar, den: LaurentScalar) -> FractionScalar:
    """gcd で約分し、分母をモニック・最低次数 0 に正規化"""
    if num.root_index != den.root_index:
        raise ConfigurationError(
            f"ルートインデックスが一致しません: N={num.root_index}, N={den.root_index}"
        )
    n = num.root_index
    if den.is_zero():
        raise DivisionByZeroError("分母が 0 です")
    if num.is_zero():
        return FractionScalar(LaurentScalar.zero(n), LaurentScalar.one(n))

    s_num, p_num = _to_poly(num)
    s_den, p_den = _to_poly(den)
    _, p_num, p_den = p_num.cofactors(p_den)
    lc = p_den.LC
    p_num = p_num.quo_ground(lc)
    p_den = p_den.quo_ground(lc)
    return FractionScalar(_from_poly(n, p_num, s_num - s_den), _from_poly(n, p_den))

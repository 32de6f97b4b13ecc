"""古典型ルートデータ・Weyl 群モジュール

格子は X = ℤⁿ（座標 ε_1..ε_n）。Weyl 群の元は符号付き置換で、
images[i-1] = ±j は w(ε_i) = ±ε_j を意味する。単純ルートの並びは
ε_1-ε_2, …, ε_{n-1}-ε_n, 最後に B: ε_n / C: 2ε_n / D: ε_{n-1}+ε_n。
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import ConfigurationError, RankMismatchError, SchemaError
from .scalars import LaurentScalar, Number, common_root_index, monomial, to_rational

logger = logging.getLogger(__name__)

Lattice = Tuple[int, ...]

# 代数の族: A=GL_n, B=SO(2n+1), C=Sp(2n), D=SO(2n)。O(2n) は B(0,0) として実現する
FAMILIES = ('A', 'B', 'C', 'D')
_FAMILY_ALIASES = {
    'A': 'A', 'GL': 'A', 'gl': 'A', 'a': 'A',
    'B': 'B', 'SO2N1': 'B', 'so3': 'B', 'SO3': 'B', 'b': 'B',
    'C': 'C', 'SP': 'C', 'SL2': 'C', 'sl2': 'C', 'c': 'C',
    'D': 'D', 'SO2N': 'D', 'd': 'D',
    'O': 'O', 'O2N': 'O', 'o': 'O',
}


# =============================================================
# パラメータと代数記述子
# =============================================================

@dataclass(frozen=True)
class ParameterSpec:
    """パラメータ関数 λ, λ*

    lambda_a は型 A のルート（D 型では全ルート）上の λ。
    lambda_last / lambda_star_last は最後の単純ルート上の λ, λ*（B は両方、C は λ のみ）。
    """

    lambda_a: Fraction = Fraction(1)
    lambda_last: Optional[Fraction] = None
    lambda_star_last: Optional[Fraction] = None

    @property
    def m_plus(self) -> Optional[Fraction]:
        if self.lambda_last is None:
            return None
        star = self.lambda_star_last if self.lambda_star_last is not None else self.lambda_last
        return (self.lambda_last + star) / 2

    @property
    def m_minus(self) -> Optional[Fraction]:
        if self.lambda_last is None:
            return None
        star = self.lambda_star_last if self.lambda_star_last is not None else self.lambda_last
        return (self.lambda_last - star) / 2

    def exponents(self) -> List[Fraction]:
        values = [self.lambda_a]
        for v in (self.lambda_last, self.lambda_star_last, self.m_plus, self.m_minus):
            if v is not None:
                values.append(v)
        return values


@dataclass(frozen=True)
class AlgebraDescriptor:
    """アフィン Hecke 代数 ℋ(𝕢, λ, λ*) の記述子"""

    family: str
    n: int
    params: ParameterSpec
    root_index: int

    @property
    def weyl_kind(self) -> str:
        return 'B' if self.family in ('B', 'C') else self.family

    @property
    def num_simple(self) -> int:
        return num_simple(self.weyl_kind, self.n)

    @property
    def m_plus(self) -> Optional[Fraction]:
        return self.params.m_plus

    @property
    def m_minus(self) -> Optional[Fraction]:
        return self.params.m_minus

    def label(self) -> str:
        p = self.params
        if self.family == 'B':
            return f"B{self.n}(m+={p.m_plus}, m-={p.m_minus})"
        if self.family == 'C':
            return f"C{self.n}(λ={p.lambda_last})"
        return f"{self.family}{self.n}"

    def to_json(self) -> Dict[str, Any]:
        payload = {'family': self.family, 'n': self.n, 'N': self.root_index}
        if self.params.lambda_a != 1:
            payload['lambda_a'] = str(self.params.lambda_a)
        if self.family == 'B':
            payload['m_plus'] = str(self.params.m_plus)
            payload['m_minus'] = str(self.params.m_minus)
        elif self.family == 'C':
            payload['lambda'] = str(self.params.lambda_last)
        return payload


def normalize_family(family: str) -> str:
    key = _FAMILY_ALIASES.get(family, _FAMILY_ALIASES.get(str(family).upper()))
    if key is None:
        raise ConfigurationError(f"未知の族です: {family}")
    return key


def make_descriptor(
    family: str,
    n: int,
    lambda_a: Number = 1,
    m_plus: Number = None,
    m_minus: Number = None,
    lam: Number = None,
    lam_star: Number = None,
    extra_exponents: Sequence[Number] = (),
    root_index: int = None,
) -> AlgebraDescriptor:
    """記述子を構成し、ルートインデックス N を決める

    Args:
        family: 'A' | 'B' | 'C' | 'D' | 'O'（別名も可）
        n: 階数
        lambda_a: 型 A ルート上の λ
        m_plus, m_minus: B 型の最後のノード（λ = m₊+m₋, λ* = m₊−m₋）
        lam, lam_star: B 型なら λ(ε_n), λ*(ε_n)。C 型なら λ(2ε_n)
        extra_exponents: N の決定に含める追加の指数（ウェイトなど）
        root_index: 明示する場合は全分母で割り切れること

    Returns:
        AlgebraDescriptor
    """
    family = normalize_family(family)
    if not isinstance(n, int) or n < 1:
        raise ConfigurationError(f"階数は正の整数: {n}")
    if family == 'D' and n < 2:
        raise ConfigurationError("D 型は n ≥ 2 が必要です")

    lambda_a = Fraction(lambda_a)
    if family == 'O':
        family, m_plus, m_minus, lam, lam_star = 'B', 0, 0, None, None

    if family == 'B':
        if lam is not None:
            lam = Fraction(lam)
            lam_star = Fraction(lam_star) if lam_star is not None else lam
        else:
            mp = Fraction(m_plus if m_plus is not None else 0)
            mm = Fraction(m_minus if m_minus is not None else 0)
            lam, lam_star = mp + mm, mp - mm
        params = ParameterSpec(lambda_a, lam, lam_star)
    elif family == 'C':
        if lam is None:
            lam = lambda_a
        if lam_star is not None:
            raise ConfigurationError("C 型では λ* は定義されません")
        params = ParameterSpec(lambda_a, Fraction(lam), None)
    else:
        if any(v is not None for v in (m_plus, m_minus, lam, lam_star)):
            raise ConfigurationError(f"{family} 型には最後のノードのパラメータはありません")
        params = ParameterSpec(lambda_a, None, None)

    exponents = params.exponents() + [Fraction(e) for e in extra_exponents]
    if family == 'C':
        exponents.append(params.lambda_last / 2)
    needed = common_root_index(exponents)
    if root_index is None:
        root_index = needed
    elif root_index % needed != 0:
        raise ConfigurationError(f"N={root_index} は必要な分母 {needed} で割り切れません")
    return AlgebraDescriptor(family, n, params, root_index)


def descriptor_from_json(payload: Dict[str, Any]) -> AlgebraDescriptor:
    """JSON 記述子を読み込む"""
    if not isinstance(payload, dict) or 'family' not in payload or 'n' not in payload:
        raise SchemaError(f"記述子の形式が不正です: {payload!r}")
    kwargs = {}
    if 'lambda_a' in payload:
        kwargs['lambda_a'] = to_rational(payload['lambda_a'])
    for key, arg in (('m_plus', 'm_plus'), ('m_minus', 'm_minus'),
                     ('lambda', 'lam'), ('lambda_star', 'lam_star')):
        if key in payload:
            kwargs[arg] = to_rational(payload[key])
    return make_descriptor(payload['family'], int(payload['n']),
                           root_index=payload.get('N'), **kwargs)


def gl_subalgebra(descriptor: AlgebraDescriptor) -> AlgebraDescriptor:
    """T_1..T_{n-1} と全 θ で生成される部分代数 ℋ_A の記述子（同じ N）"""
    return AlgebraDescriptor('A', descriptor.n, ParameterSpec(descriptor.params.lambda_a),
                             descriptor.root_index)


def with_parameters(descriptor: AlgebraDescriptor, m_plus: Number, m_minus: Number) -> AlgebraDescriptor:
    """同じ n, λ_a で B 型パラメータだけを差し替える（N は必要なら拡大）"""
    base = make_descriptor('B', descriptor.n, lambda_a=descriptor.params.lambda_a,
                           m_plus=m_plus, m_minus=m_minus)
    n_index = math.lcm(base.root_index, descriptor.root_index)
    return AlgebraDescriptor('B', descriptor.n, base.params, n_index)


def rescale_root_index(descriptor: AlgebraDescriptor, root_index: int) -> AlgebraDescriptor:
    if root_index % descriptor.root_index != 0:
        raise ConfigurationError(f"N={root_index} は N={descriptor.root_index} の倍数ではありません")
    return AlgebraDescriptor(descriptor.family, descriptor.n, descriptor.params, root_index)


# =============================================================
# 単純ルート
# =============================================================

@dataclass(frozen=True)
class SimpleRoot:
    index: int
    root: Lattice
    coroot: Lattice
    doubled: bool  # α∨ ∈ 2X∨


def _unit(n: int, i: int, c: int = 1) -> Lattice:
    v = [0] * n
    v[i] = c
    return tuple(v)


@lru_cache(maxsize=None)
def _simple_roots(family: str, n: int) -> Tuple[SimpleRoot, ...]:
    roots = []
    for i in range(n - 1):
        a = [0] * n
        a[i], a[i + 1] = 1, -1
        roots.append(SimpleRoot(i + 1, tuple(a), tuple(a), False))
    if family == 'B':
        roots.append(SimpleRoot(n, _unit(n, n - 1), _unit(n, n - 1, 2), True))
    elif family == 'C':
        roots.append(SimpleRoot(n, _unit(n, n - 1, 2), _unit(n, n - 1), False))
    elif family == 'D':
        a = [0] * n
        a[n - 2], a[n - 1] = 1, 1
        roots.append(SimpleRoot(n, tuple(a), tuple(a), False))
    return tuple(roots)


def simple_roots(descriptor: AlgebraDescriptor) -> Tuple[SimpleRoot, ...]:
    return _simple_roots(descriptor.family, descriptor.n)


def simple_root(descriptor: AlgebraDescriptor, i: int) -> SimpleRoot:
    roots = simple_roots(descriptor)
    if not 1 <= i <= len(roots):
        raise ConfigurationError(f"単純ルートの番号が範囲外です: {i}")
    return roots[i - 1]


def root_parameter(descriptor: AlgebraDescriptor, i: int) -> Fraction:
    """二次関係式 (T_i − q^λ)(T_i + 1) = 0 の λ"""
    simple_root(descriptor, i)
    if descriptor.family in ('B', 'C') and i == descriptor.n:
        return descriptor.params.lambda_last
    return descriptor.params.lambda_a


def pairing(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def reflect_lattice(root: SimpleRoot, x: Lattice) -> Lattice:
    """s_α(x) = x − ⟨x, α∨⟩α"""
    k = pairing(x, root.coroot)
    return tuple(a - k * b for a, b in zip(x, root.root))


# =============================================================
# Weyl 群
# =============================================================

def num_simple(kind: str, n: int) -> int:
    return n - 1 if kind == 'A' else n


@dataclass(frozen=True)
class WeylElement:
    """符号付き置換"""

    images: Tuple[int, ...]
    kind: str = 'B'

    @property
    def rank(self) -> int:
        return len(self.images)

    @property
    def length(self) -> int:
        return _length(self.images, self.kind)

    @property
    def reduced_word(self) -> Tuple[int, ...]:
        return _reduced_word(self.images, self.kind)

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))

    def __mul__(self, other: 'WeylElement') -> 'WeylElement':
        return weyl_compose(self, other)

    def inverse(self) -> 'WeylElement':
        inv = [0] * self.rank
        for i, v in enumerate(self.images):
            inv[abs(v) - 1] = (i + 1) if v > 0 else -(i + 1)
        return WeylElement(tuple(inv), self.kind)

    def act(self, x: Sequence[int]) -> Lattice:
        """格子への作用 w(x)"""
        if len(x) != self.rank:
            raise RankMismatchError(f"階数が一致しません: {self.rank} と {len(x)}")
        out = [0] * self.rank
        for i, v in enumerate(self.images):
            out[abs(v) - 1] += x[i] if v > 0 else -x[i]
        return tuple(out)

    def as_kind(self, kind: str) -> 'WeylElement':
        return WeylElement(self.images, kind)

    def __str__(self):
        word = self.reduced_word
        if not word:
            return 'e'
        return ''.join(f"s{i}" for i in word)


def identity(n: int, kind: str = 'B') -> WeylElement:
    return WeylElement(tuple(range(1, n + 1)), kind)


def simple_reflection(kind: str, n: int, i: int) -> WeylElement:
    """s_i（1 始まり）"""
    images = list(range(1, n + 1))
    if 1 <= i < n:
        images[i - 1], images[i] = i + 1, i
    elif i == n and kind == 'B':
        images[n - 1] = -n
    elif i == n and kind == 'D' and n >= 2:
        images[n - 2], images[n - 1] = -n, -(n - 1)
    else:
        raise ConfigurationError(f"{kind}{n} に単純鏡映 s_{i} はありません")
    return WeylElement(tuple(images), kind)


def _combine_kinds(k1: str, k2: str) -> str:
    if k1 == k2 or k2 == 'A':
        return k1
    if k1 == 'A':
        return k2
    raise ConfigurationError(f"異なる Weyl 群の元です: {k1} と {k2}")


def weyl_compose(w1: WeylElement, w2: WeylElement) -> WeylElement:
    """(w1 w2)(ε_i) = w1(w2(ε_i))"""
    if w1.rank != w2.rank:
        raise RankMismatchError(f"階数が一致しません: {w1.rank} と {w2.rank}")
    kind = _combine_kinds(w1.kind, w2.kind)
    out = []
    for v in w2.images:
        img = w1.images[abs(v) - 1]
        out.append(img if v > 0 else -img)
    return WeylElement(tuple(out), kind)


@lru_cache(maxsize=None)
def positive_roots(kind: str, n: int) -> Tuple[Lattice, ...]:
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            v = [0] * n
            v[i], v[j] = 1, -1
            roots.append(tuple(v))
            if kind in ('B', 'D'):
                v = [0] * n
                v[i], v[j] = 1, 1
                roots.append(tuple(v))
        if kind == 'B':
            roots.append(_unit(n, i))
    return tuple(roots)


def is_positive(v: Sequence[int]) -> bool:
    for c in v:
        if c:
            return c > 0
    return False


@lru_cache(maxsize=None)
def _length(images: Tuple[int, ...], kind: str) -> int:
    w = WeylElement(images, kind)
    return sum(1 for beta in positive_roots(kind, len(images)) if not is_positive(w.act(beta)))


@lru_cache(maxsize=None)
def _reduced_word(images: Tuple[int, ...], kind: str) -> Tuple[int, ...]:
    n = len(images)
    w = WeylElement(images, kind)
    word = []
    while not w.is_identity():
        current = w.length
        for i in range(1, num_simple(kind, n) + 1):
            candidate = weyl_compose(simple_reflection(kind, n, i), w)
            if candidate.length < current:
                word.append(i)
                w = candidate
                break
        else:
            raise ConfigurationError(f"降下が見つかりません: {images}")
    return tuple(word)


def from_word(kind: str, n: int, word: Sequence[int]) -> WeylElement:
    w = identity(n, kind)
    for i in word:
        w = weyl_compose(w, simple_reflection(kind, n, i))
    return w


@lru_cache(maxsize=None)
def weyl_group(kind: str, n: int) -> Tuple[WeylElement, ...]:
    """群の全元（長さ、標準被約語の順）"""
    start = identity(n, kind)
    seen = {start.images: start}
    frontier = [start]
    gens = [simple_reflection(kind, n, i) for i in range(1, num_simple(kind, n) + 1)]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                v = weyl_compose(s, w)
                if v.images not in seen:
                    seen[v.images] = v
                    nxt.append(v)
        frontier = nxt
    return tuple(sorted(seen.values(), key=lambda w: (w.length, w.reduced_word)))


def longest_element(kind: str, n: int) -> WeylElement:
    return max(weyl_group(kind, n), key=lambda w: w.length)


def coxeter_order(kind: str, n: int, i: int, j: int) -> int:
    """s_i s_j の位数"""
    x = weyl_compose(simple_reflection(kind, n, i), simple_reflection(kind, n, j))
    w, m = x, 1
    while not w.is_identity():
        w = weyl_compose(w, x)
        m += 1
    return m


@lru_cache(maxsize=None)
def min_coset_reps(n: int, kind: str = 'B') -> Tuple[WeylElement, ...]:
    """W/S_n の最短剰余類代表系（右降下を S_n に持たない元）"""
    reps = []
    for w in weyl_group(kind, n):
        if all(weyl_compose(w, simple_reflection(kind, n, i)).length > w.length
               for i in range(1, n)):
            reps.append(w)
    return tuple(reps)


def coset_chain(n: int) -> List[WeylElement]:
    """e, s_n, s_{n-1}s_n, …, s_1⋯s_n"""
    chain = [identity(n)]
    for start in range(n, 0, -1):
        chain.append(from_word('B', n, list(range(start, n + 1))))
    return chain


def parabolic_decompose(w: WeylElement) -> Tuple[WeylElement, WeylElement]:
    """w = u·a（u は最短代表、a ∈ S_n、長さは加法的）"""
    n = w.rank
    u = w
    a_word: List[int] = []
    while True:
        for i in range(1, n):
            v = weyl_compose(u, simple_reflection(u.kind, n, i))
            if v.length < u.length:
                u = v
                a_word.insert(0, i)
                break
        else:
            break
    return u, from_word('A', n, a_word)


# =============================================================
# ウェイト
# =============================================================

@dataclass(frozen=True)
class Weight:
    """(ε_1 q^{λ_1}, …, ε_n q^{λ_n})"""

    coords: Tuple[Tuple[int, Fraction], ...]

    @classmethod
    def from_exponents(cls, exponents: Sequence[Number], signs: Sequence[int] = None) -> 'Weight':
        if signs is None:
            signs = [1] * len(exponents)
        if len(signs) != len(exponents):
            raise RankMismatchError("符号と指数の個数が一致しません")
        coords = []
        for s, e in zip(signs, exponents):
            if s not in (1, -1):
                raise ConfigurationError(f"符号は ±1: {s}")
            coords.append((s, Fraction(e)))
        return cls(tuple(coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def signs(self) -> Tuple[int, ...]:
        return tuple(s for s, _ in self.coords)

    @property
    def exponents(self) -> Tuple[Fraction, ...]:
        return tuple(e for _, e in self.coords)

    def pair(self, x: Sequence[int]) -> Tuple[int, Fraction]:
        """⟨x, μ⟩ = Π (ε_i q^{λ_i})^{x_i} を (符号, 指数) で返す"""
        if len(x) != self.rank:
            raise RankMismatchError(f"階数が一致しません: {self.rank} と {len(x)}")
        sign, exp = 1, Fraction(0)
        for (s, e), k in zip(self.coords, x):
            if s < 0 and k % 2:
                sign = -sign
            exp += k * e
        return sign, exp

    def value(self, x: Sequence[int], root_index: int) -> LaurentScalar:
        sign, exp = self.pair(x)
        return monomial(root_index, exp, sign)

    def coordinate(self, j: int, root_index: int) -> LaurentScalar:
        s, e = self.coords[j]
        return monomial(root_index, e, s)

    def denominators(self) -> List[Fraction]:
        return list(self.exponents)

    def to_json(self) -> List[str]:
        return [format_coordinate(s, e) for s, e in self.coords]

    def __str__(self):
        return '(' + ', '.join(self.to_json()) + ')'


def format_coordinate(sign: int, exponent: Fraction) -> str:
    prefix = '-' if sign < 0 else ''
    return f"{prefix}q^{exponent}"


def parse_coordinate(token: str) -> Tuple[int, Fraction]:
    """'q^1/2', '-q^0', '4/5'（= q^{4/5}）, '-1/3'（= q^{-1/3}）を解釈"""
    tok = token.strip().replace(' ', '')
    if not tok:
        raise SchemaError("空のウェイト座標")
    if 'q' in tok:
        sign = 1
        if tok.startswith('-'):
            sign, tok = -1, tok[1:]
        elif tok.startswith('+'):
            tok = tok[1:]
        if tok == 'q':
            return sign, Fraction(1)
        if not tok.startswith('q^'):
            raise SchemaError(f"ウェイト座標の形式が不正です: {token!r}")
        body = tok[2:].strip('{}()')
        return sign, to_rational(body)
    return 1, to_rational(tok)


def weight_from_json(payload: Any) -> Weight:
    if not isinstance(payload, (list, tuple)) or not payload:
        raise SchemaError(f"ウェイトの形式が不正です: {payload!r}")
    coords = []
    for item in payload:
        if isinstance(item, (list, tuple)) and len(item) == 2:
            s, e = int(item[0]), to_rational(item[1])
            if s not in (1, -1):
                raise SchemaError(f"符号は ±1: {item!r}")
            coords.append((s, e))
        else:
            coords.append(parse_coordinate(str(item)))
    return Weight(tuple(coords))


def weyl_act(w: WeylElement, nu: Weight) -> Weight:
    """置換と（符号反転位置での）逆数化による作用"""
    if w.rank != nu.rank:
        raise RankMismatchError(f"階数が一致しません: {w.rank} と {nu.rank}")
    out: List[Optional[Tuple[int, Fraction]]] = [None] * w.rank
    for i, v in enumerate(w.images):
        s, e = nu.coords[i]
        out[abs(v) - 1] = (s, e) if v > 0 else (s, -e)
    return Weight(tuple(out))

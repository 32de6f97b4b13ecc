"""q = 1 での有限 Weyl 群の指標

W_n（超八面体群）と S_n の既約指標、部分群 W_1 = ⟨s_n⟩, S_n, W_a × W_b からの誘導指標、
内積による重複度を共役類の列挙で計算する。符号付き置換の規約は root_data と同じ。
"""

import itertools
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .errors import ConfigurationError, SchemaError

logger = logging.getLogger(__name__)

Partition = Tuple[int, ...]
Bipartition = Tuple[Partition, Partition]
ClassKey = Tuple[Tuple[int, int], ...]
ClassFunction = Dict[ClassKey, Fraction]


# =============================================================
# 分割
# =============================================================

@lru_cache(maxsize=None)
def partitions(n: int, max_part: int = None) -> Tuple[Partition, ...]:
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def bipartitions(n: int) -> Tuple[Bipartition, ...]:
    out = []
    for a in range(n, -1, -1):
        for alpha in partitions(a):
            for beta in partitions(n - a):
                out.append((alpha, beta))
    return tuple(out)


def format_partition(p: Partition) -> str:
    return ','.join(str(v) for v in p) if p else '∅'


def format_bipartition(bp: Bipartition) -> str:
    return f"({format_partition(bp[0])} | {format_partition(bp[1])})"


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if text in ('', '-', '∅', '0'):
        return ()
    try:
        parts = tuple(sorted((int(v) for v in text.split(',') if v.strip()), reverse=True))
    except ValueError as e:
        raise SchemaError(f"分割として解釈できません: {text!r}") from e
    if any(v <= 0 for v in parts):
        raise SchemaError(f"分割の成分は正の整数: {text!r}")
    return parts


def parse_label(text: str):
    """'2,1' は S_n の分割、'2|1' は W_n の二重分割"""
    if '|' in text:
        left, right = text.split('|', 1)
        return parse_partition(left.strip('( ')), parse_partition(right.strip(') '))
    return parse_partition(text)


# =============================================================
# S_n の指標（Murnaghan–Nakayama）
# =============================================================

@lru_cache(maxsize=None)
def sn_character(shape: Partition, cycle_type: Partition) -> int:
    """χ^shape(サイクル型 cycle_type)"""
    if sum(shape) != sum(cycle_type):
        raise ConfigurationError(f"サイズが一致しません: {shape}, {cycle_type}")
    if not cycle_type:
        return 1
    r, rest = cycle_type[0], cycle_type[1:]
    length = len(shape)
    beta = [shape[i] + (length - 1 - i) for i in range(length)]
    beads = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beads:
            continue
        sign = (-1) ** sum(1 for c in beads if target < c < b)
        new_beta = sorted((beads - {b}) | {target}, reverse=True)
        k = len(new_beta)
        new_shape = tuple(v - (k - 1 - i) for i, v in enumerate(new_beta))
        new_shape = tuple(v for v in new_shape if v > 0)
        total += sign * sn_character(new_shape, rest)
    return total


# =============================================================
# 符号付き置換と共役類
# =============================================================

def signed_permutations(n: int):
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            yield tuple(p * s for p, s in zip(perm, signs))


def group_order(n: int) -> int:
    return (2 ** n) * math.factorial(n)


def signed_cycle_type(images: Sequence[int]) -> ClassKey:
    """(サイクル長, サイクル内の符号反転数の偶奇) の多重集合"""
    n = len(images)
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        length, flips, i = 0, 0, start
        while not seen[i]:
            seen[i] = True
            v = images[i]
            if v < 0:
                flips += 1
            i = abs(v) - 1
            length += 1
        cycles.append((length, flips % 2))
    return tuple(sorted(cycles, reverse=True))


def underlying_cycle_type(key: ClassKey) -> Partition:
    return tuple(sorted((length for length, _ in key), reverse=True))


def negative_parity(key: ClassKey) -> int:
    return sum(flip for _, flip in key) % 2


@lru_cache(maxsize=None)
def conjugacy_classes(n: int) -> Dict[ClassKey, int]:
    """共役類 → 類の大きさ"""
    sizes: Dict[ClassKey, int] = {}
    for w in signed_permutations(n):
        key = signed_cycle_type(w)
        sizes[key] = sizes.get(key, 0) + 1
    return sizes


# =============================================================
# 類関数
# =============================================================

def inner_product(n: int, chi: ClassFunction, psi: ClassFunction) -> Fraction:
    total = Fraction(0)
    for key, size in conjugacy_classes(n).items():
        total += size * chi.get(key, 0) * psi.get(key, 0)
    return total / group_order(n)


def character_degree(n: int, chi: ClassFunction) -> Fraction:
    return chi[tuple((1, 0) for _ in range(n))]


def induced_character(n: int, subgroup: Sequence[Tuple[int, ...]], phi) -> ClassFunction:
    """Ind_H^{W_n} φ(g) = |W_n| / (|H|·|cl(g)|) Σ_{h ∈ H ∩ cl(g)} φ(h)"""
    sums: Dict[ClassKey, Fraction] = {}
    for h in subgroup:
        key = signed_cycle_type(h)
        sums[key] = sums.get(key, Fraction(0)) + Fraction(phi(h))
    order = group_order(n)
    out: ClassFunction = {}
    for key, size in conjugacy_classes(n).items():
        out[key] = Fraction(order, len(subgroup) * size) * sums.get(key, Fraction(0))
    return out


def _perm_cycle_type(perm: Sequence[int]) -> Partition:
    return underlying_cycle_type(signed_cycle_type([abs(v) for v in perm]))


def _negatives(w: Sequence[int]) -> int:
    return sum(1 for v in w if v < 0)


# --- 部分群 ---

def w1_subgroup(n: int) -> List[Tuple[int, ...]]:
    """W_1 = ⟨s_n⟩（最後の座標の符号反転）"""
    e = tuple(range(1, n + 1))
    s = e[:-1] + (-n,)
    return [e, s]


def sn_subgroup(n: int) -> List[Tuple[int, ...]]:
    return [tuple(p) for p in itertools.permutations(range(1, n + 1))]


def product_subgroup(a: int, b: int) -> List[Tuple[int, ...]]:
    """W_a × W_b（{1..a} と {a+1..a+b} をそれぞれ保つ）"""
    out = []
    for w1 in signed_permutations(a):
        for w2 in signed_permutations(b):
            shifted = tuple(v + a if v > 0 else v - a for v in w2)
            out.append(tuple(w1) + shifted)
    return out


# --- 既約指標 ---

@lru_cache(maxsize=None)
def hyperoctahedral_character(alpha: Partition, beta: Partition) -> Tuple[Tuple[ClassKey, Fraction], ...]:
    """χ_{(α,β)} = Ind_{W_a × W_b}^{W_n}(χ̃_α ⊠ χ̃_β·ε)"""
    a, b = sum(alpha), sum(beta)
    n = a + b

    def phi(h):
        left, right = h[:a], tuple(v - a if v > 0 else v + a for v in h[a:])
        val = 1
        if a:
            val *= sn_character(alpha, _perm_cycle_type(left))
        if b:
            val *= sn_character(beta, _perm_cycle_type(right)) * (-1) ** _negatives(right)
        return val

    chi = induced_character(n, product_subgroup(a, b), phi)
    return tuple(sorted(chi.items()))


def bipartition_character(bp: Bipartition) -> ClassFunction:
    return dict(hyperoctahedral_character(bp[0], bp[1]))


def pullback_character(sigma: Partition, sign_twist: bool) -> ClassFunction:
    """S_n の既約 σ を W_n に引き戻した指標

    sign_twist=False: s_n ↦ +1（T_n ↦ q の q = 1 特殊化）
    sign_twist=True:  s_n ↦ −1（T_n ↦ −1）
    """
    n = sum(sigma)
    out: ClassFunction = {}
    for key in conjugacy_classes(n):
        val = sn_character(sigma, underlying_cycle_type(key))
        if sign_twist and negative_parity(key):
            val = -val
        out[key] = Fraction(val)
    return out


def induced_from_w1(n: int, steinberg: bool) -> ClassFunction:
    """Ind_{W_1}^{W_n} σ0（σ0 = 自明: s_n ↦ 1、Steinberg: s_n ↦ −1）"""
    def phi(h):
        return -1 if steinberg and h[-1] < 0 else 1
    return induced_character(n, w1_subgroup(n), phi)


def induced_from_sn(sigma: Partition) -> ClassFunction:
    n = sum(sigma)
    return induced_character(n, sn_subgroup(n), lambda h: sn_character(sigma, _perm_cycle_type(h)))


def decompose(n: int, chi: ClassFunction) -> Dict[Bipartition, int]:
    """既約指標への分解（重複度 0 は省く）"""
    out: Dict[Bipartition, int] = {}
    for bp in bipartitions(n):
        m = inner_product(n, chi, bipartition_character(bp))
        if m.denominator != 1:
            raise ConfigurationError(f"重複度が整数になりません: {format_bipartition(bp)} {m}")
        if m:
            out[bp] = int(m)
    return out


# =============================================================
# 代表元と S_n 側の分解
# =============================================================

def class_representative(key: ClassKey) -> Tuple[int, ...]:
    """符号付きサイクル型の代表元（各サイクルの末尾で符号反転）"""
    images: List[int] = []
    start = 1
    for length, flip in key:
        for k in range(length):
            nxt = start + (k + 1) % length
            images.append(nxt)
        if flip:
            images[-1] = -images[-1]
        start += length
    return tuple(images)


def cycle_type_representative(cycle_type: Partition) -> Tuple[int, ...]:
    return class_representative(tuple((length, 0) for length in cycle_type))


def sn_class_sizes(n: int) -> Dict[Partition, int]:
    sizes = {}
    for ct in partitions(n):
        z = 1
        for length in set(ct):
            mult = ct.count(length)
            z *= (length ** mult) * math.factorial(mult)
        sizes[ct] = math.factorial(n) // z
    return sizes


def decompose_sn(n: int, chi: Dict[Partition, Fraction]) -> Dict[Partition, int]:
    out: Dict[Partition, int] = {}
    sizes = sn_class_sizes(n)
    for shape in partitions(n):
        total = Fraction(0)
        for ct, size in sizes.items():
            total += size * chi.get(ct, 0) * sn_character(shape, ct)
        m = total / math.factorial(n)
        if m.denominator != 1:
            raise ConfigurationError(f"重複度が整数になりません: {format_partition(shape)} {m}")
        if m:
            out[shape] = int(m)
    return out

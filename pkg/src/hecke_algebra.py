"""Bernstein 表示によるアフィン Hecke 代数 ℋ(𝕢, λ, λ*)

元は正規形 Σ c_{x,w} θ_x T_w（左正規形）で保持する。
積は T_w を標準被約語に分解し、単純鏡映ごとに θ を右へ送って計算する。
交差項 θ_x T_s − T_s θ_{s(x)} と有限部分の積は代数ごとにメモ化する。
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    ConfigurationError,
    DescriptorMismatchError,
    InternalConsistencyError,
    SchemaError,
)
from .root_data import (
    AlgebraDescriptor,
    Lattice,
    Weight,
    WeylElement,
    coxeter_order,
    descriptor_from_json,
    from_word,
    gl_subalgebra,
    identity,
    pairing,
    parabolic_decompose,
    reflect_lattice,
    root_parameter,
    simple_reflection,
    simple_roots,
    weyl_compose,
)
from .scalars import LaurentScalar, Number, q_power

logger = logging.getLogger(__name__)

ThetaPoly = Dict[Lattice, LaurentScalar]
Terms = Dict[Tuple[Lattice, WeylElement], LaurentScalar]
RightTerms = Dict[Tuple[WeylElement, Lattice], LaurentScalar]


def _acc(target: Dict, key, value: LaurentScalar) -> None:
    cur = target.get(key)
    new = value if cur is None else cur + value
    if new.is_zero():
        target.pop(key, None)
    else:
        target[key] = new


def _add_lattice(x: Lattice, y: Lattice) -> Lattice:
    return tuple(a + b for a, b in zip(x, y))


def _poly_mul(p1: ThetaPoly, p2: ThetaPoly) -> ThetaPoly:
    out: ThetaPoly = {}
    for x, c1 in p1.items():
        for y, c2 in p2.items():
            _acc(out, _add_lattice(x, y), c1 * c2)
    return out


def _divide_by_binomial(numer: ThetaPoly, beta: Lattice) -> ThetaPoly:
    """numer / (θ_β − 1)（割り切れることを検証する）

    ℤβ の剰余類ごとに一変数多項式の組立除法を行う。
    """
    p = next(i for i, c in enumerate(beta) if c)
    b = beta[p]
    groups: Dict[Lattice, Dict[int, LaurentScalar]] = {}
    for z, c in numer.items():
        m = z[p] // b
        r = tuple(zi - m * bi for zi, bi in zip(z, beta))
        groups.setdefault(r, {})[m] = c

    out: ThetaPoly = {}
    for r, coeffs in groups.items():
        lo, hi = min(coeffs), max(coeffs)
        running: Optional[LaurentScalar] = None
        for m in range(hi, lo - 1, -1):
            c = coeffs.get(m)
            if c is not None:
                running = c if running is None else running + c
            if running is None:
                continue
            if m > lo:
                if not running.is_zero():
                    out[tuple(ri + (m - 1) * bi for ri, bi in zip(r, beta))] = running
            elif not running.is_zero():
                raise InternalConsistencyError(
                    f"θ_β − 1 (β={beta}) で割り切れません: 剰余類 {r} の余り {running}"
                )
    return out


# =============================================================
# 元
# =============================================================

@dataclass(frozen=True, eq=False)
class HeckeElement:
    """Σ c_{x,w} θ_x T_w"""

    algebra: AlgebraDescriptor
    terms: Mapping[Tuple[Lattice, WeylElement], LaurentScalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: v for k, v in self.terms.items() if not v.is_zero()}
        object.__setattr__(self, 'terms', clean)

    # --- 問い合わせ ---

    def is_zero(self) -> bool:
        return not self.terms

    def in_theta_part(self) -> bool:
        """𝒜（全ての w が単位元）に属するか"""
        return all(w.is_identity() for _, w in self.terms)

    def theta_poly(self) -> ThetaPoly:
        if not self.in_theta_part():
            raise ConfigurationError("𝒜 の元ではありません")
        return {x: c for (x, _), c in self.terms.items()}

    def coefficient(self, x: Sequence[int], w: WeylElement) -> LaurentScalar:
        w = normalize_weyl(self.algebra, w)
        return self.terms.get((tuple(x), w), LaurentScalar.zero(self.algebra.root_index))

    # --- 算術 ---

    def _check(self, other: 'HeckeElement') -> None:
        if other.algebra != self.algebra:
            raise DescriptorMismatchError(
                f"異なる代数の元です: {self.algebra.label()} と {other.algebra.label()}"
            )

    def _scale(self, c: LaurentScalar) -> 'HeckeElement':
        return HeckeElement(self.algebra, {k: v * c for k, v in self.terms.items()})

    def _coerce_scalar(self, other: Any) -> Optional[LaurentScalar]:
        if isinstance(other, LaurentScalar):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentScalar.constant(self.algebra.root_index, other)
        return None

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            c = self._coerce_scalar(other)
            if c is None:
                return NotImplemented
            other = scalar_element(self.algebra, c)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return HeckeElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return HeckeElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, HeckeElement):
            c = self._coerce_scalar(other)
            if c is None:
                return NotImplemented
            other = scalar_element(self.algebra, c)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return hecke_mul(self, other)
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self._scale(c)

    def __rmul__(self, other):
        c = self._coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self._scale(c)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = one_element(self.algebra)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.algebra == other.algebra and dict(self.terms) == dict(other.terms)

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for (x, w), c in sorted(self.terms.items(), key=lambda kv: _term_key(kv[0])):
            basis = []
            if any(x):
                basis.append(f"θ{list(x)}")
            if not w.is_identity():
                basis.append(f"T[{w}]")
            parts.append(f"({c})" + ''.join(basis))
        return ' + '.join(parts)


def _term_key(key: Tuple[Lattice, WeylElement]):
    x, w = key
    return (w.length, w.reduced_word, x)


def normalize_weyl(descriptor: AlgebraDescriptor, w: WeylElement) -> WeylElement:
    """w を代数の Weyl 群の元として解釈し直す"""
    if w.rank != descriptor.n:
        raise DescriptorMismatchError(f"階数が一致しません: {w.rank} と {descriptor.n}")
    kind = descriptor.weyl_kind
    if w.kind == kind:
        return w
    flips = sum(1 for v in w.images if v < 0)
    if flips == 0:
        return w.as_kind(kind)
    if kind == 'B' or (kind == 'D' and flips % 2 == 0):
        return w.as_kind(kind)
    raise DescriptorMismatchError(f"{w} は {descriptor.label()} の Weyl 群に属しません")


# =============================================================
# 乗算コンテキスト（代数ごとのメモ表）
# =============================================================

class HeckeMultiplier:
    """一つの記述子に対する乗算エンジン

    メモ表は読み取りはロックなし、挿入のみ self._lock で直列化する。
    """

    def __init__(self, descriptor: AlgebraDescriptor):
        self.descriptor = descriptor
        self.n = descriptor.n
        self.kind = descriptor.weyl_kind
        self.root_index = descriptor.root_index
        self.roots = simple_roots(descriptor)
        self.reflections = [simple_reflection(self.kind, self.n, i)
                            for i in range(1, len(self.roots) + 1)]
        self.identity = identity(self.n, self.kind)
        self._one = LaurentScalar.one(self.root_index)
        self._lock = threading.Lock()
        self._cross: Dict[Tuple[int, Lattice], ThetaPoly] = {}
        self._finite: Dict[Tuple[WeylElement, WeylElement], Dict[WeylElement, LaurentScalar]] = {}
        self._t_theta: Dict[Tuple[WeylElement, Lattice], Terms] = {}
        self._theta_t: Dict[Tuple[Lattice, WeylElement], RightTerms] = {}

    def _store(self, table: Dict, key, value):
        with self._lock:
            return table.setdefault(key, value)

    def cache_sizes(self) -> Dict[str, int]:
        return {
            'cross': len(self._cross),
            'finite': len(self._finite),
            't_theta': len(self._t_theta),
            'theta_t': len(self._theta_t),
        }

    # --- 交差項 ---

    def cross(self, i: int, x: Lattice) -> ThetaPoly:
        """θ_x T_i − T_i θ_{s_i(x)} ∈ 𝒜"""
        key = (i, x)
        cached = self._cross.get(key)
        if cached is not None:
            return cached
        root = self.roots[i - 1]
        if pairing(x, root.coroot) == 0:
            return self._store(self._cross, key, {})
        sx = reflect_lattice(root, x)
        diff = {x: self._one, sx: -self._one}
        factor: ThetaPoly = {}
        if not root.doubled:
            lam = root_parameter(self.descriptor, i)
            _acc(factor, root.root, q_power(self.root_index, lam) - 1)
            divisor = root.root
        else:
            a = q_power(self.root_index, self.descriptor.m_plus)
            b = q_power(self.root_index, self.descriptor.m_minus)
            divisor = tuple(2 * c for c in root.root)
            _acc(factor, divisor, a * b - 1)
            _acc(factor, root.root, a - b)
        result = _divide_by_binomial(_poly_mul(diff, factor), divisor) if factor else {}
        return self._store(self._cross, key, result)

    # --- 有限 Hecke 代数 ---

    def finite_left(self, i: int, w: WeylElement) -> Dict[WeylElement, LaurentScalar]:
        """T_i T_w"""
        sw = weyl_compose(self.reflections[i - 1], w)
        if sw.length > w.length:
            return {sw: self._one}
        q = q_power(self.root_index, root_parameter(self.descriptor, i))
        out: Dict[WeylElement, LaurentScalar] = {}
        _acc(out, w, q - 1)
        _acc(out, sw, q)
        return out

    def finite_mul(self, u: WeylElement, v: WeylElement) -> Dict[WeylElement, LaurentScalar]:
        """T_u T_v"""
        key = (u, v)
        cached = self._finite.get(key)
        if cached is not None:
            return cached
        result: Dict[WeylElement, LaurentScalar] = {v: self._one}
        for i in reversed(u.reduced_word):
            nxt: Dict[WeylElement, LaurentScalar] = {}
            for w, c in result.items():
                for w2, c2 in self.finite_left(i, w).items():
                    _acc(nxt, w2, c * c2)
            result = nxt
        return self._store(self._finite, key, result)

    # --- T_w θ_y と θ_x T_w ---

    def t_theta(self, w: WeylElement, y: Lattice) -> Terms:
        """T_w θ_y の左正規形"""
        if w.is_identity():
            return {(y, w): self._one}
        key = (w, y)
        cached = self._t_theta.get(key)
        if cached is not None:
            return cached
        i = w.reduced_word[0]
        root = self.roots[i - 1]
        rest = weyl_compose(self.reflections[i - 1], w)
        out: Terms = {}
        # T_s θ_z = θ_{s(z)} T_s − (θ_{s(z)} T_s − T_s θ_z)
        for (z, u), c in self.t_theta(rest, y).items():
            sz = reflect_lattice(root, z)
            for v, c2 in self.finite_left(i, u).items():
                _acc(out, (sz, v), c * c2)
            for z2, c3 in self.cross(i, sz).items():
                _acc(out, (z2, u), -(c * c3))
        return self._store(self._t_theta, key, out)

    def theta_t(self, x: Lattice, w: WeylElement) -> RightTerms:
        """θ_x T_w の右正規形 Σ c T_v θ_z"""
        if w.is_identity():
            return {(w, x): self._one}
        key = (x, w)
        cached = self._theta_t.get(key)
        if cached is not None:
            return cached
        i = w.reduced_word[0]
        root = self.roots[i - 1]
        rest = weyl_compose(self.reflections[i - 1], w)
        out: RightTerms = {}
        # θ_x T_s = T_s θ_{s(x)} + (θ_x T_s − T_s θ_{s(x)})
        sx = reflect_lattice(root, x)
        for (v, z), c in self.theta_t(sx, rest).items():
            for v2, c2 in self.finite_left(i, v).items():
                _acc(out, (v2, z), c * c2)
        for z, c in self.cross(i, x).items():
            for k2, c2 in self.theta_t(z, rest).items():
                _acc(out, k2, c * c2)
        return self._store(self._theta_t, key, out)

    # --- 積 ---

    def multiply(self, t1: Mapping, t2: Mapping) -> Terms:
        out: Terms = {}
        for (x, w), c1 in t1.items():
            for (y, v), c2 in t2.items():
                c12 = c1 * c2
                for (z, u), c3 in self.t_theta(w, y).items():
                    xz = _add_lattice(x, z)
                    c123 = c12 * c3
                    for u2, c4 in self.finite_mul(u, v).items():
                        _acc(out, (xz, u2), c123 * c4)
        return out


_MULTIPLIERS: Dict[AlgebraDescriptor, HeckeMultiplier] = {}
_MULTIPLIERS_LOCK = threading.Lock()


def multiplier(descriptor: AlgebraDescriptor) -> HeckeMultiplier:
    """記述子ごとの乗算エンジン（プロセス内で共有）"""
    ctx = _MULTIPLIERS.get(descriptor)
    if ctx is None:
        with _MULTIPLIERS_LOCK:
            ctx = _MULTIPLIERS.get(descriptor)
            if ctx is None:
                ctx = HeckeMultiplier(descriptor)
                _MULTIPLIERS[descriptor] = ctx
                logger.debug(f"乗算エンジンを作成: {descriptor.label()}")
    return ctx


def clear_caches() -> None:
    with _MULTIPLIERS_LOCK:
        _MULTIPLIERS.clear()


# =============================================================
# 構成子
# =============================================================

def scalar_element(descriptor: AlgebraDescriptor, c: Union[LaurentScalar, Number]) -> HeckeElement:
    if not isinstance(c, LaurentScalar):
        c = LaurentScalar.constant(descriptor.root_index, c)
    e = identity(descriptor.n, descriptor.weyl_kind)
    return HeckeElement(descriptor, {(tuple([0] * descriptor.n), e): c})


def one_element(descriptor: AlgebraDescriptor) -> HeckeElement:
    return scalar_element(descriptor, 1)


def zero_element(descriptor: AlgebraDescriptor) -> HeckeElement:
    return HeckeElement(descriptor, {})


def theta(descriptor: AlgebraDescriptor, x: Sequence[int]) -> HeckeElement:
    x = tuple(int(v) for v in x)
    if len(x) != descriptor.n:
        raise DescriptorMismatchError(f"格子ベクトルの長さが {descriptor.n} ではありません: {x}")
    e = identity(descriptor.n, descriptor.weyl_kind)
    return HeckeElement(descriptor, {(x, e): LaurentScalar.one(descriptor.root_index)})


def theta_unit(descriptor: AlgebraDescriptor, j: int, power: int = 1) -> HeckeElement:
    """θ_{ε_j}^{power}（j は 1 始まり）"""
    x = [0] * descriptor.n
    x[j - 1] = power
    return theta(descriptor, x)


def T(descriptor: AlgebraDescriptor, w: Union[int, WeylElement]) -> HeckeElement:
    """T_w（整数なら単純鏡映 s_i）"""
    if isinstance(w, int):
        w = simple_reflection(descriptor.weyl_kind, descriptor.n, w)
    w = normalize_weyl(descriptor, w)
    zero = tuple([0] * descriptor.n)
    return HeckeElement(descriptor, {(zero, w): LaurentScalar.one(descriptor.root_index)})


def T_word(descriptor: AlgebraDescriptor, word: Sequence[int]) -> HeckeElement:
    return T(descriptor, from_word(descriptor.weyl_kind, descriptor.n, word))


def theta_poly_element(descriptor: AlgebraDescriptor, poly: Mapping[Lattice, LaurentScalar]) -> HeckeElement:
    e = identity(descriptor.n, descriptor.weyl_kind)
    return HeckeElement(descriptor, {(tuple(x), e): c for x, c in poly.items()})


def generators(descriptor: AlgebraDescriptor) -> Dict[str, HeckeElement]:
    """'T1'..'Tr', 'theta1'..'thetan' とその逆元"""
    gens: Dict[str, HeckeElement] = {}
    for i in range(1, descriptor.num_simple + 1):
        gens[f"T{i}"] = T(descriptor, i)
    for j in range(1, descriptor.n + 1):
        gens[f"theta{j}"] = theta_unit(descriptor, j)
        gens[f"theta{j}^-1"] = theta_unit(descriptor, j, -1)
    return gens


# =============================================================
# 演算
# =============================================================

def hecke_mul(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    """正規形での積"""
    h1._check(h2)
    ctx = multiplier(h1.algebra)
    return HeckeElement(h1.algebra, ctx.multiply(h1.terms, h2.terms))


def commutator(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    return hecke_mul(h1, h2) - hecke_mul(h2, h1)


def cross_term(descriptor: AlgebraDescriptor, i: int, x: Sequence[int]) -> HeckeElement:
    """θ_x T_{s_i} − T_{s_i} θ_{s_i(x)}（𝒜 の元）"""
    if not 1 <= i <= descriptor.num_simple:
        raise ConfigurationError(f"単純ルートの番号が範囲外です: {i}")
    x = tuple(int(v) for v in x)
    return theta_poly_element(descriptor, multiplier(descriptor).cross(i, x))


def to_right_normal_form(h: HeckeElement) -> RightTerms:
    """h = Σ c_{w,x} T_w θ_x"""
    ctx = multiplier(h.algebra)
    out: RightTerms = {}
    for (x, w), c in h.terms.items():
        for key, c2 in ctx.theta_t(x, w).items():
            _acc(out, key, c * c2)
    return out


def from_right_normal_form(descriptor: AlgebraDescriptor, right: Mapping) -> HeckeElement:
    ctx = multiplier(descriptor)
    out: Terms = {}
    for (w, x), c in right.items():
        w = normalize_weyl(descriptor, w)
        for key, c2 in ctx.t_theta(w, tuple(x)).items():
            _acc(out, key, c * c2)
    return HeckeElement(descriptor, out)


def embed_from_gl(descriptor: AlgebraDescriptor, h: HeckeElement) -> HeckeElement:
    """ℋ_A の元を ℋ_B（または ℋ_D）の元と見なす"""
    if h.algebra != gl_subalgebra(descriptor):
        raise DescriptorMismatchError(
            f"{h.algebra.label()} は {descriptor.label()} の GL 部分代数ではありません"
        )
    kind = descriptor.weyl_kind
    return HeckeElement(descriptor, {(x, w.as_kind(kind)): c for (x, w), c in h.terms.items()})


def parabolic_normal_form(h: HeckeElement) -> Dict[WeylElement, HeckeElement]:
    """h = Σ_u T_u · h_u（u は W/S_n の最短代表、h_u ∈ ℋ_A）"""
    desc = h.algebra
    if desc.family == 'A':
        return {identity(desc.n, 'A'): h} if not h.is_zero() else {}
    gl = gl_subalgebra(desc)
    ctx_a = multiplier(gl)
    parts: Dict[WeylElement, Terms] = {}
    for (w, x), c in to_right_normal_form(h).items():
        u, a = parabolic_decompose(w)
        bucket = parts.setdefault(u, {})
        for key, c2 in ctx_a.t_theta(a, x).items():
            _acc(bucket, key, c * c2)
    return {u: HeckeElement(gl, terms) for u, terms in parts.items() if terms}


def reassemble_parabolic(descriptor: AlgebraDescriptor, parts: Mapping[WeylElement, HeckeElement]) -> HeckeElement:
    total = zero_element(descriptor)
    for u, h_u in parts.items():
        total = total + hecke_mul(T(descriptor, u), embed_from_gl(descriptor, h_u))
    return total


def apply_weyl_to_theta(w: WeylElement, f: HeckeElement) -> HeckeElement:
    """𝒜 への W の作用 θ_x ↦ θ_{w(x)}"""
    desc = f.algebra
    w = normalize_weyl(desc, w)
    return theta_poly_element(desc, {w.act(x): c for x, c in f.theta_poly().items()})


def evaluate_at_weight(f: HeckeElement, mu: Weight) -> LaurentScalar:
    """𝒜 の元をウェイト μ で評価（θ_x ↦ ⟨x, μ⟩）"""
    desc = f.algebra
    total = LaurentScalar.zero(desc.root_index)
    for x, c in f.theta_poly().items():
        total = total + c * mu.value(x, desc.root_index)
    return total


# =============================================================
# 𝒢(α)、絡作用素 R、Ω
# =============================================================

def g_factors(descriptor: AlgebraDescriptor, i: int) -> Tuple[HeckeElement, HeckeElement]:
    """𝒢(α_i) = 分子 / 分母 の (分子, 分母)（どちらも 𝒜 の元）"""
    root = simple_roots(descriptor)[i - 1]
    n_idx = descriptor.root_index
    alpha = theta(descriptor, root.root)
    if not root.doubled:
        lam = q_power(n_idx, root_parameter(descriptor, i))
        return alpha * lam - 1, alpha - 1
    a = q_power(n_idx, descriptor.m_plus)
    b = q_power(n_idx, descriptor.m_minus)
    two_alpha = theta(descriptor, tuple(2 * c for c in root.root))
    return (alpha * a - 1) * (alpha * b + 1), two_alpha - 1


def g_numerator_factors(descriptor: AlgebraDescriptor, i: int) -> List[Tuple[str, HeckeElement]]:
    """𝒢(α_i) の分子の一次因子（名前付き）"""
    root = simple_roots(descriptor)[i - 1]
    n_idx = descriptor.root_index
    alpha = theta(descriptor, root.root)
    if not root.doubled:
        lam = root_parameter(descriptor, i)
        return [(f"θ_α q^{lam} − 1", alpha * q_power(n_idx, lam) - 1)]
    mp, mm = descriptor.m_plus, descriptor.m_minus
    return [
        (f"θ_α q^{mp} − 1", alpha * q_power(n_idx, mp) - 1),
        (f"θ_α q^{mm} + 1", alpha * q_power(n_idx, mm) + 1),
    ]


def intertwiner_simple(descriptor: AlgebraDescriptor, i: int) -> HeckeElement:
    """R_{α_i} = (T_i + 1)·分母 − 分子"""
    numer, denom = g_factors(descriptor, i)
    return hecke_mul(T(descriptor, i) + 1, denom) - numer


def intertwiner_R(descriptor: AlgebraDescriptor, w: WeylElement) -> HeckeElement:
    """R_w を標準被約語に沿った積として構成"""
    w = normalize_weyl(descriptor, w)
    result = one_element(descriptor)
    for i in w.reduced_word:
        result = hecke_mul(result, intertwiner_simple(descriptor, i))
    return result


def intertwiner_square(descriptor: AlgebraDescriptor, i: int) -> HeckeElement:
    """R_{α_i}² の閉じた形（𝒜 の元）"""
    root = simple_roots(descriptor)[i - 1]
    n_idx = descriptor.root_index
    alpha = theta(descriptor, root.root)
    alpha_inv = theta(descriptor, tuple(-c for c in root.root))
    if not root.doubled:
        lam = q_power(n_idx, root_parameter(descriptor, i))
        return (alpha_inv * -1 + lam) * (alpha * -1 + lam)
    a = q_power(n_idx, descriptor.m_plus)
    b = q_power(n_idx, descriptor.m_minus)
    return (alpha * -1 + a) * (alpha + b) * (alpha_inv * -1 + a) * (alpha_inv + b)


def make_omega(descriptor: AlgebraDescriptor) -> HeckeElement:
    """Ω = Π_i (q^{m₊}−θ_i)(q^{m₋}+θ_i)(q^{m₊}−θ_i^{-1})(q^{m₋}+θ_i^{-1})"""
    if descriptor.family != 'B':
        raise ConfigurationError(f"Ω は B 型の記述子でのみ定義します: {descriptor.label()}")
    n_idx = descriptor.root_index
    a = q_power(n_idx, descriptor.m_plus)
    b = q_power(n_idx, descriptor.m_minus)
    omega = one_element(descriptor)
    for j in range(1, descriptor.n + 1):
        th = theta_unit(descriptor, j)
        th_inv = theta_unit(descriptor, j, -1)
        omega = omega * (th * -1 + a) * (th + b) * (th_inv * -1 + a) * (th_inv + b)
    return omega


def braid_relation(descriptor: AlgebraDescriptor, i: int, j: int,
                   elements: Mapping[int, HeckeElement] = None) -> Tuple[HeckeElement, HeckeElement]:
    """長さ m_ij の交代積 (x_i x_j x_i …, x_j x_i x_j …)"""
    m = coxeter_order(descriptor.weyl_kind, descriptor.n, i, j)
    if elements is None:
        elements = {k: T(descriptor, k) for k in (i, j)}
    lhs = one_element(descriptor)
    rhs = one_element(descriptor)
    for k in range(m):
        lhs = hecke_mul(lhs, elements[i] if k % 2 == 0 else elements[j])
        rhs = hecke_mul(rhs, elements[j] if k % 2 == 0 else elements[i])
    return lhs, rhs


# =============================================================
# ワイヤ形式
# =============================================================

def hecke_element_to_json(h: HeckeElement) -> Dict[str, Any]:
    terms = []
    for (x, w), c in sorted(h.terms.items(), key=lambda kv: _term_key(kv[0])):
        terms.append({'x': list(x), 'w': list(w.reduced_word), 'c': c.to_json()})
    return {'algebra': h.algebra.to_json(), 'terms': terms}


def hecke_element_from_json(payload: Any, descriptor: AlgebraDescriptor = None) -> HeckeElement:
    if isinstance(payload, list):
        records = payload
    elif isinstance(payload, dict) and 'terms' in payload:
        records = payload['terms']
        if descriptor is None and 'algebra' in payload:
            descriptor = descriptor_from_json(payload['algebra'])
    else:
        raise SchemaError(f"元の形式が不正です: {payload!r}")
    if descriptor is None:
        raise SchemaError("代数記述子がありません")
    out: Terms = {}
    for rec in records:
        if not isinstance(rec, dict) or not {'x', 'w', 'c'} <= set(rec):
            raise SchemaError(f"項の形式が不正です: {rec!r}")
        x = tuple(int(v) for v in rec['x'])
        if len(x) != descriptor.n:
            raise SchemaError(f"x の長さが {descriptor.n} ではありません: {rec!r}")
        try:
            w = from_word(descriptor.weyl_kind, descriptor.n, [int(i) for i in rec['w']])
        except ConfigurationError as e:
            raise SchemaError(f"語が不正です: {rec['w']!r}") from e
        c = LaurentScalar.from_json(rec['c'], descriptor.root_index)
        _acc(out, (x, w), c)
    return HeckeElement(descriptor, out)

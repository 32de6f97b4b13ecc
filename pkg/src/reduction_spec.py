"""実正中心指標への帰着データと特殊化辞書

- 半単純元 s = (ε_1 q^{λ_1}, …) の極分解 s = s_e s_h
- 中心化群のデータ R(s), Δ(s), W(s), 因子分解と λ_s
- (𝕢₀, 𝕢₁, 𝕢₂) の名前付き特殊化
- ℋ(SO(2n)) ↪ ℋ_B(0,0) の埋め込み（Clifford 理論の橋渡し）と D 型の実験
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import ConfigurationError, MisuseError, SchemaError
from .hecke_algebra import (
    HeckeElement,
    hecke_mul,
    multiplier,
    one_element,
    theta_poly_element,
    theta_unit,
    T,
)
from .linalg import EchelonSpan, cyclic_span, matrices_equal, split_by_subspace
from .modules_fd import (
    FDModule,
    build_module,
    delta_twist,
    induce_from_A,
    rescale_module,
    restrict_module,
)
from .reducibility import (
    DEFAULT_SAMPLE_T0S,
    burnside_irreducible,
    central_character,
    module_weights,
    overlap_experiment,
    verify_certificate,
)
from .root_data import (
    AlgebraDescriptor,
    Lattice,
    Weight,
    WeylElement,
    coxeter_order,
    format_coordinate,
    identity,
    make_descriptor,
    min_coset_reps,
    reflect_lattice,
    simple_roots,
    with_parameters,
)
from .scalars import Number, q_power

logger = logging.getLogger(__name__)


# =============================================================
# 半単純元と極分解
# =============================================================

@dataclass(frozen=True)
class SemisimplePoint:
    """s = (ε_1 q^{λ_1}, …, ε_n q^{λ_n}) とパラメータ (m₁, m₂)

    a = (s, −q^{m₁}, q^{m₂}, q) の規約。q は形式的。
    """

    signs: Tuple[int, ...]
    exponents: Tuple[Fraction, ...]
    m1: Optional[Fraction] = None
    m2: Optional[Fraction] = None

    def __post_init__(self):
        if len(self.signs) != len(self.exponents):
            raise SchemaError("符号と指数の個数が一致しません")
        if any(s not in (1, -1) for s in self.signs):
            raise SchemaError(f"符号は ±1: {self.signs}")

    @classmethod
    def create(cls, signs: Sequence[int], exponents: Sequence[Number],
               m1: Number = None, m2: Number = None) -> 'SemisimplePoint':
        return cls(
            tuple(int(s) for s in signs),
            tuple(Fraction(e) for e in exponents),
            Fraction(m1) if m1 is not None else None,
            Fraction(m2) if m2 is not None else None,
        )

    @property
    def n(self) -> int:
        return len(self.signs)

    def weight(self) -> Weight:
        return Weight(tuple(zip(self.signs, self.exponents)))

    def to_json(self) -> Dict[str, Any]:
        payload = {
            'signs': list(self.signs),
            'exponents': [str(e) for e in self.exponents],
            'point': [format_coordinate(s, e) for s, e in zip(self.signs, self.exponents)],
        }
        if self.m1 is not None:
            payload['m1'] = str(self.m1)
        if self.m2 is not None:
            payload['m2'] = str(self.m2)
        return payload


def polar_decompose(s: SemisimplePoint) -> Tuple[SemisimplePoint, SemisimplePoint]:
    """(s_e, s_h): s_e は符号だけ、s_h は指数だけを持つ"""
    zero = tuple(Fraction(0) for _ in s.signs)
    ones = tuple(1 for _ in s.signs)
    s_e = SemisimplePoint(s.signs, zero, s.m1, s.m2)
    s_h = SemisimplePoint(ones, s.exponents, s.m1, s.m2)
    return s_e, s_h


def recombine(s_e: SemisimplePoint, s_h: SemisimplePoint) -> SemisimplePoint:
    if s_e.n != s_h.n:
        raise ConfigurationError("階数が一致しません")
    signs = tuple(a * b for a, b in zip(s_e.signs, s_h.signs))
    exps = tuple(a + b for a, b in zip(s_e.exponents, s_h.exponents))
    return SemisimplePoint(signs, exps, s_e.m1, s_e.m2)


# =============================================================
# 中心化群のデータ
# =============================================================

def _root(n: int, i: int, j: int = None, sign: int = -1) -> Lattice:
    v = [0] * n
    v[i] = 1
    if j is not None:
        v[j] = sign
    return tuple(v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def reflect_root(beta: Lattice, alpha: Lattice) -> Lattice:
    """s_β(α) = α − 2(α, β)/(β, β)·β"""
    k = Fraction(2 * _dot(alpha, beta), _dot(beta, beta))
    return tuple(int(a - k * b) for a, b in zip(alpha, beta))


def _root_reflection(kind: str, beta: Lattice) -> WeylElement:
    n = len(beta)
    images = []
    for i in range(n):
        image = reflect_root(beta, _root(n, i))
        j = next(k for k, v in enumerate(image) if v)
        images.append((j + 1) * image[j])
    return WeylElement(tuple(images), kind)


@dataclass
class CentralizerBlock:
    label: str
    type: str
    hecke_type: str
    indices: Tuple[int, ...]
    sign: int
    lam: Fraction
    hyperbolic: Tuple[Fraction, ...]

    @property
    def rank(self) -> int:
        return len(self.indices)

    def to_json(self) -> Dict[str, Any]:
        payload = {
            'label': self.label,
            'type': self.type,
            'hecke_type': self.hecke_type,
            'indices': [i + 1 for i in self.indices],
            'rank': self.rank,
            'sign': self.sign,
            'lambda_s': str(self.lam),
            's_h': [format_coordinate(1, e) for e in self.hyperbolic],
        }
        if self.type == 'C':
            payload['parameters'] = ['s_h', str(self.sign), f"q^{self.lam}", 'q']
        return payload


@dataclass
class CentralizerDatum:
    """R(s), Δ(s), W(s) の生成元、因子分解、λ_s"""

    point: SemisimplePoint
    family: str
    roots: List[Lattice]
    basis: List[Lattice]
    weyl_generators: List[WeylElement]
    blocks: List[CentralizerBlock]
    lambda_s: Dict[Lattice, Fraction]
    lambda_star_s: Dict[Lattice, Fraction]

    def factor_labels(self) -> List[str]:
        return [b.label for b in self.blocks]

    def closed_under_reflections(self) -> bool:
        roots = set(self.roots)
        return all(reflect_root(b, a) in roots for a in self.roots for b in self.roots)

    def lambda_invariant(self) -> bool:
        return all(self.lambda_s[reflect_root(b, a)] == self.lambda_s[a]
                   for a in self.roots for b in self.basis)

    def to_json(self) -> Dict[str, Any]:
        return {
            'point': self.point.to_json(),
            'family': self.family,
            'roots': len(self.roots),
            'basis': [list(a) for a in self.basis],
            'weyl_generators': [str(w) for w in self.weyl_generators],
            'blocks': [b.to_json() for b in self.blocks],
            'lambda_s': {_root_label(a): str(v) for a, v in sorted(self.lambda_s.items())
                         if a in self.basis},
        }


def _root_label(alpha: Lattice) -> str:
    parts = []
    for i, c in enumerate(alpha):
        if c:
            sign = '-' if c < 0 else ('+' if parts else '')
            coeff = '' if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{coeff}e{i + 1}")
    return ''.join(parts)


def _ambient_roots(family: str, n: int) -> List[Lattice]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for a in (_root(n, i, j, -1), _root(n, i, j, 1)):
                if family == 'A' and a[j] == 1:
                    continue
                out.append(a)
                out.append(tuple(-v for v in a))
        if family == 'B':
            out.append(_root(n, i))
            out.append(tuple(-v for v in _root(n, i)))
    return out


def _fixes_signs(alpha: Lattice, signs: Sequence[int]) -> bool:
    """r_α(s_e) = s_e（符号だけの点への鏡映作用）"""
    support = [i for i, v in enumerate(alpha) if v]
    if len(support) == 1:
        return True
    i, j = support
    return signs[i] == signs[j]


def centralizer_datum(s: SemisimplePoint, m1: Number = None, m2: Number = None,
                      family: str = 'B') -> CentralizerDatum:
    """R(s) = {α ∈ R : r_α(s_e) = s_e} と λ_s

    Args:
        s: B_n トーラスの規約での半単純元
        m1, m2: a = (s, −q^{m₁}, q^{m₂}, q)。省略時は s に載っている値
        family: 'B'（既定）または 'A'（GL のみへの帰着）
    """
    family = family.upper()
    if family not in ('A', 'B'):
        raise ConfigurationError(f"centralizer_datum は A か B: {family}")
    m1 = Fraction(m1 if m1 is not None else (s.m1 if s.m1 is not None else 0))
    m2 = Fraction(m2 if m2 is not None else (s.m2 if s.m2 is not None else 0))
    n = s.n
    signs = s.signs

    roots = [a for a in _ambient_roots(family, n) if _fixes_signs(a, signs)]

    def lam(alpha: Lattice) -> Fraction:
        support = [i for i, v in enumerate(alpha) if v]
        if len(support) == 2:
            return Fraction(1)
        return m2 if signs[support[0]] == 1 else m1

    lambda_s = {a: lam(a) for a in roots}
    lambda_star_s = dict(lambda_s)

    blocks: List[CentralizerBlock] = []
    basis: List[Lattice] = []
    for sign in (-1, 1):
        idx = tuple(i for i in range(n) if signs[i] == sign)
        if not idx:
            continue
        for a, b in zip(idx, idx[1:]):
            basis.append(_root(n, a, b, -1))
        hyper = tuple(s.exponents[i] for i in idx)
        if family == 'B':
            basis.append(_root(n, idx[-1]))
            block_lam = m2 if sign == 1 else m1
            blocks.append(CentralizerBlock(f"Sp({2 * len(idx)})", 'C', 'B', idx, sign, block_lam, hyper))
        else:
            blocks.append(CentralizerBlock(f"GL({len(idx)})", 'A', 'A', idx, sign, Fraction(1), hyper))

    kind = 'B' if family == 'B' else 'A'
    gens = [_root_reflection(kind, a) for a in basis]
    logger.debug(f"中心化群: s={s.to_json()['point']} blocks={[b.label for b in blocks]}")
    return CentralizerDatum(s, family, roots, basis, gens, blocks, lambda_s, lambda_star_s)


# =============================================================
# 特殊化辞書
# =============================================================

# 𝕢 は (符号, q の指数)
QTriple = Tuple[Tuple[int, Fraction], Tuple[int, Fraction], Tuple[int, Fraction]]

SPECIALIZATIONS = (
    'three-parameter-C_n',
    'SO(2n+1)-two-param',
    'Sp(2n)-two-param',
    'SO(2n)/O(2n)',
    'H_B(0)',
)

_ALIASES = {
    'three-parameter': 'three-parameter-C_n',
    'c_n': 'three-parameter-C_n',
    'so(2n+1)': 'SO(2n+1)-two-param',
    'so2n1': 'SO(2n+1)-two-param',
    'sp(2n)': 'Sp(2n)-two-param',
    'sp2n': 'Sp(2n)-two-param',
    'o(2n)': 'SO(2n)/O(2n)',
    'so(2n)': 'SO(2n)/O(2n)',
    'o2n': 'SO(2n)/O(2n)',
    'h_b(0)': 'H_B(0)',
    'hb0': 'H_B(0)',
}


def _resolve_name(name: str) -> str:
    if name in SPECIALIZATIONS:
        return name
    key = _ALIASES.get(name.lower())
    if key is None:
        raise SchemaError(f"未知の特殊化です: {name}（候補: {', '.join(SPECIALIZATIONS)}）")
    return key


def _format_q(entry: Tuple[int, Fraction]) -> str:
    s, e = entry
    if e == 0:
        return '-1' if s < 0 else '1'
    if e == 1:
        return '-q' if s < 0 else 'q'
    return format_coordinate(s, e)


def _triple_for(name: str, m: Fraction, lambda0: Fraction, lambda1: Fraction, lambdan: Fraction) -> QTriple:
    if name == 'three-parameter-C_n':
        return ((-1, (lambdan - lambda0) / 2), (1, (lambdan + lambda0) / 2), (1, lambda1))
    if name == 'SO(2n+1)-two-param':
        return ((-1, Fraction(0)), (1, m), (1, Fraction(1)))
    if name == 'Sp(2n)-two-param':
        return ((-1, m / 2), (1, m / 2), (1, Fraction(1)))
    return ((-1, Fraction(0)), (1, Fraction(0)), (1, Fraction(1)))


def triple_to_parameters(triple: QTriple) -> Dict[str, Fraction]:
    """(𝕢₀, 𝕢₁, 𝕢₂) → (λ_a, m₊, m₋)。𝕢₀ = −q^{m₋}, 𝕢₁ = q^{m₊}, 𝕢₂ = q^{λ_a}"""
    q0, q1, q2 = triple
    if q0[0] != -1 or q1[0] != 1 or q2[0] != 1:
        raise ConfigurationError(f"符号の規約に合わない三つ組です: {triple}")
    return {'lambda_a': q2[1], 'm_plus': q1[1], 'm_minus': q0[1]}


NAMED_INSTANCES = (
    ('SO(2n+1), m = 1', 'SO(2n+1)-two-param', {'m': 1}),
    ('Sp(2n), m = 1', 'Sp(2n)-two-param', {'m': 1}),
    ('Sp(2n), m = 2', 'Sp(2n)-two-param', {'m': 2}),
    ('quaternionic unitary', 'three-parameter-C_n', {'lambda0': 1, 'lambda1': 2, 'lambdan': 2}),
    ('O(2n)', 'SO(2n)/O(2n)', {}),
)


def specialization_lookup(name: str, m: Number = 1, lambda0: Number = 0, lambda1: Number = 1,
                          lambdan: Number = 1, n: int = None) -> Dict[str, Any]:
    """名前付き特殊化の三つ組、ワークベンチのパラメータ、アフィン図式のラベル"""
    name = _resolve_name(name)
    m, lambda0, lambda1, lambdan = (Fraction(v) for v in (m, lambda0, lambda1, lambdan))
    triple = _triple_for(name, m, lambda0, lambda1, lambdan)
    params = triple_to_parameters(triple)
    mp, mm = params['m_plus'], params['m_minus']
    labels = {'lambda0': mp - mm, 'lambda1': params['lambda_a'], 'lambdan': mp + mm}
    payload = {
        'name': name,
        'triple': [_format_q(e) for e in triple],
        'params': {k: str(v) for k, v in params.items()},
        'diagram': {k: str(v) for k, v in labels.items()},
    }
    if n is not None:
        if n < 1:
            raise ConfigurationError(f"階数は正の整数: {n}")
        payload['diagram_nodes'] = [str(labels['lambda0'])] + [str(labels['lambda1'])] * (n - 1) \
            + [str(labels['lambdan'])]
    if name == 'SO(2n)/O(2n)':
        payload['clifford'] = 'ℋ(SO(2n)) ⊂ ℋ_B(0,0) = ℋ(O(2n))'
    return payload


def specialization_parameters(name: str, **labels) -> Dict[str, Fraction]:
    entry = specialization_lookup(name, **labels)
    return {k: Fraction(v) for k, v in entry['params'].items()}


def named_instances() -> List[Dict[str, Any]]:
    out = []
    for label, name, kwargs in NAMED_INSTANCES:
        entry = specialization_lookup(name, **kwargs)
        entry['instance'] = label
        out.append(entry)
    return out


def specialization_consistent(entry: Dict[str, Any]) -> bool:
    """三つ組の指数と params の対応（m₊ = 𝕢₁ の指数、m₋ = −𝕢₀ の指数）"""
    params = {k: Fraction(v) for k, v in entry['params'].items()}
    diagram = {k: Fraction(v) for k, v in entry['diagram'].items()}
    return (diagram['lambdan'] == params['m_plus'] + params['m_minus']
            and diagram['lambda0'] == params['m_plus'] - params['m_minus']
            and diagram['lambda1'] == params['lambda_a'])


def specialized_overlap_experiment(name: str, pi: FDModule,
                                   sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
                                   max_words: Optional[int] = None,
                                   **labels) -> Dict[str, Any]:
    """名前付き特殊化で重なり実験を行う"""
    params = specialization_parameters(name, **labels)
    if pi.algebra.params.lambda_a != params['lambda_a']:
        raise MisuseError(
            f"π の λ_a={pi.algebra.params.lambda_a} が特殊化 {name} の λ_a={params['lambda_a']} と異なります"
        )
    report = overlap_experiment(pi, params['m_plus'], params['m_minus'], sample_t0s, max_words)
    report['specialization'] = _resolve_name(name)
    report['provenance'] = f"specialized.{report['provenance']}"
    return report


# =============================================================
# Clifford の橋渡し ℋ(SO(2n)) ↪ ℋ_B(0,0)
# =============================================================

@dataclass
class CliffordBridge:
    """T_i ↦ T_i (i < n)、T^D_n ↦ T_n T_{n-1} T_n、θ ↦ θ、δ ↦ T_n"""

    source: AlgebraDescriptor
    target: AlgebraDescriptor
    images: Dict[str, HeckeElement]
    delta: HeckeElement

    def relation_checks(self) -> List[Tuple[str, bool]]:
        src, tgt = self.source, self.target
        n = src.n
        t_img = {i: self.images[f"T{i}"] for i in range(1, n + 1)}
        q = q_power(tgt.root_index, src.params.lambda_a)
        one = one_element(tgt)
        checks: List[Tuple[str, bool]] = []

        for i in range(1, n + 1):
            t = t_img[i]
            checks.append((f"quadratic T{i}", hecke_mul(t - q, t + one).is_zero()))
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                m = coxeter_order('D', n, i, j)
                lhs, rhs = one, one
                for k in range(m):
                    lhs = hecke_mul(lhs, t_img[i] if k % 2 == 0 else t_img[j])
                    rhs = hecke_mul(rhs, t_img[j] if k % 2 == 0 else t_img[i])
                checks.append((f"braid T{i},T{j}", lhs == rhs))

        ctx = multiplier(src)
        roots = simple_roots(src)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                x = tuple(1 if k == j - 1 else 0 for k in range(n))
                sx = reflect_lattice(roots[i - 1], x)
                lhs = hecke_mul(theta_poly_element(tgt, {x: q_power(tgt.root_index, 0)}), t_img[i]) \
                    - hecke_mul(t_img[i], theta_poly_element(tgt, {sx: q_power(tgt.root_index, 0)}))
                rhs = theta_poly_element(tgt, ctx.cross(i, x))
                checks.append((f"cross T{i},theta{j}", lhs == rhs))

        d = self.delta
        checks.append(("delta^2 = 1", hecke_mul(d, d) == one))
        for i in range(1, n + 1):
            conj = hecke_mul(hecke_mul(d, t_img[i]), d)
            if i == n - 1:
                expected = t_img[n]
            elif i == n:
                expected = t_img[n - 1]
            else:
                expected = t_img[i]
            checks.append((f"delta T{i} delta", conj == expected))
        for j in range(1, n + 1):
            conj = hecke_mul(hecke_mul(d, theta_unit(tgt, j)), d)
            expected = theta_unit(tgt, j, -1 if j == n else 1)
            checks.append((f"delta theta{j} delta", conj == expected))
        return checks

    def relations_hold(self) -> bool:
        return all(ok for _, ok in self.relation_checks())


def clifford_bridge(n: int, lambda_a: Number = 1, root_index: int = None) -> CliffordBridge:
    if n < 2:
        raise ConfigurationError(f"clifford_bridge は n ≥ 2: n={n}")
    target = make_descriptor('O', n, lambda_a=lambda_a, root_index=root_index)
    source = make_descriptor('D', n, lambda_a=lambda_a, root_index=target.root_index)
    images: Dict[str, HeckeElement] = {}
    for i in range(1, n):
        images[f"T{i}"] = T(target, i)
    images[f"T{n}"] = hecke_mul(hecke_mul(T(target, n), T(target, n - 1)), T(target, n))
    for j in range(1, n + 1):
        images[f"theta{j}"] = theta_unit(target, j)
        images[f"theta{j}^-1"] = theta_unit(target, j, -1)
    return CliffordBridge(source, target, images, T(target, n))


def restrict_to_D(module: FDModule, bridge: CliffordBridge = None) -> FDModule:
    """ℋ_B(0,0) 加群を ℋ(SO(2n)) に制限する"""
    desc = module.algebra
    if desc.family != 'B' or desc.m_plus != 0 or desc.m_minus != 0:
        raise MisuseError(f"ℋ_B(0,0) 加群ではありません: {desc.label()}")
    if bridge is None:
        bridge = clifford_bridge(desc.n, desc.params.lambda_a, desc.root_index)
    return restrict_module(module, bridge.source, bridge.images)


def delta_compatibility(module: FDModule, bridge: CliffordBridge = None) -> bool:
    """δ-捻り(Res M) の生成行列が ρ(T_n)·Res M·ρ(T_n) と一致するか"""
    desc = module.algebra
    if bridge is None:
        bridge = clifford_bridge(desc.n, desc.params.lambda_a, desc.root_index)
    restricted = restrict_to_D(module, bridge)
    twisted = delta_twist(restricted)
    p = module.action(bridge.delta)
    pairs = list(zip(twisted.T, restricted.T)) + list(zip(twisted.theta, restricted.theta))
    return all(matrices_equal(tw, p * g * p) for tw, g in pairs)


def realize_induced_D(induced_b: FDModule, bridge: CliffordBridge, pi_dim: int) -> FDModule:
    """Res I_B(π) の中で 1⊗π が生成する ℋ(SO(2n)) 部分加群（I_D(π) と同型）"""
    desc = induced_b.algebra
    restricted = restrict_to_D(induced_b, bridge)
    fld = restricted.field
    d = restricted.dim
    reps = min_coset_reps(desc.n, desc.weyl_kind)
    start = reps.index(identity(desc.n, desc.weyl_kind)) * pi_dim
    gens = restricted.algebra_generators()
    span = EchelonSpan(d, fld)
    for b in range(pi_dim):
        e = [fld.zero] * d
        e[start + b] = fld.one
        for v in cyclic_span(gens, e, fld):
            span.add(v)
    mats = list(restricted.T) + list(restricted.theta) + list(restricted.theta_inv)
    sub_mats, _ = split_by_subspace(mats, span.basis(), fld)
    r = bridge.source.num_simple
    n = desc.n
    return build_module(bridge.source, fld, sub_mats[:r], sub_mats[r:r + n], sub_mats[r + n:],
                        weight_hints=induced_b.weight_hints,
                        name=f"Res({induced_b.name})⊃1⊗π")


def typeD_experiment(
    pi: FDModule,
    sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
    max_words: Optional[int] = None,
) -> Dict[str, Any]:
    """I_D(π) が可約 ⇔ I_B(π) が可約（ℋ_B(0,0) 上）

    I_D(π) は直接構成したものと、Res I_B(π) 内で 1⊗π が生成する部分加群の両方で判定する。
    """
    if pi.algebra.family != 'A':
        raise MisuseError(f"π は ℋ_A 加群である必要があります: {pi.algebra.label()}")
    n = pi.algebra.n
    if n < 2:
        raise MisuseError("D 型の実験は n ≥ 2")
    weights = module_weights(pi)
    for w in weights:
        if any(e == 0 for _, e in w.coords):
            raise MisuseError(f"π のウェイト {w} が ±1 を含みます")

    desc_b = with_parameters(pi.algebra, 0, 0)
    pi_b = rescale_module(pi, desc_b.root_index)
    bridge = clifford_bridge(n, desc_b.params.lambda_a, desc_b.root_index)

    induced_b = induce_from_A(desc_b, pi_b)
    induced_d = induce_from_A(bridge.source, pi_b)
    verdict_b = burnside_irreducible(induced_b, sample_t0s, max_words)
    verdict_d = burnside_irreducible(induced_d, sample_t0s, max_words)
    certs = verify_certificate(induced_b, verdict_b) and verify_certificate(induced_d, verdict_d)
    agree = verdict_b.is_reducible == verdict_d.is_reducible

    realized = realize_induced_D(induced_b, bridge, pi_b.dim)
    verdict_realized = burnside_irreducible(realized, sample_t0s, max_words)
    realized_ok = realized.dim == induced_d.dim and verdict_realized.status == verdict_d.status

    twisted = delta_twist(induced_d)
    cc = central_character(module_weights(induced_d)[0], 'D')
    cc_twisted = central_character(module_weights(twisted)[0], 'D')
    restricted_dim = restrict_to_D(induced_b, bridge).dim

    passed = agree and certs and realized_ok and restricted_dim == 2 * induced_d.dim
    if not passed:
        logger.error(
            f"D 型の実験が失敗: π={pi.name} B={verdict_b.status} D={verdict_d.status} "
            f"Res={verdict_realized.status}"
        )
    return {
        'provenance': 'clifford.typeD',
        'pi': pi.name,
        'algebra_B': desc_b.to_json(),
        'algebra_D': bridge.source.to_json(),
        'verdict_B': verdict_b.to_json(),
        'verdict_D': verdict_d.to_json(),
        'verdict_D_restricted': verdict_realized.to_json(),
        'realized_dim': realized.dim,
        'realized_agrees': realized_ok,
        'certificates_verified': certs,
        'agree': agree,
        'central_character_D': cc.to_json(),
        'central_character_delta_D': cc_twisted.to_json(),
        'restricted_dim': restricted_dim,
        'passed': passed,
    }

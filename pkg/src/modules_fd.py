"""有限次元加群モジュール

生成元 T_1..T_r と θ_{ε_1}..θ_{ε_n}（とその逆）の作用行列を明示的に持つ。
構成子: 主系列 I(ν)、ℋ_A からの放物誘導 I(π)、階数 1 の一次元加群、
文字 (char:) と ℋ_A 主系列 (ps:) の略記。
"""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .errors import (
    ConfigurationError,
    DescriptorMismatchError,
    MisuseError,
    RelationViolationError,
    SchemaError,
    ScalarDomainError,
    SingularWeightError,
    UnsupportedModuleError,
)
from .hecke_algebra import (
    HeckeElement,
    g_factors,
    g_numerator_factors,
    hecke_mul,
    intertwiner_simple,
    multiplier,
    parabolic_normal_form,
    T,
    theta_unit,
    to_right_normal_form,
)
from .linalg import (
    NUMERIC,
    SYMBOLIC,
    ScalarField,
    apply,
    identity_matrix,
    is_zero_vector,
    matrices_equal,
    matrix,
    scalar_matrix,
    stable_power,
    stacked_nullspace,
)
from .root_data import (
    AlgebraDescriptor,
    Weight,
    WeylElement,
    coxeter_order,
    descriptor_from_json,
    format_coordinate,
    gl_subalgebra,
    make_descriptor,
    min_coset_reps,
    parse_coordinate,
    reflect_lattice,
    rescale_root_index,
    root_parameter,
    simple_roots,
    weyl_act,
    weight_from_json,
    weyl_group,
)
from .scalars import FractionScalar, LaurentScalar, Number, common_root_index, q_power, to_rational

logger = logging.getLogger(__name__)


# =============================================================
# 加群
# =============================================================

@dataclass(frozen=True, eq=False)
class FDModule:
    """有限次元表現 ρ

    T: ρ(T_1)..ρ(T_r)、theta: ρ(θ_{ε_1})..ρ(θ_{ε_n})、theta_inv はその逆行列。
    weight_hints は構成子が知っているウェイトの候補（重複込み）。
    """

    algebra: AlgebraDescriptor
    field: ScalarField
    dim: int
    T: Tuple[DomainMatrix, ...]
    theta: Tuple[DomainMatrix, ...]
    theta_inv: Tuple[DomainMatrix, ...]
    labels: Tuple[str, ...] = ()
    weight_hints: Optional[Tuple[Weight, ...]] = None
    name: str = ''
    _theta_cache: Dict = dc_field(default_factory=dict, repr=False)
    _t_cache: Dict = dc_field(default_factory=dict, repr=False)

    @property
    def mode(self) -> str:
        return self.field.mode

    def generator_matrices(self) -> Dict[str, DomainMatrix]:
        mats = {}
        for i, m in enumerate(self.T, 1):
            mats[f"T{i}"] = m
        for j, m in enumerate(self.theta, 1):
            mats[f"theta{j}"] = m
        for j, m in enumerate(self.theta_inv, 1):
            mats[f"theta{j}^-1"] = m
        return mats

    def algebra_generators(self) -> List[DomainMatrix]:
        """代数を生成する行列（θ^{-1} は θ の多項式なので含めない）"""
        return list(self.T) + list(self.theta)

    def identity(self) -> DomainMatrix:
        return identity_matrix(self.dim, self.field)

    # --- 作用 ---

    def theta_matrix(self, x: Sequence[int]) -> DomainMatrix:
        x = tuple(x)
        cached = self._theta_cache.get(x)
        if cached is not None:
            return cached
        mat = self.identity()
        for j, k in enumerate(x):
            base = self.theta[j] if k > 0 else self.theta_inv[j]
            for _ in range(abs(k)):
                mat = mat * base
        self._theta_cache[x] = mat
        return mat

    def t_matrix(self, w: WeylElement) -> DomainMatrix:
        key = w.images
        cached = self._t_cache.get(key)
        if cached is not None:
            return cached
        mat = self.identity()
        for i in w.reduced_word:
            mat = mat * self.T[i - 1]
        self._t_cache[key] = mat
        return mat

    def action(self, h: HeckeElement) -> DomainMatrix:
        """ρ(h) = Σ c ρ(θ_x) ρ(T_w)"""
        if h.algebra != self.algebra:
            raise DescriptorMismatchError(
                f"加群の代数 {self.algebra.label()} と元の代数 {h.algebra.label()} が異なります"
            )
        total = scalar_matrix(self.dim, self.field.zero, self.field)
        for (x, w), c in h.terms.items():
            term = self.theta_matrix(x)
            if not w.is_identity():
                term = term * self.t_matrix(w)
            total = total + term * self.field.from_laurent(c)
        return total


def module_action(module: FDModule, h: HeckeElement) -> DomainMatrix:
    return module.action(h)


def _field_for(descriptor: AlgebraDescriptor, fld: Optional[ScalarField]) -> ScalarField:
    if fld is None:
        return ScalarField(SYMBOLIC, descriptor.root_index)
    if fld.root_index != descriptor.root_index:
        return fld.with_root_index(descriptor.root_index)
    return fld


def _invert_all(mats: Sequence[DomainMatrix], what: str) -> Tuple[DomainMatrix, ...]:
    out = []
    for j, m in enumerate(mats, 1):
        if m.rank() < m.shape[0]:
            raise RelationViolationError(f"{what}{j} が可逆ではありません", [f"{what}{j} invertible"])
        out.append(m.inv())
    return tuple(out)


def build_module(
    descriptor: AlgebraDescriptor,
    fld: ScalarField,
    T_mats: Sequence[DomainMatrix],
    theta_mats: Sequence[DomainMatrix],
    theta_inv: Sequence[DomainMatrix] = None,
    labels: Sequence[str] = (),
    weight_hints: Sequence[Weight] = None,
    name: str = '',
) -> FDModule:
    if len(T_mats) != descriptor.num_simple or len(theta_mats) != descriptor.n:
        raise SchemaError(
            f"生成元の個数が不正です: T×{len(T_mats)}, θ×{len(theta_mats)}（{descriptor.label()}）"
        )
    dim = theta_mats[0].shape[0]
    for m in list(T_mats) + list(theta_mats):
        if m.shape != (dim, dim):
            raise SchemaError(f"行列のサイズが不正です: {m.shape} != {(dim, dim)}")
    if theta_inv is None:
        theta_inv = _invert_all(theta_mats, 'theta')
    return FDModule(
        algebra=descriptor,
        field=fld,
        dim=dim,
        T=tuple(T_mats),
        theta=tuple(theta_mats),
        theta_inv=tuple(theta_inv),
        labels=tuple(labels),
        weight_hints=tuple(weight_hints) if weight_hints is not None else None,
        name=name,
    )


def fit_root_index(descriptor: AlgebraDescriptor, weights: Sequence[Weight]) -> AlgebraDescriptor:
    """ウェイトの指数まで表現できるよう N を拡大した記述子"""
    exps: List[Fraction] = [Fraction(1, descriptor.root_index)]
    for w in weights:
        exps.extend(w.exponents)
    needed = common_root_index(exps)
    if needed == descriptor.root_index:
        return descriptor
    return rescale_root_index(descriptor, needed)


# =============================================================
# 関係式チェック
# =============================================================

def relation_check(module: FDModule) -> List[str]:
    """定義関係式を行列の恒等式として検査し、破れている関係の名前を返す"""
    desc = module.algebra
    fld = module.field
    ident = module.identity()
    failures: List[str] = []

    for j in range(desc.n):
        if not matrices_equal(module.theta[j] * module.theta_inv[j], ident):
            failures.append(f"theta{j + 1}·theta{j + 1}^-1 = 1")
        for k in range(j + 1, desc.n):
            if not matrices_equal(module.theta[j] * module.theta[k], module.theta[k] * module.theta[j]):
                failures.append(f"theta{j + 1}·theta{k + 1} = theta{k + 1}·theta{j + 1}")

    r = desc.num_simple
    for i in range(1, r + 1):
        t = module.T[i - 1]
        q = fld.from_laurent(q_power(desc.root_index, root_parameter(desc, i)))
        quad = (t - scalar_matrix(module.dim, q, fld)) * (t + ident)
        if not quad.is_zero_matrix:
            failures.append(f"(T{i} − q^λ)(T{i} + 1) = 0")

    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            m = coxeter_order(desc.weyl_kind, desc.n, i, j)
            lhs, rhs = ident, ident
            for k in range(m):
                lhs = lhs * (module.T[i - 1] if k % 2 == 0 else module.T[j - 1])
                rhs = rhs * (module.T[j - 1] if k % 2 == 0 else module.T[i - 1])
            if not matrices_equal(lhs, rhs):
                failures.append(f"braid(T{i}, T{j})")

    ctx = multiplier(desc)
    roots = simple_roots(desc)
    for i in range(1, r + 1):
        root = roots[i - 1]
        for j in range(desc.n):
            x = tuple(1 if k == j else 0 for k in range(desc.n))
            sx = reflect_lattice(root, x)
            lhs = module.theta_matrix(x) * module.T[i - 1] - module.T[i - 1] * module.theta_matrix(sx)
            rhs = scalar_matrix(module.dim, fld.zero, fld)
            for z, c in ctx.cross(i, x).items():
                rhs = rhs + module.theta_matrix(z) * fld.from_laurent(c)
            if not matrices_equal(lhs, rhs):
                failures.append(f"cross(T{i}, theta{j + 1})")
    return failures


def ensure_relations(module: FDModule) -> FDModule:
    failures = relation_check(module)
    if failures:
        logger.error(f"関係式違反: {module.name or module.algebra.label()} {failures}")
        raise RelationViolationError(f"加群が定義関係式を満たしません: {failures}", failures)
    return module


# =============================================================
# 構成子
# =============================================================

def principal_series(descriptor: AlgebraDescriptor, nu: Weight, fld: ScalarField = None) -> FDModule:
    """I(ν) = ℋ ⊗_𝒜 ℂ_ν（基底 T_w ⊗ 1、w ∈ W）"""
    if nu.rank != descriptor.n:
        raise DescriptorMismatchError(f"ウェイトの階数 {nu.rank} が {descriptor.n} と一致しません")
    fld = _field_for(descriptor, fld)
    group = weyl_group(descriptor.weyl_kind, descriptor.n)
    index = {w: k for k, w in enumerate(group)}
    d = len(group)
    n_idx = descriptor.root_index

    def column_images(g: HeckeElement) -> DomainMatrix:
        rows = [[fld.zero] * d for _ in range(d)]
        for col, w in enumerate(group):
            for (v, x), c in to_right_normal_form(hecke_mul(g, T(descriptor, w))).items():
                val = fld.from_laurent(c * nu.value(x, n_idx))
                rows[index[v]][col] += val
        return matrix(rows, fld)

    T_mats = [column_images(T(descriptor, i)) for i in range(1, descriptor.num_simple + 1)]
    theta_mats = [column_images(theta_unit(descriptor, j)) for j in range(1, descriptor.n + 1)]
    theta_inv = [column_images(theta_unit(descriptor, j, -1)) for j in range(1, descriptor.n + 1)]
    hints = [weyl_act(w, nu) for w in group]
    logger.debug(f"主系列を構成: {descriptor.label()} ν={nu} dim={d}")
    return build_module(descriptor, fld, T_mats, theta_mats, theta_inv,
                        labels=[f"T[{w}]" for w in group], weight_hints=hints,
                        name=f"I({nu})")


def induce_from_A(descriptor: AlgebraDescriptor, pi: FDModule) -> FDModule:
    """I(π) = ℋ ⊗_{ℋ_A} π（基底 T_u ⊗ b、u は W/S_n の最短代表）"""
    gl = gl_subalgebra(descriptor)
    if pi.algebra != gl:
        raise DescriptorMismatchError(
            f"π の代数 {pi.algebra.label()}(N={pi.algebra.root_index}) は "
            f"{descriptor.label()}(N={descriptor.root_index}) の GL 部分代数ではありません"
        )
    fld = pi.field
    reps = min_coset_reps(descriptor.n, descriptor.weyl_kind)
    index = {u: k for k, u in enumerate(reps)}
    k = pi.dim
    d = len(reps) * k

    def induced(g: HeckeElement) -> DomainMatrix:
        rows = [[fld.zero] * d for _ in range(d)]
        for col_block, u in enumerate(reps):
            parts = parabolic_normal_form(hecke_mul(g, T(descriptor, u)))
            for u2, h_u in parts.items():
                block = pi.action(h_u).to_list()
                r0, c0 = index[u2] * k, col_block * k
                for a in range(k):
                    for b in range(k):
                        if block[a][b]:
                            rows[r0 + a][c0 + b] += block[a][b]
        return matrix(rows, fld)

    T_mats = [induced(T(descriptor, i)) for i in range(1, descriptor.num_simple + 1)]
    theta_mats = [induced(theta_unit(descriptor, j)) for j in range(1, descriptor.n + 1)]
    theta_inv = [induced(theta_unit(descriptor, j, -1)) for j in range(1, descriptor.n + 1)]
    hints = None
    if pi.weight_hints is not None:
        hints = [weyl_act(u, nu) for u in reps for nu in pi.weight_hints]
    pi_labels = pi.labels or tuple(f"b{i}" for i in range(k))
    labels = [f"T[{u}]⊗{lab}" for u in reps for lab in pi_labels]
    logger.info(f"誘導加群を構成: {descriptor.label()} dim={d}")
    return build_module(descriptor, fld, T_mats, theta_mats, theta_inv,
                        labels=labels, weight_hints=hints,
                        name=f"Ind({pi.name or 'π'})")


def character_module(
    descriptor: AlgebraDescriptor,
    T_values: Sequence[LaurentScalar],
    nu: Weight,
    fld: ScalarField = None,
    check: bool = True,
) -> FDModule:
    """一次元加群 [T_i = T_values[i], θ = ν]"""
    fld = _field_for(descriptor, fld)
    if len(T_values) != descriptor.num_simple:
        raise SchemaError(f"T の値の個数が {descriptor.num_simple} ではありません")
    T_mats = [matrix([[fld.from_laurent(v)]], fld) for v in T_values]
    theta_mats = [matrix([[fld.from_laurent(nu.coordinate(j, descriptor.root_index))]], fld)
                  for j in range(descriptor.n)]
    labels = ["v"]
    t_text = ','.join(str(v) for v in T_values)
    module = build_module(descriptor, fld, T_mats, theta_mats, labels=labels,
                          weight_hints=[nu], name=f"[T={t_text}, θ={nu}]")
    return ensure_relations(module) if check else module


def ps_module(descriptor_a: AlgebraDescriptor, exponents: Sequence[Number],
              signs: Sequence[int] = None, fld: ScalarField = None) -> FDModule:
    """ℋ_A の主系列（ps:λ1,…,λn）"""
    if descriptor_a.family != 'A':
        raise ConfigurationError(f"ps: は ℋ_A 用です: {descriptor_a.label()}")
    return principal_series(descriptor_a, Weight.from_exponents(exponents, signs), fld)


def rank_one_modules(family: str, lam: Number, lam_star: Number = None,
                     fld: ScalarField = None) -> List[FDModule]:
    """階数 1 の四つの一次元加群（Steinberg 類似, …, 自明類似, …）"""
    family = family.lower()
    lam = Fraction(lam)
    if family in ('so3', 'b'):
        lam_star = Fraction(lam_star) if lam_star is not None else lam
        desc = make_descriptor('B', 1, lam=lam, lam_star=lam_star)
        mp, mm = (lam + lam_star) / 2, (lam - lam_star) / 2
        points = [(-1, 1, -mp), (-1, -1, -mm), ('q', 1, mp), ('q', -1, mm)]
    elif family in ('sl2', 'c'):
        if lam_star is not None:
            raise ConfigurationError("SL(2) 族に λ* はありません")
        desc = make_descriptor('C', 1, lam=lam)
        points = [(-1, 1, -lam / 2), (-1, -1, -lam / 2), ('q', 1, lam / 2), ('q', -1, lam / 2)]
    else:
        raise ConfigurationError(f"未知の階数 1 族: {family}")
    n_idx = desc.root_index
    modules = []
    for t_kind, sign, exp in points:
        t_val = q_power(n_idx, lam) if t_kind == 'q' else LaurentScalar.constant(n_idx, -1)
        modules.append(character_module(desc, [t_val], Weight.from_exponents([exp], [sign]), fld))
    return modules


def rank_one_reducibility_points(family: str, lam: Number, lam_star: Number = None) -> List[Weight]:
    """I(ν) が可約になる ν の一覧"""
    family = family.lower()
    lam = Fraction(lam)
    if family in ('so3', 'b'):
        lam_star = Fraction(lam_star) if lam_star is not None else lam
        mp, mm = (lam + lam_star) / 2, (lam - lam_star) / 2
        raw = [(1, mp), (1, -mp), (-1, mm), (-1, -mm)]
    else:
        raw = [(1, lam / 2), (1, -lam / 2), (-1, lam / 2), (-1, -lam / 2)]
    seen, out = set(), []
    for s, e in raw:
        if (s, e) not in seen:
            seen.add((s, e))
            out.append(Weight.from_exponents([e], [s]))
    return out


# =============================================================
# ウェイト分解
# =============================================================

@dataclass
class WeightEntry:
    weight: Weight
    multiplicity: int
    generalized_basis: List[List[Any]]
    eigenvectors: List[List[Any]]

    def to_json(self) -> Dict[str, Any]:
        return {
            'weight': self.weight.to_json(),
            'multiplicity': self.multiplicity,
            'eigenvectors': len(self.eigenvectors),
        }


@dataclass
class WeightReport:
    dim: int
    entries: List[WeightEntry]

    def weights(self) -> List[Tuple[Weight, int]]:
        return [(e.weight, e.multiplicity) for e in self.entries]

    def multiset(self) -> Dict[Weight, int]:
        return {e.weight: e.multiplicity for e in self.entries}

    def multiplicity_one(self) -> bool:
        return all(e.multiplicity == 1 for e in self.entries)

    def eigenvectors(self) -> List[Tuple[Weight, List[Any]]]:
        return [(e.weight, v) for e in self.entries for v in e.eigenvectors]

    def to_json(self) -> Dict[str, Any]:
        return {
            'dim': self.dim,
            'weights': [e.to_json() for e in sorted(self.entries, key=lambda e: e.weight.to_json())],
        }


def _coordinate_value(fld: ScalarField, sign: int, exponent: Fraction):
    return fld.from_laurent(LaurentScalar.from_dict(fld.root_index, {int(exponent * fld.root_index): sign}))


def _monomial_candidates(module: FDModule, j: int) -> List[Tuple[int, Fraction]]:
    """θ_j の特性多項式の符号付き単項式根 ±t^k を列挙"""
    fld = module.field
    mat = module.theta[j]
    coeffs = mat.charpoly()
    d = len(coeffs) - 1
    n_idx = fld.root_index

    if fld.is_symbolic:
        bound = 0
        for c in coeffs:
            if not c:
                continue
            f = fld.to_fraction_scalar(c)
            for part in (f.num, f.den):
                bound = max(bound, abs(part.highest_exponent()), abs(part.lowest_exponent()))
        bound = bound * 2 + 1
        k_range = range(-bound, bound + 1)
    else:
        t0 = fld.t0
        if t0 <= 1:
            raise ScalarDomainError(f"numeric モードのウェイト分解には t0 > 1 が必要です: t0={t0}")
        vals = [Fraction(int(c.numerator), int(c.denominator)) for c in coeffs]
        lead = vals[0]
        upper = 1 + max((abs(v / lead) for v in vals[1:]), default=Fraction(0))
        const = next((v for v in reversed(vals) if v != 0), lead)
        lower = 1 + max((abs(v / const) for v in vals[:-1] if v != 0), default=Fraction(0))
        k_hi = 0
        while t0 ** k_hi <= upper:
            k_hi += 1
        k_lo = 0
        while t0 ** k_lo <= lower:
            k_lo += 1
        k_range = range(-k_lo, k_hi + 1)

    found = []
    for k in k_range:
        for sign in (1, -1):
            value = fld.from_laurent(LaurentScalar.from_dict(n_idx, {k: sign}))
            acc = fld.zero
            for c in coeffs:
                acc = acc * value + c
            if not acc:
                found.append((sign, Fraction(k, n_idx)))
    if not found and d > 0:
        raise UnsupportedModuleError(f"θ{j + 1} の固有値に符号付き単項式がありません")
    return found


def weight_report(module: FDModule) -> WeightReport:
    """可換な θ 作用の一般化固有空間分解"""
    fld = module.field
    d = module.dim
    n = module.algebra.n

    if module.weight_hints is not None:
        seen = []
        for w in module.weight_hints:
            if w not in seen:
                seen.append(w)
        per_coord = [sorted({w.coords[j] for w in seen}) for j in range(n)]
    else:
        seen = None
        per_coord = [_monomial_candidates(module, j) for j in range(n)]

    gen_power: Dict[Tuple[int, Tuple[int, Fraction]], DomainMatrix] = {}
    shifted: Dict[Tuple[int, Tuple[int, Fraction]], DomainMatrix] = {}
    for j in range(n):
        for coord in per_coord[j]:
            value = _coordinate_value(fld, coord[0], coord[1])
            a = module.theta[j] - scalar_matrix(d, value, fld)
            shifted[(j, coord)] = a
            gen_power[(j, coord)] = stable_power(a)

    def search(j: int, chosen: List[Tuple[int, Fraction]]):
        if j == n:
            yield tuple(chosen)
            return
        for coord in per_coord[j]:
            mats = [gen_power[(k, c)] for k, c in enumerate(chosen + [coord])]
            if stacked_nullspace(mats):
                yield from search(j + 1, chosen + [coord])

    if seen is not None:
        candidates = [w.coords for w in seen]
    else:
        candidates = list(search(0, []))

    entries: List[WeightEntry] = []
    total = 0
    for coords in candidates:
        basis = stacked_nullspace([gen_power[(j, c)] for j, c in enumerate(coords)])
        if not basis:
            continue
        eig = stacked_nullspace([shifted[(j, c)] for j, c in enumerate(coords)])
        entries.append(WeightEntry(Weight(tuple(coords)), len(basis), basis, eig))
        total += len(basis)
    if total != d:
        raise UnsupportedModuleError(
            f"ウェイト空間の次元の和 {total} が加群の次元 {d} と一致しません（単項式でない固有値）"
        )
    return WeightReport(d, entries)


# =============================================================
# τ 作用素
# =============================================================

def joint_eigenvalues(module: FDModule, v: Sequence[Any]) -> List[Any]:
    """v が同時固有ベクトルなら θ_j の固有値の並び"""
    if is_zero_vector(v):
        raise MisuseError("零ベクトルは固有ベクトルではありません")
    pivot = next(i for i, x in enumerate(v) if x)
    values = []
    for j, mat in enumerate(module.theta):
        image = apply(mat, v)
        c = image[pivot] / v[pivot]
        if not is_zero_vector([a - c * b for a, b in zip(image, v)]):
            raise MisuseError(f"θ{j + 1} の固有ベクトルではありません")
        values.append(c)
    return values


def _theta_value(module: FDModule, h: HeckeElement, eigenvalues: Sequence[Any]):
    fld = module.field
    total = fld.zero
    for x, c in h.theta_poly().items():
        term = fld.from_laurent(c)
        for val, k in zip(eigenvalues, x):
            if k > 0:
                for _ in range(k):
                    term = term * val
            elif k < 0:
                for _ in range(-k):
                    term = term / val
        total = total + term
    return total


def apply_tau(module: FDModule, i: int, v: Sequence[Any]) -> List[Any]:
    """τ_i v = ρ(R_i) v / 𝒢-分子(μ)（v は同時固有ベクトル）"""
    desc = module.algebra
    if not 1 <= i <= desc.num_simple:
        raise ConfigurationError(f"単純ルートの番号が範囲外です: {i}")
    values = joint_eigenvalues(module, v)
    numer = module.field.one
    for label, factor in g_numerator_factors(desc, i):
        val = _theta_value(module, factor, values)
        if not val:
            raise SingularWeightError(f"τ_{i} の分母がこのウェイトで消えます: {label}", label)
        numer = numer * val
    rv = apply(module.action(intertwiner_simple(desc, i)), v)
    return [x / numer for x in rv]


def tau_operator(module: FDModule, i: int) -> DomainMatrix:
    """ρ(τ_i) = ρ(R_i) ρ(𝒢-分子)^{-1}"""
    desc = module.algebra
    numer, _ = g_factors(desc, i)
    n_mat = module.action(numer)
    if n_mat.rank() < module.dim:
        label = ', '.join(name for name, _ in g_numerator_factors(desc, i))
        raise SingularWeightError(f"ρ(𝒢-分子) が可逆ではありません: τ_{i}", label)
    return module.action(intertwiner_simple(desc, i)) * n_mat.inv()


# =============================================================
# 捻り・制限・特殊化
# =============================================================

def delta_twist(module: FDModule) -> FDModule:
    """外部自己同型 δ（T_{n-1} ↔ T_n、θ_n ↦ θ_n^{-1}）による捻り"""
    desc = module.algebra
    if desc.family != 'D':
        raise ConfigurationError(f"δ 捻りは D 型の加群のみ: {desc.label()}")
    n = desc.n
    T_mats = list(module.T)
    T_mats[n - 2], T_mats[n - 1] = module.T[n - 1], module.T[n - 2]
    theta_mats = list(module.theta)
    theta_inv = list(module.theta_inv)
    theta_mats[n - 1], theta_inv[n - 1] = module.theta_inv[n - 1], module.theta[n - 1]
    hints = None
    if module.weight_hints is not None:
        hints = [invert_last(w) for w in module.weight_hints]
    return build_module(desc, module.field, T_mats, theta_mats, theta_inv,
                        labels=module.labels, weight_hints=hints,
                        name=f"δ({module.name})")


def invert_last(w: Weight) -> Weight:
    coords = list(w.coords)
    s, e = coords[-1]
    coords[-1] = (s, -e)
    return Weight(tuple(coords))


def restrict_module(module: FDModule, target: AlgebraDescriptor,
                    images: Mapping[str, HeckeElement],
                    weight_map=None) -> FDModule:
    """生成元の像に沿って引き戻した target 上の加群"""
    T_mats, theta_mats, theta_inv = [], [], []
    for i in range(1, target.num_simple + 1):
        T_mats.append(module.action(images[f"T{i}"]))
    for j in range(1, target.n + 1):
        theta_mats.append(module.action(images[f"theta{j}"]))
        inv_key = f"theta{j}^-1"
        theta_inv.append(module.action(images[inv_key]) if inv_key in images else None)
    if any(m is None for m in theta_inv):
        theta_inv = None
    hints = module.weight_hints
    if hints is not None and weight_map is not None:
        hints = [weight_map(w) for w in hints]
    return build_module(target, module.field, T_mats, theta_mats, theta_inv,
                        labels=module.labels, weight_hints=hints,
                        name=f"Res({module.name})")


def specialize_module(module: FDModule, t0: Number) -> FDModule:
    """t ↦ t0 で numeric 加群にする"""
    fld = module.field
    if not fld.is_symbolic:
        raise ConfigurationError("既に numeric の加群です")
    target = ScalarField(NUMERIC, fld.root_index, t0)

    def spec(mat: DomainMatrix) -> DomainMatrix:
        rows = [[target.from_rational(fld.specialize(x, t0)) for x in row] for row in mat.to_list()]
        return matrix(rows, target)

    return build_module(
        module.algebra, target,
        [spec(m) for m in module.T],
        [spec(m) for m in module.theta],
        [spec(m) for m in module.theta_inv],
        labels=module.labels, weight_hints=module.weight_hints,
        name=module.name,
    )


def rescale_module(module: FDModule, root_index: int) -> FDModule:
    """N を root_index に拡大した同じ加群（t ↦ t^k の代入、symbolic のみ）"""
    desc = module.algebra
    if root_index == desc.root_index:
        return module
    target_desc = rescale_root_index(desc, root_index)
    fld = module.field
    if not fld.is_symbolic:
        raise ConfigurationError(
            f"numeric 加群の N は変更できません: N={desc.root_index} → {root_index}（t0 が無理数になる）"
        )
    k = root_index // desc.root_index
    target = fld.with_root_index(root_index)

    def stretch(a: LaurentScalar) -> LaurentScalar:
        return LaurentScalar.from_dict(root_index, {e * k: c for e, c in a.as_dict().items()})

    def conv(mat: DomainMatrix) -> DomainMatrix:
        rows = []
        for row in mat.to_list():
            out = []
            for x in row:
                f = fld.to_fraction_scalar(x)
                out.append(target.from_fraction(FractionScalar(stretch(f.num), stretch(f.den))))
            rows.append(out)
        return matrix(rows, target)

    logger.debug(f"ルートインデックスを拡大: N={desc.root_index} → {root_index}")
    return build_module(
        target_desc, target,
        [conv(m) for m in module.T],
        [conv(m) for m in module.theta],
        [conv(m) for m in module.theta_inv],
        labels=module.labels, weight_hints=module.weight_hints,
        name=module.name,
    )


# =============================================================
# ワイヤ形式・略記
# =============================================================

def module_to_json(module: FDModule) -> Dict[str, Any]:
    fld = module.field
    mats = {}
    for name, mat in module.generator_matrices().items():
        if name.endswith('^-1'):
            continue
        mats[name] = [[fld.encode(x) for x in row] for row in mat.to_list()]
    payload = {
        'algebra': module.algebra.to_json(),
        'dim': module.dim,
        'scalars': fld.describe(),
        'matrices': mats,
    }
    if module.labels:
        payload['labels'] = list(module.labels)
    if module.weight_hints is not None:
        payload['weight_hints'] = [w.to_json() for w in module.weight_hints]
    return payload


def module_from_json(payload: Any, fld: ScalarField = None) -> FDModule:
    """加群ファイルを読み込み、関係式を検査する"""
    if not isinstance(payload, dict) or not {'algebra', 'dim', 'matrices'} <= set(payload):
        raise SchemaError("加群ファイルには algebra, dim, matrices が必要です")
    desc = descriptor_from_json(payload['algebra'])
    if fld is None:
        scal = payload.get('scalars', {})
        mode = scal.get('mode', SYMBOLIC)
        if mode not in (SYMBOLIC, NUMERIC):
            raise SchemaError(f"未知のスカラーモード: {mode}")
        fld = ScalarField(mode, desc.root_index, to_rational(scal.get('t0', 4)))
    fld = _field_for(desc, fld)
    d = payload['dim']
    if not isinstance(d, int) or d < 1:
        raise SchemaError(f"dim が不正です: {d!r}")
    mats = payload['matrices']

    def read(name: str) -> DomainMatrix:
        if name not in mats:
            raise SchemaError(f"行列 {name} がありません")
        rows = mats[name]
        if not isinstance(rows, list) or len(rows) != d or any(
                not isinstance(r, list) or len(r) != d for r in rows):
            raise SchemaError(f"行列 {name} のサイズが {d}×{d} ではありません")
        return matrix([[fld.decode(x) for x in r] for r in rows], fld)

    T_mats = [read(f"T{i}") for i in range(1, desc.num_simple + 1)]
    theta_mats = [read(f"theta{j}") for j in range(1, desc.n + 1)]
    hints = None
    if 'weight_hints' in payload:
        hints = [weight_from_json(w) for w in payload['weight_hints']]
    module = build_module(desc, fld, T_mats, theta_mats,
                          labels=payload.get('labels', ()), weight_hints=hints,
                          name=payload.get('name', 'external'))
    return ensure_relations(module)


def parse_module_spec(spec: str, descriptor_a: AlgebraDescriptor = None,
                      fld: ScalarField = None, n: int = None) -> FDModule:
    """'ps:λ1,…' または 'char:T=q|-1;theta=…' を ℋ_A 加群にする

    descriptor_a を省略した場合は指数から N を決めた GL_n の記述子を使う。
    """
    spec = spec.strip()
    nu = module_spec_weight(spec)
    desc = _gl_descriptor_for(nu, descriptor_a, n)
    if spec.startswith('ps:'):
        return principal_series(desc, nu, fld)
    t_text = _char_fields(spec).get('T', 'q')
    if t_text in ('q', '+q'):
        t_val = q_power(desc.root_index, desc.params.lambda_a)
    elif t_text == '-1':
        t_val = LaurentScalar.constant(desc.root_index, -1)
    else:
        raise SchemaError(f"T は q か -1: {t_text!r}")
    return character_module(desc, [t_val] * desc.num_simple, nu, fld)


def _char_fields(spec: str) -> Dict[str, str]:
    fields = {}
    for part in spec[5:].split(';'):
        if '=' not in part:
            raise SchemaError(f"char: の形式が不正です: {spec!r}")
        key, value = part.split('=', 1)
        fields[key.strip()] = value.strip()
    if 'theta' not in fields:
        raise SchemaError(f"char: に theta がありません: {spec!r}")
    return fields


def module_spec_weight(spec: str) -> Weight:
    """略記 'ps:…' / 'char:…' が指定するウェイト（加群は作らない）"""
    spec = spec.strip()
    if spec.startswith('ps:'):
        body = spec[3:]
    elif spec.startswith('char:'):
        body = _char_fields(spec)['theta']
    else:
        raise SchemaError(f"未知の加群指定です: {spec!r}")
    coords = [parse_coordinate(tok) for tok in body.split(',') if tok.strip()]
    if not coords:
        raise SchemaError(f"ウェイトが空です: {spec!r}")
    return Weight(tuple(coords))


def _gl_descriptor_for(nu: Weight, descriptor_a: Optional[AlgebraDescriptor], n: Optional[int]) -> AlgebraDescriptor:
    if descriptor_a is None:
        if n is not None and n != nu.rank:
            raise SchemaError(f"ウェイトの階数 {nu.rank} が n={n} と一致しません")
        return make_descriptor('A', nu.rank, extra_exponents=nu.exponents)
    if descriptor_a.n != nu.rank:
        raise SchemaError(f"ウェイトの階数 {nu.rank} が n={descriptor_a.n} と一致しません")
    needed = common_root_index(list(nu.exponents) + [Fraction(1, descriptor_a.root_index)])
    if descriptor_a.root_index % needed != 0:
        raise ConfigurationError(
            f"ウェイトの指数が N={descriptor_a.root_index} で表現できません: {nu}"
        )
    return descriptor_a


def format_weight(nu: Weight) -> str:
    return ', '.join(format_coordinate(s, e) for s, e in nu.coords)

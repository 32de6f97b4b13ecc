"""恒等式スイート（verify サブコマンド）

各スイートはチェック記録のリストを返す。記録は
{'check': 名前, 'provenance': 識別子, 'passed': bool, ...} の形。
"""

import logging
import random
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .errors import ConfigurationError, MisuseError, RelationViolationError, SingularWeightError
from .hecke_algebra import (
    HeckeElement,
    T,
    apply_weyl_to_theta,
    braid_relation,
    hecke_mul,
    intertwiner_simple,
    intertwiner_square,
    make_omega,
    theta,
    zero_element,
)
from .linalg import NUMERIC, SYMBOLIC, ScalarField, apply, matrices_equal
from .modules_fd import (
    apply_tau,
    induce_from_A,
    parse_module_spec,
    principal_series,
    rank_one_modules,
    rank_one_reducibility_points,
    relation_check,
    tau_operator,
    weight_report,
)
from .reducibility import (
    DEFAULT_SAMPLE_T0S,
    burnside_irreducible,
    finite_induction_check,
    induction_descriptor,
    numeric_crosscheck,
    verify_certificate,
)
from .reduction_spec import (
    clifford_bridge,
    delta_compatibility,
    named_instances,
    specialization_consistent,
    typeD_experiment,
)
from .root_data import (
    AlgebraDescriptor,
    Weight,
    coxeter_order,
    format_coordinate,
    make_descriptor,
    root_parameter,
    simple_reflection,
    weyl_group,
)
from .scalars import Number, monomial, q_power
from .weyl_characters import bipartitions, format_bipartition

logger = logging.getLogger(__name__)

SUITES = ('relations', 'intertwiners', 'rank1', 'finite', 'clifford')

DEFAULT_SEED = 20240607

# (family, n, m₊, m₋)
DEFAULT_RELATION_ALGEBRAS = (
    ('A', 2, None, None),
    ('B', 1, 1, 0),
    ('B', 2, 1, 0),
    ('B', 2, 2, 1),
    ('B', 2, 0, 0),
)

DEFAULT_INTERTWINER_ALGEBRAS = (
    ('A', 3, None, None),
    ('B', 2, 1, 0),
    ('B', 2, 2, 1),
)

# τ_n の交換関係を確かめる分離した誘導加群
DEFAULT_TAU_MODULES = (
    ('ps:2/5,1/5', 1, 0),
    ('char:T=q;theta=q^7/5,q^2/5', 2, 1),
    ('char:T=q;theta=q^9/5,q^4/5,q^-1/5', 1, 0),
)

DEFAULT_CLIFFORD_MODULES = (
    'ps:2/5,1/5',
    'ps:4/5,1/5',
    'ps:3/7,-1/7',
    'char:T=q;theta=q^7/5,q^2/5',
    'char:T=-1;theta=q^1/3,q^4/3',
)

# 階数 1 で予測点以外に試す ν
GENERIC_RANK_ONE_POINTS = (
    (1, Fraction(1, 4)),
    (1, Fraction(-1, 3)),
    (-1, Fraction(1, 5)),
    (1, Fraction(2, 7)),
    (-1, Fraction(-3, 4)),
    (1, Fraction(5, 3)),
    (-1, Fraction(7, 3)),
)


def _record(check: str, provenance: str, passed: bool, **detail) -> Dict[str, Any]:
    record = {'check': check, 'provenance': provenance, 'passed': bool(passed)}
    record.update(detail)
    return record


def _suite_result(name: str, checks: List[Dict[str, Any]]) -> Dict[str, Any]:
    passed = all(c['passed'] for c in checks)
    failed = [c['check'] for c in checks if not c['passed']]
    if failed:
        logger.error(f"スイート {name} で失敗: {failed}")
    else:
        logger.info(f"スイート {name}: {len(checks)} 件すべて成功")
    return {'suite': name, 'checks': checks, 'passed': passed}


def _descriptor(family: str, n: int, m_plus: Optional[Number], m_minus: Optional[Number],
                extra_exponents: Sequence[Number] = ()) -> AlgebraDescriptor:
    return make_descriptor(family, n, m_plus=m_plus, m_minus=m_minus, extra_exponents=extra_exponents)


# =============================================================
# ランダムな元
# =============================================================

def random_element(descriptor: AlgebraDescriptor, rng: random.Random, terms: int = 3,
                   theta_only: bool = False) -> HeckeElement:
    """係数 ±c·q^{k/N}、x ∈ {-1,0,1}ⁿ の項を数個持つ元"""
    group = weyl_group(descriptor.weyl_kind, descriptor.n)
    n_idx = descriptor.root_index
    out = zero_element(descriptor)
    for _ in range(terms):
        x = tuple(rng.randint(-1, 1) for _ in range(descriptor.n))
        coeff = monomial(n_idx, Fraction(rng.randint(-2, 2), n_idx),
                         rng.choice((1, -1, 2, Fraction(1, 2))))
        term = theta(descriptor, x)
        if not theta_only:
            term = hecke_mul(term, T(descriptor, rng.choice(group)))
        out = out + term * coeff
    return out


def _generic_weight(n: int) -> Weight:
    return Weight.from_exponents([Fraction(1, k + 2) + k for k in range(n)])


# =============================================================
# relations
# =============================================================

def relations_suite(
    algebras: Sequence[Tuple[str, int, Any, Any]] = DEFAULT_RELATION_ALGEBRAS,
    samples: int = 5,
    seed: int = DEFAULT_SEED,
    fld: ScalarField = None,
) -> Dict[str, Any]:
    """定義関係式（元のレベルと主系列の行列）と結合律"""
    rng = random.Random(seed)
    checks = []
    for family, n, mp, mm in algebras:
        desc = _descriptor(family, n, mp, mm)
        tag = desc.label()
        for i in range(1, desc.num_simple + 1):
            q = q_power(desc.root_index, root_parameter(desc, i))
            t = T(desc, i)
            checks.append(_record(f"{tag}: (T{i} − q^λ)(T{i} + 1) = 0", 'relations.quadratic',
                                  hecke_mul(t - q, t + 1).is_zero()))
            for j in range(i + 1, desc.num_simple + 1):
                lhs, rhs = braid_relation(desc, i, j)
                m = coxeter_order(desc.weyl_kind, desc.n, i, j)
                checks.append(_record(f"{tag}: braid T{i},T{j} (m={m})", 'relations.braid', lhs == rhs))

        nu = _generic_weight(n)
        ps_desc = _descriptor(family, n, mp, mm, nu.exponents)
        module = principal_series(ps_desc, nu, fld)
        failures = relation_check(module)
        checks.append(_record(f"{tag}: I({nu}) の関係式", 'relations.principal_series',
                              not failures, dim=module.dim, failures=failures))

        bad = 0
        for _ in range(samples):
            a, b, c = (random_element(desc, rng) for _ in range(3))
            if hecke_mul(hecke_mul(a, b), c) != hecke_mul(a, hecke_mul(b, c)):
                bad += 1
        checks.append(_record(f"{tag}: 結合律 ×{samples}", 'relations.associativity',
                              bad == 0, samples=samples, failures=bad))
        logger.debug(f"関係式スイート: {tag} 完了")
    return _suite_result('relations', checks)


# =============================================================
# intertwiners
# =============================================================

def _tau_checks(spec: str, m_plus: Number, m_minus: Number, fld: ScalarField = None) -> List[Dict[str, Any]]:
    pi = parse_module_spec(spec, fld=fld)
    desc, pi2 = induction_descriptor(pi, m_plus, m_minus)
    module = induce_from_A(desc, pi2)
    n = desc.n
    tag = f"{desc.label()} Ind({spec})"
    try:
        tau = tau_operator(module, n)
    except SingularWeightError as e:
        return [_record(f"{tag}: τ_{n} が定義できる", 'intertwiners.tau', False, error=str(e))]
    ident = module.identity()
    t_prev = module.T[n - 2]
    lhs = tau * t_prev * tau * t_prev
    rhs = t_prev * tau * t_prev * tau
    checks = [
        _record(f"{tag}: τ_{n}² = 1", 'intertwiners.tau_square', matrices_equal(tau * tau, ident)),
        _record(f"{tag}: τ_{n}T_{n - 1}τ_{n}T_{n - 1} = T_{n - 1}τ_{n}T_{n - 1}τ_{n}",
                'intertwiners.tau_commutation', matrices_equal(lhs, rhs)),
    ]
    mismatched = 0
    eigen = weight_report(module).eigenvectors()
    for _, v in eigen:
        if apply_tau(module, n, v) != apply(tau, v):
            mismatched += 1
    checks.append(_record(f"{tag}: apply_tau と τ 作用素が固有ベクトル上で一致",
                          'intertwiners.tau_eigenvectors', mismatched == 0,
                          eigenvectors=len(eigen), failures=mismatched))
    return checks


def intertwiners_suite(
    algebras: Sequence[Tuple[str, int, Any, Any]] = DEFAULT_INTERTWINER_ALGEBRAS,
    samples: int = 5,
    seed: int = DEFAULT_SEED,
    tau_modules: Sequence[Tuple[str, Number, Number]] = DEFAULT_TAU_MODULES,
    fld: ScalarField = None,
) -> Dict[str, Any]:
    """R_α² の閉じた形、fR_α = R_α s_α(f)、R の組紐関係、Ω の不変性、τ_n の交換関係"""
    rng = random.Random(seed)
    checks = []
    for family, n, mp, mm in algebras:
        desc = _descriptor(family, n, mp, mm)
        tag = desc.label()
        r = {i: intertwiner_simple(desc, i) for i in range(1, desc.num_simple + 1)}
        for i, r_i in r.items():
            checks.append(_record(f"{tag}: R_{i}² の閉じた形", 'intertwiners.square',
                                  hecke_mul(r_i, r_i) == intertwiner_square(desc, i)))
            s_i = simple_reflection(desc.weyl_kind, desc.n, i)
            bad = 0
            for _ in range(samples):
                f = random_element(desc, rng, theta_only=True)
                if hecke_mul(f, r_i) != hecke_mul(r_i, apply_weyl_to_theta(s_i, f)):
                    bad += 1
            checks.append(_record(f"{tag}: f R_{i} = R_{i} s_{i}(f) ×{samples}",
                                  'intertwiners.equivariance', bad == 0, failures=bad))
        for i in r:
            for j in r:
                if j <= i:
                    continue
                lhs, rhs = braid_relation(desc, i, j, elements=r)
                checks.append(_record(f"{tag}: braid R_{i},R_{j}", 'intertwiners.braid', lhs == rhs))
        if desc.family == 'B':
            omega = make_omega(desc)
            invariant = all(
                apply_weyl_to_theta(simple_reflection(desc.weyl_kind, desc.n, i), omega) == omega
                for i in r
            )
            checks.append(_record(f"{tag}: Ω は W 不変", 'intertwiners.omega', invariant))

    for spec, mp, mm in tau_modules:
        checks.extend(_tau_checks(spec, mp, mm, fld))
    return _suite_result('intertwiners', checks)


# =============================================================
# rank1
# =============================================================

def _rank_one_descriptor(family: str, lam: Fraction, lam_star: Optional[Fraction], nu: Weight) -> AlgebraDescriptor:
    if family == 'so3':
        return make_descriptor('B', 1, lam=lam, lam_star=lam_star, extra_exponents=nu.exponents)
    return make_descriptor('C', 1, lam=lam, extra_exponents=nu.exponents)


def rank_one_table(
    family: str = 'so3',
    lam: Number = 1,
    lam_star: Number = None,
    generic: int = 5,
    fld: ScalarField = None,
    sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
    crosscheck: bool = True,
    max_words: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """予測される可約点と一般の点での I(ν) の判定表"""
    family = family.lower()
    if family not in ('so3', 'sl2'):
        raise ConfigurationError(f"階数 1 の族は so3 か sl2: {family}")
    lam = Fraction(lam)
    if family == 'so3':
        lam_star = Fraction(lam_star) if lam_star is not None else lam
    elif lam_star is not None:
        raise ConfigurationError("SL(2) 族に λ* はありません")

    predicted = rank_one_reducibility_points(family, lam, lam_star)
    predicted_coords = {w.coords[0] for w in predicted}
    others = [Weight((c,)) for c in GENERIC_RANK_ONE_POINTS if c not in predicted_coords][:generic]

    rows = []
    for nu, expect in [(w, True) for w in predicted] + [(w, False) for w in others]:
        desc = _rank_one_descriptor(family, lam, lam_star, nu)
        module = principal_series(desc, nu, fld)
        verdict = burnside_irreducible(module, sample_t0s, max_words)
        row = {
            'nu': format_coordinate(*nu.coords[0]),
            'predicted_reducible': expect,
            'verdict': verdict.status,
            'certificate_verified': verify_certificate(module, verdict),
        }
        ok = row['certificate_verified'] and verdict.is_reducible == expect \
            and (expect or verdict.is_irreducible)
        if crosscheck and module.field.is_symbolic:
            row['crosscheck'] = numeric_crosscheck(module, sample_t0s, verdict, max_words)
            ok = ok and all(c['agrees'] for c in row['crosscheck'])
        row['passed'] = ok
        rows.append(row)
    return rows


def rank1_suite(
    family: str = 'so3',
    lam: Number = 1,
    lam_star: Number = None,
    generic: int = 5,
    fld: ScalarField = None,
    sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
    max_words: Optional[int] = None,
) -> Dict[str, Any]:
    family = family.lower()
    provenance = f"rank1.{family}.points"
    checks = []
    for row in rank_one_table(family, lam, lam_star, generic, fld, sample_t0s,
                              max_words=max_words):
        checks.append(_record(f"I({row['nu']})", provenance, row['passed'],
                              **{k: v for k, v in row.items() if k not in ('passed',)}))
    try:
        modules = rank_one_modules(family, lam, lam_star, fld)
        checks.append(_record("四つの一次元加群の関係式", f"rank1.{family}.characters",
                              len(modules) == 4, names=[m.name for m in modules]))
    except RelationViolationError as e:
        checks.append(_record("四つの一次元加群の関係式", f"rank1.{family}.characters",
                              False, failures=e.args[1] if len(e.args) > 1 else str(e)))
    result = _suite_result('rank1', checks)
    result['table'] = {'family': family, 'lambda': str(Fraction(lam)),
                       'lambda_star': None if lam_star is None else str(Fraction(lam_star))}
    return result


# =============================================================
# finite
# =============================================================

def finite_suite(n_values: Sequence[int] = (2, 3)) -> Dict[str, Any]:
    """全ての二重分割ラベルと σ0 ∈ {trivial, steinberg} で非全射性の障害を確かめる"""
    checks = []
    for n in n_values:
        for bp in bipartitions(n):
            label = format_bipartition(bp)
            for sigma0 in ('trivial', 'steinberg'):
                report = finite_induction_check(n, label, sigma0)
                failed = [c['check'] for c in report['checks'] if not c['passed']]
                checks.append(_record(f"n={n} σ={label} σ0={sigma0}", report['provenance'],
                                      report['passed'], failures=failed))
    return _suite_result('finite', checks)


# =============================================================
# clifford
# =============================================================

def clifford_suite(
    n_values: Sequence[int] = (2, 3),
    modules: Sequence[str] = DEFAULT_CLIFFORD_MODULES,
    typeD_modules: Sequence[str] = ('ps:2/5,1/5', 'ps:4/5,1/5'),
    fld: ScalarField = None,
    sample_t0s: Sequence[Number] = DEFAULT_SAMPLE_T0S,
    max_words: Optional[int] = None,
) -> Dict[str, Any]:
    """ℋ(SO(2n)) ↪ ℋ_B(0,0) の関係式、δ 捻りとの整合、D 型の補題"""
    checks = []
    for n in n_values:
        bridge = clifford_bridge(n)
        for name, ok in bridge.relation_checks():
            checks.append(_record(f"n={n}: {name}", 'clifford.relations', ok))

    for spec in modules:
        pi = parse_module_spec(spec, fld=fld)
        desc, pi2 = induction_descriptor(pi, 0, 0)
        induced = induce_from_A(desc, pi2)
        checks.append(_record(f"δ 捻り整合 Ind({spec})", 'clifford.delta',
                              delta_compatibility(induced), dim=induced.dim))

    for spec in typeD_modules:
        pi = parse_module_spec(spec, fld=fld)
        try:
            report = typeD_experiment(pi, sample_t0s, max_words)
        except MisuseError as e:
            checks.append(_record(f"D 型の補題 π={spec}", 'clifford.typeD', False, error=str(e)))
            continue
        checks.append(_record(f"D 型の補題 π={spec}", report['provenance'], report['passed'],
                              verdict_B=report['verdict_B']['status'],
                              verdict_D=report['verdict_D']['status']))

    for entry in named_instances():
        checks.append(_record(f"特殊化 {entry['instance']}", 'clifford.specializations',
                              specialization_consistent(entry), triple=entry['triple']))
    return _suite_result('clifford', checks)


# =============================================================
# 入口
# =============================================================

SUITE_RUNNERS: Dict[str, Callable[..., Dict[str, Any]]] = {
    'relations': relations_suite,
    'intertwiners': intertwiners_suite,
    'rank1': rank1_suite,
    'finite': finite_suite,
    'clifford': clifford_suite,
}


def run_suite(name: str, **options) -> Dict[str, Any]:
    """名前でスイートを実行する（未知の名前は ConfigurationError）"""
    runner = SUITE_RUNNERS.get(name)
    if runner is None:
        raise ConfigurationError(f"未知のスイート: {name}（候補: {', '.join(SUITES)}）")
    logger.info(f"スイート開始: {name}")
    return runner(**options)


def scalar_field(mode: str = SYMBOLIC, t0: Number = 4) -> Optional[ScalarField]:
    """CLI のモード指定から構成子に渡す体（symbolic なら既定に任せる）"""
    if mode == NUMERIC:
        return ScalarField(NUMERIC, 1, t0)
    return None

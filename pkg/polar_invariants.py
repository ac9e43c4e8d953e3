"""
Полярные инварианты одной аффинной гиперповерхности

Модуль содержит:
- последовательность α^(i) (глобальные общие полярные кратности) по уровням сечений;
- поправки β^(i) с явным происхождением значения;
- эйлерову характеристику по уровням, дефект Гаусса-Бонне, аффинный класс;
- пакет чисел Милнора-Тессье в аффинных особых точках;
- данные на бесконечности и формулы для классов B1 / B0 / F и формулу для кривых.

Полная кривизна всегда выдаётся целым числом в единицах ω_n.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.rings import PolyElement

from config import config
from errors import (
    ClassViolationError, GenericityError, InconsistencyError, InvariantError,
    MissingBetaError, NonIsolatedSingularityError, UnsupportedInfinityError,
)
from groebner import (
    INFINITE, IdealBasis, dimension_away_from, krull_dimension, quotient_dimension, saturate,
)
from hypersurface import (
    ClassTag, Classification, Hypersurface, InfinityAggregate, PencilChoice, ProjectiveScene,
    SingularPointData, Location, aggregate_mu_at_infinity, classify, infinity_points,
    local_milnor_number, milnor_sum_projective, projective_scene, rational_singular_points,
    sectional_milnor_number, singular_locus_ideal, slice_hypersurface, with_agreement,
)
from polynomials import jacobian_ideal_generators, squarefree_part, total_degree

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Типы
# ---------------------------------------------------------------------------

class BetaProvenance(str, Enum):
    COMPUTED_ISOLATED = 'COMPUTED_ISOLATED'
    PAPER_SUPPLIED = 'PAPER_SUPPLIED'
    RESIDUAL = 'RESIDUAL'
    UNKNOWN = 'UNKNOWN'


@dataclass
class AlphaSequence:
    """[α^(0), …, α^(n)]; α^(0) = deg Y"""
    alpha: List[int]
    slice_trace: List[Dict[str, Any]] = field(default_factory=list)
    trials_agreed: int = 0
    seeds: List[int] = field(default_factory=list)

    @property
    def top(self) -> int:
        return self.alpha[-1]


@dataclass
class BetaSequence:
    beta: List[Optional[int]]
    provenance: List[BetaProvenance]

    @property
    def unknown_levels(self) -> List[int]:
        return [i for i, b in enumerate(self.beta) if b is None]

    def to_dict(self) -> Dict[str, Any]:
        return {'values': list(self.beta), 'provenance': [p.value for p in self.provenance]}


@dataclass
class MilnorPackage:
    """Аффинные особые точки: μ^⟨n⟩, μ^⟨n-1⟩ по точкам и суммарно"""
    points: List[SingularPointData]
    residual: bool
    sum_mu: int
    sum_mu_section: int

    @property
    def local_loss(self) -> int:
        """Суммарная локальная потеря кривизны Σ (μ + μ^⟨n-1⟩)"""
        return self.sum_mu + self.sum_mu_section


@dataclass
class InfinityData:
    """Особенности на бесконечности и агрегаты, нужные формулам"""
    points: List[SingularPointData] = field(default_factory=list)
    residual: bool = False
    mu_closure: Optional[int] = None
    mu_slice_at_infinity: Optional[int] = None
    mu_sliced_closure: Optional[int] = None
    mu_sliced_infinity: Optional[int] = None
    chi_infinity: Optional[int] = None
    refusals: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'points': [p.to_dict() for p in self.points],
            'residual': self.residual,
            'mu_closure': self.mu_closure,
            'mu_slice_at_infinity': self.mu_slice_at_infinity,
            'mu_sliced_closure': self.mu_sliced_closure,
            'mu_sliced_infinity': self.mu_sliced_infinity,
            'chi_infinity': self.chi_infinity,
        }


@dataclass
class FormulaEvaluation:
    """Значение формулы по слагаемым и величина, с которой оно сверяется"""
    name: str
    terms: Dict[str, int]
    value: int
    expected: Optional[int] = None

    @property
    def agrees(self) -> Optional[bool]:
        if self.expected is None:
            return None
        return self.value == self.expected

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'terms': dict(self.terms),
            'value': self.value,
            'expected': self.expected,
            'status': 'PASS' if self.agrees else ('SKIPPED' if self.agrees is None else 'FAIL'),
        }


@dataclass
class InvariantReport:
    """Все целочисленные инварианты одной гиперповерхности"""
    hypersurface: Hypersurface
    classification: Classification
    alpha: AlphaSequence
    beta: BetaSequence
    chi: Optional[int]
    euler_levels: List[Optional[int]]
    gb_defect: Optional[int]
    milnor: Optional[MilnorPackage]
    infinity: InfinityData
    formulas: List[FormulaEvaluation] = field(default_factory=list)
    checks: List[Dict[str, Any]] = field(default_factory=list)
    affine_class: Optional[int] = None
    alpha_infinity: Optional[int] = None
    seed: int = 0
    trials: int = 0

    @property
    def degree(self) -> int:
        return self.hypersurface.d

    @property
    def total_curvature_units(self) -> int:
        return self.alpha.top

    @property
    def signed_curvature_units(self) -> int:
        return (-1) ** self.hypersurface.n * self.alpha.top


# ---------------------------------------------------------------------------
# α^(n): точки Морса общей линейной функции на Y_reg
# ---------------------------------------------------------------------------

def polar_minors(f: PolyElement, h: Sequence[int]) -> List[PolyElement]:
    """Все 2×2 миноры матрицы [∇f; h]"""
    grads = [f.diff(gen) for gen in f.ring.gens]
    if len(h) != len(grads):
        raise ValueError(f"Форма пучка длины {len(h)} для {len(grads)} переменных")
    minors = []
    for i in range(len(grads)):
        for j in range(i + 1, len(grads)):
            minor = grads[i] * h[j] - grads[j] * h[i]
            if minor:
                minors.append(minor)
    return minors


def polar_direction(f: PolyElement, h: Sequence[int]) -> PolyElement:
    """g = h·∇f: на V(f, миноры) обращается в ноль ровно на Sing Y"""
    result = f.ring.zero
    for gen, c in zip(f.ring.gens, h):
        result += f.diff(gen) * c
    return result


def alpha_top(Y: Hypersurface, pencil: PencilChoice) -> int:
    """
    α^(n) = dim k[x]/⟨f, миноры [∇f; h]⟩ вне Sing Y.

    Для гладкой Y считается сразу фактор; иначе точки на Sing Y отбрасываются
    переменной Рабиновича по g = h·∇f.
    """
    h = pencil.h
    I = IdealBasis(Y.ring, [Y.f] + polar_minors(Y.f, h))
    if krull_dimension(singular_locus_ideal(Y)) < 0:
        count = quotient_dimension(I)
    else:
        count = dimension_away_from(I, polar_direction(Y.f, h))
    if count == INFINITE:
        raise GenericityError("Полярное множество не нульмерно: пучок не общий", h=list(h))

    bound = Y.d * (Y.d - 1) ** Y.n
    if count > bound:
        raise InconsistencyError(f"α^({Y.n}) = {count} больше границы d(d-1)^n = {bound}")
    return int(count)


def level_hypersurfaces(Y: Hypersurface, pencil: PencilChoice) -> List[Tuple[Hypersurface, PencilChoice]]:
    """Уровни [Y_1, …, Y_n = Y] общих сечений вместе с их пучками"""
    levels = [(Y, pencil)]
    current, current_pencil = Y, pencil
    for _ in range(Y.n - 1):
        current = slice_hypersurface(current, current_pencil.slices[0])
        current_pencil = current_pencil.sliced()
        levels.append((current, current_pencil))
    return list(reversed(levels))


# ---------------------------------------------------------------------------
# Аффинные суммы чисел Милнора
# ---------------------------------------------------------------------------

def affine_milnor_sum(Y: Hypersurface) -> int:
    """Σ_q μ_q = dim k[x]/(J + ⟨f^{n+1}⟩) по всем особым точкам Y"""
    I = IdealBasis(Y.ring, jacobian_ideal_generators(Y.f) + [Y.f ** (Y.n + 1)])
    total = quotient_dimension(I)
    if total == INFINITE:
        raise NonIsolatedSingularityError("Особенности Y не изолированы")
    return int(total)


def affine_polar_sum(Y: Hypersurface, pencil: PencilChoice) -> int:
    """
    Σ_q (μ_q + μ_q^⟨n-1⟩): кратность пересечения полярной кривой Γ с Y в Sing Y.
    Γ = ⟨миноры⟩ : g^∞, затем точки Γ ∩ Y на Sing Y.
    """
    h = pencil.h
    g = polar_direction(Y.f, h)
    gamma = saturate(IdealBasis(Y.ring, polar_minors(Y.f, h)), g)
    meet = IdealBasis(Y.ring, list(gamma.generators) + [Y.f])
    total = quotient_dimension(meet)
    if total == INFINITE:
        raise GenericityError("Полярная кривая не пересекает Y в конечном числе точек")
    away = dimension_away_from(IdealBasis(Y.ring, list(meet.generators)), g)
    return int(total - away)


def _sectional_sum(Y: Hypersurface, pencil: PencilChoice) -> Optional[int]:
    """Σ μ^⟨m-1⟩ по особым точкам уровня; None, если особенности не изолированы"""
    I = singular_locus_ideal(Y)
    dim = krull_dimension(I)
    if dim < 0:
        return 0
    if dim > 0:
        return None
    found = rational_singular_points(I)
    if found.residual:
        return affine_polar_sum(Y, pencil) - affine_milnor_sum(Y)
    return sum(sectional_milnor_number(Y.f, q, pencil.section) for q in found.points)


def milnor_package(Y: Hypersurface, pencil: PencilChoice) -> MilnorPackage:
    """μ^⟨n⟩ и μ^⟨n-1⟩ в каждой рациональной особой точке и суммы по всем точкам"""
    I = singular_locus_ideal(Y)
    dim = krull_dimension(I)
    if dim < 0:
        return MilnorPackage([], False, 0, 0)
    if dim > 0:
        raise NonIsolatedSingularityError(f"Особое множество Y имеет размерность {dim}")

    found = rational_singular_points(I)
    points = [
        SingularPointData(Location.FINITE, tuple(q), local_milnor_number(Y.f, q),
                          sectional_milnor_number(Y.f, q, pencil.section))
        for q in found.points
    ]
    sum_mu = affine_milnor_sum(Y)
    if found.residual:
        sum_mu_section = affine_polar_sum(Y, pencil) - sum_mu
    else:
        sum_mu_section = sum(p.mu_section for p in points)
        if sum(p.mu for p in points) != sum_mu:
            raise InconsistencyError("Сумма μ по точкам не совпала с агрегатом",
                                     per_point=sum(p.mu for p in points), aggregate=sum_mu)
    return MilnorPackage(points, found.residual, sum_mu, sum_mu_section)


# ---------------------------------------------------------------------------
# α и β по уровням
# ---------------------------------------------------------------------------

def _level_values(Y: Hypersurface, pencil: PencilChoice) -> Tuple[Tuple[int, ...], Tuple[Optional[int], ...]]:
    alpha = [Y.d]
    beta: List[Optional[int]] = [0]
    for level, (Yi, pencil_i) in enumerate(level_hypersurfaces(Y, pencil), start=1):
        alpha.append(alpha_top(Yi, pencil_i))
        beta.append(_sectional_sum(Yi, pencil_i))
        logger.debug("Уровень %d: α=%d, β=%s", level, alpha[-1], beta[-1])
    return tuple(alpha), tuple(beta)


def _slice_trace(pencil: PencilChoice) -> List[Dict[str, Any]]:
    return [{'coefficients': list(s.coefficients), 'constant': s.constant} for s in pencil.slices]


def alpha_sequence(Y: Hypersurface, pencil: PencilChoice) -> AlphaSequence:
    """α^(i) на Y, рассечённой n − i общими аффинными гиперплоскостями"""
    alpha, _ = _level_values(Y, pencil)
    return AlphaSequence(list(alpha), _slice_trace(pencil), 1, [pencil.seed])


def beta_sequence(Y: Hypersurface, pencil: PencilChoice,
                  supplied: Optional[Dict[int, int]] = None,
                  computed: Optional[Sequence[Optional[int]]] = None) -> BetaSequence:
    """
    β^(i): на уровне с изолированными особенностями — Σ μ^⟨i-1⟩ этого уровня,
    иначе значение из таблицы (PAPER_SUPPLIED) или неизвестно.
    """
    supplied = supplied or {}
    if computed is None:
        _, computed = _level_values(Y, pencil)
    beta: List[Optional[int]] = []
    provenance: List[BetaProvenance] = []
    for level, value in enumerate(computed):
        if value is not None:
            if level in supplied and supplied[level] != value:
                raise InconsistencyError(f"β^({level}): вычислено {value}, в таблице {supplied[level]}",
                                         level=level)
            beta.append(value)
            provenance.append(BetaProvenance.COMPUTED_ISOLATED)
        elif level in supplied:
            beta.append(int(supplied[level]))
            provenance.append(BetaProvenance.PAPER_SUPPLIED)
        else:
            beta.append(None)
            provenance.append(BetaProvenance.UNKNOWN)
    return BetaSequence(beta, provenance)


def agreed_levels(Y: Hypersurface, seed: Optional[int] = None,
                  trials: Optional[int] = None) -> Tuple[AlphaSequence, Tuple[Optional[int], ...], PencilChoice]:
    """α и вычислимые β, согласованные по независимым пучкам"""
    record = with_agreement(lambda p: _level_values(Y, p), Y.n + 1, 'α/β', seed, trials)
    alpha, beta = record.value
    pencil = record.pencils[0]
    sequence = AlphaSequence(list(alpha), _slice_trace(pencil), len(record.pencils), record.seeds)
    return sequence, beta, pencil


# ---------------------------------------------------------------------------
# Эйлерова характеристика и дефект Гаусса-Бонне
# ---------------------------------------------------------------------------

def euler_levels(alpha: AlphaSequence, beta: BetaSequence) -> List[Optional[int]]:
    """χ^i = χ^{i-1} + (−1)^i (α^(i) + β^(i)); None начиная с первого неизвестного β"""
    levels: List[Optional[int]] = []
    running: Optional[int] = 0
    for i, (a, b) in enumerate(zip(alpha.alpha, beta.beta)):
        if running is None or b is None:
            running = None
        else:
            running += (-1) ** i * (a + b)
        levels.append(running)
    return levels


def euler_characteristic(Y: Hypersurface, alpha: AlphaSequence, beta: BetaSequence) -> int:
    missing = beta.unknown_levels
    if missing:
        raise MissingBetaError(f"Нет поправки β на уровнях {missing}", levels=missing)
    if len(alpha.alpha) != Y.n + 1:
        raise ValueError("Длина последовательности α не равна n + 1")
    return euler_levels(alpha, beta)[-1]


def solve_residual_beta(alpha: AlphaSequence, beta: BetaSequence, chi: int) -> BetaSequence:
    """Единственное неизвестное β^(k) из известной χ(Y)"""
    missing = beta.unknown_levels
    if len(missing) > 1:
        raise MissingBetaError(f"Неизвестно более одного уровня β: {missing}", levels=missing)
    if not missing:
        if euler_levels(alpha, beta)[-1] != chi:
            raise InconsistencyError("χ по α и β не совпала с известным значением", chi=chi)
        return beta
    k = missing[0]
    rest = sum((-1) ** i * (a + b) for i, (a, b) in enumerate(zip(alpha.alpha, beta.beta)) if i != k)
    value = (-1) ** k * (chi - rest) - alpha.alpha[k]
    values = list(beta.beta)
    provenance = list(beta.provenance)
    values[k] = value
    provenance[k] = BetaProvenance.RESIDUAL
    logger.info("β^(%d) = %d восстановлено из χ = %d", k, value, chi)
    return BetaSequence(values, provenance)


def gauss_bonnet_sectional(n: int, sum_mu_section: int, chi_slice: int) -> int:
    """GB через общее сечение: (−1)^{n-1} Σ μ^⟨n-1⟩ − χ(Y∩𝓗)"""
    return (-1) ** (n - 1) * sum_mu_section - chi_slice


def gauss_bonnet_defect(n: int, alpha_n: int, chi: int,
                        sum_mu_section: Optional[int] = None,
                        chi_slice: Optional[int] = None) -> int:
    """
    GB(Y) = (−1)^n α^(n) − χ(Y). Если даны данные сечения, сверяется
    с gauss_bonnet_sectional; расхождение — ошибка.
    """
    defect = (-1) ** n * alpha_n - chi
    if sum_mu_section is not None and chi_slice is not None:
        second = gauss_bonnet_sectional(n, sum_mu_section, chi_slice)
        if second != defect:
            raise InconsistencyError(f"GB по определению {defect}, по сечению {second}",
                                     definition=defect, sectional=second)
    return defect


# ---------------------------------------------------------------------------
# Эйлерова характеристика на бесконечности
# ---------------------------------------------------------------------------

def chi_smooth_projective(n: int, d: int) -> int:
    """χ^{n,d}: эйлерова характеристика гладкой гиперповерхности степени d в ℙ^n"""
    if n < 1 or d < 1:
        raise ValueError("Нужны n ≥ 1 и d ≥ 1")
    return ((1 - d) ** (n + 1) - 1) // d + (n + 1)


def chi_projective_form(G: PolyElement) -> int:
    """
    χ проективного множества {G = 0} ⊂ ℙ^{m-1} однородной формы от m переменных.
    Берётся приведённая структура; допускаются гладкая и изолированно-особая.
    """
    n = G.ring.ngens - 1
    reduced = squarefree_part(G)
    r = total_degree(reduced)
    if r < 1:
        raise UnsupportedInfinityError("Пустое множество на бесконечности")
    partials = [p for p in jacobian_ideal_generators(reduced) if p]
    cone_dim = krull_dimension(IdealBasis(reduced.ring, partials)) if partials else n + 1
    if cone_dim <= 0:
        return chi_smooth_projective(n, r)
    if cone_dim > 1:
        raise UnsupportedInfinityError(
            f"Особое множество приведённой части на бесконечности имеет размерность {cone_dim - 1}")
    # сглаживание: каждая изолированная точка сдвигает χ на (−1)^{dim} μ
    mu = milnor_sum_projective(reduced)
    return chi_smooth_projective(n, r) + (-1) ** n * mu


def chi_infinity(P: ProjectiveScene) -> int:
    """χ(Ȳ∩H^∞) = χ({f_d = 0} ⊂ ℙ^n)"""
    return chi_projective_form(P.infinity_part)


# ---------------------------------------------------------------------------
# Данные на бесконечности
# ---------------------------------------------------------------------------

def _refusal(name: str, error: InvariantError) -> Dict[str, Any]:
    status = 'UNSUPPORTED' if isinstance(error, UnsupportedInfinityError) else 'REFUSED'
    return {'name': name, 'status': status, **error.to_dict()}


def collect_infinity_data(Y: Hypersurface, pencil: PencilChoice) -> InfinityData:
    """Все агрегаты на бесконечности; неподдерживаемые структуры записываются отказами"""
    scene = projective_scene(Y)
    data = InfinityData()

    def attempt(name: str, compute):
        try:
            return compute()
        except (NonIsolatedSingularityError, UnsupportedInfinityError, GenericityError) as e:
            logger.info("%s: %s", name, e)
            data.refusals.append(_refusal(name, e))
        except InvariantError as e:
            if e.code != 'NOT_ZERO_DIMENSIONAL':
                raise
            data.refusals.append(_refusal(name, e))
        return None

    found = attempt('infinity_points', lambda: infinity_points(scene, pencil))
    if found is not None:
        data.points, data.residual = found
    data.mu_closure = attempt('mu_closure',
                              lambda: aggregate_mu_at_infinity(scene, InfinityAggregate.CLOSURE))
    data.mu_slice_at_infinity = attempt(
        'mu_slice_at_infinity', lambda: aggregate_mu_at_infinity(scene, InfinityAggregate.SLICE_AT_INFINITY))
    if Y.n == 1:
        # общая прямая пересекает C̄ в d гладких точках, на H^∞ пусто
        data.mu_sliced_closure = 0
        data.mu_sliced_infinity = 0
    else:
        data.mu_sliced_infinity = attempt(
            'mu_sliced_infinity', lambda: aggregate_mu_at_infinity(scene, InfinityAggregate.SLICED_BY_H, pencil))
        data.mu_sliced_closure = attempt(
            'mu_sliced_closure',
            lambda: aggregate_mu_at_infinity(projective_scene(slice_hypersurface(Y, pencil.slices[0])),
                                             InfinityAggregate.CLOSURE))
    data.chi_infinity = attempt('chi_infinity', lambda: chi_infinity(scene))
    return data


# ---------------------------------------------------------------------------
# Формулы для классов
# ---------------------------------------------------------------------------

@dataclass
class FormulaInputs:
    """Слагаемые формул: аффинные суммы и агрегаты на бесконечности"""
    n: int
    d: int
    classification: Classification
    sum_mu: int = 0
    sum_mu_section: int = 0
    infinity: InfinityData = field(default_factory=InfinityData)

    @classmethod
    def from_parts(cls, Y: Hypersurface, classification: Classification,
                   milnor: Optional[MilnorPackage], infinity: InfinityData) -> 'FormulaInputs':
        return cls(Y.n, Y.d, classification,
                   milnor.sum_mu if milnor else 0,
                   milnor.sum_mu_section if milnor else 0,
                   infinity)


def _require(data: FormulaInputs, name: str, *tags: ClassTag) -> None:
    if not data.classification.includes(*tags):
        raise ClassViolationError(f"{name}: класс {data.classification.tag.value} не допускается",
                                  allowed=[t.value for t in tags])


def _term(value: Optional[int], name: str) -> int:
    if value is None:
        raise UnsupportedInfinityError(f"Слагаемое {name} не вычислено")
    return value


def b1_defect_formula(Y: Hypersurface, data: FormulaInputs, expected: Optional[int] = None) -> FormulaEvaluation:
    """GB через (−1)^n (d−1)^n − 1 и суммы μ сечения"""
    _require(data, 'b1_defect_formula', ClassTag.B1_TYPE)
    n, d = data.n, data.d
    terms = {
        'base': (-1) ** n * (d - 1) ** n - 1,
        'affine_mu_section': (-1) ** (n + 1) * data.sum_mu_section,
        'sliced_closure': (-1) ** (n + 1) * _term(data.infinity.mu_sliced_closure, 'μ_p(Ȳ∩𝓗̄)'),
        'sliced_infinity': (-1) ** (n + 1) * _term(data.infinity.mu_sliced_infinity, 'μ(Ȳ∩𝓗̄∩H∞)'),
    }
    return FormulaEvaluation('b1_defect', terms, sum(terms.values()), expected)


def b0_total_curvature_formula(Y: Hypersurface, data: FormulaInputs,
                               expected: Optional[int] = None) -> FormulaEvaluation:
    """Знаковая полная кривизна (−1)^n α^(n) для класса B0"""
    _require(data, 'b0_total_curvature_formula', ClassTag.B0_TYPE)
    n, d = data.n, data.d
    sign = (-1) ** (n + 1)
    terms = {
        'general': (-1) ** n * d * (d - 1) ** n,
        'affine_loss': sign * (data.sum_mu + data.sum_mu_section),
        'closure_at_infinity': sign * _term(data.infinity.mu_closure, 'Σμ_p(Ȳ)'),
        'sliced_infinity': sign * _term(data.infinity.mu_sliced_infinity, 'μ(Ȳ∩𝓗̄∩H∞)'),
        'chi_general': chi_smooth_projective(n, d),
        'chi_infinity': -_term(data.infinity.chi_infinity, 'χ(Ȳ∩H∞)'),
    }
    return FormulaEvaluation('b0_total_curvature', terms, sum(terms.values()), expected)


def f_type_formula(Y: Hypersurface, data: FormulaInputs, expected: Optional[int] = None) -> FormulaEvaluation:
    """α^(n) = d(d−1)^n − Σ(μ+μ^⟨n-1⟩) − Σ_p λ_p для класса F"""
    _require(data, 'f_type_formula', ClassTag.F_TYPE)
    n, d = data.n, data.d
    terms = {
        'general': d * (d - 1) ** n,
        'affine_loss': -(data.sum_mu + data.sum_mu_section),
        'closure_at_infinity': -_term(data.infinity.mu_closure, 'Σμ_p(Ȳ)'),
        'slice_at_infinity': -_term(data.infinity.mu_slice_at_infinity, 'Σμ_p(Ȳ∩H∞)'),
    }
    return FormulaEvaluation('f_type', terms, sum(terms.values()), expected)


def risler_curve_formula(C: Hypersurface, data: Optional[FormulaInputs] = None,
                         expected: Optional[int] = None) -> FormulaEvaluation:
    """d² − 2d + r − Σ_p μ_p(C̄) для гладкой аффинной кривой, r — число асимптотических направлений"""
    if C.n != 1:
        raise ClassViolationError("Формула применима только к плоским кривым")
    if krull_dimension(singular_locus_ideal(C)) >= 0:
        raise ClassViolationError("Формула применима только к гладким аффинным кривым")
    d = C.d
    r = total_degree(squarefree_part(C.top_form))
    if data is not None and data.infinity.mu_closure is not None:
        mu_closure = data.infinity.mu_closure
    else:
        mu_closure = aggregate_mu_at_infinity(projective_scene(C), InfinityAggregate.CLOSURE)
    terms = {'d2_minus_2d': d * d - 2 * d, 'directions': r, 'closure_at_infinity': -mu_closure}
    return FormulaEvaluation('risler_curve', terms, sum(terms.values()), expected)


def vanishing_at_infinity_formula(data: FormulaInputs, expected: Optional[int] = None) -> FormulaEvaluation:
    """Ожидаемая α₀^(n)(∞) для общей деформации постоянной степени (классы F, B0)"""
    _require(data, 'vanishing_at_infinity_formula', ClassTag.B0_TYPE)
    n, d = data.n, data.d
    terms = {
        'closure_at_infinity': _term(data.infinity.mu_closure, 'Σμ_p(Ȳ)'),
        'sliced_infinity': _term(data.infinity.mu_sliced_infinity, 'μ(Ȳ∩𝓗̄∩H∞)'),
        'chi_defect': (-1) ** (n + 1) * (chi_smooth_projective(n, d) - _term(data.infinity.chi_infinity, 'χ(Ȳ∩H∞)')),
    }
    return FormulaEvaluation('vanishing_at_infinity', terms, sum(terms.values()), expected)


def affine_class(Y: Hypersurface, decomposition, alpha_n: int) -> int:
    """
    d^@ = d(d−1)^n − α₀(crt) − α₀(∞) по разложению общей деформации;
    сверяется с прямым подсчётом α^(n).
    """
    general = Y.d * (Y.d - 1) ** Y.n
    if decomposition.alpha_generic != general:
        raise InconsistencyError("Общий слой деформации не общий: α_s ≠ d(d−1)^n",
                                 alpha_generic=decomposition.alpha_generic, expected=general)
    value = general - decomposition.alpha_crt - decomposition.alpha_inf
    if value != alpha_n:
        raise InconsistencyError(f"Аффинный класс {value} не совпал с α^(n) = {alpha_n}")
    return value


# ---------------------------------------------------------------------------
# Сборка отчёта (без семейства)
# ---------------------------------------------------------------------------

def _evaluate_formulas(Y: Hypersurface, report: InvariantReport) -> None:
    data = FormulaInputs.from_parts(Y, report.classification, report.milnor, report.infinity)
    candidates = []
    if report.gb_defect is not None:
        candidates.append((b1_defect_formula, report.gb_defect))
    candidates.append((b0_total_curvature_formula, report.signed_curvature_units))
    candidates.append((f_type_formula, report.total_curvature_units))
    if Y.n == 1 and report.classification.sing_affine < 0:
        candidates.append((risler_curve_formula, report.total_curvature_units))

    for formula, expected in candidates:
        try:
            evaluation = formula(Y, data, expected)
        except ClassViolationError:
            continue
        except UnsupportedInfinityError as e:
            report.checks.append(_refusal(formula.__name__, e))
            continue
        report.formulas.append(evaluation)
        report.checks.append(evaluation.to_dict())
        if not evaluation.agrees:
            logger.warning("%s: %d ≠ %d", evaluation.name, evaluation.value, evaluation.expected)


def compute_invariants(Y: Hypersurface, seed: Optional[int] = None, trials: Optional[int] = None,
                       supplied_beta: Optional[Dict[int, int]] = None,
                       known_chi: Optional[int] = None) -> InvariantReport:
    """α, β, χ, GB, пакет Милнора, данные на бесконечности и формулы классов"""
    seed = config.genericity.seed if seed is None else seed
    trials = config.genericity.trials if trials is None else trials

    classification = classify(Y)
    alpha, computed_beta, pencil = agreed_levels(Y, seed, trials)
    beta = beta_sequence(Y, pencil, supplied_beta, computed_beta)
    checks: List[Dict[str, Any]] = []

    if beta.unknown_levels and known_chi is not None:
        beta = solve_residual_beta(alpha, beta, known_chi)
    levels = euler_levels(alpha, beta)
    chi = levels[-1]
    if chi is None:
        checks.append({'name': 'euler_characteristic', 'status': 'REFUSED', 'code': MissingBetaError.code,
                       'levels': beta.unknown_levels})

    milnor = None
    if classification.sing_affine <= 0:
        milnor_record = with_agreement(lambda p: milnor_package(Y, p), Y.n + 1, 'μ-пакет', seed, trials)
        milnor = milnor_record.value

    gb = None
    if chi is not None:
        gb = gauss_bonnet_defect(Y.n, alpha.top, chi)
        # для общего гладкого Y сечение совпадает с определением тождественно
        if (milnor is not None and levels[-2] is not None
                and classification.tag is not ClassTag.GENERAL_SMOOTH):
            sectional = gauss_bonnet_sectional(Y.n, milnor.sum_mu_section, levels[-2])
            if sectional != gb:
                logger.warning("GB по определению %d, по сечению %d", gb, sectional)
            checks.append({'name': 'gauss_bonnet_sectional', 'status': 'PASS' if sectional == gb else 'FAIL',
                           'expected': gb, 'actual': sectional})

    infinity = collect_infinity_data(Y, pencil)
    checks.extend(infinity.refusals)

    report = InvariantReport(Y, classification, alpha, beta, chi, levels, gb, milnor, infinity,
                             checks=checks, seed=seed, trials=trials)
    _evaluate_formulas(Y, report)
    logger.info("Инварианты %s: α=%s, χ=%s, GB=%s", Y, alpha.alpha, chi, gb)
    return report

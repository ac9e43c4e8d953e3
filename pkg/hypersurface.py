"""
Гиперповерхности, их проективные замыкания и особенности на бесконечности

Модуль содержит:
- типы Hypersurface / ProjectiveScene / PencilChoice / SingularPointData;
- классификацию F / B0 / B1 / GENERAL_SMOOTH / BEYOND по размерностям
  особых множеств (размерность Крулля, без перебора карт);
- локальные числа Милнора (перенос в начало координат + стандартный базис Моры);
- суммы чисел Милнора по всем точкам на бесконечности без координат точек:
  в карте j считается dim(J + ⟨G^k⟩ + ⟨v^N⟩) для закреплённых переменных v
  (Брьянсон-Скода: G^k лежит в J локально; N растёт, пока dim ≥ N);
- генератор случайных пучков и сечений с обязательным согласием испытаний.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from sympy import Matrix
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from config import config
from errors import GenericityError, InvariantError, NonIsolatedSingularityError
from groebner import (
    INFINITE, IdealBasis, krull_dimension, quotient_dimension, rational_points,
)
from polynomials import (
    LOCAL_DEGREVLEX, dehomogenize, evaluate, homogenize, is_constant,
    jacobian_ideal_generators, make_ring, parse_polynomial, substitute, to_scalar, top_form,
    total_degree, translate, variable_names,
)

logger = logging.getLogger(__name__)

T = TypeVar('T')


# ---------------------------------------------------------------------------
# Типы
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hypersurface:
    """Аффинная гиперповерхность Y = {f = 0} ⊂ ℂ^{n+1}"""
    f: PolyElement

    def __post_init__(self):
        if is_constant(self.f):
            raise InvariantError("Гиперповерхность задаётся непостоянным многочленом")

    @classmethod
    def from_text(cls, text: str, variables: Sequence[str], field_=QQ) -> 'Hypersurface':
        return cls(parse_polynomial(text, variables, field_))

    @property
    def ring(self):
        return self.f.ring

    @property
    def variables(self) -> List[str]:
        return variable_names(self.f.ring)

    @property
    def n(self) -> int:
        return self.f.ring.ngens - 1

    @property
    def d(self) -> int:
        return total_degree(self.f)

    @property
    def top_form(self) -> PolyElement:
        return top_form(self.f)

    def __str__(self) -> str:
        return str(self.f.as_expr())


@dataclass(frozen=True)
class ProjectiveScene:
    """Замыкание Ȳ ⊂ ℙ^{n+1}: однородный многочлен, карты и часть на бесконечности"""
    hypersurface: Hypersurface
    closure: PolyElement
    homogenizing_variable: str

    @property
    def charts(self) -> List[str]:
        return variable_names(self.closure.ring)

    @property
    def infinity_part(self) -> PolyElement:
        return self.hypersurface.top_form


def projective_scene(Y: Hypersurface, homogenizing_variable: str = 'x0') -> ProjectiveScene:
    name = homogenizing_variable
    while name in Y.variables:
        name += '_'
    return ProjectiveScene(Y, homogenize(Y.f, name), name)


@dataclass(frozen=True)
class SliceData:
    """Аффинная гиперплоскость x_last = Σ a_i x_i + b"""
    coefficients: Tuple[int, ...]
    constant: int


@dataclass(frozen=True)
class PencilChoice:
    """
    Случайный выбор линейной формы l_H и секущих гиперплоскостей.

    forms[k] — линейная форма уровня k (после k сечений), slices[k] — сечение,
    переводящее уровень k в уровень k+1, section — направление гиперплоскости
    через особую точку (для μ^⟨n-1⟩).
    """
    forms: Tuple[Tuple[int, ...], ...]
    slices: Tuple[SliceData, ...]
    section: Tuple[int, ...]
    seed: int
    trials: int
    coefficient_range: int

    @property
    def h(self) -> Tuple[int, ...]:
        return self.forms[0]

    @property
    def slice_constants(self) -> Tuple[SliceData, ...]:
        return self.slices

    def sliced(self) -> 'PencilChoice':
        """Пучок для гиперповерхности после первого сечения"""
        if not self.slices:
            raise GenericityError("Нет сечений для следующего уровня")
        return PencilChoice(self.forms[1:], self.slices[1:], self.section[:-1] or self.section,
                            self.seed, self.trials, self.coefficient_range)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'h': list(self.h),
            'slices': [{'coefficients': list(s.coefficients), 'constant': s.constant} for s in self.slices],
        }


class Location(str, Enum):
    FINITE = 'FINITE'
    INFINITY = 'INFINITY'


@dataclass
class SingularPointData:
    """Рациональная особая точка с μ^⟨n⟩, μ^⟨n-1⟩ и (на бесконечности) λ_p"""
    location: Location
    point: Tuple
    mu: int
    mu_section: int
    chart: Optional[str] = None
    mu_infinity_slice: Optional[int] = None
    lambda_p: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'location': self.location.value,
            'chart': self.chart,
            'point': [str(c) for c in self.point],
            'mu': self.mu,
            'mu_section': self.mu_section,
            'mu_infinity_slice': self.mu_infinity_slice,
            'lambda': self.lambda_p,
        }


class ClassTag(str, Enum):
    GENERAL_SMOOTH = 'GENERAL_SMOOTH'
    F_TYPE = 'F_TYPE'
    B0_TYPE = 'B0_TYPE'
    B1_TYPE = 'B1_TYPE'
    BEYOND = 'BEYOND'


@dataclass
class Classification:
    """Класс гиперповерхности и диагностика размерностей особых множеств"""
    tag: ClassTag
    sing_closure: int
    sing_infinity: int
    sing_affine: int
    stratification_caveat: bool = False

    def includes(self, *tags: ClassTag) -> bool:
        """Учитывает вложенность GENERAL_SMOOTH ⊂ F ⊂ B0 ⊂ B1"""
        chain = [ClassTag.GENERAL_SMOOTH, ClassTag.F_TYPE, ClassTag.B0_TYPE, ClassTag.B1_TYPE]
        if self.tag is ClassTag.BEYOND:
            return ClassTag.BEYOND in tags
        rank = chain.index(self.tag)
        return any(t in chain and chain.index(t) >= rank for t in tags)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tag': self.tag.value,
            'dim_sing_closure': self.sing_closure,
            'dim_sing_infinity': self.sing_infinity,
            'dim_sing_affine': self.sing_affine,
            'stratification_caveat': self.stratification_caveat,
        }


# ---------------------------------------------------------------------------
# Особые множества и классы
# ---------------------------------------------------------------------------

def singular_locus_ideal(Y: Hypersurface) -> IdealBasis:
    """⟨f, ∂f/∂x_1, …, ∂f/∂x_{n+1}⟩"""
    return IdealBasis(Y.ring, [Y.f] + jacobian_ideal_generators(Y.f))


def is_smooth(Y: Hypersurface) -> bool:
    return krull_dimension(singular_locus_ideal(Y)) < 0


def _projective_dimension(generators: List[PolyElement]) -> int:
    """Размерность проективного множества однородных образующих (-1 — пусто)"""
    nonzero = [g for g in generators if g]
    if not nonzero:
        raise InvariantError("Все производные нулевые: особое множество совпадает со всем пространством")
    return krull_dimension(IdealBasis(nonzero[0].ring, nonzero)) - 1


def classify(Y: Hypersurface) -> Classification:
    """Класс по размерностям Sing Ȳ, Sing(Ȳ∩H^∞) и Sing Y"""
    scene = projective_scene(Y)
    sing_closure = _projective_dimension(jacobian_ideal_generators(scene.closure))
    sing_infinity = _projective_dimension(jacobian_ideal_generators(scene.infinity_part))
    sing_affine = krull_dimension(singular_locus_ideal(Y))

    if sing_closure < 0 and sing_infinity < 0:
        tag = ClassTag.GENERAL_SMOOTH
    elif sing_closure <= 0 and sing_infinity <= 0:
        tag = ClassTag.F_TYPE
    elif sing_closure <= 0:
        tag = ClassTag.B0_TYPE
    elif sing_affine <= 0 and sing_infinity <= 1:
        tag = ClassTag.B1_TYPE
    else:
        tag = ClassTag.BEYOND

    result = Classification(tag, sing_closure, sing_infinity, sing_affine,
                            stratification_caveat=tag is ClassTag.BEYOND)
    logger.info("Класс %s: dim Sing Ȳ=%d, dim Sing(Ȳ∩H∞)=%d, dim Sing Y=%d",
                tag.value, sing_closure, sing_infinity, sing_affine)
    return result


def rational_singular_points(I: IdealBasis):
    """Рациональные точки нульмерного идеала особенностей и флаг остатка"""
    result = rational_points(I)
    if result.residual:
        logger.info("Есть нерациональные особые точки: %s различных, %d рациональных",
                    result.distinct, len(result.points))
    return result


# ---------------------------------------------------------------------------
# Локальные числа Милнора
# ---------------------------------------------------------------------------

def local_milnor_number(g: PolyElement, point: Sequence, quiet: bool = False) -> int:
    """μ ростка {g = 0} в рациональной точке; 0, если точка неособая"""
    field_ = g.ring.domain
    if evaluate(g, point) != field_.zero:
        if not quiet:
            logger.warning("Точка %s не лежит на гиперповерхности", list(point))
        return 0
    moved = translate(g, point)
    partials = jacobian_ideal_generators(moved)
    if any(p and p.coeff(1) != field_.zero for p in partials):
        if not quiet:
            logger.warning("Точка %s неособая: μ = 0", list(point))
        return 0
    mu = quotient_dimension(IdealBasis(moved.ring, partials, LOCAL_DEGREVLEX))
    if mu == INFINITE:
        raise NonIsolatedSingularityError(f"Особенность в точке {list(point)} не изолирована",
                                          point=list(point))
    return int(mu)


def sectional_milnor_number(g: PolyElement, point: Sequence, direction: Sequence[int]) -> int:
    """
    μ^⟨m-1⟩: число Милнора сечения гиперплоскостью через точку
    x_last − q_last = Σ c_i (x_i − q_i).
    """
    names = variable_names(g.ring)
    if len(names) < 2:
        raise InvariantError("Сечение определено для ростков от двух и более переменных")
    field_ = g.ring.domain
    target = make_ring(names[:-1], field_)
    q = [to_scalar(field_, c) for c in point]
    image = target.ground_new(q[-1])
    for gen, c, qi in zip(target.gens, direction, q[:-1]):
        image += (gen - qi) * to_scalar(field_, c)
    restricted = substitute(g, {names[-1]: image}, target)
    return local_milnor_number(restricted, point[:-1], quiet=True)


def milnor_number_at(target, point: Sequence, chart: Optional[str] = None) -> int:
    """
    μ в точке: для Hypersurface точка аффинная; для ProjectiveScene точка задаётся
    однородными координатами (x0, x1, …), карта по умолчанию — первая ненулевая.
    """
    if isinstance(target, Hypersurface):
        return local_milnor_number(target.f, point)
    if isinstance(target, ProjectiveScene):
        G, affine_point, _ = _chart_germ(target.closure, point, chart)
        return local_milnor_number(G, affine_point)
    raise TypeError(f"Неподдерживаемый объект: {type(target).__name__}")


def _chart_germ(G: PolyElement, point: Sequence, chart: Optional[str]):
    names = variable_names(G.ring)
    point = [Fraction(c) for c in point]
    if len(point) != len(names):
        raise InvariantError(f"Ожидается {len(names)} однородных координат")
    if chart is None:
        k = next(i for i, c in enumerate(point) if c != 0)
    else:
        k = names.index(chart)
    if point[k] == 0:
        raise InvariantError(f"Точка не лежит в карте {names[k]}")
    affine = tuple(c / point[k] for i, c in enumerate(point) if i != k)
    return dehomogenize(G, names[k]), affine, names[k]


# ---------------------------------------------------------------------------
# Суммы чисел Милнора на бесконечности
# ---------------------------------------------------------------------------

class InfinityAggregate(str, Enum):
    CLOSURE = 'CLOSURE'
    SLICE_AT_INFINITY = 'SLICE_AT_INFINITY'
    SLICED_BY_H = 'SLICED_BY_H'


def _localized_sum(G: PolyElement, pinned: List[str]) -> int:
    ring = G.ring
    k = ring.ngens
    base = jacobian_ideal_generators(G) + [G ** k]
    pinned_gens = [ring.gens[variable_names(ring).index(v)] for v in pinned]
    if not pinned_gens:
        total = quotient_dimension(IdealBasis(ring, base))
        if total == INFINITE:
            raise NonIsolatedSingularityError("Особое множество на бесконечности не нульмерно")
        return int(total)

    N = 1
    for _ in range(config.engine.max_localization_rounds):
        total = quotient_dimension(IdealBasis(ring, base + [v ** N for v in pinned_gens]))
        if total == INFINITE:
            raise NonIsolatedSingularityError("Особое множество на бесконечности не нульмерно")
        if total < N:
            return int(total)
        N = max(int(total) + 1, 2 * N)
    # размерность растёт вместе с N: особое множество в карте не изолировано
    raise NonIsolatedSingularityError("Итерации локализации не стабилизировались", last_power=N)


def milnor_sum_projective(G: PolyElement, at_infinity_of: Optional[str] = None,
                          chart_priority: Optional[Sequence[str]] = None) -> int:
    """
    Σ μ_p по всем особым точкам проективной гиперповерхности {G = 0}
    (при at_infinity_of — только по точкам с этой координатой, равной нулю).
    Точка относится к карте первой ненулевой координаты в порядке chart_priority.
    """
    names = variable_names(G.ring)
    priority = [v for v in (chart_priority or names) if v != at_infinity_of]
    total = 0
    for position, chart in enumerate(priority):
        local = dehomogenize(G, chart)
        pinned = ([at_infinity_of] if at_infinity_of else []) + list(priority[:position])
        contribution = _localized_sum(local, pinned)
        logger.debug("Карта %s: вклад %d", chart, contribution)
        total += contribution
    return total


def slice_hypersurface(Y: Hypersurface, slice_data: SliceData) -> Hypersurface:
    """Y ∩ {x_last = Σ a_i x_i + b} в первых n переменных"""
    names = Y.variables
    field_ = Y.ring.domain
    target = make_ring(names[:-1], field_)
    image = target.ground_new(to_scalar(field_, slice_data.constant))
    for gen, a in zip(target.gens, slice_data.coefficients):
        image += gen * to_scalar(field_, a)
    sliced = substitute(Y.f, {names[-1]: image}, target)
    if total_degree(sliced) != Y.d:
        raise GenericityError("Сечение понизило степень: гиперплоскость не общая")
    return Hypersurface(sliced)


def aggregate_mu_at_infinity(scene: ProjectiveScene, which: InfinityAggregate,
                             pencil: Optional[PencilChoice] = None,
                             chart_priority: Optional[Sequence[str]] = None) -> int:
    """Σ μ по всем точкам на бесконечности (рациональным и нет)"""
    which = InfinityAggregate(which)
    Y = scene.hypersurface
    if which is InfinityAggregate.CLOSURE:
        priority = chart_priority or Y.variables
        return milnor_sum_projective(scene.closure, scene.homogenizing_variable, priority)
    if which is InfinityAggregate.SLICE_AT_INFINITY:
        return milnor_sum_projective(scene.infinity_part, None, chart_priority)
    if pencil is None:
        raise ValueError("Для SLICED_BY_H необходимо передать пучок с сечением")
    sliced = slice_hypersurface(Y, pencil.slices[0])
    priority = [v for v in (chart_priority or sliced.variables) if v in sliced.variables]
    return milnor_sum_projective(sliced.top_form, None, priority)


def infinity_points(scene: ProjectiveScene, pencil: PencilChoice) -> Tuple[List[SingularPointData], bool]:
    """Рациональные особые точки Ȳ на бесконечности с μ, μ^⟨n-1⟩, μ_p(Ȳ∩H^∞) и λ_p"""
    w = scene.homogenizing_variable
    Y = scene.hypersurface
    points: List[SingularPointData] = []
    residual = False
    for position, chart in enumerate(Y.variables):
        G = dehomogenize(scene.closure, chart)
        ring = G.ring
        names = variable_names(ring)
        pinned = [ring.gens[names.index(v)] for v in [w] + Y.variables[:position]]
        I = IdealBasis(ring, [G] + jacobian_ideal_generators(G) + pinned)
        if krull_dimension(I) < 0:
            continue
        found = rational_singular_points(I)
        residual = residual or found.residual
        slice_form = dehomogenize(scene.infinity_part, chart)
        for affine in found.points:
            mu = local_milnor_number(G, affine)
            mu_section = sectional_milnor_number(G, affine, pencil.section)
            without_w = tuple(c for name, c in zip(names, affine) if name != w)
            mu_slice = local_milnor_number(slice_form, without_w, quiet=True)
            homogeneous = []
            for name in scene.charts:
                homogeneous.append(Fraction(1) if name == chart else Fraction(affine[names.index(name)]))
            points.append(SingularPointData(Location.INFINITY, tuple(homogeneous), mu, mu_section,
                                            chart, mu_slice, mu + mu_slice))
    return points, residual


# ---------------------------------------------------------------------------
# Генерические выборки
# ---------------------------------------------------------------------------

def _draw(rng: np.random.Generator, size: int, coefficient_range: int) -> Tuple[int, ...]:
    magnitudes = rng.integers(1, coefficient_range + 1, size=size)
    signs = rng.choice([-1, 1], size=size)
    return tuple(int(m) * int(s) for m, s in zip(magnitudes, signs))


def sample_generic(seed: int, nvars: int, trials: Optional[int] = None,
                   coefficient_range: Optional[int] = None) -> PencilChoice:
    """Воспроизводимый по seed пучок: формы, сечения всех уровней и направление"""
    trials = config.genericity.trials if trials is None else trials
    coefficient_range = config.genericity.coefficient_range if coefficient_range is None else coefficient_range
    if trials < 2:
        raise ValueError("Число испытаний должно быть не меньше 2")
    if coefficient_range < 2 ** 20:
        raise ValueError("Множество коэффициентов должно иметь размер не меньше 2^20")

    rng = np.random.default_rng(seed)
    forms = tuple(_draw(rng, size, coefficient_range) for size in range(nvars, 1, -1))
    slices = tuple(
        SliceData(_draw(rng, size - 1, coefficient_range), int(_draw(rng, 1, coefficient_range)[0]))
        for size in range(nvars, 1, -1)
    )
    section = _draw(rng, max(nvars - 1, 1), coefficient_range)
    return PencilChoice(forms, slices, section, int(seed), int(trials), int(coefficient_range))


@dataclass
class AgreementRecord:
    """Результат согласованных испытаний"""
    value: Any
    pencils: List[PencilChoice] = field(default_factory=list)
    rounds: int = 1

    @property
    def seeds(self) -> List[int]:
        return [p.seed for p in self.pencils]


def with_agreement(compute: Callable[[PencilChoice], T], nvars: int, label: str,
                   seed: Optional[int] = None, trials: Optional[int] = None) -> AgreementRecord:
    """
    Запускает compute на trials независимых пучках; при расхождении или
    GenericityError расширяет множество коэффициентов и повторяет.
    """
    seed = config.genericity.seed if seed is None else seed
    trials = config.genericity.trials if trials is None else trials
    coefficient_range = config.genericity.coefficient_range
    history = []
    for round_index in range(config.genericity.max_rounds):
        pencils = [
            sample_generic(seed + 1000 * round_index + k, nvars, trials, coefficient_range)
            for k in range(trials)
        ]
        values, failures = [], []
        for pencil in pencils:
            try:
                values.append(compute(pencil))
            except GenericityError as e:
                failures.append(str(e))
        if not failures and all(v == values[0] for v in values):
            return AgreementRecord(values[0], pencils, round_index + 1)
        history.append({'values': [str(v) for v in values], 'failures': failures})
        logger.warning("%s: испытания не согласованы (раунд %d): %s; расширяем выборку",
                       label, round_index + 1, history[-1])
        coefficient_range *= config.genericity.widening_factor
    raise GenericityError(f"{label}: нет согласия после {config.genericity.max_rounds} раундов",
                          history=history)


def random_linear_change(Y: Hypersurface, seed: int) -> Hypersurface:
    """Y в координатах x ↦ A·x для случайной обратимой целой матрицы A"""
    rng = np.random.default_rng(seed)
    size = Y.n + 1
    while True:
        matrix = rng.integers(-3, 4, size=(size, size))
        if Matrix(matrix.tolist()).det() != 0:
            break
    ring = Y.ring
    images = {}
    for i, name in enumerate(Y.variables):
        image = ring.zero
        for j, gen in enumerate(ring.gens):
            image += gen * int(matrix[i, j])
        images[name] = image
    return Hypersurface(substitute(Y.f, images, ring))

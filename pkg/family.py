"""
Однопараметрические семейства {X_s}, общая деформация постоянной степени
и разложение полярной кратности α_s = α_0 + α_0(crt) + α_0(∞)
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from config import config
from errors import (
    DeformationError, GenericityError, InconsistencyError, InvariantError, UnsupportedInfinityError,
)
from groebner import (
    INFINITE, IdealBasis, dimension_away_from, krull_dimension, local_dimension_at,
    parametric_quotient_dimension, quotient_dimension, saturate,
)
from hypersurface import (
    ClassTag, Hypersurface, PencilChoice, classify, is_smooth, with_agreement,
)
from polar_invariants import (
    FormulaInputs, collect_infinity_data, milnor_package, polar_direction, polar_minors,
    vanishing_at_infinity_formula,
)
from polynomials import (
    PolynomialSource, change_ring, make_ring, specialize, substitute, to_scalar,
    variable_names,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Семейство
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeformationFamily:
    """
    Семейство X_s = {F(s, x) = 0}. diagonal — коэффициенты диагональной формы
    общей деформации (None для формы x_1^d + … + x_{n+1}^d или для явного семейства).
    """
    F: PolyElement
    sigma: str = 's'
    special_value: Fraction = Fraction(0)
    canonical: bool = False
    diagonal: Optional[Tuple[int, ...]] = None
    certified_general: bool = False

    def __post_init__(self):
        names = variable_names(self.F.ring)
        if self.sigma not in names:
            raise InvariantError(f"Параметр {self.sigma} отсутствует в контексте {names}")
        if len(names) < 2:
            raise InvariantError("Семейство должно зависеть хотя бы от одной переменной x")
        special = self.fibre(self.special_value)
        if special.d != self.d:
            raise DeformationError(
                f"Степень слоя при s = {self.special_value} равна {special.d}, а не {self.d}")

    @property
    def variables(self) -> List[str]:
        return [name for name in variable_names(self.F.ring) if name != self.sigma]

    @property
    def sigma_index(self) -> int:
        return variable_names(self.F.ring).index(self.sigma)

    @property
    def d(self) -> int:
        k = self.sigma_index
        return max(sum(m) - m[k] for m in self.F.itermonoms())

    @property
    def n(self) -> int:
        return len(self.variables) - 1

    def fibre(self, value) -> Hypersurface:
        return Hypersurface(specialize(self.F, {self.sigma: value}, self.variables))

    @property
    def special_fibre(self) -> Hypersurface:
        return self.fibre(self.special_value)

    def graph_scale(self):
        """c, если F = f(x) + c·s (семейство слоёв одного многочлена)"""
        k = self.sigma_index
        scale = None
        for monom, coeff in self.F.iterterms():
            if monom[k] == 0:
                continue
            if monom[k] != 1 or sum(monom) != 1:
                return None
            scale = coeff
        return scale

    def degree_profile(self) -> Dict[str, Any]:
        """Степень по x и постоянство степени при всех s"""
        k = self.sigma_index
        s_ring = make_ring([self.sigma], self.F.ring.domain)
        leading: Dict[Tuple[int, ...], PolyElement] = {}
        for monom, coeff in self.F.iterterms():
            x_part = monom[:k] + monom[k + 1:]
            if sum(x_part) != self.d:
                continue
            leading[x_part] = leading.get(x_part, s_ring.zero) + s_ring.from_dict({(monom[k],): coeff})
        common = s_ring.zero
        for c in leading.values():
            common = c if not common else common.gcd(c)
        return {'degree': self.d, 'constant_for_all_s': bool(common) and common.is_ground}

    @classmethod
    def from_source(cls, source: PolynomialSource, parameter: str,
                    fixed: Optional[Mapping[str, Any]] = None, special_value=0, field_=QQ) -> 'DeformationFamily':
        """Семейство по файлу с параметрами; остальные параметры фиксируются значениями"""
        fixed = dict(fixed or {})
        if parameter not in source.parameters:
            raise InvariantError(f"Параметр {parameter} не объявлен в файле",
                                 declared=list(source.parameters))
        missing = [p for p in source.parameters if p != parameter and p not in fixed]
        if missing:
            raise InvariantError(f"Не заданы значения параметров {missing}")
        target = make_ring([parameter] + list(source.variables), field_)
        F = substitute(source.polynomial(field_), {p: v for p, v in fixed.items() if p != parameter}, target)
        return cls(F, parameter, Fraction(special_value))


def _random_rational(rng: np.random.Generator) -> Fraction:
    bound = config.genericity.parameter_range
    numerator = int(rng.integers(1, bound + 1)) * int(rng.choice([-1, 1]))
    denominator = int(rng.integers(1, bound + 1))
    return Fraction(numerator, denominator)


def _parameter_name(variables: List[str]) -> str:
    name = 's'
    while name in variables:
        name += '_'
    return name


def generic_deformation(Y: Hypersurface, seed: Optional[int] = None) -> DeformationFamily:
    """
    F = (1−s)f + s(g_d − 1), g_d = x_1^d + … + x_{n+1}^d. Общий слой проверяется
    классификацией в случайной точке s*; при неудаче g_d заменяется случайной
    диагональной формой.
    """
    seed = config.genericity.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    sigma = _parameter_name(Y.variables)
    ring = make_ring([sigma] + Y.variables, Y.ring.domain)
    s = ring.gens[0]
    f = change_ring(Y.f, ring)

    for round_index in range(config.genericity.deformation_rounds):
        if round_index == 0:
            coefficients = (1,) * (Y.n + 1)
        else:
            coefficients = tuple(int(c) for c in rng.integers(1, config.genericity.parameter_range + 1,
                                                              size=Y.n + 1))
        g_d = ring.zero
        for gen, c in zip(ring.gens[1:], coefficients):
            g_d += gen ** Y.d * c
        F = (1 - s) * f + s * (g_d - 1)
        family = DeformationFamily(F, sigma, Fraction(0), canonical=True,
                                   diagonal=None if round_index == 0 else coefficients)
        s_star = _random_rational(rng)
        tag = classify(family.fibre(s_star)).tag
        if tag is ClassTag.GENERAL_SMOOTH:
            logger.info("Общая деформация: слой при s = %s общий (раунд %d)", s_star, round_index + 1)
            return replace(family, certified_general=True)
        logger.warning("Слой общей деформации при s = %s имеет класс %s; меняем диагональную форму",
                       s_star, tag.value)
    raise DeformationError(f"Не удалось построить общую деформацию за {config.genericity.deformation_rounds} раундов")


# ---------------------------------------------------------------------------
# Полярная кривая
# ---------------------------------------------------------------------------

@dataclass
class PolarCurve:
    """
    Γ(l_H, σ). Для F = f + c·s кривая хранится проекцией в пространство x,
    иначе в кольце (s, x).
    """
    family: DeformationFamily
    ideal: IdealBasis
    direction: PolyElement
    graph: bool

    def at(self, value) -> IdealBasis:
        """Γ ∩ {s = value}"""
        if self.graph:
            extra = change_ring(self.family.fibre(value).f, self.ideal.ring)
        else:
            ring = self.ideal.ring
            extra = ring.gens[self.family.sigma_index] - to_scalar(ring.domain, value)
        return IdealBasis(self.ideal.ring, list(self.ideal.generators) + [extra])

    def lift(self, value, point) -> Tuple:
        """Точка слоя X_value в координатах кольца Γ"""
        if self.graph:
            return tuple(point)
        coordinates = list(point)
        coordinates.insert(self.family.sigma_index, Fraction(value))
        return tuple(coordinates)

    def total_space(self) -> IdealBasis:
        """Γ в кольце (s, x); для графического семейства добавляется уравнение F"""
        generators = list(self.ideal.generators)
        if self.graph:
            generators.append(self.family.F)
        return IdealBasis(self.family.F.ring, generators)


def family_polar_curve(Fam: DeformationFamily, pencil: PencilChoice) -> PolarCurve:
    """Γ = ⟨F, миноры [∇_x F; h]⟩ : (h·∇_x F)^∞; размерность не больше 1"""
    h = pencil.h
    if Fam.graph_scale() is not None:
        f0 = Fam.fibre(0).f
        g = polar_direction(f0, h)
        gamma = saturate(IdealBasis(f0.ring, polar_minors(f0, h)), g)
        curve = PolarCurve(Fam, gamma, g, graph=True)
    else:
        F = Fam.F
        k = Fam.sigma_index
        x_gens = [gen for i, gen in enumerate(F.ring.gens) if i != k]
        grads = [F.diff(gen) for gen in x_gens]
        minors = []
        for i in range(len(grads)):
            for j in range(i + 1, len(grads)):
                minor = grads[i] * h[j] - grads[j] * h[i]
                if minor:
                    minors.append(minor)
        g = F.ring.zero
        for grad, c in zip(grads, h):
            g += grad * c
        gamma = saturate(IdealBasis(F.ring, [F] + minors), g)
        curve = PolarCurve(Fam, gamma, g, graph=False)

    dim = krull_dimension(curve.ideal)
    if dim > 1:
        raise GenericityError(f"Полярное множество имеет размерность {dim}: пучок не общий", h=list(h))
    logger.debug("Полярная кривая: %d образующих, граф=%s", len(curve.ideal.generators), curve.graph)
    return curve


# ---------------------------------------------------------------------------
# Разложение
# ---------------------------------------------------------------------------

@dataclass
class InfinityDecomposition:
    alpha_generic: int
    alpha_special: int
    alpha_crt: int
    alpha_inf: int
    seed: int = 0
    trials: int = 0
    samples: List[str] = field(default_factory=list)
    checks: List[Dict[str, Any]] = field(default_factory=list)
    pencil: Optional[PencilChoice] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'alpha_generic': self.alpha_generic,
            'alpha_special': self.alpha_special,
            'alpha_crt': self.alpha_crt,
            'alpha_inf': self.alpha_inf,
            'samples': list(self.samples),
            'checks': list(self.checks),
            'provenance': {'seed': self.seed, 'trials': self.trials},
        }


def _count(I: IdealBasis) -> int:
    total = quotient_dimension(I)
    if total == INFINITE:
        raise GenericityError("Полярная кривая имеет компоненту внутри слоя")
    return int(total)


def _alpha_generic(Fam: DeformationFamily, curve: PolarCurve,
                   pencil: PencilChoice) -> Tuple[int, List[str], List[Dict[str, Any]]]:
    """
    α_s для общего s: размерность Γ ∩ X_s по параметрическому базису, подтверждённая
    подсчётом в parameter_samples значениях s* вне корней bad. Для сертифицированной
    канонической деформации с ней сверяется d(d−1)^n.
    """
    parametric = parametric_quotient_dimension(curve.total_space(), Fam.sigma)
    if parametric.generic == INFINITE:
        raise GenericityError("Полярная кривая имеет компоненту внутри общего слоя")
    generic = int(parametric.generic)

    rng = np.random.default_rng(pencil.seed)
    wanted = config.genericity.parameter_samples
    samples: List[Fraction] = []
    values: List[int] = []
    for _ in range(4 * wanted):
        if len(samples) == wanted:
            break
        value = _random_rational(rng)
        if value == Fam.special_value or value in samples or not parametric.is_regular(value):
            continue
        samples.append(value)
        values.append(_count(curve.at(value)))
    labels = [str(v) for v in samples]
    if len(samples) < wanted:
        raise GenericityError("Не удалось выбрать общие значения параметра", samples=labels)
    if any(v != generic for v in values):
        raise InconsistencyError("α_s в общих точках не совпадает с параметрическим счётом",
                                 generic=generic, values=values, samples=labels)

    checks: List[Dict[str, Any]] = []
    if Fam.canonical and Fam.certified_general:
        closed = Fam.d * (Fam.d - 1) ** Fam.n
        if closed != generic:
            raise InconsistencyError(f"d(d−1)^n = {closed}, а α_s = {generic}", samples=labels)
        checks.append({'name': 'generic_closed_form', 'status': 'PASS', 'expected': closed,
                       'actual': generic})
    return generic, labels, checks


def decompose_at_special(Fam: DeformationFamily, pencil: PencilChoice) -> InfinityDecomposition:
    """α_s = α_0 + α_0(crt) + α_0(∞); α_0(∞) определяется как остаток"""
    curve = family_polar_curve(Fam, pencil)
    special_fibre = Fam.special_fibre
    meet = curve.at(Fam.special_value)
    total = _count(meet)
    if is_smooth(special_fibre):
        special, crt = total, 0
    else:
        special = int(dimension_away_from(meet, curve.direction))
        crt = total - special
    generic, samples, checks = _alpha_generic(Fam, curve, pencil)
    inf = generic - total
    if inf < 0:
        raise InconsistencyError(f"Отрицательная кривизна на бесконечности: {generic} − {total}",
                                 alpha_generic=generic, alpha_special=special, alpha_crt=crt)

    decomposition = InfinityDecomposition(generic, special, crt, inf, pencil.seed, pencil.trials,
                                          samples, checks, pencil=pencil)
    _check_vanishing_formula(Fam, pencil, decomposition)
    logger.info("Разложение: %d = %d + %d + %d", generic, special, crt, inf)
    return decomposition


def _check_vanishing_formula(Fam: DeformationFamily, pencil: PencilChoice,
                             decomposition: InfinityDecomposition) -> None:
    """Сверка α_0(∞) с формулой для общей деформации слоя класса F или B0"""
    if decomposition.alpha_generic != Fam.d * (Fam.d - 1) ** Fam.n:
        return
    X0 = Fam.special_fibre
    classification = classify(X0)
    if not classification.includes(ClassTag.B0_TYPE):
        return
    data = FormulaInputs.from_parts(X0, classification, None, collect_infinity_data(X0, pencil))
    try:
        evaluation = vanishing_at_infinity_formula(data, decomposition.alpha_inf)
    except UnsupportedInfinityError as e:
        decomposition.checks.append({'name': 'vanishing_at_infinity', 'status': 'UNSUPPORTED', **e.to_dict()})
        return
    decomposition.checks.append(evaluation.to_dict())
    if not evaluation.agrees:
        raise InconsistencyError(
            f"α_0(∞) = {decomposition.alpha_inf}, формула даёт {evaluation.value}",
            terms=evaluation.terms)


def decompose_with_agreement(Fam: DeformationFamily, seed: Optional[int] = None,
                             trials: Optional[int] = None) -> InfinityDecomposition:
    """Разложение, согласованное по независимым пучкам"""
    computed: Dict[int, InfinityDecomposition] = {}

    def compute(pencil: PencilChoice) -> Tuple[int, int, int, int]:
        computed[pencil.seed] = decompose_at_special(Fam, pencil)
        return _decomposition_key(computed[pencil.seed])

    record = with_agreement(compute, Fam.n + 1, 'разложение', seed, trials)
    decomposition = computed[record.pencils[0].seed]
    decomposition.trials = len(record.pencils)
    return decomposition


def _decomposition_key(decomposition: InfinityDecomposition) -> Tuple[int, int, int, int]:
    return (decomposition.alpha_generic, decomposition.alpha_special,
            decomposition.alpha_crt, decomposition.alpha_inf)


# ---------------------------------------------------------------------------
# Сверка α_0(crt) с числами Милнора-Тессье
# ---------------------------------------------------------------------------

@dataclass
class CrtCheck:
    alpha_crt: int
    expected: int
    points: List[Dict[str, Any]]
    status: str

    def to_dict(self) -> Dict[str, Any]:
        return {'name': 'crt_vs_mu', 'status': self.status, 'alpha_crt': self.alpha_crt,
                'expected': self.expected, 'points': self.points}


def crt_vs_mu_check(Fam: DeformationFamily, pencil: PencilChoice) -> CrtCheck:
    """α_0(crt) = Σ_q (μ_q + μ_q^⟨n-1⟩), по каждой рациональной точке локально"""
    X0 = Fam.special_fibre
    package = milnor_package(X0, pencil)
    curve = family_polar_curve(Fam, pencil)
    meet = curve.at(Fam.special_value)
    total = _count(meet)
    crt = total - int(dimension_away_from(meet, curve.direction)) if package.points or package.residual else 0

    points = []
    for data in package.points:
        local = local_dimension_at(meet, curve.lift(Fam.special_value, data.point))
        expected = data.mu + data.mu_section
        points.append({
            'point': [str(c) for c in data.point],
            'local_polar': int(local),
            'mu': data.mu,
            'mu_section': data.mu_section,
            'status': 'PASS' if local == expected else 'FAIL',
        })
    failed = [p for p in points if p['status'] == 'FAIL']
    if failed or crt != package.local_loss:
        raise InconsistencyError(f"α_0(crt) = {crt}, Σ(μ + μ^⟨n-1⟩) = {package.local_loss}",
                                 points=failed)
    return CrtCheck(crt, package.local_loss, points, 'PASS')

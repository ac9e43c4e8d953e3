"""
Базисы Грёбнера (глобальные порядки) и стандартные базисы (локальный порядок)

Глобальные базисы считаются улучшенным алгоритмом Бухбергера из sympy
(нормальная стратегия выбора пар, критерии Гебауэра-Мёллера) с последующей
проверкой критерия Бухбергера. Локальные стандартные базисы строятся здесь же:
нормальная форма Моры с выбором редуктора по минимальному экарту.

Поверх базисов реализованы сервисы, нужные инвариантам: размерность фактора,
размерность Крулля, насыщение, исключение переменных, счёт точек вне
гиперповерхности и рациональные точки нульмерного идеала.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Poly, Symbol
from sympy.polys.groebnertools import groebner, is_groebner
from sympy.polys.orderings import ProductOrder, grevlex
from sympy.polys.rings import PolyElement, PolyRing

from config import config
from errors import ContextMismatchError, InconsistencyError, NotZeroDimensionalError
from polynomials import (
    GLOBAL_DEGREVLEX, LOCAL_DEGREVLEX, Monomial, MonomialOrder, change_ring, evaluate, make_field,
    make_ring, scalar_to_python, substitute, to_prime_field, total_degree, translate,
    variable_names,
)

logger = logging.getLogger(__name__)

INFINITE = math.inf
Dimension = Union[int, float]


@dataclass
class IdealBasis:
    """Идеал: образующие, порядок и кэш базиса/лестницы"""
    ring: PolyRing
    generators: List[PolyElement]
    order: MonomialOrder = GLOBAL_DEGREVLEX
    reduced_basis: Optional[List[PolyElement]] = None
    staircase: Optional[frozenset] = None
    dimension: Optional[Dimension] = field(default=None, repr=False)

    def __post_init__(self):
        self.generators = [change_ring(g, self.ring) for g in self.generators if g]

    @property
    def variables(self) -> List[str]:
        return variable_names(self.ring)

    @property
    def is_local(self) -> bool:
        return self.order.is_local

    def with_order(self, order: MonomialOrder) -> 'IdealBasis':
        return IdealBasis(self.ring, list(self.generators), order)


def ideal(generators: Iterable[PolyElement], ring: Optional[PolyRing] = None,
          order: MonomialOrder = GLOBAL_DEGREVLEX) -> IdealBasis:
    generators = list(generators)
    if ring is None:
        if not generators:
            raise ValueError("Для пустого списка образующих необходимо указать кольцо")
        ring = generators[0].ring
    return IdealBasis(ring, generators, order)


def ideal_sum(I: IdealBasis, extra: Union[IdealBasis, Iterable[PolyElement]]) -> IdealBasis:
    more = extra.generators if isinstance(extra, IdealBasis) else list(extra)
    return IdealBasis(I.ring, I.generators + [change_ring(g, I.ring) for g in more], I.order)


# ---------------------------------------------------------------------------
# Глобальные базисы
# ---------------------------------------------------------------------------

def _check_basis(basis: List[PolyElement], generators: List[PolyElement], ring: PolyRing) -> None:
    if not is_groebner(basis, ring):
        raise InconsistencyError("Критерий Бухбергера нарушен для вычисленного базиса")
    for g in generators:
        if g.rem(basis):
            raise InconsistencyError("Образующая не редуцируется к нулю по вычисленному базису")


def _groebner(generators: List[PolyElement], ring: PolyRing) -> List[PolyElement]:
    generators = [change_ring(g, ring) for g in generators if g]
    if not generators:
        return []
    basis = groebner(generators, ring, method=config.engine.groebner_method)
    if config.engine.check_buchberger_criterion:
        _check_basis(basis, generators, ring)
    logger.debug("Базис Грёбнера: %d образующих -> %d элементов", len(generators), len(basis))
    return basis


def groebner_basis(I: IdealBasis) -> IdealBasis:
    """Редуцированный базис Грёбнера относительно глобального порядка идеала"""
    if I.is_local:
        raise ValueError("Для локального порядка используйте standard_basis_local")
    if I.reduced_basis is None:
        ring = I.ring
        if I.order.permutation is not None:
            ring = make_ring(I.variables, I.ring.domain, I.order)
        I.reduced_basis = _groebner(I.generators, ring)
    return I


def normal_form(f: PolyElement, I: IdealBasis) -> PolyElement:
    basis = groebner_basis(I).reduced_basis
    f = change_ring(f, basis[0].ring) if basis else f
    return f.rem(basis) if basis else f


def is_unit_ideal(I: IdealBasis) -> bool:
    if I.is_local:
        basis = standard_basis_local(I).reduced_basis
        return any(sum(I.order.leading_monomial(g)) == 0 for g in basis)
    basis = groebner_basis(I).reduced_basis
    return any(g.is_ground for g in basis)


# ---------------------------------------------------------------------------
# Локальные стандартные базисы (Мора)
# ---------------------------------------------------------------------------

@dataclass
class _Element:
    poly: PolyElement
    lead: Monomial
    ecart: int


def _element(p: PolyElement, order: MonomialOrder) -> _Element:
    lead, coeff = order.leading_term(p)
    p = p * (p.ring.domain.one / coeff)
    return _Element(p, lead, total_degree(p) - sum(lead))


def _cancel(h: _Element, g: _Element) -> PolyElement:
    ring = h.poly.ring
    quotient = ring.monomial_div(h.lead, g.lead)
    return h.poly - g.poly.mul_term((quotient, h.poly[h.lead] / g.poly[g.lead]))


def mora_normal_form(f: PolyElement, basis: Sequence[_Element], order: MonomialOrder) -> PolyElement:
    """Слабая нормальная форма Моры: редуктор с минимальным экартом"""
    ring = f.ring
    reducers = list(basis)
    h = f
    while h:
        current = _Element(h, order.leading_monomial(h), 0)
        current.ecart = total_degree(h) - sum(current.lead)
        candidates = [g for g in reducers if ring.monomial_div(current.lead, g.lead) is not None]
        if not candidates:
            break
        reducer = min(candidates, key=lambda g: g.ecart)
        if reducer.ecart > current.ecart:
            reducers.append(current)
        h = _cancel(current, reducer)
    return h


def _spoly(f: _Element, g: _Element) -> PolyElement:
    ring = f.poly.ring
    lcm = ring.monomial_lcm(f.lead, g.lead)
    return (f.poly.mul_monom(ring.monomial_div(lcm, f.lead))
            - g.poly.mul_monom(ring.monomial_div(lcm, g.lead)))


def _minimalize(elements: List[_Element], ring: PolyRing) -> List[_Element]:
    minimal: List[_Element] = []
    for e in sorted(elements, key=lambda e: (sum(e.lead), e.lead)):
        if all(ring.monomial_div(e.lead, m.lead) is None for m in minimal):
            minimal.append(e)
    return minimal


def standard_basis_local(I: IdealBasis) -> IdealBasis:
    """
    Стандартный базис для локального порядка (алгоритм Бухбергера с
    нормальной формой Моры). Хранится минимальный базис: по нему читается
    лестница локальной алгебры.
    """
    if not I.is_local:
        raise ValueError("standard_basis_local требует локальный порядок")
    if I.reduced_basis is not None:
        return I

    order = I.order
    ring = I.ring
    elements = [_element(g, order) for g in I.generators]
    if any(sum(e.lead) == 0 for e in elements):
        I.reduced_basis = [ring.one]
        return I

    pairs = [(i, j) for i, j in combinations(range(len(elements)), 2)]
    while pairs:
        pairs.sort(key=lambda p: sum(ring.monomial_lcm(elements[p[0]].lead, elements[p[1]].lead)))
        i, j = pairs.pop(0)
        a, b = elements[i], elements[j]
        # критерий произведения
        if ring.monomial_lcm(a.lead, b.lead) == ring.monomial_mul(a.lead, b.lead):
            continue
        h = mora_normal_form(_spoly(a, b), elements, order)
        if not h:
            continue
        new = _element(h, order)
        if sum(new.lead) == 0:
            I.reduced_basis = [ring.one]
            return I
        pairs.extend((k, len(elements)) for k in range(len(elements)))
        elements.append(new)

    I.reduced_basis = [e.poly for e in _minimalize(elements, ring)]
    logger.debug("Стандартный базис (локальный): %d элементов", len(I.reduced_basis))
    return I


# ---------------------------------------------------------------------------
# Лестница и размерности
# ---------------------------------------------------------------------------

def leading_monomials(I: IdealBasis) -> List[Monomial]:
    if I.is_local:
        basis = standard_basis_local(I).reduced_basis
        return [I.order.leading_monomial(g) for g in basis]
    basis = groebner_basis(I).reduced_basis
    return [g.LM for g in basis]


def _enumerate_staircase(leads: List[Monomial], nvars: int) -> List[Monomial]:
    """Порядковый идеал стандартных мономов (каждый моном порождается один раз)"""
    def divisible(m: Monomial) -> bool:
        return any(all(a >= b for a, b in zip(m, lead)) for lead in leads)

    start = (0,) * nvars
    if divisible(start):
        return []
    result = [start]
    stack = [(start, 0)]
    while stack:
        monom, first = stack.pop()
        for j in range(first, nvars):
            child = monom[:j] + (monom[j] + 1,) + monom[j + 1:]
            if not divisible(child):
                result.append(child)
                stack.append((child, j))
    return result


def _staircase(leads: List[Monomial], nvars: int) -> Optional[List[Monomial]]:
    """Стандартные мономы мономиального идеала; None, если их бесконечно много"""
    if any(sum(m) == 0 for m in leads):
        return []
    for i in range(nvars):
        if not any(m[i] > 0 and sum(m) == m[i] for m in leads):
            return None
    return _enumerate_staircase(leads, nvars)


def quotient_dimension(I: IdealBasis) -> Dimension:
    """dim_k R/I (или локальной алгебры); INFINITE, если идеал не нульмерен"""
    if I.dimension is not None:
        return I.dimension
    staircase = _staircase(leading_monomials(I), I.ring.ngens)
    if staircase is None:
        I.dimension = INFINITE
        return INFINITE
    I.staircase = frozenset(staircase)
    I.dimension = len(staircase)
    return I.dimension


def krull_dimension(I: IdealBasis) -> int:
    """Размерность аффинного многообразия V(I); -1 для единичного идеала"""
    if I.is_local:
        raise ValueError("Размерность Крулля вычисляется по глобальному базису")
    leads = leading_monomials(I)
    if any(sum(m) == 0 for m in leads):
        return -1
    nvars = I.ring.ngens
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            chosen = set(subset)
            if all(not support <= chosen for support in supports):
                return size
    return 0


def is_zero_dimensional(I: IdealBasis) -> bool:
    return quotient_dimension(I) != INFINITE


# ---------------------------------------------------------------------------
# Исключение, насыщение, счёт вне гиперповерхности
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _block_order(k: int) -> ProductOrder:
    """Блочный порядок: первые k переменных исключаются"""
    return ProductOrder((grevlex, lambda m: m[:k]), (grevlex, lambda m: m[k:]))


def _fresh_name(names: Sequence[str], stem: str) -> str:
    candidate = stem
    counter = 0
    while candidate in names:
        counter += 1
        candidate = f"{stem}{counter}"
    return candidate


def eliminate(I: IdealBasis, variables: Sequence[str]) -> IdealBasis:
    """I ∩ k[оставшиеся переменные] через блочный порядок"""
    variables = [str(v) for v in variables]
    if not variables:
        return groebner_basis(IdealBasis(I.ring, list(I.generators)))
    names = I.variables
    rest = [name for name in names if name not in variables]
    k = len(variables)
    block_ring = PolyRing(variables + rest, I.ring.domain, _block_order(k))
    basis = _groebner(I.generators, block_ring)

    target = make_ring(rest, I.ring.domain) if rest else None
    kept = [g for g in basis if all(sum(m[:k]) == 0 for m in g.itermonoms())]
    if target is None:
        # исключены все переменные: остаётся 0 или 1
        ring = make_ring(names, I.ring.domain)
        unit = [ring.one] if kept else []
        return IdealBasis(ring, unit, reduced_basis=unit)
    kept = [change_ring(g, target) for g in kept]
    return IdealBasis(target, kept, reduced_basis=kept)


def saturate(I: IdealBasis, g: PolyElement) -> IdealBasis:
    """I : g^∞ через переменную Рабиновича t·g − 1 и исключение t"""
    g = change_ring(g, I.ring)
    if not g:
        raise ValueError("Насыщение по нулевому многочлену не определено")
    if g.is_ground:
        return IdealBasis(I.ring, list(I.generators), I.order)
    names = I.variables
    t = _fresh_name(names, 't_sat')
    ring_t = make_ring([t] + names, I.ring.domain)
    rabinowitsch = ring_t.gens[0] * change_ring(g, ring_t) - 1
    extended = IdealBasis(ring_t, [change_ring(f, ring_t) for f in I.generators] + [rabinowitsch])
    result = eliminate(extended, [t])
    kept = [change_ring(f, I.ring) for f in result.generators]
    return IdealBasis(I.ring, kept, reduced_basis=kept)


def dimension_away_from(I: IdealBasis, g: PolyElement) -> Dimension:
    """
    Суммарная кратность точек V(I) вне {g = 0}: dim k[x,t]/(I + ⟨t·g − 1⟩).
    Исключение t не требуется.
    """
    g = change_ring(g, I.ring)
    if g.is_ground:
        return quotient_dimension(IdealBasis(I.ring, list(I.generators)))
    names = I.variables
    t = _fresh_name(names, 't_loc')
    ring_t = make_ring(names + [t], I.ring.domain)
    rabinowitsch = ring_t.gens[-1] * change_ring(g, ring_t) - 1
    extended = IdealBasis(ring_t, [change_ring(f, ring_t) for f in I.generators] + [rabinowitsch])
    return quotient_dimension(extended)


def local_dimension_at(I: IdealBasis, point: Sequence) -> Dimension:
    """Размерность локальной алгебры в рациональной точке (перенос + Мора)"""
    moved = [translate(f, point) for f in I.generators]
    return quotient_dimension(IdealBasis(I.ring, moved, LOCAL_DEGREVLEX))


def quotient_dimension_mod_p(I: IdealBasis, prime: int) -> Dimension:
    """Та же размерность над 𝔽_p (проверочная полоса)"""
    field = make_field(prime)
    ring = make_ring(I.variables, field)
    generators = [to_prime_field(f, field) for f in I.generators]
    return quotient_dimension(IdealBasis(ring, [change_ring(f, ring) for f in generators], I.order))


@dataclass
class ParametricCount:
    """
    dim k[x]/I_a для общих значений параметра a и многочлен bad от параметра:
    при bad(a) ≠ 0 размерность слоя равна generic.
    """
    parameter: str
    generic: Dimension
    bad: PolyElement

    def is_regular(self, value) -> bool:
        return bool(evaluate(self.bad, [value]))


def parametric_quotient_dimension(I: IdealBasis, parameter: str) -> ParametricCount:
    """
    Базис относительно блочного порядка x ≫ параметр. Если старшие коэффициенты
    (многочлены от параметра) элементов базиса не обращаются в ноль в точке a,
    образ базиса остаётся базисом I_a (специализация Калькбреннера), поэтому
    лестница по x у всех таких слоёв одна и та же. Элементы I ∩ k[параметр]
    тоже входят в bad: вне их корней слой пуст.
    """
    names = I.variables
    if parameter not in names:
        raise ContextMismatchError(f"Параметр {parameter} отсутствует в контексте {names}")
    rest = [name for name in names if name != parameter]
    k = len(rest)
    block_ring = PolyRing(rest + [parameter], I.ring.domain, _block_order(k))
    basis = _groebner(I.generators, block_ring)

    s_ring = make_ring([parameter], I.ring.domain)
    bad = s_ring.one
    leads: List[Monomial] = []
    vertical = False
    for g in basis:
        x_lead = g.LM[:k]
        coefficient = s_ring.from_dict({(m[k],): c for m, c in g.iterterms() if m[:k] == x_lead})
        bad *= coefficient
        if sum(x_lead) == 0:
            vertical = True
        else:
            leads.append(x_lead)

    if vertical:
        generic: Dimension = 0
    else:
        staircase = _staircase(leads, k)
        generic = INFINITE if staircase is None else len(staircase)
    logger.debug("Параметрический счёт по %s: общий слой %s, deg bad = %d", parameter, generic,
                 total_degree(bad))
    return ParametricCount(parameter, generic, bad)


# ---------------------------------------------------------------------------
# Рациональные точки
# ---------------------------------------------------------------------------

def univariate_eliminant(I: IdealBasis, variable: str) -> Optional[PolyElement]:
    """Образующая I ∩ k[variable] (None, если пересечение нулевое)"""
    others = [name for name in I.variables if name != variable]
    result = eliminate(I, others)
    if not result.generators:
        return None
    return min(result.generators, key=total_degree)


def distinct_point_count(I: IdealBasis) -> Dimension:
    """Число различных точек V(I) над ℂ (лемма Зайденберга)"""
    if quotient_dimension(I) == INFINITE:
        return INFINITE
    extra = []
    for name in I.variables:
        eliminant = univariate_eliminant(I, name)
        if eliminant is not None:
            extra.append(change_ring(eliminant.sqf_part(), I.ring))
    return quotient_dimension(ideal_sum(IdealBasis(I.ring, list(I.generators)), extra))


def _rational_roots(p: PolyElement) -> List:
    name = variable_names(p.ring)[0]
    roots = Poly(p.as_expr(), Symbol(name)).ground_roots()
    return sorted(roots.keys())


def _solve_rational(generators: List[PolyElement], ring: PolyRing) -> List[Tuple]:
    names = variable_names(ring)
    basis = _groebner(generators, ring)
    if any(g.is_ground for g in basis):
        return []
    if len(names) == 1:
        if not basis:
            raise NotZeroDimensionalError("Идеал не нульмерен")
        roots = _rational_roots(min(basis, key=total_degree))
        return [(r,) for r in roots]

    I = IdealBasis(ring, basis, reduced_basis=basis)
    eliminant = univariate_eliminant(I, names[0])
    if eliminant is None:
        raise NotZeroDimensionalError("Идеал не нульмерен")
    points = []
    rest = make_ring(names[1:], ring.domain)
    for root in _rational_roots(eliminant):
        reduced = [substitute(g, {names[0]: root}, rest) for g in basis]
        reduced = [g for g in reduced if g]
        if any(g.is_ground for g in reduced):
            continue
        if not reduced:
            raise NotZeroDimensionalError("Идеал не нульмерен")
        for tail in _solve_rational(reduced, rest):
            points.append((root,) + tail)
    return points


@dataclass
class RationalPoints:
    points: List[Tuple]
    residual: bool
    distinct: Dimension


def rational_points(I: IdealBasis) -> RationalPoints:
    """Все рациональные точки нульмерного идеала и флаг нерациональных остатков"""
    if quotient_dimension(IdealBasis(I.ring, list(I.generators))) == INFINITE:
        raise NotZeroDimensionalError("rational_points требует нульмерный идеал", variables=I.variables)
    raw = _solve_rational(list(I.generators), I.ring)
    field_ = I.ring.domain
    points = sorted({tuple(scalar_to_python(field_, field_.from_sympy(c)) for c in p) for p in raw})
    distinct = distinct_point_count(IdealBasis(I.ring, list(I.generators)))
    return RationalPoints(points, distinct > len(points), distinct)

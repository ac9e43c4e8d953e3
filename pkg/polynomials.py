"""
Точная полиномиальная арифметика над ℚ и 𝔽_p

Полиномы представлены элементами колец sympy (PolyRing / PolyElement): словарь
моном → коэффициент без нулевых коэффициентов. Модуль добавляет к ним то, чего
не хватает ядру: явные контексты переменных с проверкой совместимости, порядки
мономов (глобальный degrevlex и локальный антиградуированный), подстановки между
кольцами, гомогенизацию, якобианы и разбор текстовой грамматики.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Float, Rational, Symbol, isprime, nextprime
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from config import config
from errors import ContextMismatchError, FieldMismatchError, NotHomogeneousError, ParseError

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
ScalarLike = Union[int, Fraction, Rational, str]


# ---------------------------------------------------------------------------
# Поля коэффициентов
# ---------------------------------------------------------------------------

def make_field(prime: Optional[int] = None, check_headroom: bool = True):
    """ℚ по умолчанию или 𝔽_p для простого p > 2^20"""
    if prime is None:
        return QQ
    prime = int(prime)
    if not isprime(prime):
        raise FieldMismatchError(f"Модуль {prime} не является простым", modulus=prime)
    if check_headroom and prime <= config.field.prime_min:
        raise FieldMismatchError(
            f"Модуль {prime} слишком мал для генерических выборок (нужно p > 2^20)", modulus=prime
        )
    return GF(prime)


def random_prime(seed: int) -> int:
    """Случайное простое из [2^20, 2^31), воспроизводимое по seed"""
    rng = np.random.default_rng(seed)
    while True:
        candidate = int(rng.integers(config.field.prime_min, config.field.prime_max))
        prime = int(nextprime(candidate))
        if prime < config.field.prime_max:
            return prime


def verification_primes(seed: int, count: Optional[int] = None) -> List[int]:
    """Различные простые проверочной полосы; по умолчанию config.field.verification_primes штук"""
    count = config.field.verification_primes if count is None else count
    primes: List[int] = []
    offset = 0
    while len(primes) < count:
        prime = random_prime(seed + offset)
        offset += 1
        if prime not in primes:
            primes.append(prime)
    return primes


def field_label(field) -> str:
    characteristic = field.characteristic()
    return 'QQ' if characteristic == 0 else f'GF({characteristic})'


def to_scalar(field, value: ScalarLike):
    """Перевод целого, дроби или строки '-2/5' в элемент поля"""
    if isinstance(value, str):
        value = Rational(value.strip())
    elif isinstance(value, Rational):
        pass
    elif hasattr(value, 'numerator') and hasattr(value, 'denominator'):
        value = Rational(int(value.numerator), int(value.denominator))
    else:
        value = Rational(value)
    if field.characteristic() == 0:
        return field.from_sympy(value)

    modulus = field.characteristic()
    if int(value.q) % modulus == 0:
        raise FieldMismatchError(
            f"Знаменатель {value.q} обращается в ноль по модулю {modulus}", modulus=modulus
        )
    return field(int(value.p)) / field(int(value.q))


def scalar_to_python(field, value) -> Union[int, Fraction]:
    """Элемент поля в int/Fraction (для 𝔽_p — симметричный представитель)"""
    rational = Rational(field.to_sympy(value))
    if rational.q == 1:
        return int(rational.p)
    return Fraction(int(rational.p), int(rational.q))


def convert_coefficient(value, source, target):
    if source == target:
        return value
    return to_scalar(target, Rational(source.to_sympy(value)))


# ---------------------------------------------------------------------------
# Порядки мономов
# ---------------------------------------------------------------------------

class OrderKind(str, Enum):
    GLOBAL = 'GLOBAL_DEGREVLEX'
    LOCAL = 'LOCAL_ANTIGRADED_DEGREVLEX'


@dataclass(frozen=True)
class MonomialOrder:
    """
    Порядок мономов как ключ сортировки.

    GLOBAL: сначала степень, затем обратный лексикографический (1 — наименьший).
    LOCAL: степень с обратным знаком, затем тот же revlex (1 — наибольший).
    Перестановка задаёт, в каком порядке переменные участвуют в сравнении.
    """
    kind: OrderKind = OrderKind.GLOBAL
    permutation: Optional[Tuple[int, ...]] = None

    def __call__(self, monom: Monomial):
        if self.permutation is not None:
            monom = tuple(monom[i] for i in self.permutation)
        revlex = tuple(-e for e in reversed(monom))
        degree = sum(monom)
        if self.kind is OrderKind.GLOBAL:
            return (degree, revlex)
        return (-degree, revlex)

    @property
    def is_local(self) -> bool:
        return self.kind is OrderKind.LOCAL

    def leading_monomial(self, p: PolyElement) -> Monomial:
        return max(p.itermonoms(), key=self)

    def leading_term(self, p: PolyElement) -> Tuple[Monomial, object]:
        monom = self.leading_monomial(p)
        return monom, p[monom]

    def describe(self) -> str:
        if self.permutation is None:
            return self.kind.value
        return f"{self.kind.value}{list(self.permutation)}"


GLOBAL_DEGREVLEX = MonomialOrder()
LOCAL_DEGREVLEX = MonomialOrder(OrderKind.LOCAL)


# ---------------------------------------------------------------------------
# Кольца и контексты
# ---------------------------------------------------------------------------

def make_ring(variables: Sequence[Union[str, Symbol]], field=QQ, order=None) -> PolyRing:
    """Кольцо многочленов с именованными упорядоченными переменными"""
    names = [str(v) for v in variables]
    if not names:
        raise ContextMismatchError("Контекст переменных пуст")
    if len(set(names)) != len(names):
        raise ContextMismatchError(f"Повторяющиеся переменные: {names}")
    if order is None or order == GLOBAL_DEGREVLEX:
        order = grevlex
    return PolyRing(names, field, order)


def variable_names(ring: PolyRing) -> List[str]:
    return [str(s) for s in ring.symbols]


def generator(ring: PolyRing, name: str) -> PolyElement:
    names = variable_names(ring)
    if name not in names:
        raise ContextMismatchError(f"Переменная {name} отсутствует в контексте {names}")
    return ring.gens[names.index(name)]


def same_context(p: PolyElement, q: PolyElement) -> None:
    if p.ring.domain != q.ring.domain:
        raise FieldMismatchError(
            f"Разные поля коэффициентов: {field_label(p.ring.domain)} и {field_label(q.ring.domain)}"
        )
    if p.ring.symbols != q.ring.symbols:
        raise ContextMismatchError(
            f"Разные контексты переменных: {variable_names(p.ring)} и {variable_names(q.ring)}"
        )


def _coerce(p: PolyElement, q):
    if isinstance(q, PolyElement):
        same_context(p, q)
        if q.ring is not p.ring:
            q = change_ring(q, p.ring)
        return q
    return p.ring.ground_new(to_scalar(p.ring.domain, q))


def add(p: PolyElement, q) -> PolyElement:
    return p + _coerce(p, q)


def mul(p: PolyElement, q) -> PolyElement:
    return p * _coerce(p, q)


def scale(p: PolyElement, c: ScalarLike) -> PolyElement:
    return p * to_scalar(p.ring.domain, c)


def change_ring(p: PolyElement, target: PolyRing) -> PolyElement:
    """Вложение по именам переменных (и, при необходимости, смена поля)"""
    if p.ring is target:
        return p
    positions = {name: i for i, name in enumerate(variable_names(target))}
    index = [positions.get(name) for name in variable_names(p.ring)]
    source_field = p.ring.domain
    terms = {}
    for monom, coeff in p.iterterms():
        image = [0] * target.ngens
        for k, (e, j) in enumerate(zip(monom, index)):
            if e == 0:
                continue
            if j is None:
                raise ContextMismatchError(
                    f"Переменная {variable_names(p.ring)[k]} не вкладывается в "
                    f"{variable_names(target)}"
                )
            image[j] = e
        value = convert_coefficient(coeff, source_field, target.domain)
        if value:
            terms[tuple(image)] = value
    return target.from_dict(terms) if terms else target.zero


def to_prime_field(p: PolyElement, field) -> PolyElement:
    ring = PolyRing(p.ring.symbols, field, p.ring.order)
    return change_ring(p, ring)


# ---------------------------------------------------------------------------
# Степени, формы, вычисление значений
# ---------------------------------------------------------------------------

def total_degree(p: PolyElement) -> int:
    """Полная степень (-1 для нулевого многочлена)"""
    if not p:
        return -1
    return max(sum(m) for m in p.itermonoms())


def homogeneous_part(p: PolyElement, degree: int) -> PolyElement:
    terms = {m: c for m, c in p.iterterms() if sum(m) == degree}
    return p.ring.from_dict(terms) if terms else p.ring.zero


def top_form(p: PolyElement) -> PolyElement:
    return homogeneous_part(p, total_degree(p))


def is_homogeneous(p: PolyElement) -> bool:
    return len({sum(m) for m in p.itermonoms()}) <= 1


def is_constant(p: PolyElement) -> bool:
    return total_degree(p) <= 0


def evaluate(p: PolyElement, point: Sequence[ScalarLike]):
    """Значение многочлена в точке (элемент поля)"""
    field = p.ring.domain
    values = [to_scalar(field, v) for v in point]
    if len(values) != p.ring.ngens:
        raise ContextMismatchError(f"Точка длины {len(values)} в контексте из {p.ring.ngens} переменных")
    total = field.zero
    for monom, coeff in p.iterterms():
        term = coeff
        for v, e in zip(values, monom):
            if e:
                term = term * v ** e
        total += term
    return total


def _as_polynomial(value, target: PolyRing) -> PolyElement:
    if isinstance(value, PolyElement):
        return change_ring(value, target)
    return target.ground_new(to_scalar(target.domain, value))


def substitute(p: PolyElement, assignments: Mapping, target: Optional[PolyRing] = None) -> PolyElement:
    """
    Гомоморфизм колец: переменная ↦ многочлен целевого контекста.

    Неназначенные переменные переходят в одноимённые переменные цели; если такой
    нет, возбуждается ContextMismatchError.
    """
    target = p.ring if target is None else target
    assigned = {str(k): v for k, v in assignments.items()}
    target_names = variable_names(target)

    images: List[Optional[PolyElement]] = []
    for name in variable_names(p.ring):
        if name in assigned:
            images.append(_as_polynomial(assigned[name], target))
        elif name in target_names:
            images.append(target.gens[target_names.index(name)])
        else:
            images.append(None)

    powers: Dict[Tuple[int, int], PolyElement] = {}

    def power(i: int, e: int) -> PolyElement:
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] ** e
        return powers[key]

    result = target.zero
    for monom, coeff in p.iterterms():
        term = target.ground_new(convert_coefficient(coeff, p.ring.domain, target.domain))
        for i, e in enumerate(monom):
            if e == 0:
                continue
            if images[i] is None:
                raise ContextMismatchError(
                    f"Переменная {variable_names(p.ring)[i]} не назначена и отсутствует в "
                    f"целевом контексте {target_names}"
                )
            term = term * power(i, e)
        result += term
    return result


def translate(p: PolyElement, point: Sequence[ScalarLike]) -> PolyElement:
    """f(x + q): переносит точку q в начало координат"""
    ring = p.ring
    shift = {
        name: g + to_scalar(ring.domain, q)
        for name, g, q in zip(variable_names(ring), ring.gens, point)
    }
    return substitute(p, shift, ring)


# ---------------------------------------------------------------------------
# Гомогенизация и карты
# ---------------------------------------------------------------------------

def homogenize(p: PolyElement, newvar: str) -> PolyElement:
    """Однородный многочлен степени deg p; новая переменная ставится первой"""
    names = variable_names(p.ring)
    if newvar in names:
        raise ContextMismatchError(f"Переменная {newvar} уже есть в контексте {names}")
    ring = PolyRing([newvar] + names, p.ring.domain, grevlex)
    if not p:
        return ring.zero
    degree = total_degree(p)
    terms = {(degree - sum(m),) + tuple(m): c for m, c in p.iterterms()}
    return ring.from_dict(terms)


def dehomogenize(P: PolyElement, chart: str) -> PolyElement:
    """Ограничение на карту chart = 1"""
    if not is_homogeneous(P):
        raise NotHomogeneousError("Дегомогенизация применима только к однородному многочлену")
    names = variable_names(P.ring)
    if chart not in names:
        raise ContextMismatchError(f"Карта {chart} отсутствует в контексте {names}")
    k = names.index(chart)
    ring = PolyRing(names[:k] + names[k + 1:], P.ring.domain, grevlex)
    terms: Dict[Monomial, object] = {}
    for monom, coeff in P.iterterms():
        image = tuple(monom[:k]) + tuple(monom[k + 1:])
        terms[image] = terms.get(image, P.ring.domain.zero) + coeff
    terms = {m: c for m, c in terms.items() if c}
    return ring.from_dict(terms) if terms else ring.zero


def jacobian_ideal_generators(f: PolyElement) -> List[PolyElement]:
    """Все первые частные производные в порядке контекста"""
    partials = [f.diff(g) for g in f.ring.gens]
    if is_constant(f):
        logger.warning("Якобиан постоянного многочлена: все производные нулевые")
    return partials


def squarefree_part(p: PolyElement) -> PolyElement:
    return p.sqf_part()


def polynomial_to_text(p: PolyElement) -> str:
    return str(p.as_expr()).replace('**', '^')


# ---------------------------------------------------------------------------
# Текстовая грамматика
# ---------------------------------------------------------------------------

_ALLOWED = re.compile(r"[A-Za-z_0-9\s+\-*/^().]")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_NUMBER = re.compile(r"[0-9]+(\.[0-9]*)?")


def _position(text: str, index: int, first_line: int) -> Tuple[int, int]:
    line = text.count('\n', 0, index) + first_line
    column = index - (text.rfind('\n', 0, index) + 1) + 1
    return line, column


def _scan(text: str, variables: Sequence[str], first_line: int) -> None:
    """Лексическая проверка: символы, идентификаторы, явное умножение, скобки"""
    depth = 0
    previous = None  # 'operand' или 'operator'
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if not _ALLOWED.match(ch):
            raise ParseError(f"Недопустимый символ {ch!r}", *_position(text, i, first_line))

        identifier = _IDENTIFIER.match(text, i)
        number = _NUMBER.match(text, i)
        if identifier or number or ch == '(':
            if previous == 'operand':
                raise ParseError("Требуется явное умножение '*'", *_position(text, i, first_line))
        if identifier:
            name = identifier.group(0)
            if name not in variables:
                raise ParseError(
                    f"Неизвестная переменная {name!r} (объявлены: {', '.join(variables)})",
                    *_position(text, i, first_line),
                )
            previous = 'operand'
            i = identifier.end()
            continue
        if number:
            if number.group(1) is not None:
                raise ParseError("Коэффициенты с плавающей точкой не поддерживаются",
                                 *_position(text, i, first_line))
            previous = 'operand'
            i = number.end()
            continue
        if ch == '(':
            depth += 1
            previous = 'operator'
        elif ch == ')':
            depth -= 1
            if depth < 0:
                raise ParseError("Лишняя закрывающая скобка", *_position(text, i, first_line))
            previous = 'operand'
        else:
            previous = 'operator'
        i += 1
    if depth != 0:
        raise ParseError("Незакрытая скобка", *_position(text, len(text) - 1, first_line))


def parse_polynomial(text: str, variables: Sequence[str], field=QQ, first_line: int = 1) -> PolyElement:
    """Разбор строки вида 'x + x^2*y*z - 2/5' в кольце с заданными переменными"""
    variables = [str(v) for v in variables]
    if not text.strip():
        raise ParseError("Пустой многочлен", first_line, 1)
    _scan(text, variables, first_line)

    ring = make_ring(variables, field)
    local_dict = {name: Symbol(name) for name in variables}
    try:
        expr = parse_expr(
            ' '.join(text.splitlines()),
            local_dict=local_dict,
            transformations=standard_transformations + (convert_xor,),
            evaluate=True,
        )
    except (SyntaxError, TypeError, ValueError) as e:
        line = getattr(e, 'lineno', None) or 1
        column = getattr(e, 'offset', None) or 1
        raise ParseError(f"Синтаксическая ошибка: {e}", first_line + line - 1, column)

    if expr.atoms(Float):
        raise ParseError("Коэффициенты с плавающей точкой не поддерживаются", first_line, 1)
    try:
        return ring.from_expr(expr)
    except (ValueError, TypeError) as e:
        raise ParseError(f"Выражение не является многочленом: {e}", first_line, 1)


@dataclass(frozen=True)
class PolynomialSource:
    """Содержимое входного файла: переменные, параметры и текст многочлена"""
    variables: Tuple[str, ...]
    parameters: Tuple[str, ...]
    body: str
    body_line: int

    def polynomial(self, field=QQ) -> PolyElement:
        return parse_polynomial(self.body, list(self.parameters) + list(self.variables), field, self.body_line)


def _name_list(value: str, line: int) -> Tuple[str, ...]:
    names = tuple(part.strip() for part in value.split(',') if part.strip())
    for name in names:
        if not _IDENTIFIER.fullmatch(name):
            raise ParseError(f"Некорректное имя переменной {name!r}", line, 1)
    return names


def parse_polynomial_file(text: str, variables: Optional[Sequence[str]] = None) -> PolynomialSource:
    """
    Формат файла: первая строка 'vars: x, y, z', необязательная строка
    'param: s' (или 'params: s, t'), далее многочлен. Строки с '#' пропускаются.
    """
    lines = text.splitlines()
    declared: Tuple[str, ...] = ()
    parameters: Tuple[str, ...] = ()
    body_lines: List[str] = []
    body_line = None
    for number, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith('#'):
            if body_line is not None:
                body_lines.append('')
            continue
        head, separator, rest = stripped.partition(':')
        key = head.strip().lower()
        if body_line is None and separator and key in ('vars', 'var'):
            declared = _name_list(rest, number)
            continue
        if body_line is None and separator and key in ('param', 'params'):
            parameters = _name_list(rest, number)
            continue
        if body_line is None:
            body_line = number
        body_lines.append(raw)

    if variables:
        declared = tuple(str(v) for v in variables)
    if not declared:
        raise ParseError("Не объявлены переменные (ожидается строка 'vars: ...')", 1, 1)
    if body_line is None:
        raise ParseError("Файл не содержит многочлена", len(lines) or 1, 1)
    overlap = set(declared) & set(parameters)
    if overlap:
        raise ParseError(f"Параметры совпадают с переменными: {sorted(overlap)}", 1, 1)
    return PolynomialSource(declared, parameters, '\n'.join(body_lines).strip(), body_line)


def specialize(p: PolyElement, values: Mapping[str, ScalarLike], variables: Sequence[str]) -> PolyElement:
    """Подстановка численных значений параметров и переход в кольцо переменных"""
    target = make_ring(variables, p.ring.domain)
    return substitute(p, dict(values), target)


def linear_form(ring: PolyRing, coefficients: Iterable[ScalarLike]) -> PolyElement:
    result = ring.zero
    for g, c in zip(ring.gens, coefficients):
        result += g * to_scalar(ring.domain, c)
    return result

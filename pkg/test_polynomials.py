"""
Тесты полиномиальной арифметики: поля, контексты, порядки, разбор текста
"""

from fractions import Fraction

import pytest
from sympy.polys.domains import QQ

from config import config
from errors import ContextMismatchError, FieldMismatchError, NotHomogeneousError, ParseError
from polynomials import (
    GLOBAL_DEGREVLEX, LOCAL_DEGREVLEX, add, dehomogenize, evaluate, field_label, homogenize,
    is_homogeneous, jacobian_ideal_generators, linear_form, make_field, make_ring, mul,
    parse_polynomial, parse_polynomial_file, polynomial_to_text, random_prime, scalar_to_python, scale,
    specialize, squarefree_part, substitute, to_scalar, top_form, total_degree, translate,
    verification_primes,
)


def test_parse_and_degrees():
    """Разбор, степень, старшая форма и значение в точке"""
    p = parse_polynomial("x + x^2*y*z - 2/5", ['x', 'y', 'z'])
    assert total_degree(p) == 4
    assert top_form(p).as_expr() == parse_polynomial("x^2*y*z", ['x', 'y', 'z']).as_expr()
    assert scalar_to_python(QQ, evaluate(p, [1, 1, 1])) == Fraction(8, 5)
    assert total_degree(p.ring.zero) == -1


def test_scale_by_rational():
    p = parse_polynomial("2*x - 4/3", ['x'])
    assert scale(p, Fraction(3, 2)).as_expr() == parse_polynomial("3*x - 2", ['x']).as_expr()
    assert not scale(p, 0)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as info:
        parse_polynomial("2x + 1", ['x'])
    assert (info.value.line, info.value.column) == (1, 2)

    with pytest.raises(ParseError):
        parse_polynomial("x + w", ['x', 'y'])
    with pytest.raises(ParseError):
        parse_polynomial("1.5*x", ['x'])
    with pytest.raises(ParseError):
        parse_polynomial("(x + y", ['x', 'y'])
    with pytest.raises(ParseError):
        parse_polynomial("   ", ['x'])


def test_context_and_field_mismatch():
    p = parse_polynomial("x + y", ['x', 'y'])
    q = parse_polynomial("x + z", ['x', 'z'])
    with pytest.raises(ContextMismatchError):
        add(p, q)

    field = make_field(2147483647)
    r = parse_polynomial("x + y", ['x', 'y'], field)
    with pytest.raises(FieldMismatchError):
        mul(p, r)

    with pytest.raises(ContextMismatchError):
        make_ring(['x', 'x'])


def test_prime_field_wraparound():
    """В 𝔽_p коэффициент p − 1 плюс 1 даёт ноль"""
    field = make_field(2147483647)
    ring = make_ring(['x'], field)
    x = ring.gens[0]
    assert not (x * to_scalar(field, 2147483646) + x)
    assert field_label(field) == 'GF(2147483647)'
    assert field_label(make_field()) == 'QQ'


def test_small_or_composite_modulus_rejected():
    with pytest.raises(FieldMismatchError):
        make_field(65537)
    with pytest.raises(FieldMismatchError):
        make_field(2 ** 21)

    # без проверки запаса малое простое допустимо для арифметики
    small = make_field(65537, check_headroom=False)
    x = make_ring(['x'], small).gens[0]
    assert not (x * to_scalar(small, 65536) + x)


def test_substitution_into_slice():
    p = parse_polynomial("x^2 + y^2", ['x', 'y'])
    x_ring = make_ring(['x'])
    image = substitute(p, {'y': parse_polynomial("2*x + 1", ['x'])}, x_ring)
    assert image.as_expr() == parse_polynomial("5*x^2 + 4*x + 1", ['x']).as_expr()

    with pytest.raises(ContextMismatchError):
        substitute(p, {}, x_ring)


def test_denominator_divisible_by_prime():
    field = make_field(2147483647)
    with pytest.raises(FieldMismatchError):
        to_scalar(field, Fraction(1, 2147483647))


def test_random_prime_is_reproducible():
    p = random_prime(7)
    assert p == random_prime(7)
    assert 2 ** 20 < p < 2 ** 31
    make_field(p)


def test_verification_primes_are_distinct():
    primes = verification_primes(7)
    assert len(primes) == config.field.verification_primes
    assert len(set(primes)) == len(primes)
    assert primes == verification_primes(7)
    assert primes[0] == random_prime(7)


def test_monomial_orders():
    ring = make_ring(['x', 'y'])
    x, y = ring.gens
    p = x + x ** 2
    assert GLOBAL_DEGREVLEX.leading_monomial(p) == (2, 0)
    assert LOCAL_DEGREVLEX.leading_monomial(p) == (1, 0)
    assert LOCAL_DEGREVLEX.leading_monomial(p + 3) == (0, 0)

    ring3 = make_ring(['x', 'y', 'z'])
    x, y, z = ring3.gens
    # degrevlex: при равной степени x*y старше z^2
    assert GLOBAL_DEGREVLEX.leading_monomial(x * y + z ** 2) == (1, 1, 0)


def test_homogenize_and_charts():
    p = parse_polynomial("y - x^3", ['x', 'y'])
    P = homogenize(p, 'w')
    assert is_homogeneous(P)
    assert [str(s) for s in P.ring.symbols] == ['w', 'x', 'y']
    assert dehomogenize(P, 'w').as_expr() == p.as_expr()

    chart = dehomogenize(P, 'y')
    assert chart.as_expr() == parse_polynomial("w^2 - x^3", ['w', 'x']).as_expr()

    with pytest.raises(NotHomogeneousError):
        dehomogenize(p, 'x')
    with pytest.raises(ContextMismatchError):
        homogenize(p, 'x')


def test_translate_moves_point_to_origin():
    p = parse_polynomial("x^2 + y^2 - 1", ['x', 'y'])
    moved = translate(p, [1, 0])
    assert moved.coeff(1) == 0
    assert moved.as_expr() == parse_polynomial("x^2 + 2*x + y^2", ['x', 'y']).as_expr()


def test_jacobian_and_squarefree():
    p = parse_polynomial("x^3 + y^3 - 1", ['x', 'y'])
    partials = jacobian_ideal_generators(p)
    assert [q.as_expr() for q in partials] == [
        parse_polynomial("3*x^2", ['x', 'y']).as_expr(),
        parse_polynomial("3*y^2", ['x', 'y']).as_expr(),
    ]
    form = parse_polynomial("(x + y)^2*(x - y)", ['x', 'y'])
    assert total_degree(squarefree_part(form)) == 2


def test_polynomial_file_with_parameters():
    text = "vars: x, y\nparam: s\n# окружность радиуса s\nx^2 + y^2 - s\n"
    source = parse_polynomial_file(text)
    assert source.variables == ('x', 'y')
    assert source.parameters == ('s',)
    assert source.body_line == 4

    f = specialize(source.polynomial(), {'s': 1}, source.variables)
    assert f.as_expr() == parse_polynomial("x^2 + y^2 - 1", ['x', 'y']).as_expr()
    assert polynomial_to_text(f).count('^') == 2


def test_polynomial_file_errors():
    with pytest.raises(ParseError):
        parse_polynomial_file("x^2 + 1\n")
    with pytest.raises(ParseError):
        parse_polynomial_file("vars: x, y\n")
    with pytest.raises(ParseError):
        parse_polynomial_file("vars: x, s\nparam: s\nx + s\n")
    with pytest.raises(ParseError) as info:
        parse_polynomial_file("vars: x, y\n\nx + 2y\n").polynomial()
    assert info.value.line == 3


def test_linear_form():
    ring = make_ring(['x', 'y', 'z'])
    form = linear_form(ring, [1, -2, Fraction(1, 3)])
    assert scalar_to_python(QQ, evaluate(form, [3, 1, 3])) == 2


if __name__ == "__main__":
    from demo import run_tests
    run_tests(dict(globals()), "ТЕСТЫ ПОЛИНОМИАЛЬНОЙ АРИФМЕТИКИ")

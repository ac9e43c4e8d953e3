"""
Тесты базисов Грёбнера, стандартных базисов и сервисов над ними
"""

import pytest

from errors import ContextMismatchError, NotZeroDimensionalError
from groebner import (
    INFINITE, IdealBasis, dimension_away_from, distinct_point_count, eliminate, groebner_basis,
    ideal, is_unit_ideal, krull_dimension, local_dimension_at, normal_form, quotient_dimension,
    parametric_quotient_dimension, quotient_dimension_mod_p, rational_points, saturate,
    univariate_eliminant,
)
from polynomials import LOCAL_DEGREVLEX, make_ring, parse_polynomial


def _ideal(texts, variables, order=None):
    generators = [parse_polynomial(t, variables) for t in texts]
    ring = make_ring(variables)
    if order is None:
        return ideal(generators, ring)
    return ideal(generators, ring, order)


def test_quotient_dimension_of_points():
    I = _ideal(["x^2 + y^2 - 1", "x - y"], ['x', 'y'])
    assert quotient_dimension(I) == 2
    assert krull_dimension(I) == 0
    assert not is_unit_ideal(I)


def test_unit_and_positive_dimensional_ideals():
    unit = _ideal(["x", "x - 1"], ['x', 'y'])
    assert is_unit_ideal(unit)
    assert quotient_dimension(unit) == 0
    assert krull_dimension(unit) == -1

    cross = _ideal(["x*y"], ['x', 'y'])
    assert quotient_dimension(cross) == INFINITE
    assert krull_dimension(cross) == 1
    assert krull_dimension(_ideal(["x"], ['x', 'y', 'z'])) == 2


def test_normal_form_reduces_ideal_members():
    I = _ideal(["x^2 + y^2 - 1", "x - y"], ['x', 'y'])
    member = parse_polynomial("(x - y)*(x + 3) + y*(x^2 + y^2 - 1)", ['x', 'y'])
    assert not normal_form(member, I)
    assert normal_form(parse_polynomial("x", ['x', 'y']), I)
    assert groebner_basis(I).reduced_basis


def test_local_algebra_ignores_points_away_from_origin():
    """x^2(1 − x): глобально 3 точки с кратностью, в нуле только 2"""
    texts = ["x^2 - x^3", "y"]
    assert quotient_dimension(_ideal(texts, ['x', 'y'])) == 3
    assert quotient_dimension(_ideal(texts, ['x', 'y'], LOCAL_DEGREVLEX)) == 2
    assert local_dimension_at(_ideal(texts, ['x', 'y']), [1, 0]) == 1


def test_local_milnor_algebra_of_cusp_and_d4():
    assert quotient_dimension(_ideal(["3*x^2", "2*y"], ['x', 'y'], LOCAL_DEGREVLEX)) == 2
    # D4: x^3 + y^3
    assert quotient_dimension(_ideal(["3*x^2", "3*y^2"], ['x', 'y'], LOCAL_DEGREVLEX)) == 4
    # единица в локальном кольце
    assert is_unit_ideal(_ideal(["1 + x", "y"], ['x', 'y'], LOCAL_DEGREVLEX))


def test_saturation_removes_component():
    """⟨x(y − 1)⟩ : x^∞ = ⟨y − 1⟩"""
    I = _ideal(["x*y - x"], ['x', 'y'])
    x = parse_polynomial("x", ['x', 'y'])
    S = saturate(I, x)
    assert not normal_form(parse_polynomial("y - 1", ['x', 'y']), S)
    assert normal_form(x, S)


def test_saturation_can_give_unit_ideal():
    """⟨xy, x^2⟩ сосредоточен в x = 0, поэтому насыщение по x единично"""
    I = _ideal(["x*y", "x^2"], ['x', 'y'])
    S = saturate(I, parse_polynomial("x", ['x', 'y']))
    assert is_unit_ideal(S)

    same = saturate(I, parse_polynomial("7", ['x', 'y']))
    assert quotient_dimension(same) == quotient_dimension(_ideal(["x*y", "x^2"], ['x', 'y']))

    by_y = saturate(I, parse_polynomial("y", ['x', 'y']))
    assert not normal_form(parse_polynomial("x", ['x', 'y']), by_y)
    assert krull_dimension(by_y) == 1


def test_saturation_by_second_variable():
    """⟨xy⟩ : y^∞ = ⟨x⟩"""
    I = _ideal(["x*y"], ['x', 'y'])
    S = saturate(I, parse_polynomial("y", ['x', 'y']))
    assert not normal_form(parse_polynomial("x", ['x', 'y']), S)
    assert normal_form(parse_polynomial("y", ['x', 'y']), S)


def test_local_staircase_of_monomial_ideal():
    assert quotient_dimension(_ideal(["x^3", "y^2"], ['x', 'y'], LOCAL_DEGREVLEX)) == 6


def test_elimination_of_parametrised_curve():
    I = _ideal(["x - t", "y - t^2"], ['t', 'x', 'y'])
    E = eliminate(I, ['t'])
    assert [str(s) for s in E.ring.symbols] == ['x', 'y']
    assert len(E.generators) == 1
    assert not normal_form(parse_polynomial("y - x^2", ['x', 'y']), E)

    cubic = eliminate(_ideal(["x - t", "y - t^2", "z - t^3"], ['t', 'x', 'y', 'z']), ['t'])
    for text in ("y - x^2", "z - x^3", "x*z - y^2"):
        assert not normal_form(parse_polynomial(text, ['x', 'y', 'z']), cubic)
    assert krull_dimension(cubic) == 1


def test_dimension_away_from_hypersurface():
    I = _ideal(["x^2 - x", "y"], ['x', 'y'])
    assert dimension_away_from(I, parse_polynomial("x", ['x', 'y'])) == 1
    assert dimension_away_from(I, parse_polynomial("x - 2", ['x', 'y'])) == 2


def test_rational_points_and_residual():
    result = rational_points(_ideal(["x^2 - 1", "y - x"], ['x', 'y']))
    assert result.points == [(-1, -1), (1, 1)]
    assert not result.residual

    irrational = rational_points(_ideal(["x^2 - 2", "y"], ['x', 'y']))
    assert irrational.points == []
    assert irrational.residual
    assert irrational.distinct == 2

    with pytest.raises(NotZeroDimensionalError):
        rational_points(_ideal(["x*y"], ['x', 'y']))


def test_distinct_points_ignore_multiplicity():
    I = _ideal(["x^2", "y"], ['x', 'y'])
    assert quotient_dimension(I) == 2
    assert distinct_point_count(_ideal(["x^2", "y"], ['x', 'y'])) == 1


def test_parametric_count_and_bad_values():
    """⟨s·x² − x⟩: два корня при s ≠ 0, при s = 0 остаётся один"""
    I = _ideal(["s*x^2 - x", "y"], ['x', 'y', 's'])
    count = parametric_quotient_dimension(I, 's')
    assert count.generic == 2
    assert not count.is_regular(0)
    assert count.is_regular(3)

    vertical = parametric_quotient_dimension(_ideal(["s - 1", "x", "y"], ['x', 'y', 's']), 's')
    assert vertical.generic == 0
    assert not vertical.is_regular(1)

    with pytest.raises(ContextMismatchError):
        parametric_quotient_dimension(I, 't')


def test_univariate_eliminant():
    I = _ideal(["x^2 + y^2 - 1", "x - y"], ['x', 'y'])
    eliminant = univariate_eliminant(I, 'y')
    assert [str(s) for s in eliminant.ring.symbols] == ['y']
    assert eliminant.degree() == 2


def test_prime_lane_agrees_with_rationals():
    I = _ideal(["x^2 + y^2 - 1", "x - y"], ['x', 'y'])
    assert quotient_dimension_mod_p(I, 2147483647) == quotient_dimension(I)


def test_empty_generators_need_ring():
    with pytest.raises(ValueError):
        ideal([])
    ring = make_ring(['x'])
    assert quotient_dimension(IdealBasis(ring, [])) == INFINITE


if __name__ == "__main__":
    from demo import run_tests
    run_tests(dict(globals()), "ТЕСТЫ БАЗИСОВ ГРЁБНЕРА")

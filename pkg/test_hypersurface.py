"""
Тесты гиперповерхностей: классы, числа Милнора, суммы на бесконечности, пучки
"""

import pytest
from sympy import Matrix

from errors import GenericityError, InvariantError, NonIsolatedSingularityError
from hypersurface import (
    ClassTag, Classification, Hypersurface, InfinityAggregate, Location, aggregate_mu_at_infinity,
    classify, infinity_points, is_smooth, local_milnor_number, milnor_number_at,
    milnor_sum_projective, projective_scene, random_linear_change, sample_generic,
    sectional_milnor_number, slice_hypersurface, with_agreement,
)
from polynomials import parse_polynomial


def _curve(text):
    return Hypersurface.from_text(text, ['x', 'y'])


def _surface(text):
    return Hypersurface.from_text(text, ['x', 'y', 'z'])


def test_constant_polynomial_rejected():
    with pytest.raises(InvariantError):
        _curve("5")


def test_classification_of_standard_examples():
    assert classify(_curve("x^2 + y^2 - 1")).tag is ClassTag.GENERAL_SMOOTH
    assert classify(_surface("x^2 + y^2 + z^2 - 1")).tag is ClassTag.GENERAL_SMOOTH
    assert classify(_curve("y - x^3")).tag is ClassTag.F_TYPE
    assert classify(_surface("x^2 + y^2 + z^2")).tag is ClassTag.F_TYPE

    b1 = classify(_surface("x + x^2*y*z - 3"))
    assert b1.tag is ClassTag.B1_TYPE
    assert b1.sing_closure == 1
    assert b1.sing_affine == -1


def test_class_inclusion_chain():
    general = Classification(ClassTag.GENERAL_SMOOTH, -1, -1, -1)
    assert general.includes(ClassTag.F_TYPE)
    assert general.includes(ClassTag.B1_TYPE)
    b0 = Classification(ClassTag.B0_TYPE, 0, 1, -1)
    assert not b0.includes(ClassTag.F_TYPE)
    assert b0.includes(ClassTag.B0_TYPE, ClassTag.F_TYPE)
    beyond = Classification(ClassTag.BEYOND, 2, 2, 1, True)
    assert not beyond.includes(ClassTag.B1_TYPE)


def test_smoothness():
    assert is_smooth(_curve("x^3 + y^3 - 1"))
    assert not is_smooth(_curve("y^2 - x^3"))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("variables, direction", [(['x', 'y'], (3,)), (['x', 'y', 'z'], (3, 5))])
def test_milnor_numbers_of_a_k(k, variables, direction):
    """A_k: μ = k, сечение общей гиперплоскостью даёт μ^⟨n−1⟩ = 1"""
    squares = " + ".join(f"{v}^2" for v in variables[1:])
    f = parse_polynomial(f"x^{k + 1} + {squares}", variables)
    origin = (0,) * len(variables)
    assert local_milnor_number(f, origin) == k
    assert sectional_milnor_number(f, origin, direction) == 1


def test_milnor_number_after_translation():
    f = parse_polynomial("(x - 1)^3 + y^2", ['x', 'y'])
    assert local_milnor_number(f, (1, 0)) == 2
    assert local_milnor_number(f, (0, 0)) == 0
    assert milnor_number_at(Hypersurface(f), (1, 0)) == 2


def test_non_isolated_singularity_is_refused():
    f = parse_polynomial("x^2", ['x', 'y'])
    with pytest.raises(NonIsolatedSingularityError):
        local_milnor_number(f, (0, 0))


def test_milnor_number_at_infinity_of_cubic_parabola():
    """Замыкание y·w^2 = x^3 имеет каспидальную точку [0:0:1]"""
    scene = projective_scene(_curve("y - x^3"))
    assert scene.charts == ['x0', 'x', 'y']
    assert milnor_number_at(scene, (0, 0, 1)) == 2


def test_aggregates_at_infinity():
    scene = projective_scene(_curve("y - x^3"))
    assert aggregate_mu_at_infinity(scene, InfinityAggregate.CLOSURE) == 2
    assert aggregate_mu_at_infinity(scene, InfinityAggregate.SLICE_AT_INFINITY) == 2

    parabola = projective_scene(_curve("y - x^2"))
    assert aggregate_mu_at_infinity(parabola, InfinityAggregate.CLOSURE) == 0
    assert aggregate_mu_at_infinity(parabola, InfinityAggregate.SLICE_AT_INFINITY) == 1

    circle = projective_scene(_curve("x^2 + y^2 - 1"))
    assert aggregate_mu_at_infinity(circle, InfinityAggregate.CLOSURE) == 0


def test_projective_sum_counts_all_points():
    """Три узла у xyz = 0 в ℙ²"""
    G = parse_polynomial("x*y*z", ['x', 'y', 'z'])
    assert milnor_sum_projective(G) == 3


def test_sliced_aggregate_needs_pencil():
    scene = projective_scene(_surface("x + x^2*y*z - 3"))
    with pytest.raises(ValueError):
        aggregate_mu_at_infinity(scene, InfinityAggregate.SLICED_BY_H)


def test_infinity_points_carry_lambda():
    scene = projective_scene(_curve("y - x^3"))
    points, residual = infinity_points(scene, sample_generic(1, 2))
    assert not residual
    assert len(points) == 1
    p = points[0]
    assert p.location is Location.INFINITY
    assert p.chart == 'y'
    assert tuple(p.point) == (0, 0, 1)
    assert (p.mu, p.mu_section, p.mu_infinity_slice, p.lambda_p) == (2, 1, 2, 4)


def test_sample_generic_is_reproducible():
    a = sample_generic(5, 3)
    assert a == sample_generic(5, 3)
    assert a != sample_generic(6, 3)
    assert len(a.h) == 3
    assert len(a.slices) == 2
    assert len(a.sliced().h) == 2
    assert all(abs(c) <= 2 ** 20 for c in a.h)

    with pytest.raises(ValueError):
        sample_generic(5, 3, trials=1)
    with pytest.raises(ValueError):
        sample_generic(5, 3, coefficient_range=100)


def test_slice_keeps_degree():
    Y = _surface("x^3 + y^3 + z^3 - 1")
    sliced = slice_hypersurface(Y, sample_generic(3, 3).slices[0])
    assert sliced.variables == ['x', 'y']
    assert sliced.d == 3


def test_agreement_and_widening():
    record = with_agreement(lambda pencil: 7, 2, 'константа', seed=1, trials=3)
    assert record.value == 7
    assert record.rounds == 1
    assert len(record.seeds) == 3

    def always_fails(pencil):
        raise GenericityError("не общий")

    with pytest.raises(GenericityError):
        with_agreement(always_fails, 2, 'отказ', seed=1, trials=2)


def test_linear_change_keeps_class():
    Y = _curve("x^2 + y^2 - 1")
    moved = random_linear_change(Y, 11)
    assert moved.d == 2
    assert classify(moved).tag is ClassTag.GENERAL_SMOOTH
    assert random_linear_change(Y, 11).f == moved.f

    # матрица замены, собранная из образов x и y, невырождена над ℚ
    for seed in range(20):
        images = [random_linear_change(_curve(v), seed).f for v in ("x", "y")]
        rows = [[int(image.coeff(gen)) for gen in image.ring.gens] for image in images]
        assert Matrix(rows).det() != 0


if __name__ == "__main__":
    from demo import run_tests
    run_tests(dict(globals()), "ТЕСТЫ ГИПЕРПОВЕРХНОСТЕЙ")

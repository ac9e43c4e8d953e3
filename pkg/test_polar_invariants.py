"""
Тесты полярных инвариантов: α, β, χ, дефект Гаусса-Бонне и формулы классов
"""

import pytest

from errors import (
    ClassViolationError, InconsistencyError, MissingBetaError, UnsupportedInfinityError,
)
from hypersurface import ClassTag, Classification, Hypersurface, sample_generic
from polar_invariants import (
    AlphaSequence, BetaProvenance, BetaSequence, FormulaInputs, affine_milnor_sum,
    affine_polar_sum, alpha_sequence, alpha_top, beta_sequence, chi_projective_form,
    chi_smooth_projective, compute_invariants, euler_characteristic, euler_levels,
    f_type_formula, gauss_bonnet_defect, gauss_bonnet_sectional, milnor_package, polar_minors,
    risler_curve_formula, solve_residual_beta,
)
from polynomials import parse_polynomial


def _curve(text):
    return Hypersurface.from_text(text, ['x', 'y'])


def _surface(text):
    return Hypersurface.from_text(text, ['x', 'y', 'z'])


# (многочлен, α^(1), χ, GB)
SMOOTH_CURVES = [
    ("x^2 + y^2 - 1", 2, 0, -2),
    ("x^3 + y^3 - 1", 6, -3, -3),
    ("y^2 - x^3 - x", 4, -1, -3),
    ("x^4 + y^4 - 1", 12, -8, -4),
    ("y - x^2", 1, 1, -2),
    ("y - x^3", 2, 1, -3),
    ("y - x^4", 3, 1, -4),
]


@pytest.mark.parametrize("text, alpha, chi, gb", SMOOTH_CURVES)
def test_smooth_curves(text, alpha, chi, gb):
    report = compute_invariants(_curve(text), seed=42, trials=3)
    assert report.alpha.alpha[1] == alpha
    assert report.chi == chi
    assert report.gb_defect == gb
    assert report.beta.beta == [0, 0]
    assert all(f.agrees for f in report.formulas)


@pytest.mark.parametrize("text", [row[0] for row in SMOOTH_CURVES])
def test_curvature_is_maximal_only_for_general_curves(text):
    """α^(n) = d(d−1)^n ровно для GENERAL_SMOOTH, иначе строго меньше"""
    Y = _curve(text)
    report = compute_invariants(Y, seed=42, trials=2)
    bound = Y.d * (Y.d - 1) ** Y.n
    if report.classification.tag is ClassTag.GENERAL_SMOOTH:
        assert report.alpha.alpha[-1] == bound
        assert report.chi == 1 + (-1) ** Y.n * (Y.d - 1) ** (Y.n + 1)
    else:
        assert report.alpha.alpha[-1] < bound


def test_curve_formula_for_cubic_parabola():
    """d² − 2d + r − Σμ_p(C̄) = 9 − 6 + 1 − 2"""
    C = _curve("y - x^3")
    evaluation = risler_curve_formula(C, expected=2)
    assert evaluation.terms == {'d2_minus_2d': 3, 'directions': 1, 'closure_at_infinity': -2}
    assert evaluation.value == 2
    assert evaluation.agrees
    assert evaluation.to_dict()['status'] == 'PASS'


def test_curve_formula_needs_smooth_curve():
    with pytest.raises(ClassViolationError):
        risler_curve_formula(_curve("y^2 - x^3"))
    with pytest.raises(ClassViolationError):
        risler_curve_formula(_surface("x^2 + y^2 + z^2 - 1"))


def test_sphere():
    report = compute_invariants(_surface("x^2 + y^2 + z^2 - 1"), seed=42, trials=3)
    assert report.alpha.alpha == [2, 2, 2]
    assert report.chi == 2
    assert report.gb_defect == 0
    assert report.classification.tag is ClassTag.GENERAL_SMOOTH
    assert not [c for c in report.checks if c['name'] == 'gauss_bonnet_sectional']


def test_fermat_cubic_surface():
    report = compute_invariants(_surface("x^3 + y^3 + z^3 - 1"), seed=42, trials=3)
    assert report.alpha.alpha == [3, 6, 12]
    assert report.euler_levels == [3, -3, 9]
    assert report.chi == 9
    names = {f.name for f in report.formulas}
    assert {'b1_defect', 'b0_total_curvature', 'f_type'} <= names
    assert all(f.agrees for f in report.formulas)


def test_cusp_with_polar_correction():
    """Касп: α^(1) = 1, β^(1) = μ^⟨0⟩ = 1, χ = 1"""
    report = compute_invariants(_curve("y^2 - x^3"), seed=42, trials=3)
    assert report.alpha.alpha == [3, 1]
    assert report.beta.beta == [0, 1]
    assert report.beta.provenance[1] is BetaProvenance.COMPUTED_ISOLATED
    assert report.chi == 1
    assert report.gb_defect == -2
    assert report.milnor.sum_mu == 2
    assert report.milnor.sum_mu_section == 1
    sectional = [c for c in report.checks if c['name'] == 'gauss_bonnet_sectional']
    assert sectional == [{'name': 'gauss_bonnet_sectional', 'status': 'PASS', 'expected': -2, 'actual': -2}]
    assert {f.name: f.value for f in report.formulas}['f_type'] == 1


def test_alpha_top_of_circle():
    pencil = sample_generic(1, 2)
    circle = _curve("x^2 + y^2 - 1")
    assert len(polar_minors(circle.f, pencil.h)) == 1
    assert alpha_top(circle, pencil) == 2
    assert alpha_sequence(circle, pencil).alpha == [2, 2]


def test_affine_milnor_sums():
    assert affine_milnor_sum(_curve("y^2 - x^3")) == 2
    assert affine_milnor_sum(_surface("x^2 + y^2 + z^2")) == 1
    assert affine_milnor_sum(_curve("x^2 + y^2 - 1")) == 0

    pencil = sample_generic(2, 3)
    # A3: μ = 3, μ^⟨1⟩ = 1
    assert affine_polar_sum(_surface("x^4 + y^2 + z^2"), pencil) == 4
    assert affine_polar_sum(_curve("y^2 - x^3"), sample_generic(2, 2)) == 3


def test_milnor_package_of_a2():
    package = milnor_package(_curve("x^3 + y^2"), sample_generic(4, 2))
    assert len(package.points) == 1
    assert (package.sum_mu, package.sum_mu_section, package.local_loss) == (2, 1, 3)
    assert not package.residual


def test_beta_sequence_provenance():
    cone = _surface("x^2 + y^2 + z^2")
    beta = beta_sequence(cone, sample_generic(5, 3), supplied={})
    assert beta.beta == [0, 0, 1]
    assert beta.provenance == [BetaProvenance.COMPUTED_ISOLATED] * 3

    with pytest.raises(InconsistencyError):
        beta_sequence(cone, sample_generic(5, 3), supplied={2: 7})

    unknown = beta_sequence(cone, sample_generic(5, 3), computed=[0, None, None], supplied={1: 2})
    assert unknown.provenance == [BetaProvenance.COMPUTED_ISOLATED, BetaProvenance.PAPER_SUPPLIED,
                                  BetaProvenance.UNKNOWN]
    assert unknown.unknown_levels == [2]


def test_euler_levels_stop_at_unknown_beta():
    alpha = AlphaSequence([4, 8, 6])
    beta = BetaSequence([0, 1, None], [BetaProvenance.COMPUTED_ISOLATED] * 2 + [BetaProvenance.UNKNOWN])
    assert euler_levels(alpha, beta) == [4, -5, None]
    with pytest.raises(MissingBetaError):
        euler_characteristic(_surface("x^2 + x^3*y + z^4"), alpha, beta)


def test_residual_beta_from_known_chi():
    alpha = AlphaSequence([4, 8, 6])
    beta = BetaSequence([0, 1, None], [BetaProvenance.COMPUTED_ISOLATED] * 2 + [BetaProvenance.UNKNOWN])
    solved = solve_residual_beta(alpha, beta, chi=1)
    assert solved.beta == [0, 1, 0]
    assert solved.provenance[2] is BetaProvenance.RESIDUAL
    assert euler_levels(alpha, solved) == [4, -5, 1]

    two_missing = BetaSequence([0, None, None], [BetaProvenance.COMPUTED_ISOLATED] + [BetaProvenance.UNKNOWN] * 2)
    with pytest.raises(MissingBetaError):
        solve_residual_beta(alpha, two_missing, chi=1)


def test_gauss_bonnet_cross_check():
    assert gauss_bonnet_sectional(1, 1, 3) == -2
    assert gauss_bonnet_defect(2, 12, 9) == 3
    assert gauss_bonnet_defect(2, 12, 9, sum_mu_section=0, chi_slice=-3) == 3
    with pytest.raises(InconsistencyError):
        gauss_bonnet_defect(2, 12, 9, sum_mu_section=0, chi_slice=0)


def test_chi_of_smooth_projective_hypersurfaces():
    assert [chi_smooth_projective(1, d) for d in (1, 2, 3, 5)] == [1, 2, 3, 5]
    assert chi_smooth_projective(2, 2) == 2
    assert chi_smooth_projective(2, 3) == 0
    assert chi_smooth_projective(2, 4) == -4
    assert chi_smooth_projective(3, 3) == 9
    with pytest.raises(ValueError):
        chi_smooth_projective(0, 2)


def test_chi_of_forms_at_infinity():
    assert chi_projective_form(parse_polynomial("x^3 + y^3", ['x', 'y'])) == 3
    # приведённая часть x·y: две точки
    assert chi_projective_form(parse_polynomial("x^2*y", ['x', 'y'])) == 2
    # три прямые в ℙ²: 3·2 − 3
    assert chi_projective_form(parse_polynomial("x*y*z", ['x', 'y', 'z'])) == 3
    with pytest.raises(UnsupportedInfinityError):
        chi_projective_form(parse_polynomial("x*y", ['x', 'y', 'z', 'w']))


def test_formula_class_guard():
    Y = _surface("x + x^2*y*z - 3")
    data = FormulaInputs(2, 4, Classification(ClassTag.B1_TYPE, 1, 1, -1))
    with pytest.raises(ClassViolationError):
        f_type_formula(Y, data)


def test_non_reduced_curve_is_refused_not_failed():
    """(y − x²)²: β неизвестна, особенности на бесконечности не изолированы"""
    report = compute_invariants(_curve("(y - x^2)^2"), seed=42, trials=2)
    assert report.chi is None
    assert report.gb_defect is None
    assert report.beta.provenance[1] is BetaProvenance.UNKNOWN
    assert report.classification.tag is ClassTag.BEYOND
    codes = {c.get('code') for c in report.checks}
    assert MissingBetaError.code in codes
    refused = {r['name'] for r in report.infinity.refusals}
    assert 'mu_closure' in refused
    assert report.formulas == []


if __name__ == "__main__":
    from demo import run_tests
    run_tests(dict(globals()), "ТЕСТЫ ПОЛЯРНЫХ ИНВАРИАНТОВ")

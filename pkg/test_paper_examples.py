"""
Сверка с таблицами примеров из fixtures/paper_tables.json5

Долгие тесты: запускаются через pytest -m slow.
"""

import pytest

from hypersurface import ClassTag
from main import EXIT_OK, main
from polar_invariants import BetaProvenance, chi_smooth_projective, compute_invariants
from report import (
    JobMode, JobSpec, hypersurface_from_source, load_tables, read_fixture, run_family, verify_paper,
)
from polynomials import parse_polynomial_file

pytestmark = pytest.mark.slow


def _fibre(example, values):
    source = parse_polynomial_file(read_fixture(load_tables()[example]['file']))
    return hypersurface_from_source(source, values)


def _failed(summary):
    return [cell.to_dict() for cell in summary.cells if cell.status not in ('PASS', 'ERRATUM')]


def test_example_6_1_rows():
    """x + x²yz = s: класс B1, α = [4, 8, 5] при s ≠ 0 и [4, 6, 3] при s = 0, χ = 1"""
    general = compute_invariants(_fibre('6.1', {'s': 3}))
    assert general.alpha.alpha == [4, 8, 5]
    assert general.chi == 1
    assert general.classification.tag is ClassTag.B1_TYPE

    special = compute_invariants(_fibre('6.1', {'s': 0}))
    assert special.alpha.alpha == [4, 6, 3]
    assert special.chi == 1
    assert special.classification.tag is ClassTag.B1_TYPE
    assert special.gb_defect == 2


def test_example_6_1_family():
    job = JobSpec(JobMode.FAMILY, text=read_fixture('example_6_1.poly'), parameter='s')
    d = run_family(job).decomposition
    assert (d.alpha_generic, d.alpha_special, d.alpha_crt, d.alpha_inf) == (5, 3, 0, 2)


def test_example_6_2_corrected_chi_column():
    summary = verify_paper(JobSpec(JobMode.VERIFY_PAPER, only=['6.2']))
    assert not _failed(summary)
    errata = [cell for cell in summary.cells if cell.status == 'ERRATUM']
    assert [cell.expected for cell in errata] == [0, 3, 0, 3]
    assert [cell.actual for cell in errata] == [1, 4, 1, 4]
    assert chi_smooth_projective(2, 4) == -4


def test_example_6_3_supplied_beta():
    report = compute_invariants(_fibre('6.3', {'s': 0}), supplied_beta={2: 0})
    assert report.alpha.alpha == [4, 8, 6]
    assert report.beta.beta == [0, 1, 0]
    assert report.beta.provenance[2] is BetaProvenance.PAPER_SUPPLIED
    assert report.euler_levels == [4, -5, 1]

    general = compute_invariants(_fibre('6.3', {'s': 3}))
    assert general.alpha.alpha == [4, 12, 12]
    assert general.euler_levels == [4, -8, 4]


def test_example_6_3_residual_beta_from_chi():
    report = compute_invariants(_fibre('6.3', {'s': 0}), known_chi=1)
    assert report.beta.beta[2] == 0
    assert report.beta.provenance[2] is BetaProvenance.RESIDUAL


def test_example_6_4_rows():
    summary = verify_paper(JobSpec(JobMode.VERIFY_PAPER, only=['6.4']))
    assert not _failed(summary)
    names = {cell.name for cell in summary.cells}
    assert {'alpha', 'beta', 'chi_levels'} <= names


def test_verify_paper_cli():
    assert main(['verify-paper', '--only', '6.1', '--quick']) == EXIT_OK


if __name__ == "__main__":
    from demo import run_tests
    run_tests(dict(globals()), "СВЕРКА С ТАБЛИЦАМИ ПРИМЕРОВ")

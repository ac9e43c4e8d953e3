"""
Оркестрация заданий, сериализация отчётов и сверка с таблицами примеров
"""

import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

import json5
import pandas as pd
from colorama import Fore, Style
from tqdm import tqdm

from config import config
from errors import InconsistencyError, InvariantError
from family import (
    CrtCheck, DeformationFamily, InfinityDecomposition, crt_vs_mu_check, decompose_with_agreement,
    generic_deformation,
)
from hypersurface import Hypersurface, classify
from polar_invariants import (
    AlphaSequence, InvariantReport, affine_class, agreed_levels, chi_smooth_projective,
    compute_invariants,
)
from polynomials import (
    PolynomialSource, field_label, make_field, parse_polynomial_file, polynomial_to_text,
    specialize, verification_primes,
)

logger = logging.getLogger(__name__)


class JobMode(str, Enum):
    INVARIANTS = 'INVARIANTS'
    FAMILY = 'FAMILY'
    VERIFY_PAPER = 'VERIFY_PAPER'


@dataclass
class JobSpec:
    """Одно задание CLI"""
    mode: JobMode
    text: str = ''
    variables: Optional[List[str]] = None
    parameter: Optional[str] = None
    parameter_values: Dict[str, Fraction] = field(default_factory=dict)
    field_name: str = config.field.default_field
    seed: int = config.genericity.seed
    trials: int = config.genericity.trials
    output_format: str = config.output.output_format
    with_deformation: bool = True
    supplied_beta: Dict[int, int] = field(default_factory=dict)
    known_chi: Optional[int] = None
    only: Optional[List[str]] = None
    quick: bool = False


@dataclass
class PrimeLaneReport:
    """Степени по модулю нескольких простых: класс и последовательность α совпали для всех"""
    hypersurface: Hypersurface
    primes: List[int]
    tag: str
    alpha: AlphaSequence
    seed: int
    trials: int
    checks: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class FamilyResult:
    family: DeformationFamily
    decomposition: InfinityDecomposition
    crt: Optional[CrtCheck] = None
    checks: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class VerificationCell:
    example: str
    row: str
    name: str
    expected: Any
    actual: Any
    status: str

    def to_dict(self) -> Dict[str, Any]:
        return {'example': self.example, 'row': self.row, 'name': self.name,
                'expected': self.expected, 'actual': self.actual, 'status': self.status}


@dataclass
class VerificationSummary:
    cells: List[VerificationCell] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(cell.status in ('PASS', 'ERRATUM') for cell in self.cells)

    @property
    def counts(self) -> Dict[str, int]:
        result: Dict[str, int] = {}
        for cell in self.cells:
            result[cell.status] = result.get(cell.status, 0) + 1
        return result


Result = Union[InvariantReport, PrimeLaneReport, FamilyResult, VerificationSummary]


# ---------------------------------------------------------------------------
# Загрузка входа
# ---------------------------------------------------------------------------

def load_source(job: JobSpec) -> PolynomialSource:
    return parse_polynomial_file(job.text, job.variables)


def hypersurface_from_source(source: PolynomialSource, values: Dict[str, Any], field_=None) -> Hypersurface:
    """Гиперповерхность при фиксированных значениях всех параметров"""
    field_ = make_field() if field_ is None else field_
    missing = [p for p in source.parameters if p not in values]
    if missing:
        raise InvariantError(f"Не заданы значения параметров {missing} (--param-value)")
    F = source.polynomial(field_)
    return Hypersurface(specialize(F, {p: values[p] for p in source.parameters}, source.variables))


def load_tables() -> Dict[str, Any]:
    path = config.get_fixture_path(config.fixtures.tables_file)
    with open(path, 'r', encoding='utf-8') as f:
        return json5.load(f)


def read_fixture(filename: str) -> str:
    with open(config.get_fixture_path(filename), 'r', encoding='utf-8') as f:
        return f.read()


# ---------------------------------------------------------------------------
# Выполнение
# ---------------------------------------------------------------------------

def _attach_deformation(Y: Hypersurface, report: InvariantReport) -> None:
    try:
        family = generic_deformation(Y, report.seed)
        decomposition = decompose_with_agreement(family, report.seed, report.trials)
        report.alpha_infinity = decomposition.alpha_inf
        report.affine_class = affine_class(Y, decomposition, report.total_curvature_units)
        report.checks.append({'name': 'affine_class', 'status': 'PASS',
                              'decomposition': decomposition.to_dict()})
    except InvariantError as e:
        logger.warning("Общая деформация: %s", e)
        report.checks.append({'name': 'affine_class', 'status': 'REFUSED', **e.to_dict()})


def _prime_lane(job: JobSpec, source: PolynomialSource) -> PrimeLaneReport:
    """α и класс над config.field.verification_primes простыми; расхождение между ними — ошибка"""
    primes = verification_primes(job.seed)
    rows = []
    for prime in primes:
        Y = hypersurface_from_source(source, job.parameter_values, make_field(prime))
        alpha, _, _ = agreed_levels(Y, job.seed, job.trials)
        rows.append((Y, classify(Y).tag.value, alpha))
    observed = {prime: {'tag': tag, 'alpha': alpha.alpha} for prime, (_, tag, alpha) in zip(primes, rows)}
    if len({(row['tag'], tuple(row['alpha'])) for row in observed.values()}) != 1:
        raise InconsistencyError("Результаты по разным простым расходятся", observed=observed)
    Y, tag, alpha = rows[0]
    check = {'name': 'prime_lane_agreement', 'status': 'PASS', 'primes': primes}
    return PrimeLaneReport(Y, primes, tag, alpha, job.seed, job.trials, [check])


def run_invariants(job: JobSpec) -> Union[InvariantReport, PrimeLaneReport]:
    source = load_source(job)
    if job.field_name != 'QQ':
        return _prime_lane(job, source)

    Y = hypersurface_from_source(source, job.parameter_values)
    report = compute_invariants(Y, job.seed, job.trials, job.supplied_beta, job.known_chi)
    if job.with_deformation:
        _attach_deformation(Y, report)
    return report


def run_family(job: JobSpec) -> FamilyResult:
    source = load_source(job)
    parameter = job.parameter or (source.parameters[0] if source.parameters else None)
    if parameter is None:
        raise InvariantError("Для режима family нужен параметр (строка 'param:' или --param)")
    fixed = {k: v for k, v in job.parameter_values.items() if k != parameter}
    family = DeformationFamily.from_source(source, parameter, fixed)
    decomposition = decompose_with_agreement(family, job.seed, job.trials)
    result = FamilyResult(family, decomposition, checks=list(decomposition.checks))

    special = classify(family.special_fibre)
    if special.sing_affine == 0 and decomposition.pencil is not None:
        try:
            result.crt = crt_vs_mu_check(family, decomposition.pencil)
            result.checks.append(result.crt.to_dict())
        except InvariantError as e:
            result.checks.append({'name': 'crt_vs_mu', 'status': 'FAIL', **e.to_dict()})
    return result


def _compare(summary: VerificationSummary, example: str, row: str, name: str, expected, actual,
             erratum: bool = False) -> None:
    if erratum:
        status = 'ERRATUM'
    else:
        status = 'PASS' if expected == actual else 'FAIL'
    summary.cells.append(VerificationCell(example, row, name, expected, actual, status))


def _verify_row(summary: VerificationSummary, example: str, source: PolynomialSource,
                row: Dict[str, Any]) -> None:
    label = row['label']
    supplied = {int(k): int(v) for k, v in row.get('supplied_beta', {}).items()}
    try:
        Y = hypersurface_from_source(source, row['values'])
        report = compute_invariants(Y, config.genericity.seed, config.genericity.trials, supplied)
    except InvariantError as e:
        summary.cells.append(VerificationCell(example, label, 'run', None, str(e), 'FAIL'))
        return

    if 'alpha' in row:
        _compare(summary, example, label, 'alpha', row['alpha'], report.alpha.alpha)
    if 'alpha_top' in row:
        _compare(summary, example, label, 'alpha_top', row['alpha_top'], report.total_curvature_units)
    if 'beta' in row:
        _compare(summary, example, label, 'beta', row['beta'], report.beta.beta)
    if 'chi' in row:
        _compare(summary, example, label, 'chi', row['chi'], report.chi)
    if 'chi_printed' in row:
        _compare(summary, example, label, 'chi_printed', row['chi_printed'], report.chi, erratum=True)
    if 'chi_levels' in row:
        _compare(summary, example, label, 'chi_levels', row['chi_levels'], report.euler_levels)
    if 'class' in row:
        _compare(summary, example, label, 'class', row['class'], report.classification.tag.value)
    for name in ('mu_closure', 'mu_sliced_infinity', 'chi_infinity'):
        if name in row:
            _compare(summary, example, label, name, row[name], getattr(report.infinity, name))
    formulas = {f.name: f.value for f in report.formulas}
    for name in ('b0_total_curvature', 'f_type'):
        if name in row:
            _compare(summary, example, label, name, row[name], formulas.get(name))


def _verify_family(summary: VerificationSummary, example: str, text: str, entry: Dict[str, Any]) -> None:
    job = JobSpec(JobMode.FAMILY, text=text, parameter=entry['parameter'],
                  parameter_values={k: Fraction(v) for k, v in entry.get('fixed', {}).items()})
    try:
        result = run_family(job)
    except InvariantError as e:
        summary.cells.append(VerificationCell(example, 'family', 'decomposition', entry['decomposition'],
                                              str(e), 'FAIL'))
        return
    d = result.decomposition
    _compare(summary, example, 'family', 'decomposition', entry['decomposition'],
             [d.alpha_generic, d.alpha_special, d.alpha_crt, d.alpha_inf])


def _chi_general(source: PolynomialSource, row: Dict[str, Any]) -> int:
    """χ гладкого сечения на бесконечности для n и d гиперповерхности примера"""
    Y = hypersurface_from_source(source, row['values'])
    return chi_smooth_projective(Y.n, Y.d)


def verify_paper(job: JobSpec) -> VerificationSummary:
    """Сверка ячеек таблиц примеров; поле всегда ℚ"""
    tables = load_tables()
    summary = VerificationSummary()
    examples = [key for key in tables if not job.only or key in job.only]
    for example in examples:
        entry = tables[example]
        text = read_fixture(entry['file'])
        source = parse_polynomial_file(text)
        for row in tqdm(entry['rows'], desc=f"Пример {example}", leave=False):
            _verify_row(summary, example, source, row)
        if 'chi_general' in entry:
            _compare(summary, example, 'general', 'chi_general', entry['chi_general'],
                     _chi_general(source, entry['rows'][0]))
        if 'family' in entry and not job.quick:
            _verify_family(summary, example, text, entry['family'])
    return summary


def run(job: JobSpec) -> Result:
    """Детерминированно при фиксированных (вход, seed, trials, поле)"""
    if job.mode is JobMode.INVARIANTS:
        return run_invariants(job)
    if job.mode is JobMode.FAMILY:
        return run_family(job)
    if job.mode is JobMode.VERIFY_PAPER:
        return verify_paper(job)
    raise ValueError(f"Неизвестный режим: {job.mode}")


# ---------------------------------------------------------------------------
# Структурированный вывод
# ---------------------------------------------------------------------------

def _plain(value):
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    return value


def to_document(result: Result, job: Optional[JobSpec] = None) -> Dict[str, Any]:
    field_name = job.field_name if job else 'QQ'
    if isinstance(result, InvariantReport):
        Y = result.hypersurface
        milnor = None
        if result.milnor is not None:
            milnor = {
                'points': [p.to_dict() for p in result.milnor.points],
                'residual': result.milnor.residual,
                'sum_mu': result.milnor.sum_mu,
                'sum_mu_section': result.milnor.sum_mu_section,
                'local_loss': result.milnor.local_loss,
            }
        return _plain({
            'polynomial': polynomial_to_text(Y.f),
            'variables': Y.variables,
            'degree': result.degree,
            'class': result.classification.to_dict(),
            'alpha': result.alpha.alpha,
            'beta': result.beta.to_dict(),
            'chi': result.chi,
            'chi_levels': result.euler_levels,
            'curvature_units': result.total_curvature_units,
            'signed_curvature_units': result.signed_curvature_units,
            'gb_defect': result.gb_defect,
            'affine_class': result.affine_class,
            'alpha_infinity': result.alpha_infinity,
            'milnor': milnor,
            'infinity': result.infinity.to_dict(),
            'checks': result.checks,
            'provenance': {'seed': result.seed, 'trials': result.trials, 'field': field_name,
                           'seeds': result.alpha.seeds, 'slices': result.alpha.slice_trace},
        })
    if isinstance(result, PrimeLaneReport):
        return _plain({
            'polynomial': polynomial_to_text(result.hypersurface.f),
            'degree': result.hypersurface.d,
            'class': {'tag': result.tag},
            'alpha': result.alpha.alpha,
            'curvature_units': result.alpha.top,
            'checks': result.checks,
            'provenance': {'seed': result.seed, 'trials': result.trials,
                           'field': ', '.join(field_label(make_field(p)) for p in result.primes)},
        })
    if isinstance(result, FamilyResult):
        document = result.decomposition.to_dict()
        document.update({
            'family': polynomial_to_text(result.family.F),
            'parameter': result.family.sigma,
            'degree': result.family.d,
            'degree_profile': result.family.degree_profile(),
            'checks': result.checks,
        })
        document['provenance']['field'] = field_name
        return _plain(document)
    if isinstance(result, VerificationSummary):
        return _plain({'passed': result.passed, 'counts': result.counts,
                       'cells': [cell.to_dict() for cell in result.cells]})
    raise TypeError(f"Неизвестный тип результата: {type(result).__name__}")


# ---------------------------------------------------------------------------
# Текстовый вывод
# ---------------------------------------------------------------------------

def _levels_table(report: InvariantReport) -> pd.DataFrame:
    rows = []
    for i in range(len(report.alpha.alpha) - 1, -1, -1):
        a = report.alpha.alpha[i]
        b = report.beta.beta[i]
        rows.append({
            'i': i,
            'α^(i)': a,
            'β^(i)': '?' if b is None else b,
            'α+β': '?' if b is None else a + b,
            'χ^i': '?' if report.euler_levels[i] is None else report.euler_levels[i],
            'β: источник': report.beta.provenance[i].value,
        })
    return pd.DataFrame(rows)


def _checks_table(checks: List[Dict[str, Any]]) -> pd.DataFrame:
    rows = [{'проверка': c.get('name'), 'статус': c.get('status'),
             'значение': c.get('value', c.get('message', ''))} for c in checks]
    return pd.DataFrame(rows, columns=['проверка', 'статус', 'значение'])


def _status(text: str) -> str:
    colour = {'PASS': Fore.GREEN, 'FAIL': Fore.RED, 'ERRATUM': Fore.YELLOW}.get(text)
    return f"{colour}{text}{Style.RESET_ALL}" if colour else text


def _emit_text(result: Result) -> str:
    lines: List[str] = []
    if isinstance(result, InvariantReport):
        Y = result.hypersurface
        lines.append(f"Y = {{ {polynomial_to_text(Y.f)} = 0 }} ⊂ ℂ^{Y.n + 1}, d = {Y.d}")
        lines.append(f"Класс: {result.classification.tag.value}")
        lines.append(_levels_table(result).to_string(index=False))
        summary = pd.DataFrame([
            {'величина': 'кривизна (ω_n)', 'значение': result.total_curvature_units},
            {'величина': 'χ(Y)', 'значение': result.chi},
            {'величина': 'GB(Y)', 'значение': result.gb_defect},
            {'величина': 'd^@', 'значение': result.affine_class},
            {'величина': 'α_0(∞)', 'значение': result.alpha_infinity},
        ])
        lines.append(summary.to_string(index=False))
        if result.checks:
            lines.append(_checks_table(result.checks).to_string(index=False))
        lines.append(f"seed = {result.seed}, испытаний = {result.trials}")
    elif isinstance(result, PrimeLaneReport):
        primes = ", ".join(str(p) for p in result.primes)
        lines.append(f"𝔽_p, p ∈ {{{primes}}}: класс {result.tag}, α = {result.alpha.alpha}")
    elif isinstance(result, FamilyResult):
        d = result.decomposition
        lines.append(f"F = {polynomial_to_text(result.family.F)}, параметр {result.family.sigma}")
        table = pd.DataFrame([{'α_s': d.alpha_generic, 'α_0': d.alpha_special,
                               'α_0(crt)': d.alpha_crt, 'α_0(∞)': d.alpha_inf}])
        lines.append(table.to_string(index=False))
        lines.append(f"{d.alpha_generic} = {d.alpha_special} + {d.alpha_crt} + {d.alpha_inf}")
        if result.checks:
            lines.append(_checks_table(result.checks).to_string(index=False))
    elif isinstance(result, VerificationSummary):
        for cell in result.cells:
            lines.append(f"{cell.example:>4} {cell.row:>6} {cell.name:<20} "
                         f"ожидалось {cell.expected!s:<16} получено {cell.actual!s:<16} {_status(cell.status)}")
        lines.append(f"Итого: {result.counts}")
    else:
        raise TypeError(f"Неизвестный тип результата: {type(result).__name__}")
    return '\n'.join(lines)


def emit(result: Result, output_format: str = 'text', job: Optional[JobSpec] = None) -> str:
    """text — таблицы; json — один объект со стабильными ключами"""
    if output_format == 'json':
        return json.dumps(to_document(result, job), ensure_ascii=False, indent=2, sort_keys=True)
    if output_format == 'text':
        return _emit_text(result)
    raise ValueError(f"Неизвестный формат вывода: {output_format}")


def save(result: Result, filename: str, job: Optional[JobSpec] = None) -> str:
    path = config.get_output_path(filename)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(to_document(result, job), f, ensure_ascii=False, indent=2, sort_keys=True)
    logger.info("Отчёт сохранён: %s", os.path.abspath(path))
    return path

"""
Главный модуль: кривизнные инварианты аффинных комплексных гиперповерхностей
Проект: точное вычисление полной кривизны, χ и дефекта Гаусса-Бонне
"""

import argparse
import logging
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from colorama import init as colorama_init

from config import config
from errors import InvariantError
from report import JobMode, JobSpec, VerificationSummary, emit, run, save

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


def print_project_header(mode: JobMode):
    """Печать заголовка проекта"""
    print("=" * 80)
    print("📐 КРИВИЗНА АФФИННЫХ ГИПЕРПОВЕРХНОСТЕЙ")
    print("=" * 80)
    print("🎯 Режим:", mode.value)
    print("🔬 Подход: базисы Грёбнера, стандартные базисы, полярные кривые")
    print("=" * 80)


def _parse_values(items: Optional[List[str]]) -> Dict[str, Fraction]:
    values = {}
    for item in items or []:
        name, separator, value = item.partition('=')
        if not separator:
            raise argparse.ArgumentTypeError(f"Ожидается имя=значение, получено {item!r}")
        values[name.strip()] = Fraction(value.strip())
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Полная кривизна, χ и GB аффинных гиперповерхностей")
    sub = parser.add_subparsers(dest='command', required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=config.genericity.seed)
    common.add_argument('--trials', type=int, default=config.genericity.trials)
    common.add_argument('--format', dest='output_format', choices=['text', 'json'],
                        default=config.output.output_format)
    common.add_argument('--save', action='store_true', help="сохранить JSON в папку результатов")
    common.add_argument('--verbose', action='store_true')

    invariants = sub.add_parser('invariants', parents=[common], help="инварианты одной гиперповерхности")
    invariants.add_argument('file')
    invariants.add_argument('--var', help="переменные через запятую (вместо строки vars:)")
    invariants.add_argument('--field', default=config.field.default_field, choices=['QQ', 'p'])
    invariants.add_argument('--param-value', action='append', help="значение параметра, например s=3")
    invariants.add_argument('--no-deformation', action='store_true',
                            help="не строить общую деформацию (d^@ и α_0(∞) не вычисляются)")

    family = sub.add_parser('family', parents=[common], help="разложение α_s = α_0 + crt + ∞")
    family.add_argument('file')
    family.add_argument('--param', help="параметр семейства")
    family.add_argument('--param-value', action='append', help="значения остальных параметров")

    verify = sub.add_parser('verify-paper', parents=[common], help="сверка с таблицами примеров")
    verify.add_argument('--only', action='append', choices=sorted(config.fixtures.examples))
    verify.add_argument('--quick', action='store_true', help="без разложений семейств")
    return parser


def job_from_args(args: argparse.Namespace) -> JobSpec:
    if args.command == 'verify-paper':
        return JobSpec(JobMode.VERIFY_PAPER, seed=args.seed, trials=args.trials,
                       output_format=args.output_format, only=args.only, quick=args.quick)

    with open(args.file, 'r', encoding='utf-8') as f:
        text = f.read()
    if args.command == 'invariants':
        variables = [v.strip() for v in args.var.split(',')] if args.var else None
        return JobSpec(JobMode.INVARIANTS, text=text, variables=variables,
                       parameter_values=_parse_values(args.param_value), field_name=args.field,
                       seed=args.seed, trials=args.trials, output_format=args.output_format,
                       with_deformation=not args.no_deformation)
    return JobSpec(JobMode.FAMILY, text=text, parameter=args.param,
                   parameter_values=_parse_values(args.param_value),
                   seed=args.seed, trials=args.trials, output_format=args.output_format)


def main(argv: Optional[List[str]] = None) -> int:
    """Основная функция: разбор аргументов, вычисление, вывод"""
    args = build_parser().parse_args(argv)
    level = 'INFO' if args.verbose else config.logging.level
    logging.basicConfig(level=level, format=config.logging.format)
    colorama_init()

    job = job_from_args(args)
    print_project_header(job.mode)

    try:
        print("\n🔍 ЭТАП 1: ВЫЧИСЛЕНИЕ")
        print("-" * 50)
        result = run(job)

        print("\n📋 ЭТАП 2: РЕЗУЛЬТАТЫ")
        print("-" * 50)
        print(emit(result, job.output_format, job))

        if args.save:
            filename = {
                JobMode.INVARIANTS: config.output.report_file,
                JobMode.FAMILY: config.output.family_file,
                JobMode.VERIFY_PAPER: config.output.verification_file,
            }[job.mode]
            path = save(result, filename, job)
            print(f"\n💾 Результат сохранён: {path}")

        if isinstance(result, VerificationSummary) and not result.passed:
            print("\n❌ СВЕРКА НЕ ПРОЙДЕНА")
            return EXIT_FAIL

        print("\n" + "=" * 80)
        print("🎉 ВЫЧИСЛЕНИЕ УСПЕШНО ЗАВЕРШЕНО!")
        print("=" * 80)
        return EXIT_OK

    except InvariantError as e:
        print(f"\n❌ ОШИБКА [{e.code}]:")
        print(f"   {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

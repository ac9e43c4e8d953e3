"""
Конфигурационный файл для вычисления кривизнных инвариантов аффинных гиперповерхностей
"""

import os
from dataclasses import dataclass
from typing import Dict

@dataclass
class FieldConfig:
    """Конфигурация поля коэффициентов"""
    default_field: str = 'QQ'

    # 𝔽_p используется только как быстрая проверка степеней
    prime_min: int = 2 ** 20
    prime_max: int = 2 ** 31
    verification_primes: int = 3

@dataclass
class GenericityConfig:
    """Конфигурация случайного выбора пучков и сечений"""
    seed: int = 42
    trials: int = 3
    coefficient_range: int = 2 ** 20
    widening_factor: int = 2 ** 8
    max_rounds: int = 5

    # Число случайных значений параметра s* для общего слоя
    parameter_samples: int = 3
    parameter_range: int = 2 ** 10
    deformation_rounds: int = 5

@dataclass
class EngineConfig:
    """Конфигурация движка базисов Грёбнера"""
    groebner_method: str = 'buchberger'
    check_buchberger_criterion: bool = True

    # Предел итераций N для сумм чисел Милнора на бесконечности
    max_localization_rounds: int = 10

@dataclass
class OutputConfig:
    """Конфигурация выходных файлов"""
    output_dir: str = 'results'
    output_format: str = 'text'
    report_file: str = 'invariants_report.json'
    family_file: str = 'family_decomposition.json'
    verification_file: str = 'paper_verification.json'

@dataclass
class FixtureConfig:
    """Конфигурация фикстур примеров"""
    fixtures_dir: str = 'fixtures'
    tables_file: str = 'paper_tables.json5'
    examples: Dict[str, str] = None

    def __post_init__(self):
        if self.examples is None:
            self.examples = {
                '6.1': 'example_6_1.poly',
                '6.2': 'example_6_2.poly',
                '6.3': 'example_6_3.poly',
                '6.4': 'example_6_4.poly',
            }

@dataclass
class LoggingConfig:
    """Конфигурация логирования"""
    level: str = 'WARNING'
    format: str = '%(asctime)s %(levelname)s %(name)s: %(message)s'

class Config:
    """Основной класс конфигурации"""

    def __init__(self):
        self.field = FieldConfig()
        self.genericity = GenericityConfig()
        self.engine = EngineConfig()
        self.output = OutputConfig()
        self.fixtures = FixtureConfig()
        self.logging = LoggingConfig()
        self.base_dir = os.path.dirname(os.path.abspath(__file__))

    def get_output_path(self, filename: str) -> str:
        """Получение полного пути к выходному файлу"""
        os.makedirs(self.output.output_dir, exist_ok=True)
        return os.path.join(self.output.output_dir, filename)

    def get_fixture_path(self, filename: str) -> str:
        """Путь к файлу фикстуры относительно репозитория"""
        return os.path.join(self.base_dir, self.fixtures.fixtures_dir, filename)


config = Config()

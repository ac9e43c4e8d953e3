"""
Типизированные ошибки вычислительного ядра

Каждая ошибка несёт стабильный код, который попадает в структурированный отчёт
и в сообщение CLI. Все классы наследуют ValueError, как и остальные проверки проекта.
"""

from typing import Any, Dict


class InvariantError(ValueError):
    """Базовая ошибка вычисления инвариантов"""

    code = 'INVARIANT_ERROR'

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """Представление для checks[] структурированного отчёта"""
        payload = {'code': self.code, 'message': self.message}
        if self.details:
            payload['details'] = {key: str(value) for key, value in self.details.items()}
        return payload

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


class ParseError(InvariantError):
    """Ошибка разбора полиномиального текста (с позицией)"""

    code = 'PARSE_ERROR'

    def __init__(self, message: str, line: int = 1, column: int = 1, **details: Any):
        super().__init__(message, line=line, column=column, **details)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"[{self.code}] строка {self.line}, столбец {self.column}: {self.message}"


class ContextMismatchError(InvariantError):
    code = 'CONTEXT_MISMATCH'


class FieldMismatchError(InvariantError):
    code = 'FIELD_MISMATCH'


class NotHomogeneousError(InvariantError):
    code = 'NOT_HOMOGENEOUS'


class NotZeroDimensionalError(InvariantError):
    code = 'NOT_ZERO_DIMENSIONAL'


class NonIsolatedSingularityError(InvariantError):
    code = 'NON_ISOLATED_SINGULARITY'


class GenericityError(InvariantError):
    """Случайный выбор пучка или сечения оказался негенерическим"""

    code = 'GENERICITY_FAILURE'


class UnsupportedInfinityError(InvariantError):
    code = 'UNSUPPORTED_INFINITY'


class DeformationError(InvariantError):
    code = 'DEFORMATION_FAILURE'


class ClassViolationError(InvariantError):
    code = 'CLASS_VIOLATION'


class MissingBetaError(InvariantError):
    code = 'MISSING_BETA'


class InconsistencyError(InvariantError):
    """Два независимых способа вычисления дали разные целые числа"""

    code = 'INCONSISTENCY'

"""
utils/errors.py - Иерархия исключений движка

НАЗНАЧЕНИЕ:
✅ Единый корень EngineError для всех ошибок расчёта
✅ У каждого исключения свой код выхода CLI
✅ SingularDivision хранит точку разложения x0
"""
from typing import Optional

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_MISSING_FLOW = 4


class EngineError(Exception):
    """Базовая ошибка движка"""

    exit_code = EXIT_CONFIG


class JetMismatch(EngineError):
    """Струи с разными x0 или порядком (нарушение контракта)"""


class SingularDivision(EngineError):
    """Деление на струю с нулевым (на уровне шума) свободным членом"""

    exit_code = EXIT_SINGULAR

    def __init__(self, x0: float, message: Optional[str] = None):
        self.x0 = x0
        super().__init__(message or f"Сингулярное деление в точке x0={x0!r}")


class DomainError(EngineError):
    """Неположительное основание для ln / дробной степени"""

    exit_code = EXIT_SINGULAR


class UnboundLevel(EngineError):
    """Запрошенный уровень не является связанным состоянием"""


class Unsupported(EngineError):
    """Запрошенный объект не поддерживается (например, C_n при n > 3)"""


class LevelIndexError(EngineError, IndexError):
    """Индекс состояния вне допустимого диапазона"""


class MissingFlow(EngineError):
    """У семейства нет потока параметров (нет инвариантности формы)"""

    exit_code = EXIT_MISSING_FLOW


class EmptyGrid(EngineError):
    """Исключения съели всю сетку"""

    exit_code = EXIT_SINGULAR


class DegenerateComparand(EngineError):
    """Эталонная выборка тождественно ~0"""

    exit_code = EXIT_SINGULAR


class ConfigError(EngineError):
    """Некорректная конфигурация запуска"""

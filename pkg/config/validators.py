"""
config/validators.py - Централизованная валидация входных данных запуска

НАЗНАЧЕНИЕ:
✅ Единая точка проверки семейства, параметров, метода, сетки и допусков
✅ Переиспользуется в settings и handlers
✅ Каждый метод возвращает (is_valid, error_message)
"""
import math
from typing import Any, Dict, Optional, Sequence, Tuple

from config.constants import (
    DEFAULT_LEVELS,
    DEFAULT_PARAMS,
    FAMILIES,
    METHODS,
    SUITES,
    TOLERANCE_KEYS,
)


class InputValidator:
    """Класс для валидации конфигурации запуска"""

    @staticmethod
    def validate_family(name: Any) -> Tuple[bool, Optional[str]]:
        if not isinstance(name, str) or name not in FAMILIES:
            return False, f"❌ Неизвестное семейство: {name!r} (доступны {', '.join(FAMILIES)})"
        return True, None

    @staticmethod
    def validate_params(family: str, params: Dict[str, Any]) -> Tuple[bool, Optional[str]]:
        """
        Проверяет набор параметров семейства

        Args:
            family: Имя семейства
            params: {"A": ..., "alpha": ...} или {"beta": ..., "upsilon": ...}

        Returns:
            (is_valid, error_message)
        """
        expected = set(DEFAULT_PARAMS[family])
        unknown = set(params) - expected
        if unknown:
            return False, f"❌ Неизвестные параметры {family}: {', '.join(sorted(unknown))}"
        for key, value in params.items():
            try:
                number = float(value)
            except (TypeError, ValueError):
                return False, f"❌ Параметр {key} должен быть числом (получено {value!r})"
            if not math.isfinite(number):
                return False, f"❌ Параметр {key} должен быть конечным"

        if family == "morse":
            for key in ("A", "alpha"):
                if key in params and float(params[key]) <= 0.0:
                    return False, f"❌ Морс: {key} должен быть > 0"
        if family == "ginocchio":
            if "beta" in params and not 0.0 < float(params["beta"]) <= 1.0:
                return False, "❌ Гинокио: beta должен лежать в (0, 1]"
            if "upsilon" in params and float(params["upsilon"]) <= 0.0:
                return False, "❌ Гинокио: upsilon должен быть > 0"
        return True, None

    @staticmethod
    def validate_order(family: str, order: Any) -> Tuple[bool, Optional[str]]:
        if isinstance(order, bool) or not isinstance(order, int):
            return False, f"❌ Порядок преобразования должен быть целым (получено {order!r})"
        if not 0 <= order <= DEFAULT_LEVELS[family]:
            return False, f"❌ Порядок {order} вне 0..{DEFAULT_LEVELS[family]} для {family}"
        return True, None

    @staticmethod
    def validate_levels(family: str, levels: Any) -> Tuple[bool, Optional[str]]:
        if isinstance(levels, bool) or not isinstance(levels, int):
            return False, f"❌ Число уровней должно быть целым (получено {levels!r})"
        if not 1 <= levels <= DEFAULT_LEVELS[family]:
            return False, f"❌ Уровней {levels} вне 1..{DEFAULT_LEVELS[family]} для {family}"
        return True, None

    @staticmethod
    def validate_method(method: Any) -> Tuple[bool, Optional[str]]:
        if method not in METHODS:
            return False, f"❌ Неизвестный метод: {method!r} (доступны {', '.join(METHODS)})"
        return True, None

    @staticmethod
    def validate_suite(suite: Any) -> Tuple[bool, Optional[str]]:
        if suite not in SUITES:
            return False, f"❌ Неизвестный набор проверок: {suite!r} (доступны {', '.join(SUITES)})"
        return True, None

    @staticmethod
    def validate_grid(grid: Sequence[Any]) -> Tuple[bool, Optional[str]]:
        """
        Проверяет сетку (min, max, count)

        count < 2 и пустой диапазон здесь не ловятся: это EmptyGrid при построении
        """
        if len(grid) != 3:
            return False, f"❌ Сетка задаётся как min,max,count (получено {grid!r})"
        lo, hi, count = grid
        try:
            lo, hi = float(lo), float(hi)
        except (TypeError, ValueError):
            return False, f"❌ Границы сетки должны быть числами (получено {grid!r})"
        if not (math.isfinite(lo) and math.isfinite(hi)):
            return False, "❌ Границы сетки должны быть конечными"
        if isinstance(count, bool) or not isinstance(count, int):
            return False, f"❌ Число точек сетки должно быть целым (получено {count!r})"
        return True, None

    @staticmethod
    def validate_tolerances(tolerances: Dict[str, Any]) -> Tuple[bool, Optional[str]]:
        for key, value in tolerances.items():
            if key not in TOLERANCE_KEYS:
                return False, f"❌ Неизвестный допуск: {key} (доступны {', '.join(TOLERANCE_KEYS)})"
            try:
                number = float(value)
            except (TypeError, ValueError):
                return False, f"❌ Допуск {key} должен быть числом (получено {value!r})"
            if not number > 0.0 or not math.isfinite(number):
                return False, f"❌ Допуск {key} должен быть > 0 (получено {value!r})"
        return True, None


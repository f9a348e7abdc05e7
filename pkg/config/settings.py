"""
config/settings.py - Конфигурация запуска

ИЗМЕНЕНИЯ:
✅ RunConfig собирается из JSON-файла и/или флагов CLI
✅ Неизвестные ключи JSON отклоняются на любом уровне
✅ Допуски: значения по умолчанию семейства + переопределения
✅ Переменные окружения не читаются: запуск полностью самодостаточен
"""
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

from config.constants import DEFAULT_GRIDS, DEFAULT_LEVELS, DEFAULT_PARAMS, DEFAULT_TOLERANCES
from config.validators import InputValidator
from utils.errors import ConfigError

TOP_LEVEL_KEYS = {"family", "order", "method", "grid", "out", "tolerances", "suite", "allow_unbound"}
FAMILY_KEYS = {"name", "params", "levels"}
GRID_KEYS = {"min", "max", "count", "node_scan"}


@dataclass(frozen=True)
class RunConfig:
    """Полная конфигурация одного запуска"""

    family: str = "morse"
    params: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_PARAMS["morse"]))
    levels: int = DEFAULT_LEVELS["morse"]
    order: int = 1
    method: str = "both"
    grid: Tuple[float, float, int] = DEFAULT_GRIDS["morse"]
    node_scan: bool = True
    out: Optional[str] = None
    tolerance_overrides: Dict[str, float] = field(default_factory=dict)
    suite: str = "all"
    allow_unbound: bool = False

    @property
    def tolerances(self) -> Dict[str, float]:
        merged = dict(DEFAULT_TOLERANCES[self.family])
        merged.update(self.tolerance_overrides)
        return merged

    def validate(self) -> "RunConfig":
        """
        Проверяет все поля через InputValidator

        Raises:
            ConfigError: первая найденная ошибка
        """
        checks = [
            InputValidator.validate_family(self.family),
        ]
        if checks[0][0]:
            checks += [
                InputValidator.validate_params(self.family, self.params),
                InputValidator.validate_levels(self.family, self.levels),
                InputValidator.validate_order(self.family, self.order),
            ]
        checks += [
            InputValidator.validate_method(self.method),
            InputValidator.validate_suite(self.suite),
            InputValidator.validate_grid(self.grid),
            InputValidator.validate_tolerances(self.tolerance_overrides),
        ]
        for is_valid, error in checks:
            if not is_valid:
                raise ConfigError(error)
        return self

    def as_dict(self) -> Dict[str, Any]:
        """JSON-представление в формате load_run_config"""
        lo, hi, count = self.grid
        return {
            "family": {"name": self.family, "params": dict(self.params), "levels": self.levels},
            "order": self.order,
            "method": self.method,
            "grid": {"min": lo, "max": hi, "count": count, "node_scan": self.node_scan},
            "out": self.out,
            "tolerances": self.tolerances,
            "suite": self.suite,
            "allow_unbound": self.allow_unbound,
        }


def default_run_config(family: str = "morse") -> RunConfig:
    is_valid, error = InputValidator.validate_family(family)
    if not is_valid:
        raise ConfigError(error)
    return RunConfig(
        family=family,
        params=dict(DEFAULT_PARAMS[family]),
        levels=DEFAULT_LEVELS[family],
        grid=DEFAULT_GRIDS[family],
    )


def _reject_unknown(section: str, data: Dict[str, Any], allowed: set) -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"❌ Раздел {section} должен быть объектом JSON")
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"❌ Неизвестные ключи в {section}: {', '.join(sorted(unknown))}")


def parse_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    RunConfig из разобранного JSON-документа

    Raises:
        ConfigError: неизвестные ключи или некорректные значения
    """
    _reject_unknown("конфигурации", data, TOP_LEVEL_KEYS)

    family_section = data.get("family", {})
    if isinstance(family_section, str):
        family_section = {"name": family_section}
    _reject_unknown("family", family_section, FAMILY_KEYS)
    config = default_run_config(family_section.get("name", "morse"))

    params = dict(config.params)
    params.update(family_section.get("params", {}))
    changes: Dict[str, Any] = {"params": params}
    if "levels" in family_section:
        changes["levels"] = family_section["levels"]

    for key in ("order", "method", "out", "suite", "allow_unbound"):
        if key in data:
            changes[key] = data[key]

    if "grid" in data:
        grid = data["grid"]
        _reject_unknown("grid", grid, GRID_KEYS)
        lo, hi, count = config.grid
        changes["grid"] = (grid.get("min", lo), grid.get("max", hi), grid.get("count", count))
        if "node_scan" in grid:
            changes["node_scan"] = bool(grid["node_scan"])

    if "tolerances" in data:
        if not isinstance(data["tolerances"], dict):
            raise ConfigError("❌ Раздел tolerances должен быть объектом JSON")
        changes["tolerance_overrides"] = dict(data["tolerances"])

    return replace(config, **changes).validate()


def load_run_config(path: str) -> RunConfig:
    """
    Загружает RunConfig из JSON-файла

    Raises:
        ConfigError: файл не найден, не JSON или не проходит валидацию
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"❌ Не удалось прочитать конфигурацию {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"❌ Конфигурация {path} не является JSON: {e}") from e
    return parse_run_config(data)


def parse_assignments(items: Optional[Iterable[str]], what: str) -> Dict[str, float]:
    """["A=2.8", "alpha=1"] -> {"A": 2.8, "alpha": 1.0}"""
    result: Dict[str, float] = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"❌ {what}: ожидается k=v (получено {item!r})")
        try:
            result[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"❌ {what}: значение {key} не число ({value!r})") from None
    return result


def parse_grid(text: str) -> Tuple[float, float, int]:
    """'min,max,count' -> (min, max, count)"""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"❌ --grid ожидает min,max,count (получено {text!r})")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"❌ --grid: некорректные числа в {text!r}") from None


def merge_cli_overrides(config: Optional[RunConfig], args: Any) -> RunConfig:
    """
    Накладывает флаги CLI на конфигурацию (флаги важнее файла)

    Смена семейства флагом --family сбрасывает параметры, уровни и сетку
    к значениям по умолчанию нового семейства.
    """
    family = getattr(args, "family", None)
    if config is None:
        config = default_run_config(family or "morse")
    elif family and family != config.family:
        base = default_run_config(family)
        config = replace(
            base,
            order=config.order,
            method=config.method,
            out=config.out,
            suite=config.suite,
            tolerance_overrides=config.tolerance_overrides,
            node_scan=config.node_scan,
            allow_unbound=config.allow_unbound,
        )

    changes: Dict[str, Any] = {}
    params = parse_assignments(getattr(args, "param", None), "--param")
    if params:
        changes["params"] = {**config.params, **params}
    if getattr(args, "levels", None) is not None:
        changes["levels"] = args.levels
    if getattr(args, "order", None) is not None:
        changes["order"] = args.order
    if getattr(args, "method", None):
        changes["method"] = args.method
    if getattr(args, "grid", None):
        changes["grid"] = parse_grid(args.grid)
    if getattr(args, "no_node_scan", False):
        changes["node_scan"] = False
    if getattr(args, "out", None):
        changes["out"] = args.out
    tolerances = parse_assignments(getattr(args, "tol", None), "--tol")
    if tolerances:
        changes["tolerance_overrides"] = {**config.tolerance_overrides, **tolerances}
    if getattr(args, "suite", None):
        changes["suite"] = args.suite
    if getattr(args, "allow_unbound", False):
        changes["allow_unbound"] = True

    return replace(config, **changes).validate()

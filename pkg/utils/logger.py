"""
utils/logger.py
Логирование движка

Консоль (colorlog) пишет в stderr: stdout занят JSON-отчётом `verify`.
Файл с ротацией подключается только по `--log-file`.
Ничто из логов не попадает в CSV/JSON, поэтому вывод детерминирован при любом уровне.
"""
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

LOGGER_NAME = "crum"

CONSOLE_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(module)s:%(lineno)d] - %(message)s"
LOG_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red,bg_white",
}

MAX_LOG_BYTES = 10 * 1024 * 1024
LOG_BACKUPS = 5


def _console_formatter() -> logging.Formatter:
    try:
        import colorlog
    except ImportError:
        return logging.Formatter(CONSOLE_FORMAT, datefmt="%H:%M:%S")
    return colorlog.ColoredFormatter(
        "%(log_color)s" + CONSOLE_FORMAT, datefmt="%H:%M:%S", log_colors=LOG_COLORS
    )


def setup_logger(
    name: str = LOGGER_NAME,
    console_level: int = logging.WARNING,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Logger с консольным handler'ом (stderr) и, если задан путь, файлом

    Повторный вызов с тем же именем handler'ы не дублирует.
    """
    log = logging.getLogger(name)
    log.setLevel(logging.DEBUG)
    log.propagate = False

    if not log.handlers:
        console = logging.StreamHandler(sys.stderr)
        console.setLevel(console_level)
        console.setFormatter(_console_formatter())
        log.addHandler(console)

    if log_file:
        attach_file_handler(log, log_file)

    return log


def attach_file_handler(
    log: logging.Logger, log_file: str, file_level: int = logging.DEBUG
) -> Optional[RotatingFileHandler]:
    """
    Подключает файл логов с ротацией (10 MB x 5)

    Returns:
        Handler или None, если файл открыть не удалось (запуск продолжается)
    """
    path = Path(log_file)
    for existing in log.handlers:
        if isinstance(existing, RotatingFileHandler) and existing.baseFilename == os.path.abspath(path):
            return existing

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(
            path, maxBytes=MAX_LOG_BYTES, backupCount=LOG_BACKUPS, encoding="utf-8"
        )
    except OSError as e:
        log.warning(f"⚠️ Файл логов {log_file} недоступен: {e}")
        return None

    handler.setLevel(file_level)
    handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    log.addHandler(handler)
    return handler


def set_log_level(level: int) -> None:
    """Уровень консоли (-v / -vv); файл логов всегда пишет DEBUG"""
    log = logging.getLogger(LOGGER_NAME)
    for handler in log.handlers:
        if not isinstance(handler, RotatingFileHandler):
            handler.setLevel(level)
    log.debug(f"🔧 Уровень консоли: {logging.getLevelName(level)}")


# ===== ГЛОБАЛЬНЫЙ LOGGER =====

logger = setup_logger()

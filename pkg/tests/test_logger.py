"""
Тесты для utils/logger.py
"""
import logging
from logging.handlers import RotatingFileHandler

import pytest

from main import run
from utils.logger import LOGGER_NAME, attach_file_handler, logger, set_log_level, setup_logger

pytestmark = pytest.mark.unit


@pytest.fixture
def detach_files():
    """Снимает файловые handler'ы глобального logger'а после теста"""
    yield
    for handler in list(logger.handlers):
        if isinstance(handler, RotatingFileHandler):
            logger.removeHandler(handler)
            handler.close()
    set_log_level(logging.WARNING)


class TestLogger:
    """Консоль, файл и уровни"""

    def test_global_logger(self):
        assert logger.name == LOGGER_NAME
        assert logger.propagate is False

    def test_setup_is_idempotent(self):
        count = len(logger.handlers)
        assert setup_logger() is logger
        assert len(logger.handlers) == count

    def test_file_handler(self, tmp_path, detach_files):
        path = tmp_path / "logs" / "run.log"
        handler = attach_file_handler(logger, str(path))
        assert handler is not None
        assert attach_file_handler(logger, str(path)) is handler
        logger.debug("🔍 проверка")
        handler.flush()
        assert "проверка" in path.read_text(encoding="utf-8")

    def test_set_level_keeps_file_at_debug(self, tmp_path, detach_files):
        handler = attach_file_handler(logger, str(tmp_path / "run.log"))
        set_log_level(logging.ERROR)
        assert handler.level == logging.DEBUG
        console = [h for h in logger.handlers if not isinstance(h, RotatingFileHandler)]
        assert all(h.level == logging.ERROR for h in console)

    def test_cli_log_file(self, tmp_path, capsys, detach_files):
        """--log-file пишет лог, stdout остаётся чистым JSON"""
        path = tmp_path / "verify.log"
        code = run(["verify", "--suite", "residuals", "--grid=-3,3,13", "--log-file", str(path), "-vv"])
        assert code == 0
        assert capsys.readouterr().out.lstrip().startswith("{")
        for handler in logger.handlers:
            handler.flush()
        assert path.read_text(encoding="utf-8")

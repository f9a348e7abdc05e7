"""
Глобальный обработчик ошибок CLI: исключение -> код выхода
"""
from utils.errors import EXIT_CONFIG, EXIT_SINGULAR, EngineError
from utils.logger import logger


def error_handler(error: BaseException) -> int:
    """
    Логирует ошибку и возвращает код выхода

    Args:
        error: Пойманное исключение

    Returns:
        exit_code ошибки движка; 3 для численных сбоев вне движка
        (ArithmeticError, ValueError из numpy/scipy); 2 иначе
    """
    if isinstance(error, EngineError):
        logger.error(f"❌ {type(error).__name__}: {error}")
        logger.debug("Трассировка:", exc_info=error)
        return error.exit_code
    # конфигурация целиком разбирается в config/ и приходит как ConfigError
    if isinstance(error, (ArithmeticError, ValueError)):
        logger.error(f"❌ Численный сбой: {error}", exc_info=error)
        return EXIT_SINGULAR
    logger.error(f"❌ Непредвиденная ошибка: {error}", exc_info=error)
    return EXIT_CONFIG

"""
main.py - точка входа CLI

КОМАНДЫ:
✅ transform  - преобразованные потенциалы и состояния в CSV + JSON-сайдкар
✅ verify     - наборы проверок, JSON-отчёт в stdout

Коды выхода: 0 пройдено, 1 есть провалы, 2 конфигурация, 3 особенность, 4 нет потока.
"""
import argparse
import logging
import sys
from typing import List, Optional

from config.constants import FAMILIES, METHODS, SUITES
from config.settings import load_run_config, merge_cli_overrides
from handlers.errors import error_handler
from handlers.transform import cmd_transform
from handlers.verify import cmd_verify
from services.report_writer import report_writer
from utils.errors import EXIT_OK
from utils.logger import attach_file_handler, logger, set_log_level


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON-файл конфигурации (флаги важнее файла)")
    parser.add_argument("--family", choices=FAMILIES)
    parser.add_argument("--param", action="append", metavar="K=V", help="параметр семейства")
    parser.add_argument("--levels", type=int, help="число собственных уровней")
    parser.add_argument("--order", type=int, help="порядок преобразования n")
    parser.add_argument("--grid", metavar="MIN,MAX,COUNT")
    parser.add_argument("--no-node-scan", action="store_true", help="не вырезать узлы знаменателей")
    parser.add_argument("--out", help="базовый путь выходных файлов")
    parser.add_argument("--tol", action="append", metavar="K=V", help="переопределение допуска")
    parser.add_argument("--allow-unbound", action="store_true", help="разрешить A_s <= 0 в H^SI")
    parser.add_argument("--log-file", help="файл логов (DEBUG, с ротацией)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crum",
        description="Преобразования Крама и Дарбу на струях Тейлора",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    transform = sub.add_parser("transform", help="посчитать преобразование на сетке")
    _add_run_options(transform)
    transform.add_argument("--method", choices=METHODS)

    verify = sub.add_parser("verify", help="запустить наборы проверок")
    _add_run_options(verify)
    verify.add_argument("--method", choices=METHODS)
    verify.add_argument("--suite", choices=SUITES)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    levels = {0: logging.WARNING, 1: logging.INFO}
    set_log_level(levels.get(args.verbose, logging.DEBUG))
    if args.log_file:
        attach_file_handler(logger, args.log_file)


def run(argv: Optional[List[str]] = None) -> int:
    """Разбирает аргументы, выполняет команду и возвращает код выхода"""
    args = build_parser().parse_args(argv)
    _configure_logging(args)

    try:
        config = load_run_config(args.config) if args.config else None
        config = merge_cli_overrides(config, args)
        logger.info(f"🚀 {args.command}: {config.family} n={config.order} method={config.method}")

        if args.command == "transform":
            paths = cmd_transform(config)
            logger.info(f"✅ Записаны {paths['csv']} и {paths['json']}")
            return EXIT_OK

        report, code = cmd_verify(config)
        sys.stdout.write(report_writer.dumps_json(report.as_dict()))
        sys.stdout.flush()
        return code
    except Exception as e:
        return error_handler(e)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

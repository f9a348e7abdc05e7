"""
services/report_writer.py - ЗАПИСЬ CSV И JSON

НАЗНАЧЕНИЕ:
✅ CSV полей: 17 значащих цифр, фиксированный порядок строк и столбцов
✅ JSON отчётов и сайдкаров: sort_keys, без временных меток
✅ NaN/inf в JSON превращаются в null (строгий JSON)

Одинаковый вход даёт побайтно одинаковый выход.
"""
import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from config.constants import CSV_FLOAT_FORMAT, JSON_INDENT
from utils.logger import logger


class ReportWriter:
    """Детерминированная сериализация результатов"""

    @staticmethod
    def format_float(value: float) -> str:
        return format(float(value), CSV_FLOAT_FORMAT)

    @staticmethod
    def to_plain(data: Any) -> Any:
        """numpy-типы -> Python, нечисловые float -> None"""
        if isinstance(data, dict):
            return {str(k): ReportWriter.to_plain(v) for k, v in data.items()}
        if isinstance(data, (list, tuple)):
            return [ReportWriter.to_plain(v) for v in data]
        if isinstance(data, np.ndarray):
            return [ReportWriter.to_plain(v) for v in data.tolist()]
        if isinstance(data, (bool, np.bool_)):
            return bool(data)
        if isinstance(data, (int, np.integer)):
            return int(data)
        if isinstance(data, (float, np.floating)):
            value = float(data)
            return value if math.isfinite(value) else None
        return data

    @staticmethod
    def dumps_json(data: Any) -> str:
        return (
            json.dumps(
                ReportWriter.to_plain(data),
                ensure_ascii=False,
                indent=JSON_INDENT,
                sort_keys=True,
                allow_nan=False,
            )
            + "\n"
        )

    @staticmethod
    def write_json(path: Path, data: Any) -> Path:
        """
        Сохраняет JSON

        Args:
            path: Путь к файлу
            data: dict или list

        Returns:
            Путь к записанному файлу
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(ReportWriter.dumps_json(data), encoding="utf-8")
        logger.debug(f"💾 JSON сохранён: {path}")
        return path

    @staticmethod
    def dumps_csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([ReportWriter.format_float(v) for v in row])
        return buffer.getvalue()

    @staticmethod
    def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(ReportWriter.dumps_csv(header, rows), encoding="utf-8")
        logger.debug(f"💾 CSV сохранён: {path}")
        return path


report_writer = ReportWriter()

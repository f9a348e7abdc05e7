#!/usr/bin/env python3
"""
Проверка воспроизводимости: два одинаковых запуска дают побайтно равный вывод

Запускает `verify --suite all` и `transform` дважды с одной конфигурацией,
сравнивает stdout и записанные файлы по sha256.

    python scripts/check_determinism.py [--family morse] [--order 2]
"""
import argparse
import hashlib
import subprocess
import sys
import tempfile
from pathlib import Path
from typing import Dict, List

ROOT_DIR = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT_DIR))

from utils.logger import logger  # noqa: E402


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _run_once(args: List[str], out_base: Path) -> Dict[str, str]:
    """Один запуск CLI; возвращает sha256 stdout и всех файлов с базой out_base"""
    cmd = [sys.executable, str(ROOT_DIR / "main.py"), *args, "--out", str(out_base)]
    proc = subprocess.run(cmd, cwd=ROOT_DIR, capture_output=True)
    if proc.returncode not in (0, 1):
        logger.error(f"❌ {' '.join(args)}: код {proc.returncode}\n{proc.stderr.decode(errors='replace')}")
        raise SystemExit(proc.returncode)

    digests = {"stdout": _digest(proc.stdout)}
    for path in sorted(out_base.parent.glob(out_base.name + ".*")):
        digests[path.name] = _digest(path.read_bytes())
    return digests


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--family", default="morse")
    parser.add_argument("--order", type=int, default=2)
    args = parser.parse_args()

    common = ["--family", args.family, "--order", str(args.order)]
    commands = {
        "verify": ["verify", "--suite", "all", *common],
        "transform": ["transform", "--method", "both", *common],
    }

    mismatches = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, cmd in commands.items():
            out_base = Path(tmp) / name
            first = _run_once(cmd, out_base)
            second = _run_once(cmd, out_base)
            for key in sorted(set(first) | set(second)):
                if first.get(key) != second.get(key):
                    logger.error(f"❌ {name}: {key} различается между запусками")
                    mismatches += 1
            logger.warning(f"📊 {name}: сравнено {len(first)} артефактов")

    if mismatches:
        logger.error(f"❌ Недетерминированный вывод: {mismatches} расхождений")
        return 1
    logger.warning("✅ Вывод побайтно воспроизводим")
    return 0


if __name__ == "__main__":
    sys.exit(main())

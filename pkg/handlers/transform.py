"""
handlers/transform.py - Команда transform: преобразованные потенциалы и состояния

НАЗНАЧЕНИЕ:
✅ CSV: x, u0, u_k, psi_s... (одна строка на точку сетки, 17 значащих цифр)
✅ method=both: столбцы _crum и _darboux рядом
✅ method=si: u(x; a_n) + ΣR и ψ_{s-n}(x; a_n)
✅ JSON-сайдкар: параметры, спектр, метод, сетка

Особенность в любой точке прерывает запуск (код 3).
"""
from pathlib import Path
from typing import Dict, List, Tuple

from config.settings import RunConfig
from services.potentials import Evaluator, PotentialFamily, build_family
from services.report_writer import report_writer
from services.shape_invariance import si_hamiltonian_potential, si_parameters
from services.transforms import (
    crum_potential_evaluator,
    crum_state_evaluator,
    darboux_chain,
    denominators,
    transformed_spectrum,
)
from services.verify import Grid, build_grid
from utils.errors import LevelIndexError
from utils.logger import logger


def build_run_grid(config: RunConfig, fam: PotentialFamily, n: int) -> Grid:
    lo, hi, count = config.grid
    needed = denominators(fam, n) if config.node_scan and n >= 1 else ()
    return build_grid(fam, lo, hi, count, node_scan=config.node_scan, denominators=needed)


def _si_columns(config: RunConfig, fam: PotentialFamily, n: int) -> List[Tuple[str, Evaluator]]:
    params = si_parameters(fam, n, config.allow_unbound)[-1]

    def potential(x: float, K: int):
        return si_hamiltonian_potential(fam, n, x, K, config.allow_unbound)

    columns = [("u_k", potential)]
    remaining = fam.levels - n
    if remaining >= 1:
        shifted = fam.with_params(params, remaining)
        for e in fam.eigenpairs[n:]:
            columns.append((f"psi_{e.index}", shifted.eigenpair(e.index - n).wavefunction))
    return columns


def transform_columns(config: RunConfig, fam: PotentialFamily) -> List[Tuple[str, Evaluator]]:
    """Имена столбцов и вычислители в порядке вывода (без x и u0)"""
    n = config.order
    if n > fam.levels:
        raise LevelIndexError(f"Порядок {n} больше числа уровней {fam.levels}")
    if config.method == "si":
        return _si_columns(config, fam, n)

    states = [e.index for e in fam.eigenpairs[n:]]
    crum = [("u_k", crum_potential_evaluator(fam, n))] + [
        (f"psi_{s}", crum_state_evaluator(fam, n, s)) for s in states
    ]
    chain = darboux_chain(fam, n)
    darboux = [("u_k", chain.potential_k)] + [(f"psi_{s}", chain.state(s)) for s in states]

    if config.method == "crum":
        return crum
    if config.method == "darboux":
        return darboux
    columns = []
    for (name, c_eval), (_, d_eval) in zip(crum, darboux):
        columns.append((f"{name}_crum", c_eval))
        columns.append((f"{name}_darboux", d_eval))
    return columns


def output_base(config: RunConfig) -> Path:
    if config.out:
        return Path(config.out)
    return Path("out") / f"{config.family}_n{config.order}_{config.method}"


def output_path(base: Path, extension: str) -> Path:
    """BASE + расширение; точки внутри имени (beta0.8) не считаются суффиксом"""
    return base.parent / (base.name + extension)


def cmd_transform(config: RunConfig) -> Dict[str, Path]:
    """
    Считает преобразование на сетке и пишет CSV + JSON

    Returns:
        {"csv": путь, "json": путь}

    Raises:
        EngineError: ошибки конфигурации (2), особенности (3), нет потока (4)
    """
    fam = build_family(config.family, config.params, config.levels)
    n = config.order
    columns = transform_columns(config, fam)
    grid = build_run_grid(config, fam, n)

    header = ["x", "u0"] + [name for name, _ in columns]
    rows = []
    for x in grid:
        row = [x, fam.potential(x, 0).value]
        row.extend(evaluator(x, 0).value for _, evaluator in columns)
        rows.append(row)

    base = output_base(config)
    csv_path = report_writer.write_csv(output_path(base, ".csv"), header, rows)
    sidecar = {
        "family": config.family,
        "params": config.params,
        "levels": fam.levels,
        "order": n,
        "method": config.method,
        "columns": header,
        "eigenvalues": {fam.label(e.index): e.eigenvalue for e in fam.eigenpairs},
        "transformed_spectrum": {fam.label(s): lam for s, lam in transformed_spectrum(fam, n)},
        "grid": {
            "min": config.grid[0],
            "max": config.grid[1],
            "count": config.grid[2],
            "node_scan": config.node_scan,
            "points": len(grid),
            "exclusions": [list(interval) for interval in grid.exclusions],
        },
    }
    json_path = report_writer.write_json(output_path(base, ".json"), sidecar)
    logger.info(f"✅ transform: {len(rows)} точек -> {csv_path}")
    return {"csv": csv_path, "json": json_path}

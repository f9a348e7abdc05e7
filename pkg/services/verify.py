"""
services/verify.py - ОБЩИЕ ПРИМИТИВЫ ПРОВЕРОК

НАЗНАЧЕНИЕ:
✅ Grid - сетка с вырезанными окрестностями узлов/полюсов
✅ Невязка уравнения Шрёдингера с глобальной нормировкой по сетке
✅ Сравнение "с точностью до множителя" (одна константа на всю сетку)
✅ Поточечные относительные расхождения для потенциалов

Все свёртки идут в фиксированном порядке точек сетки.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config.constants import (
    CHECK_IDS,
    NODE_EXCLUSION_SPACINGS,
    NODE_SCAN_REFINEMENT,
    RESIDUAL_ORDER,
    TINY,
)
from utils.errors import DegenerateComparand, DomainError, EmptyGrid, SingularDivision
from utils.logger import logger

Interval = Tuple[float, float]
ScalarFunction = Callable[[float], float]


@dataclass(frozen=True)
class Grid:
    points: np.ndarray = field(compare=False)
    exclusions: Tuple[Interval, ...] = ()
    spacing: float = 0.0

    def __len__(self) -> int:
        return int(self.points.size)

    def __iter__(self):
        return iter(float(x) for x in self.points)


@dataclass(frozen=True)
class ProportionalityReport:
    constant: float
    deviation: float
    normalizer: float


@dataclass
class GapReport:
    """Результат поточечного сравнения на сетке"""

    identity: str
    max_gap: float
    gaps: np.ndarray = field(repr=False)
    offending_points: List[float] = field(default_factory=list)
    constant: Optional[float] = None

    def passed(self, tolerance: float) -> bool:
        return not self.offending_points and self.max_gap <= tolerance


# ======================================================================
# Выборки
# ======================================================================


def sample(fn: ScalarFunction, points: Sequence[float]) -> Tuple[np.ndarray, List[float]]:
    """
    Значения fn в точках; сингулярные точки дают NaN и попадают в список

    Returns:
        (значения, точки с особенностями)
    """
    values = np.empty(len(points))
    offending = []
    for i, x in enumerate(points):
        try:
            values[i] = fn(float(x))
        except (SingularDivision, DomainError) as e:
            logger.debug(f"⚠️ Особенность в x={x:.6g}: {e}")
            values[i] = np.nan
            offending.append(float(x))
    return values, offending


def _finite_max(values: np.ndarray) -> float:
    finite = np.abs(values[np.isfinite(values)])
    return float(finite.max()) if finite.size else 0.0


def relative_gaps(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """|a - b| / max(max|a|, max|b|, TINY); NaN там, где одна из сторон не вычислилась"""
    scale = max(_finite_max(a), _finite_max(b), TINY)
    return np.abs(np.asarray(a) - np.asarray(b)) / scale


def max_gap(gaps: np.ndarray) -> float:
    finite = gaps[np.isfinite(gaps)]
    return float(finite.max()) if finite.size else 0.0


def compare_functions(
    identity: str, lhs: ScalarFunction, rhs: ScalarFunction, grid: Grid
) -> GapReport:
    """Аддитивное сравнение двух функций на сетке (без подгоночной константы)"""
    a, bad_a = sample(lhs, grid.points)
    b, bad_b = sample(rhs, grid.points)
    gaps = relative_gaps(a, b)
    offending = sorted(set(bad_a) | set(bad_b))
    return GapReport(identity, max_gap(gaps), gaps, offending)


def compare_proportional(
    identity: str, lhs: ScalarFunction, rhs: ScalarFunction, grid: Grid
) -> GapReport:
    """Сравнение с точностью до одной константы c, подогнанной по всей сетке"""
    f, bad_f = sample(lhs, grid.points)
    g, bad_g = sample(rhs, grid.points)
    mask = np.isfinite(f) & np.isfinite(g)
    report = proportionality(f[mask], g[mask])
    gaps = np.full(f.shape, np.nan)
    gaps[mask] = np.abs(f[mask] - report.constant * g[mask]) / report.normalizer
    offending = sorted(set(bad_f) | set(bad_g))
    return GapReport(identity, report.deviation, gaps, offending, constant=report.constant)


# ======================================================================
# Операции
# ======================================================================


def proportionality(f_samples, g_samples) -> ProportionalityReport:
    """
    c = Σf·g / Σg², отклонение = max|f - c·g| / max|f|

    Raises:
        DegenerateComparand: g тождественно ~0 или пустые выборки
    """
    f = np.asarray(f_samples, dtype=float)
    g = np.asarray(g_samples, dtype=float)
    if f.shape != g.shape:
        raise ValueError(f"Выборки разной длины: {f.shape} / {g.shape}")
    if f.size == 0 or float(np.max(np.abs(g))) < TINY:
        raise DegenerateComparand("Эталонная выборка пуста или тождественно равна нулю")

    constant = math.fsum(f * g) / math.fsum(g * g)
    normalizer = max(float(np.max(np.abs(f))), TINY)
    deviation = float(np.max(np.abs(f - constant * g))) / normalizer
    return ProportionalityReport(constant, deviation, normalizer)


def schrodinger_residual(u, psi, lam: float, grid: Grid) -> GapReport:
    """
    max |-ψ'' + uψ - λψ| / max(max|λψ|, max|uψ|, TINY)

    Нормировка глобальная по сетке: поточечная взрывается в узлах ψ.
    """
    n = len(grid)
    residual = np.full(n, np.nan)
    u_psi = np.full(n, np.nan)
    lam_psi = np.full(n, np.nan)
    offending = []
    for i, x in enumerate(grid):
        try:
            jet = psi(x, RESIDUAL_ORDER)
            value = jet.value
            second = jet.derivative_at(2)
            u_value = u(x, 0).value
        except (SingularDivision, DomainError) as e:
            logger.debug(f"⚠️ Невязка: особенность в x={x:.6g}: {e}")
            offending.append(x)
            continue
        u_psi[i] = u_value * value
        lam_psi[i] = lam * value
        residual[i] = -second + u_psi[i] - lam_psi[i]

    scale = max(_finite_max(lam_psi), _finite_max(u_psi), TINY)
    gaps = np.abs(residual) / scale
    return GapReport(CHECK_IDS["residual"], max_gap(gaps), gaps, offending)


def _merge(intervals: List[Interval]) -> Tuple[Interval, ...]:
    merged: List[Interval] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


def _scan_sign_changes(fn: ScalarFunction, fine: np.ndarray) -> List[float]:
    """Точки, где fn меняет знак или не вычисляется"""
    values, offending = sample(fn, fine)
    nodes = list(offending)
    for i in range(len(fine) - 1):
        a, b = values[i], values[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0:
            nodes.append(float(fine[i]))
        elif a * b < 0.0:
            nodes.append(float(0.5 * (fine[i] + fine[i + 1])))
    if len(values) and values[-1] == 0.0:
        nodes.append(float(fine[-1]))
    return nodes


def build_grid(
    family,
    lo: float,
    hi: float,
    count: int,
    node_scan: bool = True,
    denominators: Sequence[ScalarFunction] = (),
) -> Grid:
    """
    Равномерная сетка с вырезанными особенностями

    Args:
        family: Семейство (его exclusion_bands вырезаются всегда)
        lo, hi, count: Диапазон и число точек
        node_scan: Сканировать знаменатели на смену знака
        denominators: Скалярные функции x -> знаменатель (W_n, ψ^D[k-1]_k)

    Raises:
        EmptyGrid: count < 2, пустой диапазон или вырезано всё
    """
    if count < 2 or not hi > lo:
        raise EmptyGrid(f"Сетка требует count >= 2 и min < max (получено {lo}, {hi}, {count})")

    points = np.linspace(lo, hi, count)
    spacing = (hi - lo) / (count - 1)
    exclusions: List[Interval] = list(getattr(family, "exclusion_bands", ()))

    if node_scan and denominators:
        fine = np.linspace(lo, hi, (count - 1) * NODE_SCAN_REFINEMENT + 1)
        half_width = NODE_EXCLUSION_SPACINGS * spacing
        for fn in denominators:
            for node in _scan_sign_changes(fn, fine):
                exclusions.append((node - half_width, node + half_width))

    merged = _merge(exclusions)
    keep = np.ones(count, dtype=bool)
    for a, b in merged:
        keep &= ~((points > a) & (points < b))
    kept = points[keep]
    if kept.size == 0:
        raise EmptyGrid(f"Все {count} точек [{lo}, {hi}] попали в исключённые интервалы")
    if merged:
        logger.debug(f"🔍 Сетка: вырезано {count - kept.size} точек, интервалы {merged}")
    return Grid(points=kept, exclusions=merged, spacing=spacing)

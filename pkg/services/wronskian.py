"""
services/wronskian.py - ВРОНСКИАНЫ НАД КОЛЬЦОМ СТРУЙ

НАЗНАЧЕНИЕ:
✅ W(ψ_1..ψ_k) как определитель матрицы струй: сразу W, W', W'', ...
✅ Разложение по строке для k <= 4, LU над струями для k > 4
✅ Проверки: производная вронскиана (последняя строка "поднята"),
   вронскиан двух вронскианов, теорема Якоби о минорах присоединённой матрицы

ПРАВИЛО ПОРЯДКА:
Вронскиан k функций с out_order = m требует затравочные струи порядка (k-1) + m.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, List, Optional, Sequence

import numpy as np

from config.constants import (
    CHECK_IDS,
    JACOBI_COUNT,
    JACOBI_ENTRY_RANGE,
    JACOBI_RANK,
    JACOBI_SEED,
    JACOBI_SIZES,
    TINY,
)
from services.jets import Jet
from utils.errors import JetMismatch, SingularDivision
from utils.logger import logger

Evaluator = Callable[[float, int], Jet]
FunctionList = Sequence[Evaluator]

EXPANSION_MAX_SIZE = 4


@dataclass
class CheckReport:
    """Две стороны тождества и их относительный разрыв"""

    identity: str
    lhs: Any
    rhs: Any
    gap: float
    exact: bool = False
    details: dict = field(default_factory=dict)

    def passed(self, tolerance: float) -> bool:
        if self.exact:
            return self.lhs == self.rhs
        return self.gap <= tolerance


def relative_gap(lhs: float, rhs: float) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|, TINY)"""
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), TINY)


# ======================================================================
# Определители
# ======================================================================


def laplace_det(matrix: Sequence[Sequence[Any]]):
    """
    Определитель разложением по первой строке, без деления

    Работает для любых элементов с +, -, * (int, Fraction, float, Jet).
    """
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in (list(r) for r in matrix[1:])]
        term = matrix[0][j] * laplace_det(minor)
        if total is None:
            total = term
        elif j % 2:
            total = total - term
        else:
            total = total + term
    return total


def lu_det(matrix: Sequence[Sequence[Jet]]) -> Jet:
    """
    Определитель LU-разложением над струями, ведущий элемент по |c_0|

    Raises:
        SingularDivision: ведущий элемент вырожден на уровне шума
    """
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1.0
    det = None
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(a[r][col].value))
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / pivot
            for c in range(col + 1, n):
                a[r][c] = a[r][c] - factor * a[col][c]
        det = pivot if det is None else det * pivot
    return det * sign


def determinant(matrix: Sequence[Sequence[Any]]):
    """Точный определитель для целых/Fraction, иначе разложение или numpy"""
    n = len(matrix)
    if n == 0:
        return 1
    exact = all(isinstance(v, (int, Fraction)) for row in matrix for v in row)
    if exact or n <= EXPANSION_MAX_SIZE + 1:
        return laplace_det(matrix)
    return float(np.linalg.det(np.array(matrix, dtype=float)))


# ======================================================================
# Вронскиан
# ======================================================================


def _seed_jets(fs: FunctionList, x: float, order: int) -> List[Jet]:
    jets = []
    for f in fs:
        jet = f(x, order)
        if jet.order < order:
            raise JetMismatch(
                f"Вычислитель вернул струю порядка {jet.order}, требуется {order}"
            )
        jets.append(jet.truncate(order))
    return jets


def wronskian_matrix(fs: FunctionList, x: float, out_order: int) -> List[List[Jet]]:
    """Матрица A_ij = d^i ψ_j (струи порядка out_order)"""
    k = len(fs)
    if k == 0:
        raise JetMismatch("Вронскиан пустого набора функций не определён")
    jets = _seed_jets(fs, x, k - 1 + out_order)
    return [[jet.derivative_shift(i).truncate(out_order) for jet in jets] for i in range(k)]


def wronskian(fs: FunctionList, x: float, out_order: int, method: str = "auto") -> Jet:
    """
    Струя W(ψ_1, ..., ψ_k)(x) порядка out_order

    Args:
        fs: Вычислители (x, K) -> Jet
        x: Точка
        out_order: Порядок результата
        method: auto | expansion | lu

    Raises:
        SingularDivision: только на пути LU
    """
    matrix = wronskian_matrix(fs, x, out_order)
    if method == "expansion" or (method == "auto" and len(fs) <= EXPANSION_MAX_SIZE):
        return laplace_det(matrix)
    if method in ("lu", "auto"):
        return lu_det(matrix)
    raise ValueError(f"Неизвестный метод определителя: {method}")


def wronskian_evaluator(fs: FunctionList) -> Evaluator:
    """W(fs) как вычислитель (x, K) -> Jet"""
    fs = tuple(fs)

    def W(x: float, K: int) -> Jet:
        return wronskian(fs, x, K)

    return W


def bumped_determinant(fs: FunctionList, x: float) -> float:
    """Определитель с последней строкой из k-х производных вместо (k-1)-х"""
    k = len(fs)
    jets = _seed_jets(fs, x, k)
    rows = list(range(k - 1)) + [k]
    matrix = [[jet.derivative_at(i) for jet in jets] for i in rows]
    return float(determinant(matrix))


def wronskian_derivative_check(fs: FunctionList, x: float) -> CheckReport:
    """d/dx W(fs) против определителя с поднятой последней строкой"""
    lhs = wronskian(fs, x, 1).derivative_at(1)
    rhs = bumped_determinant(fs, x)
    return CheckReport(
        CHECK_IDS["wronskian_derivative"], lhs, rhs, relative_gap(lhs, rhs), details={"x": x}
    )


def two_wronskian_identity_check(
    fs: FunctionList, psi_s: Evaluator, x: float
) -> CheckReport:
    """
    W(W_n, W_{n-1,s}) = W_{n,s}·W_{n-1}

    Args:
        fs: ψ_1..ψ_n, n >= 2
        psi_s: Выделенная функция ψ_s
    """
    n = len(fs)
    if n < 2:
        raise JetMismatch(f"Тождество двух вронскианов требует n >= 2 (получено {n})")
    fs = tuple(fs)
    W_n = wronskian_evaluator(fs)
    W_n1s = wronskian_evaluator(fs[:-1] + (psi_s,))
    lhs = wronskian([W_n, W_n1s], x, 0).value
    rhs = wronskian(fs + (psi_s,), x, 0).value * wronskian(fs[:-1], x, 0).value
    return CheckReport(
        CHECK_IDS["two_wronskian"], lhs, rhs, relative_gap(lhs, rhs), details={"x": x, "n": n}
    )


# ======================================================================
# Теорема Якоби
# ======================================================================


def _submatrix(matrix, rows: Sequence[int], cols: Sequence[int]):
    return [[matrix[i][j] for j in cols] for i in rows]


def cofactor_matrix(matrix):
    """Δ_ij = (-1)^{i+j} · det(A без строки i и столбца j)"""
    n = len(matrix)
    result = []
    for i in range(n):
        row = []
        for j in range(n):
            rows = [r for r in range(n) if r != i]
            cols = [c for c in range(n) if c != j]
            minor = determinant(_submatrix(matrix, rows, cols))
            row.append(minor if (i + j) % 2 == 0 else -minor)
        result.append(row)
    return result


def jacobi_check(
    matrix: Sequence[Sequence[Any]], rows: Sequence[int], cols: Sequence[int]
) -> CheckReport:
    """
    Минор M'_r присоединённой матрицы против |A|^{r-1}·M^(r)

    M^(r) = (-1)^{Σi+Σk} · дополнительный минор A. Индексы нулевые.
    Для целых матриц сравнение точное.

    Raises:
        ValueError: индексы не возрастают, вне границ или r >= n
    """
    n = len(matrix)
    r = len(rows)
    if any(len(row) != n for row in matrix):
        raise ValueError("Матрица должна быть квадратной")
    for idx in (rows, cols):
        if len(idx) != r or list(idx) != sorted(set(idx)) or any(not 0 <= i < n for i in idx):
            raise ValueError(f"Некорректный выбор индексов: {rows} / {cols}")
    if not 1 <= r < n:
        raise ValueError(f"Ранг минора должен быть в 1..{n - 1} (получено {r})")

    cofactors = cofactor_matrix(matrix)
    lhs = determinant(_submatrix(cofactors, rows, cols))

    rest_rows = [i for i in range(n) if i not in rows]
    rest_cols = [j for j in range(n) if j not in cols]
    complement = determinant(_submatrix(matrix, rest_rows, rest_cols))
    sign = -1 if (sum(rows) + sum(cols)) % 2 else 1
    rhs = determinant(matrix) ** (r - 1) * sign * complement

    exact = isinstance(lhs, int) and isinstance(rhs, int)
    gap = 0.0 if lhs == rhs else relative_gap(float(lhs), float(rhs))
    return CheckReport(
        CHECK_IDS["jacobi"],
        lhs,
        rhs,
        gap,
        exact=exact,
        details={"rows": list(rows), "cols": list(cols)},
    )


def random_jacobi_suite(
    sizes: Sequence[int] = JACOBI_SIZES,
    count: int = JACOBI_COUNT,
    seed: int = JACOBI_SEED,
    rank: int = JACOBI_RANK,
    entry_range=JACOBI_ENTRY_RANGE,
) -> List[CheckReport]:
    """count случайных целых матриц каждого размера, фиксированный seed"""
    rng = np.random.default_rng(seed)
    lo, hi = entry_range
    reports = []
    for n in sizes:
        for _ in range(count):
            matrix = [[int(v) for v in row] for row in rng.integers(lo, hi + 1, size=(n, n))]
            rows = sorted(int(i) for i in rng.choice(n, size=rank, replace=False))
            cols = sorted(int(j) for j in rng.choice(n, size=rank, replace=False))
            reports.append(jacobi_check(matrix, rows, cols))
    failed = sum(1 for rep in reports if not rep.passed(0.0))
    if failed:
        logger.warning(f"⚠️ Якоби: {failed} из {len(reports)} матриц не прошли")
    else:
        logger.debug(f"✅ Якоби: {len(reports)} матриц, все равенства точные")
    return reports


def jacobi_wronskian_check(
    fs: FunctionList, x: float, rows: Optional[Sequence[int]] = None
) -> CheckReport:
    """Теорема Якоби на числовой матрице Вронского (по умолчанию две последние строки/столбца)"""
    n = len(fs)
    jets = _seed_jets(fs, x, n - 1)
    matrix = [[jet.derivative_at(i) for jet in jets] for i in range(n)]
    selection = list(rows) if rows is not None else [n - 2, n - 1]
    report = jacobi_check(matrix, selection, selection)
    report.identity = CHECK_IDS["jacobi_wronskian"]
    report.details["x"] = x
    return report

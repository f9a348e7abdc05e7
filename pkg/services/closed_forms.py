"""
services/closed_forms.py - НЕЗАВИСИМЫЕ ЯВНЫЕ ФОРМУЛЫ

Эталоны для проверок: ни вронскианов, ни цепочек Дарбу.

Морс:    u[n] = 2[A² - A_{n-1}A_n sech²(αx)] и преобразованные состояния.
Гинокио: h_n через y, суперпартнёры V^D[1], V^C[2], ψ^D[2]_3 по отношениям h.

Печатные варианты формул Гинокио сверяются с определениями в
printed_form_discrepancies; расхождения только сообщаются.
"""
import math
from typing import Dict, List

import numpy as np

from config.constants import GINOCCHIO_Y_BAND
from services.jets import Jet, jet_variable, power, sinh_cosh
from services.potentials import (
    GinocchioParams,
    MorseParams,
    SQRT2,
    gegenbauer,
    ginocchio_coordinate,
    ginocchio_eigenvalue,
    ginocchio_mu,
    ginocchio_potential,
    ginocchio_state,
    morse_eigenvalue,
)
from services.verify import Grid, proportionality, relative_gaps, sample
from utils.errors import Unsupported


# ======================================================================
# Морс
# ======================================================================


def morse_transformed_potential(p: MorseParams, n: int, x: float, K: int) -> Jet:
    """2[A² - A_{n-1}A_n sech²(αx)]; при n = 0 A_{-1} = A + α/√2"""
    strength = p.shifted(n - 1) * p.shifted(n)
    _, c = sinh_cosh(jet_variable(x, K) * p.alpha)
    return 2.0 * (p.A ** 2 - strength / (c * c))


def morse_transformed_state(p: MorseParams, n: int, s: int, x: float, K: int) -> Jet:
    """
    ψ^D[1]_2 = α cosh·ψ_1, ψ^D[1]_3 = 4√2 A_1 sinh cosh·ψ_1, ψ^D[2]_3 = λ_3 cosh²·ψ_1

    Raises:
        Unsupported: другие пары (n, s)
    """
    s_jet, c_jet = sinh_cosh(jet_variable(x, K) * p.alpha)
    ground = power(1.0 / c_jet, SQRT2 * p.A / p.alpha)
    if (n, s) == (1, 2):
        return p.alpha * c_jet * ground
    if (n, s) == (1, 3):
        return 4.0 * SQRT2 * p.shifted(1) * s_jet * c_jet * ground
    if (n, s) == (2, 3):
        return morse_eigenvalue(p, 3) * c_jet * c_jet * ground
    raise Unsupported(f"Явная форма ψ^D[{n}]_{s} для Морса не задана")


# ======================================================================
# Гинокио
# ======================================================================


def _f_of_y(p: GinocchioParams, y: Jet) -> Jet:
    return p.beta * y * power(1.0 - p.delta * (y * y), -0.5)


def ginocchio_h(p: GinocchioParams, n: int, y: Jet) -> Jet:
    """
    h_n = -μ_nβ²y + (1-β²)/2·y(1-y²) + (1-y²)/y · f·C_n'(f)/C_n(f)

    C_n^(a)' = 2a·C_{n-1}^(a+1); при n = 0 последнего слагаемого нет.
    """
    mu = ginocchio_mu(p, n)
    one_minus = 1.0 - y * y
    h = -mu * p.beta ** 2 * y + (p.delta / 2.0) * y * one_minus
    if n == 0:
        return h
    a = mu + 0.5
    f = _f_of_y(p, y)
    ratio = f * (2.0 * a) * gegenbauer(n - 1, a + 1.0, f) / gegenbauer(n, a, f)
    return h + one_minus / y * ratio


def ginocchio_transformed_potential(p: GinocchioParams, level: int, x: float, K: int) -> Jet:
    """
    V^D[1] = V - 2h_0', V^C[2] = V - 2(h_0 + h_1)' - 2(ln(h_1 - h_0))''

    Raises:
        ValueError: level вне {0, 1, 2}
    """
    V = ginocchio_potential(p)(x, K)
    if level == 0:
        return V
    if level == 1:
        y = ginocchio_coordinate(p, x, K + 1)
        return V - 2.0 * ginocchio_h(p, 0, y).derivative()
    if level == 2:
        y = ginocchio_coordinate(p, x, K + 2)
        h0 = ginocchio_h(p, 0, y)
        h1 = ginocchio_h(p, 1, y)
        spread = h1 - h0
        log_spread = spread.derivative() / spread.truncate(K + 1)
        return V - 2.0 * (h0 + h1).derivative().truncate(K) - 2.0 * log_spread.derivative()
    raise ValueError(f"Явный суперпартнёр Гинокио задан для уровней 0..2 (запрошено {level})")


def ginocchio_psi23(p: GinocchioParams, x: float, K: int) -> Jet:
    """Вторая итерация по отношениям h с явными h_0, h_1 и ψ_2"""
    y = ginocchio_coordinate(p, x, K)
    h0 = ginocchio_h(p, 0, y)
    h1 = ginocchio_h(p, 1, y)
    psi2 = ginocchio_state(p, 2)(x, K + 1)
    eps0, eps1, eps2 = (ginocchio_eigenvalue(p, n) for n in range(3))
    spread = h1 - h0
    numerator = (eps0 - eps1) * psi2.derivative() + (
        eps1 * h0 - eps0 * h1 + eps2 * spread
    ) * psi2.truncate(K)
    return numerator / spread


# ======================================================================
# Печатные варианты
# ======================================================================


def _printed_superpartner(p: GinocchioParams, x: float) -> float:
    y = ginocchio_coordinate(p, x, 0).value
    g = 1.0 - p.delta * y * y
    V = ginocchio_potential(p)(x, 0).value
    return V + 4.0 * p.delta * (1.0 - 3.0 * y * y) ** 2 * (1.0 - y * y) * g


def _printed_second_superpartner(p: GinocchioParams, x: float) -> float:
    y = ginocchio_coordinate(p, x, 0).value
    g = 1.0 - p.delta * y * y
    V = ginocchio_potential(p)(x, 0).value
    bracket = (-2.0 + p.delta * (5.0 * y * y - 3.0)) + 10.0 * y * y * p.delta
    return V - 2.0 * bracket * (1.0 - y * y) * g


def _printed_psi23(p: GinocchioParams, x: float) -> float:
    y = ginocchio_coordinate(p, x, 0).value
    mu = ginocchio_mu(p, 2)
    g = 1.0 - p.delta * y * y
    f2 = (p.beta * y) ** 2 / g
    eps0, eps1, eps2 = (ginocchio_eigenvalue(p, n) for n in range(3))
    envelope = (1.0 - y * y) ** (mu / 2.0) * (mu + 0.5) * (2.0 * mu + 3.0) * g ** (-(2.0 * mu + 1.0) / 4.0)
    return envelope * ((eps2 - eps0) * (f2 - 1.0 / (2.0 * mu + 3.0)) - (eps1 - eps0) * 2.0 * f2)


def printed_form_discrepancies(p: GinocchioParams, grid: Grid) -> List[Dict]:
    """
    Сверка печатных форм с определениями на сетке (|y| > полосы)

    Returns:
        [{"form", "kind", "max_gap"}]; kind = additive | proportional
    """
    points = [
        x for x in grid.points if abs(ginocchio_coordinate(p, float(x), 0).value) > GINOCCHIO_Y_BAND
    ]
    if not points:
        return []

    def y_at(x):
        return ginocchio_coordinate(p, x, 0)

    def additive(name, printed, actual):
        a, _ = sample(printed, points)
        b, _ = sample(actual, points)
        gaps = relative_gaps(a, b)
        finite = gaps[np.isfinite(gaps)]
        return {"form": name, "kind": "additive", "max_gap": float(finite.max()) if finite.size else math.nan}

    def proportional(name, printed, actual):
        a, _ = sample(printed, points)
        b, _ = sample(actual, points)
        mask = np.isfinite(a) & np.isfinite(b)
        report = proportionality(a[mask], b[mask])
        return {"form": name, "kind": "proportional", "max_gap": report.deviation}

    return [
        additive(
            "ground-log-derivative",
            lambda x: -2.0 * p.delta * y_at(x).value * (1.0 - y_at(x).value ** 2),
            lambda x: ginocchio_h(p, 0, y_at(x)).value,
        ),
        additive(
            "log-derivative-difference",
            lambda x: (1.0 - y_at(x).value ** 2) / y_at(x).value,
            lambda x: (ginocchio_h(p, 1, y_at(x)) - ginocchio_h(p, 0, y_at(x))).value,
        ),
        additive(
            "first-superpartner",
            lambda x: _printed_superpartner(p, x),
            lambda x: ginocchio_transformed_potential(p, 1, x, 0).value,
        ),
        additive(
            "second-superpartner",
            lambda x: _printed_second_superpartner(p, x),
            lambda x: ginocchio_transformed_potential(p, 2, x, 0).value,
        ),
        proportional(
            "second-iterate-state",
            lambda x: _printed_psi23(p, x),
            lambda x: ginocchio_psi23(p, x, 0).value,
        ),
    ]

"""
services/potentials.py - ТОЧНО РЕШАЕМЫЕ СЕМЕЙСТВА ПОТЕНЦИАЛОВ

НАЗНАЧЕНИЕ:
✅ Морс: потенциал, три собственные функции, спектр, поток параметров A -> A - α/√2
✅ Гинокио: неявная координата y(x), функции Гегенбауэра, спектр ε_n = -μ_n²β⁴
✅ Все функции отдаются как вычислители (x, K) -> Jet
✅ Нормировочные константы везде равны 1

Соглашение: -ψ'' + uψ = λψ. Морс нумерует состояния с 1, Гинокио - с 0;
семейство хранит свой base_index, отчёты печатают собственные метки.
"""
import math
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from cachetools import LRUCache, cached
from cachetools.keys import hashkey
from scipy.optimize import brentq

from config.constants import (
    GEGENBAUER_MAX_DEGREE,
    GINOCCHIO_MAX_LEVELS,
    GINOCCHIO_Y_BAND,
    MORSE_MAX_LEVELS,
)
from services.jets import Jet, PolyODE, jet_ode_propagate, jet_variable, power, sinh_cosh
from services.jets import exp as jet_exp
from utils.errors import ConfigError, DomainError, LevelIndexError, Unsupported, UnboundLevel
from utils.logger import logger

Evaluator = Callable[[float, int], Jet]

SQRT2 = math.sqrt(2.0)


def memoized(evaluator: Evaluator, maxsize: int = 4096) -> Evaluator:
    """Оборачивает вычислитель в LRU-кэш по ключу (x, K); струи неизменяемы"""
    cache = LRUCache(maxsize=maxsize)

    @cached(cache, lock=threading.RLock())
    def wrapper(x: float, K: int) -> Jet:
        return evaluator(x, K)

    return wrapper


# ======================================================================
# Типы
# ======================================================================


@dataclass(frozen=True)
class MorseParams:
    """Параметры Морса: A > 0, alpha > 0"""

    A: float
    alpha: float

    def shifted(self, n: int) -> float:
        """A_n = A - nα/√2"""
        return self.A - n * self.alpha / SQRT2

    def as_dict(self) -> Dict[str, float]:
        return {"A": self.A, "alpha": self.alpha}


@dataclass(frozen=True)
class GinocchioParams:
    """Параметры Гинокио: beta в (0, 1], upsilon > 0"""

    beta: float
    upsilon: float

    @property
    def delta(self) -> float:
        return 1.0 - self.beta ** 2

    def as_dict(self) -> Dict[str, float]:
        return {"beta": self.beta, "upsilon": self.upsilon}


@dataclass(frozen=True)
class EigenPair:
    index: int
    eigenvalue: float
    wavefunction: Evaluator = field(compare=False, repr=False)


@dataclass(frozen=True)
class ParameterFlow:
    """
    Поток инвариантности формы

    map_f: a -> f(a); remainder_R(a_prev, a_next) - константа сдвига;
    admissible(a) - остаются ли при параметрах a связанные состояния.
    """

    map_f: Callable[[Any], Any]
    remainder_R: Callable[[Any, Any], float]
    admissible: Callable[[Any], bool]

    def iterate(self, params: Any, m: int) -> list:
        """[a_0, a_1, ..., a_m], a_k = f^k(a)"""
        chain = [params]
        for _ in range(m):
            chain.append(self.map_f(chain[-1]))
        return chain


@dataclass(frozen=True)
class PotentialFamily:
    name: str
    params: Any
    potential: Evaluator = field(repr=False)
    eigenpairs: Tuple[EigenPair, ...]
    flow: Optional[ParameterFlow] = field(default=None, repr=False)
    base_index: int = 1
    spectrum: Optional[Callable[[Any, int], float]] = field(default=None, repr=False)
    potential_factory: Optional[Callable[[Any], Evaluator]] = field(default=None, repr=False)
    exclusion_bands: Tuple[Tuple[float, float], ...] = ()

    @property
    def levels(self) -> int:
        return len(self.eigenpairs)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(e.index for e in self.eigenpairs)

    def position(self, index: int) -> int:
        """Позиция состояния с меткой index в упорядоченном списке"""
        pos = index - self.base_index
        if pos < 0 or pos >= self.levels:
            raise LevelIndexError(
                f"Состояние {self.label(index)} вне семейства {self.name} "
                f"(доступны {self.indices})"
            )
        return pos

    def eigenpair(self, index: int) -> EigenPair:
        return self.eigenpairs[self.position(index)]

    def label(self, index: int) -> str:
        return f"psi_{index}"

    def with_params(self, params: Any, levels: int) -> "PotentialFamily":
        """То же семейство при других параметрах (для проверок потока)"""
        return build_family(self.name, params, levels)

    def potential_at(self, params: Any) -> Evaluator:
        """Потенциал при произвольных параметрах, без требований к спектру"""
        if self.potential_factory is None:
            return self.with_params(params, 1).potential
        return self.potential_factory(params)


# ======================================================================
# Морс
# ======================================================================


def morse_eigenvalue(p: MorseParams, n: int) -> float:
    """λ_n = 2(A² - A_{n-1}²), n = 1, 2, 3, ..."""
    return 2.0 * (p.A ** 2 - p.shifted(n - 1) ** 2)


def morse_potential(p: MorseParams) -> Evaluator:
    """u(x; A) = 2[A² - A(A + α/√2) sech²(αx)]"""
    strength = p.A * (p.A + p.alpha / SQRT2)

    def u(x: float, K: int) -> Jet:
        _, c = sinh_cosh(jet_variable(x, K) * p.alpha)
        return 2.0 * (p.A ** 2 - strength / (c * c))

    return u


def _morse_states(p: MorseParams):
    exponent = SQRT2 * p.A / p.alpha
    mix = (2.0 * SQRT2 * p.A - p.alpha) / p.alpha

    def psi1(x: float, K: int) -> Jet:
        _, c = sinh_cosh(jet_variable(x, K) * p.alpha)
        return power(1.0 / c, exponent)

    def psi2(x: float, K: int) -> Jet:
        s, c = sinh_cosh(jet_variable(x, K) * p.alpha)
        return s * power(1.0 / c, exponent)

    def psi3(x: float, K: int) -> Jet:
        s, c = sinh_cosh(jet_variable(x, K) * p.alpha)
        return (mix * (s * s) - c * c) * power(1.0 / c, exponent)

    return (psi1, psi2, psi3)


def morse_flow(p: MorseParams) -> ParameterFlow:
    """f(A) = A - α/√2 (α фиксировано), R(A_prev, A_next) = 2(A_prev² - A_next²)"""
    return ParameterFlow(
        map_f=lambda q: MorseParams(q.A - q.alpha / SQRT2, q.alpha),
        remainder_R=lambda prev, nxt: 2.0 * (prev.A ** 2 - nxt.A ** 2),
        admissible=lambda q: q.A > 0.0,
    )


def morse_family(p: MorseParams, levels: int = MORSE_MAX_LEVELS) -> PotentialFamily:
    """
    Семейство Морса с levels <= 3 собственными функциями

    Raises:
        Unsupported: levels вне 1..3
        UnboundLevel: A_{levels-1} <= 0
    """
    if p.alpha <= 0.0:
        raise ConfigError(f"alpha должен быть > 0 (получено {p.alpha})")
    if not 1 <= levels <= MORSE_MAX_LEVELS:
        raise Unsupported(f"Морс: доступно от 1 до {MORSE_MAX_LEVELS} уровней (запрошено {levels})")
    if p.shifted(levels - 1) <= 0.0:
        raise UnboundLevel(
            f"Морс: A_{levels - 1} = {p.shifted(levels - 1):.6g} <= 0, уровень {levels} не связан"
        )

    states = _morse_states(p)
    eigenpairs = tuple(
        EigenPair(n, morse_eigenvalue(p, n), memoized(states[n - 1]))
        for n in range(1, levels + 1)
    )
    logger.debug(f"🔍 Морс A={p.A:.6g}, α={p.alpha:.6g}: {levels} уровня")
    return PotentialFamily(
        name="morse",
        params=p,
        potential=memoized(morse_potential(p)),
        eigenpairs=eigenpairs,
        flow=morse_flow(p),
        base_index=1,
        spectrum=morse_eigenvalue,
        potential_factory=morse_potential,
    )


# ======================================================================
# Гинокио
# ======================================================================


def ginocchio_mu(p: GinocchioParams, n: int) -> float:
    """μ_n = [√(β²(υ+1/2)² + (1-β²)(n+1/2)²) - (n+1/2)] / β²"""
    half = n + 0.5
    root = math.sqrt(p.beta ** 2 * (p.upsilon + 0.5) ** 2 + p.delta * half ** 2)
    return (root - half) / p.beta ** 2


def ginocchio_eigenvalue(p: GinocchioParams, n: int) -> float:
    """ε_n = -μ_n²β⁴"""
    return -(ginocchio_mu(p, n) ** 2) * p.beta ** 4


def ginocchio_ode(p: GinocchioParams, y0: float = 0.0) -> PolyODE:
    """dy/dx = (1 - y²)[1 - (1-β²)y²] = 1 - (2-β²)y² + (1-β²)y⁴"""
    d = p.delta
    return PolyODE(coefficients=(1.0, 0.0, -(1.0 + d), 0.0, d), y0=y0)


def x_of_y(p: GinocchioParams, y: float) -> float:
    """
    Первообразная x(y) = ∫dy/P(y) с x(0) = 0

    1/((1-y²)(1-δy²)) = [1/(1-y²) - δ/(1-δy²)]/β², откуда
    x(y) = [artanh(y) - √δ·artanh(√δ·y)]/β².
    """
    root = math.sqrt(p.delta)
    return (math.atanh(y) - root * math.atanh(root * y)) / p.beta ** 2


_coordinate_cache = LRUCache(maxsize=65536)


@cached(_coordinate_cache, key=lambda p, x: hashkey(p.beta, x), lock=threading.RLock())
def _t_value(p: GinocchioParams, x: float) -> float:
    """
    t = artanh y(x): корень x(t) = x

    В переменной t хвосты не вырождаются: y = tanh t округляется до ±1 уже при |t| ~ 19,
    а 1 - y² = sech²t остаётся представимым.

    Raises:
        DomainError: brentq не нашёл корень
    """
    if x == 0.0:
        return 0.0
    root = math.sqrt(p.delta)
    b2 = p.beta ** 2

    def residual(t: float) -> float:
        return (t - root * math.atanh(root * math.tanh(t))) / b2 - x

    # dx/dt = 1/(1 - δ tanh²t) лежит в [1, 1/β²], поэтому t между β²x и x
    lo, hi = sorted((b2 * x, x))
    pad = 1e-9 * max(1.0, abs(x))
    try:
        return brentq(residual, lo - pad, hi + pad, xtol=1e-15, maxiter=200)
    except (ValueError, RuntimeError) as e:
        raise DomainError(f"Гинокио: не удалось обратить x(y) в x0={x!r}: {e}") from e


def _y_value(p: GinocchioParams, x: float) -> float:
    return math.tanh(_t_value(p, x))


def _log_sech2(t: float) -> float:
    """ln(1 - tanh²t) = -2 ln cosh t без переполнения"""
    a = abs(t)
    return -2.0 * (a + math.log1p(math.exp(-2.0 * a)) - math.log(2.0))


def ginocchio_coordinate(p: GinocchioParams, x: float, K: int) -> Jet:
    """Струя y(x): значение обращением x(y), старшие коэффициенты из ОДУ"""
    return jet_ode_propagate(ginocchio_ode(p, _y_value(p, x)), x, K)


def ginocchio_log_envelope(p: GinocchioParams, x: float, K: int) -> Jet:
    """
    Струя L = ln(1 - y²) без вычитания 1 - y²

    L' = -2y(1 - δy²), L_0 = ln sech²t. В дальнем хвосте, где y = ±1 в плавающей точке,
    остаётся L_0 ∓ 2β²(x - x0).
    """
    coeffs = np.zeros(K + 1)
    coeffs[0] = _log_sech2(_t_value(p, x))
    if K > 0:
        y = ginocchio_coordinate(p, x, K - 1)
        slope = -2.0 * y * (1.0 - p.delta * (y * y))
        coeffs[1:] = slope.coeffs / np.arange(1, K + 1)
    return Jet(x, coeffs)


def gegenbauer(n: int, a: float, z):
    """
    C_n^(a)(z) для n <= 3 явными многочленами

    Raises:
        Unsupported: n > 3
    """
    if n == 0:
        return z * 0.0 + 1.0
    if n == 1:
        return 2.0 * a * z
    if n == 2:
        return 2.0 * a * (a + 1.0) * (z * z) - a
    if n == 3:
        return (4.0 / 3.0) * a * (a + 1.0) * (a + 2.0) * (z * z * z) - 2.0 * a * (a + 1.0) * z
    raise Unsupported(f"Гегенбауэр: доступны только n = 0..{GEGENBAUER_MAX_DEGREE} (запрошено {n})")


def ginocchio_potential(p: GinocchioParams) -> Evaluator:
    """V = {-β²υ(υ+1) + (1-β²)/4·[5(1-β²)y⁴ - (7-β²)y² + 2]}(1 - y²)"""
    d = p.delta
    depth = p.beta ** 2 * p.upsilon * (p.upsilon + 1.0)

    def V(x: float, K: int) -> Jet:
        y = ginocchio_coordinate(p, x, K)
        y2 = y * y
        bracket = (d / 4.0) * (5.0 * d * (y2 * y2) - (7.0 - p.beta ** 2) * y2 + 2.0) - depth
        return bracket * (1.0 - y2)

    return V


def ginocchio_state(p: GinocchioParams, n: int) -> Evaluator:
    """ψ_n = (1-y²)^{μ_n/2} g^{-(2μ_n+1)/4} C_n^{(μ_n+1/2)}(f), g = 1-(1-β²)y², f = βy/√g"""
    mu = ginocchio_mu(p, n)

    def psi(x: float, K: int) -> Jet:
        y = ginocchio_coordinate(p, x, K)
        y2 = y * y
        g = 1.0 - p.delta * y2
        f = p.beta * y * power(g, -0.5)
        envelope = jet_exp(ginocchio_log_envelope(p, x, K) * (mu / 2.0))
        envelope = envelope * power(g, -(2.0 * mu + 1.0) / 4.0)
        return envelope * gegenbauer(n, mu + 0.5, f)

    return psi


def ginocchio_family(p: GinocchioParams, levels: int = GINOCCHIO_MAX_LEVELS) -> PotentialFamily:
    """
    Семейство Гинокио с levels <= 4 состояниями (n = 0..levels-1); потока нет

    Raises:
        Unsupported: levels вне 1..4
        UnboundLevel: μ_n <= 0 для какого-то n < levels
    """
    if not 0.0 < p.beta <= 1.0:
        raise ConfigError(f"beta должен лежать в (0, 1] (получено {p.beta})")
    if p.upsilon <= 0.0:
        raise ConfigError(f"upsilon должен быть > 0 (получено {p.upsilon})")
    if not 1 <= levels <= GINOCCHIO_MAX_LEVELS:
        raise Unsupported(
            f"Гинокио: доступно от 1 до {GINOCCHIO_MAX_LEVELS} уровней (запрошено {levels})"
        )

    eigenpairs = []
    for n in range(levels):
        mu = ginocchio_mu(p, n)
        if mu <= 0.0:
            raise UnboundLevel(f"Гинокио: μ_{n} = {mu:.6g} <= 0, уровень {n} не связан")
        eigenpairs.append(
            EigenPair(n, ginocchio_eigenvalue(p, n), memoized(ginocchio_state(p, n)))
        )

    band = (x_of_y(p, -GINOCCHIO_Y_BAND), x_of_y(p, GINOCCHIO_Y_BAND))
    logger.debug(f"🔍 Гинокио β={p.beta:.6g}, υ={p.upsilon:.6g}: {levels} уровня")
    return PotentialFamily(
        name="ginocchio",
        params=p,
        potential=memoized(ginocchio_potential(p)),
        eigenpairs=tuple(eigenpairs),
        flow=None,
        base_index=0,
        spectrum=ginocchio_eigenvalue,
        potential_factory=ginocchio_potential,
        exclusion_bands=(band,),
    )


# ======================================================================
# Общие операции
# ======================================================================


def log_derivative(e: EigenPair, x: float, K: int) -> Jet:
    """
    h = ψ'/ψ до порядка K

    Raises:
        SingularDivision: в узлах ψ
    """
    psi = e.wavefunction(x, K + 1)
    return psi.derivative() / psi.truncate(K)


FAMILY_BUILDERS = {
    "morse": (MorseParams, morse_family),
    "ginocchio": (GinocchioParams, ginocchio_family),
}


def make_params(name: str, values: Dict[str, float]):
    """Параметры семейства из словаря (ключи - имена полей)"""
    try:
        params_cls, _ = FAMILY_BUILDERS[name]
    except KeyError:
        raise ConfigError(f"Неизвестное семейство: {name}") from None
    try:
        return params_cls(**{k: float(v) for k, v in values.items()})
    except TypeError as e:
        raise ConfigError(f"Неверные параметры для {name}: {e}") from None


def build_family(name: str, params: Any, levels: int) -> PotentialFamily:
    if name not in FAMILY_BUILDERS:
        raise ConfigError(f"Неизвестное семейство: {name}")
    if isinstance(params, dict):
        params = make_params(name, params)
    return FAMILY_BUILDERS[name][1](params, levels)

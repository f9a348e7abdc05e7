"""
services/transforms.py - ПРЕОБРАЗОВАНИЯ КРАМА И ДАРБУ

НАЗНАЧЕНИЕ:
✅ Крам: u^C[n] = u - 2(ln W_n)'', ψ^C[n]_s = W_{n,s}/W_n одним вронскианом
✅ Дарбу: вложенные вычислители, каждый шаг снимает нижний уровень
✅ При n = 1 оба пути используют одни и те же функции первого порядка
✅ Быстрый путь через отношения h_n = ψ'_n/ψ_n для второй итерации
✅ Отчёт об эквивалентности двух путей на сетке

Затравки всегда нижние n собственных функций в порядке индексов.
"""
from dataclasses import dataclass, field
from functools import partial
from types import MappingProxyType
from typing import Dict, List, Mapping, Tuple

from config.constants import CHECK_IDS, MAX_JET_ORDER
from services.jets import Jet
from services.potentials import Evaluator, PotentialFamily, log_derivative, memoized
from services.verify import GapReport, Grid, compare_functions, compare_proportional
from services.wronskian import wronskian
from utils.errors import JetMismatch, LevelIndexError, SingularDivision
from utils.logger import logger


# ======================================================================
# Первый порядок (общий для Крама при n = 1 и шага Дарбу)
# ======================================================================


def first_order_potential(u: Evaluator, seed: Evaluator, x: float, K: int) -> Jet:
    """u - 2 d/dx (ψ'/ψ)"""
    psi = seed(x, K + 2)
    h = psi.derivative() / psi.truncate(K + 1)
    return u(x, K) - 2.0 * h.derivative()


def first_order_state(seed: Evaluator, psi_s: Evaluator, x: float, K: int) -> Jet:
    """ψ_s' - (ψ'/ψ)·ψ_s"""
    psi = seed(x, K + 1)
    other = psi_s(x, K + 1)
    h = psi.derivative() / psi.truncate(K)
    return other.derivative() - h * other.truncate(K)


# ======================================================================
# Цепочка Дарбу
# ======================================================================


@dataclass(frozen=True)
class TransformChain:
    base: PotentialFamily
    level: int
    potential_k: Evaluator = field(repr=False)
    transformed: Mapping[int, Evaluator] = field(repr=False)

    @property
    def budget(self) -> int:
        """Сколько порядков производной съедает вычисление ψ^D[k]_s"""
        return self.level

    def state(self, s: int) -> Evaluator:
        try:
            return self.transformed[s]
        except KeyError:
            raise LevelIndexError(
                f"Состояние {self.base.label(s)} отсутствует на уровне {self.level} "
                f"(доступны {tuple(self.transformed)})"
            ) from None


def identity_chain(fam: PotentialFamily) -> TransformChain:
    """Уровень 0: исходный потенциал и собственные функции"""
    return TransformChain(
        base=fam,
        level=0,
        potential_k=fam.potential,
        transformed=MappingProxyType({e.index: e.wavefunction for e in fam.eigenpairs}),
    )


def _budgeted(evaluator: Evaluator, extra: int) -> Evaluator:
    def wrapper(x: float, K: int) -> Jet:
        if K + extra > MAX_JET_ORDER:
            raise JetMismatch(
                f"Порядок {K} + {extra} превышает предел струй {MAX_JET_ORDER}"
            )
        return evaluator(x, K)

    return wrapper


def darboux_step(chain: TransformChain) -> TransformChain:
    """
    u^D[k] = u^D[k-1] - 2 d/dx (ψ'/ψ) с ψ = ψ^D[k-1]_k,
    ψ^D[k]_s = (ψ^D[k-1]_s)' - (ψ'/ψ)·ψ^D[k-1]_s для s > k

    Raises:
        LevelIndexError: на уровне не осталось состояний
    """
    seed_index = chain.base.base_index + chain.level
    seed = chain.state(seed_index)
    level = chain.level + 1

    potential = memoized(_budgeted(partial(first_order_potential, chain.potential_k, seed), level + 1))
    transformed: Dict[int, Evaluator] = {}
    for s, psi_s in chain.transformed.items():
        if s > seed_index:
            transformed[s] = memoized(_budgeted(partial(first_order_state, seed, psi_s), level))

    logger.debug(f"🔍 Шаг Дарбу {chain.level} -> {level}, затравка {chain.base.label(seed_index)}")
    return TransformChain(
        base=chain.base,
        level=level,
        potential_k=potential,
        transformed=MappingProxyType(transformed),
    )


def darboux_chain(fam: PotentialFamily, n: int) -> TransformChain:
    if n < 0 or n > fam.levels:
        raise LevelIndexError(f"Порядок {n} вне 0..{fam.levels} для {fam.name}")
    chain = identity_chain(fam)
    for _ in range(n):
        chain = darboux_step(chain)
    return chain


# ======================================================================
# Крам
# ======================================================================


def _seeds(fam: PotentialFamily, n: int) -> Tuple[Evaluator, ...]:
    if n < 0 or n > fam.levels:
        raise LevelIndexError(f"Для W_{n} нужно {n} собственных функций, у {fam.name} их {fam.levels}")
    return tuple(e.wavefunction for e in fam.eigenpairs[:n])


def crum_potential(fam: PotentialFamily, n: int, x: float, K: int) -> Jet:
    """
    u - 2(W_n''/W_n - (W_n'/W_n)²) из одной струи W_n порядка K+2

    Raises:
        SingularDivision: в нулях W_n
    """
    seeds = _seeds(fam, n)
    if n == 0:
        return fam.potential(x, K)
    if n == 1:
        return first_order_potential(fam.potential, seeds[0], x, K)
    W = wronskian(seeds, x, K + 2)
    log_derivative_W = W.derivative() / W.truncate(K + 1)
    return fam.potential(x, K) - 2.0 * log_derivative_W.derivative()


def crum_wavefunction(fam: PotentialFamily, n: int, s: int, x: float, K: int) -> Jet:
    """
    W_{n,s}/W_n порядка K

    Raises:
        LevelIndexError: s не выше n-го уровня
        SingularDivision: в нулях W_n
    """
    seeds = _seeds(fam, n)
    if fam.position(s) < n:
        raise LevelIndexError(
            f"Состояние {fam.label(s)} снято {n}-м преобразованием (нужно s > n)"
        )
    psi_s = fam.eigenpair(s).wavefunction
    if n == 0:
        return psi_s(x, K)
    if n == 1:
        return first_order_state(seeds[0], psi_s, x, K)
    return wronskian(seeds + (psi_s,), x, K) / wronskian(seeds, x, K)


def crum_potential_evaluator(fam: PotentialFamily, n: int) -> Evaluator:
    return partial(crum_potential, fam, n)


def crum_state_evaluator(fam: PotentialFamily, n: int, s: int) -> Evaluator:
    return partial(crum_wavefunction, fam, n, s)


def transformed_spectrum(fam: PotentialFamily, n: int) -> List[Tuple[int, float]]:
    """Спектр суперпартнёра: исходный без нижних n уровней"""
    _seeds(fam, n)
    return [(e.index, e.eigenvalue) for e in fam.eigenpairs[n:]]


def denominators(fam: PotentialFamily, n: int) -> List:
    """Скалярные знаменатели для сканирования узлов: W_1..W_n и ψ^D[k-1]_k"""
    result = []
    chain = identity_chain(fam)
    for k in range(1, n + 1):
        seeds = _seeds(fam, k)
        result.append(lambda x, seeds=seeds: wronskian(seeds, x, 0).value)
        seed = chain.state(fam.base_index + k - 1)
        result.append(lambda x, seed=seed: seed(x, 0).value)
        if k < n:
            chain = darboux_step(chain)
    return result


# ======================================================================
# Отношения h_n
# ======================================================================


def h_ratio_psi23(fam: PotentialFamily, x: float) -> float:
    """
    [ε_0(h_2-h_1) - ε_1(h_2-h_0) + ε_2(h_1-h_0)]/(h_1-h_0) · ψ_2

    Числитель и знаменатель домножены на ψ_1: h_2ψ_2 = ψ_2', h_1ψ_1 = ψ_1',
    поэтому узлы ψ_1 и ψ_2 не особые.

    Raises:
        SingularDivision: h_1 = h_0
    """
    if fam.levels < 3:
        raise LevelIndexError(f"Нужны три нижних уровня, у {fam.name} их {fam.levels}")
    e0, e1, e2 = fam.eigenpairs[:3]
    h0 = log_derivative(e0, x, 0).value
    psi1 = e1.wavefunction(x, 1)
    psi2 = e2.wavefunction(x, 1)
    d_psi1 = psi1.derivative_at(1)
    spread = d_psi1 - h0 * psi1.value
    if abs(spread) < 1e-12 * max(abs(d_psi1), abs(h0 * psi1.value)) or spread == 0.0:
        raise SingularDivision(x, f"h_1 = h_0 в точке x0={x!r}")
    eps0, eps1, eps2 = e0.eigenvalue, e1.eigenvalue, e2.eigenvalue
    numerator = (eps0 - eps1) * psi2.derivative_at(1) * psi1.value + (
        eps1 * h0 * psi1.value - eps0 * d_psi1 + eps2 * spread
    ) * psi2.value
    return numerator / spread


# ======================================================================
# Отчёт об эквивалентности
# ======================================================================


@dataclass
class EquivalenceReport:
    n: int
    potential: GapReport
    states: Dict[int, GapReport]

    @property
    def max_state_gap(self) -> float:
        return max((rep.max_gap for rep in self.states.values()), default=0.0)

    @property
    def offending_points(self) -> List[float]:
        points = set(self.potential.offending_points)
        for rep in self.states.values():
            points |= set(rep.offending_points)
        return sorted(points)


def equivalence_report(fam: PotentialFamily, n: int, grid: Grid) -> EquivalenceReport:
    """Крам против n шагов Дарбу: потенциал поточечно, состояния с точностью до множителя"""
    chain = darboux_chain(fam, n)
    potential = compare_functions(
        CHECK_IDS["equivalence_potential"],
        lambda x: crum_potential(fam, n, x, 0).value,
        lambda x: chain.potential_k(x, 0).value,
        grid,
    )
    states = {}
    for s in chain.transformed:
        states[s] = compare_proportional(
            CHECK_IDS["equivalence_state"],
            lambda x, s=s: crum_wavefunction(fam, n, s, x, 0).value,
            lambda x, s=s: chain.state(s)(x, 0).value,
            grid,
        )
    report = EquivalenceReport(n, potential, states)
    logger.info(
        f"📊 Крам = Дарбу ({fam.name}, n={n}): потенциал {potential.max_gap:.3g}, "
        f"состояния {report.max_state_gap:.3g}"
    )
    return report

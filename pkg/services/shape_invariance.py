"""
services/shape_invariance.py - ИНВАРИАНТНОСТЬ ФОРМЫ

НАЗНАЧЕНИЕ:
✅ Базовое условие u[1](x; a) = u(x; f(a)) + R
✅ Лестница собственных значений λ_s(a_1) + R = λ_{s+1}(a)
✅ Попарная инвариантность u[k](x; a) = u[k-1](x; a_1) + R
✅ Волновые функции ψ[k]_{s+1}(x; a) ∝ ψ[k-1]_s(x; a_1)
✅ Гамильтониан H^SI_s и тройное равенство H^SI = H^D = H^C

Потенциалы сравниваются аддитивно, волновые функции - с точностью до множителя.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config.constants import CHECK_IDS
from services.jets import Jet
from services.potentials import ParameterFlow, PotentialFamily
from services.transforms import crum_potential, darboux_chain
from services.verify import GapReport, Grid, compare_functions, compare_proportional
from utils.errors import LevelIndexError, MissingFlow, UnboundLevel
from utils.logger import logger

# Отчёт проверки инвариантности формы: имя тождества, поточечные разрывы,
# максимум и (для волновых функций) подогнанная константа
SIReport = GapReport


def _flow(fam: PotentialFamily) -> ParameterFlow:
    if fam.flow is None:
        raise MissingFlow(f"У семейства {fam.name} нет потока параметров")
    return fam.flow


def _shifted_family(fam: PotentialFamily, steps: int, levels: int) -> PotentialFamily:
    params = _flow(fam).iterate(fam.params, steps)[-1]
    return fam.with_params(params, levels)


def check_si_condition(fam: PotentialFamily, grid: Grid) -> SIReport:
    """u^D[1](x; a) против u(x; f(a)) + R(a, f(a))"""
    return check_pairwise_si(fam, 1, grid, identity=CHECK_IDS["si_condition"])


@dataclass
class LadderReport:
    identity: str
    s: int
    lhs: float
    rhs: float
    gap: float

    def passed(self, tolerance: float) -> bool:
        return self.gap <= tolerance


def check_eigenvalue_ladder(fam: PotentialFamily, s: int) -> LadderReport:
    """
    λ_s(a_1) + R(a, a_1) = λ_{s+1}(a) по явным формулам спектра

    Raises:
        MissingFlow: нет потока
        LevelIndexError: s+1 вне уровней семейства
    """
    flow = _flow(fam)
    if fam.position(s) + 1 >= fam.levels:
        raise LevelIndexError(f"Лестница: {fam.label(s + 1)} вне семейства {fam.name}")
    a0, a1 = flow.iterate(fam.params, 1)
    lhs = fam.spectrum(a1, s) + flow.remainder_R(a0, a1)
    rhs = fam.spectrum(a0, s + 1)
    gap = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)
    return LadderReport(CHECK_IDS["ladder"], s, lhs, rhs, gap)


def check_wavefunction_si(fam: PotentialFamily, k: int, s: int, grid: Grid) -> SIReport:
    """
    ψ[k]_{s+1}(x; a) ∝ ψ[k-1]_s(x; a_1)

    Raises:
        MissingFlow: нет потока
    """
    _flow(fam)
    chain = darboux_chain(fam, k)
    shifted = _shifted_family(fam, 1, fam.position(s) + 1)
    shifted_chain = darboux_chain(shifted, k - 1)
    lhs = chain.state(s + 1)
    rhs = shifted_chain.state(s)
    return compare_proportional(
        CHECK_IDS["wavefunction_si"],
        lambda x: lhs(x, 0).value,
        lambda x: rhs(x, 0).value,
        grid,
    )


def check_pairwise_si(
    fam: PotentialFamily, k: int, grid: Grid, identity: Optional[str] = None
) -> SIReport:
    """
    u^D[k](x; a) против u^D[k-1](x; a_1) + R(a, a_1)

    Нужны только потенциалы, поэтому сдвинутое семейство строится с k-1 уровнями.

    Raises:
        MissingFlow: нет потока
    """
    flow = _flow(fam)
    a0, a1 = flow.iterate(fam.params, 1)
    remainder = flow.remainder_R(a0, a1)
    lhs = darboux_chain(fam, k).potential_k
    if k == 1:
        shifted_potential = fam.potential_at(a1)
    else:
        shifted_potential = darboux_chain(fam.with_params(a1, k - 1), k - 1).potential_k
    return compare_functions(
        identity or CHECK_IDS["pairwise_si"],
        lambda x: lhs(x, 0).value,
        lambda x: shifted_potential(x, 0).value + remainder,
        grid,
    )


def si_parameters(fam: PotentialFamily, s: int, allow_unbound: bool = False) -> List[Any]:
    """
    [a_0, ..., a_s]; по умолчанию s ограничен последним допустимым a_s

    Raises:
        MissingFlow: нет потока
        UnboundLevel: a_s недопустим, а allow_unbound не задан
    """
    chain = _flow(fam).iterate(fam.params, s)
    if not allow_unbound and not fam.flow.admissible(chain[-1]):
        raise UnboundLevel(
            f"H^SI_{s}: параметры {chain[-1]} не держат связанных состояний "
            f"(нужен явный allow_unbound)"
        )
    return chain


def si_hamiltonian_potential(
    fam: PotentialFamily, s: int, x: float, K: int, allow_unbound: bool = False
) -> Jet:
    """u(x; a_s) + Σ_{k=1..s} R(a_{k-1}, a_k)"""
    chain = si_parameters(fam, s, allow_unbound)
    potential = fam.potential_at(chain[-1])(x, K)
    shift = sum(fam.flow.remainder_R(chain[k - 1], chain[k]) for k in range(1, s + 1))
    return potential + shift


@dataclass
class CorollaryReport:
    s: int
    si_vs_darboux: SIReport
    si_vs_crum: SIReport
    darboux_vs_crum: SIReport
    gaps: Dict[str, float] = field(default_factory=dict)

    @property
    def max_gap(self) -> float:
        return max(self.si_vs_darboux.max_gap, self.si_vs_crum.max_gap, self.darboux_vs_crum.max_gap)

    @property
    def offending_points(self) -> List[float]:
        points = set()
        for rep in (self.si_vs_darboux, self.si_vs_crum, self.darboux_vs_crum):
            points |= set(rep.offending_points)
        return sorted(points)

    def passed(self, tolerance: float) -> bool:
        return not self.offending_points and self.max_gap <= tolerance


def corollary_check(fam: PotentialFamily, s: int, grid: Grid) -> CorollaryReport:
    """Попарные разрывы между H^SI_s, H^D_s и H^C_s на сетке"""
    _flow(fam)
    darboux = darboux_chain(fam, s).potential_k
    identity = CHECK_IDS["corollary"]

    def si(x: float) -> float:
        return si_hamiltonian_potential(fam, s, x, 0).value

    def dar(x: float) -> float:
        return darboux(x, 0).value

    def crum(x: float) -> float:
        return crum_potential(fam, s, x, 0).value

    report = CorollaryReport(
        s=s,
        si_vs_darboux=compare_functions(identity, si, dar, grid),
        si_vs_crum=compare_functions(identity, si, crum, grid),
        darboux_vs_crum=compare_functions(identity, dar, crum, grid),
    )
    report.gaps = {
        "si-darboux": report.si_vs_darboux.max_gap,
        "si-crum": report.si_vs_crum.max_gap,
        "darboux-crum": report.darboux_vs_crum.max_gap,
    }
    logger.info(f"📊 H^SI = H^D = H^C ({fam.name}, s={s}): {report.max_gap:.3g}")
    return report


def ladder_telescopes(fam: PotentialFamily, m: int) -> float:
    """λ_{m+1}(a) - [Σ_{k=1..m} R(a_{k-1}, a_k) + λ_1(a_m)]"""
    flow = _flow(fam)
    chain = flow.iterate(fam.params, m)
    total = sum(flow.remainder_R(chain[k - 1], chain[k]) for k in range(1, m + 1))
    base = fam.base_index
    return float(fam.spectrum(fam.params, base + m) - (total + fam.spectrum(chain[-1], base)))

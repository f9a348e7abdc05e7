"""
handlers/verify.py - Команда verify: наборы проверок и JSON-отчёт

НАБОРЫ:
✅ crum-darboux          Крам против Дарбу, явные формулы, отношения h
✅ residuals             невязки уравнения Шрёдингера для всех (n, s)
✅ wronskian-identities  производная вронскиана, два вронскиана, Якоби
✅ shape-invariance      условие, лестница, попарная SI, волновые функции, H^SI
✅ all                   всё вышеперечисленное

Отчёт: records[{identity, check, anchor, max_gap, tolerance, passed, offending_points}],
status, discrepancies (информационно), config.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.constants import CHECK_ANCHORS, CHECK_IDS
from config.settings import RunConfig
from handlers.transform import build_run_grid, output_path
from services import closed_forms
from services.jets import Jet, jet_variable
from services.potentials import PotentialFamily, build_family
from services.report_writer import report_writer
from services.shape_invariance import (
    check_eigenvalue_ladder,
    check_pairwise_si,
    check_si_condition,
    check_wavefunction_si,
    corollary_check,
    ladder_telescopes,
)
from services.transforms import (
    crum_potential,
    crum_potential_evaluator,
    crum_state_evaluator,
    crum_wavefunction,
    equivalence_report,
    h_ratio_psi23,
)
from services.verify import (
    GapReport,
    Grid,
    compare_functions,
    compare_proportional,
    max_gap,
    relative_gaps,
    schrodinger_residual,
)
from services.wronskian import (
    CheckReport,
    jacobi_wronskian_check,
    random_jacobi_suite,
    two_wronskian_identity_check,
    wronskian_derivative_check,
)
from utils.errors import EXIT_FAILED, EXIT_OK, MissingFlow, SingularDivision
from utils.logger import logger


@dataclass
class Report:
    suite: str
    records: List[Dict[str, Any]] = field(default_factory=list)
    discrepancies: List[Dict[str, Any]] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(record["passed"] for record in self.records)

    def add(
        self,
        identity: str,
        check: str,
        gap: float,
        tolerance: float,
        offending: Sequence[float] = (),
        passed: Optional[bool] = None,
    ) -> None:
        offending = [float(x) for x in offending]
        if passed is None:
            passed = not offending and bool(np.isfinite(gap)) and gap <= tolerance
        self.records.append(
            {
                "identity": identity,
                "check": check,
                "anchor": CHECK_ANCHORS[check],
                "max_gap": float(gap),
                "tolerance": float(tolerance),
                "passed": bool(passed),
                "offending_points": offending,
            }
        )
        mark = "✅" if passed else "❌"
        logger.info(f"{mark} {identity}: {gap:.3g} (допуск {tolerance:g})")

    def add_gap(self, identity: str, report: GapReport, tolerance: float) -> None:
        self.add(identity, report.identity, report.max_gap, tolerance, report.offending_points)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "records": self.records,
            "discrepancies": self.discrepancies,
            "skipped": self.skipped,
            "config": self.config,
        }


# ======================================================================
# Поточечные скалярные тождества
# ======================================================================


def _pointwise(check: Callable[[float], CheckReport], grid: Grid) -> Tuple[float, List[float]]:
    """Обе стороны тождества по сетке, разрыв нормирован глобально"""
    lhs, rhs, offending = [], [], []
    for x in grid:
        try:
            result = check(x)
        except SingularDivision:
            offending.append(x)
            continue
        lhs.append(float(result.lhs))
        rhs.append(float(result.rhs))
    if not lhs:
        return float("nan"), offending
    return max_gap(relative_gaps(np.array(lhs), np.array(rhs))), offending


def _polynomial(power: int):
    def p(x: float, K: int) -> Jet:
        t = jet_variable(x, K)
        result = t * 0.0 + 1.0
        for _ in range(power):
            result = result * t
        return result

    return p


# ======================================================================
# Наборы
# ======================================================================


def run_crum_darboux(report: Report, config: RunConfig, fam: PotentialFamily, grid: Grid) -> None:
    tol = config.tolerances
    top = max(1, config.order)
    for n in range(1, min(top, fam.levels) + 1):
        eq = equivalence_report(fam, n, grid)
        report.add_gap(f"Крам = Дарбу, потенциал, n={n}", eq.potential, tol["equivalence"])
        for s, state in eq.states.items():
            report.add_gap(f"Крам = Дарбу, {fam.label(s)}, n={n}", state, tol["equivalence"])
        _closed_form_records(report, config, fam, grid, n)

    if fam.levels >= 3 and top >= 2:
        s = fam.base_index + 2
        ratio = compare_proportional(
            CHECK_IDS["h_ratio"],
            lambda x: h_ratio_psi23(fam, x),
            lambda x: crum_wavefunction(fam, 2, s, x, 0).value,
            grid,
        )
        report.add_gap(f"Отношения h = Крам, {fam.label(s)}, n=2", ratio, tol["closed_form"])

    if fam.name == "ginocchio":
        report.discrepancies.extend(closed_forms.printed_form_discrepancies(fam.params, grid))


def _closed_form_records(
    report: Report, config: RunConfig, fam: PotentialFamily, grid: Grid, n: int
) -> None:
    tol = config.tolerances["closed_form"]
    p = fam.params
    if fam.name == "morse":
        potential = compare_functions(
            CHECK_IDS["closed_form_potential"],
            lambda x: crum_potential(fam, n, x, 0).value,
            lambda x: closed_forms.morse_transformed_potential(p, n, x, 0).value,
            grid,
        )
        report.add_gap(f"Явная форма потенциала, n={n}", potential, tol)
        for s in (2, 3):
            if (n, s) in ((1, 2), (1, 3), (2, 3)) and s <= fam.levels:
                state = compare_proportional(
                    CHECK_IDS["closed_form_state"],
                    lambda x, s=s: crum_wavefunction(fam, n, s, x, 0).value,
                    lambda x, s=s: closed_forms.morse_transformed_state(p, n, s, x, 0).value,
                    grid,
                )
                report.add_gap(f"Явная форма {fam.label(s)}, n={n}", state, tol)
    elif fam.name == "ginocchio" and n <= 2:
        potential = compare_functions(
            CHECK_IDS["closed_form_potential"],
            lambda x: crum_potential(fam, n, x, 0).value,
            lambda x: closed_forms.ginocchio_transformed_potential(p, n, x, 0).value,
            grid,
        )
        report.add_gap(f"Явная форма потенциала, n={n}", potential, tol)
        if n == 2 and fam.levels >= 3:
            state = compare_proportional(
                CHECK_IDS["closed_form_state"],
                lambda x: crum_wavefunction(fam, 2, 2, x, 0).value,
                lambda x: closed_forms.ginocchio_psi23(p, x, 0).value,
                grid,
            )
            report.add_gap("Явная форма psi_2 по отношениям h, n=2", state, tol)


def run_residuals(report: Report, config: RunConfig, fam: PotentialFamily, grid: Grid) -> None:
    tol = config.tolerances["residual"]
    top = min(max(config.order, 2), fam.levels - 1)
    for n in range(0, top + 1):
        u = crum_potential_evaluator(fam, n)
        for e in fam.eigenpairs[n:]:
            residual = schrodinger_residual(u, crum_state_evaluator(fam, n, e.index), e.eigenvalue, grid)
            report.add(
                f"Невязка {fam.label(e.index)}, n={n}",
                CHECK_IDS["residual"],
                residual.max_gap,
                tol,
                residual.offending_points,
            )


def run_wronskian_identities(
    report: Report, config: RunConfig, fam: PotentialFamily, grid: Grid
) -> None:
    tol = config.tolerances["wronskian"]
    states = [e.wavefunction for e in fam.eigenpairs]
    triple = states[:3]

    gap, offending = _pointwise(
        lambda x: wronskian_derivative_check(triple, x), grid
    )
    report.add(
        f"Производная вронскиана, {len(triple)} функции {fam.name}",
        CHECK_IDS["wronskian_derivative"],
        gap,
        tol,
        offending,
    )

    polynomials = [_polynomial(0), _polynomial(1), _polynomial(2)]
    poly_gap, _ = _pointwise(
        lambda x: wronskian_derivative_check(polynomials, x), grid
    )
    report.add("Производная вронскиана, 1, x, x²", CHECK_IDS["wronskian_derivative"], poly_gap, tol)

    if len(states) >= 3:
        gap, offending = _pointwise(
            lambda x: two_wronskian_identity_check(states[:2], states[2], x),
            grid,
        )
        report.add(f"Два вронскиана, n=2, {fam.name}", CHECK_IDS["two_wronskian"], gap, tol, offending)

    # четвёртой функцией берётся ψ_3 семейства или, если её нет, сам потенциал
    if len(states) >= 3:
        fourth = states[3] if len(states) >= 4 else fam.potential
        quad = states[:3] + [fourth]
        gap, offending = _pointwise(
            lambda x: two_wronskian_identity_check(quad[:3], quad[3], x),
            grid,
        )
        report.add(f"Два вронскиана, n=3, {fam.name}", CHECK_IDS["two_wronskian"], gap, tol, offending)

        gap, offending = _pointwise(
            lambda x: jacobi_wronskian_check(quad, x),
            grid,
        )
        report.add(
            f"Якоби на матрице Вронского 4x4, {fam.name}",
            CHECK_IDS["jacobi_wronskian"],
            gap,
            config.tolerances["jacobi"],
            offending,
        )

    sweep = random_jacobi_suite()
    exact = all(r.passed(0.0) for r in sweep)
    report.add(
        f"Якоби, {len(sweep)} случайных целых матриц",
        CHECK_IDS["jacobi"],
        max(r.gap for r in sweep),
        config.tolerances["jacobi"],
        passed=exact,
    )


def run_shape_invariance(
    report: Report, config: RunConfig, fam: PotentialFamily, grid: Grid
) -> None:
    """
    Raises:
        MissingFlow: у семейства нет потока
    """
    if fam.flow is None:
        raise MissingFlow(f"У семейства {fam.name} нет потока параметров")
    tol = config.tolerances
    base = fam.base_index

    report.add_gap("Условие инвариантности формы", check_si_condition(fam, grid), tol["si_condition"])

    for s in fam.indices[:-1]:
        ladder = check_eigenvalue_ladder(fam, s)
        report.add(
            f"Лестница λ_{s}(a_1) + R = λ_{s + 1}(a)", CHECK_IDS["ladder"], ladder.gap, tol["ladder"]
        )
    for m in range(1, fam.levels):
        residue = abs(ladder_telescopes(fam, m))
        report.add(f"Телескопическая лестница, m={m}", CHECK_IDS["ladder"], residue, tol["ladder"])

    for k in range(2, fam.levels + 1):
        pairwise_tol = tol["pairwise_si"] if k <= 2 else max(tol["pairwise_si"], tol["corollary"])
        report.add_gap(f"Попарная SI потенциалов, k={k}", check_pairwise_si(fam, k, grid), pairwise_tol)

    for k, offset in ((1, 0), (1, 1), (2, 1)):
        s = base + offset
        if fam.position(s) + 1 < fam.levels:
            report.add_gap(
                f"SI волновых функций, k={k}, s={s}",
                check_wavefunction_si(fam, k, s, grid),
                tol["wavefunction_si"],
            )

    for s in range(1, fam.levels + 1):
        if not fam.flow.admissible(fam.flow.iterate(fam.params, s)[-1]) and not config.allow_unbound:
            report.skipped.append(f"corollary s={s}: a_s без связанных состояний")
            continue
        corollary = corollary_check(fam, s, grid)
        report.add(
            f"H^SI = H^D = H^C, s={s}",
            CHECK_IDS["corollary"],
            corollary.max_gap,
            tol["corollary"],
            corollary.offending_points,
        )


SUITE_RUNNERS = {
    "crum-darboux": run_crum_darboux,
    "residuals": run_residuals,
    "wronskian-identities": run_wronskian_identities,
    "shape-invariance": run_shape_invariance,
}


def cmd_verify(config: RunConfig, suite: Optional[str] = None) -> Tuple[Report, int]:
    """
    Запускает набор проверок

    Returns:
        (отчёт, код выхода 0/1)

    Raises:
        EngineError: 2 конфигурация, 3 особенность, 4 нет потока
    """
    suite = suite or config.suite
    fam = build_family(config.family, config.params, config.levels)
    scan_order = min(max(config.order, 2), fam.levels)
    grid = build_run_grid(config, fam, scan_order)
    report = Report(suite=suite, config=config.as_dict())

    if suite == "all":
        for name, runner in SUITE_RUNNERS.items():
            if name == "shape-invariance" and fam.flow is None:
                logger.warning(f"⚠️ {fam.name}: нет потока параметров, shape-invariance пропущен")
                report.skipped.append(f"{name}: нет потока параметров")
                continue
            runner(report, config, fam, grid)
    else:
        SUITE_RUNNERS[suite](report, config, fam, grid)

    if config.out:
        report_writer.write_json(output_path(Path(config.out), ".report.json"), report.as_dict())
    status = "✅ пройдено" if report.passed else "❌ есть провалы"
    logger.info(f"📊 verify {suite}: {len(report.records)} проверок, {status}")
    return report, EXIT_OK if report.passed else EXIT_FAILED

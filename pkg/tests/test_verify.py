"""
tests/test_verify.py
Тесты примитивов проверок (services/verify.py)
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.jets import Jet, jet_variable
from services.verify import (
    build_grid,
    compare_functions,
    compare_proportional,
    proportionality,
    relative_gaps,
    sample,
    schrodinger_residual,
)
from utils.errors import DegenerateComparand, EmptyGrid, SingularDivision

pytestmark = [pytest.mark.unit, pytest.mark.verify]


class _NoBands:
    exclusion_bands = ()


# ===================================================================
# Сравнения
# ===================================================================


class TestProportionality:
    """Одна константа на всю сетку"""

    def test_exact_multiple(self):
        f = np.array([2.0, -4.0, 6.0])
        report = proportionality(f, f / 2.0)
        assert report.constant == pytest.approx(2.0)
        assert report.deviation == pytest.approx(0.0, abs=1e-15)

    def test_non_proportional(self):
        report = proportionality([1.0, 1.0], [1.0, -1.0])
        assert report.constant == 0.0
        assert report.deviation == pytest.approx(1.0)

    def test_zero_reference(self):
        with pytest.raises(DegenerateComparand):
            proportionality([1.0, 2.0], [0.0, 0.0])

    def test_empty_samples(self):
        with pytest.raises(DegenerateComparand):
            proportionality([], [])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            proportionality([1.0, 2.0], [1.0])

    def test_compare_proportional_reports_constant(self):
        grid = build_grid(_NoBands(), -1.0, 1.0, 11, node_scan=False)
        report = compare_proportional("k", lambda x: 3.0 * math.exp(x), math.exp, grid)
        assert report.constant == pytest.approx(3.0)
        assert report.passed(1e-12)

    @given(scale=st.floats(min_value=-1e3, max_value=1e3).filter(lambda v: abs(v) > 1e-3))
    @settings(max_examples=40, deadline=None)
    def test_scaling_reference(self, scale):
        """g -> s·g: константа делится на s, отклонение не меняется"""
        f = np.array([1.0, 2.5, -0.7, 3.1])
        g = np.array([0.9, 2.6, -0.5, 3.0])
        base = proportionality(f, g)
        scaled = proportionality(f, g * scale)
        assert scaled.constant == pytest.approx(base.constant / scale, rel=1e-12)
        assert scaled.deviation == pytest.approx(base.deviation, rel=1e-9)


class TestGaps:
    """Аддитивные разрывы и особые точки"""

    def test_global_normalisation(self):
        gaps = relative_gaps(np.array([0.0, 10.0]), np.array([1.0, 10.0]))
        assert list(gaps) == pytest.approx([0.1, 0.0])

    def test_sample_records_singular_points(self):
        def f(x):
            if x == 0.0:
                raise SingularDivision(x)
            return 1.0 / x

        values, offending = sample(f, [-1.0, 0.0, 1.0])
        assert offending == [0.0]
        assert math.isnan(values[1])

    def test_offending_point_fails_comparison(self):
        grid = build_grid(_NoBands(), -1.0, 1.0, 3, node_scan=False)

        def f(x):
            if x == 0.0:
                raise SingularDivision(x)
            return 1.0 / x

        report = compare_functions("f", f, f, grid)
        assert report.offending_points == [0.0]
        assert report.max_gap == 0.0
        assert not report.passed(1.0)


# ===================================================================
# Невязка
# ===================================================================


class TestResidual:
    """-ψ'' + uψ - λψ"""

    def test_free_particle(self):
        """u = 0, ψ = sin(2x), λ = 4"""
        grid = build_grid(_NoBands(), 0.1, 3.0, 30, node_scan=False)

        def u(x, K):
            return jet_variable(x, K) * 0.0

        def psi(x, K):
            return _sin(jet_variable(x, K) * 2.0)

        report = schrodinger_residual(u, psi, 4.0, grid)
        assert report.max_gap < 1e-12

    def test_wrong_eigenvalue(self, morse, morse_grid):
        e = morse.eigenpair(2)
        report = schrodinger_residual(morse.potential, e.wavefunction, e.eigenvalue + 1.0, morse_grid)
        assert report.max_gap > 1e-3

    def test_morse_states(self, morse, morse_grid):
        for e in morse.eigenpairs:
            report = schrodinger_residual(morse.potential, e.wavefunction, e.eigenvalue, morse_grid)
            assert report.passed(1e-10)

    @pytest.mark.parametrize("c", [-3.5, 1e-4, 250.0])
    def test_invariant_under_scaling_state(self, morse, morse_grid, c):
        """ψ -> cψ не меняет нормированную невязку"""
        e = morse.eigenpair(2)

        def scaled(x, K):
            return e.wavefunction(x, K) * c

        lam = e.eigenvalue + 1.0
        base = schrodinger_residual(morse.potential, e.wavefunction, lam, morse_grid)
        report = schrodinger_residual(morse.potential, scaled, lam, morse_grid)
        assert report.max_gap == pytest.approx(base.max_gap, rel=1e-12)


def _sin(t):
    """Струя sin(t) той же рекурсией, что sinh/cosh, со сменой знака"""
    s = np.zeros(t.order + 1)
    c = np.zeros(t.order + 1)
    s[0], c[0] = math.sin(t.coeffs[0]), math.cos(t.coeffs[0])
    for k in range(1, t.order + 1):
        ja = np.arange(1, k + 1) * t.coeffs[1 : k + 1]
        s[k] = float(np.dot(ja, c[k - 1 :: -1][:k])) / k
        c[k] = -float(np.dot(ja, s[k - 1 :: -1][:k])) / k
    return Jet(t.x0, s)


# ===================================================================
# Сетка
# ===================================================================


class TestBuildGrid:
    """Равномерная сетка с вырезанными особенностями"""

    def test_single_point(self, morse):
        with pytest.raises(EmptyGrid):
            build_grid(morse, -1.0, 1.0, 1)

    def test_empty_range(self, morse):
        with pytest.raises(EmptyGrid):
            build_grid(morse, 1.0, 1.0, 10)

    def test_everything_excluded(self, ginocchio):
        """Диапазон целиком внутри полосы |y| < 0.05"""
        with pytest.raises(EmptyGrid):
            build_grid(ginocchio, -0.01, 0.01, 5)

    def test_band_removes_origin(self, ginocchio_grid):
        assert 0.0 not in list(ginocchio_grid)
        assert len(ginocchio_grid.exclusions) == 1

    def test_node_scan_excludes_sign_change(self):
        grid = build_grid(_NoBands(), -1.0, 1.0, 21, node_scan=True, denominators=[lambda x: x - 0.33])
        points = list(grid)
        assert all(abs(x - 0.33) > 0.1 for x in points)
        assert len(points) < 21

    def test_node_scan_disabled(self):
        grid = build_grid(_NoBands(), -1.0, 1.0, 21, node_scan=False, denominators=[lambda x: x])
        assert len(grid) == 21

    def test_spacing(self):
        grid = build_grid(_NoBands(), 0.0, 2.0, 5, node_scan=False)
        assert grid.spacing == pytest.approx(0.5)
        assert list(grid) == pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])

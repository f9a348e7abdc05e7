"""
tests/test_wronskian.py
Тесты вронскианов и тождеств для определителей (services/wronskian.py)
"""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.jets import jet_elementary, jet_variable
from services.wronskian import (
    bumped_determinant,
    cofactor_matrix,
    determinant,
    jacobi_check,
    jacobi_wronskian_check,
    random_jacobi_suite,
    two_wronskian_identity_check,
    wronskian,
    wronskian_derivative_check,
    wronskian_matrix,
)
from utils.errors import JetMismatch

pytestmark = [pytest.mark.unit, pytest.mark.wronskian]


def _sinh(x, K):
    return jet_elementary("sinh", jet_variable(x, K))


def _cosh(x, K):
    return jet_elementary("cosh", jet_variable(x, K))


def _exp_times(c):
    def f(x, K):
        return jet_elementary("exp", jet_variable(x, K) * c)

    return f


def _monomial(power):
    def f(x, K):
        t = jet_variable(x, K)
        result = t * 0.0 + 1.0
        for _ in range(power):
            result = result * t
        return result

    return f


# ===================================================================
# Определители
# ===================================================================


class TestDeterminant:
    """Точные и численные определители"""

    def test_two_by_two(self):
        assert determinant([[1, 2], [3, 4]]) == -2

    def test_exact_for_fractions(self):
        m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
        assert determinant(m) == Fraction(1, 10) - Fraction(1, 12)

    def test_large_float_matrix_uses_numpy(self):
        m = [[float(i == j) * (i + 1) for j in range(7)] for i in range(7)]
        assert determinant(m) == pytest.approx(5040.0)

    def test_empty_matrix(self):
        assert determinant([]) == 1

    def test_cofactor_matrix(self):
        assert cofactor_matrix([[1, 2], [3, 4]]) == [[4, -3], [-2, 1]]


# ===================================================================
# Вронскиан
# ===================================================================


class TestWronskian:
    """Струя вронскиана и правило порядка"""

    def test_sinh_cosh(self):
        """W(sinh, cosh) = -1 всюду"""
        for x in (-1.0, 0.0, 2.5):
            W = wronskian([_sinh, _cosh], x, 3)
            assert W.value == pytest.approx(-1.0)
            assert max(abs(c) for c in W.coeffs[1:]) < 1e-10

    def test_exponentials(self):
        """W(e^x, e^{2x}, e^{3x}) = 2 e^{6x}"""
        fs = [_exp_times(1.0), _exp_times(2.0), _exp_times(3.0)]
        W = wronskian(fs, 0.1, 1)
        expected = jet_elementary("exp", jet_variable(0.1, 1) * 6.0) * 2.0
        assert list(W.coeffs) == pytest.approx(list(expected.coeffs))

    def test_monomials_constant(self):
        """W(1, x, x²) = 2"""
        W = wronskian([_monomial(0), _monomial(1), _monomial(2)], 1.7, 2)
        assert list(W.coeffs) == pytest.approx([2.0, 0.0, 0.0], abs=1e-12)

    def test_lu_matches_expansion(self):
        fs = [_exp_times(c) for c in (0.5, 1.0, 1.5, 2.0, 2.5)]
        by_lu = wronskian(fs, 0.2, 2, method="lu")
        by_expansion = wronskian(fs, 0.2, 2, method="expansion")
        assert list(by_lu.coeffs) == pytest.approx(list(by_expansion.coeffs), rel=1e-9)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            wronskian([_sinh], 0.0, 0, method="qr")

    def test_empty_set(self):
        with pytest.raises(JetMismatch):
            wronskian_matrix([], 0.0, 0)

    def test_matrix_shape(self):
        m = wronskian_matrix([_sinh, _cosh, _exp_times(1.0)], 0.0, 1)
        assert len(m) == 3 and all(len(row) == 3 for row in m)
        assert all(jet.order == 1 for row in m for jet in row)

    @pytest.mark.parametrize("x", [-1.2, 0.3, 1.9])
    def test_swap_changes_sign(self, morse, x):
        """Перестановка двух столбцов меняет знак"""
        psi1, psi2, psi3 = (e.wavefunction for e in morse.eigenpairs)
        W = wronskian([psi1, psi2, psi3], x, 1)
        swapped = wronskian([psi2, psi1, psi3], x, 1)
        assert list(swapped.coeffs) == pytest.approx([-c for c in W.coeffs], rel=1e-12)

    @given(c=st.floats(min_value=-5.0, max_value=5.0).filter(lambda v: abs(v) > 1e-3))
    @settings(max_examples=25, deadline=None)
    def test_linear_in_column(self, morse, c):
        """W(ψ_1, c·ψ_2) = c·W(ψ_1, ψ_2)"""
        psi1, psi2 = morse.eigenpair(1).wavefunction, morse.eigenpair(2).wavefunction

        def scaled(x, K):
            return psi2(x, K) * c

        x = 0.7
        assert wronskian([psi1, scaled], x, 0).value == pytest.approx(
            c * wronskian([psi1, psi2], x, 0).value, rel=1e-12
        )

    @pytest.mark.parametrize("x", [-2.0, -0.5, 0.0, 0.8, 2.4])
    def test_morse_pair(self, morse, morse_params, x):
        """W(ψ_1, ψ_2) = α·cosh(αx)·ψ_1²"""
        psi1 = morse.eigenpair(1).wavefunction(x, 0).value
        W = wronskian([morse.eigenpair(1).wavefunction, morse.eigenpair(2).wavefunction], x, 0)
        a = morse_params.alpha
        assert W.value == pytest.approx(a * math.cosh(a * x) * psi1 ** 2, rel=1e-12)


# ===================================================================
# Тождества
# ===================================================================


class TestIdentities:
    """Производная вронскиана, два вронскиана, теорема Якоби"""

    def test_bumped_row_on_polynomials_is_exact(self):
        polys = [_monomial(0), _monomial(1), _monomial(2)]
        report = wronskian_derivative_check(polys, 0.9)
        assert report.lhs == 0.0
        assert report.rhs == 0.0
        assert report.gap == 0.0

    def test_bumped_row_on_exponentials(self):
        fs = [_exp_times(1.0), _exp_times(-1.0), _exp_times(2.0)]
        report = wronskian_derivative_check(fs, 0.3)
        assert report.passed(1e-12)
        assert bumped_determinant(fs, 0.3) == pytest.approx(report.lhs)

    def test_two_wronskians(self):
        fs = [_exp_times(1.0), _exp_times(2.0), _exp_times(-1.0)]
        report = two_wronskian_identity_check(fs, _exp_times(3.0), 0.4)
        assert report.passed(1e-10)

    def test_two_wronskians_needs_two_functions(self):
        with pytest.raises(JetMismatch):
            two_wronskian_identity_check([_sinh], _cosh, 0.0)

    def test_jacobi_two_by_two(self):
        report = jacobi_check([[1, 2], [3, 4]], [0], [0])
        assert report.exact
        assert report.lhs == 4 and report.rhs == 4
        assert report.passed(0.0)

    def test_jacobi_rejects_bad_indices(self):
        m = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
        with pytest.raises(ValueError):
            jacobi_check(m, [1, 0], [0, 1])
        with pytest.raises(ValueError):
            jacobi_check(m, [0, 1, 2], [0, 1, 2])
        with pytest.raises(ValueError):
            jacobi_check(m, [0, 3], [0, 1])

    def test_jacobi_on_singular_matrix(self):
        """|A| = 0: миноры порядка r >= 2 присоединённой матрицы нулевые"""
        m = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
        report = jacobi_check(m, [0, 1], [1, 2])
        assert report.lhs == 0 and report.rhs == 0

    @given(
        st.lists(
            st.lists(st.integers(min_value=-9, max_value=9), min_size=4, max_size=4),
            min_size=4,
            max_size=4,
        ),
        st.sets(st.integers(min_value=0, max_value=3), min_size=2, max_size=2),
        st.sets(st.integers(min_value=0, max_value=3), min_size=2, max_size=2),
    )
    @settings(max_examples=60, deadline=None)
    def test_jacobi_property(self, matrix, rows, cols):
        report = jacobi_check(matrix, sorted(rows), sorted(cols))
        assert report.lhs == report.rhs

    def test_random_sweep_is_exact_and_deterministic(self):
        first = random_jacobi_suite(sizes=(4, 5), count=10, seed=7)
        second = random_jacobi_suite(sizes=(4, 5), count=10, seed=7)
        assert len(first) == 20
        assert all(r.passed(0.0) for r in first)
        assert [r.lhs for r in first] == [r.lhs for r in second]

    def test_jacobi_on_wronskian_matrix(self):
        fs = [_exp_times(c) for c in (1.0, -1.0, 2.0, 0.5)]
        report = jacobi_wronskian_check(fs, 0.25)
        assert report.identity == "jacobi-minors/wronskian-matrix"
        assert report.passed(1e-9)

"""
tests/test_jets.py
Unit тесты арифметики струй (services/jets.py)
Запуск: pytest tests/test_jets.py -v
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from services.jets import (
    Jet,
    PolyODE,
    jet_arith,
    jet_elementary,
    jet_ode_propagate,
    jet_variable,
    polyval,
)
from services.potentials import GinocchioParams, ginocchio_ode
from utils.errors import DomainError, JetMismatch, SingularDivision

pytestmark = [pytest.mark.unit, pytest.mark.jets]

coefficient = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
positive = st.floats(min_value=0.5, max_value=3.0, allow_nan=False)


def _jet(c0, rest, x0=0.0):
    return Jet(x0, [c0, *rest])


# ===================================================================
# Конструкторы и свойства
# ===================================================================


class TestJetBasics:
    """Хранение коэффициентов и производные"""

    def test_variable_jet(self):
        x = jet_variable(1.5, 3)
        assert list(x.coeffs) == [1.5, 1.0, 0.0, 0.0]
        assert x.order == 3
        assert x.x0 == 1.5

    def test_negative_order_rejected(self):
        with pytest.raises(JetMismatch):
            jet_variable(0.0, -1)

    def test_coefficients_are_immutable(self):
        x = jet_variable(0.0, 2)
        with pytest.raises(ValueError):
            x.coeffs[0] = 5.0

    def test_derivatives_of_cube(self):
        """x³ в x0 = 2: 8, 12, 12, 6"""
        x = jet_variable(2.0, 3)
        cube = x * x * x
        assert list(cube.derivatives()) == pytest.approx([8.0, 12.0, 12.0, 6.0])
        assert cube.derivative_at(2) == pytest.approx(12.0)

    def test_derivative_shift_lowers_order(self):
        x = jet_variable(2.0, 3)
        cube = x * x * x
        second = cube.derivative_shift(2)
        assert second.order == 1
        assert second.value == pytest.approx(12.0)

    def test_derivative_at_beyond_order(self):
        with pytest.raises(JetMismatch):
            jet_variable(0.0, 1).derivative_at(2)

    def test_truncate_cannot_raise_order(self):
        with pytest.raises(JetMismatch):
            jet_variable(0.0, 2).truncate(3)


# ===================================================================
# Арифметика
# ===================================================================


class TestArithmetic:
    """Сложение, умножение, деление и несовместимые струи"""

    def test_mismatched_points(self):
        with pytest.raises(JetMismatch):
            jet_variable(0.0, 2) + jet_variable(1.0, 2)

    def test_mismatched_orders(self):
        with pytest.raises(JetMismatch):
            jet_arith("mul", jet_variable(0.0, 2), jet_variable(0.0, 3))

    def test_unknown_operation(self):
        x = jet_variable(0.0, 1)
        with pytest.raises(ValueError):
            jet_arith("pow", x, x)

    def test_scalar_on_the_left(self):
        x = jet_variable(1.0, 2)
        assert isinstance(2.0 - x, Jet)
        assert (2.0 - x).value == 1.0
        assert (np.float64(3.0) * x).coeffs[1] == 3.0

    def test_division_by_zero_constant_term(self):
        x = jet_variable(0.0, 3)
        with pytest.raises(SingularDivision) as exc_info:
            jet_arith("div", Jet.constant(1.0, 0.0, 3), x)
        assert exc_info.value.x0 == 0.0

    def test_division_geometric_series(self):
        """1/(1 - x) в нуле: все коэффициенты 1"""
        x = jet_variable(0.0, 5)
        q = 1.0 / (1.0 - x)
        assert list(q.coeffs) == pytest.approx([1.0] * 6)

    @given(st.lists(coefficient, min_size=3, max_size=3), st.lists(coefficient, min_size=3, max_size=3))
    def test_product_rule(self, f_rest, g_rest):
        """(fg)' = f'g + fg'"""
        f = _jet(0.7, f_rest)
        g = _jet(-1.2, g_rest)
        lhs = (f * g).derivative()
        rhs = f.derivative() * g.truncate(2) + f.truncate(2) * g.derivative()
        assert list(lhs.coeffs) == pytest.approx(list(rhs.coeffs), abs=1e-12)

    @given(positive, st.lists(coefficient, min_size=4, max_size=4))
    def test_division_inverts_multiplication(self, c0, rest):
        a = _jet(c0, rest)
        b = _jet(1.0 + c0, rest[::-1])
        assert list(((a * b) / b).coeffs) == pytest.approx(list(a.coeffs), abs=1e-9)


# ===================================================================
# Элементарные функции
# ===================================================================


class TestElementary:
    """Рекуррентные формулы элементарных функций"""

    def test_exp_at_zero(self):
        e = jet_elementary("exp", jet_variable(0.0, 3))
        assert list(e.coeffs) == pytest.approx([1.0, 1.0, 0.5, 1.0 / 6.0])

    def test_sech_at_zero(self):
        s = jet_elementary("sech", jet_variable(0.0, 2))
        assert list(s.coeffs) == pytest.approx([1.0, 0.0, -0.5])

    def test_cosh_squared_minus_sinh_squared(self):
        x = jet_variable(0.8, 6) * 1.3
        s = jet_elementary("sinh", x)
        c = jet_elementary("cosh", x)
        identity = c * c - s * s
        assert identity.value == pytest.approx(1.0)
        assert np.max(np.abs(identity.coeffs[1:])) < 1e-12

    def test_ln_of_nonpositive(self):
        with pytest.raises(DomainError):
            jet_elementary("ln", jet_variable(-1.0, 2))

    def test_fractional_power_of_negative(self):
        with pytest.raises(DomainError):
            jet_elementary("pow_r", jet_variable(-2.0, 2), 0.5)

    def test_integer_power_of_negative(self):
        cube = jet_elementary("pow_r", jet_variable(-2.0, 2), 3)
        assert list(cube.coeffs) == pytest.approx([-8.0, 12.0, -6.0])

    def test_pow_requires_exponent(self):
        with pytest.raises(ValueError):
            jet_elementary("pow_r", jet_variable(1.0, 2))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            jet_elementary("arcsin", jet_variable(0.1, 2))

    def test_non_finite_argument(self):
        with pytest.raises(DomainError):
            jet_elementary("exp", Jet(0.0, [math.nan, 1.0]))

    def test_tanh_matches_values(self):
        t = jet_elementary("tanh", jet_variable(0.3, 2))
        assert t.value == pytest.approx(math.tanh(0.3))
        assert t.derivative_at(1) == pytest.approx(1.0 - math.tanh(0.3) ** 2)

    @given(positive, st.lists(coefficient, min_size=4, max_size=4))
    @settings(max_examples=50)
    def test_exp_of_log_is_identity(self, c0, rest):
        a = _jet(c0, rest)
        back = jet_elementary("exp", jet_elementary("ln", a))
        assert list(back.coeffs) == pytest.approx(list(a.coeffs), abs=1e-9)

    @given(positive, st.lists(coefficient, min_size=3, max_size=3))
    @settings(max_examples=50)
    def test_square_root_squared(self, c0, rest):
        a = _jet(c0, rest)
        root = jet_elementary("pow_r", a, 0.5)
        assert list((root * root).coeffs) == pytest.approx(list(a.coeffs), abs=1e-9)


# ===================================================================
# Полиномы и ОДУ
# ===================================================================


class TestODEPropagation:
    """Струя решения y' = P(y)"""

    def test_polyval_horner(self):
        x = jet_variable(2.0, 2)
        p = polyval([1.0, -3.0, 2.0], x)  # 1 - 3x + 2x²
        assert list(p.coeffs) == pytest.approx([3.0, 5.0, 2.0])

    def test_tanh_series_from_ode(self):
        """β = 1: y' = 1 - y², y(0) = 0 даёт ряд tanh"""
        ode = ginocchio_ode(GinocchioParams(beta=1.0, upsilon=1.0), 0.0)
        y = jet_ode_propagate(ode, 0.0, 5)
        assert list(y.coeffs) == pytest.approx([0.0, 1.0, 0.0, -1.0 / 3.0, 0.0, 2.0 / 15.0])

    def test_ode_agrees_with_tanh_jet_away_from_zero(self):
        x0 = 0.4
        ode = PolyODE(coefficients=(1.0, 0.0, -1.0), y0=math.tanh(x0), x0=x0)
        y = jet_ode_propagate(ode, x0, 6)
        t = jet_elementary("tanh", jet_variable(x0, 6))
        assert list(y.coeffs) == pytest.approx(list(t.coeffs), abs=1e-12)

    def test_exponential_growth(self):
        """y' = y, y(0) = 1 даёт 1/k!"""
        y = jet_ode_propagate(PolyODE(coefficients=(0.0, 1.0), y0=1.0), 0.0, 4)
        assert list(y.coeffs) == pytest.approx([1.0 / math.factorial(k) for k in range(5)])

    def test_rhs_evaluation(self):
        ode = PolyODE(coefficients=(1.0, 0.0, -1.0), y0=0.0)
        assert ode.rhs(0.5) == pytest.approx(0.75)

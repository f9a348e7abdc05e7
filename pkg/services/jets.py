"""
services/jets.py - АРИФМЕТИКА УСЕЧЁННЫХ РЯДОВ ТЕЙЛОРА (СТРУЙ)

НАЗНАЧЕНИЕ:
✅ Jet - неизменяемое разложение функции в точке x0 до порядка K
✅ Коэффициенты хранятся нормированными: c_j = f^(j)(x0)/j!
✅ +, -, *, / по Коши, элементарные функции по рекуррентным формулам
✅ Распространение струи решения ОДУ y' = P(y) с полиномиальной правой частью

Струи с разными x0 или порядком не пересчитываются молча - это JetMismatch.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from config.constants import EPS_DIV_FACTOR
from utils.errors import DomainError, JetMismatch, SingularDivision

Scalar = Union[int, float]

ELEMENTARY_KINDS = ("exp", "ln", "sinh", "cosh", "tanh", "sech", "pow_r")


class Jet:
    """Усечённый ряд Тейлора скалярной функции в точке x0"""

    __slots__ = ("_x0", "_coeffs")

    # numpy-скаляры слева должны отдавать операцию в __radd__/__rmul__
    __array_ufunc__ = None

    def __init__(self, x0: float, coeffs: Sequence[float]):
        arr = np.array(coeffs, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise JetMismatch("Струя должна содержать хотя бы c_0")
        arr.setflags(write=False)
        self._x0 = float(x0)
        self._coeffs = arr

    # ------------------------------------------------------------------
    # Конструкторы
    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, value: float, x0: float, order: int) -> "Jet":
        coeffs = np.zeros(order + 1)
        coeffs[0] = value
        return cls(x0, coeffs)

    @classmethod
    def variable(cls, x0: float, order: int) -> "Jet":
        coeffs = np.zeros(order + 1)
        coeffs[0] = x0
        if order >= 1:
            coeffs[1] = 1.0
        return cls(x0, coeffs)

    # ------------------------------------------------------------------
    # Свойства
    # ------------------------------------------------------------------

    @property
    def x0(self) -> float:
        return self._x0

    @property
    def order(self) -> int:
        return self._coeffs.size - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def value(self) -> float:
        return float(self._coeffs[0])

    def derivative_at(self, m: int) -> float:
        """m-я производная в x0: d_m = m!·c_m"""
        if m > self.order:
            raise JetMismatch(f"Порядок {m} больше порядка струи {self.order}")
        return float(math.factorial(m) * self._coeffs[m])

    def derivatives(self) -> np.ndarray:
        factorials = np.array([math.factorial(j) for j in range(self.order + 1)], dtype=float)
        return self._coeffs * factorials

    # ------------------------------------------------------------------
    # Сдвиг по производной и усечение
    # ------------------------------------------------------------------

    def derivative(self) -> "Jet":
        """Струя производной f' порядка K-1"""
        if self.order == 0:
            raise JetMismatch("Нельзя продифференцировать струю нулевого порядка")
        j = np.arange(1, self.order + 1, dtype=float)
        return Jet(self._x0, self._coeffs[1:] * j)

    def derivative_shift(self, times: int) -> "Jet":
        jet = self
        for _ in range(times):
            jet = jet.derivative()
        return jet

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetMismatch(f"Нельзя повысить порядок струи {self.order} -> {order}")
        if order == self.order:
            return self
        return Jet(self._x0, self._coeffs[: order + 1])

    # ------------------------------------------------------------------
    # Арифметика
    # ------------------------------------------------------------------

    def _coerce(self, other: Union["Jet", Scalar]) -> "Jet":
        if isinstance(other, Jet):
            if other._x0 != self._x0 or other.order != self.order:
                raise JetMismatch(
                    f"Несовместимые струи: x0={self._x0}/{other._x0}, "
                    f"порядок={self.order}/{other.order}"
                )
            return other
        return Jet.constant(float(other), self._x0, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        return Jet(self._x0, self._coeffs + other._coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Jet(self._x0, self._coeffs - other._coeffs)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Jet(self._x0, -self._coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self._x0, self._coeffs * float(other))
        other = self._coerce(other)
        return Jet(self._x0, np.convolve(self._coeffs, other._coeffs)[: self.order + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self._x0, self._coeffs / float(other))
        return _divide(self, self._coerce(other))

    def __rtruediv__(self, other):
        return _divide(self._coerce(other), self)

    def __pow__(self, r: Scalar):
        return power(self, r)

    def __repr__(self) -> str:
        coeffs = ", ".join(f"{c:.6g}" for c in self._coeffs)
        return f"Jet(x0={self._x0:g}, [{coeffs}])"


def _divide(a: Jet, b: Jet) -> Jet:
    """Деление рядов: q_k = (a_k - Σ_{j=1..k} b_j q_{k-j}) / b_0"""
    scale = float(np.max(np.abs(b.coeffs)))
    b0 = float(b.coeffs[0])
    if scale == 0.0 or abs(b0) < EPS_DIV_FACTOR * scale:
        raise SingularDivision(b.x0)

    K = a.order
    q = np.zeros(K + 1)
    bc = b.coeffs
    ac = a.coeffs
    for k in range(K + 1):
        acc = ac[k]
        if k:
            acc -= float(np.dot(bc[1 : k + 1], q[k - 1 :: -1][:k]))
        q[k] = acc / b0
    return Jet(a.x0, q)


def jet_variable(x0: float, K: int) -> Jet:
    """Струя тождественной функции x в точке x0"""
    if K < 0:
        raise JetMismatch(f"Порядок струи должен быть >= 0 (получено {K})")
    return Jet.variable(x0, K)


def jet_arith(op: str, a: Jet, b: Jet) -> Jet:
    """
    Арифметика двух струй с одинаковыми x0 и порядком

    Args:
        op: "add" | "sub" | "mul" | "div"
        a, b: Струи

    Returns:
        Струя результата, усечённая до порядка K
    """
    b = a._coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"Неизвестная операция: {op}")


# ----------------------------------------------------------------------
# Элементарные функции
# ----------------------------------------------------------------------


def exp(a: Jet) -> Jet:
    """b = exp(a): b_k = (1/k) Σ_{j=1..k} j a_j b_{k-j}"""
    K = a.order
    ac = a.coeffs
    b = np.zeros(K + 1)
    b[0] = math.exp(ac[0])
    for k in range(1, K + 1):
        j = np.arange(1, k + 1)
        b[k] = float(np.dot(j * ac[1 : k + 1], b[k - 1 :: -1][:k])) / k
    return Jet(a.x0, b)


def log(a: Jet) -> Jet:
    """b = ln(a): b_k = (a_k - (1/k) Σ_{j=1..k-1} j b_j a_{k-j}) / a_0"""
    a0 = float(a.coeffs[0])
    if not a0 > 0.0:
        raise DomainError(f"ln требует положительного основания (a_0={a0!r}, x0={a.x0!r})")
    K = a.order
    ac = a.coeffs
    b = np.zeros(K + 1)
    b[0] = math.log(a0)
    for k in range(1, K + 1):
        acc = ac[k]
        if k > 1:
            j = np.arange(1, k)
            acc -= float(np.dot(j * b[1:k], ac[k - 1 : 0 : -1])) / k
        b[k] = acc / a0
    return Jet(a.x0, b)


def sinh_cosh(a: Jet):
    """Совместная рекурсия для пары (sinh(a), cosh(a))"""
    K = a.order
    ac = a.coeffs
    s = np.zeros(K + 1)
    c = np.zeros(K + 1)
    s[0] = math.sinh(ac[0])
    c[0] = math.cosh(ac[0])
    for k in range(1, K + 1):
        ja = np.arange(1, k + 1) * ac[1 : k + 1]
        s[k] = float(np.dot(ja, c[k - 1 :: -1][:k])) / k
        c[k] = float(np.dot(ja, s[k - 1 :: -1][:k])) / k
    return Jet(a.x0, s), Jet(a.x0, c)


def sinh(a: Jet) -> Jet:
    return sinh_cosh(a)[0]


def cosh(a: Jet) -> Jet:
    return sinh_cosh(a)[1]


def tanh(a: Jet) -> Jet:
    s, c = sinh_cosh(a)
    return s / c


def sech(a: Jet) -> Jet:
    return 1.0 / cosh(a)


def power(a: Jet, r: Scalar) -> Jet:
    """
    a^r: целые степени умножением, дробные через exp(r·ln a)

    Raises:
        DomainError: неположительное основание при нецелом r
    """
    r = float(r)
    if r.is_integer() and abs(r) <= 64:
        n = int(abs(r))
        result = Jet.constant(1.0, a.x0, a.order)
        base = a
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return 1.0 / result if r < 0 else result
    a0 = float(a.coeffs[0])
    if not a0 > 0.0:
        raise DomainError(
            f"Дробная степень r={r} требует положительного основания (a_0={a0!r}, x0={a.x0!r})"
        )
    return exp(log(a) * r)


_ELEMENTARY = {
    "exp": exp,
    "ln": log,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "sech": sech,
}


def jet_elementary(kind: str, a: Jet, r: Optional[float] = None) -> Jet:
    """
    Элементарная функция от струи

    Args:
        kind: exp | ln | sinh | cosh | tanh | sech | pow_r
        a: Аргумент
        r: Показатель для pow_r

    Returns:
        Струя kind(a(x))
    """
    if not np.all(np.isfinite(a.coeffs)):
        raise DomainError(f"Аргумент содержит нечисловые коэффициенты (x0={a.x0!r})")
    if kind == "pow_r":
        if r is None:
            raise ValueError("pow_r требует показатель r")
        return power(a, r)
    try:
        return _ELEMENTARY[kind](a)
    except KeyError:
        raise ValueError(f"Неизвестная элементарная функция: {kind}") from None


# ----------------------------------------------------------------------
# Полиномы и ОДУ
# ----------------------------------------------------------------------


def polyval(coefficients: Sequence[float], a: Jet) -> Jet:
    """Полином Σ p_i a^i по схеме Горнера (коэффициенты по возрастанию степени)"""
    result = Jet.constant(0.0, a.x0, a.order)
    for p in reversed(list(coefficients)):
        result = result * a + p
    return result


@dataclass(frozen=True)
class PolyODE:
    """y' = P(y), P задан коэффициентами по возрастанию степени"""

    coefficients: tuple
    y0: float
    x0: float = 0.0

    def rhs(self, y: float) -> float:
        return float(np.polynomial.polynomial.polyval(y, self.coefficients))


def jet_ode_propagate(ode: PolyODE, x0: float, K: int) -> Jet:
    """
    Струя решения y' = P(y), y(x0) = ode.y0

    Коэффициенты: c_{j+1} = [P(y)]_j / (j+1); [P(y)]_j зависит только от c_0..c_j.
    """
    c = np.zeros(K + 1)
    c[0] = ode.y0
    for j in range(K):
        partial = Jet(x0, c[: j + 1])
        c[j + 1] = polyval(ode.coefficients, partial).coeffs[j] / (j + 1)
    return Jet(x0, c)

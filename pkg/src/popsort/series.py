"""Truncated formal power series over exact rationals.

Coefficients are `fractions.Fraction` values (arbitrary precision, always
reduced with positive denominator), indexed 0..order.  Binary operations
truncate to the smaller order.  Division strips common leading zeros and
refuses anything that would need negative powers.

On top of the arithmetic sit two independent expansions of the counting
series of the permutations sortable by a pop stack feeding a stack: the
closed form

    (1 - 3x + 2x^2 - sqrt(1 - 6x + 5x^2)) / (2x(2 - x))

and the fixed point of

    f = x + f^2/(1+f) + xf/(1-x) + (xf)^2 / ((1-x)(1-x-xf)),

whose agreement (and agreement with brute-force counts) is checked by the
test suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("a power series needs at least the constant term")
        object.__setattr__(
            self, "coeffs", tuple(Fraction(c) for c in self.coeffs)
        )

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __str__(self) -> str:
        terms = [f"{c}*x^{n}" for n, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"

    @staticmethod
    def from_coeffs(values: Sequence[Scalar], order: int | None = None) -> "PowerSeries":
        """Series with the given low-order coefficients, zero-padded."""
        coeffs = [Fraction(v) for v in values]
        if order is not None:
            if order + 1 < len(coeffs):
                coeffs = coeffs[: order + 1]
            coeffs.extend([Fraction(0)] * (order + 1 - len(coeffs)))
        return PowerSeries(tuple(coeffs))

    @staticmethod
    def constant(value: Scalar, order: int) -> "PowerSeries":
        return PowerSeries.from_coeffs([value], order)

    @staticmethod
    def x(order: int) -> "PowerSeries":
        return PowerSeries.from_coeffs([0, 1], order)

    def _coerce(self, other) -> "PowerSeries | None":
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PowerSeries.constant(other, self.order)
        return None

    def __add__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return PowerSeries(tuple(self.coeffs[k] + o.coeffs[k] for k in range(n + 1)))

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "PowerSeries":
        return (-self) + other

    def __mul__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        out = []
        for k in range(n + 1):
            out.append(sum((a[t] * b[k - t] for t in range(k + 1)), Fraction(0)))
        return PowerSeries(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        kb = next((k for k, c in enumerate(b) if c), None)
        if kb is None:
            raise ZeroDivisionError("division by the zero series")
        if kb:
            ka = next((k for k, c in enumerate(a) if c), len(a))
            if ka < kb:
                raise ValueError(
                    f"division needs {kb} leading zero(s) in the dividend, found {ka}"
                )
            a = a[kb:]
            b = b[kb:]
        n = min(len(a), len(b)) - 1
        inv0 = 1 / Fraction(b[0])
        q: list[Fraction] = []
        for k in range(n + 1):
            acc = a[k] - sum((q[t] * b[k - t] for t in range(k)), Fraction(0))
            q.append(acc * inv0)
        return PowerSeries(tuple(q))

    def __rtruediv__(self, other) -> "PowerSeries":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def sqrt(self) -> "PowerSeries":
        """The square root with constant term 1 (required of the input too)."""
        a = self.coeffs
        if a[0] != 1:
            raise ValueError(f"sqrt needs constant term 1, got {a[0]}")
        s: list[Fraction] = [Fraction(1)]
        for k in range(1, len(a)):
            acc = a[k] - sum((s[t] * s[k - t] for t in range(1, k)), Fraction(0))
            s.append(acc / 2)
        return PowerSeries(tuple(s))

    def truncate(self, order: int) -> "PowerSeries":
        if order >= self.order:
            return PowerSeries(self.coeffs + (Fraction(0),) * (order - self.order))
        return PowerSeries(self.coeffs[: order + 1])

    def integer_coefficients(self) -> list[int]:
        """Coefficients as ints; raises if any is not integral."""
        out = []
        for n, c in enumerate(self.coeffs):
            if c.denominator != 1:
                raise ValueError(f"coefficient of x^{n} is not an integer: {c}")
            out.append(c.numerator)
        return out


def closed_form(terms: int) -> PowerSeries:
    """The sortable-count series from its closed form, to order `terms`.

    The numerator vanishes at x=0, cancelling the factor x in the
    denominator; the result is checked to have nonnegative integer
    coefficients and zero constant term (the series counts nonempty
    permutations).
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    order = terms + 1  # one extra order survives the shift in the division
    radicand = PowerSeries.from_coeffs([1, -6, 5], order)
    numerator = PowerSeries.from_coeffs([1, -3, 2], order) - radicand.sqrt()
    denominator = PowerSeries.from_coeffs([0, 4, -2], order)  # 2x(2-x)
    f = numerator / denominator
    coeffs = f.integer_coefficients()
    if f[0] != 0 or any(c < 0 for c in coeffs):
        raise AssertionError(f"closed form produced invalid coefficients {coeffs}")
    return f


def _rhs(f: PowerSeries, x: PowerSeries) -> PowerSeries:
    xf = x * f
    return x + (f * f) / (1 + f) + xf / (1 - x) + (xf * xf) / ((1 - x) * (1 - x - xf))


def fixed_point(terms: int) -> PowerSeries:
    """The same series as the unique fixed point of its defining equation.

    Iterates f <- rhs(f) from f = 0; every term of the right side has
    positive order in x or in f, so each round fixes at least one more
    coefficient and `terms` rounds suffice.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    x = PowerSeries.x(terms)
    f = PowerSeries.constant(0, terms)
    for _ in range(terms + 2):
        nxt = _rhs(f, x)
        if nxt == f:
            return f
        f = nxt
    raise AssertionError(f"fixed-point iteration did not settle within {terms + 2} rounds")


class SeriesComponents(NamedTuple):
    sum_part: PowerSeries          # sum decomposable members: f^2/(1+f)
    skew_part: PowerSeries         # skew decomposable members: xf/(1-x)
    alternation_part: PowerSeries  # inflations of parallel alternations


def components(terms: int) -> SeriesComponents:
    """The three structural component series built from the closed form."""
    f = closed_form(terms)
    x = PowerSeries.x(terms)
    xf = x * f
    return SeriesComponents(
        sum_part=(f * f) / (1 + f),
        skew_part=xf / (1 - x),
        alternation_part=(xf * xf) / ((1 - x) * (1 - x - xf)),
    )

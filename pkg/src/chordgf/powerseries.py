"""Truncated univariate power series with exact coefficients.

Coefficients live in :class:`~chordgf.poly.Poly` (rationals are constant
polynomials), so the same code handles numeric and symbolic series.  Division
by a coefficient is only possible when that coefficient is a monomial.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import Poly


def _c(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(Fraction(x))


class NonInvertibleCoefficient(ZeroDivisionError):
    pass


def _inv_coeff(c: Poly) -> Poly:
    if not c.is_unit():
        raise NonInvertibleCoefficient(f"coefficient {c!r} is not invertible")
    return c.inverse()


class PowerSeries1:
    """``sum_{i <= order} coeffs[i] * z**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [_c(x) for x in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            cs = (cs + [Poly.const(0)] * (order + 1))[: order + 1]
        if not cs:
            raise ValueError("a series needs at least the constant term")
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int) -> "PowerSeries1":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries1":
        return cls([1], order)

    @classmethod
    def z(cls, order: int) -> "PowerSeries1":
        return cls([0, 1], order)

    def __getitem__(self, i: int) -> Poly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Poly.const(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __repr__(self) -> str:
        return f"PowerSeries1({list(self.coeffs)!r}, order={self.order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries1):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None  # type: ignore[assignment]

    def truncate(self, order: int) -> "PowerSeries1":
        return PowerSeries1(self.coeffs, order)

    def _order_with(self, other: "PowerSeries1") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, PowerSeries1):
            other = PowerSeries1([other], self.order)
        n = self._order_with(other)
        return PowerSeries1([self[i] + other[i] for i in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries1([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, PowerSeries1):
            other = PowerSeries1([other], self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PowerSeries1):
            c = _c(other)
            return PowerSeries1([a * c for a in self.coeffs])
        n = self._order_with(other)
        out = [Poly.const(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return PowerSeries1(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PowerSeries1":
        if e < 0:
            return self.inverse() ** (-e)
        out = PowerSeries1.one(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __truediv__(self, other):
        if isinstance(other, PowerSeries1):
            return self * other.inverse()
        return self * _inv_coeff(_c(other))

    def shift_down(self, k: int = 1) -> "PowerSeries1":
        """Divide by ``z**k``; the dropped coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError(f"series is not divisible by z^{k}")
        return PowerSeries1(self.coeffs[k:] or [0])

    def shift_up(self, k: int = 1) -> "PowerSeries1":
        """Multiply by ``z**k`` keeping the order."""
        return PowerSeries1([0] * k + list(self.coeffs), self.order)

    def inverse(self) -> "PowerSeries1":
        """Multiplicative inverse; the constant term must be a monomial."""
        a0inv = _inv_coeff(self.coeffs[0])
        out = [a0inv]
        for n in range(1, self.order + 1):
            acc = Poly.const(0)
            for i in range(1, n + 1):
                acc = acc + self.coeffs[i] * out[n - i]
            out.append(-acc * a0inv)
        return PowerSeries1(out)

    def sqrt(self) -> "PowerSeries1":
        """Square root with constant term 1 (requires constant term 1)."""
        if self.coeffs[0] != 1:
            raise ValueError("sqrt needs constant term 1")
        out = [Poly.const(1)]
        half = Fraction(1, 2)
        for n in range(1, self.order + 1):
            acc = self.coeffs[n]
            for i in range(1, n):
                acc = acc - out[i] * out[n - i]
            out.append(acc * half)
        return PowerSeries1(out)

    def compose(self, inner: "PowerSeries1") -> "PowerSeries1":
        """``self(inner(z))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0]:
            raise ValueError("inner series must have zero constant term")
        n = self._order_with(inner)
        inner = inner.truncate(n)
        out = PowerSeries1([self.coeffs[n] if n < len(self.coeffs) else 0], n)
        # Horner
        for i in range(n - 1, -1, -1):
            out = out * inner + self[i]
        return out

    def reversion(self) -> "PowerSeries1":
        """Compositional inverse by Lagrange inversion.

        Needs zero constant term and a monomial linear coefficient:
        ``[u^n] f^{-1} = (1/n) [z^{n-1}] (z / f(z))^n``.
        """
        if self.coeffs[0]:
            raise ValueError("compositional inverse needs zero constant term")
        if self.order < 1:
            return PowerSeries1([0])
        n = self.order
        phi = self.shift_down(1).truncate(n - 1).inverse()  # z / f(z)
        out = [Poly.const(0)]
        power = PowerSeries1.one(n - 1)
        for m in range(1, n + 1):
            power = power * phi
            out.append(power[m - 1] * Fraction(1, m))
        return PowerSeries1(out)

    def evaluate(self, values) -> "PowerSeries1":
        """Substitute numeric values for the coefficient symbols."""
        return PowerSeries1([Poly.const(c.evaluate(values)) for c in self.coeffs])

    def rationals(self) -> list[Fraction]:
        if not all(c.is_constant() for c in self.coeffs):
            raise ValueError("series has symbolic coefficients")
        return [c.constant() for c in self.coeffs]

    def to_json(self) -> list:
        """Exact coefficients: ``"num/den"`` strings, or term lists when symbolic."""
        out = []
        for c in self.coeffs:
            if c.is_constant():
                out.append(str(c.constant()))
            else:
                out.append(repr(c))
        return out


def from_sequence(values: Sequence, order: int | None = None) -> PowerSeries1:
    return PowerSeries1(values, order if order is not None else len(values) - 1)

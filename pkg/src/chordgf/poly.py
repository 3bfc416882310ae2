"""Sparse Laurent polynomials over the rationals in named symbols.

Used as the coefficient ring for specialisations (``q``, ``s``, ``N``, ``p``,
``y``...) and for symbolic power-series work.  Only monomials are invertible.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple  # sorted tuple of (symbol, nonzero exponent)

_ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for v, e in b:
        r = acc.get(v, 0) + e
        if r:
            acc[v] = r
        else:
            del acc[v]
    return tuple(sorted(acc.items()))


def _mono_pow(a: Monomial, n: int) -> Monomial:
    return tuple((v, e * n) for v, e in a) if n else _ONE


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        t: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    t[m] = c
        self.terms = t

    @classmethod
    def _wrap(cls, terms: dict) -> "Poly":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, c) -> "Poly":
        c = Fraction(c)
        return cls._wrap({_ONE: c} if c else {})

    @classmethod
    def symbol(cls, name: str, exp: int = 1) -> "Poly":
        return cls._wrap({((name, exp),) if exp else _ONE: Fraction(1)})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], c=1) -> "Poly":
        m = tuple(sorted((v, e) for v, e in exps.items() if e))
        return cls({m: c})

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly.const(x)

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            r = out.get(m, 0) + c
            if r:
                out[m] = r
            else:
                out.pop(m, None)
        return Poly._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return Poly._wrap({})
            return Poly._wrap({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                r = out.get(m, 0) + ca * cb
                if r:
                    out[m] = r
                else:
                    out.pop(m, None)
        return Poly._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            return self.inverse() ** (-n)
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return Poly._wrap({_mono_pow(m, n): c ** n})
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * Poly.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Poly.coerce(other) * self.inverse()

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def inverse(self) -> "Poly":
        if len(self.terms) != 1:
            raise ZeroDivisionError("only monomials are invertible in the Laurent ring")
        (m, c), = self.terms.items()
        return Poly._wrap({_mono_pow(m, -1): 1 / c})

    # comparisons ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    # inspection -----------------------------------------------------------
    def symbols(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def is_constant(self) -> bool:
        return all(m == _ONE for m in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get(_ONE, Fraction(0))

    def degree(self, var: str) -> int:
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def min_degree(self, var: str) -> int:
        return min((dict(m).get(var, 0) for m in self.terms), default=0)

    def coefficient(self, var: str, exp: int) -> "Poly":
        """Coefficient of ``var**exp`` as a polynomial in the other symbols."""
        out: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(var, 0) == exp:
                d.pop(var, None)
                out[tuple(sorted(d.items()))] = c
        return Poly._wrap(out)

    def coefficients(self, var: str, order: int) -> list["Poly"]:
        """``[coefficient(var, 0), ..., coefficient(var, order)]``."""
        buckets: list[dict] = [dict() for _ in range(order + 1)]
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(var, 0)
            if 0 <= e <= order:
                buckets[e][tuple(sorted(d.items()))] = c
        return [Poly._wrap(b) for b in buckets]

    def evaluate(self, values: Mapping[str, object]):
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for name, e in m:
                v = v * Fraction(values[name]) ** e
            total += v
        return total

    def substitute(self, values: Mapping[str, object]) -> "Poly":
        """Substitute some symbols by ring elements (Poly or rational)."""
        total = Poly._wrap({})
        for m, c in self.terms.items():
            rest = []
            v: object = Poly.const(c)
            for name, e in m:
                if name in values:
                    v = v * Poly.coerce(values[name]) ** e
                else:
                    rest.append((name, e))
            total = total + v * Poly._wrap({tuple(rest): Fraction(1)})
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: tuple((v, -e) for v, e in mc[0])):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [
            {"monomial": [[v, e] for v, e in m], "num": c.numerator, "den": c.denominator}
            for m, c in sorted(self.terms.items())
        ]


def poly_sum(items: Iterable) -> Poly:
    out = Poly._wrap({})
    for x in items:
        out = out + x
    return out


def parse_poly(text: str, symbols: Iterable[str]) -> Poly:
    """Parse a polynomial written with ``+``, ``*``, ``^`` and parentheses.

    Intended for golden data such as ``"q s^6 + (6q+9q^2)s^4 + 5"``; implicit
    multiplication between adjacent factors is allowed.  Symbols are single
    tokens from ``symbols``.
    """
    syms = sorted(symbols, key=len, reverse=True)
    tokens: list[str] = []
    i = 0
    text = text.replace(" ", "")
    while i < len(text):
        ch = text[i]
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        if ch in "+-*^()":
            tokens.append(ch)
            i += 1
            continue
        for s in syms:
            if text.startswith(s, i):
                tokens.append(s)
                i += len(s)
                break
        else:
            raise ValueError(f"unexpected character {ch!r} in {text!r}")

    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def expr() -> Poly:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        val = term() * sign
        while peek() in ("+", "-"):
            op = take()
            t = term()
            val = val + t if op == "+" else val - t
        return val

    def term() -> Poly:
        val = factor()
        while peek() is not None and peek() not in ("+", "-", ")"):
            if peek() == "*":
                take()
            val = val * factor()
        return val

    def factor() -> Poly:
        tok = take()
        if tok == "(":
            val = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
        elif tok.isdigit():
            val = Poly.const(int(tok))
        else:
            val = Poly.symbol(tok)
        if peek() == "^":
            take()
            val = val ** int(take())
        return val

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return result

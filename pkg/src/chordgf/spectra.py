"""Spectra, diagram types and sparse generating-function slices.

A :class:`Spectrum` is a finite multiset of non-negative integers stored as a
sorted tuple of ``(index, multiplicity)`` pairs.  It is used for backbone,
boundary point, boundary length and vertex spectra alike, and as the exponent
vector of a monomial in the variables ``s_i`` / ``t_i``.

A :class:`Series` is one y-degree slice of a generating function: a mapping
``(x_exponent, s_spectrum, t_spectrum) -> Fraction``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping


class Spectrum(tuple):
    """Immutable multiset of indices, canonical (sorted, no zero entries)."""

    __slots__ = ()

    def __new__(cls, entries: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = entries
        acc: dict[int, int] = {}
        for i, m in items:
            if i < 0:
                raise ValueError(f"negative spectrum index {i}")
            if m < 0:
                raise ValueError(f"negative multiplicity {m} at index {i}")
            if m:
                acc[i] = acc.get(i, 0) + m
        return tuple.__new__(cls, sorted(acc.items()))

    @classmethod
    def _raw(cls, pairs) -> "Spectrum":
        # pairs already canonical
        return tuple.__new__(cls, pairs)

    @classmethod
    def e(cls, i: int, mult: int = 1) -> "Spectrum":
        return cls._raw(((i, mult),)) if mult else EMPTY

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "Spectrum":
        """Spectrum counting the occurrences of each value."""
        acc: dict[int, int] = {}
        for v in values:
            acc[v] = acc.get(v, 0) + 1
        return cls(acc)

    def __repr__(self) -> str:
        if not self:
            return "0"
        parts = []
        for i, m in self:
            parts.append(f"e{i}" if m == 1 else f"{m}e{i}")
        return "+".join(parts)

    def __getitem__(self, i):  # type: ignore[override]
        raise TypeError("use Spectrum.get(index) or iterate over pairs")

    def get(self, i: int) -> int:
        for j, m in self:
            if j == i:
                return m
            if j > i:
                break
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(tuple.__iter__(self))

    def size(self) -> int:
        return sum(m for _, m in self)

    def weight(self) -> int:
        return sum(i * m for i, m in self)

    def max_index(self) -> int:
        return tuple.__getitem__(self, -1)[0] if self else -1

    def shift(self, i: int, delta: int) -> "Spectrum":
        """Return the spectrum with ``delta`` added to multiplicity at ``i``.

        Raises ValueError if the result would be negative.
        """
        out = []
        done = False
        for j, m in self:
            if j == i:
                m += delta
                done = True
                if m < 0:
                    raise ValueError("spectrum subtraction below zero")
                if m:
                    out.append((j, m))
            else:
                if not done and j > i:
                    if delta < 0:
                        raise ValueError("spectrum subtraction below zero")
                    out.append((i, delta))
                    done = True
                out.append((j, m))
        if not done:
            if delta < 0:
                raise ValueError("spectrum subtraction below zero")
            if delta:
                out.append((i, delta))
        return Spectrum._raw(tuple(out))

    def adjust(self, deltas: Mapping[int, int]) -> "Spectrum":
        """Apply several multiplicity changes at once; fails below zero."""
        acc = dict(tuple.__iter__(self))
        for i, d in deltas.items():
            r = acc.get(i, 0) + d
            if r < 0:
                raise ValueError("spectrum subtraction below zero")
            if r:
                acc[i] = r
            else:
                acc.pop(i, None)
        return Spectrum._raw(tuple(sorted(acc.items())))

    def __add__(self, other: "Spectrum") -> "Spectrum":  # type: ignore[override]
        if not isinstance(other, Spectrum):
            return NotImplemented
        acc = dict(tuple.__iter__(self))
        for i, m in other:
            acc[i] = acc.get(i, 0) + m
        return Spectrum._raw(tuple(sorted(acc.items())))

    def __sub__(self, other: "Spectrum") -> "Spectrum":
        acc = dict(tuple.__iter__(self))
        for i, m in other:
            r = acc.get(i, 0) - m
            if r < 0:
                raise ValueError("spectrum subtraction below zero")
            if r:
                acc[i] = r
            else:
                acc.pop(i, None)
        return Spectrum._raw(tuple(sorted(acc.items())))

    def __mul__(self, k):  # type: ignore[override]
        raise TypeError("Spectrum does not support tuple repetition")

    def to_json(self) -> list[list[int]]:
        return [[i, m] for i, m in self]

    @classmethod
    def from_json(cls, data) -> "Spectrum":
        return cls((int(i), int(m)) for i, m in data)


EMPTY = Spectrum()


class Orientability(str, Enum):
    ORIENTABLE = "orientable"
    NON_ORIENTABLE = "non-orientable"


@dataclass(frozen=True)
class DiagramType:
    """Type ``{g or h, k, l; b; n; p}`` of a partial chord diagram.

    ``genus`` holds g for orientable types and h (twice the genus or the
    number of cross caps) when ``orientability`` is NON_ORIENTABLE.
    """

    orientability: Orientability
    genus: int
    k: int
    l: int
    b: Spectrum
    n: Spectrum
    p: Spectrum | None = None

    def euler_lhs(self) -> int:
        return self.b.size() - self.k + self.n.size()

    def to_json(self) -> dict:
        d = {
            "orientability": self.orientability.value,
            "g_or_h": self.genus,
            "k": self.k,
            "l": self.l,
            "b": self.b.to_json(),
            "n": self.n.to_json(),
        }
        if self.p is not None:
            d["p"] = self.p.to_json()
        return d


@dataclass(frozen=True)
class LengthType:
    """Complete-diagram type as resolved by the length model.

    The length model tracks only the number of backbones, not their sizes,
    so ``backbones`` replaces the backbone spectrum.
    """

    orientability: Orientability
    genus: int
    k: int
    backbones: int
    p: Spectrum

    @classmethod
    def of(cls, t: DiagramType) -> "LengthType":
        if t.p is None or t.l:
            raise ValueError("only complete diagrams have a length type")
        return cls(t.orientability, t.genus, t.k, t.b.size(), t.p)


def validate_type(t: DiagramType) -> bool:
    """True iff the linear relations among the type data and Euler's relation hold."""
    if t.genus < 0 or t.k < 0 or t.l < 0:
        return False
    if t.b.size() < 1 or t.n.size() < 1:
        return False
    if t.l != t.n.weight():
        return False
    if 2 * t.k + t.l != t.b.weight():
        return False
    if t.p is not None:
        if any(i < 1 for i, _ in t.p):
            return False
        if t.p.size() != t.n.size():
            return False
        if 2 * t.k + t.b.size() != t.p.weight():
            return False
    chi = t.euler_lhs()
    if t.orientability is Orientability.ORIENTABLE:
        return chi == 2 - 2 * t.genus
    return chi == 2 - t.genus


# --------------------------------------------------------------------------
# Series

Key = tuple  # (x_exponent, s Spectrum, t Spectrum)


class Series:
    """Sparse polynomial slice with exact rational coefficients.

    Instances are treated as immutable; ``terms`` must not be mutated after
    construction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, Fraction | int] | None = None):
        clean: dict[Key, Fraction] = {}
        if terms:
            for key, c in terms.items():
                if c:
                    clean[key] = Fraction(c)
        self.terms = clean

    @classmethod
    def _wrap(cls, terms: dict) -> "Series":
        # trusted: no zero coefficients, Fraction values
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, x: int, s: Spectrum, t: Spectrum, c=1) -> "Series":
        return cls({(x, s, t): c})

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Key, Fraction]]:
        for key in sorted(self.terms):
            yield key, self.terms[key]

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return self.terms == other.terms
        return NotImplemented

    def __repr__(self) -> str:
        if not self.terms:
            return "Series(0)"
        parts = [f"{c}*x^{x}*s[{s!r}]*t[{t!r}]" for (x, s, t), c in self]
        return "Series(" + " + ".join(parts) + ")"

    def coefficient_of(self, key: Key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __add__(self, other: "Series") -> "Series":
        return series_add(self, other)

    def __neg__(self) -> "Series":
        return series_scale(self, -1)

    def __sub__(self, other: "Series") -> "Series":
        return series_add(self, series_scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, Series):
            return series_mul(self, other)
        return series_scale(self, other)

    __rmul__ = __mul__

    def fold_x(self) -> "Series":
        """Specialise x = 1 (all x exponents collapse to 0)."""
        out: dict = {}
        for (x, s, t), c in self.terms.items():
            k = (0, s, t)
            out[k] = out.get(k, 0) + c
        return Series._wrap({k: v for k, v in out.items() if v})

    def filter(self, pred) -> "Series":
        return Series._wrap({k: v for k, v in self.terms.items() if pred(k)})

    def to_json(self) -> list[dict]:
        return [
            {"x": x, "s": s.to_json(), "t": t.to_json(), "num": c.numerator, "den": c.denominator}
            for (x, s, t), c in self
        ]

    @classmethod
    def from_json(cls, data) -> "Series":
        return cls(
            {
                (int(d["x"]), Spectrum.from_json(d["s"]), Spectrum.from_json(d["t"])): Fraction(
                    int(d["num"]), int(d["den"])
                )
                for d in data
            }
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def accumulate(acc: dict, key, c) -> None:
    """In-place ``acc[key] += c`` dropping exact zeros."""
    v = acc.get(key)
    if v is None:
        acc[key] = c
    else:
        v += c
        if v:
            acc[key] = v
        else:
            del acc[key]


def series_add(a: Series, b: Series) -> Series:
    out = dict(a.terms)
    for k, c in b.terms.items():
        accumulate(out, k, c)
    return Series._wrap(out)


def series_scale(a: Series, c) -> Series:
    c = Fraction(c)
    if not c:
        return Series._wrap({})
    return Series._wrap({k: v * c for k, v in a.terms.items()})


def series_combine(pairs: Iterable[tuple[object, Series]]) -> Series:
    """Exact linear combination ``sum(c_i * a_i)``."""
    out: dict = {}
    for c, a in pairs:
        c = Fraction(c)
        if not c:
            continue
        for k, v in a.terms.items():
            accumulate(out, k, v * c)
    return Series._wrap(out)


def coefficient_of(s: Series, key: Key) -> Fraction:
    return s.coefficient_of(key)


def series_mul(a: Series, b: Series, t_filter=None) -> Series:
    """Product of two slices; ``t_filter(t)`` may reject product t-monomials."""
    out: dict = {}
    for (xa, sa, ta), ca in a.terms.items():
        for (xb, sb, tb), cb in b.terms.items():
            t = ta + tb
            if t_filter is not None and not t_filter(t):
                continue
            accumulate(out, (xa + xb, sa + sb, t), ca * cb)
    return Series._wrap(out)


def partial_derivative(a: Series, i: int) -> Series:
    """Exact partial derivative with respect to ``s_i``."""
    out: dict = {}
    for (x, s, t), c in a.terms.items():
        m = s.get(i)
        if m:
            accumulate(out, (x, s.shift(i, -1), t), c * m)
    return Series._wrap(out)


def is_count_integral(a: Series, factor_of_key) -> bool:
    """Check ``c * factor_of_key(key)`` is a non-negative integer for every term."""
    for key, c in a.terms.items():
        v = c * factor_of_key(key)
        if v.denominator != 1 or v < 0:
            return False
    return True


def factorial_of_t_size(key) -> int:
    return math.factorial(key[2].size())

"""Free additive and multiplicative convolution on truncated moment sequences.

A distribution is represented by its moment sequence ``M_0 = 1, M_1, ...``
held in a :class:`PowerSeries1` (coefficient of ``z^m`` is ``M_m``).  The
Cauchy transform ``G(z) = sum M_m z^{-m-1}`` is handled in ``w = 1/z`` as
``g(w) = w * M(w)``.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .poly import Poly
from .powerseries import NonInvertibleCoefficient, PowerSeries1


class NonInvertibleFirstMoment(ZeroDivisionError):
    pass


class ZeroLeadingWeight(ValueError):
    pass


def _moments(m: PowerSeries1 | Sequence, order: int | None = None) -> PowerSeries1:
    if not isinstance(m, PowerSeries1):
        m = PowerSeries1(m)
    if order is not None:
        m = m.truncate(order)
    if m[0] != 1:
        raise ValueError("moment sequence must start with M_0 = 1")
    return m


# --------------------------------------------------------------------------
# reference distributions


def semicircle_moments(order: int) -> PowerSeries1:
    """Moments of the standard semicircle: Catalan numbers at even degrees."""
    return PowerSeries1(
        [comb(m, m // 2) // (m // 2 + 1) if m % 2 == 0 else 0 for m in range(order + 1)]
    )


def marchenko_pastur_moments(order: int) -> PowerSeries1:
    """Moments of Marchenko-Pastur with parameter 1: ``M_m = Catalan(m)``."""
    return PowerSeries1([comb(2 * m, m) // (m + 1) for m in range(order + 1)])


def dirac_moments(a, order: int) -> PowerSeries1:
    a = a if isinstance(a, Poly) else Poly.const(Fraction(a))
    return PowerSeries1([a**m for m in range(order + 1)])


def projector_moments(order: int, s="s", q="q") -> PowerSeries1:
    """``q * delta_s + (1 - q) * delta_0``: ``M_0 = 1``, ``M_m = q s^m``.

    ``s`` and ``q`` may be symbol names or numbers.
    """
    s = Poly.symbol(s) if isinstance(s, str) else Poly.coerce(Fraction(s))
    q = Poly.symbol(q) if isinstance(q, str) else Poly.coerce(Fraction(q))
    return PowerSeries1([1] + [q * s**m for m in range(1, order + 1)])


def weights_moments(weights: Sequence, order: int) -> PowerSeries1:
    """``M_0 = 1`` followed by the given weights (zero beyond them)."""
    return PowerSeries1([1] + list(weights)[:order], order)


# --------------------------------------------------------------------------
# R-transform


def r_transform(moments, order: int | None = None) -> PowerSeries1:
    """R-transform to ``order - 1`` from moments up to ``order``.

    With ``g(w) = w M(w)`` the R-transform is ``1 / g^{-1}(u) - 1 / u``.
    """
    m = _moments(moments, order)
    if m.order < 1:
        raise ValueError("need at least one moment beyond M_0")
    g = PowerSeries1([0] + list(m.coeffs))  # w M(w), exact to order + 1
    ginv = g.reversion()  # u + O(u^2)
    ratio = ginv.shift_down(1)  # g^{-1}(u) / u, constant term 1
    return (ratio.inverse() - 1).shift_down(1)


def moments_from_r(r: PowerSeries1) -> PowerSeries1:
    """Solve ``M = 1 + w M R(w M)`` forward, to order ``r.order + 1``."""
    order = r.order + 1
    m = PowerSeries1.one(order)
    rr = r.truncate(order)
    for _ in range(order):
        wm = m.shift_up(1)
        m = wm * rr.compose(wm) + 1
    return m


def free_add(a, b, order: int | None = None) -> PowerSeries1:
    ra = r_transform(a, order)
    rb = r_transform(b, order)
    return moments_from_r(ra + rb)


# --------------------------------------------------------------------------
# S-transform


def _m_series(m: PowerSeries1) -> PowerSeries1:
    # sum_{k>=1} M_k z^k
    return PowerSeries1([0] + list(m.coeffs[1:]), m.order)


def s_transform(moments, order: int | None = None) -> PowerSeries1:
    """``S(z) = (z + 1) / z * M^{-1}(z)`` to ``order - 1``."""
    m = _moments(moments, order)
    if m.order < 1 or not m[1]:
        raise NonInvertibleFirstMoment("first moment is zero")
    try:
        minv = _m_series(m).reversion()
    except NonInvertibleCoefficient as exc:
        raise NonInvertibleFirstMoment(str(exc)) from exc
    return (minv.shift_down(1) * PowerSeries1([1, 1], minv.order - 1))


def moments_from_s(s: PowerSeries1) -> PowerSeries1:
    """Invert the S-transform: ``M^{-1}(z) = z S(z) / (1 + z)``."""
    order = s.order + 1
    one_plus_z = PowerSeries1([1, 1], order)
    minv = s.truncate(order).shift_up(1) * one_plus_z.inverse()
    try:
        m = minv.reversion()
    except NonInvertibleCoefficient as exc:
        raise NonInvertibleFirstMoment(str(exc)) from exc
    return PowerSeries1([1] + list(m.coeffs[1:]), order)


def free_mul(a, b, order: int | None = None) -> PowerSeries1:
    return moments_from_s(s_transform(a, order) * s_transform(b, order))


# --------------------------------------------------------------------------
# genus-zero boundary-length generating function


def genus0_length_gf(weights: Sequence, order: int) -> PowerSeries1:
    """``1 + K^{-1}(z)`` with ``K(z) = z / (1 + z) * S_nu(z)^2 / (1 + z)``.

    ``nu`` is the distribution whose moments are ``1, s_1, s_2, ...``.
    Weights may be numbers or :class:`Poly` values; ``s_1`` must be
    non-zero (and a monomial when symbolic).
    """
    if not weights or not weights[0]:
        raise ZeroLeadingWeight("s_1 must be non-zero")
    nu = weights_moments(weights, order + 1)
    try:
        s_nu = s_transform(nu)  # order `order`
    except NonInvertibleFirstMoment as exc:
        raise ZeroLeadingWeight(str(exc)) from exc
    one_plus_z_inv = PowerSeries1([1, 1], order).inverse()
    s_lambda = s_nu * s_nu * one_plus_z_inv
    kappa = (s_lambda * one_plus_z_inv).shift_up(1)
    return kappa.reversion() + 1

"""Reference tables used by the ``golden`` check suite.

``GENUS0_ONE_BACKBONE``: genus-0, one-backbone point counts specialised at
``s_0 = 1``, ``s_i = q (y s)^i``, ``t = 1``; entry m is the coefficient of
``y^m`` (m vertices on the backbone), a polynomial in ``q`` and ``s``.

``DECAGON_NON_ORIENTABLE``: non-orientable point counts on a single backbone
with 10 vertices at ``x = 1``; entry k is the coefficient of ``y^k`` in the
boundary point variables ``s0..s10``.
"""
from __future__ import annotations

from .poly import Poly, parse_poly

GENUS0_ONE_BACKBONE = [
    "1",
    "q s",
    "q s^2 + 1",
    "q s^3 + 3 q s",
    "q s^4 + (4 q + 2 q^2) s^2 + 2",
    "q s^5 + (5 q + 5 q^2) s^3 + 10 q s",
    "q s^6 + (6 q + 9 q^2) s^4 + (15 q + 15 q^2) s^2 + 5",
    "q s^7 + (7 q + 14 q^2) s^5 + (21 q + 42 q^2 + 7 q^3) s^3 + 35 q s",
    "q s^8 + (8 q + 20 q^2) s^6 + (28 q + 84 q^2 + 28 q^3) s^4 + (56 q + 84 q^2) s^2 + 14",
]

DECAGON_NON_ORIENTABLE = [
    "s10",
    "10s0s8+10s1s7+10s2s6+10s3s5+5s4^2+45s8",
    "45s0^2s6+90s4s0s2+90s3s1s2+325s0s6+300s1s5+285s2s4+1050s6+45s4s1^2+45s0s3^2"
    "+140s3^2+15s2^3+90s0s1s5",
    "1850s0s1s3+360s0^2s1s3+1000s0^2s4+360s0s1^2s2+900s0s2^2+870s1^2s2+4900s4s0"
    "+4100s3s1+120s0^3s4+30s1^4+180s0^2s2^2+1920s2^2+8610s4",
    "1720s0^3s2+2465s0^2s1^2+8890s0^2s2+7940s0s1^2+21930s0s2+420s0^3s1^2+210s0^4s2"
    "+9120s1^2+22905s2",
    "42s0^6+386s0^5+2290s0^4+7150s0^3+12143s0^2+8229s0",
]

DECAGON_SYMBOLS = [f"s{i}" for i in range(11)]

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]


def genus0_one_backbone() -> list[Poly]:
    return [parse_poly(t, ["q", "s"]) for t in GENUS0_ONE_BACKBONE]


def decagon_non_orientable() -> list[Poly]:
    return [parse_poly(t, DECAGON_SYMBOLS) for t in DECAGON_NON_ORIENTABLE]

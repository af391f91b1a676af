"""Published Butcher tableaux used as golden data.

Stages are stored in the printed row order. The 5-stage arrays carry 14
printed decimals, so they are only good to about 5e-15 per entry.
"""
from __future__ import annotations

from math import cos, pi, sin, sqrt

import numpy as np

from .tableau import ButcherTableau

PRINTED_DIGITS_TOL = 1e-11


def chebyshev1_family(gamma: float) -> ButcherTableau:
    """One-parameter 3-stage order-4 family built on Chebyshev polynomials of the first kind."""
    r3 = sqrt(3)
    g = gamma
    A = [
        [1 / 9, (10 - 5 * r3) / 36 + 5 * g, (1 - r3) / 9 - 5 * g],
        [(2 + r3) / 18 - 2 * g, 5 / 18, (2 - r3) / 18 + 2 * g],
        [(1 + r3) / 9 + 5 * g, (10 + 5 * r3) / 36 - 5 * g, 1 / 9],
    ]
    b = [2 / 9, 5 / 9, 2 / 9]
    c = [(2 - r3) / 4, 1 / 2, (2 + r3) / 4]
    return ButcherTableau(A, b, c, 4, {"name": "chebyshev1_family", "gamma": gamma})


def chebyshev2_family(gamma: float) -> ButcherTableau:
    """One-parameter 3-stage order-4 family built on Chebyshev polynomials of the second kind."""
    r2 = sqrt(2)
    g = gamma
    A = [
        [1 / 6, (2 - r2) / 12 + g, (1 - r2) / 6 - g],
        [(2 + r2) / 12 - g, 1 / 6, (2 - r2) / 12 + g],
        [(1 + r2) / 6 + g, (2 + r2) / 12 - g, 1 / 6],
    ]
    b = [1 / 3, 1 / 3, 1 / 3]
    c = [(2 - r2) / 4, 1 / 2, (2 + r2) / 4]
    return ButcherTableau(A, b, c, 4, {"name": "chebyshev2_family", "gamma": gamma})


_C1, _C2, _C3 = cos(pi / 7), cos(2 * pi / 7), cos(3 * pi / 7)

_CHEB34_WEIGHTS = [
    (-4 * _C2 + 2 * _C3 + 6) / 21,
    (4 * _C1 - 2 * _C2 + 6) / 21,
    (4 * _C3 + 2 * _C1 + 6) / 21,
]


def chebyshev3_order3() -> ButcherTableau:
    """3-stage order-3 method, third kind, free parameter zero (nodes descending)."""
    C1, C2, C3 = _C1, _C2, _C3
    A = [
        [
            (-2 * C2 + C3 + 3) / 21,
            (-5 * C3 + 10 * C1 - 3 * C2 + 8) / 42,
            (7 * C2 + 3 * C3 + 11 * C1 + 7) / 42,
        ],
        [
            (-7 * C1 - 3 * C2 + 11 * C3 + 7) / 42,
            (2 * C1 - C2 + 3) / 21,
            (5 * C2 + 10 * C3 + 3 * C1 + 8) / 42,
        ],
        [
            (-5 * C1 - 10 * C2 + 3 * C3 + 8) / 42,
            (-7 * C3 + 3 * C1 - 11 * C2 + 7) / 42,
            (2 * C3 + C1 + 3) / 21,
        ],
    ]
    c = [cos(pi / 14) ** 2, cos(3 * pi / 14) ** 2, cos(5 * pi / 14) ** 2]
    return ButcherTableau(A, _CHEB34_WEIGHTS, c, 3, {"name": "chebyshev3_order3"})


def chebyshev4_order3() -> ButcherTableau:
    """3-stage order-3 method, fourth kind, free parameter zero (nodes ascending)."""
    C1, C2, C3 = _C1, _C2, _C3
    A = [
        [
            (C3 - 2 * C2 + 3) / 21,
            (5 * C3 - 2 * C1 - C2 + 4) / 42,
            (-7 * C2 + 5 * C3 - 7 * C1 + 5) / 42,
        ],
        [
            (7 * C1 - 5 * C2 - 7 * C3 + 5) / 42,
            (-C2 + 2 * C1 + 3) / 21,
            (-5 * C2 - 2 * C3 + C1 + 4) / 42,
        ],
        [
            (5 * C1 + 2 * C2 + C3 + 4) / 42,
            (7 * C3 + 5 * C1 + 7 * C2 + 5) / 42,
            (C1 + 2 * C3 + 3) / 21,
        ],
    ]
    c = [sin(pi / 14) ** 2, sin(3 * pi / 14) ** 2, sin(5 * pi / 14) ** 2]
    return ButcherTableau(A, _CHEB34_WEIGHTS, c, 3, {"name": "chebyshev4_order3"})


def chebyshev3_order5() -> ButcherTableau:
    """5-stage order-5 method, third kind, as printed (nodes descending)."""
    c = [0.97974648680725, 0.82743036697264, 0.57115741913664, 0.29229249349906, 0.07937323358441]
    A = [
        [0.03747623733639, 0.18070507027578, 0.36081394100538, 0.26217935275342, 0.13857188543628],
        [0.00959149299247, 0.10361145024822, 0.27748715725495, 0.25379422455134, 0.18294604192566],
        [-0.01473362612077, 0.01652913553394, 0.15076972649890, 0.20914334136652, 0.20944884185805],
        [-0.00900665228370, -0.01747702775642, 0.03209351828198, 0.11702712980307, 0.16965552545413],
        [0.01795717345521, -0.00081320588592, -0.04503780128426, 0.01615161118596, 0.09111545611343],
    ]
    b = [0.07495247467278, 0.20722290049644, 0.30153945299780, 0.23405425960613, 0.18223091222685]
    return ButcherTableau(A, b, c, 5, {"name": "chebyshev3_order5"})


def chebyshev4_order5() -> ButcherTableau:
    """5-stage order-5 method, fourth kind, as printed (nodes ascending)."""
    c = [0.02025351319275, 0.17256963302736, 0.42884258086336, 0.70770750650094, 0.92062676641559]
    A = [
        [0.03747623733639, 0.02651783022066, -0.05927448800758, -0.02812509314729, 0.04365902679057],
        [0.06536098168031, 0.10361145024822, 0.02405229574285, -0.01973996494521, -0.00071512969881],
        [0.08968610079355, 0.19069376496250, 0.15076972649890, 0.02491091823961, -0.02721792963119],
        [0.08395912695648, 0.22469992825286, 0.26944593471582, 0.11702712980307, 0.01257538677272],
        [0.05699530121757, 0.20803610638236, 0.34657725428206, 0.21790264842018, 0.09111545611343],
    ]
    b = [0.07495247467278, 0.20722290049644, 0.30153945299780, 0.23405425960613, 0.18223091222685]
    return ButcherTableau(A, b, c, 5, {"name": "chebyshev4_order5"})


def max_deviation(t: ButcherTableau, ref: ButcherTableau) -> float:
    """Largest entry-wise difference over A, b and c, stages matched by abscissa."""
    if t.s != ref.s:
        return float("inf")
    t = t.permuted(np.argsort(t.c))
    ref = ref.permuted(np.argsort(ref.c))
    return float(
        max(
            np.max(np.abs(t.A - ref.A)),
            np.max(np.abs(t.b - ref.b)),
            np.max(np.abs(t.c - ref.c)),
        )
    )

"""The phi_m(r, p) series, their closed-form brackets, the envelopes for
c0(1/p), and the scan of c0(1/p)/p^3.

    phi_m(r, p) = sum_{i>=0} i^m / ((ip+r+1)(ip+p+r+1)(ip+r+2)(ip+p+r)),   0^0 = 1

converges for m in {0, 1, 2}. Writing x = i + (r+1)/p the denominator is
p^4 (x^2+x)(x^2+x+delta) with delta = (p-1)/p^2 <= 1/4, which pins every
summand between i^m / (p^4 (x+1/2)^4) and i^m / (p^4 x^2 (x+1)^2). Both sides
are compared with telescoping products to bracket the remainder exactly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import ZETA2, ZETA3, ZETA4
from .enclosure import PI, Enclosure
from .trigsums import c0_direct

_U = 2.0**-53
_PHI_SUM_RELERR = 8 * _U
_ZETA = {0: ZETA4, 1: ZETA3, 2: ZETA2}


@dataclass(frozen=True)
class PhiValue:
    m: int
    r: int
    p: int
    enclosure: Enclosure


@dataclass(frozen=True)
class EnvelopeReport:
    p: int
    lower: float
    upper: float
    c0: float
    contained: bool
    scaled_ratio: float

    @property
    def in_window(self) -> bool:
        return 0.0 <= self.scaled_ratio < 0.5

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "lower": self.lower,
            "upper": self.upper,
            "c0": self.c0,
            "contained": self.contained,
            "scaled_ratio": self.scaled_ratio,
        }


def _validate(m: int, r: int, p: int) -> None:
    if m not in (0, 1, 2):
        raise ValueError(f"phi_m converges only for m in {{0, 1, 2}}, got m = {m}")
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if not 0 <= r <= p - 1:
        raise ValueError(f"r must lie in [0, {p - 1}], got {r}")


def phi_summands(r: int, p: int, i0: int, i1: int) -> tuple[np.ndarray, np.ndarray]:
    """Powers i^m (m = 0, 1, 2 as rows) and denominators for i0 <= i < i1."""
    i = np.arange(i0, i1, dtype=np.float64)
    den = (i * p + (r + 1)) * (i * p + (p + r + 1)) * (i * p + (r + 2)) * (i * p + (p + r))
    return np.vstack([np.ones_like(i), i, i * i]), den


def phi_partial(m: int, r: int, p: int, n: int) -> float:
    """sum_{i=0}^{n} i^m / D_i, exactly rounded over float terms."""
    _validate(m, r, p)
    powers, den = phi_summands(r, p, 0, n + 1)
    return math.fsum((powers[m] / den).tolist())


def phi_tail_exact(m: int, r: int, p: int, n: int, method: str = "tight") -> tuple[Fraction, Fraction]:
    """Rational (lo, hi) bracketing sum_{i>n} i^m / D_i.

    ``tight`` uses the telescoping comparisons described in the module
    docstring (width O(n^(m-4))). ``coarse`` uses (ip)^4 < D_i < 81 (ip)^4
    with integral comparison, width O(n^(m-3)).
    """
    _validate(m, r, p)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    p4 = Fraction(p**4)
    if method == "coarse":
        if n < 1:
            raise ValueError("the coarse bracket needs n >= 1")
        e = 3 - m
        hi = 1 / (e * p4 * Fraction(n) ** e)
        lo = 1 / (81 * e * p4 * Fraction(n + 1) ** e)
        return lo, hi
    if method != "tight":
        raise ValueError(f"unknown tail method {method!r}")

    c = Fraction(r + 1, p)
    x0 = n + 1 + c
    if m == 2:
        hi = 1 / x0
    elif m == 1:
        hi = 1 / (2 * (x0 - 1) * x0)
    else:
        hi = 1 / (3 * (x0 - 1) * x0 * (x0 + 1))

    d = c + Fraction(1, 2)
    t0 = n + 1 + d
    if m == 2:
        lo = 1 / t0 - d / ((t0 - 1) * t0)
    elif m == 1:
        s0 = t0 - Fraction(3, 2)
        lo = 1 / (2 * t0 * (t0 + 1)) - d / (3 * s0 * (s0 + 1) * (s0 + 2))
    else:
        lo = 1 / (3 * t0 * (t0 + 1) * (t0 + 2))
    # every summand is positive, so the first one alone is also a lower bound
    i = n + 1
    first = Fraction(i**m, (i * p + r + 1) * (i * p + p + r + 1) * (i * p + r + 2) * (i * p + p + r))
    return max(lo / p4, first), hi / p4


def _phi_from_partial(m: int, r: int, p: int, n: int, s: float, method: str) -> Enclosure:
    lo, hi = phi_tail_exact(m, r, p, n, method)
    return Enclosure.around(s, _PHI_SUM_RELERR * s) + Enclosure.from_fractions(lo, hi)


def phi(m: int, r: int, p: int, n_terms: int = 1000, tail: str = "tight") -> PhiValue:
    """Enclosure of phi_m(r, p) from the terms i <= n_terms plus a remainder bracket.

    With ``n_terms = 0`` only the i = 0 term (0^0 = 1) is summed explicitly.
    """
    _validate(m, r, p)
    if n_terms < 0:
        raise ValueError(f"n_terms must be >= 0, got {n_terms}")
    s = phi_partial(m, r, p, n_terms)
    return PhiValue(m, r, p, _phi_from_partial(m, r, p, n_terms, s, tail))


def phi_bracket(m: int, r: int, p: int) -> Enclosure:
    """The closed-form r-independent bracket for phi_m(r, p)."""
    _validate(m, r, p)
    p4 = float(p) ** 4
    z = _ZETA[m]
    if m == 0:
        lo = 1 / (2 * p * p * (p + 1) * (2 * p - 1)) + z / (81 * p4)
        hi = 1 / (2 * p * (p + 1)) + z / p4
    else:
        lo = z / (81 * p4)
        hi = z / p4
    return Enclosure(lo, hi)


def c0_phi_decomposition(p: int, n_terms: int = 10_000, tail: str = "tight") -> Enclosure:
    """p(p-1)(p-2)/(2 pi) sum_r [p phi_2 + (p+2r+2) phi_1 + (2r+2) phi_0], as an interval."""
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if p == 2:
        return Enclosure.point(0.0)
    total = Enclosure.point(0.0)
    for r in range(p):
        powers, den = phi_summands(r, p, 0, n_terms + 1)
        encl = [
            _phi_from_partial(m, r, p, n_terms, math.fsum((powers[m] / den).tolist()), tail)
            for m in (0, 1, 2)
        ]
        total = total + encl[2] * float(p) + encl[1] * float(p + 2 * r + 2) + encl[0] * float(2 * r + 2)
    scale = Enclosure.point(float(p * (p - 1) * (p - 2))) / (PI * 2.0)
    return scale * total


def envelope_upper(p: int) -> float:
    pre = (p - 1) * (p - 2) / (2 * math.pi)
    return pre * ((ZETA2 + 2 * ZETA3 + ZETA4) / p + 2 * (ZETA3 + ZETA4) / p**2 + 1 + p / 2)


def envelope_lower(p: int) -> float:
    pre = (p - 1) * (p - 2) / (2 * math.pi)
    first = ZETA3 / (81 * p) + (p + 2) * ZETA3 / (81 * p**2) + 1 / ((p + 1) * (2 * p - 1)) + 2 * ZETA4 / (81 * p**2)
    second = ZETA3 / (81 * p**2) + 1 / (2 * (p + 1) * (2 * p - 1)) + ZETA4 / (81 * p**2)
    return pre * first + pre * (p - 1) * second


def envelopes(p: int) -> EnvelopeReport:
    """Upper and lower closed-form envelopes for c0(1/p) against the direct sum."""
    if p < 3:
        raise ValueError(f"p must be >= 3, got {p}")
    lower, upper = envelope_lower(p), envelope_upper(p)
    c0 = c0_direct(1, p)
    return EnvelopeReport(
        p=p,
        lower=lower,
        upper=upper,
        c0=c0,
        contained=lower <= c0 <= upper,
        scaled_ratio=c0 / p**3,
    )


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("COTSUM_THREADS", "1")))
    except ValueError:
        return 1


def limit_scan(p_list: list[int], threads: int | None = None) -> list[EnvelopeReport]:
    """Envelope reports for each p, returned in input order."""
    for p in p_list:
        if p < 3:
            raise ValueError(f"p must be >= 3, got {p}")
    workers = threads or _threads()
    if workers == 1:
        return [envelopes(p) for p in p_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(envelopes, p_list))

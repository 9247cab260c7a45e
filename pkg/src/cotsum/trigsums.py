"""Direct finite evaluation of the cotangent sum c0(q/p), the Vasyunin sum
and the Estermann value at s = 0.

These O(p) sums are the ground truth every series route is compared with.
Angles are always reduced with the exact integer residue (k*q mod p) before
touching floating point, and accumulation is exactly rounded (``math.fsum``)
in a fixed order, so results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RationalFraction:
    q: int
    p: int

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError(f"denominator p must be >= 2, got {self.p}")
        if not 1 <= self.q <= self.p - 1:
            raise ValueError(f"numerator q must lie in [1, {self.p - 1}], got {self.q}")
        if math.gcd(self.q, self.p) != 1:
            raise ValueError(f"q/p = {self.q}/{self.p} is not reduced")


@dataclass(frozen=True)
class EstermannValue:
    re: float
    im: float


def mod_inverse(q: int, p: int) -> int:
    """Inverse of q modulo p via the extended Euclidean algorithm."""
    if p < 2:
        raise ValueError(f"modulus must be >= 2, got {p}")
    old_r, r = q % p, p
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1:
        raise ValueError(f"{q} is not invertible modulo {p}")
    return old_s % p


def _cot_residue(m: int, p: int) -> float:
    """cot(pi * m / p) for an integer residue 0 < m < p.

    The angle is folded into (0, pi/4] with integer arithmetic first
    (oddness about pi/2, then cot(pi/2 - x) = tan(x)), so cot(pi/2) = 0 and
    cot(pi/4) = 1 come out exact.
    """
    sign = 1.0
    if 2 * m > p:
        m, sign = p - m, -1.0
    if 2 * m == p:
        return 0.0
    if 4 * m == p:
        return sign
    if 4 * m < p:
        return sign / math.tan(math.pi * m / p)
    return sign * math.tan(math.pi * (p - 2 * m) / (2 * p))


def c0_direct(q: int, p: int) -> float:
    """c0(q/p) = -sum_{k=1}^{p-1} (k/p) cot(pi k q / p)."""
    RationalFraction(q, p)
    total = math.fsum(k * _cot_residue(k * q % p, p) for k in range(1, p))
    return 0.0 - total / p  # 0.0 - x keeps p = 2 at +0.0


def vasyunin_direct(q: int, p: int) -> float:
    """V(q/p) = sum_{r=1}^{p-1} {r q / p} cot(pi r / p), with {rq/p} = (rq mod p)/p."""
    RationalFraction(q, p)
    return math.fsum((r * q % p) * _cot_residue(r, p) for r in range(1, p)) / p


def estermann_at_zero(q: int, p: int) -> EstermannValue:
    """E_0(0, q/p) = 1/4 + (i/2) c0(q/p)."""
    return EstermannValue(0.25, c0_direct(q, p) / 2)


def c0_closed_form(p: int) -> float | None:
    """Known algebraic values of c0(1/p) for p = 2..6, else ``None``."""
    s3 = math.sqrt(3.0)
    s5 = math.sqrt(5.0)
    table = {
        2: 0.0,
        3: 1 / (3 * s3),
        4: 0.5,
        5: ((s5 - 1) * math.sqrt(5 - s5) + 3 * (s5 + 1) * math.sqrt(5 + s5))
        / (10 * math.sqrt(10.0)),
        6: 7 / (3 * s3),
    }
    return table.get(p)

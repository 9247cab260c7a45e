"""Series for c0(1/p) with rigorous enclosures.

    c0(1/p) = p(p-1)(p-2)/pi * sum_{k>=0} b_k / ((k+1)(k+p+1)(k+2)(k+p))

Partial sums are available in exact rational arithmetic and in floating point
(exactly rounded accumulation in ascending k). The remainder is bracketed
with exact rational bounds, using the identity

    2p * b_k = (k+1)(k+p+1) + (r+1)(p-1-r),    r = k mod p,

whose first part telescopes and whose periodic second part decays like k^-4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

import numpy as np

from . import constants
from .coeffs import b_closed
from .enclosure import PI, Enclosure, round_down, round_up
from .trigsums import vasyunin_direct

DEFAULT_N_CEILING = 10**8
DEFAULT_EXACT_CAP = 10**5

_U = 2.0**-53
# per-term rounding (int -> float, three products, one quotient) plus the
# final rounding of the exactly rounded sum; all terms are positive
_FLOAT_SUM_RELERR = 8 * _U
_CHUNK = 1 << 20


class ToleranceUnreachable(RuntimeError):
    """Requested width not reached within the term ceiling."""

    def __init__(self, message: str, best: "SeriesEvaluation") -> None:
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class PartialSum:
    n: int
    approx: float
    exact: Fraction | None = None
    prefactor_included: bool = True

    def __post_init__(self) -> None:
        if self.exact is not None:
            ref = abs(float(self.exact))
            if abs(self.approx - float(self.exact)) > 1e-12 * max(1.0, ref):
                raise ValueError("approx and exact partial sums disagree")


@dataclass(frozen=True)
class SeriesEvaluation:
    p: int
    n_terms: int
    partial: PartialSum
    tail: Enclosure
    value: Enclosure
    method: str = "series"
    status: str = "ok"
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "method": self.method,
            "n_terms": self.n_terms,
            "partial": self.partial.approx,
            "partial_exact": None if self.partial.exact is None else str(self.partial.exact),
            "prefactor_included": self.partial.prefactor_included,
            "tail": self.tail.as_dict(),
            "value": self.value.as_dict(),
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SeriesEvaluation":
        exact = d.get("partial_exact")
        return cls(
            p=d["p"],
            n_terms=d["n_terms"],
            partial=PartialSum(
                n=d["n_terms"],
                approx=d["partial"],
                exact=None if exact is None else Fraction(exact),
                prefactor_included=d["prefactor_included"],
            ),
            tail=Enclosure(**d["tail"]),
            value=Enclosure(**d["value"]),
            method=d["method"],
            status=d.get("status", "ok"),
        )


def _check_p(p: int, minimum: int = 2) -> None:
    if p < minimum:
        raise ValueError(f"p must be >= {minimum}, got {p}")


def prefactor(p: int) -> int:
    return p * (p - 1) * (p - 2)


def term(k: int, p: int) -> Fraction:
    """b_k / ((k+1)(k+p+1)(k+2)(k+p)) as an exact rational."""
    _check_p(p)
    return Fraction(b_closed(k, p), (k + 1) * (k + p + 1) * (k + 2) * (k + p))


# -- floating-point partial sums ---------------------------------------------


def _term_block(p: int, k0: int, k1: int) -> np.ndarray:
    """Float terms for k0 <= k < k1."""
    k = np.arange(k0, k1, dtype=np.int64)
    r = k % p
    b = ((k + p - r) * (k + r + 2)) // (2 * p)
    kf = k.astype(np.float64)
    den = (kf + 1.0) * (kf + (p + 1)) * (kf + 2.0) * (kf + p)
    return b.astype(np.float64) / den


def _blocks(p: int, n: int):
    for k0 in range(0, n + 1, _CHUNK):
        yield _term_block(p, k0, min(n + 1, k0 + _CHUNK))


def float_series_sum(p: int, n: int, summation: str = "fsum") -> float:
    """sum_{k=0}^{n} term(k, p) in double precision.

    ``fsum`` is exactly rounded over all terms in ascending k; ``pairwise``
    uses numpy's pairwise reduction per block and is meant for benchmarking.
    """
    _check_p(p)
    if n < 0:
        return 0.0
    if n >= 2**31:
        raise ValueError("n too large for the vectorised term kernel")
    if summation == "fsum":
        return math.fsum(itertools.chain.from_iterable(b.tolist() for b in _blocks(p, n)))
    if summation == "pairwise":
        return float(np.sum([np.sum(b) for b in _blocks(p, n)]))
    raise ValueError(f"unknown summation {summation!r}")


def exact_series_sum(p: int, n: int) -> Fraction:
    """sum_{k=0}^{n} term(k, p) as an exact rational."""
    _check_p(p)
    total = Fraction(0)
    for k in range(n + 1):
        total += term(k, p)
    return total


def partial_sum(p: int, n: int, mode: str = "float", exact_cap: int = DEFAULT_EXACT_CAP) -> PartialSum:
    """s_n(p) = p(p-1)(p-2) * sum_{k=0}^{n} term(k, p)."""
    _check_p(p)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    pre = prefactor(p)
    if mode == "exact":
        if n > exact_cap:
            raise ValueError(f"exact mode is capped at n = {exact_cap}")
        exact = pre * exact_series_sum(p, n) if pre else Fraction(0)
        return PartialSum(n=n, approx=float(exact), exact=exact)
    if mode == "float":
        return PartialSum(n=n, approx=pre * float_series_sum(p, n) if pre else 0.0)
    raise ValueError(f"unknown mode {mode!r}")


# -- remainder brackets --------------------------------------------------------


def _harmonic_block(a: int, b: int) -> Fraction:
    """sum_{j=a}^{b} 1/j."""
    return sum((Fraction(1, j) for j in range(a, b + 1)), Fraction(0))


def tail_bounds_exact(p: int, n: int, method: str = "split") -> tuple[Fraction, Fraction]:
    """Rational (lo, hi) with lo <= sum_{k>n} term(k, p) <= hi.

    Both methods share the lower bound b_k >= (k+1)(k+p+1)/(2p), which
    telescopes. ``split`` bounds the periodic remainder by its largest weight
    floor(p^2/4) against a telescoping quartic, giving an O(n^-3) width.
    ``sandwich`` uses b_k <= (k+1)(k+p)/p, also telescoping, O(1/n) width.
    """
    _check_p(p, 3)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lo = _harmonic_block(n + 3, n + p) / (2 * p * (p - 2))
    if method == "split":
        weight = (p * p) // 4
        hi = lo + Fraction(weight, 6 * p * (n + 2) * (n + 3) * (n + 4))
    elif method == "sandwich":
        hi = _harmonic_block(n + 3, n + p + 1) / (p * (p - 1))
    else:
        raise ValueError(f"unknown tail method {method!r}")
    return lo, hi


def tail_enclosure(p: int, n: int, method: str = "split") -> Enclosure:
    """Outward-rounded enclosure of sum_{k>n} term(k, p); requires p >= 3, n >= 1."""
    lo, hi = tail_bounds_exact(p, n, method)
    return Enclosure.from_fractions(lo, hi)


# -- c0(1/p) -------------------------------------------------------------------


def _partial_enclosure(s: float) -> Enclosure:
    return Enclosure.around(s, _FLOAT_SUM_RELERR * s)


def sum_enclosure(ev: SeriesEvaluation) -> Enclosure:
    """Enclosure of the unscaled series sum_k term(k, p) behind an evaluation."""
    if ev.p == 2 or ev.partial.prefactor_included:
        raise ValueError("evaluation carries no unscaled partial sum")
    return _partial_enclosure(ev.partial.approx) + ev.tail


def _scaled(p: int, inner: Enclosure, halve: bool = False) -> Enclosure:
    scale = Enclosure.point(float(prefactor(p))) / PI
    if halve:
        scale = scale * 0.5
    return scale * inner


def _evaluate(p: int, n: int, tail_method: str = "split") -> SeriesEvaluation:
    s = float_series_sum(p, n)
    tail = tail_enclosure(p, n, tail_method)
    value = _scaled(p, _partial_enclosure(s) + tail)
    return SeriesEvaluation(
        p=p,
        n_terms=n,
        partial=PartialSum(n=n, approx=s, prefactor_included=False),
        tail=tail,
        value=value,
    )


def _zero_evaluation(p: int, n: int, method: str) -> SeriesEvaluation:
    zero = Enclosure.point(0.0)
    return SeriesEvaluation(
        p=p,
        n_terms=n,
        partial=PartialSum(n=n, approx=0.0, exact=Fraction(0)),
        tail=zero,
        value=zero,
        method=method,
    )


def c0_series(
    p: int,
    tol: float | None = None,
    n: int | None = None,
    n_ceiling: int = DEFAULT_N_CEILING,
    tail_method: str = "split",
) -> SeriesEvaluation:
    """Enclose c0(1/p) with the series, either to width ``tol`` or with ``n`` terms.

    In tolerance mode the term count is chosen from the remainder bound and
    doubled until the certified width is at most ``tol``. If that needs more
    than ``n_ceiling`` terms, ``ToleranceUnreachable`` is raised carrying the
    enclosure obtained at the ceiling.
    """
    _check_p(p)
    if (tol is None) == (n is None):
        raise ValueError("give exactly one of tol or n")
    if tol is not None and not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if p == 2:
        return _zero_evaluation(p, n if n is not None else 0, "series")
    if n is not None:
        return _evaluate(p, max(n, 1), tail_method)

    scale = prefactor(p) / math.pi
    if tail_method == "split":
        # solve scale * weight / (6p n^3) = tol / 2 for a first guess
        guess = (scale * (p * p // 4) / (3 * p * tol)) ** (1 / 3)
    else:
        guess = scale / (2 * p * tol)
    n_try = max(16, int(guess))
    while True:
        if n_try > n_ceiling:
            best = _evaluate(p, n_ceiling, tail_method)
            best = replace(best, status="tolerance_unreachable")
            raise ToleranceUnreachable(
                f"width {best.value.width:.3e} > {tol:.3e} at the ceiling n = {n_ceiling}",
                best,
            )
        result = _evaluate(p, n_try, tail_method)
        if result.value.width <= tol:
            return result
        n_try *= 2


# -- double series -------------------------------------------------------------


def theta(i: int, r: int, p: int) -> Fraction:
    """(p i^2 + (p+2r+2) i + 2r+2) / ((ip+r+1)(ip+p+r+1)(ip+r+2)(ip+p+r))."""
    _check_p(p)
    if i < 0:
        raise ValueError(f"i must be >= 0, got {i}")
    if not 0 <= r <= p - 1:
        raise ValueError(f"r must lie in [0, {p - 1}], got {r}")
    num = p * i * i + (p + 2 * r + 2) * i + 2 * r + 2
    k = i * p + r
    return Fraction(num, (k + 1) * (k + p + 1) * (k + 2) * (k + p))


def double_partial_exact(p: int, n_blocks: int) -> Fraction:
    """sum_{i < n_blocks} sum_{r < p} theta(i, r) / 2, exactly."""
    total = Fraction(0)
    for i in range(n_blocks):
        for r in range(p):
            total += theta(i, r, p)
    return total / 2


def _theta_float_sum(p: int, i_max: int) -> float:
    i = np.arange(0, i_max + 1, dtype=np.float64)[:, None]
    r = np.arange(0, p, dtype=np.float64)[None, :]
    num = p * i * i + (p + 2 * r + 2) * i + 2 * r + 2
    k = i * p + r
    den = (k + 1) * (k + p + 1) * (k + 2) * (k + p)
    return math.fsum((num / den).ravel().tolist())


def c0_double_series(p: int, i_max: int) -> SeriesEvaluation:
    """Enclose c0(1/p) = p(p-1)(p-2)/(2 pi) sum_{i>=0} sum_{r=0}^{p-1} theta(i, r).

    The remainder after block ``i_max`` is the single-series remainder after
    k = (i_max + 1) p - 1.
    """
    _check_p(p)
    if i_max < 0:
        raise ValueError(f"i_max must be >= 0, got {i_max}")
    if p == 2:
        return _zero_evaluation(p, i_max, "double")
    n = (i_max + 1) * p - 1
    s = _theta_float_sum(p, i_max)
    tail = tail_enclosure(p, n)
    # theta carries 2 b_k in its numerator, hence the extra factor 1/2
    value = _scaled(p, _partial_enclosure(s) + tail * 2.0, halve=True)
    return SeriesEvaluation(
        p=p,
        n_terms=n,
        partial=PartialSum(n=n, approx=s / 2, prefactor_included=False),
        tail=tail,
        value=value,
        method="double",
        meta={"i_max": i_max},
    )


# -- the q = 1 zeta-integral right-hand side -----------------------------------


def _const(name: str) -> Enclosure:
    v = constants.get(name)
    return Enclosure(round_down(v), round_up(v))


def _log_enclosure(p: int) -> Enclosure:
    v = math.log(p)
    return Enclosure(round_down(round_down(v)), round_up(round_up(v)))


def zeta_integral_rhs(p: int, tol: float = 1e-8) -> Enclosure:
    """((p-1)/(2p)) [2(log 2pi - gamma) - log p + p(p-2) S], S the c0(1/p) series."""
    _check_p(p)
    base = (_const("log_two_pi") + _const("gamma") * -1.0) * 2.0 + _log_enclosure(p) * -1.0
    if p > 2:
        base = base + sum_enclosure(c0_series(p, tol=tol)) * float(p * (p - 2))
    return base * (Enclosure.point(float(p - 1)) / float(2 * p))


def zeta_integral_rhs_generic(p: int, slack: float = 1e-12) -> Enclosure:
    """The general (q, p) right-hand side specialised to q = 1.

    (log 2pi - gamma)/2 (1/p + 1) + (p-1)/(2p) log(1/p) - pi/(2p) (V(p/1) + V(1/p)),
    with V(p/1) an empty sum and V(1/p) from the direct cotangent sum, widened
    by ``slack`` relative to cover its rounding.
    """
    _check_p(p)
    v = vasyunin_direct(1, p)
    v_enc = Enclosure.around(v, slack * max(1.0, abs(v)))
    consts = _const("log_two_pi") + _const("gamma") * -1.0
    first = consts * 0.5 * (Enclosure.point(float(p + 1)) / float(p))
    second = _log_enclosure(p) * -1.0 * (Enclosure.point(float(p - 1)) / float(2 * p))
    third = v_enc * PI * -1.0 / float(2 * p)
    return first + second + third

"""Exact integer engine for the coefficients of 1/((1-x)^2 (1-x^p)).

The coefficient b_k is available four independent ways (floor closed form,
recursion in steps of p, Cauchy-product convolution, and the block formula in
k = i*p + r), plus checkers for the finite-difference recurrences and the
generating-function identity. Everything stays in Python integers.
"""

from __future__ import annotations

from typing import Iterator

from .report import FAIL, PASS, AuditReport, Check


def _check_modulus(p: int) -> None:
    if p < 2:
        raise ValueError(f"modulus p must be >= 2, got {p}")


def _check_index(k: int) -> None:
    if k < 0:
        raise ValueError(f"coefficient index must be >= 0, got {k}")


def b_closed(k: int, p: int) -> int:
    """b_k = (k + 1 - (p/2) floor(k/p)) (floor(k/p) + 1), exactly.

    ``f*(f+1)`` is even, so it is halved before multiplying by p and no
    fractional intermediate ever appears for odd p.
    """
    _check_modulus(p)
    _check_index(k)
    f = k // p
    return (k + 1) * (f + 1) - p * ((f * (f + 1)) // 2)


def b_recursive_stream(p: int, n: int) -> Iterator[int]:
    """Yield b_0, ..., b_n using b_k = k+1 (k < p), b_k = b_{k-p} + k + 1."""
    _check_modulus(p)
    _check_index(n)
    window: list[int] = []
    for k in range(n + 1):
        b = k + 1 if k < p else window[k - p] + k + 1
        window.append(b)
        yield b


def b_recursive(p: int, n: int) -> list[int]:
    return list(b_recursive_stream(p, n))


def b_convolution(k: int, p: int) -> int:
    """Sum of (k - j + 1) over the multiples j of p with j <= k."""
    _check_modulus(p)
    _check_index(k)
    return sum(k - j + 1 for j in range(0, k + 1, p))


def b_block(i: int, r: int, p: int) -> int:
    """b_{i*p + r} = (p i^2 + (p + 2r + 2) i + 2r + 2) / 2 for 0 <= r < p."""
    _check_modulus(p)
    if i < 0:
        raise ValueError(f"block index i must be >= 0, got {i}")
    if not 0 <= r <= p - 1:
        raise ValueError(f"remainder r must lie in [0, {p - 1}], got {r}")
    num = p * i * i + (p + 2 * r + 2) * i + 2 * r + 2
    q, odd = divmod(num, 2)
    assert not odd, "block numerator must be even"
    return q


def _second_difference(b: list[int], k: int) -> int:
    return b[k] - 2 * b[k - 1] + b[k - 2]


def check_recurrences(p: int, k_max: int) -> AuditReport:
    """Verify the second-difference recurrences of b_k up to ``k_max``.

    Three identities are checked with closed-form values: the second
    difference vanishes for 2 <= k <= p-1 and k = p+1, equals 1 at k = p, and
    the six-term relation vanishes for p+2 <= k <= k_max. These are also the
    floor-function identities obtained by substituting the closed form.
    Empty ranges pass vacuously.
    """
    _check_modulus(p)
    if k_max < p + 2:
        raise ValueError(f"k_max must be >= p + 2 = {p + 2}, got {k_max}")
    b = [b_closed(k, p) for k in range(k_max + 1)]
    report = AuditReport()

    def record(name: str, ks, expected: int, value) -> None:
        ks = list(ks)
        bad = next((k for k in ks if value(k) != expected), None)
        if bad is None:
            report.add(Check(name, PASS, p=p, detail=f"{len(ks)} values of k"))
        else:
            report.add(
                Check(
                    name,
                    FAIL,
                    p=p,
                    k=bad,
                    detail=f"got {value(bad)}, expected {expected}",
                )
            )

    flat = [k for k in range(2, p)] + [p + 1]
    record("second_difference_zero", flat, 0, lambda k: _second_difference(b, k))
    record("second_difference_at_p", [p], 1, lambda k: _second_difference(b, k))
    record(
        "six_term_relation",
        range(p + 2, k_max + 1),
        0,
        lambda k: _second_difference(b, k) - _second_difference(b, k - p),
    )
    return report


def series_product(coeffs: list[int], p: int) -> list[int]:
    """Multiply a truncated power series by (1 - x)^2 (1 - x^p) = 1 - 2x + x^2 - x^p + 2x^{p+1} - x^{p+2}."""
    factor = {0: 1, 1: -2, 2: 1}
    for d, c in ((p, -1), (p + 1, 2), (p + 2, -1)):
        factor[d] = factor.get(d, 0) + c
    out = [0] * (len(coeffs) + p + 2)
    for i, a in enumerate(coeffs):
        if a:
            for d, c in factor.items():
                out[i + d] += a * c
    return out


def generating_function_selftest(p: int, n: int) -> AuditReport:
    """Check that (b_0 + ... + b_n x^n)(1-x)^2(1-x^p) = 1 + O(x^{n+1})."""
    _check_modulus(p)
    _check_index(n)
    product = series_product([b_closed(k, p) for k in range(n + 1)], p)
    bad = next(
        (d for d in range(n + 1) if product[d] != (1 if d == 0 else 0)), None
    )
    report = AuditReport()
    if bad is None:
        report.add(Check("generating_function", PASS, p=p, k=n, detail=f"degrees 0..{n}"))
    else:
        report.add(
            Check(
                "generating_function",
                FAIL,
                p=p,
                k=bad,
                detail=f"coefficient of x^{bad} is {product[bad]}",
            )
        )
    return report

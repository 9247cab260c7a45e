"""Regenerate the decimal strings embedded in ``cotsum.constants``.

Pure ``decimal`` arithmetic, no third-party dependencies:

* pi by Machin's arctangent formula
* zeta(3) by the central-binomial series 5/2 * sum (-1)^(k+1) / (k^3 C(2k, k))
* gamma by the Brent-McMillan sum A/B - log n (error ~ exp(-4n))

Run ``python scripts/gen_constants.py`` and paste the output into
``src/cotsum/constants.py`` if the digit count ever needs to change.
"""

from __future__ import annotations

import argparse
from decimal import Decimal, getcontext


def arctan_inv(x: int) -> Decimal:
    x2 = x * x
    power = Decimal(1) / x
    total = power
    k = 1
    eps = Decimal(10) ** -(getcontext().prec + 2)
    while True:
        power /= -x2
        term = power / (2 * k + 1)
        if abs(term) < eps:
            return total
        total += term
        k += 1


def compute_pi() -> Decimal:
    return 4 * (4 * arctan_inv(5) - arctan_inv(239))


def compute_zeta3() -> Decimal:
    eps = Decimal(10) ** -(getcontext().prec + 2)
    total = Decimal(0)
    binom = 1
    k = 1
    while True:
        binom = binom * 2 * (2 * k - 1) // k  # C(2k, k)
        term = Decimal(1) / (Decimal(k) ** 3 * binom)
        if term < eps:
            return Decimal(5) / 2 * total
        total += term if k % 2 else -term
        k += 1


def compute_gamma(digits: int) -> Decimal:
    n = digits // 2 + 10
    log_n = Decimal(n).ln()
    a = -log_n
    b = Decimal(1)
    u, v = a, b
    k = 1
    eps = Decimal(10) ** -(getcontext().prec + 2)
    while True:
        b = b * n * n / (k * k)
        a = (a * n * n / k + b) / k
        if b < eps and abs(a) < eps:
            return u / v
        u += a
        v += b
        k += 1


def generate(digits: int = 45) -> dict[str, str]:
    getcontext().prec = 2 * digits + 20
    pi = compute_pi()
    values = {
        "gamma": compute_gamma(digits),
        "log_two_pi": (2 * pi).ln(),
        "zeta2": pi**2 / 6,
        "zeta3": compute_zeta3(),
        "zeta4": pi**4 / 90,
    }
    getcontext().prec = digits
    return {name: str(+value) for name, value in values.items()}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--digits", type=int, default=45)
    args = parser.parse_args()
    for name, text in generate(args.digits).items():
        print(f'    "{name}": "{text}",')


if __name__ == "__main__":
    main()

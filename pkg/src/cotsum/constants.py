"""Mathematical constants used by the zeta-integral identity and the bound
machinery.

Values are embedded as 45-digit decimal strings produced by
``scripts/gen_constants.py``; nothing is computed at import time.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal


@dataclass(frozen=True)
class NamedConstant:
    name: str
    digits: str
    provenance: str

    @property
    def value(self) -> float:
        return float(self.digits)

    def as_decimal(self) -> Decimal:
        return Decimal(self.digits)


_TABLE = {
    c.name: c
    for c in (
        NamedConstant(
            "gamma",
            "0.577215664901532860606512090082402431042159336",
            "Brent-McMillan sum, decimal arithmetic",
        ),
        NamedConstant(
            "log_two_pi",
            "1.83787706640934548356065947281123527972279495",
            "log(2*pi), pi from Machin's formula",
        ),
        NamedConstant(
            "zeta2",
            "1.64493406684822643647241516664602518921894990",
            "pi^2/6",
        ),
        NamedConstant(
            "zeta3",
            "1.20205690315959428539973816151144999076498629",
            "5/2 * sum (-1)^(k+1) / (k^3 C(2k,k))",
        ),
        NamedConstant(
            "zeta4",
            "1.08232323371113819151600369654116790277475095",
            "pi^4/90",
        ),
    )
}

NAMES = tuple(_TABLE)


def lookup(name: str) -> NamedConstant:
    try:
        return _TABLE[name]
    except KeyError:
        raise KeyError(f"unknown constant {name!r}; expected one of {NAMES}") from None


def get(name: str) -> float:
    """Return the named constant rounded to double precision."""
    return lookup(name).value


GAMMA = get("gamma")
LOG_TWO_PI = get("log_two_pi")
ZETA2 = get("zeta2")
ZETA3 = get("zeta3")
ZETA4 = get("zeta4")

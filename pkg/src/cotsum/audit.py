"""Full verification suite behind the ``audit`` command.

Each check yields one ``Check``. A ``fail`` is a hard failure of something
that must hold; a ``finding`` records a measured disagreement with a stated
claim (or an editorial correction) and does not fail the run.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterable, Iterator

from . import bounds, coeffs, series, trigsums
from .constants import GAMMA, LOG_TWO_PI
from .report import FAIL, FINDING, PASS, AuditReport, Check

SERIES_TOL = 1e-8
DIRECT_SLACK = 1e-10
VASYUNIN_TOL = 1e-10
CLOSED_FORM_TOL = 1e-12

# numerical values of sum_k term(k, p) claimed for p = 3..6
_S3 = math.sqrt(3.0)
_S5 = math.sqrt(5.0)
_P5_SURD = (_S5 - 1) * math.sqrt(5 - _S5) + 3 * (_S5 + 1) * math.sqrt(5 + _S5)
SERIES_VALUES = {
    3: math.pi / (18 * _S3),
    4: math.pi / 48,
    5: _P5_SURD * math.pi / (600 * math.sqrt(10.0)),
    6: 7 * math.pi / (360 * _S3),
}


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# -- coefficients --------------------------------------------------------------


def check_coeff_agreement(p: int, k_max: int) -> Check:
    stream = coeffs.b_recursive(p, k_max)
    for k in range(k_max + 1):
        values = (
            coeffs.b_closed(k, p),
            stream[k],
            coeffs.b_convolution(k, p),
            coeffs.b_block(k // p, k % p, p),
        )
        if len(set(values)) != 1:
            return Check("coeff_agreement", FAIL, p=p, k=k, detail=f"methods disagree: {values}")
        if k and values[0] - stream[k - 1] != k // p + 1:
            return Check("coeff_agreement", FAIL, p=p, k=k, detail="first difference is not floor(k/p)+1")
    return Check("coeff_agreement", PASS, p=p, k=k_max, detail="closed = recursive = convolution = block")


def check_recurrences(p: int, k_max: int) -> list[Check]:
    return coeffs.check_recurrences(p, max(k_max, p + 2)).checks


def check_generating_function(p: int, n: int) -> list[Check]:
    return coeffs.generating_function_selftest(p, n).checks


# -- series --------------------------------------------------------------------


def check_rearrangement(p: int, n_blocks: int) -> Check:
    """Exact equality of the block double sum and the single sum, for every N <= n_blocks."""
    single = Fraction(0)
    double = Fraction(0)
    for big_n in range(1, n_blocks + 1):
        i = big_n - 1
        for r in range(p):
            single += series.term(i * p + r, p)
            double += series.theta(i, r, p) / 2
        if single != double:
            return Check("rearrangement_exact", FAIL, p=p, k=big_n, detail="double != single partial sum")
    return Check("rearrangement_exact", PASS, p=p, k=n_blocks * p - 1, detail=f"N = 1..{n_blocks}")


def check_series_direct(p: int) -> Check:
    ev = series.c0_series(p, tol=SERIES_TOL)
    c0 = trigsums.c0_direct(1, p)
    ok = ev.value.width <= SERIES_TOL and ev.value.contains(c0, DIRECT_SLACK)
    return Check(
        "series_contains_direct",
        _status(ok),
        p=p,
        k=ev.n_terms,
        detail=f"width {ev.value.width:.3e}",
        measured={"lo": ev.value.lo, "hi": ev.value.hi, "c0_direct": c0},
    )


def check_double_series(p: int) -> Check:
    ev_single = series.c0_series(p, tol=SERIES_TOL)
    i_max = -(-(ev_single.n_terms + 1) // p) - 1
    ev = series.c0_double_series(p, i_max)
    c0 = trigsums.c0_direct(1, p)
    ok = ev.value.contains(c0, DIRECT_SLACK) and ev.value.intersects(ev_single.value)
    return Check(
        "double_series_contains_direct",
        _status(ok),
        p=p,
        k=ev.n_terms,
        measured={"lo": ev.value.lo, "hi": ev.value.hi, "c0_direct": c0},
    )


def check_closed_forms() -> Iterator[Check]:
    for p in (3, 4, 5, 6):
        c0 = trigsums.c0_direct(1, p)
        closed = trigsums.c0_closed_form(p)
        err = abs(c0 - closed)
        yield Check(
            "closed_form_direct",
            _status(err < CLOSED_FORM_TOL),
            p=p,
            detail=f"|c0 - closed| = {err:.3e}",
            measured={"c0_direct": c0, "closed": closed},
        )
    for p, claimed in SERIES_VALUES.items():
        ev = series.c0_series(p, tol=SERIES_TOL * 1e-2)
        inner = series.sum_enclosure(ev)
        ok = inner.width <= SERIES_TOL and inner.contains(claimed, 1e-15)
        yield Check(
            "closed_form_series_value",
            _status(ok),
            p=p,
            detail=f"sum in [{inner.lo!r}, {inner.hi!r}]",
            measured={"lo": inner.lo, "hi": inner.hi, "claimed": claimed},
        )


def check_zeta_integral(p: int) -> Check:
    """Compare the q = 1 display against the general formula specialised to q = 1."""
    a = series.zeta_integral_rhs(p, tol=SERIES_TOL)
    b = series.zeta_integral_rhs_generic(p)
    gap = (p - 3) / (2 * p) * (LOG_TWO_PI - GAMMA)
    measured = {"display_lo": a.lo, "display_hi": a.hi, "generic_lo": b.lo, "generic_hi": b.hi, "predicted_gap": gap}
    if a.intersects(b) or abs(a.mid - b.mid) <= 2 * SERIES_TOL:
        return Check("zeta_integral_routes", PASS, p=p, detail="both routes agree", measured=measured)
    explained = abs((a.mid - b.mid) - gap) <= 4 * SERIES_TOL
    return Check(
        "zeta_integral_routes",
        FINDING if explained else FAIL,
        p=p,
        detail=(
            "q=1 display differs from the general formula at q=1 by (p-3)/(2p)(log 2pi - gamma); "
            "the two agree only at p = 3"
        ),
        measured=measured,
    )


def finding_sn_integrality() -> Check:
    s = series.partial_sum(3, 0, mode="exact")
    ok = s.exact == Fraction(1, 4)
    return Check(
        "sn_integrality",
        FINDING if ok else FAIL,
        p=3,
        k=0,
        detail=f"s_0(3) = {s.exact} exactly, so s_n(p) is not an integer sequence",
        measured={"exact": str(s.exact)},
    )


def finding_double_sum_index(p: int = 3, n_blocks: int = 5) -> Check:
    single = series.exact_series_sum(p, n_blocks * p - 1)
    double = series.double_partial_exact(p, n_blocks)
    ok = single == double
    return Check(
        "double_sum_index_typo",
        FINDING if ok else FAIL,
        p=p,
        k=n_blocks * p - 1,
        detail=(
            "inner sum indexed r = 0..r-1 over theta(i, j) read as r = 0..p-1 over theta(i, r); "
            "the corrected double sum equals the single sum exactly"
        ),
        measured={"partial_exact": str(single)},
    )


def finding_phi_index(p: int = 3, r: int = 0) -> Check:
    """phi_m converges only for m in {0, 1, 2}; measure the logarithmic growth of phi_3."""
    ns = (10**3, 10**4, 10**5)
    partials = []
    for n in ns:
        powers, den = bounds.phi_summands(r, p, 0, n + 1)
        partials.append(math.fsum((powers[2] * powers[1] / den).tolist()))
    steps = [b - a for a, b in zip(partials, partials[1:])]
    expected = math.log(10) / p**4
    diverges = all(abs(s - expected) < 0.01 * expected for s in steps)
    return Check(
        "phi_convergence_index",
        FINDING if diverges else FAIL,
        p=p,
        detail="convergence stated over the summation index i instead of m; phi_3 grows like log(n)/p^4",
        measured={"phi3_partials": partials, "log10_over_p4": expected},
    )


def finding_algebraicity() -> Check:
    value = math.pi * trigsums.c0_direct(1, 3)
    return Check(
        "pi_c0_algebraic",
        FINDING,
        p=3,
        detail="pi*c0(1/3) = pi/(3*sqrt 3) while c0(1/3) itself is algebraic; claim that pi*c0(1/p) is algebraic not asserted",
        measured={"pi_c0": value},
    )


# -- bounds --------------------------------------------------------------------


def check_phi(p: int, n_terms: int = 1000) -> list[Check]:
    out = []
    for m in (0, 1, 2):
        for r in range(p):
            enc = bounds.phi(m, r, p, n_terms).enclosure
            bracket = bounds.phi_bracket(m, r, p)
            widened = type(bracket)(bracket.lo * (1 - 1e-12), bracket.hi * (1 + 1e-12))
            if enc.is_subset(widened):
                continue
            status = FAIL if not enc.intersects(widened) else FINDING
            out.append(
                Check(
                    "phi_bracket",
                    status,
                    p=p,
                    k=m,
                    detail=f"r={r}: enclosure [{enc.lo!r}, {enc.hi!r}] vs bracket [{bracket.lo!r}, {bracket.hi!r}]",
                )
            )
    if not out:
        out.append(Check("phi_bracket", PASS, p=p, detail="all m in {0,1,2}, r < p"))
    return out


def check_decomposition(p: int) -> Check:
    enc = bounds.c0_phi_decomposition(p, 10_000)
    c0 = trigsums.c0_direct(1, p)
    ev = series.c0_series(p, tol=SERIES_TOL)
    ok = enc.contains(c0, DIRECT_SLACK) and enc.intersects(ev.value)
    return Check(
        "phi_decomposition",
        _status(ok),
        p=p,
        measured={"lo": enc.lo, "hi": enc.hi, "c0_direct": c0},
    )


def check_envelope(p: int) -> list[Check]:
    rep = bounds.envelopes(p)
    return [
        Check(
            "envelope",
            PASS if rep.contained else FINDING,
            p=p,
            detail="lower <= c0 <= upper" if rep.contained else "c0 outside envelope",
            measured=rep.as_dict(),
        ),
        Check(
            "limit_window",
            _status(rep.in_window),
            p=p,
            detail="0 <= c0/p^3 < 1/2",
            measured={"scaled_ratio": rep.scaled_ratio},
        ),
    ]


def finding_limit_conjecture(p_list: Iterable[int] = (10, 100, 1000, 10_000)) -> Check:
    reports = bounds.limit_scan(list(p_list))
    ratios = {str(r.p): r.scaled_ratio for r in reports}
    ok = all(r.in_window for r in reports)
    return Check(
        "limit_conjecture",
        FINDING if ok else FAIL,
        detail="measured c0(1/p)/p^3 only; the conjectured limit 1/2 is not adjudicated",
        measured=ratios,
    )


# -- trig sums -----------------------------------------------------------------


def check_vasyunin(p: int) -> Check:
    worst = 0.0
    for q in range(1, p):
        if math.gcd(q, p) != 1:
            continue
        v = trigsums.vasyunin_direct(q, p)
        c = trigsums.c0_direct(trigsums.mod_inverse(q, p), p)
        worst = max(worst, abs(v + c))
    return Check("vasyunin_relation", _status(worst < VASYUNIN_TOL), p=p, detail=f"max |V + c0| = {worst:.3e}")


def check_antisymmetry(p: int) -> Check:
    worst = 0.0
    for q in range(1, p):
        if math.gcd(q, p) == 1:
            worst = max(worst, abs(trigsums.c0_direct(p - q, p) + trigsums.c0_direct(q, p)))
    return Check(
        "c0_antisymmetry",
        PASS if worst < VASYUNIN_TOL else FINDING,
        p=p,
        detail=f"max |c0((p-q)/p) + c0(q/p)| = {worst:.3e}",
    )


# -- driver --------------------------------------------------------------------


def _per_p_checks(p: int, k_max: int) -> list[Check]:
    out: list[Check] = [check_coeff_agreement(p, k_max)]
    out += check_recurrences(p, k_max)
    out += check_generating_function(p, min(k_max, 500))
    out.append(check_vasyunin(p))
    out.append(check_antisymmetry(p))
    if p >= 3:
        if p <= 10:
            out.append(check_rearrangement(p, 50))
        out.append(check_series_direct(p))
        out.append(check_double_series(p))
        if p <= 30:
            out += check_phi(p)
            out.append(check_decomposition(p))
        out += check_envelope(p)
    if p <= 10:
        out.append(check_zeta_integral(p))
    return out


def run_audit(p_max: int, k_max: int, threads: int = 1) -> Iterator[Check]:
    """Yield every check for 2 <= p <= p_max in a fixed order."""
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    yield from check_closed_forms()
    ps = list(range(2, p_max + 1))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for checks in pool.map(lambda p: _per_p_checks(p, k_max), ps):
                yield from checks
    else:
        for p in ps:
            yield from _per_p_checks(p, k_max)
    yield finding_sn_integrality()
    yield finding_double_sum_index()
    yield finding_phi_index()
    yield finding_algebraicity()
    yield finding_limit_conjecture()


def audit(p_max: int, k_max: int, threads: int = 1) -> AuditReport:
    return AuditReport(list(run_audit(p_max, k_max, threads)))

"""Acceptance gate. Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line.

Run on its own with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import time
import timeit

import numpy as np
import pytest

from cotsum import audit, bounds, coeffs, series
from cotsum.trigsums import c0_direct

S3 = math.sqrt(3)
S5 = math.sqrt(5)
P5_SURD = (S5 - 1) * math.sqrt(5 - S5) + 3 * (S5 + 1) * math.sqrt(5 + S5)


@pytest.fixture
def verdict(capsys):
    def _verdict(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return _verdict


def test_criterion_01_closed_forms(verdict):
    closed = {
        3: 1 / (3 * S3),
        4: 0.5,
        5: P5_SURD / (10 * math.sqrt(10)),
        6: 7 / (3 * S3),
    }
    errors, times = {}, {}
    for p, expected in closed.items():
        errors[p] = abs(c0_direct(1, p) - expected)
        times[p] = min(timeit.repeat(lambda: c0_direct(1, p), number=100, repeat=5)) / 100
    ok = all(e < 1e-12 for e in errors.values()) and all(t < 1e-3 for t in times.values())
    verdict(1, ok, f"max abs error {max(errors.values()):.2e}, max runtime {max(times.values()) * 1e6:.1f} us")


def test_criterion_02_series_identity(verdict):
    start = time.perf_counter()
    bad = []
    worst = 0.0
    for p in range(3, 41):
        ev = series.c0_series(p, tol=1e-8)
        worst = max(worst, ev.value.width)
        if not (ev.value.width <= 1e-8 and ev.value.contains(c0_direct(1, p), 1e-10)):
            bad.append(p)
    elapsed = time.perf_counter() - start
    verdict(2, not bad and elapsed < 300, f"p in [3, 40], max width {worst:.2e}, {elapsed:.2f} s, failures {bad}")


def test_criterion_03_series_values(verdict):
    claimed = {
        3: math.pi / (18 * S3),
        4: math.pi / 48,
        5: P5_SURD * math.pi / (600 * math.sqrt(10)),
        6: 7 * math.pi / (360 * S3),
    }
    bad = []
    for p, value in claimed.items():
        inner = series.sum_enclosure(series.c0_series(p, tol=1e-10))
        if not (inner.width <= 1e-8 and inner.contains(value, 1e-15)):
            bad.append(p)
    verdict(3, not bad, f"p = 3..6 sums enclosed to width 1e-8, failures {bad}")


def test_criterion_04_coefficient_equivalence(verdict):
    bad = []
    for p in range(2, 51):
        stream = coeffs.b_recursive(p, 5000)
        for k in range(5001):
            v = coeffs.b_closed(k, p)
            if not (v == stream[k] == coeffs.b_convolution(k, p) == coeffs.b_block(k // p, k % p, p)):
                bad.append((p, k))
    verdict(4, not bad, f"p in [2, 50], k in [0, 5000], mismatches {bad[:5]}")


def test_criterion_05_recurrences(verdict):
    bad = []
    for p in range(2, 51):
        rep = coeffs.check_recurrences(p, 2000)
        bad += [(c.check, p, c.k) for c in rep.failures]
    verdict(5, not bad, f"second differences and six-term relation, p in [2, 50], k <= 2000, failures {bad[:5]}")


def test_criterion_06_rearrangement(verdict):
    bad = []
    for p in range(3, 11):
        for big_n in range(1, 51):
            if series.double_partial_exact(p, big_n) != series.exact_series_sum(p, big_n * p - 1):
                bad.append((p, big_n))
    verdict(6, not bad, f"exact equality for p in [3, 10], N in [1, 50], mismatches {bad[:5]}")


def _brute_phi(r, p, n=10**6):
    i = np.arange(n + 1, dtype=np.float64)
    d = (i * p + r + 1) * (i * p + p + r + 1) * (i * p + r + 2) * (i * p + p + r)
    partial = [math.fsum((i**m / d).tolist()) for m in (0, 1, 2)]
    # sum_{i>n} i^m / D_i <= p^-4 sum_{i>n} i^(m-4) <= p^-4 n^(m-3) / (3-m)
    remainder = [1 / (p**4 * n ** (3 - m) * (3 - m)) for m in (0, 1, 2)]
    return partial, remainder


def test_criterion_07_phi_brackets(verdict):
    findings, escapes = [], []
    for p in range(3, 31):
        for r in range(p):
            partial, remainder = _brute_phi(r, p)
            for m in (0, 1, 2):
                bracket = bounds.phi_bracket(m, r, p)
                enc = bounds.phi(m, r, p, 1000).enclosure
                if not enc.is_subset(bracket):
                    findings.append((m, r, p))
                # a brute-force value escapes if even its own error bar misses the bracket
                lo, hi = partial[m], partial[m] + remainder[m]
                if hi < bracket.lo or lo > bracket.hi or not (enc.lo <= hi and lo <= enc.hi):
                    escapes.append((m, r, p))
    verdict(7, not escapes, f"m in 0..2, r < p, p in [3, 30]: {len(findings)} findings, {len(escapes)} brute-force escapes")


def test_criterion_08_envelopes_and_window(verdict):
    start = time.perf_counter()
    reps = bounds.limit_scan(list(range(3, 101)))
    elapsed = time.perf_counter() - start
    bad = [r.p for r in reps if not (r.contained and r.in_window)]
    verdict(8, not bad and elapsed < 10, f"p in [3, 100], scan {elapsed * 1e3:.1f} ms, failures {bad}")


def test_criterion_09_audit_findings(verdict):
    rep = audit.audit(20, 2000)
    sn = rep.by_name("sn_integrality")
    names = {c.check for c in rep.findings}
    ok = (
        rep.passed
        and {"sn_integrality", "double_sum_index_typo", "phi_convergence_index"} <= names
        and sn[0].p == 3
        and sn[0].k == 0
        and sn[0].measured["exact"] == "1/4"
    )
    verdict(9, ok, f"{len(rep)} checks, {len(rep.failures)} failures, findings {sorted(names)}")


def test_criterion_10_limit_scan(verdict):
    start = time.perf_counter()
    reps = bounds.limit_scan([10, 100, 1000, 10_000])
    elapsed = time.perf_counter() - start
    ratios = ", ".join(f"p={r.p}: {r.scaled_ratio:.6e}" for r in reps)
    ok = elapsed < 60 and all(r.in_window for r in reps)
    verdict(10, ok, f"{elapsed:.2f} s; measured ratios {ratios}")

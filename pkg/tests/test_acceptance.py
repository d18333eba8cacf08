"""Acceptance gate: one test and one printed PASS/FAIL line per criterion."""
import math
import random
import time

import numpy as np
import pytest

from dhga import sampling as smp
from dhga.lorentz import Certificate, adjoint_matrix, classify_spin, lift
from dhga.multivector import QPrimeSpec
from dhga.parse import parse_mv
from dhga.spinor_ideal import (
    PropertyFailed,
    all_specs,
    build_idempotent,
    check_idempotent_props,
    decompose_S,
    verify_injectivity,
)
from dhga.suites import SuiteConfig, run_suite, violating_matrix

ALL = all_specs((3, 4, 5, 6, 7))
UP_TO_6 = all_specs((3, 4, 5, 6))


def _label(spec):
    return f"n={spec.n} {spec.kind.value}"


@pytest.fixture
def announce(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    return emit


def _suite(name, spec_or_n, trials, parity="even", kind=None, matrix=None, backend="exact"):
    if hasattr(spec_or_n, "kind"):
        n, kind = spec_or_n.n, spec_or_n.kind
    else:
        n = spec_or_n
    return run_suite(SuiteConfig(name, n, kind=kind, trials=trials, seed=2024, parity=parity,
                                 matrix=matrix, backend=backend))


def test_c1_idempotents(announce):
    start = time.perf_counter()
    bad = []
    for spec in ALL:
        try:
            check_idempotent_props(build_idempotent(spec))
        except PropertyFailed as exc:
            bad.append(f"{_label(spec)}: {exc}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    announce("C1 idempotent properties, n=3..7", ok, f"{len(ALL)} specs, {elapsed:.2f}s; {bad or 'all exact'}")
    assert not bad
    assert elapsed < 5


def test_c2_injectivity(announce):
    parts, worst, full = [], 0.0, True
    for spec in ALL:
        start = time.perf_counter()
        rep = verify_injectivity(build_idempotent(spec), strict=False)
        elapsed = time.perf_counter() - start
        if spec.n == 7:
            worst = max(worst, elapsed)
        full &= rep.full
        parts.append(f"{_label(spec)} {rep.rank}/{rep.columns}")
    ok = full and worst < 30
    announce("C2 Y t = 0 implies Y = 0", ok, f"{'; '.join(parts)}; n=7 max {worst:.2f}s")
    assert full
    assert worst < 30


def test_c3_sum2(announce):
    start = time.perf_counter()
    fails = {}
    for spec in ALL:
        rep = _suite("sum2", spec, 100)
        if rep.status != "pass":
            fails[_label(spec)] = rep.counts
    elapsed = time.perf_counter() - start
    ok = not fails and elapsed < 300
    announce("C3 two sums agree on t", ok, f"100 trials x {len(ALL)} specs, {elapsed:.1f}s; failures {fails}")
    assert not fails
    assert elapsed < 300


def _float_orthogonality_error(rng, n):
    s = classify_spin(smp.float_versor(rng, n, 0 if n % 2 == 0 else None))
    p = np.array(adjoint_matrix(s).rows, dtype=float)
    eta = np.diag([1.0] + [-1.0] * n)
    return float(np.max(np.abs(p.T @ eta @ p - eta)))


def test_c4_double_cover(announce):
    details, ok = [], True
    for n in (3, 4, 5):
        exact = _suite("double-cover", n, 100)
        floats = _suite("double-cover", n, 100, backend="float")
        lifted = _suite("lift-roundtrip", n, 100)
        rng = random.Random(n)
        err = max(_float_orthogonality_error(rng, n) for _ in range(100))
        good = all(r.status == "pass" for r in (exact, floats, lifted)) and err <= 1e-10
        ok &= good
        details.append(f"n={n} exact {exact.counts['pass']}/100, float {floats.counts['pass']}/100, "
                       f"lift {lifted.counts['pass']}/100, "
                       f"float max err {err:.1e}")
    announce("C4 double cover and lift round trip", ok, "; ".join(details))
    assert ok


# the worked example: S = (e - e12)/sqrt(2) in Cl(1,3) and its adjoint matrix
EXAMPLE_P = ((1, 0, 0, 0), (0, 0, 1, 0), (0, -1, 0, 0), (0, 0, 0, 1))


def test_c5_worked_example(announce):
    s = parse_mv("1 - e12", 3) * (1 / math.sqrt(2))
    elem = classify_spin(s)
    p = np.array(adjoint_matrix(elem).rows, dtype=float)
    p_err = float(np.max(np.abs(p - np.array(EXAMPLE_P, dtype=float))))
    back = lift(EXAMPLE_P, backend="float").value
    lift_err = min(
        max(abs(float(back[m]) - float(s[m])) for m in set(back.terms) | set(s.terms)),
        max(abs(float(back[m]) + float(s[m])) for m in set(back.terms) | set(s.terms)),
    )
    first = min(back.terms, key=lambda m: (bin(m).count("1"), m))
    ok = elem.certificate is Certificate.SPIN and p_err <= 1e-12 and lift_err <= 1e-9 and back[first] > 0
    announce("C5 worked example", ok,
             f"certificate {elem.certificate.value}, |P - P_ref| {p_err:.1e}, |lift -+ S| {lift_err:.1e}")
    assert elem.certificate is Certificate.SPIN
    assert p_err <= 1e-12
    assert lift_err <= 1e-9
    assert back[first] > 0


def test_c6_decomposition_example(announce):
    q = QPrimeSpec(5, "spinor")
    dec = decompose_S(parse_mv("e + e12 + e45 + e1234 + e012345", 5), q)
    s0_ok = dec.S0 == parse_mv("e + e12", 5)
    s4_ok = dec.term(4) == parse_mv("-e5 + e123 - e01235", 5)
    only = [idx for idx, _ in dec.terms] == [(4,)]
    announce("C6 decomposition example", s0_ok and s4_ok and only,
             f"S0 {'ok' if s0_ok else 'wrong'}, S_4 {'ok' if s4_ok else 'wrong'}, terms {[i for i, _ in dec.terms]}")
    assert s0_ok and s4_ok and only


def test_c7_wavefunction_transform(announce):
    fails = {}
    for spec in ALL:
        rep = _suite("spsi-soundness", spec, 100, parity="both")
        if rep.status != "pass":
            fails[_label(spec)] = rep.counts
    announce("C7 transformed wave function", not fails, f"100 trials x {len(ALL)} specs, both parities; failures {fails}")
    assert not fails


def test_c8_spinor_invariance(announce):
    start = time.perf_counter()
    fails = {}
    for spec in UP_TO_6:
        rep = _suite("spinor-invariance", spec, 50)
        if rep.status != "pass":
            fails[_label(spec)] = rep.counts
    odd = _suite("spinor-invariance", 3, 50, parity="odd")
    if odd.status != "pass":
        fails["n=3 odd S"] = odd.counts
    elapsed = time.perf_counter() - start
    ok = not fails and elapsed < 900
    announce("C8 spinor-approach invariance", ok,
             f"50 trials x {len(UP_TO_6)} specs + 50 odd at n=3, {elapsed:.1f}s; failures {fails}")
    assert not fails
    assert elapsed < 900


def test_c9_tensor_invariance(announce):
    fails, na_ok = {}, True
    for spec in ALL:
        rep = _suite("tensor-invariance", spec, 50)
        by = rep.extra.get("by_matrix", {})
        bad = {name: c["fail"] for name, c in by.items() if c["fail"] or c["not_applicable"]}
        if bad:
            fails[_label(spec)] = bad
        viol = _suite("tensor-invariance", spec, 3, matrix=violating_matrix(spec.n))
        na_ok &= viol.counts == {"pass": 0, "fail": 0, "not_applicable": 3}
    ok = not fails and na_ok
    announce("C9 tensor-approach invariance", ok,
             f"50 trials x {len(ALL)} specs over the fixed family; violating P not applicable: {na_ok}; "
             f"failing members {fails}")
    assert na_ok
    assert not fails


def test_c10_degenerate(announce):
    fails = {}
    for spec in ALL:
        rep = _suite("degenerate", spec, 10)
        if rep.status != "pass":
            fails[_label(spec)] = rep.counts
    announce("C10 degenerate data", not fails, f"zero and constant wave functions, all kinds; failures {fails}")
    assert not fails

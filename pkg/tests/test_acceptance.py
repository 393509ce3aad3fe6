"""Acceptance criteria, one test each, at default budgets.

A single ``check all`` run feeds every criterion; each test also reads the
part it owns.  Run ``python3 tests/test_acceptance.py`` for the bare
pass/fail listing, or let pytest print it in the terminal summary.
"""
import time

import pytest

from indexmap.suites import RunConfig, run_suite

RESULTS: dict = {}

CRITERIA = {
    1: "index additivity, 500 pairs, p in {2,5}, n in {1,2,3}, under 10 s",
    2: "rel_index det route = Smith route (500 pairs); Smith vs minor oracle (200)",
    3: "inf <= L_i <= sup and sup/inf extremal against 50 witnesses (300 pairs)",
    4: "pre-index invariant under admissible trees and I -> I^B -> (I^B)^B (200 diagrams)",
    5: "simplicial identities, Index/face commutation, alpha cocycle (216 S3 + 500 GL2)",
    6: "a_n_comparison on 100 random chains, n <= 3",
    7: "appendix lemmas to degree 4 on four presets; Segal; Gr-tuples 0-coskeletal",
    8: "contraction section on 100 instances; one rejected violation per condition",
    9: "check all at default budgets in under 5 minutes",
}


@pytest.fixture(scope="module")
def full_run():
    start = time.perf_counter()
    report = run_suite("all", RunConfig())
    return report, time.perf_counter() - start


def part(report, name):
    (p,) = [q for q in report.parts if q["suite"] == name]
    return p


def record(num, ok, detail=""):
    RESULTS[num] = (ok, detail)
    return ok


def check_part(full_run, num, name, min_cases, max_ms=None):
    report, _ = full_run
    p = part(report, name)
    ok = p["status"] == "ok" and p["cases"] >= min_cases
    detail = f"{name}: {p['status']}, {p['cases']} cases, {p['elapsed_ms']} ms"
    if max_ms is not None:
        ok = ok and p["elapsed_ms"] < max_ms
    record(num, ok, detail)
    assert not p["failures"], p["failures"][:3]
    assert not p["unresolved"], p["unresolved"][:3]
    assert p["cases"] >= min_cases
    if max_ms is not None:
        assert p["elapsed_ms"] < max_ms


def test_c1_index_additivity(full_run):
    check_part(full_run, 1, "additivity", 500, max_ms=10_000)


def test_c2_oracle_equivalence(full_run):
    check_part(full_run, 2, "oracle", 500)


def test_c3_grassmannian(full_run):
    check_part(full_run, 3, "grassmannian", 300)


def test_c4_splitting_and_rigidity(full_run):
    check_part(full_run, 4, "rigidity", 200)


def test_c5_simplicial_coherence(full_run):
    check_part(full_run, 5, "cocycle", 716)
    check_part(full_run, 5, "simplicial", 100)


def test_c6_an_comparison(full_run):
    check_part(full_run, 6, "an-compare", 100)


def test_c7_appendix(full_run):
    check_part(full_run, 7, "appendix", 14)


def test_c8_contraction(full_run):
    check_part(full_run, 8, "lemma327", 104)


def test_c9_check_all_budget(full_run):
    report, seconds = full_run
    ok = report.ok and seconds < 300
    record(9, ok, f"all: {report.status}, {report.cases} cases, {seconds:.1f} s")
    assert report.ok
    assert seconds < 300


def summary_lines():
    lines = []
    for num, text in CRITERIA.items():
        if num in RESULTS:
            ok, detail = RESULTS[num]
            lines.append(f"[{'PASS' if ok else 'FAIL'}] {num}. {text} ({detail})")
        else:
            lines.append(f"[FAIL] {num}. {text} (not run)")
    return lines


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

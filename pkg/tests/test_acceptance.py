"""Acceptance gate: every shipped claim at its stated tolerance and budget.

Each test runs one full sweep through the public harness and prints a single
ACCEPTANCE line (visible under pytest -rA or on failure) before asserting.
"""

from voronoi_lab.harness import SweepConfig, run_suite


def _line(n, label, reports, cap):
    cases = sum(r.cases for r in reports)
    failures = sum(r.failures for r in reports)
    wall = sum(r.wall_time for r in reports)
    max_rel = max(r.max_rel_error for r in reports)
    ok = failures == 0 and wall < cap
    print(
        f"ACCEPTANCE {n} {label}: {'PASS' if ok else 'FAIL'} "
        f"({cases} cases, {failures} failures, max rel {max_rel:.2e}, "
        f"{wall:.1f}s < {cap}s)",
        flush=True,
    )
    return ok


def test_acceptance_1_gauss_closed_forms():
    rep = run_suite(
        SweepConfig(
            suite="gauss-lemmas",
            ranges={"lemmas": ["2.2", "2.3"]},
            tolerance=1e-9,
        )
    )
    assert _line(1, "gauss-closed-forms", [rep], 30)


def test_acceptance_2_gauss_divisor_average():
    rep = run_suite(
        SweepConfig(suite="gauss-lemmas", ranges={"lemmas": ["2.5"]}, tolerance=1e-9)
    )
    ok = _line(2, "gauss-divisor-average", [rep], 10)
    # the vanishing branch must be exercised and hold at the same tolerance
    zero_branch = [r for r in rep.records if r.rhs == 0]
    assert ok and zero_branch and all(r.passed for r in zero_branch)


def test_acceptance_3_kloosterman_average():
    rep = run_suite(SweepConfig(suite="kloosterman-average", ranges={}, tolerance=1e-8))
    assert _line(3, "kloosterman-average", [rep], 300)


def test_acceptance_4_hecke_recursions():
    rep = run_suite(SweepConfig(suite="hecke", ranges={}, tolerance=1e-10))
    assert _line(4, "hecke-recursions", [rep], 60)


def test_acceptance_5_equivalence_and_collapse():
    rep_e = run_suite(SweepConfig(suite="equivalence", ranges={}, tolerance=1e-10))
    rep_m = run_suite(SweepConfig(suite="mobius", ranges={}, tolerance=1e-10))
    assert _line(5, "equivalence-and-collapse", [rep_e, rep_m], 120)


def test_acceptance_6_side_by_side_series():
    rep = run_suite(
        SweepConfig(
            suite="voronoi-core",
            ranges={"families": ["gl3", "gl2"]},
            tolerance=1e-6,
        )
    )
    assert _line(6, "side-by-side-series", [rep], 300)


def test_acceptance_7_functional_equation():
    rep = run_suite(SweepConfig(suite="lfunc", ranges={}, tolerance=1e-9))
    assert _line(7, "functional-equation", [rep], 30)


def test_acceptance_8_rearrangement_probe():
    rep = run_suite(
        SweepConfig(suite="voronoi-core", ranges={"families": ["z"]}, tolerance=1e-6)
    )
    ok = _line(8, "rearrangement-probe", [rep], 30)
    probed = {
        (rec.parameters["s"], rec.parameters["w"])
        for rec in rep.records
        if rec.parameters["twist"] == "isobaric" and rec.passed
    }
    assert ok and (2.5, 4.0) in probed and (3.0, 3.0) in probed

"""Acceptance suite: every criterion checked exactly (rational arithmetic,
tolerance zero), one pass/fail line printed per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``.  The catalog and the
automorphism enumerations are shared session-wide, so the criteria run in
file order reuse each other's work; criterion 9 reruns the surveys of
criteria 2 and 3 with two workers and compares scrubbed report bytes.
"""

import time
from fractions import Fraction

from grouptwist import (
    Automorphism,
    check_full_quotient_family,
    check_index_bound,
    coset_density_trials,
    identity_automorphism,
    large_intersection_trials,
    power_solution_set,
    twisted_solution_set,
    verify_coset_relation,
    verify_quotient_monotonicity,
)
from grouptwist.reporting import (
    scrubbed_bytes,
    survey_report_document,
    threshold_report_document,
)
from grouptwist.survey import (
    covered_automorphisms,
    survey_c_n,
    verify_splitting_structure,
    verify_threshold_theorem,
)


def report(number, ok, detail):
    print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def _survey64(shared, catalog64):
    if "survey64_w1" not in shared:
        shared["survey64_w1"] = survey_c_n(2, 64, entries=catalog64, workers=1)
    return shared["survey64_w1"]


def _threshold(shared, threshold_entries):
    if "threshold_w1" not in shared:
        shared["threshold_w1"] = verify_threshold_theorem(
            100, entries=threshold_entries, workers=1)
    return shared["threshold_w1"]


def test_criterion_1_unit_densities(d8, s3, c3xc3):
    timings = []

    t0 = time.perf_counter()
    d2 = power_solution_set(d8, 2).density
    timings.append(time.perf_counter() - t0)
    # oracle: brute force over all elements straight off the table
    assert d2 == Fraction(sum(1 for x in range(8) if d8.mul(x, x) == d8.identity), 8)
    assert d2 == Fraction(3, 4)

    t0 = time.perf_counter()
    d3 = twisted_solution_set(s3, identity_automorphism(s3), 3).density
    timings.append(time.perf_counter() - t0)
    oracle = sum(1 for x in range(6)
                 if s3.mul(s3.mul(x, x), x) == s3.identity)
    assert d3 == Fraction(oracle, 6) == Fraction(1, 2)

    swap = Automorphism(c3xc3, [(i % 3) * 3 + i // 3 for i in range(9)])
    t0 = time.perf_counter()
    dswap = twisted_solution_set(c3xc3, swap, 2).density
    timings.append(time.perf_counter() - t0)
    oracle = sum(1 for x in range(9)
                 if c3xc3.mul(x, swap(x)) == c3xc3.identity)
    assert dswap == Fraction(oracle, 9) == Fraction(1, 3)

    ok = max(timings) < 1.0
    report(1, ok, f"densities 3/4, 1/2, 1/3 exact; max runtime "
                  f"{max(timings) * 1000:.2f} ms")


def test_criterion_2_c2_frontier(shared_reports, catalog64):
    rep = _survey64(shared_reports, catalog64)
    fr = rep.frontier
    complete = all(cov == "complete" for _, cov in fr.coverage)
    above = [p for gs in rep.groups for p in gs.pairs
             if Fraction(3, 4) < p.density < 1]
    pair_count = sum(len(gs.pairs) for gs in rep.groups)
    ok = (complete and fr.best_density == Fraction(3, 4) and not above)
    report(2, ok, f"{len(rep.groups)} groups, {pair_count} pairs, complete "
                  f"coverage={complete}, frontier={fr.best_density}, "
                  f"witness={fr.witness_spec}, pairs in (3/4,1): {len(above)}")


def test_criterion_3_thresholds(shared_reports, threshold_entries):
    rep = _threshold(shared_reports, threshold_entries)
    max_scanned = max(e.group.order for e in threshold_entries)
    partial = sum(1 for _, cov in rep.coverage if cov == "partial")
    ok = rep.ok and rep.checked_pairs > 0 and max_scanned == 243
    report(3, ok, f"{rep.checked_pairs} pairs with alpha^3=id over "
                  f"{len(threshold_entries)} groups (to order {max_scanned}, "
                  f"{partial} with partial coverage): "
                  f"{len(rep.violations_7_8)} in (7/8,1), "
                  f"{len(rep.violations_15_16)} in (15/16,1)")


def test_criterion_4_coset_relation(catalog48):
    tuples = 0
    failures = []
    coverage_complete = True
    for entry in catalog48:
        auts, coverage = covered_automorphisms(entry.group)
        coverage_complete &= coverage == "complete"
        for n in (2, 3, 4):
            for alpha in auts:
                if n % alpha.order != 0:
                    continue
                result = verify_coset_relation(entry.group, alpha, n)
                tuples += 1
                if not result.equal:
                    failures.append((str(entry.spec), alpha.key(), n))
    ok = not failures and tuples >= 100 and coverage_complete
    report(4, ok, f"{tuples} (G, alpha, n) tuples to order 48, "
                  f"n in {{2,3,4}}, failures: {len(failures)}")


def test_criterion_5_quotient_monotonicity(catalog48):
    checks = 0
    collapse_checks = 0
    failures = []
    for entry in catalog48:
        group = entry.group
        normals = group.normal_subgroups()
        quotients = {N: group.quotient(N) for N in normals}
        auts, _ = covered_automorphisms(group)
        for n in range(2, 7):
            for alpha in auts:
                if n % alpha.order != 0:
                    continue
                invariant = [N for N in normals
                             if N.is_stabilized_by(alpha.image)]
                for N in invariant:
                    result = verify_quotient_monotonicity(
                        group, alpha, n, N, quotient=quotients[N])
                    checks += 1
                    if not result.ok:
                        failures.append((str(entry.spec), n, N.order))
                family = check_full_quotient_family(group, alpha, n, invariant,
                                                    quotients=quotients)
                collapse_checks += 1
                if not family.ok:
                    failures.append((str(entry.spec), n, "collapse"))
    ok = not failures and checks > 0
    report(5, ok, f"{checks} (G, alpha, n, N) monotonicity checks and "
                  f"{collapse_checks} collapse checks to order 48, "
                  f"failures: {len(failures)}")


def test_criterion_6_hughes_thompson(catalog128):
    checks = 0
    failures = []
    vacuous = 0
    for entry in catalog128:
        for n in range(2, 9):
            result = check_index_bound(entry.group, n)
            checks += 1
            if result.vacuous:
                vacuous += 1
            if not (result.containment_ok and result.bound_ok):
                failures.append((str(entry.spec), n))
    ok = not failures and checks > 0
    report(6, ok, f"{checks} (G, n) index-bound checks to order 128, "
                  f"n in {{2..8}} ({vacuous} vacuous), failures: {len(failures)}")


def test_criterion_7_structure_suite(shared_reports, threshold_entries):
    rep = verify_splitting_structure(100, entries=threshold_entries, workers=1)
    bad = [f for f in rep.findings if not f.ok]
    three_groups = [e for e in threshold_entries if e.group.order == 243]
    ok = rep.ok and rep.full_pairs > 0 and len(three_groups) > 0
    report(7, ok, f"{rep.full_pairs} full (G, alpha) pairs among "
                  f"{rep.checked_pairs} with alpha^3=id (3-groups to 243): "
                  f"all 2-Engel, class <= 3, reversal identity; "
                  f"failures: {len(bad)}")


def test_criterion_8_measure_lemma_trials(catalog128):
    groups = [e.group for e in catalog128 if e.group.order >= 4][:10]
    li_failures = 0
    for group in groups:
        summary = large_intersection_trials(group, draws=1000, seed=2026)
        li_failures += len(summary.failures)

    pairs = []
    for entry in catalog128:
        for N in (entry.group.normal_subgroups()
                  if entry.group.order <= 48 else []):
            if 1 < N.order < entry.group.order:
                pairs.append((entry.group, N))
        if len(pairs) >= 10:
            break
    pairs = pairs[:10]
    cd_failures = 0
    for group, N in pairs:
        summary = coset_density_trials(group, N, draws=500, seed=2026)
        cd_failures += len(summary.failures)

    ok = (li_failures == 0 and cd_failures == 0
          and len(groups) == 10 and len(pairs) == 10)
    report(8, ok, f"10 groups x 1000 intersection draws "
                  f"({li_failures} failures); 10 (G, N) pairs x 500 coset "
                  f"draws ({cd_failures} failures); seed 2026")


def test_criterion_9_determinism(shared_reports, catalog64, threshold_entries):
    survey_w1 = _survey64(shared_reports, catalog64)
    survey_w2 = survey_c_n(2, 64, entries=catalog64, workers=2)
    survey_w1.meta = {"workers": 1, "generated_at": "t1"}
    survey_w2.meta = {"workers": 2, "generated_at": "t2"}
    survey_same = (scrubbed_bytes(survey_report_document(survey_w1))
                   == scrubbed_bytes(survey_report_document(survey_w2)))

    threshold_w1 = _threshold(shared_reports, threshold_entries)
    threshold_w2 = verify_threshold_theorem(100, entries=threshold_entries,
                                            workers=2)
    t1 = threshold_report_document(threshold_w1)
    t2 = threshold_report_document(threshold_w2)
    t1["meta"], t2["meta"] = {"workers": 1}, {"workers": 2}
    threshold_same = scrubbed_bytes(t1) == scrubbed_bytes(t2)

    ok = survey_same and threshold_same
    report(9, ok, f"survey (criterion 2) and threshold (criterion 3) reports "
                  f"byte-identical after scrubbing: survey={survey_same}, "
                  f"threshold={threshold_same}")

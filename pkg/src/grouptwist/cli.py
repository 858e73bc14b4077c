"""Command-line interface.

Exit codes: 0 success, 1 verification failure (a result contradicting a
verified identity or threshold), 2 usage or parse errors.  Errors are
emitted as JSON records on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .automorphisms import (
    Automorphism,
    automorphism_group,
    automorphisms_of_order_dividing,
    identity_automorphism,
)
from .catalog import (
    catalog_hash,
    catalog_manifest,
    enumerate_catalog,
    export_group,
    generate_family,
    import_group,
    parse_spec,
)
from .constructions import (
    check_full_quotient_family,
    coset_density_trials,
    large_intersection_trials,
    semidirect_with_cyclic,
    verify_coset_relation,
    verify_quotient_monotonicity,
)
from .errors import GroupError
from .groups import FiniteGroup
from .reporting import (
    dump_report,
    structure_report_document,
    survey_csv,
    survey_report_document,
    threshold_report_document,
    to_jsonable,
)
from .splitting import (
    check_index_bound,
    format_fraction,
    hughes_thompson_subgroup,
    power_solution_set,
    twisted_solution_set,
)
from .survey import (
    covered_automorphisms,
    default_workers,
    survey_c_n,
    verify_splitting_structure,
    verify_threshold_theorem,
)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


def _error_record(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def _load_group(args) -> FiniteGroup:
    if getattr(args, "group", None):
        return import_group(json.loads(Path(args.group).read_text()))
    if getattr(args, "spec", None):
        return generate_family(parse_spec(args.spec))
    raise GroupError("provide --group FILE or --spec SPEC")


def _load_aut(group: FiniteGroup, path: str | None) -> Automorphism:
    if path is None:
        return identity_automorphism(group)
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict) or "image" not in doc:
        raise GroupError("automorphism document needs an 'image' array")
    return Automorphism(group, doc["image"])


def _write_out(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        print(text)


def _parse_n_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


# ---------------------------------------------------------------------------
# subcommands

def _cmd_survey(args) -> int:
    t0 = time.time()
    report = survey_c_n(args.n, args.max_order,
                        class_restriction="solvable" if args.solvable_only else "all",
                        workers=args.workers)
    report.meta = {"generated_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
                   "elapsed_seconds": round(time.time() - t0, 3),
                   "workers": args.workers, "version": __version__}
    doc = survey_report_document(report)
    if args.out:
        Path(args.out).write_text(dump_report(doc))
    if args.csv:
        Path(args.csv).write_text(survey_csv(report))
    fr = report.frontier
    if fr.empty:
        print(f"empty frontier: every density over the catalog equals 1 "
              f"(n={args.n}, max_order={args.max_order})")
    else:
        print(f"frontier {format_fraction(fr.best_density)} "
              f"witness {fr.witness_spec} n={args.n} "
              f"catalog {fr.catalog_hash[:12]}")
    return EXIT_OK


def _cmd_verify_threshold(args) -> int:
    extra = None if args.three_groups_to <= 0 else (3, args.three_groups_to)
    report = verify_threshold_theorem(args.max_order, extra_p_groups=extra,
                                      workers=args.workers)
    doc = threshold_report_document(report)
    doc["meta"] = {"generated_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
                   "workers": args.workers}
    if args.out:
        Path(args.out).write_text(dump_report(doc))
    print(f"checked {report.checked_pairs} pairs to order {args.max_order}: "
          f"{len(report.violations_7_8)} in (7/8,1), "
          f"{len(report.violations_15_16)} in (15/16,1)")
    return EXIT_OK if report.ok else EXIT_VERIFICATION_FAILED


def _cmd_verify_structure(args) -> int:
    extra = None if args.three_groups_to <= 0 else (3, args.three_groups_to)
    report = verify_splitting_structure(args.max_order, extra_p_groups=extra,
                                        workers=args.workers)
    doc = structure_report_document(report)
    doc["meta"] = {"generated_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
                   "workers": args.workers}
    if args.out:
        Path(args.out).write_text(dump_report(doc))
    bad = [f for f in report.findings if not f.ok]
    print(f"{report.full_pairs} full pairs among {report.checked_pairs} checked; "
          f"{len(bad)} structure failures")
    return EXIT_OK if report.ok else EXIT_VERIFICATION_FAILED


def _relation_tuples(args):
    if args.group or args.spec:
        group = _load_group(args)
        alpha = _load_aut(group, args.aut)
        for n in _parse_n_list(args.n_list) if args.n is None else [args.n]:
            yield group, alpha, n
        return
    for entry in enumerate_catalog(args.max_order):
        group = entry.group
        auts, _ = covered_automorphisms(group)
        for n in _parse_n_list(args.n_list):
            for alpha in auts:
                if n % alpha.order == 0:
                    yield group, alpha, n


def _cmd_verify_relation(args) -> int:
    failures = 0
    count = 0
    for group, alpha, n in _relation_tuples(args):
        report = verify_coset_relation(group, alpha, n)
        count += 1
        if not report.equal:
            failures += 1
            _error_record("CosetRelationFailure", dump_report(to_jsonable(report)))
    print(f"coset relation: {count} tuples checked, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_VERIFICATION_FAILED


def _cmd_verify_monotonicity(args) -> int:
    failures = 0
    count = 0
    collapses = 0
    if args.group or args.spec:
        groups = [_load_group(args)]
    else:
        groups = [e.group for e in enumerate_catalog(args.max_order)]
    for group in groups:
        normals = group.normal_subgroups()
        auts, _ = covered_automorphisms(group)
        for n in _parse_n_list(args.n_list) if args.n is None else [args.n]:
            for alpha in auts:
                if n % alpha.order != 0:
                    continue
                invariant = [N for N in normals if N.is_stabilized_by(alpha.image)]
                for N in invariant:
                    report = verify_quotient_monotonicity(group, alpha, n, N)
                    count += 1
                    if not report.ok:
                        failures += 1
                        _error_record("MonotonicityFailure",
                                      dump_report(to_jsonable(report)))
                family = check_full_quotient_family(group, alpha, n, invariant)
                collapses += 1
                if not family.ok:
                    failures += 1
                    _error_record("QuotientCollapseFailure",
                                  dump_report(to_jsonable(family)))
    print(f"monotonicity: {count} (group, alpha, n, N) checks and "
          f"{collapses} collapse checks, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_VERIFICATION_FAILED


def _cmd_check_lemmas(args) -> int:
    entries = [e for e in enumerate_catalog(args.max_order) if e.group.order >= 2]
    groups = [e.group for e in entries[: args.groups]]
    failures = 0
    for group in groups:
        summary = large_intersection_trials(group, draws=args.draws, seed=args.seed)
        if summary.failures:
            failures += len(summary.failures)
            _error_record("LargeIntersectionFailure",
                          f"{group.name}: {len(summary.failures)} failing draws")
    pairs = []
    for entry in entries:
        for N in entry.group.normal_subgroups():
            if 1 < N.order < entry.group.order:
                pairs.append((entry.group, N))
        if len(pairs) >= args.groups:
            break
    half = max(1, args.draws // 2)
    for group, N in pairs[: args.groups]:
        summary = coset_density_trials(group, N, draws=half, seed=args.seed)
        if summary.failures:
            failures += len(summary.failures)
            _error_record("CosetDensityFailure",
                          f"{group.name}: {len(summary.failures)} failing draws")
    print(f"lemma checks: {len(groups)} groups x {args.draws} draws and "
          f"{min(len(pairs), args.groups)} (group, N) pairs x {half} draws, "
          f"{failures} failures")
    return EXIT_OK if failures == 0 else EXIT_VERIFICATION_FAILED


def _cmd_fraction(args) -> int:
    group = _load_group(args)
    alpha = _load_aut(group, args.aut)
    if alpha.is_identity():
        solutions = power_solution_set(group, args.n)
    else:
        solutions = twisted_solution_set(group, alpha, args.n)
    print(format_fraction(solutions.density))
    return EXIT_OK


def _cmd_hughes(args) -> int:
    group = _load_group(args)
    report = check_index_bound(group, args.n)
    hn = hughes_thompson_subgroup(group, args.n)
    verdict = "vacuous" if report.vacuous else (
        "ok" if report.containment_ok and report.bound_ok else "FAILED")
    print(f"|H_{args.n}| = {hn.order}  index = {report.hn_index}  "
          f"density = {format_fraction(report.density)}  bound {verdict}")
    return EXIT_OK if verdict != "FAILED" else EXIT_VERIFICATION_FAILED


def _cmd_aut(args) -> int:
    group = _load_group(args)
    if args.dividing:
        auts = automorphisms_of_order_dividing(group, args.dividing)
        print(f"{len(auts)} automorphisms of order dividing {args.dividing}")
    else:
        auts = automorphism_group(group)
        print(f"|Aut| = {len(auts)}")
    hist = auts.order_histogram()
    print("order histogram: " + ", ".join(f"{k}: {v}" for k, v in hist.items()))
    return EXIT_OK


def _cmd_semidirect(args) -> int:
    group = _load_group(args)
    alpha = _load_aut(group, args.aut)
    product = semidirect_with_cyclic(group, alpha, args.n)
    doc = export_group(product.product_group)
    doc["convention"] = product.convention
    _write_out(args, json.dumps(doc))
    return EXIT_OK


def _cmd_catalog(args) -> int:
    entries = list(enumerate_catalog(args.max_order,
                                     solvable_only=args.solvable_only,
                                     p_group=args.p_group))
    if args.out:
        Path(args.out).write_text(json.dumps(
            {"manifest": catalog_manifest(entries),
             "hash": catalog_hash(entries)}, indent=1, sort_keys=True))
    for e in entries:
        merged = f" (+{len(e.merged)} merged)" if e.merged else ""
        print(f"{e.group.order:5d}  {e.spec}{merged}")
    print(f"{len(entries)} groups, catalog {catalog_hash(entries)[:12]}")
    return EXIT_OK


def _cmd_import(args) -> int:
    group = import_group(json.loads(Path(args.group).read_text()))
    from .catalog import fingerprint
    fp = fingerprint(group)
    print(f"{group.name}: order {group.order}, exponent {fp.exponent}, "
          f"center {fp.center_order}, derived {fp.derived_order}")
    return EXIT_OK


def _cmd_export(args) -> int:
    group = generate_family(parse_spec(args.spec))
    _write_out(args, json.dumps(export_group(group)))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grouptwist",
        description="twisted power sets and exact density surveys on finite groups")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_group_args(p, aut=True):
        p.add_argument("--group", help="group document (JSON file)")
        p.add_argument("--spec", help="family spec, e.g. dihedral(4)")
        if aut:
            p.add_argument("--aut", help="automorphism document (JSON file)")

    p = sub.add_parser("survey", help="frontier survey for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-order", type=int, default=128)
    p.add_argument("--solvable-only", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write the summary CSV here")
    p.set_defaults(func=_cmd_survey)

    p = sub.add_parser("verify-threshold", help="n = 3 density bands must be empty")
    p.add_argument("--max-order", type=int, default=100)
    p.add_argument("--three-groups-to", type=int, default=243,
                   help="also scan 3-groups to this order (0 disables)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify_threshold)

    p = sub.add_parser("verify-structure",
                       help="full n = 3 solution sets force 2-Engel class <= 3")
    p.add_argument("--max-order", type=int, default=100)
    p.add_argument("--three-groups-to", type=int, default=243)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify_structure)

    p = sub.add_parser("verify-relation", help="coset relation in G : C_n")
    add_group_args(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-list", default="2,3,4")
    p.add_argument("--max-order", type=int, default=48)
    p.set_defaults(func=_cmd_verify_relation)

    p = sub.add_parser("verify-monotonicity", help="quotient density monotonicity")
    add_group_args(p)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-list", default="2-6")
    p.add_argument("--max-order", type=int, default=48)
    p.set_defaults(func=_cmd_verify_monotonicity)

    p = sub.add_parser("check-lemmas", help="seeded random measure-lemma trials")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--groups", type=int, default=10)
    p.add_argument("--max-order", type=int, default=24)
    p.set_defaults(func=_cmd_check_lemmas)

    p = sub.add_parser("fraction", help="exact density of the solution set")
    add_group_args(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_fraction)

    p = sub.add_parser("hughes", help="Hughes-Thompson subgroup and index bound")
    add_group_args(p, aut=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_hughes)

    p = sub.add_parser("aut", help="automorphism count and order histogram")
    add_group_args(p, aut=False)
    p.add_argument("--dividing", type=int, default=None,
                   help="restrict to automorphisms of order dividing this")
    p.set_defaults(func=_cmd_aut)

    p = sub.add_parser("semidirect", help="build G : C_n and export it")
    add_group_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_semidirect)

    p = sub.add_parser("catalog", help="list the deduplicated group corpus")
    p.add_argument("--max-order", type=int, default=64)
    p.add_argument("--solvable-only", action="store_true")
    p.add_argument("--p-group", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("import", help="validate a group document")
    p.add_argument("--group", required=True)
    p.set_defaults(func=_cmd_import)

    p = sub.add_parser("export", help="write a family group to a document")
    p.add_argument("--spec", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_export)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "workers", None) is None and hasattr(args, "workers"):
        args.workers = default_workers()
    try:
        return args.func(args)
    except GroupError as exc:
        _error_record(type(exc).__name__, str(exc))
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        _error_record(type(exc).__name__, str(exc))
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run_cli())

"""Command line surface: build, inspect, compute, compare, verify.

Exit codes: 0 success, 1 expectation mismatch, 2 parse error, 3 build or
certification failure, 4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import catalog
from .barcomplex import hh_via_bar
from .engine import (
    Algebra,
    BuildError,
    NotSelfInjectiveEvidence,
    build,
    nakayama_permutation,
    symmetric_certify,
)
from .fields import Field, FieldError, field_make, parse_field_spec, parse_scalar
from .hochschild import ResolutionMismatchError, extend_resolution, hochschild_report
from .presentation import ParseError, parse_presentation

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_BUILD = 3
EXIT_ORACLE = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _field_for(args, name: str | None) -> Field:
    text = args.field
    if text is None:
        text = catalog.default_field(name) if name else "Q"
    try:
        return field_make(parse_field_spec(text))
    except FieldError as e:
        raise CliError(EXIT_PARSE, f"bad field: {e}") from None


def _params_for(args, field: Field, name: str | None) -> dict:
    params = catalog.default_params(name, field) if name else {}
    for item in args.param or []:
        if "=" not in item:
            raise CliError(EXIT_PARSE, f"--param wants name=value, got {item!r}")
        key, value = item.split("=", 1)
        try:
            params[key.strip()] = parse_scalar(field, value.strip())
        except FieldError as e:
            raise CliError(EXIT_PARSE, f"bad value for parameter {key!r}: {e}") from None
    return params


def _resolve_source(args) -> tuple:
    """Returns (display name, catalog name or None, presentation)."""
    if getattr(args, "catalog", None):
        name = args.catalog
        try:
            return name, name, catalog.get_presentation(name)
        except catalog.CatalogError as e:
            raise CliError(EXIT_PARSE, str(e)) from None
        except ParseError as e:
            raise CliError(EXIT_PARSE, f"catalog source: {e}") from None
    source = getattr(args, "source", None)
    if source is None:
        raise CliError(EXIT_PARSE, "no source: pass a .qa file or --catalog NAME")
    if source in catalog.catalog_names():
        return source, source, catalog.get_presentation(source)
    path = Path(source)
    if not path.exists():
        raise CliError(EXIT_PARSE, f"no such file or catalog entry: {source}")
    try:
        return path.name, None, parse_presentation(path.read_text())
    except ParseError as e:
        raise CliError(EXIT_PARSE, str(e)) from None


def _build_algebra(args) -> tuple:
    display, name, presentation = _resolve_source(args)
    field = _field_for(args, name)
    params = _params_for(args, field, name)
    t0 = time.perf_counter()
    try:
        algebra = build(presentation, field, params, cap=getattr(args, "cap", None))
    except BuildError as e:
        raise CliError(EXIT_BUILD, f"build failed: {e}") from None
    return display, name, algebra, field, params, t0


def _report_base(display, algebra: Algebra, field: Field, params, t0) -> dict:
    return {
        "algebra": display,
        "field": field.spec.describe(),
        "params": {k: field.render(v) for k, v in sorted(params.items())},
        "dim": algebra.dim,
        "cartan": algebra.cartan_matrix(),
        "center_dim": None,
        "hh": None,
        "intermediates": None,
        "oracle": None,
        "structure": None,
        "timing_ms": None,
    }


def _finish(report: dict, t0: float, as_json: bool):
    report["timing_ms"] = int(1000 * (time.perf_counter() - t0))
    if as_json:
        print(json.dumps(report, indent=1, sort_keys=True))


def cmd_info(args) -> int:
    display, name, algebra, field, params, t0 = _build_algebra(args)
    report = _report_base(display, algebra, field, params, t0)
    center_dim, center = algebra.center()
    report["center_dim"] = center_dim
    nak = nakayama_permutation(algebra)
    if isinstance(nak, NotSelfInjectiveEvidence):
        nak_desc = f"undefined ({nak.detail})"
    else:
        verts = algebra.quiver.vertices
        nak_desc = ", ".join(f"{verts[i]}->{verts[j]}" for i, j in enumerate(nak))
    sym = symmetric_certify(algebra)
    report["structure"] = {
        "basis_size": algebra.dim,
        "nakayama": nak_desc,
        "radical_nilpotency": algebra.radical_nilpotency(),
        "symmetric": sym.status,
    }
    _finish(report, t0, args.json)
    if not args.json:
        print(f"algebra {display} over {report['field']}"
              + (f" with {report['params']}" if report["params"] else ""))
        print(f"  dimension      {algebra.dim}")
        print(f"  cartan matrix  {report['cartan']}")
        print(f"  center         dim {center_dim}: "
              + ", ".join(algebra.render_element(z) for z in center))
        print(f"  nakayama       {nak_desc}")
        print(f"  symmetric      {sym.status}" + (f" ({sym.detail})" if sym.detail else ""))
        print(f"  certification  confluent rewriting system, "
              f"{algebra.certification.rule_count} rules, cap {algebra.certification.cap}")
    return EXIT_OK


def cmd_hh(args) -> int:
    display, name, algebra, field, params, t0 = _build_algebra(args)
    report = _report_base(display, algebra, field, params, t0)
    try:
        hoch = hochschild_report(algebra)
    except ResolutionMismatchError as e:
        raise CliError(EXIT_BUILD, str(e)) from None
    report["center_dim"] = hoch.h0
    report["hh"] = list(hoch.hh)
    report["intermediates"] = {
        "hom_p0": hoch.hom_p0,
        "hom_p1": hoch.hom_p1,
        "hom_p2": hoch.hom_p2,
        "ker_delta1": hoch.ker_delta1,
        "hom_omega2": hoch.hom_omega2,
        "dim_p": [hoch.dim_p0, hoch.dim_p1, hoch.dim_p2],
        "ker_d": [hoch.ker_d1, hoch.ker_d2],
    }
    code = EXIT_OK
    if args.oracle:
        bar = hh_via_bar(algebra)
        checked = bar.hh[: 2 if bar.h2 is None else 3]
        agree = tuple(checked) == tuple(hoch.hh[: len(checked)])
        report["oracle"] = {
            "hh": list(bar.hh),
            "cochain_dims": bar.cochain_dims,
            "agrees": agree,
        }
        if not agree:
            code = EXIT_ORACLE
    _finish(report, t0, args.json)
    if not args.json:
        h0, h1, h2 = hoch.hh
        print(f"{display} over {report['field']}"
              + (f" with {report['params']}" if report["params"] else ""))
        print(f"  HH^0 = {h0}   HH^1 = {h1}   HH^2 = {h2}")
        print(f"  hom dims: P0 {hoch.hom_p0}, P1 {hoch.hom_p1}, P2 {hoch.hom_p2}; "
              f"ker delta1 {hoch.ker_delta1}; hom omega2 {hoch.hom_omega2}")
        if report["oracle"]:
            tag = "agrees" if report["oracle"]["agrees"] else "DISAGREES"
            print(f"  bar-complex oracle {report['oracle']['hh']} {tag}")
    if code != EXIT_OK:
        print("oracle disagreement is a hard failure", file=sys.stderr)
    return code


def cmd_compare(args) -> int:
    out = []
    for source in (args.a, args.b):
        sub = argparse.Namespace(
            source=source, catalog=None, field=args.field, param=args.param, cap=args.cap,
            json=False,
        )
        try:
            display, name, algebra, field, params, t0 = _build_algebra(sub)
            hoch = hochschild_report(algebra)
            out.append((display, hoch.hh, None))
        except CliError as e:
            out.append((source, None, str(e)))
    failures = [o for o in out if o[1] is None]
    for display, hh, err in out:
        if err:
            print(f"{display}: build failed: {err}")
    if failures:
        return EXIT_BUILD
    (da, ha, _), (db, hb, _) = out
    markers = []
    for k, label in enumerate(("HH^0", "HH^1", "HH^2")):
        if ha[k] == hb[k]:
            markers.append(f"{label}: {ha[k]} = {hb[k]}")
        elif ha[k] < hb[k]:
            markers.append(f"{label}: {ha[k]} < {hb[k]}")
        else:
            markers.append(f"{label}: {ha[k]} > {hb[k]}")
    print(f"compare {da} vs {db}")
    for m in markers:
        print("  " + m)
    if args.json:
        print(json.dumps({"a": {"algebra": da, "hh": list(ha)},
                          "b": {"algebra": db, "hh": list(hb)}}, sort_keys=True))
    return EXIT_OK


def _verify_one(name: str, field_text: str, mismatches: list) -> dict:
    field = field_make(parse_field_spec(field_text))
    presentation, field, params, expected = catalog.catalog_get(name, field)
    algebra = build(presentation, field, params)
    hoch = hochschild_report(algebra)
    row = {"entry": name, "field": field_text, "checks": {}}

    def check(label, got, want):
        if want is None:
            return
        ok = got == want
        row["checks"][label] = {"got": got, "want": want, "ok": ok}
        if not ok:
            mismatches.append(f"{name}@{field_text}: {label}: computed {got}, expected {want}")

    check("dim", algebra.dim, expected.dim)
    check("cartan", algebra.cartan_matrix(), expected.cartan)
    check("center_dim", hoch.h0, expected.center_dim)
    if expected.hh is not None:
        got = list(hoch.hh)
        want = [w if w is not None else got[k] for k, w in enumerate(expected.hh)]
        check("hh", got, want)
    if expected.intermediates is not None:
        quad = [hoch.hom_p0, hoch.hom_p1, hoch.ker_delta1, hoch.hom_omega2]
        check("intermediates", quad, list(expected.intermediates))
    if expected.nakayama is not None:
        nak = nakayama_permutation(algebra)
        if isinstance(nak, NotSelfInjectiveEvidence):
            got = "undefined"
        else:
            got = "identity" if nak == list(range(algebra.quiver.n_vertices)) else "nonidentity"
        check("nakayama", got, expected.nakayama)
    want_sym = expected.expected_symmetric(field)
    if want_sym is not None:
        check("symmetric", symmetric_certify(algebra).status, want_sym)
    row["ok"] = all(c["ok"] for c in row["checks"].values())
    return row


def cmd_verify(args) -> int:
    names = catalog.catalog_names() if args.all or not args.names else list(args.names)
    for n in names:
        if n not in catalog.catalog_names():
            raise CliError(EXIT_PARSE, f"unknown catalog entry {n!r}")
    mismatches = []
    rows = []
    for name in names:
        for field_text in catalog.designated_fields(name):
            try:
                row = _verify_one(name, field_text, mismatches)
            except BuildError as e:
                row = {"entry": name, "field": field_text, "ok": False, "checks": {}}
                mismatches.append(f"{name}@{field_text}: build failed: {e}")
            rows.append(row)
            if not args.json:
                status = "pass" if row["ok"] else "FAIL"
                parts = []
                for k, v in row["checks"].items():
                    if v["ok"]:
                        parts.append(f"{k}=ok")
                    else:
                        parts.append(f"{k}={v['got']}!={v['want']}")
                print(f"{status:4}  {name:10} {field_text:7} " + ", ".join(parts))
    if args.json:
        print(json.dumps({"rows": rows, "mismatches": mismatches}, indent=1, sort_keys=True))
    if mismatches:
        if not args.json:
            print(f"\n{len(mismatches)} mismatch(es):")
            for m in mismatches:
                print("  " + m)
        return EXIT_MISMATCH
    if not args.json:
        print(f"\nall {len(rows)} entry/field combinations match the expectation table")
    return EXIT_OK


def cmd_resolution(args) -> int:
    display, name, algebra, field, params, t0 = _build_algebra(args)
    try:
        scan = extend_resolution(algebra, args.terms)
    except ValueError as e:
        raise CliError(EXIT_PARSE, str(e)) from None
    except BuildError as e:
        raise CliError(EXIT_BUILD, str(e)) from None
    verts = algebra.quiver.vertices
    rows = []
    for rec in scan.records:
        top = {f"({verts[i]},{verts[j]})": m for (i, j), m in sorted(rec.top.items())}
        rows.append({"degree": rec.degree, "dim_p": rec.dim_p,
                     "dim_omega": rec.dim_omega, "top": top})
    if args.json:
        print(json.dumps({"algebra": display, "field": field.spec.describe(),
                          "records": rows, "complete": scan.complete,
                          "note": scan.note}, indent=1, sort_keys=True))
    else:
        print(f"resolution scan of {display} over {field.spec.describe()}")
        print("  n   dim P_n   dim Omega^n   top multiplicities")
        for r in rows:
            print(f"  {r['degree']:<3} {r['dim_p']:<9} {r['dim_omega']:<13} {r['top']}")
        if scan.note:
            print("  " + scan.note)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hochcalc",
        description="exact Hochschild cohomology dimensions for bound quiver algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_source=True):
        if with_source:
            p.add_argument("source", nargs="?", help=".qa file or catalog name")
            p.add_argument("--catalog", help="catalog entry name")
        p.add_argument("--field", help="Q, GF(p) or GF(p^k)[:modulus]")
        p.add_argument("--param", action="append", help="name=value, repeatable")
        p.add_argument("--cap", type=int, help="completion degree cap override")
        p.add_argument("--json", action="store_true", help="machine-readable output only")

    p = sub.add_parser("info", help="dimensions, Cartan matrix, center, structure verdicts")
    common(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("hh", help="Hochschild cohomology dimensions HH^0..HH^2")
    common(p)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the bar-complex route")
    p.set_defaults(func=cmd_hh)

    p = sub.add_parser("compare", help="side-by-side HH dimensions of two algebras")
    p.add_argument("a")
    p.add_argument("b")
    common(p, with_source=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="recompute catalog entries against expectations")
    p.add_argument("names", nargs="*", help="catalog entries (default: all)")
    p.add_argument("--all", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("resolution", help="minimal-resolution dimension scan")
    common(p)
    p.add_argument("--terms", type=int, default=4)
    p.set_defaults(func=cmd_resolution)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BuildError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUILD


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every command prints one JSON document (sorted keys) on stdout, or writes
it to --out.  Exit codes: 0 pass, 1 an axiom or assertion failed, 2 bad
input, 3 the working precision was exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dieudonne_module as dmod
from . import io as mio
from .gallery import FamilySpec, build_family
from .padic_ring import PrecisionError
from .slopes import deformation_bound_checks, projection_coefficient, slope_samples
from .verification import cutoff_witness, full_report, verify_sweep

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(doc, out=None):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path):
    try:
        return mio.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except mio.ModuleFileError as exc:
        raise InputError(f"{path}: {exc}") from None


def _require_valid(dm):
    rep = dmod.validate(dm)
    if not rep.ok and set(rep.failed) <= set(rep.precision_limited):
        raise PrecisionError("validation ran out of precision: " + ", ".join(rep.failed),
                             recommended_precision=max(rep.precision_limited.values()))
    return rep, rep.ok


# ----------------------------------------------------------------------
# commands


def cmd_validate(args):
    dm = _load(args.file)
    rep, ok = _require_valid(dm)
    doc = {"file": args.file, "validation": rep.to_json()}
    if ok:
        cc = dmod.chain_conditions(dm)
        doc["chain_conditions"] = cc.to_json()
        ok = cc.ok
    _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gallery(args):
    spec = FamilySpec(args.family, args.a, args.b, args.p, args.precision, args.k, args.q)
    try:
        dm = build_family(spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = mio.dumps(dm)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args):
    dm = _load(args.file)
    _require_valid(dm)
    doc = full_report(dm, args.max_iter, args.n_max)
    _emit(doc, args.out)
    return EXIT_OK if doc["validation"]["ok"] else EXIT_FAIL


def cmd_chain(args):
    dm = _load(args.file)
    rep, ok = _require_valid(dm)
    if not ok:
        _emit({"validation": rep.to_json()}, args.out)
        return EXIT_FAIL
    sides = (0, 1) if args.side == "both" else (int(args.side),)
    doc = {"chains": []}
    all_ok = True
    for s in sides:
        ca = dmod.chain_analysis(dm, s, args.max_iter)
        entry = ca.to_json()
        inv = dmod.chain_invariants(dm, ca)
        entry["invariants"] = inv
        all_ok = all_ok and all(inv.values())
        if ca.stable and s == 0:
            entry["lemma_chain"] = dmod.lemma_chain(dm, ca)
        doc["chains"].append(entry)
    _emit(doc, args.out)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_minheight(args):
    dm = _load(args.file)
    rep, ok = _require_valid(dm)
    if not ok:
        _emit({"validation": rep.to_json()}, args.out)
        return EXIT_FAIL
    try:
        mh = dmod.lambda_and_height(dm, args.max_iter)
    except dmod.NotStabilizedError as exc:
        _emit({"error": str(exc), "chains": [ca.to_json() for ca in exc.analyses]}, args.out)
        return EXIT_FAIL
    except dmod.InternalConsistencyError as exc:
        _emit({"error": str(exc)}, args.out)
        return EXIT_FAIL
    _emit(mh.to_json(), args.out)
    return EXIT_OK


def cmd_slope(args):
    dm = _load(args.file)
    rep, ok = _require_valid(dm)
    if not ok:
        _emit({"validation": rep.to_json()}, args.out)
        return EXIT_FAIL
    doc = {"slopes": slope_samples(dm, args.n_max).to_json()}
    k = dm.meta.get("k")
    if dm.meta.get("family") == "deformed" and k is not None:
        checks = deformation_bound_checks(dm, k, 4)
        doc["deformation_bounds"] = [
            {"m": m, "sample": [s.numerator, s.denominator],
             "bound": [bd.numerator, bd.denominator], "ok": good}
            for m, s, bd, good in checks]
        doc["projection_valuations"] = {str(m): projection_coefficient(dm, m) for m in (1, 2, 3)}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_compare_truncation(args):
    dm1, dm2 = _load(args.file1), _load(args.file2)
    if args.k is None:
        raise InputError("--k is required")
    try:
        same = dmod.truncation_congruent(dm1, dm2, args.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit({"level": args.k, "congruent": same}, args.out)
    return EXIT_OK if same else EXIT_FAIL


def cmd_cutoff_witness(args):
    if args.a is None or args.b is None:
        raise InputError("--a and --b are required")
    if args.a < 0 or args.b < 0 or args.a + args.b < 1:
        raise InputError("signature must be nonnegative with a + b >= 1")
    report, y, y2 = cutoff_witness(args.a, args.b, args.p, args.precision)
    if args.out and y is not None:
        os.makedirs(args.out, exist_ok=True)
        a, b = report["signature"]
        files = {"supersingular": os.path.join(args.out, f"Y_{a}_{b}.json"),
                 "deformed": os.path.join(args.out, f"Yprime_{a}_{b}.json")}
        mio.save(y, files["supersingular"])
        mio.save(y2, files["deformed"])
        report["files"] = files
    _emit(report)
    return EXIT_OK if report["certified"] else EXIT_FAIL


def cmd_verify_paper(args):
    rows = verify_sweep(args.p, args.g_max)
    failed = [r for r in rows if not r["ok"]]
    doc = {"p": args.p, "g_max": args.g_max, "rows": rows,
           "summary": {"cells": len(rows), "failed": len(failed)}}
    if args.table:
        _print_table(rows)
    else:
        _emit(doc, args.out)
    return EXIT_OK if not failed else EXIT_FAIL


def _print_table(rows):
    print(f"{'kind':8} {'p':>2} {'(a,b)':>7} {'claim':>12} {'computed':>10}  ok")
    for r in rows:
        sig = f"({r['a']},{r['b']})"
        if r["kind"] == "height":
            claim, got = f"height {r['q']}", str(r["height"])
        elif r["kind"] == "slope":
            claim, got = "slope 1/2", str(r["period"])
        else:
            claim, got = f"cutoff>={r['lower_bound']}", "witness" if r["witness"] else "none needed"
        print(f"{r['kind']:8} {r['p']:>2} {sig:>7} {claim:>12} {got:>10}  {'yes' if r['ok'] else 'NO'}")


# ----------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(prog="unitary-dm",
                                     description="Unitary Dieudonne module toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, file_args=1):
        if file_args == 1:
            sp.add_argument("file")
        elif file_args == 2:
            sp.add_argument("file1")
            sp.add_argument("file2")
        sp.add_argument("--out", default=None)
        sp.add_argument("--max-iter", type=int, default=None)
        return sp

    common(sub.add_parser("validate", help="check the axioms of a module file")).set_defaults(
        func=cmd_validate)

    g = sub.add_parser("gallery", help="write a module from one of the explicit families")
    g.add_argument("--family", default="odd_direct",
                   choices=["odd_direct", "even_product", "parallel_product", "deformed",
                            "flip_10", "height_realization"])
    g.add_argument("--a", type=int, required=True)
    g.add_argument("--b", type=int, required=True)
    g.add_argument("--p", type=int, default=3)
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--q", type=int, default=None)
    g.add_argument("--precision", type=int, default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gallery)

    r = common(sub.add_parser("report", help="run every analysis on a module file"))
    r.add_argument("--n-max", type=int, default=None)
    r.set_defaults(func=cmd_report)

    c = common(sub.add_parser("chain", help="tau-orbit lattice chains"))
    c.add_argument("--side", choices=["0", "1", "both"], default="both")
    c.set_defaults(func=cmd_chain)

    common(sub.add_parser("minheight", help="Lambda and the minimal height")).set_defaults(
        func=cmd_minheight)

    s = common(sub.add_parser("slope", help="first-slope samples and certificates"))
    s.add_argument("--n-max", type=int, default=None)
    s.set_defaults(func=cmd_slope)

    t = common(sub.add_parser("compare-truncation", help="congruence of two presentations"), 2)
    t.add_argument("--k", type=int, default=None)
    t.set_defaults(func=cmd_compare_truncation)

    w = sub.add_parser("cutoff-witness", help="congruent supersingular / non-supersingular pair")
    w.add_argument("--a", type=int, default=None)
    w.add_argument("--b", type=int, default=None)
    w.add_argument("--p", type=int, default=3)
    w.add_argument("--precision", type=int, default=None)
    w.add_argument("--out", default=None, help="directory for the two module files")
    w.set_defaults(func=cmd_cutoff_witness)

    v = sub.add_parser("verify-paper", help="sweep heights, slopes and cutoffs up to a rank")
    v.add_argument("--p", type=int, default=3)
    v.add_argument("--g-max", type=int, default=5)
    v.add_argument("--table", action="store_true", help="plain text table instead of JSON")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        _emit({"error": "input", "message": str(exc)})
        return EXIT_INPUT
    except PrecisionError as exc:
        _emit({"error": "precision", "message": str(exc),
               "recommended_precision": exc.recommended_precision})
        return EXIT_PRECISION
    except ValueError as exc:
        _emit({"error": "input", "message": str(exc)})
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

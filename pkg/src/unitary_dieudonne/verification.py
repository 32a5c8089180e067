"""Sweeps that check the minimal-height and isogeny-cutoff statements.

``full_report`` aggregates every analysis of one module; ``cutoff_witness``
builds the congruent pair behind the cutoff lower bounds; ``verify_sweep``
runs the whole table for all signatures up to a given rank.
"""

from __future__ import annotations

from fractions import Fraction

from . import dieudonne_module as dmod
from .gallery import (build_deformed, build_even_product, build_flip_10,
                      build_height_realization, build_odd, build_standard, default_context)
from .padic_ring import PrecisionError
from .slopes import deformation_bound_checks, projection_coefficient, slope_samples


def full_report(dm: dmod.UnitaryDM, max_iter=None, n_max=None) -> dict:
    """Everything the toolkit knows about one module, as a JSON-ready dict."""
    val = dmod.validate(dm)
    out = {"signature": [dm.a, dm.b], "family": dm.meta.get("family", "custom"),
           "validation": val.to_json()}
    if not val.ok:
        return out
    out["chain_conditions"] = dmod.chain_conditions(dm).to_json()
    analyses = [dmod.chain_analysis(dm, s, max_iter) for s in (0, 1)]
    out["chains"] = [ca.to_json() for ca in analyses]
    out["superspecial"] = dmod.is_superspecial(dm)
    verdict = dmod.is_supersingular(dm, max_iter)
    out["supersingular"] = verdict.status
    if verdict.certificate is not None:
        out["certificate"] = verdict.certificate
    if verdict.report is not None:
        rep = verdict.report
        out["height"] = rep.height
        out["m"], out["n"] = rep.iterations
        out["minimal_height"] = rep.to_json()
    out["slopes"] = slope_samples(dm, n_max).to_json()
    return out


# ----------------------------------------------------------------------
# cutoff witnesses


def witness_pair(a: int, b: int, ctx):
    """(Y, Y', level) for signature (a, b), a <= b, or None when no witness is needed."""
    if a > b:
        raise ValueError("expects a <= b")
    if a == 0 or (a == b and a == 1):
        return None
    g = a + b
    if a < b and g % 2:
        return build_odd(a, b, ctx), build_deformed(a, b, a - 1, ctx), a - 1
    if a < b:
        y = build_even_product(a, b, ctx)
        y2 = dmod.direct_sum(build_deformed(a, b - 1, a - 1, ctx), build_odd(0, 1, ctx))
        y2.meta = {"family": "deformed_even_product", "k": a - 1, "notes": ""}
        return y, y2, a - 1
    y = build_standard(a, a, ctx)
    y2 = dmod.direct_sum(build_deformed(a - 1, a, a - 2, ctx), build_flip_10(ctx))
    y2.meta = {"family": "deformed_parallel_product", "k": a - 2, "notes": ""}
    return y, y2, a - 2


def cutoff_witness(a: int, b: int, p: int = 3, N=None):
    """Certify the lower bound on the enhanced isogeny bound for (a, b).

    Returns (report dict, Y, Y') where Y and Y' are None without a witness.
    """
    if a > b:
        a, b = b, a
    lower = a if a < b else max(a - 1, 0)
    ctx = default_context(p, a, b, N)
    pair = witness_pair(a, b, ctx)
    if pair is None:
        return ({"signature": [a, b], "witness": None, "lower_bound": lower,
                 "certified": True,
                 "conclusion": f"no witness required; bound is {lower}"}, None, None)
    y, y2, level = pair
    congruent = dmod.truncation_congruent(y, y2, level)
    v1 = dmod.is_supersingular(y)
    v2 = dmod.is_supersingular(y2)
    valid = dmod.validate(y).ok and dmod.validate(y2).ok
    certified = valid and congruent and v1.status == "yes" and v2.status == "no"
    report = {
        "signature": [a, b],
        "witness": {"supersingular": y.meta.get("family"), "deformed": y2.meta.get("family"),
                    "deformation_level": y2.meta.get("k")},
        "level": level,
        "congruent": congruent,
        "both_valid": valid,
        "verdicts": [v1.status, v2.status],
        "certificate": v2.certificate,
        "certified": certified,
        "lower_bound": level + 1,
        "conclusion": f"isogeny cutoff of the supersingular module >= {level + 1}",
    }
    return report, y, y2


# ----------------------------------------------------------------------
# sweeps


def claimed_heights(a: int, b: int):
    """Heights realised for signature (a, b), a <= b."""
    top = a - 1 if a == b else a
    return list(range(0, top + 1))


def signatures(g_max: int):
    for g in range(1, g_max + 1):
        for a in range(0, g // 2 + 1):
            yield a, g - a


def height_cell(p, a, b, q, N=None) -> dict:
    """Build the height-q realization and check height, chains and the Lambda bounds."""
    ctx = default_context(p, a, b, N)
    dm = build_height_realization(q, a, b, ctx)
    row = {"p": p, "a": a, "b": b, "q": q}
    row["valid"] = dmod.validate(dm).ok
    rep = dmod.lambda_and_height(dm)
    row["height"] = rep.height
    row["height_ok"] = rep.height == q
    row["bounds_ok"] = lambda_bounds_hold(dm, rep)
    row["chains_ok"] = chain_accounting_holds(dm)
    row["ok"] = row["valid"] and row["height_ok"] and row["bounds_ok"] and row["chains_ok"]
    return row


def lambda_bounds_hold(dm, rep) -> bool:
    """p^a Lambda <= M <= Lambda, and p^(a-1) Lambda <= M when a = b."""
    a = min(dm.a, dm.b)
    from .lattice import Lattice
    m = Lattice.standard(dm.ctx, 2 * dm.g)
    lam = rep.lambda_lattice
    ok = m.is_subset(lam) and lam.scale(a).is_subset(m)
    if dm.a == dm.b and dm.a >= 1:
        ok = ok and lam.scale(a - 1).is_subset(m)
    return ok


def chain_accounting_holds(dm) -> bool:
    analyses = [dmod.chain_analysis(dm, s) for s in (0, 1)]
    if not all(ca.stable for ca in analyses):
        return False
    ok = all(all(dmod.chain_invariants(dm, ca).values()) for ca in analyses)
    ok = ok and analyses[0].c[1] == analyses[1].c[1]
    links = dmod.lemma_chain(dm, analyses[0])
    ok = ok and all(v is not None for v in links.values())
    ok = ok and links["p M^v <= M"] == dm.a
    if dm.a == dm.b:
        ok = ok and analyses[0].c[1] <= dm.a - 1 and analyses[1].c[1] <= dm.a - 1
    return ok


def slope_cell(p, a, b) -> dict:
    """F^(2g) M = p^g M on M_(a,b), and the deformation bounds for 1 <= k <= a - 1."""
    ctx = default_context(p, a, b)
    dm = build_odd(a, b, ctx)
    rep = slope_samples(dm, 2 * dm.g, newton=False)
    row = {"p": p, "a": a, "b": b, "period": rep.period,
           "exact_half": rep.first_slope == Fraction(1, 2)}
    deformed = []
    for k in range(1, a):
        dk = build_deformed(a, b, k, ctx)
        checks = deformation_bound_checks(dk, k, 4)
        cert = dmod.is_supersingular(dk).status == "no"
        deformed.append({"k": k, "bounds_ok": all(c[3] for c in checks), "not_supersingular": cert})
    row["deformed"] = deformed
    row["ok"] = row["exact_half"] and all(d["bounds_ok"] and d["not_supersingular"] for d in deformed)
    return row


def verify_sweep(p: int, g_max: int):
    """Rows for the height table, slope certificates and cutoff witnesses."""
    rows = []
    for a, b in signatures(g_max):
        for q in claimed_heights(a, b):
            row = height_cell(p, a, b, q)
            row["kind"] = "height"
            rows.append(row)
        if (a + b) % 2:
            row = slope_cell(p, a, b)
            row["kind"] = "slope"
            rows.append(row)
        try:
            report, _, _ = cutoff_witness(a, b, p)
        except PrecisionError as exc:
            report = {"certified": False, "error": str(exc)}
        rows.append({"kind": "cutoff", "p": p, "a": a, "b": b,
                     "lower_bound": report.get("lower_bound"),
                     "witness": report.get("witness") is not None,
                     "ok": bool(report.get("certified"))})
    return rows


def check_projection(p=3, a=2, b=3, k=1, reps=(1, 2, 3)):
    ctx = default_context(p, a, b)
    dm = build_deformed(a, b, k, ctx)
    return {m: projection_coefficient(dm, m) for m in reps}

"""JSON module files.

Layout::

    {"ring": {"p", "m", "precision", "modulus"},
     "signature": {"a", "b"},
     "basis": {"M0": [...], "M1": [...]},
     "F": 2g x 2g grid, "pairing": 2g x 2g grid,
     "meta": {"family", "k", "notes"}}

Every integer is written as a decimal string; each grid entry is the list
of m coefficient strings of a ring element.  Readers accept plain JSON
integers as well.
"""

from __future__ import annotations

import json

from .dieudonne_module import UnitaryDM
from .padic_ring import make_context
from .semilinear import Matrix


class ModuleFileError(ValueError):
    """The document is not a well-formed module file."""


def _int(x, what):
    try:
        if isinstance(x, bool):
            raise TypeError
        return int(x)
    except (TypeError, ValueError):
        raise ModuleFileError(f"{what}: expected an integer, got {x!r}") from None


def to_document(dm: UnitaryDM) -> dict:
    ctx = dm.ctx
    k = dm.meta.get("k")
    return {
        "ring": {"p": str(ctx.p), "m": str(ctx.m), "precision": str(ctx.N),
                 "modulus": [str(c) for c in ctx.modulus]},
        "signature": {"a": str(dm.a), "b": str(dm.b)},
        "basis": {"M0": list(dm.labels[0]), "M1": list(dm.labels[1])},
        "F": dm.A_F.serialize(),
        "pairing": dm.B.serialize(),
        "meta": {"family": dm.meta.get("family", "custom"),
                 "k": None if k is None else str(k),
                 "notes": dm.meta.get("notes", "")},
    }


def dumps(dm: UnitaryDM) -> str:
    return json.dumps(to_document(dm), sort_keys=True, indent=1) + "\n"


def _grid(ctx, data, n, what):
    if not isinstance(data, list) or len(data) != n:
        raise ModuleFileError(f"{what}: expected {n} rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise ModuleFileError(f"{what}: row {i} should have {n} entries")
        out = []
        for j, entry in enumerate(row):
            if isinstance(entry, (int, str)) and not isinstance(entry, bool):
                entry = [entry] + [0] * (ctx.m - 1)
            if not isinstance(entry, list) or len(entry) != ctx.m:
                raise ModuleFileError(f"{what}[{i}][{j}]: expected {ctx.m} coefficients")
            out.append(ctx.element([_int(c, f"{what}[{i}][{j}]") for c in entry]))
        rows.append(out)
    return Matrix(ctx, rows)


def from_document(doc) -> UnitaryDM:
    if not isinstance(doc, dict):
        raise ModuleFileError("top level must be an object")
    for key in ("ring", "signature", "F", "pairing"):
        if key not in doc:
            raise ModuleFileError(f"missing field {key!r}")
    ring = doc["ring"]
    try:
        p = _int(ring["p"], "ring.p")
        m = _int(ring["m"], "ring.m")
        N = _int(ring.get("precision", ring.get("N")), "ring.precision")
        modulus = ring.get("modulus")
        modulus = None if modulus is None else [_int(c, "ring.modulus") for c in modulus]
    except (KeyError, TypeError) as exc:
        raise ModuleFileError(f"bad ring description: {exc}") from None
    try:
        ctx = make_context(p, m, N, modulus)
    except ValueError as exc:
        raise ModuleFileError(f"bad ring description: {exc}") from None
    sig = doc["signature"]
    try:
        a, b = _int(sig["a"], "signature.a"), _int(sig["b"], "signature.b")
    except (KeyError, TypeError):
        raise ModuleFileError("signature needs a and b") from None
    if a < 0 or b < 0 or a + b < 1:
        raise ModuleFileError("signature must be nonnegative with a + b >= 1")
    g = a + b
    A_F = _grid(ctx, doc["F"], 2 * g, "F")
    B = _grid(ctx, doc["pairing"], 2 * g, "pairing")
    basis = doc.get("basis") or {}
    labels = None
    if basis:
        labels = (list(basis.get("M0", [])), list(basis.get("M1", [])))
        if len(labels[0]) != g or len(labels[1]) != g:
            raise ModuleFileError("basis labels do not match the signature")
    meta = dict(doc.get("meta") or {})
    if meta.get("k") is not None:
        meta["k"] = _int(meta["k"], "meta.k")
    return UnitaryDM(ctx, a, b, A_F, B, labels, meta)


def loads(text: str) -> UnitaryDM:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModuleFileError(f"not valid JSON: {exc}") from None
    return from_document(doc)


def load(path) -> UnitaryDM:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(dm: UnitaryDM, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(dm))

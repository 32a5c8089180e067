"""Shared module suites for the tests."""

from __future__ import annotations

import functools

from unitary_dieudonne.gallery import (build_deformed, build_flip_10, build_height_realization,
                                       default_context)
from unitary_dieudonne.verification import claimed_heights, signatures


@functools.lru_cache(maxsize=None)
def supersingular_suite(p=3, g_max=5):
    """(name, module) for every height realization with g <= g_max, plus M_(1,0)."""
    out = []
    for a, b in signatures(g_max):
        ctx = default_context(p, a, b)
        for q in claimed_heights(a, b):
            out.append((f"X_q{q}_({a},{b})_p{p}", build_height_realization(q, a, b, ctx)))
    out.append((f"M_(1,0)_p{p}", build_flip_10(default_context(p, 1, 0))))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def deformed_suite(p=3, g_max=7):
    """(a, b, k, module) for odd g <= g_max and 1 <= k <= a - 1."""
    out = []
    for a, b in signatures(g_max):
        if (a + b) % 2 == 0:
            continue
        for k in range(1, a):
            out.append((a, b, k, build_deformed(a, b, k, default_context(p, a, b))))
    return tuple(out)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

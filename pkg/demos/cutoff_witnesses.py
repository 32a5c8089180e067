"""
Cutoff witnesses
================

A supersingular module and a non-supersingular one whose presentations
agree modulo p^k show that the isogeny cutoff is at least k + 1.
"""

from unitary_dieudonne.verification import cutoff_witness

for a, b in [(1, 2), (2, 3), (3, 4), (2, 4), (2, 2), (3, 3), (0, 3)]:
    report, y, y2 = cutoff_witness(a, b, p=3)
    if y is None:
        print(f"({a},{b}): {report['conclusion']}")
        continue
    print(f"({a},{b}): congruent mod p^{report['level']} = {report['congruent']},"
          f" verdicts {report['verdicts']}, via {report['certificate']['kind']}"
          f" -> cutoff >= {report['lower_bound']}")

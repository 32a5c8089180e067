"""
Minimal heights of supersingular unitary modules
================================================

Build the height-q realization for every signature up to rank 7 and
print the computed minimal height next to the intended one.
"""

from unitary_dieudonne import dieudonne_module as dmod
from unitary_dieudonne.gallery import build_height_realization, default_context
from unitary_dieudonne.verification import claimed_heights, signatures

p = 3
print(f"{'(a,b)':>7} {'q':>3} {'height':>7} {'(m,n)':>7}")
for a, b in signatures(7):
    ctx = default_context(p, a, b)
    for q in claimed_heights(a, b):
        dm = build_height_realization(q, a, b, ctx)
        rep = dmod.lambda_and_height(dm)
        sig = f"({a},{b})"
        print(f"{sig:>7} {q:>3} {rep.height:>7} {str(rep.iterations):>7}")

# the a = b column stops at a - 1: the parallel product M_(a-1,a) + M_(1,0)
# is the extreme case

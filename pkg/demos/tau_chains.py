"""
The tau-orbit chain of M_(2,3)
==============================

T_0 = M_0 and T_(i+1) = T_i + tau(T_i), where tau = p^-1 F^2.  The chain
stabilises at Lambda_0; its denominators give the minimal height.
"""

from unitary_dieudonne import dieudonne_module as dmod
from unitary_dieudonne.gallery import build_odd, default_context

dm = build_odd(2, 3, default_context(3, 2, 3))
print(dm)

for side in (0, 1):
    ca = dmod.chain_analysis(dm, side)
    print(f"side {side}: status={ca.status}, stabilised at {ca.stabilization}")
    print("  indices c:", ca.c)
    print("  indices d:", ca.d)
    print("  denominators:", [lat.denom for lat in ca.lattices])
    print("  invariants:", dmod.chain_invariants(dm, ca))

# the six-term chain  p^a T <= p T^v <= p M^v <= M <= T <= p^(1-a) T^v
ca = dmod.chain_analysis(dm, 0)
for link, idx in dmod.lemma_chain(dm, ca).items():
    print(f"{link:28} length {idx}")

"""
Slopes of deformed modules
==========================

M_(2,3) is isoclinic of slope 1/2.  The deformation with F(f_2) = e_3 + p e_1
drops the first slope; the samples s_n = min val(F^n) / n climb towards it
from below, and the Newton polygon of F^2 pins it down.
"""

from unitary_dieudonne import dieudonne_module as dmod
from unitary_dieudonne.gallery import build_deformed, build_odd, default_context
from unitary_dieudonne.slopes import deformation_bound_checks, slope_samples

ctx = default_context(3, 2, 3)
for dm in (build_odd(2, 3, ctx), build_deformed(2, 3, 1, ctx)):
    rep = slope_samples(dm)
    print(dm)
    print("  samples:", " ".join(f"{s}" for _, s in rep.samples[:10]))
    print("  period:", rep.period, " first slope:", rep.first_slope)
    print("  Newton slopes:", [str(s) for s in rep.newton_slopes])
    print("  supersingular:", dmod.is_supersingular(dm).status)

# the bound s_(2am) <= k(m-1)/(2am) for the deformation with k = 1
for m, s, bound, ok in deformation_bound_checks(build_deformed(2, 3, 1, ctx), 1, 4):
    print(f"m={m}: s={s}  bound={bound}  {'ok' if ok else 'violated'}")

"""
Tilting one TILES vector
========================

Replace the last TILES member's second factor by (1+t, 1, 1)/sqrt(c). The
set stops being orthogonal. Its weights and mu0 spectrum move smoothly away
from the uniform case, and Condition 3 keeps holding up to a boundary t.
"""

# %%
import numpy as np

from upbwit import construct, pipeline
from upbwit.states import builtin_family, gram_q

for t in (1e-1, 1e-2, 1e-3, 1e-4):
    s = builtin_family("tiles_perturbed", t=t)
    p = construct.solve_condition2(gram_q(s)).p
    w = construct.r_matrix_spectrum(s, p).eigenvalues
    print(f"t={t:g}  p={np.round(p, 8)}  max|lambda - 1/5|={np.abs(w - 0.2).max():.2e}")

# %%
# Margin of Condition 3 as a function of t, and its root
for t in (0.02, 0.05, 0.1, 0.2):
    print(t, pipeline.tiles_condition3_margin(t, restarts=64))
t_crit = pipeline.bisect_tiles_condition3(restarts=64)
print("boundary t ~", t_crit)

# %%
report = pipeline.analyze(builtin_family("tiles_perturbed", t=t_crit / 2), seed=0, restarts=256)
print(pipeline.format_report(report))

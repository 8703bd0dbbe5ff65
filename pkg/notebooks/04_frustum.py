"""
Walking from the identity to rho0
=================================

lambda(t) = (1 - t) D0 + t rho0 is separable near D0 = I/N and entangled
near rho0. Tr(mu0 lambda(t)) falls below the product-state minimum past t(b).
"""

# %%
from upbwit import pipeline
from upbwit.states import builtin_family

t_b, value, rows = pipeline.frustum_table(builtin_family("tiles"), steps=20, seed=0)
print("t(b) =", t_b, " product-state minimum =", value)
for t, tr, min_eig, label in rows:
    print(f"{t:6.3f}  {tr:.6f}  {min_eig:+.2e}  {label}")

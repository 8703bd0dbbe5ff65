"""
Three non-orthogonal product states in 2x2
==========================================

Solve Q p = c e for the weights, compare the spectrum of mu0 computed from
the small R matrix with the full eigensolve, and see why no witness comes
out of this set.
"""

# %%
import numpy as np

from upbwit import construct, separability
from upbwit.linalg import hermitian_eig, kron
from upbwit.states import builtin_family, check_subset_basis_condition, gram_q, is_unextendible

s = builtin_family("example_b2")
q = gram_q(s)
print(q)
print("every pair of factors is a basis:", check_subset_basis_condition(s))
print(is_unextendible(s))

# %%
sol = construct.solve_condition2(q)
print("p", sol.p, "Tr mu0^2", sol.c)

# %%
mu0 = construct.mu_of_p(s, sol.p)
print("via R:", construct.r_matrix_spectrum(s, sol.p).positive())
print("full :", hermitian_eig(mu0).positive())
print("exact:", [(5 - np.sqrt(13)) / 16, 3 / 8, (5 + np.sqrt(13)) / 16])

# %%
# The product vector a1 x b2 reaches 1/16. The see-saw goes lower still.
v = kron(s.members[0].factors[0], s.members[1].factors[1])
print("Tr(mu0 P(a1 x b2)) =", np.vdot(v, mu0 @ v).real)
eps = separability.epsilon_seesaw(mu0, s.dims, restarts=256, seed=0, oracle_resolution=40)
print("see-saw", eps.value, "grid oracle", eps.oracle_value)

# %%
cond = construct.evaluate_conditions(s, sol.p, eps.value)
print("lhs", cond.lhs, "rhs", cond.rhs, "condition 3 holds:", cond.cond3)

# %%
# Forcing the construction anyway gives s0 >= 1 and an operator that some
# separable state makes negative.
wit = construct.build_witness(s, sol.p, eps.value, force=True)
val = separability.validate_witness(wit, s.dims, samples=2000, seed=0, restarts=16)
print("s0", wit.s0, "min Tr(W sigma)", val.minimum)

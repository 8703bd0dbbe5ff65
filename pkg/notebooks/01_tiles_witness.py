"""
A witness for the TILES bound entangled state
=============================================

Build rho0 from the five TILES product states, check that it is PPT, find
the product-state minimum of Tr(mu0 sigma) and turn it into a witness W0
that detects rho0.
"""

# %%
import numpy as np

from upbwit import construct, separability
from upbwit.linalg import hermitian_eig
from upbwit.states import builtin_family, gram_q, is_unextendible

tiles = builtin_family("tiles")
print(np.round(gram_q(tiles), 12))  # orthonormal, so Q is the identity
print(is_unextendible(tiles))

# %%
# Uniform weights. rho0 is the normalized projector on the 4-dim complement.
p = np.full(5, 1 / 5)
rho0 = construct.rho_of_p(tiles, p, b="p_max").rho
print(np.round(hermitian_eig(rho0).eigenvalues, 12))
print(separability.is_ppt(rho0, tiles.dims))

# %%
# min over product states of Tr(mu0 sigma), from 256 see-saw restarts
mu0 = construct.mu_of_p(tiles, p)
eps = separability.epsilon_seesaw(mu0, tiles.dims, restarts=256, seed=0)
print("minimum", eps.value, "N * minimum", 9 * eps.value)

# %%
wit = construct.build_witness(tiles, p, eps.value)
print("s0", wit.s0, "Tr(W0 rho0)", wit.tr_rho0)

# %%
# W0 must be nonnegative on separable states: random mixtures plus a see-saw attack
val = separability.validate_witness(wit, tiles.dims, samples=100_000, seed=0)
print("min over sampled separable states", val.min_sampled)
print("min found by see-saw on W0", val.min_attack)

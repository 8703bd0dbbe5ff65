"""
From a separable mu0 back to a Bell state
=========================================

mu0 = (I - |psi><psi|)/3 is separable. Reflecting it through the identity
with b = 3 lands exactly on the Bell projector, which is not PPT.
"""

# %%
import numpy as np

from upbwit import construct, separability
from upbwit.linalg import projector

psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
mu0 = (np.eye(4) - projector(psi)) / 3
rho = construct.reflect_through_identity(mu0, 3).rho
print(np.round(rho.real, 12))
print(separability.is_ppt(rho, (2, 2)))

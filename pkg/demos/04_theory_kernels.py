"""
Limiting covariances
====================

The resolvent kernel, the coefficient-series covariance and its double
contour form, and the split into real and imaginary parts.
"""

import numpy as np

from nhfluct import theory
from nhfluct.fluctstat import CombinationSpec
from nhfluct.matfun import exp_function, monomial

print("kernel_Y(3, 3) =", theory.kernel_Y(3, 3), "= 1/648 =", 1 / 648)

pts = [2.5, 3j, -2.7 + 1j]
K = theory.kernel_table(pts)
print("Hermitian:", np.array_equal(K, K.conj().T), " eigenvalues:", np.linalg.eigvalsh(K))

exp = exp_function()
print("cov(exp, exp) series :", theory.covariance_Z(exp, exp))
print("cov(exp, exp) contour:", theory.covariance_Z_contour(exp, exp))
print("cov(z^2, z^3):", theory.covariance_Z(monomial(2), monomial(3)))

# Y(z) is the entry statistic of 1/(z - x), so the two theories coincide
z, w = 2.5 + 1j, -3.0
print(theory.covariance_Z(theory.resolvent_function(z), theory.resolvent_function(w)), theory.kernel_Y(z, w))

rr, ii, ri = theory.real_kernels(z, z)
print(f"Var Re Y = {rr.real:.3e}, Var Im Y = {ii.real:.3e}, Cov(Re, Im) = {ri.real:.3e}")
spec = CombinationSpec(np.array([[1, 0], [0, 1]]), np.array([[0, 1], [0, 0]]))
print("Var S =", theory.covariance_S(z, z, spec).real)

"""
f(A) by power series and by contour integration
===============================================

Below the norm guard both routes agree to roughly machine precision.
"""

import math

import numpy as np

from nhfluct.matfun import ContourSpec, eval_contour, eval_series, exp_function, monomial, resolvent, spectral_norm

rng = np.random.default_rng(0)
A = rng.standard_normal((6, 6))
A *= 2.0 / np.linalg.norm(A, 2)

print("power iteration:", spectral_norm(A), " svd:", np.linalg.norm(A, 2))

F, info = eval_series(exp_function(), A, full_output=True)
G = eval_contour(exp_function(), A, ContourSpec(radius=2.5, nodes=256))
print(f"exp: {info.terms} terms, tail bound {info.tail:.1e}, routes differ by {np.abs(F - G).max():.1e}")

# trapezoidal error on the circle falls geometrically with the node count
for nodes in (16, 32, 64, 128):
    err = np.abs(eval_contour(monomial(6), A, ContourSpec(2.5, nodes)) - np.linalg.matrix_power(A, 6)).max()
    print(f"{nodes:4d} nodes: {err:.1e}")

# the resolvent stays bounded by 1/(2.5 - 2.25) = 4 on and outside |z| = 2.5
for z in (2.5, 2.5j, -2.5, 3 + 3j):
    print(z, np.linalg.norm(resolvent(A, z), 2))

print(eval_series(exp_function(), np.diag([1.0, 2.0])).diagonal(), math.e, math.exp(2))

"""
Exact oracles
=============

Sign-pattern enumeration for the trace identity, rational enumeration for
the fourth-moment diagnostic, and the bilinear-form CLT.
"""

from fractions import Fraction

import numpy as np

from nhfluct.harness import normality_test, qf_diagnostic
from nhfluct.oracles import QuadraticFormSpec, boundedness_onset, qf_clt_samples, trace_identity_enumerate

B = np.random.default_rng(3).standard_normal((4, 4))
print(trace_identity_enumerate(B), np.trace(B @ B.T) / 4)

for row in qf_diagnostic([2, 4, 8, 64, 256], "three-point"):
    n = row["n"]
    print(n, row["method"], row["value"], Fraction(3 * n - 2, n**3))

for name in ("rademacher", "three-point", "uniform", "gaussian"):
    print(name, "bounded by eps_n n^(1/4) from n =", boundedness_onset(name))

n = 1024
D = np.diag(np.resize([1.0, -1.0], n))
Z = qf_clt_samples(QuadraticFormSpec([np.eye(n), 2 * D], a=2.0), 5000, seed=1)
print("variances:", Z.var(axis=0, ddof=1), "expected [1, 4]")
print("KS p-values:", normality_test(Z[:, 0], 1.0)[1], normality_test(Z[:, 1], 4.0)[1])
print("cross-correlation:", np.corrcoef(Z.T)[0, 1])

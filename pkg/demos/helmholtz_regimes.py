"""The three ways a Helmholtz kernel is decomposed.

Only Y0(k r)/4 needs a decomposition (the J0 half of the Hankel function is
already a single ring).  When k is a zero of Y0 the Dirichlet basis fits
directly; otherwise the problem is rescaled to the next zero, and for small
k a Robin basis is used instead.

Run:  python3 demos/helmholtz_regimes.py
"""

import numpy as np
from scipy import special

from sbdconv import helmholtz_kernel, helmholtz_sbd
from sbdconv.kernels import helmholtz_plan
from sbdconv.sbd import helmholtz_fixed_order, measured_error

a, tol = 0.05, 1e-6
for k in (0.3, 7.086, 25.0, 90.0):
    plan = helmholtz_plan(k)
    s = helmholtz_sbd(k, a, tol)
    r = np.linspace(a, 1, 20_001)
    err = np.max(np.abs(s(r) + 0.25j * special.hankel1(0, k * r)))
    print(f"k={k:6.3f}: regime {plan.regime:17s} P={s.P:4d} dilation={s.dilation:.5f} error {err:.1e}")

k = 7.086
print(f"\nfixed orders for k={k}, a={a}")
for P in (10, 20, 30, 40):
    print(f"  P={P}: {measured_error(helmholtz_fixed_order(k, a, P), helmholtz_kernel(k)):.2e}")

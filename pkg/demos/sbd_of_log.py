"""Decompose log(r) on an annulus and watch the error fall with the order.

The decomposition replaces log|x| on a < |x| < 1 by a short sum of
J0(rho_p |x|) terms.  This script prints the error for growing orders, then
lets the adaptive solver pick the order for a few tolerances and reports the
conditioning of the resulting Gram system.

Run:  python3 demos/sbd_of_log.py
"""

import numpy as np

from sbdconv import laplace_kernel, solve_sbd
from sbdconv.benchmarks import fit_decay_rate
from sbdconv.sbd import gram_condition, sbd_fixed_order

a = 0.05
G = laplace_kernel()

print(f"fixed orders on [{a}, 1]")
rows = []
for P in range(30, 141, 10):
    s = sbd_fixed_order(G, a, P)
    rows.append((s.gamma, s.achieved_error))
    print(f"  P={P:4d}  gamma={s.gamma:4.2f}  max error {s.achieved_error:.2e}")
rate, floor, g_floor = fit_decay_rate(*zip(*rows))
print(f"error ~ exp(-{rate:.2f} gamma) until the {floor:.1e} floor at gamma {g_floor:.2f}\n")

print("adaptive order")
for tol in (1e-3, 1e-6, 1e-9):
    s = solve_sbd(G, a, tol)
    r = np.geomspace(a, 1, 5)
    print(f"  tol={tol:.0e}: P={s.P}, gamma={s.gamma:.2f}, cond(A)={gram_condition(s):.3g}")
    print("    log r   :", np.array2string(np.log(r), precision=6))
    print("    SBD     :", np.array2string(s(r).real, precision=6))

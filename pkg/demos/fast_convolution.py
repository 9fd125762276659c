"""Compressed Laplace convolution on a random cloud, checked against the
dense sum.

The operator splits every interaction into a smooth far part, applied with
two nonuniform FFTs, and a sparse correction for pairs closer than delta_min.

Run:  python3 demos/fast_convolution.py [N]
"""

import sys
import time

import numpy as np

from sbdconv import assemble, direct_sum, laplace_kernel

N = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
rng = np.random.default_rng(0)
x = rng.uniform(0, 1, (N, 2))
f = rng.standard_normal(N)
G = laplace_kernel()

for eps in (1e-3, 1e-6):
    t0 = time.perf_counter()
    op = assemble(G, x, eps=eps).prepare()
    t_off = time.perf_counter() - t0
    t0 = time.perf_counter()
    q = op @ f
    t_on = time.perf_counter() - t0
    rows = rng.choice(N, 500, replace=False)
    err = np.max(np.abs(q[rows] - direct_sum(G, x, f=f, rows=rows))) / np.sum(np.abs(f))
    print(f"eps={eps:.0e}: a={op.a:.4f}, P={op.info['P']}, {op.info['n_freqs']} frequencies, "
          f"{op.info['n_pairs']} close pairs")
    print(f"  off-line {t_off:.2f}s, on-line {t_on:.3f}s, memory {op.nbytes() / 1e6:.1f} MB "
          f"({100 * op.dense_ratio():.3f}% of dense), error/sum|f| on 500 rows {err:.1e}")

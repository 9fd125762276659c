"""Desk-scale reproductions: compression/timing table, SBD error curves,
Gram conditioning and the ``C_p`` bracketing."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .kernels import RadialKernel, laplace_kernel
from .operator import assemble, direct_sum
from .sbd import assemble_gram, conditioning_F, fixed_order
from .special_functions import dirichlet_basis, dirichlet_roots, norm_constant

__all__ = [
    "BenchReport",
    "conditioning_table",
    "cp_conjecture_table",
    "fit_decay_rate",
    "run_bench",
    "sbd_error_curve",
    "uniform_square",
]


@dataclass
class BenchReport:
    N: int
    offline_seconds: float
    online_seconds: float
    operator_bytes: int
    dense_ratio: float
    max_error_vs_direct: float  # nan when not measured
    P: int
    n_freqs: int
    n_pairs: int

    def row(self):
        return asdict(self)


def uniform_square(n, rng):
    return rng.uniform(0.0, 1.0, size=(n, 2))


def run_bench(N_list, eps=1e-3, alpha=0.0, seed=0, *, direct_limit=20000, check_rows=1000,
              repeats=3, kernel: RadialKernel = None, log=None):
    """Two independent uniform clouds in the unit square per ``N``.

    On-line time is the best of ``repeats`` applications after the NUFFT
    plans have been built (plan construction counts as off-line).  The error
    against the direct sum is measured on ``check_rows`` random targets (all
    of them when ``N <= check_rows``) and reported relative to ``sum |f|``.
    """
    kernel = kernel or laplace_kernel()
    rng = np.random.default_rng(seed)
    out = []
    for N in N_list:
        x = uniform_square(N, rng)
        y = uniform_square(N, rng)
        f = rng.standard_normal(N)
        t0 = time.perf_counter()
        op = assemble(kernel, y, x, eps=eps, alpha=alpha)
        op.prepare()
        t_off = time.perf_counter() - t0
        best = math.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            q = op.apply(f)
            best = min(best, time.perf_counter() - t0)
        err = float("nan")
        if N <= direct_limit:
            rows = np.arange(N) if N <= check_rows else rng.choice(N, check_rows, replace=False)
            ref = direct_sum(kernel, y, x, f, rows=rows)
            err = float(np.max(np.abs(q[rows] - ref)) / np.sum(np.abs(f)))
        rep = BenchReport(N, t_off, best, op.nbytes(), op.dense_ratio(), err,
                          op.info["P"], op.info["n_freqs"], op.info["n_pairs"])
        if log:
            log(rep)
        out.append(rep)
        del op
    return out


def sbd_error_curve(kernel: RadialKernel, a, P_list):
    """``(gamma, P, L-infinity error)`` of fixed-order SBDs on ``[a, 1]``."""
    rows = []
    for P in P_list:
        s = fixed_order(kernel, a, int(P))
        rows.append((P * a, int(P), s.achieved_error))
    return rows


def fit_decay_rate(gammas, errors, floor_factor=5.0):
    """Slope ``l`` of ``log(error) ~ c - l gamma`` over the pre-floor part.

    Points after the minimum error, and those within ``floor_factor`` of
    it, are treated as the rounding floor and excluded.
    """
    g = np.asarray(gammas, dtype=float)
    e = np.asarray(errors, dtype=float)
    i_min = int(np.argmin(e))
    keep = (np.arange(len(e)) < i_min) & (e > floor_factor * e[i_min])
    if keep.sum() < 2:
        raise ValueError("not enough points before the error floor")
    slope, _ = np.polyfit(g[keep], np.log(e[keep]), 1)
    return -slope, float(e[i_min]), float(g[i_min])


def conditioning_table(P_list, gamma_grid):
    """``(gamma, P, lambda_min, theorem_bound, conjecture_bound)`` rows."""
    rows = []
    for P in P_list:
        basis = dirichlet_basis(int(P))
        for g in gamma_grid:
            lam = assemble_gram(basis, g / P).eigenvalues()[0]
            theorem = conditioning_F(g) - np.pi**4 * g**4 / (144.0 * P)
            rows.append((float(g), int(P), float(lam), float(theorem), 180.0 * math.exp(-5.8 * g)))
    return rows


def cp_conjecture_table(P):
    """``(p, v_p, w_p)`` with ``v_p = sqrt(2 pi p) C_p - 1`` and
    ``w_p = 1 - sqrt(2 pi (p - 1/4)) C_p``."""
    p = np.arange(1, int(P) + 1)
    C = np.atleast_1d(norm_constant(p, dirichlet_roots(int(P))))
    v = np.sqrt(2 * np.pi * p) * C - 1
    w = 1 - np.sqrt(2 * np.pi * (p - 0.25)) * C
    return list(zip(p.tolist(), v.tolist(), w.tolist()))

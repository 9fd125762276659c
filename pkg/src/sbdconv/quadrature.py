"""Circular quadrature: turn each Bessel ring of an SBD into plane waves.

``J_0(rho |x|)`` is the average of ``exp(i rho x . u)`` over unit vectors
``u``; the ``M``-point trapezoid rule on that circle is exact up to the
aliased terms ``2 sum_k i^{kM} J_{kM}(rho |x|) cos(kM theta)``, which are
bounded by ``K (e rho / 2M)^M`` once ``M >= e rho / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import BudgetError
from .sbd import SBDecomposition

__all__ = [
    "FrequencyQuadrature",
    "K_SAFE",
    "aliasing_error_bound",
    "calibrate_k_safe",
    "eval_gapprox",
    "flatten",
    "ring_quadrature_error",
    "ring_size",
]

# twice the supremum of 2 sum_k |J_{kM}(r)| / (e r / 2M)^M over r in (0, 500],
# M >= e r / 2 (the supremum, 0.8317, sits at M = 1, r ~ 0.71); see
# calibrate_k_safe and its test
K_SAFE = 1.67

MIN_RING = 4


def calibrate_k_safe(r_max=500.0, n_r=20000, extra_m=40):
    """Recompute the supremum behind :data:`K_SAFE` on a dense grid.

    Returns the raw supremum (``K_SAFE`` is about twice it).
    """
    r = np.concatenate([np.geomspace(1e-6, 1.0, 200, endpoint=False), np.linspace(1.0, r_max, n_r)])
    k = np.arange(1, 60)[:, None]
    best = 0.0
    for dm in range(extra_m):
        M = np.maximum(1, np.ceil(np.e * r / 2)).astype(int) + dm
        log_bound = M * np.log(np.e * r / (2 * M))
        ok = log_bound > -700
        alias = 2 * np.sum(np.abs(special.jv(k * M[ok], r[ok])), axis=0)
        best = max(best, float(np.max(alias / np.exp(log_bound[ok]))))
    return best


def aliasing_error_bound(r, M, K=K_SAFE):
    """``K (e r / 2M)^M``."""
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        return K * np.exp(M * np.log(np.e * r / (2 * M)))


def ring_size(rho, tol):
    """Number of equispaced nodes needed on a ring of radius ``rho`` so the
    trapezoid rule reproduces ``J_0(rho |x|)`` within ``tol`` for ``|x| <= 1``.

    ``M = ceil(e rho / 2 + log(K_SAFE / tol))``, at least 4, rounded up to an
    even number so that rings are symmetric under ``xi -> -xi``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    M = math.ceil(0.5 * math.e * rho + max(0.0, math.log(K_SAFE / tol)))
    M = max(MIN_RING, M)
    return M + (M % 2)


def ring_nodes(rho, M, phase=0.0):
    theta = phase + 2 * np.pi * np.arange(M) / M
    return rho * np.column_stack([np.cos(theta), np.sin(theta)])


def ring_quadrature_error(rho, M, x, phase=0.0):
    """``|J_0(rho |x|) - mean_m exp(i x . xi_m)|`` at the points ``x`` (n, 2)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    nodes = ring_nodes(rho, M, phase)
    approx = np.exp(1j * x @ nodes.T).mean(axis=1)
    return np.abs(special.j0(rho * np.hypot(x[:, 0], x[:, 1])) - approx)


@dataclass(frozen=True, eq=False)
class FrequencyQuadrature:
    """Flat plane-wave approximation ``G(x) ~ sum_nu w_nu exp(i x . xi_nu)``.

    Entry 0 is the zero frequency carrying the constant offset; ring ``j``
    occupies ``freqs[ring_offsets[j]:ring_offsets[j + 1]]``.
    """

    freqs: np.ndarray
    weights: np.ndarray
    ring_offsets: np.ndarray
    ring_radii: np.ndarray
    total_error_budget: float

    def __post_init__(self):
        for arr in (self.freqs, self.weights, self.ring_offsets, self.ring_radii):
            arr.setflags(write=False)

    @property
    def n_freqs(self):
        return len(self.weights)

    @property
    def ring_sizes(self):
        return np.diff(self.ring_offsets)

    @property
    def weight_l1(self):
        return float(np.sum(np.abs(self.weights)))

    def scaled(self, delta):
        """Same approximation in coordinates ``y = delta x``."""
        return FrequencyQuadrature(
            self.freqs / delta, self.weights.copy(), self.ring_offsets.copy(),
            self.ring_radii / delta, self.total_error_budget,
        )

    def __call__(self, x):
        return eval_gapprox(self, x)


def flatten(sbd: SBDecomposition, eps: float) -> FrequencyQuadrature:
    """Quadrature of every ring of ``sbd`` with total error at most ``eps``
    on ``a <= |x| <= 1`` (half of ``eps`` goes to the SBD, half to the rings).

    Raises
    ------
    BudgetError
        If ``eps < 2 * sbd.achieved_error``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if eps < 2 * sbd.achieved_error:
        raise BudgetError(
            f"eps={eps:g} is below twice the SBD error ({sbd.achieved_error:.3g})"
        )
    radii = sbd.frequencies
    amps = sbd.amplitudes
    keep = amps != 0
    radii, amps = radii[keep], amps[keep]
    n_rings = max(1, len(radii))
    sizes = [ring_size(rho, eps / (2 * n_rings * abs(c))) for rho, c in zip(radii, amps)]
    offsets = np.concatenate([[0, 1], 1 + np.cumsum(sizes, dtype=np.int64)]).astype(np.int64)
    freqs = np.zeros((offsets[-1], 2))
    weights = np.zeros(offsets[-1], dtype=complex)
    weights[0] = sbd.constant_offset
    for j, (rho, c, M) in enumerate(zip(radii, amps, sizes)):
        s = slice(offsets[j + 1], offsets[j + 2])
        freqs[s] = ring_nodes(rho, M)
        weights[s] = c / M
    return FrequencyQuadrature(
        freqs, weights, offsets, np.concatenate([[0.0], radii]), float(eps)
    )


def eval_gapprox(q: FrequencyQuadrature, x):
    """Plain sum ``sum_nu w_nu exp(i x . xi_nu)`` at points ``x`` (..., 2)."""
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-1]
    flat = x.reshape(-1, 2)
    out = np.empty(len(flat), dtype=complex)
    step = max(1, (1 << 21) // max(1, q.n_freqs))
    for s in range(0, len(flat), step):
        out[s : s + step] = np.exp(1j * (flat[s : s + step] @ q.freqs.T)) @ q.weights
    out = out.reshape(shape)
    return out if out.ndim else complex(out)

"""Type-III nonuniform Fourier sums ``q_nu = sum_k exp(+-i z_k . xi_nu) alpha_k``.

The fast path delegates to FINUFFT (spread / FFT / interpolate with an
exponential-of-semicircle kernel); :func:`ndft_direct` is the exact
reference used both as an oracle and for small problems.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

import numpy as np

__all__ = ["DIRECT_THRESHOLD", "NufftCounters", "NufftPlan", "ndft_direct", "nufft_apply"]

# below this many point/frequency pairs the direct sum is used
DIRECT_THRESHOLD = 1 << 20

_BLOCK = 1 << 21


def _as_2d(a, name):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n, 2), got {a.shape}")
    return a


def _check_sign(sign):
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return int(sign)


def ndft_direct(points, freqs, coeffs, sign):
    """Exact ``q_nu = sum_k exp(sign i z_k . xi_nu) coeffs_k``, blocked over
    frequencies to bound memory."""
    points = _as_2d(points, "points")
    freqs = _as_2d(freqs, "freqs")
    sign = _check_sign(sign)
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (len(points),):
        raise ValueError(f"coeffs has shape {coeffs.shape}, expected ({len(points)},)")
    out = np.empty(len(freqs), dtype=complex)
    step = max(1, _BLOCK // max(1, len(points)))
    for s in range(0, len(freqs), step):
        phase = freqs[s : s + step] @ points.T
        out[s : s + step] = np.exp(sign * 1j * phase) @ coeffs
    return out


@dataclass
class NufftCounters:
    """Running totals for benchmark reporting."""

    calls: int = 0
    seconds: float = 0.0
    pairs: int = 0  # sum of N_z + N_xi over calls

    def as_dict(self):
        return {"calls": self.calls, "seconds": self.seconds, "pairs": self.pairs}


class NufftPlan:
    """Reusable transform from coefficients on ``points`` to sums at ``freqs``.

    Parameters
    ----------
    points : (N_z, 2) array
    freqs : (N_xi, 2) array
    sign : {+1, -1}
    tol : float
        Target max-norm error relative to ``sum |coeffs|``.
    method : {"auto", "fast", "direct"}
        ``auto`` uses the direct sum when ``N_z N_xi <= DIRECT_THRESHOLD``.
    """

    def __init__(self, points, freqs, sign, tol, method="auto"):
        self.points = np.ascontiguousarray(_as_2d(points, "points"))
        self.freqs = np.ascontiguousarray(_as_2d(freqs, "freqs"))
        self.sign = _check_sign(sign)
        if not tol > 0:
            raise ValueError("tol must be positive")
        self.tol = float(tol)
        if method not in ("auto", "fast", "direct"):
            raise ValueError(f"unknown method {method!r}")
        small = len(self.points) * len(self.freqs) <= DIRECT_THRESHOLD
        self.method = "direct" if method == "direct" or (method == "auto" and small) else "fast"
        self.counters = NufftCounters()
        self._plan = None
        self._lock = threading.Lock()

    @property
    def shape(self):
        return len(self.freqs), len(self.points)

    def _fast_plan(self):
        if self._plan is None:
            import finufft

            # FINUFFT's tolerance is relative to the output norm; a factor 4
            # keeps the max-norm contract with margin
            eps = max(self.tol / 4, 1e-15)
            plan = finufft.Plan(3, 2, 1, eps, self.sign)
            x, y = self.points[:, 0].copy(), self.points[:, 1].copy()
            s, t = self.freqs[:, 0].copy(), self.freqs[:, 1].copy()
            plan.setpts(x, y, None, s, t)
            self._pts = (x, y, s, t)  # FINUFFT keeps pointers to these
            self._plan = plan
        return self._plan

    def __call__(self, coeffs):
        return nufft_apply(self, coeffs)

    def nbytes(self):
        return self.points.nbytes + self.freqs.nbytes


def nufft_apply(plan: NufftPlan, coeffs):
    """Apply ``plan`` to ``coeffs`` (length ``N_z``); returns length ``N_xi``."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (len(plan.points),):
        raise ValueError(f"coeffs has shape {coeffs.shape}, expected ({len(plan.points)},)")
    t0 = time.perf_counter()
    if plan.method == "direct":
        out = ndft_direct(plan.points, plan.freqs, coeffs, plan.sign)
    else:
        c = np.ascontiguousarray(coeffs, dtype=np.complex128)
        with plan._lock:
            out = plan._fast_plan().execute(c)
    plan.counters.calls += 1
    plan.counters.seconds += time.perf_counter() - t0
    plan.counters.pairs += len(plan.points) + len(plan.freqs)
    return out

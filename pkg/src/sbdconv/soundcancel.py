"""Phase optimization of point sound sources to quiet a disk-shaped zone.

The intensity at ``x`` is ``|sum_l H_0^(1)(k |x - z_l|) exp(i phi_l)|^2``;
summed over quadrature points of the zone this is ``||A q(phi)||^2`` with
``A = 4i G`` (``G`` the outgoing Helmholtz Green's function), so objective
and gradient cost one compressed product and one adjoint product each.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError
from .kernels import helmholtz_kernel
from .operator import CompressedOperator, assemble

__all__ = [
    "SoundField",
    "SoundResult",
    "disk_grid",
    "half_circle_sources",
    "make_problem",
    "objective_and_gradient",
    "optimize_phases",
    "write_grid",
]


@dataclass(eq=False)
class SoundField:
    sources: np.ndarray
    phases: np.ndarray
    k: float
    zone_center: np.ndarray
    zone_radius: float
    quad_points: np.ndarray
    operator: CompressedOperator = field(repr=False, default=None)


def half_circle_sources(n, radius, rng):
    """``n`` random spots on the upper half circle of the given radius."""
    t = np.sort(rng.uniform(0.0, np.pi, n))
    return radius * np.column_stack([np.cos(t), np.sin(t)])


def disk_grid(center, radius, n_target):
    """About ``n_target`` points of a uniform Cartesian grid inside a disk."""
    h = radius * math.sqrt(math.pi / n_target)
    m = int(math.ceil(radius / h))
    g = (np.arange(-m, m + 1) + 0.5 * ((2 * m + 1) % 2 == 0)) * h
    X, Y = np.meshgrid(g, g)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    pts = pts[np.sum(pts * pts, axis=1) <= radius * radius]
    return pts + np.asarray(center, dtype=float)


def make_problem(n_sources=100, k=90.0, n_quad=10_000, zone_center=(0.0, -0.6), zone_radius=0.25,
                 source_radius=0.5, eps=1e-6, seed=0):
    """Sources on a half circle, silence zone below it, operator assembled.

    The zone must stay farther than ``delta_min`` from every source so that
    no close correction is needed.
    """
    rng = np.random.default_rng(seed)
    z = half_circle_sources(n_sources, source_radius, rng)
    x = disk_grid(zone_center, zone_radius, n_quad)
    gap = np.min(np.linalg.norm(z - np.asarray(zone_center), axis=1)) - zone_radius
    op = assemble(helmholtz_kernel(k), z, x, eps=eps)
    if gap <= op.delta_min:
        raise DomainError(f"silence zone is within delta_min={op.delta_min:.3g} of a source")
    phases = rng.uniform(0.0, 2 * np.pi, n_sources)
    return SoundField(z, phases, float(k), np.asarray(zone_center, float), float(zone_radius), x, op)


def objective_and_gradient(op: CompressedOperator, phases):
    """``Pi(phi) = ||A q||^2`` and ``dPi/dphi_l = -2 Im(q_l conj((A^H A q)_l))``."""
    q = np.exp(1j * np.asarray(phases, dtype=float))
    u = 4j * op.apply(q)
    w = -4j * op.adjoint_apply(u)  # A^H u with A = 4i G
    return float(np.vdot(u, u).real), -2.0 * np.imag(q * np.conj(w))


@dataclass
class SoundResult:
    phases: np.ndarray
    trace: list  # objective after each accepted step (first entry: initial)
    evaluations: int
    initial: float
    final: float

    @property
    def reduction_db(self):
        return 10.0 * math.log10(self.initial / self.final)


def optimize_phases(op: CompressedOperator, phases0, max_evals=500, c1=1e-4, step0=None):
    """Gradient descent with Armijo backtracking, capped at ``max_evals``
    objective+gradient evaluations.  The trace is non-increasing by
    construction."""
    phi = np.array(phases0, dtype=float)
    f, g = objective_and_gradient(op, phi)
    evals = 1
    trace = [f]
    initial = f
    step = step0 if step0 is not None else 0.1 / max(np.max(np.abs(g)), 1e-300)
    while evals < max_evals:
        gg = float(g @ g)
        if gg == 0:
            break
        trial = phi - step * g
        f_new, g_new = objective_and_gradient(op, trial)
        evals += 1
        if f_new <= f - c1 * step * gg:
            phi, f, g = trial, f_new, g_new
            trace.append(f)
            step *= 2.0
        else:
            step *= 0.5
    return SoundResult(np.mod(phi, 2 * np.pi), trace, evals, initial, f)


def field_intensity(sources, phases, k, points, eps=1e-6):
    """``|sum_l H_0(k |x - z_l|) exp(i phi_l)|^2`` at ``points`` via a
    compressed operator (coincident points get 0)."""
    op = assemble(helmholtz_kernel(k), sources, points, eps=eps)
    u = 4j * op.apply(np.exp(1j * np.asarray(phases)))
    return np.abs(u) ** 2


def write_grid(path, values, bounds):
    """Raw little-endian float64 array (row-major, ``values.shape``) plus a
    JSON sidecar ``<path>.json`` with dims and bounds."""
    path = Path(path)
    values = np.asarray(values, dtype="<f8")
    path.write_bytes(values.tobytes(order="C"))
    meta = {"dims": list(values.shape), "bounds": list(map(float, bounds)), "dtype": "<f8", "order": "C"}
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2))
    return path

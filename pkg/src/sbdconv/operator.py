"""Compressed discrete convolution ``q_k = sum_l G(|x_k - y_l|) f_l``.

Off-line: choose the annulus radius ``a``, decompose the kernel on
``[a delta_max, delta_max]``, sample its spectrum on rings, and correct the
pairs closer than ``delta_min = a delta_max`` with a sparse matrix ``D``.
On-line: two type-III NUFFTs around a diagonal multiply, plus ``D f``.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .errors import DomainError
from .kernels import RadialKernel, helmholtz_kernel, laplace_kernel
from .nufft import DIRECT_THRESHOLD, NufftPlan, nufft_apply
from .quadrature import FrequencyQuadrature, eval_gapprox, flatten
from .sbd import SBDecomposition, decompose

__all__ = [
    "CompressedOperator",
    "PointCloud",
    "SparsePairMatrix",
    "assemble",
    "choose_parameters",
    "cloud_diameter",
    "direct_sum",
    "kernel_from_spec",
    "load_operator",
    "neighbor_pairs",
]

FORMAT_VERSION = 1

# gamma needed by the Laplace SBD per unit of |log eps| (measured: gamma is
# 1.71 at 1e-3 and 3.66 at 1e-6)
C_P = 0.27


def cloud_diameter(points):
    """Largest pairwise distance, exactly, via convex hull + rotating calipers."""
    points = np.asarray(points, dtype=float)
    n = len(points)
    if n < 2:
        return 0.0
    try:
        hull = points[ConvexHull(points).vertices]  # counter-clockwise
    except (QhullError, ValueError):
        # all points collinear (or coincident): the two-sweep farthest-point
        # search is exact on a line
        i = np.argmax(np.sum((points - points[0]) ** 2, axis=1))
        return float(np.sqrt(np.max(np.sum((points - points[i]) ** 2, axis=1))))
    h = len(hull)
    if h <= 64:
        d = hull[:, None, :] - hull[None, :, :]
        return float(np.sqrt(np.max(np.sum(d * d, axis=-1))))

    def area2(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    best = 0.0
    j = 1
    for i in range(h):
        p, q = hull[i], hull[(i + 1) % h]
        while area2(p, q, hull[(j + 1) % h]) > area2(p, q, hull[j]):
            j = (j + 1) % h
        for v in (p, q):
            dx, dy = v[0] - hull[j][0], v[1] - hull[j][1]
            best = max(best, dx * dx + dy * dy)
    return math.sqrt(best)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Points in the plane and their exact diameter."""

    points: np.ndarray
    diameter: float

    @classmethod
    def from_points(cls, points):
        pts = np.ascontiguousarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (n, 2), got {pts.shape}")
        if len(pts) == 0:
            raise ValueError("point cloud is empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        pts.setflags(write=False)
        return cls(pts, cloud_diameter(pts))

    def __len__(self):
        return len(self.points)


def _cloud(x):
    return x if isinstance(x, PointCloud) else PointCloud.from_points(x)


@dataclass(frozen=True, eq=False)
class SparsePairMatrix:
    """Close-correction matrix in CSR layout (rows: targets, columns: sources)."""

    matrix: sparse.csr_matrix

    @property
    def n_pairs(self):
        return self.matrix.nnz

    @property
    def nbytes(self):
        m = self.matrix
        return m.data.nbytes + m.indices.nbytes + m.indptr.nbytes

    def pairs(self):
        coo = self.matrix.tocoo()
        return np.column_stack([coo.row, coo.col])

    def __matmul__(self, f):
        return self.matrix @ f


def choose_parameters(n_points, eps, alpha=0.0):
    """Annulus radius ``a = |log eps|^(2/3) / N^(2/3 - alpha)`` (at most 0.5)
    and a matching order estimate ``P_hint = ceil(C_P |log eps| / a)``.

    ``alpha`` in ``[0, 1/6]`` trades off-line for on-line time: 0 minimizes
    the total, 1/6 the on-line part.
    """
    if not 0.0 <= alpha <= 1.0 / 6.0 + 1e-15:
        raise ValueError("alpha must lie in [0, 1/6]")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    L = abs(math.log(eps))
    if n_points <= L:
        raise DomainError(f"need N > |log eps| = {L:.3g}, got N = {n_points}")
    a = min(0.5, L ** (2.0 / 3.0) / n_points ** (2.0 / 3.0 - alpha))
    return a, int(math.ceil(C_P * L / a))


def neighbor_pairs(source, target, delta_min):
    """All ``(k, l)`` with ``|target_k - source_l| <= delta_min``.

    Returns ``(rows, cols, dist)``; pairs at distance zero are included and
    flagged by ``dist == 0`` so the caller can decide what to do with them.
    """
    if delta_min < 0:
        raise ValueError("delta_min must be >= 0")
    src = _cloud(source).points
    tgt = _cloud(target).points
    rec = cKDTree(tgt).sparse_distance_matrix(cKDTree(src), delta_min, output_type="ndarray")
    order = np.lexsort((rec["j"], rec["i"]))
    rec = rec[order]
    return rec["i"].astype(np.int64), rec["j"].astype(np.int64), rec["v"].astype(float)


def kernel_from_spec(spec: str) -> RadialKernel:
    """``"laplace"`` or ``"helmholtz:<k>"``."""
    spec = spec.strip().lower()
    if spec == "laplace":
        return laplace_kernel()
    if spec.startswith("helmholtz:"):
        return helmholtz_kernel(float(spec.split(":", 1)[1]))
    raise ValueError(f"unknown kernel {spec!r} (expected 'laplace' or 'helmholtz:<k>')")


@dataclass(eq=False)
class CompressedOperator:
    """Matrix-free approximation of ``M_kl = G(|target_k - source_l|)``.

    Coincident pairs get ``diag`` (default 0) instead of the singular
    ``G(0)``.  Call :meth:`apply` (or ``op @ f``); :meth:`rmatvec` applies the
    transpose and :meth:`adjoint_apply` the conjugate transpose.
    """

    source: PointCloud
    target: PointCloud
    quadrature: FrequencyQuadrature  # physical frequencies
    D: SparsePairMatrix
    delta_min: float
    delta_max: float
    eps: float
    a: float
    nufft_tols: tuple
    kernel: Optional[RadialKernel] = None
    kernel_spec: str = ""
    sbd: Optional[SBDecomposition] = None
    info: dict = field(default_factory=dict)
    nufft_method: str = "auto"

    def __post_init__(self):
        self._plans = {}
        self._lock = threading.Lock()

    @property
    def shape(self):
        return len(self.target), len(self.source)

    def _plan(self, key):
        with self._lock:
            plan = self._plans.get(key)
            if plan is None:
                xi = self.quadrature.freqs
                t_far, t_near = self.nufft_tols
                if key == "src_fwd":
                    plan = NufftPlan(self.source.points, xi, -1, t_far, self.nufft_method)
                elif key == "tgt_fwd":
                    plan = NufftPlan(xi, self.target.points, +1, t_far, self.nufft_method)
                elif key == "tgt_adj":
                    plan = NufftPlan(self.target.points, xi, +1, t_far, self.nufft_method)
                else:  # "src_adj"
                    plan = NufftPlan(xi, self.source.points, -1, t_far, self.nufft_method)
                self._plans[key] = plan
            return plan

    def prepare(self, adjoint=False):
        """Build the NUFFT plans now instead of on first use."""
        keys = ["src_fwd", "tgt_fwd"] + (["tgt_adj", "src_adj"] if adjoint else [])
        for key in keys:
            plan = self._plan(key)
            if plan.method == "fast":
                with plan._lock:
                    plan._fast_plan()
        return self

    def _check(self, f, n):
        f = np.asarray(f)
        if f.shape != (n,):
            raise ValueError(f"input has shape {f.shape}, expected ({n},)")
        return f.astype(complex, copy=False)

    def apply(self, f):
        """``q = NUFFT+[target](w * NUFFT-[source](f)) + D f``."""
        f = self._check(f, len(self.source))
        spec = nufft_apply(self._plan("src_fwd"), f)
        q = nufft_apply(self._plan("tgt_fwd"), self.quadrature.weights * spec)
        return q + self.D @ f

    matvec = apply

    def __matmul__(self, f):
        return self.apply(f)

    def rmatvec(self, g):
        """Transpose product ``M^T g``."""
        g = self._check(g, len(self.target))
        spec = nufft_apply(self._plan("tgt_adj"), g)
        q = nufft_apply(self._plan("src_adj"), self.quadrature.weights * spec)
        return q + self.D.matrix.T @ g

    def adjoint_apply(self, g):
        """Conjugate-transpose product ``M^H g``."""
        return np.conj(self.rmatvec(np.conj(self._check(g, len(self.target)))))

    def nbytes(self):
        """Bytes owned by the operator: points, spectrum samples and ``D``."""
        pts = self.source.points.nbytes
        if self.target is not self.source:
            pts += self.target.points.nbytes
        q = self.quadrature
        return int(pts + q.freqs.nbytes + q.weights.nbytes + self.D.nbytes)

    def dense_ratio(self):
        """:meth:`nbytes` over the ``16 N_t N_s`` bytes of the dense complex matrix."""
        return self.nbytes() / (16.0 * len(self.target) * len(self.source))

    def save(self, path):
        """Write the off-line outputs to a versioned ``.npz`` file."""
        m = self.D.matrix
        meta = {
            "version": FORMAT_VERSION,
            "kernel_spec": self.kernel_spec,
            "delta_min": self.delta_min,
            "delta_max": self.delta_max,
            "eps": self.eps,
            "a": self.a,
            "nufft_tols": list(self.nufft_tols),
            "budget": self.quadrature.total_error_budget,
            "same_cloud": self.target is self.source,
            "shape": list(m.shape),
            "info": self.info,
        }
        arrays = dict(
            source=self.source.points,
            freqs=self.quadrature.freqs,
            weights=self.quadrature.weights,
            ring_offsets=self.quadrature.ring_offsets,
            ring_radii=self.quadrature.ring_radii,
            d_data=m.data,
            d_indices=m.indices,
            d_indptr=m.indptr,
            meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8),
        )
        if self.target is not self.source:
            arrays["target"] = self.target.points
        with open(path, "wb") as fh:
            np.savez(fh, **arrays)


def load_operator(path) -> CompressedOperator:
    """Read an operator written by :meth:`CompressedOperator.save`."""
    with np.load(path, allow_pickle=False) as z:
        meta = json.loads(z["meta"].tobytes().decode())
        if meta.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported operator file version {meta.get('version')!r}")
        source = PointCloud.from_points(z["source"])
        target = source if meta["same_cloud"] else PointCloud.from_points(z["target"])
        quad = FrequencyQuadrature(
            z["freqs"].copy(), z["weights"].copy(), z["ring_offsets"].copy(),
            z["ring_radii"].copy(), float(meta["budget"]),
        )
        D = sparse.csr_matrix((z["d_data"], z["d_indices"], z["d_indptr"]), shape=tuple(meta["shape"]))
    kernel = kernel_from_spec(meta["kernel_spec"]) if meta["kernel_spec"] else None
    return CompressedOperator(
        source, target, quad, SparsePairMatrix(D), meta["delta_min"], meta["delta_max"],
        meta["eps"], meta["a"], tuple(meta["nufft_tols"]), kernel, meta["kernel_spec"],
        info=meta.get("info", {}),
    )


def _gapprox_at(quad, y, tol):
    """``G_approx`` at the difference vectors ``y``, by NUFFT when large."""
    if len(y) == 0:
        return np.zeros(0, dtype=complex)
    if len(y) * quad.n_freqs <= DIRECT_THRESHOLD:
        return eval_gapprox(quad, y)
    return nufft_apply(NufftPlan(quad.freqs, y, +1, tol), quad.weights)


def assemble(
    kernel: RadialKernel,
    source,
    target=None,
    eps: float = 1e-6,
    alpha: float = 0.0,
    *,
    a: Optional[float] = None,
    diag: complex = 0.0,
    nufft_method: str = "auto",
    sbd_kwargs: Optional[dict] = None,
) -> CompressedOperator:
    """Build the compressed operator for ``G(|target_k - source_l|)``.

    Parameters
    ----------
    kernel : RadialKernel
    source, target : (n, 2) arrays or PointCloud
        ``target=None`` means the single-cloud case (``target = source``).
    eps : float
        Requested accuracy: ``|q_k - sum_l G f_l| <= eps sum_l |f_l|``.
    alpha : float in [0, 1/6]
        Passed to :func:`choose_parameters` unless ``a`` is given.
    a : float, optional
        Override the annulus radius (in units of the cloud diameter).
    diag : complex
        Value used for coincident pairs (where ``G`` is singular).

    Notes
    -----
    Budget: ``3/8 eps`` for the SBD, ``3/4 eps`` for SBD plus rings, and the
    remaining quarter for the three NUFFTs (two in the far field, one when
    forming ``D``), each scaled by ``W = sum |w_nu|``.
    """
    source = _cloud(source)
    target = source if target is None else _cloud(target)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    info = {}
    if target is source:
        delta_max = source.diameter
    else:
        delta_max = cloud_diameter(np.vstack([source.points, target.points]))
    if delta_max == 0:
        delta_max = 1.0
    if a is None:
        a, info["P_hint"] = choose_parameters(max(len(source), len(target)), eps, alpha)
    if not 0 < a < 1:
        raise DomainError("a must lie in (0, 1)")

    unit = kernel.scaled(delta_max)
    sbd = decompose(unit, a, 0.375 * eps, **(sbd_kwargs or {}))
    quad = flatten(sbd, 0.75 * eps).scaled(delta_max)
    W = quad.weight_l1
    t_far = max(eps / (16 * W), 1e-14)
    t_near = max(eps / (8 * W), 1e-14)
    info.update(P=sbd.P, gamma=sbd.gamma, sbd_error=sbd.achieved_error, n_freqs=quad.n_freqs, W=W)

    delta_min = a * delta_max
    rows, cols, dist = neighbor_pairs(source, target, delta_min)
    y = target.points[rows] - source.points[cols]
    vals = -_gapprox_at(quad, y, t_near)
    far = dist > 0
    vals[far] += np.asarray(kernel.eval(dist[far]))
    vals[~far] += diag
    if not kernel.is_complex and np.imag(diag) == 0:
        vals = vals.real.copy()
    D = sparse.csr_matrix((vals, (rows, cols)), shape=(len(target), len(source)))
    info["n_pairs"] = int(D.nnz)
    return CompressedOperator(
        source, target, quad, SparsePairMatrix(D), delta_min, delta_max, eps, a,
        (t_far, t_near), kernel, kernel.spec, sbd, info, nufft_method,
    )


def direct_sum(kernel: RadialKernel, source, target=None, f=None, *, diag=0.0, rows=None):
    """Reference ``O(N_t N_s)`` evaluation of ``sum_l G(|t_k - s_l|) f_l``.

    Coincident pairs contribute ``diag * f_l``.  ``f`` may hold several
    right-hand sides as columns.  ``rows`` restricts the output to a subset
    of targets.
    """
    src = source.points if isinstance(source, PointCloud) else np.asarray(source, dtype=float)
    tgt = src if target is None else (target.points if isinstance(target, PointCloud) else np.asarray(target, dtype=float))
    if rows is not None:
        tgt = tgt[rows]
    f = np.asarray(f)
    out = np.zeros((len(tgt),) + f.shape[1:], dtype=np.result_type(f, complex))
    step = max(1, (1 << 21) // max(1, len(src)))
    for s in range(0, len(tgt), step):
        d = tgt[s : s + step, None, :] - src[None, :, :]
        r = np.sqrt(np.sum(d * d, axis=-1))
        zero = r == 0
        G = np.empty(r.shape, dtype=complex)
        G[~zero] = kernel.eval(r[~zero])
        G[zero] = diag
        out[s : s + step] = G @ f
    return out

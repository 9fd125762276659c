"""Sparse Bessel Decomposition of a radial kernel on the annulus ``a < r < 1``.

The decomposition ``G(r) ~ G(1) + sum_p alpha_p e_p(r)`` minimizes the H^1
seminorm of the residual over the annulus.  In the normalized basis the
normal equations read ``A alpha = b`` with ``A`` the annulus Gram matrix of
the ``e_p`` (closed form below), which is symmetric positive definite and is
factored by Cholesky.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy import integrate, linalg, special

from .errors import ConditioningError, ConvergenceError, DegenerateBasisError, DomainError
from .kernels import (
    RESCALED_TO_ROOT,
    ROBIN,
    ROOT_OF_Y0,
    RadialKernel,
    helmholtz_plan,
    y0_kernel,
)
from .special_functions import BesselBasis, dirichlet_basis, j1_roots, robin_basis

__all__ = [
    "GramMatrix",
    "SBDecomposition",
    "assemble_gram",
    "assemble_rhs",
    "conditioning_F",
    "decompose",
    "enforce_multi_dirichlet",
    "eval_sbd",
    "fixed_order",
    "helmholtz_fixed_order",
    "gram_condition",
    "helmholtz_sbd",
    "lambda_min_bound",
    "sbd_fixed_order",
    "solve_sbd",
    "validation_grid",
]

_CHUNK = 1 << 22  # elements per temporary (rows x basis) block


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Annulus Gram matrix ``A_kl = int_{a<|x|<1} grad e_k . grad e_l``."""

    matrix: np.ndarray
    a: float

    @property
    def dim(self):
        return self.matrix.shape[0]

    def eigenvalues(self):
        return linalg.eigvalsh(self.matrix)

    def condition_number(self):
        w = self.eigenvalues()
        return w[-1] / w[0]


def _check_radius(a):
    a = float(a)
    if not 0.0 < a < 1.0:
        raise DomainError(f"inner radius a must lie in (0, 1), got {a}")
    return a


def assemble_gram(basis: BesselBasis, a: float) -> GramMatrix:
    """Closed-form Gram matrix of ``basis`` on the annulus ``(a, 1)``.

    Off-diagonal entries come from Green's formula for two eigenfunctions
    with distinct frequencies; diagonal ones from the antiderivative of
    ``u J_1(u)^2``.  Both hold for any frequencies, so the same code serves
    the Dirichlet and Robin bases (the latter adds its boundary term).
    """
    a = _check_radius(a)
    rho = np.asarray(basis.roots, dtype=float)
    C = np.asarray(basis.norm_constants, dtype=float)
    if np.any(np.diff(rho) <= 0):
        raise DegenerateBasisError("basis frequencies must be strictly increasing")

    def bracket(r):
        u = special.j0(rho * r)
        v = special.j1(rho * r)
        ru = rho * u
        # F_ij(r) - F_ji(r) with F_ij(r) = rho_i r J0(rho_i r) J0'(rho_j r)
        B = -r * (np.outer(ru, v) - np.outer(v, ru))
        x = rho * r
        Fd = 0.5 * x * x * (u * u + v * v) - x * u * v
        return B, Fd

    B1, F1 = bracket(1.0)
    Ba, Fa = bracket(a)
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = np.subtract.outer(rho * rho, rho * rho)
        A = 2 * np.pi * np.outer(C * rho, C * rho) * (B1 - Ba) / denom
    np.fill_diagonal(A, 2 * np.pi * C * C * (F1 - Fa))
    if basis.boundary == "robin":
        e1 = C * special.j0(rho)
        A += 2 * np.pi * basis.H * np.outer(e1, e1)
    A = np.triu(A) + np.triu(A, 1).T
    return GramMatrix(A, a)


def _panel_rule(a, rho_max, n_gauss=16):
    """Composite Gauss-Legendre rule on ``[a, 1]``.

    Panels are graded geometrically from ``a`` (to follow ``1/r``-type
    singular behaviour of kernels just outside the excluded disk) and are at
    most one oscillation of ``J_1(rho_max r)`` long.
    """
    n_geo = max(2, int(math.ceil(math.log(1.0 / a) / math.log(1.25))) + 1)
    n_uni = max(2, int(math.ceil(rho_max * (1 - a) / (2 * np.pi))) + 1)
    brk = np.unique(np.concatenate([np.geomspace(a, 1.0, n_geo), np.linspace(a, 1.0, n_uni)]))
    x, w = np.polynomial.legendre.leggauss(n_gauss)
    lo, hi = brk[:-1, None], brk[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x + 1)).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def _basis_matrix_product(fun, rho, nodes, vec):
    """``sum_j fun(rho_p nodes_j) vec_j`` for every p, in memory-bounded blocks."""
    out = np.empty(len(rho), dtype=np.result_type(vec, float))
    step = max(1, _CHUNK // max(1, len(nodes)))
    for s in range(0, len(rho), step):
        out[s : s + step] = fun(np.multiply.outer(rho[s : s + step], nodes)) @ vec
    return out


def assemble_rhs(kernel: RadialKernel, basis: BesselBasis, a: float, oscillation=0.0):
    """Right-hand side ``b_p = int_{a<|x|<1} grad G . grad e_p`` (+ Robin term).

    ``oscillation`` is an optional extra frequency present in ``G`` itself;
    panels are sized for the larger of it and the top basis frequency.
    """
    a = _check_radius(a)
    rho = np.asarray(basis.roots, dtype=float)
    C = np.asarray(basis.norm_constants, dtype=float)
    nodes, weights = _panel_rule(a, max(rho[-1], oscillation))
    g = weights * nodes * np.asarray(kernel.deriv(nodes))
    b = -2 * np.pi * C * rho * _basis_matrix_product(special.j1, rho, nodes, g)
    if basis.boundary == "robin":
        g1 = np.asarray(kernel.eval(np.array([1.0])))[0]
        b = b + 2 * np.pi * basis.H * g1 * C * special.j0(rho)
    return b


def validation_grid(a, rho_max=0.0, n_min=2048):
    """Geometric grid on ``[a, 1]``, dense near ``a``, with at least four
    points per period of the fastest basis function near ``r = 1``."""
    n = max(n_min, int(math.ceil(2 * rho_max * math.log(1.0 / a) / np.pi)) + 1)
    return np.geomspace(a, 1.0, n)


@dataclass(frozen=True, eq=False)
class SBDecomposition:
    """Result of an SBD solve.

    The represented function is::

        constant_offset + sum_p coeffs[p] * C_p * J0(rho_p * dilation * r)
                        + sum_t extra_coefs[t] * J0(extra_freqs[t] * r)

    ``a`` and ``gamma = P a`` refer to the variable in which the Gram system
    was solved; with ``dilation != 1`` the physical validity range is
    ``[a / dilation, 1]``.
    """

    a: float
    coeffs: np.ndarray
    basis: BesselBasis
    constant_offset: complex
    achieved_error: float
    dilation: float = 1.0
    extra_freqs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    extra_coefs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    kernel_name: str = ""

    @property
    def P(self):
        return len(self.coeffs)

    @property
    def gamma(self):
        return self.P * self.a

    @property
    def frequencies(self):
        """Radii of every ring needed downstream (basis first, then extras)."""
        return np.concatenate([self.basis.roots * self.dilation, self.extra_freqs])

    @property
    def amplitudes(self):
        """Coefficient multiplying ``J0(freq r)`` for each entry of
        :attr:`frequencies`."""
        return np.concatenate([self.coeffs * self.basis.norm_constants, self.extra_coefs])

    def __call__(self, r):
        return eval_sbd(self, r)

    def to_dict(self):
        def enc(x):
            x = np.asarray(x)
            if np.iscomplexobj(x):
                return {"re": x.real.tolist(), "im": x.imag.tolist()}
            return x.tolist()

        return {
            "version": 1,
            "a": self.a,
            "P": self.P,
            "roots": self.basis.roots.tolist(),
            "norm_constants": self.basis.norm_constants.tolist(),
            "boundary": self.basis.boundary,
            "H": self.basis.H,
            "coeffs": enc(self.coeffs),
            "constant_offset": enc(self.constant_offset),
            "achieved_error": self.achieved_error,
            "dilation": self.dilation,
            "extra_freqs": self.extra_freqs.tolist(),
            "extra_coefs": enc(self.extra_coefs),
            "kernel_name": self.kernel_name,
        }

    @classmethod
    def from_dict(cls, d):
        def dec(x):
            if isinstance(x, dict):
                return np.asarray(x["re"]) + 1j * np.asarray(x["im"])
            return np.asarray(x, dtype=float)

        if d.get("version") != 1:
            raise ValueError(f"unsupported SBD record version {d.get('version')!r}")
        basis = BesselBasis(
            np.asarray(d["roots"], dtype=float),
            np.asarray(d["norm_constants"], dtype=float),
            d["boundary"],
            float(d["H"]),
        )
        offset = dec(d["constant_offset"])
        return cls(
            a=float(d["a"]),
            coeffs=dec(d["coeffs"]),
            basis=basis,
            constant_offset=offset.item(),
            achieved_error=float(d["achieved_error"]),
            dilation=float(d["dilation"]),
            extra_freqs=np.asarray(d["extra_freqs"], dtype=float),
            extra_coefs=dec(d["extra_coefs"]),
            kernel_name=d.get("kernel_name", ""),
        )


def _bessel_sum(freqs, amps, r):
    """``sum_p amps_p J0(freqs_p r)`` for every ``r`` (1-D)."""
    out = np.zeros(r.shape, dtype=np.result_type(amps, float))
    if len(freqs) == 0:
        return out
    step = max(1, _CHUNK // len(freqs))
    for s in range(0, len(r), step):
        out[s : s + step] = special.j0(np.multiply.outer(r[s : s + step], freqs)) @ amps
    return out


def eval_sbd(sbd: SBDecomposition, r):
    """Evaluate the decomposition at radii ``r`` (any shape, ``r >= 0``)."""
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    vals = sbd.constant_offset + _bessel_sum(sbd.frequencies, sbd.amplitudes, flat)
    if np.ndim(vals) == 0:
        vals = np.full(flat.shape, vals)
    vals = vals.reshape(r.shape)
    return vals if vals.ndim else vals.item()


def _offset_for(kernel, boundary):
    if boundary == "robin":
        return 0.0
    return np.asarray(kernel.eval(np.array([1.0])))[0].item()


def _make_basis(boundary, H, P):
    if boundary == "dirichlet":
        return dirichlet_basis(P)
    if boundary == "robin":
        return robin_basis(H, P)
    raise ValueError(f"unknown boundary condition {boundary!r}")


class _Solver:
    """Caches the basis, Gram matrix and right-hand side for the largest
    order seen so far; smaller orders reuse leading blocks."""

    def __init__(self, kernel, a, boundary, H, oscillation):
        self.kernel, self.a, self.boundary, self.H = kernel, a, boundary, H
        self.oscillation = oscillation
        self.P_cached = 0
        self.offset = _offset_for(kernel, boundary)

    def _grow(self, P):
        if P <= self.P_cached:
            return
        self.basis = _make_basis(self.boundary, self.H, P)
        self.gram = assemble_gram(self.basis, self.a).matrix
        self.rhs = assemble_rhs(self.kernel, self.basis, self.a, self.oscillation)
        self.P_cached = P

    def coefficients(self, P):
        self._grow(P)
        try:
            cf = linalg.cho_factor(self.gram[:P, :P], lower=True, check_finite=False)
        except linalg.LinAlgError as exc:
            raise ConditioningError(f"Gram matrix not positive definite at P={P}, gamma={P * self.a:.3g}") from exc
        return linalg.cho_solve(cf, self.rhs[:P], check_finite=False), self.basis.truncate(P)

    def error(self, coeffs, basis, grid, target):
        approx = self.offset + _bessel_sum(basis.roots, coeffs * basis.norm_constants, grid)
        return float(np.max(np.abs(target - approx)))


def sbd_fixed_order(kernel, a, P, *, boundary="dirichlet", H=0.0, oscillation=0.0, grid=None):
    """SBD of order exactly ``P`` (no adaptivity); error measured on ``grid``."""
    a = _check_radius(a)
    solver = _Solver(kernel, a, boundary, H, oscillation)
    coeffs, basis = solver.coefficients(int(P))
    if grid is None:
        grid = validation_grid(a, basis.roots[-1])
    err = solver.error(coeffs, basis, grid, np.asarray(kernel.eval(grid)))
    return SBDecomposition(a, coeffs, basis, solver.offset, err, kernel_name=kernel.name)


def solve_sbd(
    kernel: RadialKernel,
    a: float,
    tol: float,
    P_max: Optional[int] = None,
    *,
    P_min: Optional[int] = None,
    boundary: str = "dirichlet",
    H: float = 0.0,
    multi_dirichlet: int = 0,
    omega_hint: Optional[float] = None,
    oscillation: float = 0.0,
) -> SBDecomposition:
    """Smallest-order SBD whose L-infinity error on ``[a, 1]`` is ``<= tol``.

    The order is searched by doubling from ``P_min`` (default ``ceil(1/a)``,
    i.e. ``gamma = 1``) and then bisecting, never beyond ``P_max`` (default
    ``ceil(8/a)``).  The error is measured on :func:`validation_grid`.

    With ``multi_dirichlet = n > 0`` the kernel is first corrected by
    :func:`enforce_multi_dirichlet`; the correction terms are carried in the
    result so that it still approximates ``kernel``.

    Raises
    ------
    ConvergenceError
        ``P_max`` reached without meeting ``tol``; carries the best error.
    ConditioningError
        Cholesky breaks down before ``tol`` is met.
    """
    a = _check_radius(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    target_kernel = kernel
    corrections = []
    if multi_dirichlet:
        kernel, corrections = enforce_multi_dirichlet(kernel, multi_dirichlet, omega_hint)
    P_lo = max(1, int(P_min) if P_min is not None else int(math.ceil(1.0 / a)))
    P_cap = int(P_max) if P_max is not None else int(math.ceil(8.0 / a))
    if P_cap < 1:
        raise ValueError("P_max must be >= 1")
    P_lo = min(P_lo, P_cap)
    oscillation = max([oscillation] + [w for w, _ in corrections])

    solver = _Solver(kernel, a, boundary, H, oscillation)
    # the search runs on the coarse geometric grid; the accepted order is
    # then confirmed on the oscillation-resolving grid
    coarse = validation_grid(a)
    coarse_target = np.asarray(kernel.eval(coarse))
    best = (math.inf, None)
    results = {}

    def attempt(P):
        nonlocal best
        if P not in results:
            coeffs, basis = solver.coefficients(P)
            err = solver.error(coeffs, basis, coarse, coarse_target)
            if err < best[0]:
                best = (err, P)
            results[P] = (err, coeffs, basis)
        return results[P]

    def ok(P):
        return attempt(P)[0] <= tol

    def give_up():
        raise ConvergenceError(
            f"SBD did not reach tol={tol:g} up to P={P_cap} (best {best[0]:.3g} at P={best[1]})",
            best_error=best[0],
            best_order=best[1],
        )

    P = P_lo
    try:
        if ok(P):
            hi = P
        else:
            lo = P
            while True:
                if P >= P_cap:
                    give_up()
                P = min(2 * P, P_cap)
                try:
                    good = ok(P)
                except ConditioningError:
                    # back off to the largest order that still factors
                    bad = P
                    while bad - lo > 1:
                        mid = (lo + bad) // 2
                        try:
                            attempt(mid)
                            lo = mid
                        except ConditioningError:
                            bad = mid
                    passing = [q for q in results if results[q][0] <= tol]
                    if not passing:
                        raise ConditioningError(
                            f"Gram matrix not positive definite beyond P={lo} "
                            f"(gamma={lo * a:.3g}); best error {best[0]:.3g} > tol={tol:g}"
                        )
                    P, good = min(passing), True
                    lo = max([q for q in results if q < P], default=P_lo - 1)
                if good:
                    hi = P
                    break
                lo = P
            while hi - lo > 1:
                mid = (lo + hi) // 2
                try:
                    good = ok(mid)
                except ConditioningError:
                    good = False
                if good:
                    hi = mid
                else:
                    lo = mid
        while True:
            _, coeffs, basis = results[hi]
            grid = validation_grid(a, basis.roots[-1])
            err = solver.error(coeffs, basis, grid, np.asarray(kernel.eval(grid)))
            if err <= tol:
                break
            if hi >= P_cap:
                give_up()
            hi = min(P_cap, hi + max(1, hi // 50))
            attempt(hi)
    except ConditioningError as exc:
        exc.best_error = best[0]
        raise
    ex_f = np.array([w for w, _ in corrections], dtype=float)
    ex_c = np.array([m for _, m in corrections])
    sbd = SBDecomposition(
        a, coeffs, basis, solver.offset, err, extra_freqs=ex_f,
        extra_coefs=ex_c if len(ex_c) else np.zeros(0), kernel_name=target_kernel.name,
    )
    if corrections:
        err = float(np.max(np.abs(np.asarray(target_kernel.eval(grid)) - eval_sbd(sbd, grid))))
        sbd = replace(sbd, achieved_error=err)
    return sbd


def measured_error(sbd: SBDecomposition, kernel: RadialKernel, grid=None):
    """Max of ``|G - sbd|`` over ``grid`` (default: the validation grid)."""
    lo = sbd.a / sbd.dilation
    if grid is None:
        grid = validation_grid(sbd.a, sbd.basis.roots[-1]) / sbd.dilation
        grid = grid[grid <= 1.0]
    grid = grid[grid >= lo * (1 - 1e-14)]
    return float(np.max(np.abs(np.asarray(kernel.eval(grid)) - eval_sbd(sbd, grid))))


def gram_condition(sbd: SBDecomposition):
    """2-norm condition number of the Gram matrix behind ``sbd``."""
    return assemble_gram(sbd.basis, sbd.a).condition_number()


def enforce_multi_dirichlet(kernel: RadialKernel, n: int, omega_hint: Optional[float] = None):
    """Subtract ``K(r) = sum_t mu_t J0(omega_t r)`` so that ``G - K`` has
    vanishing ``(-Delta)^t`` at ``r = 1`` for ``t = 1..n``.

    ``omega_t`` are zeros of ``J_1`` (so ``K`` leaves ``G'(1)`` untouched),
    taken in order of distance to ``omega'``: either ``omega_hint`` or the
    square root of the geometric mean of ratios of successive iterates
    ``|lambda_{t+1} / lambda_t|`` with ``lambda_0 = G(1)``.

    Returns
    -------
    (RadialKernel, list of (omega_t, mu_t))
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return kernel, []
    its = kernel.laplacian_iterates_at_one
    if its is None or len(its) < n:
        raise ValueError(f"kernel provides {0 if its is None else len(its)} Laplacian iterates, need {n}")
    lam = np.asarray(its[:n])
    if not np.any(lam):
        return kernel, []
    if omega_hint is None:
        g1 = np.asarray(kernel.eval(np.array([1.0])))[0]
        seq = np.abs(np.concatenate([[g1], lam]))
        ratios = [seq[t + 1] / seq[t] for t in range(len(seq) - 1) if seq[t] > 0 and seq[t + 1] > 0]
        if not ratios:
            raise ValueError("cannot infer a frequency from the iterates; pass omega_hint")
        omega_hint = math.sqrt(math.exp(np.mean(np.log(ratios))))
    cand = j1_roots(int(omega_hint / np.pi) + n + 2)
    omega = np.sort(cand[np.argsort(np.abs(cand - omega_hint), kind="stable")[:n]])
    t = np.arange(1, n + 1)[:, None]
    # rows scaled by omega_hint^(2t) so the system stays balanced
    M = (omega[None, :] / omega_hint) ** (2 * t) * special.j0(omega)[None, :]
    rhs = lam / omega_hint ** (2 * t[:, 0])
    if np.linalg.cond(M) > 1e12:
        raise np.linalg.LinAlgError("multi-Dirichlet system is singular (repeated frequencies?)")
    mu = np.linalg.solve(M, rhs)
    g, dg = kernel.eval, kernel.deriv

    def k_eval(r):
        r = np.asarray(r, dtype=float)
        return special.j0(np.multiply.outer(r, omega)) @ mu

    def k_deriv(r):
        r = np.asarray(r, dtype=float)
        return -special.j1(np.multiply.outer(r, omega)) @ (mu * omega)

    more = np.asarray(its)
    tt = np.arange(1, len(more) + 1)
    new_its = more - np.array([np.sum(mu * omega ** (2 * s) * special.j0(omega)) for s in tt])
    new_its[:n] = 0.0
    corrected = replace(
        kernel,
        eval=lambda r: np.asarray(g(r)) - k_eval(r),
        deriv=lambda r: np.asarray(dg(r)) - k_deriv(r),
        laplacian_iterates_at_one=tuple(new_its.tolist()),
        name=f"{kernel.name}-K{n}",
        eigenvalue=None,
    )
    return corrected, list(zip(omega.tolist(), mu.tolist()))


def conditioning_F(gamma):
    """``F(gamma) = 1 - int_0^{pi gamma} (t/2) (J1(t)^2 - J0(t) J2(t)) dt``."""

    def integrand(t):
        return 0.5 * t * (special.j1(t) ** 2 - special.j0(t) * special.jv(2, t))

    val, _ = integrate.quad(integrand, 0.0, np.pi * float(gamma), limit=400, epsabs=1e-14, epsrel=1e-13)
    return 1.0 - val


def lambda_min_bound(gamma, P):
    """Lower bounds on the smallest Gram eigenvalue.

    Returns ``(theorem_bound, conjecture_bound)`` with
    ``theorem_bound = F(gamma) - pi^4 gamma^4 / (144 P)`` (meaningful for
    ``gamma`` below the first zero of ``F``, about 1.471) and the empirical
    ``conjecture_bound = 180 exp(-5.8 gamma)`` (for ``P >= 10, gamma >= 1.4``).
    """
    if gamma <= 0 or P < 1:
        raise ValueError("need gamma > 0 and P >= 1")
    theorem = conditioning_F(gamma) - np.pi**4 * gamma**4 / (144.0 * P)
    return theorem, 180.0 * math.exp(-5.8 * gamma)


def _helmholtz_setup(k, a, small_factor=0.5):
    """What to decompose for ``Y_0(k r) / 4`` on ``[a, 1]``: returns
    ``(a_s, kernel, boundary, H, dilation, k_eff)`` where the SBD is solved
    in ``s = dilation * r`` on ``[a_s, 1]``."""
    a = _check_radius(a)
    plan = helmholtz_plan(k, small_factor)
    if plan.regime == ROOT_OF_Y0:
        return a, y0_kernel(k, 0.25), "dirichlet", 0.0, 1.0, k
    if plan.regime == RESCALED_TO_ROOT:
        return a * plan.dilation, y0_kernel(plan.k_prime, 0.25), "dirichlet", 0.0, plan.dilation, plan.k_prime
    if plan.regime == ROBIN:
        return a, y0_kernel(k, 0.25), "robin", plan.H, 1.0, k
    raise ValueError(plan.regime)  # pragma: no cover


def _with_helmholtz_parts(sbd, k, dilation):
    return replace(
        sbd,
        dilation=dilation,
        extra_freqs=np.array([k], dtype=float),
        extra_coefs=np.array([-0.25j]),
        kernel_name=f"helmholtz(k={k:g})",
    )


def helmholtz_sbd(k, a, tol, *, small_factor=0.5, P_max=None, P_min=None):
    """Decomposition of ``-(i/4) H_0^(1)(k r)`` valid on ``[a, 1]``.

    Only ``Y_0(k r) / 4`` is decomposed; ``-(i/4) J_0(k r)`` is already a
    single dilated ``J_0`` and is carried as an extra term.  The regime
    (Y0 root, rescaled to the next root, or Robin) comes from
    :func:`~sbdconv.kernels.helmholtz_plan`.
    """
    a_s, kernel, boundary, H, dil, k_eff = _helmholtz_setup(k, a, small_factor)
    if P_max is None:
        P_max = int(math.ceil(8.0 / a_s)) + int(math.ceil(k_eff / np.pi)) + 2
    sbd = solve_sbd(kernel, a_s, tol, P_max, P_min=P_min, boundary=boundary, H=H, oscillation=k_eff)
    return _with_helmholtz_parts(sbd, k, dil)


def helmholtz_fixed_order(k, a, P, *, small_factor=0.5):
    """Order-``P`` Helmholtz decomposition; ``achieved_error`` is that of the
    ``Y_0`` part (the ``J_0`` part is exact)."""
    a_s, kernel, boundary, H, dil, k_eff = _helmholtz_setup(k, a, small_factor)
    sbd = sbd_fixed_order(kernel, a_s, P, boundary=boundary, H=H, oscillation=k_eff)
    return _with_helmholtz_parts(sbd, k, dil)


def fixed_order(kernel: RadialKernel, a: float, P: int) -> SBDecomposition:
    """Order-``P`` decomposition, dispatching on the kernel type."""
    if kernel.wavenumber is not None:
        return helmholtz_fixed_order(kernel.wavenumber, a, P)
    return sbd_fixed_order(kernel, a, P)


def decompose(kernel: RadialKernel, a: float, tol: float, **kw) -> SBDecomposition:
    """Dispatch to :func:`helmholtz_sbd` or :func:`solve_sbd` by kernel type."""
    if kernel.wavenumber is not None:
        return helmholtz_sbd(kernel.wavenumber, a, tol, **kw)
    return solve_sbd(kernel, a, tol, **kw)

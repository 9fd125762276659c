"""Bessel functions, their zeros, and the normalized radial Laplace eigenbasis.

Function values come from :mod:`scipy.special` (Cephes/Amos, accurate to a
few ulp on the ranges used here).  Zeros are computed locally by bracketed
Newton iteration so that every root is certified to lie in a known
interval, and the Robin (Dini) zeros, which scipy does not provide, share the
same machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "BesselBasis",
    "FIRST_Y0_ROOT",
    "bessel_j",
    "bessel_y0",
    "bessel_y0_prime",
    "dirichlet_basis",
    "dirichlet_roots",
    "j1_roots",
    "norm_constant",
    "robin_basis",
    "robin_norm_constants",
    "robin_roots",
    "y0_roots",
]

FIRST_Y0_ROOT = 0.8935769662791675


def bessel_j(order, r):
    """Bessel function of the first kind ``J_order(r)`` for integer order.

    Parameters
    ----------
    order : int
        Nonnegative integer order.
    r : float or array_like
        Nonnegative argument(s).

    Returns
    -------
    float or ndarray
    """
    if int(order) != order or order < 0:
        raise DomainError(f"order must be a nonnegative integer, got {order!r}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("bessel_j is only defined here for r >= 0")
    if order == 0:
        out = special.j0(r)
    elif order == 1:
        out = special.j1(r)
    else:
        out = special.jv(int(order), r)
    return out if out.ndim else float(out)


def bessel_y0(r):
    """Bessel function of the second kind ``Y_0(r)`` for ``r > 0``."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("Y0 has a logarithmic singularity at 0; need r > 0")
    out = special.y0(r)
    return out if out.ndim else float(out)


def bessel_y0_prime(r):
    """Derivative ``Y_0'(r) = -Y_1(r)``."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("need r > 0")
    out = -special.y1(r)
    return out if out.ndim else float(out)


def _bracketed_newton(f, fprime, lo, hi, x0, maxiter=100):
    """Vectorized safeguarded Newton iteration on sign-changing brackets.

    Each Newton step that leaves the current bracket is replaced by a
    bisection step, and the bracket shrinks around the sign change at every
    iteration, so convergence is guaranteed.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    x = np.array(x0, dtype=float)
    flo = f(lo)
    for _ in range(maxiter):
        fx = f(x)
        # shrink the bracket around the sign change
        same = np.sign(fx) == np.sign(flo)
        lo = np.where(same, x, lo)
        flo = np.where(same, fx, flo)
        hi = np.where(same, hi, x)
        step = fx / fprime(x)
        xn = x - step
        outside = ~((xn > lo) & (xn < hi)) | ~np.isfinite(xn)
        xn = np.where(outside, 0.5 * (lo + hi), xn)
        done = np.abs(xn - x) <= 4 * np.spacing(np.abs(x))
        x = xn
        if np.all(done | (fx == 0)):
            break
    return x


def dirichlet_roots(P):
    """First ``P`` positive zeros of ``J_0``.

    Each zero is searched in ``[pi (p - 1/4), pi (p - 1/8)]``, which is known
    to contain exactly the p-th zero, starting from the left end.
    """
    P = int(P)
    if P < 1:
        raise DomainError("P must be >= 1")
    p = np.arange(1, P + 1, dtype=float)
    lo = np.pi * (p - 0.25)
    hi = np.pi * (p - 0.125)
    return _bracketed_newton(special.j0, lambda x: -special.j1(x), lo, hi, lo)


def j1_roots(P):
    """First ``P`` positive zeros of ``J_1`` (zero at the origin excluded)."""
    P = int(P)
    if P < 1:
        raise DomainError("P must be >= 1")
    j0z = dirichlet_roots(P + 1)
    lo, hi = j0z[:-1], j0z[1:]
    # J1' = J0 - J1/x
    return _bracketed_newton(
        special.j1, lambda x: special.j0(x) - special.j1(x) / x, lo, hi, 0.5 * (lo + hi)
    )


def robin_roots(H, P):
    """First ``P`` positive solutions of ``r J_0'(r) + H J_0(r) = 0``.

    For ``H > 0`` the p-th root lies strictly between the (p-1)-th zero of
    ``J_1`` (0 for p = 1) and the p-th zero of ``J_0``.  For ``H = 0`` the
    equation reduces to ``J_1(r) = 0``; the constant mode that completes the
    basis in that case is the caller's responsibility.
    """
    H = float(H)
    if H < 0:
        raise DomainError("H must be >= 0")
    P = int(P)
    if P < 1:
        raise DomainError("P must be >= 1")
    if H == 0:
        return j1_roots(P)
    j0z = dirichlet_roots(P)
    lo = np.concatenate([[0.0], j1_roots(P - 1)]) if P > 1 else np.array([0.0])
    hi = j0z

    def f(x):
        return H * special.j0(x) - x * special.j1(x)

    def fp(x):
        return -x * special.j0(x) - H * special.j1(x)

    return _bracketed_newton(f, fp, lo, hi, 0.5 * (lo + hi))


def y0_roots(n):
    """First ``n`` positive zeros of ``Y_0``."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    return np.asarray(special.y0_zeros(n)[0].real, dtype=float)


def smallest_y0_root_at_least(k):
    """Smallest zero of ``Y_0`` that is ``>= k``."""
    n = int(k / np.pi) + 3
    roots = y0_roots(n)
    return float(roots[np.searchsorted(roots, k)])


def norm_constant(p, rho):
    """Normalization ``C_p = 1 / (sqrt(pi) rho_p |J_1(rho_p)|)`` of ``e_p``.

    Works elementwise if ``rho`` is an array; ``p`` is only used for the
    error message.
    """
    rho = np.asarray(rho, dtype=float)
    j1 = np.abs(special.j1(rho))
    if np.any(j1 == 0):
        raise ArithmeticError(f"J_1 vanishes at rho_{p}; not a J_0 zero")
    out = 1.0 / (np.sqrt(np.pi) * rho * j1)
    return out if out.ndim else float(out)


def _energy_unit_disk(rho):
    """``int_0^1 r (d/dr J_0(rho r))^2 dr`` in closed form."""
    j0, j1 = special.j0(rho), special.j1(rho)
    return 0.5 * rho**2 * (j0**2 + j1**2) - rho * j0 * j1


def robin_norm_constants(rho, H):
    """Constants making ``a_H(e_p, e_p) = 1`` for ``e_p = C_p J_0(rho_p r)``.

    ``a_H(u, v) = int_B grad u . grad v + H int_{|x|=1} u v``; both parts have
    closed forms for dilated ``J_0``.
    """
    rho = np.asarray(rho, dtype=float)
    energy = 2 * np.pi * (_energy_unit_disk(rho) + H * special.j0(rho) ** 2)
    return 1.0 / np.sqrt(energy)


@dataclass(frozen=True, eq=False)
class BesselBasis:
    """Normalized radial eigenfunctions ``e_p(r) = C_p J_0(rho_p r)``.

    Attributes
    ----------
    roots : ndarray, shape (P,)
        Strictly increasing frequencies ``rho_p``.
    norm_constants : ndarray, shape (P,)
        ``C_p``.
    boundary : {"dirichlet", "robin"}
    H : float
        Robin coefficient (0 for Dirichlet).
    """

    roots: np.ndarray
    norm_constants: np.ndarray
    boundary: str = "dirichlet"
    H: float = 0.0

    def __post_init__(self):
        self.roots.setflags(write=False)
        self.norm_constants.setflags(write=False)

    @property
    def order_count(self):
        return len(self.roots)

    P = order_count

    def truncate(self, P):
        """Basis made of the first ``P`` functions."""
        if P > self.order_count:
            raise ValueError("cannot truncate to a larger basis")
        return BesselBasis(self.roots[:P].copy(), self.norm_constants[:P].copy(), self.boundary, self.H)

    def __call__(self, r):
        """Values ``e_p(r)``, shape ``r.shape + (P,)``."""
        r = np.asarray(r, dtype=float)
        return self.norm_constants * special.j0(np.multiply.outer(r, self.roots))


def dirichlet_basis(P):
    """First ``P`` Dirichlet eigenfunctions of the unit disk."""
    rho = dirichlet_roots(P)
    return BesselBasis(rho, np.atleast_1d(norm_constant(np.arange(1, P + 1), rho)), "dirichlet", 0.0)


def robin_basis(H, P):
    """First ``P`` Robin eigenfunctions (Dini series) with coefficient ``H > 0``."""
    if H <= 0:
        raise DomainError("Robin basis needs H > 0 (H = 0 lacks the constant mode)")
    rho = robin_roots(H, P)
    return BesselBasis(rho, robin_norm_constants(rho, H), "robin", float(H))

"""Radial kernels and the metadata the SBD solver needs about them."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

from .errors import DomainError, KernelValidationError
from .special_functions import FIRST_Y0_ROOT, smallest_y0_root_at_least

__all__ = [
    "HelmholtzPlan",
    "RadialKernel",
    "helmholtz_kernel",
    "helmholtz_plan",
    "laplace_kernel",
    "user_kernel",
    "y0_kernel",
]

ROOT_OF_Y0 = "root_of_y0"
RESCALED_TO_ROOT = "rescaled_to_root"
ROBIN = "robin"


@dataclass(frozen=True, eq=False)
class RadialKernel:
    """A radial function ``G(r)`` together with what is known about it.

    Attributes
    ----------
    eval, deriv : callable
        Vectorized ``r -> G(r)`` and ``r -> G'(r)``; may return complex.
    laplacian_iterates_at_one : tuple of float, optional
        ``(-Delta)^t G`` at ``r = 1`` for ``t = 1..n``.
    singular_at_origin : bool
    name : str
    eigenvalue : float, optional
        ``lam`` with ``-Delta G = lam G`` away from the origin, if any.
        Lets :meth:`scaled` recompute the Laplacian iterates after a dilation.
    wavenumber : float, optional
        Set for Helmholtz kernels ``-(i/4) H_0^(1)(k r)``; routes the SBD to
        the Y0-specific regimes.
    spec : str
        Short string that reconstructs built-in kernels (``laplace``,
        ``helmholtz:<k>``); empty for user kernels.
    """

    eval: Callable
    deriv: Callable
    laplacian_iterates_at_one: Optional[tuple] = None
    singular_at_origin: bool = False
    name: str = "user"
    eigenvalue: Optional[float] = None
    wavenumber: Optional[float] = None
    spec: str = ""
    scale: float = 1.0

    def __call__(self, r):
        return self.eval(r)

    @property
    def is_complex(self):
        return bool(np.iscomplexobj(self.eval(np.array([0.5]))))

    def scaled(self, delta):
        """Kernel ``s -> G(delta s)``, used to map a cloud of diameter
        ``delta`` onto the unit disk."""
        delta = float(delta)
        if delta <= 0:
            raise DomainError("scale must be positive")
        if delta == 1.0:
            return self
        g, dg = self.eval, self.deriv
        iterates = None
        if self.eigenvalue is not None and self.laplacian_iterates_at_one is not None:
            lam = self.eigenvalue * delta**2
            g1 = g(np.array([delta]))[0]
            iterates = tuple(lam**t * g1 for t in range(1, len(self.laplacian_iterates_at_one) + 1))
        return replace(
            self,
            eval=lambda s: g(delta * np.asarray(s, dtype=float)),
            deriv=lambda s: delta * dg(delta * np.asarray(s, dtype=float)),
            laplacian_iterates_at_one=iterates,
            eigenvalue=None if self.eigenvalue is None else self.eigenvalue * delta**2,
            wavenumber=None if self.wavenumber is None else self.wavenumber * delta,
            name=f"{self.name}(x{delta:g})",
            scale=self.scale * delta,
        )


def _positive(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("kernel is singular at r = 0; need r > 0")
    return r


def laplace_kernel(n_iterates=8):
    """``G(r) = log r`` (the ``-1/(2 pi)`` factor is left to the caller)."""
    return RadialKernel(
        eval=lambda r: np.log(_positive(r)),
        deriv=lambda r: 1.0 / _positive(r),
        laplacian_iterates_at_one=(0.0,) * n_iterates,
        singular_at_origin=True,
        name="laplace",
        eigenvalue=0.0,
        spec="laplace",
    )


def helmholtz_kernel(k):
    """Outgoing Helmholtz Green's function ``-(i/4) H_0^(1)(k r)``."""
    k = float(k)
    if k <= 0:
        raise DomainError("wavenumber must be positive")
    return RadialKernel(
        eval=lambda r: -0.25j * special.hankel1(0, k * _positive(r)),
        deriv=lambda r: 0.25j * k * special.hankel1(1, k * _positive(r)),
        singular_at_origin=True,
        name=f"helmholtz(k={k:g})",
        eigenvalue=k * k,
        wavenumber=k,
        spec=f"helmholtz:{k!r}",
    )


def y0_kernel(k, factor=1.0, n_iterates=8):
    """``G(r) = factor * Y_0(k r)``, the part of the Helmholtz kernel that needs
    a decomposition."""
    k = float(k)
    y0k = special.y0(k)
    return RadialKernel(
        eval=lambda r: factor * special.y0(k * _positive(r)),
        deriv=lambda r: -factor * k * special.y1(k * _positive(r)),
        laplacian_iterates_at_one=tuple(factor * k ** (2 * t) * y0k for t in range(1, n_iterates + 1)),
        singular_at_origin=True,
        name=f"y0(k={k:g})",
        eigenvalue=k * k,
    )


def _five_point_derivative(f, r, h):
    return (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h)


def user_kernel(
    eval: Callable,
    deriv: Callable,
    laplacian_iterates_at_one: Optional[Sequence[float]] = None,
    name: str = "user",
    singular_at_origin: bool = False,
    rtol: float = 1e-6,
) -> RadialKernel:
    """Wrap user functions as a :class:`RadialKernel` after checking that
    ``deriv`` really is the derivative of ``eval`` on ``[0.1, 1]``."""
    r = np.linspace(0.1, 1.0, 181)
    h = 1e-5
    fd = _five_point_derivative(lambda x: np.asarray(eval(x)), r, h)
    d = np.asarray(deriv(r))
    scale = np.max(np.abs(d)) + np.max(np.abs(np.asarray(eval(r))))
    err = np.max(np.abs(fd - d))
    if not np.isfinite(err) or err > rtol * scale:
        raise KernelValidationError(
            f"deriv is not consistent with eval: max deviation {err:.3g} (scale {scale:.3g})"
        )
    iterates = None if laplacian_iterates_at_one is None else tuple(laplacian_iterates_at_one)
    return RadialKernel(
        eval=eval,
        deriv=deriv,
        laplacian_iterates_at_one=iterates,
        singular_at_origin=singular_at_origin,
        name=name,
    )


@dataclass(frozen=True)
class HelmholtzPlan:
    """How to decompose ``Y_0(k r)`` on ``[a, 1]``.

    ``regime`` is one of ``"root_of_y0"``, ``"rescaled_to_root"`` (then
    ``k_prime`` is the Y0 zero used) or ``"robin"`` (then ``H`` is the Robin
    coefficient that ``Y_0(k r)`` satisfies at ``r = 1``).
    """

    k: float
    regime: str
    k_prime: Optional[float] = None
    H: Optional[float] = None

    @property
    def dilation(self):
        """Ratio ``k / k'`` applied to the basis frequencies."""
        return self.k / self.k_prime if self.regime == RESCALED_TO_ROOT else 1.0


def helmholtz_plan(k, small_factor=0.5, root_atol=1e-10):
    """Pick the decomposition regime for ``Y_0(k r)``.

    Below ``small_factor`` times the first Y0 zero the Robin basis is used;
    otherwise ``k`` is pushed up to the next Y0 zero unless it already is one.
    """
    k = float(k)
    if k <= 0:
        raise DomainError("wavenumber must be positive")
    if abs(special.y0(k)) < root_atol:
        return HelmholtzPlan(k, ROOT_OF_Y0)
    if k < small_factor * FIRST_Y0_ROOT:
        H = -k * (-special.y1(k)) / special.y0(k)
        return HelmholtzPlan(k, ROBIN, H=float(H))
    return HelmholtzPlan(k, RESCALED_TO_ROOT, k_prime=smallest_y0_root_at_least(k))

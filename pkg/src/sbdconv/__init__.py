"""Fast discrete convolution with radial kernels in the plane.

The kernel is split into a smooth far part, written as a short sum of
dilated Bessel functions (the Sparse Bessel Decomposition) and sampled on
rings in frequency space, and a sparse close-range correction.
"""

from .errors import (
    BudgetError,
    ConditioningError,
    ConvergenceError,
    DegenerateBasisError,
    DomainError,
    KernelValidationError,
)
from .kernels import RadialKernel, helmholtz_kernel, helmholtz_plan, laplace_kernel, user_kernel
from .operator import CompressedOperator, PointCloud, assemble, choose_parameters, direct_sum, load_operator
from .quadrature import FrequencyQuadrature, eval_gapprox, flatten, ring_size
from .sbd import SBDecomposition, enforce_multi_dirichlet, eval_sbd, helmholtz_sbd, solve_sbd
from .special_functions import BesselBasis, dirichlet_basis, robin_basis

__version__ = "0.1.0"

__all__ = [
    "BesselBasis",
    "BudgetError",
    "CompressedOperator",
    "ConditioningError",
    "ConvergenceError",
    "DegenerateBasisError",
    "DomainError",
    "FrequencyQuadrature",
    "KernelValidationError",
    "PointCloud",
    "RadialKernel",
    "SBDecomposition",
    "assemble",
    "choose_parameters",
    "dirichlet_basis",
    "direct_sum",
    "enforce_multi_dirichlet",
    "eval_gapprox",
    "eval_sbd",
    "flatten",
    "helmholtz_kernel",
    "helmholtz_plan",
    "helmholtz_sbd",
    "laplace_kernel",
    "load_operator",
    "ring_size",
    "robin_basis",
    "solve_sbd",
    "user_kernel",
]

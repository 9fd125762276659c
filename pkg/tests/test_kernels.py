import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from sbdconv.errors import DomainError, KernelValidationError
from sbdconv.kernels import (
    RESCALED_TO_ROOT,
    ROBIN,
    ROOT_OF_Y0,
    helmholtz_kernel,
    helmholtz_plan,
    laplace_kernel,
    user_kernel,
    y0_kernel,
)
from sbdconv.special_functions import FIRST_Y0_ROOT, y0_roots


def radial_laplacian_fd(f, r, h=1e-3):
    return (f(r + h) - 2 * f(r) + f(r - h)) / h**2 + (f(r + h) - f(r - h)) / (2 * h * r)


def test_laplace_kernel():
    G = laplace_kernel()
    assert G.eval(np.array([1.0]))[0] == 0.0
    assert G.deriv(np.array([0.5]))[0] == 2.0
    assert all(t == 0 for t in G.laplacian_iterates_at_one)
    assert G.singular_at_origin and not G.is_complex
    with pytest.raises(DomainError):
        G.eval(np.array([0.0]))


def test_helmholtz_kernel_matches_hankel_and_derivative():
    k = 3.3
    G = helmholtz_kernel(k)
    r = np.linspace(0.1, 1, 50)
    assert np.allclose(G.eval(r), -0.25j * special.hankel1(0, k * r), rtol=1e-14)
    h = 1e-6
    fd = (G.eval(r + h) - G.eval(r - h)) / (2 * h)
    assert np.max(np.abs(fd - G.deriv(r))) < 1e-7
    assert G.is_complex and G.wavenumber == k


def test_scaled_kernel():
    G = helmholtz_kernel(2.0).scaled(3.0)
    assert G.wavenumber == pytest.approx(6.0)
    r = np.array([0.2, 0.7])
    assert np.allclose(G.eval(r), -0.25j * special.hankel1(0, 6.0 * r))
    L = laplace_kernel().scaled(2.0)
    assert np.allclose(L.eval(r), np.log(2 * r))
    assert np.allclose(L.deriv(r), 1 / r)
    assert all(t == 0 for t in L.laplacian_iterates_at_one)


def test_helmholtz_plan_examples():
    root = y0_roots(3)[2]
    assert helmholtz_plan(root).regime == ROOT_OF_Y0
    p = helmholtz_plan(0.3)
    assert p.regime == ROBIN
    assert p.H == pytest.approx(-0.3 * (-special.y1(0.3)) / special.y0(0.3))
    assert p.H > 0
    p = helmholtz_plan(5.0)
    assert p.regime == RESCALED_TO_ROOT
    assert p.k_prime == pytest.approx(7.0860510603, abs=1e-9)
    assert p.dilation == pytest.approx(5.0 / p.k_prime)
    # the literal 7.086 is 5e-5 short of the root
    assert helmholtz_plan(7.086).regime == RESCALED_TO_ROOT


@given(st.floats(min_value=1e-3, max_value=100.0))
def test_helmholtz_plan_regime_invariants(k):
    p = helmholtz_plan(k)
    if p.regime == ROOT_OF_Y0:
        assert abs(special.y0(k)) < 1e-10
    elif p.regime == ROBIN:
        assert k < 0.5 * FIRST_Y0_ROOT and p.H > 0
        assert p.H == pytest.approx(k * special.y1(k) / special.y0(k))
    else:
        roots = y0_roots(int(k / np.pi) + 3)
        assert p.k_prime == roots[np.searchsorted(roots, k)]
        assert p.k_prime >= k


def test_y0_root_kernel_is_multi_dirichlet():
    k = y0_roots(3)[2]
    f = lambda r: special.y0(k * r)
    assert abs(f(1.0)) < 1e-10
    # one finite-difference level as an independent check of the eigen-relation
    assert abs(-radial_laplacian_fd(f, 1.0) - k**2 * f(1.0)) < 1e-4
    Y = y0_kernel(k)
    assert max(abs(t) for t in Y.laplacian_iterates_at_one[:3]) < 1e-8


def test_user_kernel_validation():
    G1 = user_kernel(lambda r: np.log(r) + np.sin(r), lambda r: 1 / r + np.cos(r),
                     laplacian_iterates_at_one=[np.sin(1) - np.cos(1)])
    # -Delta(sin r) = sin r - cos r / r at r = 1; check against finite differences
    fd = -radial_laplacian_fd(lambda r: np.log(r) + np.sin(r), 1.0)
    assert G1.laplacian_iterates_at_one[0] == pytest.approx(fd, abs=1e-5)
    with pytest.raises(KernelValidationError):
        user_kernel(lambda r: np.log(r), lambda r: 1.1 / r)
    G = user_kernel(lambda r: np.log(r) + np.sin(250 * r), lambda r: 1 / r + 250 * np.cos(250 * r),
                    laplacian_iterates_at_one=[1.0, 2.0, 3.0])
    assert len(G.laplacian_iterates_at_one) == 3

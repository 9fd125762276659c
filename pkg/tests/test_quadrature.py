import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from sbdconv.errors import BudgetError
from sbdconv.kernels import helmholtz_kernel, laplace_kernel
from sbdconv.quadrature import (
    K_SAFE,
    aliasing_error_bound,
    calibrate_k_safe,
    eval_gapprox,
    flatten,
    ring_quadrature_error,
    ring_size,
)
from sbdconv.sbd import helmholtz_sbd, solve_sbd


def test_k_safe_covers_recomputed_supremum():
    sup = calibrate_k_safe(r_max=100.0, n_r=4000, extra_m=20)
    assert 0.8 < sup <= K_SAFE / 2


def test_aliasing_identity():
    # trapezoid error equals the aliased Jacobi-Anger terms, summed directly
    rho, M = 7.3, 12
    rng = np.random.default_rng(3)
    x = rng.uniform(-1, 1, (50, 2))
    r = np.hypot(x[:, 0], x[:, 1])
    th = np.arctan2(x[:, 1], x[:, 0])
    alias = sum(2 * (1j) ** (k * M) * special.jv(k * M, rho * r) * np.cos(k * M * th) for k in range(1, 20))
    assert np.allclose(ring_quadrature_error(rho, M, x), np.abs(alias), atol=1e-15)


@given(st.floats(0.0, 300.0), st.floats(1e-14, 1e-2), st.floats(0.0, 2 * np.pi))
@settings(max_examples=40)
def test_ring_meets_tolerance_for_any_rotation(rho, tol, phase):
    M = ring_size(rho, tol)
    assert M % 2 == 0 and M >= 4
    rng = np.random.default_rng(int(rho * 1000))
    x = rng.uniform(-1, 1, (64, 2))
    x /= np.maximum(1, np.hypot(x[:, 0], x[:, 1]))[:, None]
    x[0] = (np.cos(phase), np.sin(phase))
    assert np.max(ring_quadrature_error(rho, M, x, phase)) <= tol
    if M >= np.e * rho / 2 and rho > 0:
        assert aliasing_error_bound(rho, M) <= tol * 1.0000001


def test_ring_size_errors():
    with pytest.raises(ValueError):
        ring_size(1.0, 0.0)
    with pytest.raises(ValueError):
        ring_size(-1.0, 1e-3)


def _annulus_points(a, n, rng):
    r = np.concatenate([[a, 1.0], np.exp(rng.uniform(np.log(a), 0, n - 2))])
    t = rng.uniform(0, 2 * np.pi, n)
    return np.column_stack([r * np.cos(t), r * np.sin(t)]), r


@pytest.mark.parametrize("eps", [1e-3, 1e-6, 1e-9])
def test_flatten_accuracy_laplace(eps):
    a = 0.05
    s = solve_sbd(laplace_kernel(), a, eps / 2)
    q = flatten(s, eps)
    x, r = _annulus_points(a, 3000, np.random.default_rng(0))
    assert np.max(np.abs(eval_gapprox(q, x) - np.log(r))) <= eps
    # real kernel, symmetric rings: imaginary part is rounding only
    assert np.max(np.abs(eval_gapprox(q, x).imag)) < 1e-12


def test_flatten_accuracy_helmholtz_and_scaling():
    k, a, eps = 20.0, 0.1, 1e-6
    q = flatten(helmholtz_sbd(k, a, eps / 2), eps)
    x, r = _annulus_points(a, 2000, np.random.default_rng(1))
    assert np.max(np.abs(q(x) + 0.25j * special.hankel1(0, k * r))) <= eps
    q2 = q.scaled(3.0)
    assert np.allclose(q2(3.0 * x), q(x), atol=1e-12)


def test_frequency_count_grows_quadratically():
    n = []
    for a in (0.04, 0.02, 0.01):
        n.append(flatten(solve_sbd(laplace_kernel(), a, 5e-4), 1e-3).n_freqs)
    ratios = np.array(n[1:]) / np.array(n[:-1])
    assert np.all((ratios > 3.0) & (ratios < 5.0))


def test_budget_error():
    s = solve_sbd(laplace_kernel(), 0.1, 1e-3)
    with pytest.raises(BudgetError):
        flatten(s, 1.5 * s.achieved_error)
    with pytest.raises(ValueError):
        flatten(s, 0.0)

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from sbdconv.errors import DomainError
from sbdconv.special_functions import (
    FIRST_Y0_ROOT,
    BesselBasis,
    bessel_j,
    bessel_y0,
    bessel_y0_prime,
    dirichlet_basis,
    dirichlet_roots,
    j1_roots,
    norm_constant,
    robin_basis,
    robin_norm_constants,
    robin_roots,
    smallest_y0_root_at_least,
    y0_roots,
)

mp.mp.dps = 40


def test_bessel_j_trivial_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-13


@pytest.mark.parametrize("order", [0, 1, 2, 7])
def test_bessel_j_against_mpmath(order):
    r = np.concatenate([np.linspace(0, 12, 25), np.geomspace(12, 1e4, 25)])
    ours = bessel_j(order, r)
    ref = np.array([float(mp.besselj(order, mp.mpf(x))) for x in r])
    assert np.all(np.abs(ours - ref) <= 1e-13 * np.maximum(1.0, np.abs(ref)) + 1e-15)


def test_bessel_j_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(0, -1.0)
    with pytest.raises(DomainError):
        bessel_j(1.5, 1.0)


def test_bessel_j0_solves_bessel_ode():
    h = 1e-4
    r = np.arange(0.1, 50.0, 0.01)
    f = bessel_j(0, r)
    fp = (bessel_j(0, r + h) - bessel_j(0, r - h)) / (2 * h)
    fpp = (bessel_j(0, r + h) - 2 * f + bessel_j(0, r - h)) / h**2
    assert np.max(np.abs(r**2 * fpp + r * fp + r**2 * f)) < 1e-6 * 2500


def test_y0_values_and_roots():
    assert abs(FIRST_Y0_ROOT - float(mp.findroot(mp.bessely0 if hasattr(mp, "bessely0") else (lambda x: mp.bessely(0, x)), 0.89))) < 1e-14
    assert bessel_y0(1e-8) < -10
    roots = y0_roots(3)
    assert abs(roots[2] - 7.086) < 1e-3
    assert np.all(np.abs(bessel_y0(roots)) < 1e-14)
    with pytest.raises(DomainError):
        bessel_y0(0.0)
    assert smallest_y0_root_at_least(5.0) == pytest.approx(roots[2])
    assert bessel_y0_prime(2.0) == pytest.approx(-special.y1(2.0))


def test_dirichlet_roots_against_mpmath_and_brackets():
    P = 2000
    rho = dirichlet_roots(P)
    p = np.arange(1, P + 1)
    assert rho[0] == pytest.approx(2.404825557695773, abs=1e-14)
    assert np.all(rho >= np.pi * (p - 0.25)) and np.all(rho <= np.pi * (p - 0.125))
    assert np.max(np.abs(special.j0(rho))) < 1e-13
    for q in (1, 10, 500, 2000):
        assert abs(rho[q - 1] - float(mp.besseljzero(0, q))) < 1e-11
    assert abs(rho[1000] - rho[999] - np.pi) < 1e-3
    assert np.all(np.diff(rho) > 0)


def test_j1_roots():
    r = j1_roots(50)
    assert r[0] == pytest.approx(3.8317059702075, abs=1e-12)
    assert np.max(np.abs(special.j1(r))) < 1e-13


def test_robin_roots_limits_and_residuals():
    assert robin_roots(0.0, 3)[0] == pytest.approx(3.8317059702075, abs=1e-12)
    assert abs(robin_roots(1e6, 1)[0] - 2.404825557695773) < 1e-4
    for H in (1e-3, 0.3, 2.0, 50.0, 1e6):
        r = robin_roots(H, 30)
        res = -r * special.j1(r) + H * special.j0(r)
        assert np.max(np.abs(res)) / (1 + H) < 1e-12


def test_robin_roots_high_order_against_mpmath():
    # past ~30 roots the residual is limited by the slope (~rho) times an ulp,
    # so compare the roots themselves
    H = 0.3
    r = robin_roots(H, 200)
    for q in (50, 120, 200):
        ref = mp.findroot(lambda x: -x * mp.besselj(1, x) + H * mp.besselj(0, x), r[q - 1])
        assert abs(r[q - 1] - float(ref)) < 4 * np.spacing(r[q - 1])


@given(st.floats(min_value=1e-3, max_value=1e4))
def test_robin_roots_interlace_with_dirichlet(H):
    r = robin_roots(H, 30)
    j0z = dirichlet_roots(30)
    assert np.all(r < j0z)
    assert np.all(r[1:] > j0z[:-1])


def test_norm_constant_by_quadrature():
    rho = dirichlet_roots(1)[0]
    C1 = norm_constant(1, rho)
    val, _ = integrate.quad(lambda r: 2 * np.pi * r * rho**2 * special.j1(rho * r) ** 2, 0, 1, epsabs=1e-14)
    assert abs(C1**-2 - val) < 1e-10


def test_cp_conjecture_bounds():
    P = 1000
    p = np.arange(1, P + 1)
    C = norm_constant(p, dirichlet_roots(P))
    assert np.all(C >= 1 / np.sqrt(2 * np.pi * p))
    assert np.all(C <= 1 / np.sqrt(2 * np.pi * (p - 0.25)))
    assert np.sqrt(2 * np.pi * P) * C[-1] - 1 < 1e-3


def test_robin_norm_constants_by_quadrature():
    H = 0.7
    rho = robin_roots(H, 4)
    C = robin_norm_constants(rho, H)
    for rp, c in zip(rho, C):
        grad, _ = integrate.quad(lambda r: 2 * np.pi * r * (rp * special.j1(rp * r)) ** 2, 0, 1, epsabs=1e-14)
        energy = c**2 * (grad + 2 * np.pi * H * special.j0(rp) ** 2)
        assert energy == pytest.approx(1.0, abs=1e-12)


def test_basis_is_immutable_and_evaluates():
    b = dirichlet_basis(5)
    assert isinstance(b, BesselBasis) and b.P == 5 and b.order_count == 5
    with pytest.raises(ValueError):
        b.roots[0] = 1.0
    vals = b(np.array([0.0, 1.0]))
    assert vals.shape == (2, 5)
    assert np.allclose(vals[1], 0, atol=1e-15)
    t = b.truncate(3)
    assert t.P == 3 and np.array_equal(t.roots, b.roots[:3])
    with pytest.raises(DomainError):
        robin_basis(0.0, 3)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sbdconv.nufft import NufftPlan, ndft_direct, nufft_apply


def _problem(rng, nz, nxi, scale):
    z = rng.uniform(-1, 1, (nz, 2))
    xi = rng.uniform(-scale, scale, (nxi, 2))
    c = rng.standard_normal(nz) + 1j * rng.standard_normal(nz)
    return z, xi, c


def test_direct_matches_explicit_loop():
    rng = np.random.default_rng(0)
    z, xi, c = _problem(rng, 7, 5, 10)
    ref = np.array([sum(np.exp(-1j * (x @ zz)) * cc for zz, cc in zip(z, c)) for x in xi])
    assert np.allclose(ndft_direct(z, xi, c, -1), ref, atol=1e-13)


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("tol", [1e-3, 1e-6, 1e-10])
def test_fast_matches_direct(sign, tol):
    rng = np.random.default_rng(int(-np.log10(tol)) + sign)
    z, xi, c = _problem(rng, 3000, 2000, 300)
    plan = NufftPlan(z, xi, sign, tol, method="fast")
    err = np.max(np.abs(plan(c) - ndft_direct(z, xi, c, sign)))
    assert err <= tol * np.sum(np.abs(c))
    assert plan.counters.calls == 1


@given(st.integers(1, 40), st.integers(1, 40), st.floats(0.1, 100.0))
@settings(max_examples=25)
def test_auto_small_is_direct_and_linear(nz, nxi, scale):
    rng = np.random.default_rng(nz * 100 + nxi)
    z, xi, c = _problem(rng, nz, nxi, scale)
    d = rng.standard_normal(nz)
    plan = NufftPlan(z, xi, 1, 1e-8)
    assert plan.method == "direct"
    assert np.allclose(plan(c + 2 * d), plan(c) + 2 * plan(d), atol=1e-10 * (1 + np.sum(np.abs(c) + np.abs(d))))


def test_input_validation():
    z = np.zeros((3, 2))
    with pytest.raises(ValueError):
        NufftPlan(z, z, 0, 1e-6)
    with pytest.raises(ValueError):
        NufftPlan(z, z, 1, 0.0)
    with pytest.raises(ValueError):
        NufftPlan(z, z, 1, 1e-6, method="bogus")
    with pytest.raises(ValueError):
        NufftPlan(np.zeros((3, 3)), z, 1, 1e-6)
    with pytest.raises(ValueError):
        nufft_apply(NufftPlan(z, z, 1, 1e-6), np.ones(4))

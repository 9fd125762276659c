import json

import numpy as np
import pytest
from scipy import special

from sbdconv.errors import DomainError
from sbdconv.soundcancel import (
    disk_grid,
    field_intensity,
    half_circle_sources,
    make_problem,
    objective_and_gradient,
    optimize_phases,
    write_grid,
)


@pytest.fixture(scope="module")
def small():
    return make_problem(n_sources=20, k=20.0, n_quad=800, eps=1e-8, seed=3)


def _dense_objective(prob, phases):
    d = np.linalg.norm(prob.quad_points[:, None, :] - prob.sources[None, :, :], axis=-1)
    u = special.hankel1(0, prob.k * d) @ np.exp(1j * phases)
    return float(np.sum(np.abs(u) ** 2))


def test_geometry_helpers():
    rng = np.random.default_rng(0)
    z = half_circle_sources(50, 0.5, rng)
    assert np.allclose(np.linalg.norm(z, axis=1), 0.5) and np.all(z[:, 1] >= 0)
    g = disk_grid((1.0, 2.0), 0.3, 2000)
    assert abs(len(g) - 2000) < 100
    assert np.all(np.linalg.norm(g - (1.0, 2.0), axis=1) <= 0.3)


def test_objective_matches_dense(small):
    f, _ = objective_and_gradient(small.operator, small.phases)
    ref = _dense_objective(small, small.phases)
    assert f == pytest.approx(ref, rel=1e-6)


def test_gradient_matches_central_differences(small):
    _, g = objective_and_gradient(small.operator, small.phases)
    h = 1e-5
    fd = np.empty_like(g)
    for l in range(len(g)):
        e = np.zeros_like(g)
        e[l] = h
        fd[l] = (_dense_objective(small, small.phases + e) - _dense_objective(small, small.phases - e)) / (2 * h)
    assert np.max(np.abs(fd - g)) <= 1e-5 * np.max(np.abs(g))


def test_optimizer_trace_is_monotone(small):
    res = optimize_phases(small.operator, small.phases, max_evals=60)
    assert res.evaluations <= 60
    assert all(b <= a for a, b in zip(res.trace, res.trace[1:]))
    assert res.final < res.initial and res.reduction_db > 0
    assert np.all((res.phases >= 0) & (res.phases < 2 * np.pi))


def test_field_intensity_and_grid_file(tmp_path, small):
    pts = np.array([[0.0, -0.6], [0.3, 0.9]])
    I = field_intensity(small.sources, small.phases, small.k, pts, eps=1e-6)
    d = np.linalg.norm(pts[:, None] - small.sources[None], axis=-1)
    ref = np.abs(special.hankel1(0, small.k * d) @ np.exp(1j * small.phases)) ** 2
    assert np.allclose(I, ref, rtol=1e-4)
    vals = np.arange(12.0).reshape(3, 4)
    p = write_grid(tmp_path / "f.f64", vals, (0, 1, 2, 3))
    back = np.fromfile(p, dtype="<f8").reshape(3, 4)
    assert np.array_equal(back, vals)
    meta = json.loads((tmp_path / "f.f64.json").read_text())
    assert meta["dims"] == [3, 4] and meta["bounds"] == [0, 1, 2, 3]


def test_zone_too_close_is_rejected():
    with pytest.raises(DomainError):
        make_problem(n_sources=10, k=5.0, n_quad=200, zone_center=(0.0, 0.0), zone_radius=0.499, seed=1)

import numpy as np
import pytest

from chancap.channels import make_ns, make_w
from chancap.entropic import binary_entropy, ci_gradient, coherent_information, vn_entropy
from chancap.optimize import (
    OptimConfig,
    SwarmConfig,
    density_ascent,
    golden_max,
    particle_swarm,
    sphere_min,
)


def test_golden_quadratic():
    res = golden_max(lambda u: -(u - 0.3) ** 2, (0.0, 1.0), 1e-10)
    assert abs(res.argument - 0.3) < 1e-9
    assert abs(res.value) < 1e-15
    assert res.converged


def test_golden_binary_entropy():
    res = golden_max(binary_entropy, (0.0, 1.0), 1e-10)
    # the flat top limits locator accuracy to ~sqrt(eps); the value is exact
    assert abs(res.argument - 0.5) < 1e-6
    assert abs(res.value - 1.0) < 1e-12


def test_golden_matches_dense_grid():
    # oracle: brute-force scan of the closed-form interval objective
    s = 0.5

    def delta(u):
        sb = -np.sum(np.array([v for v in [(1 - u) / 2, (1 - u) / 2, u] if v > 0])
                     * np.log2([v for v in [(1 - u) / 2, (1 - u) / 2, u] if v > 0]))
        dc = np.array([(1 - u) * s, (1 - u) * (1 - s) + u])
        sc = -np.sum(dc[dc > 0] * np.log2(dc[dc > 0]))
        return sb - sc

    us = np.linspace(0.0, 1.0, 1_000_001)
    with np.errstate(divide="ignore", invalid="ignore"):
        p1, p2, p3 = (1 - us) / 2, (1 - us) / 2, us
        sb = -(np.where(p1 > 0, p1 * np.log2(p1), 0) * 2
               + np.where(p3 > 0, p3 * np.log2(p3), 0))
        q1_, q2_ = (1 - us) * s, (1 - us) * (1 - s) + us
        sc = -(np.where(q1_ > 0, q1_ * np.log2(q1_), 0)
               + np.where(q2_ > 0, q2_ * np.log2(q2_), 0))
    grid_best = float(np.max(sb - sc))
    res = golden_max(delta, (0.0, 1.0), 1e-10)
    assert abs(res.value - grid_best) < 1e-9

    # cross-check against the channel itself
    pair = make_ns(s)
    rho = res.argument
    state = np.diag([1 - rho, 0.0, rho]) if np.isscalar(rho) else None
    assert state is not None
    assert abs(coherent_information(pair, state.astype(complex)) - res.value) < 1e-12


def test_golden_eval_count_bound():
    calls = {"n": 0}

    def f(u):
        calls["n"] += 1
        return -(u - 0.4) ** 2

    tol = 1e-8
    golden_max(f, (0.0, 1.0), tol)
    bound = int(np.ceil(np.log(1.0 / tol) / np.log(1 / 0.618))) + 2
    assert calls["n"] <= bound


def test_golden_rejects_bad_interval():
    with pytest.raises(ValueError):
        golden_max(lambda u: u, (1.0, 0.0))


def test_golden_rejects_nonfinite():
    with pytest.raises(ValueError):
        golden_max(lambda u: np.nan, (0.0, 1.0))


def test_density_ascent_linear_objective():
    c = np.diag([1.0, 2.0, 3.0])
    cfg = OptimConfig(restarts=3, seed=1)
    res = density_ascent(3, lambda r: np.real(np.trace(c @ r)), lambda r: c, cfg)
    assert abs(res.value - 3.0) < 1e-7
    assert abs(res.argument[2, 2] - 1.0) < 1e-3


def test_density_ascent_entropy_maximum():
    from chancap.entropic import log2m_reg

    cfg = OptimConfig(restarts=3, seed=1)
    ln2 = np.log(2.0)

    def grad(r):
        g = -log2m_reg(r) - np.eye(3) / ln2
        return g - np.trace(g).real / 3 * np.eye(3)

    res = density_ascent(3, vn_entropy, grad, cfg)
    assert abs(res.value - np.log2(3)) < 1e-8
    assert np.linalg.norm(res.argument - np.eye(3) / 3) < 1e-4


def test_density_ascent_dephasing_rate():
    pair = make_w(0.5, 0.5)
    cfg = OptimConfig(restarts=6, seed=3)
    res = density_ascent(3, lambda r: coherent_information(pair, r),
                         lambda r: ci_gradient(pair, r), cfg)
    assert abs(res.value - np.log2(1.5)) < 1e-6


def test_density_ascent_iterates_stay_feasible():
    pair = make_ns(0.3)
    seen = []

    def objective(r):
        seen.append(r)
        return coherent_information(pair, r)

    cfg = OptimConfig(restarts=2, seed=9, max_iters=60)
    density_ascent(3, objective, lambda r: ci_gradient(pair, r), cfg)
    for r in seen:
        assert abs(np.trace(r).real - 1.0) < 1e-12
        assert np.linalg.eigvalsh(r).min() >= -1e-12


def test_density_ascent_deterministic():
    pair = make_ns(0.3)
    cfg = OptimConfig(restarts=4, seed=11)
    r1 = density_ascent(3, lambda r: coherent_information(pair, r),
                        lambda r: ci_gradient(pair, r), cfg)
    r2 = density_ascent(3, lambda r: coherent_information(pair, r),
                        lambda r: ci_gradient(pair, r), cfg)
    assert r1.value == r2.value
    assert np.array_equal(r1.argument, r2.argument)


def test_sphere_min_rayleigh():
    c = np.diag([1.0, 2.0])
    cfg = OptimConfig(restarts=4, seed=2)
    res = sphere_min([2], lambda v: float(np.real(np.vdot(v[0], c @ v[0]))),
                     lambda v: [c @ v[0]], cfg)
    assert abs(res.value - 1.0) < 1e-9
    assert abs(abs(res.argument[0][0]) - 1.0) < 1e-4


def test_sphere_min_orthogonal_pair():
    cfg = OptimConfig(restarts=4, seed=2)

    def objective(v):
        return float(abs(np.vdot(v[0], v[1])) ** 2)

    def gradient(v):
        ov = np.vdot(v[0], v[1])
        return [np.conj(ov) * v[1], ov * v[0]]

    res = sphere_min([3, 3], objective, gradient, cfg)
    assert res.value < 1e-10


def test_sphere_min_iterates_unit_norm():
    cfg = OptimConfig(restarts=2, seed=4, max_iters=40)
    seen = []

    def objective(v):
        seen.append([x.copy() for x in v])
        return float(np.real(np.vdot(v[0], np.diag([1.0, 2.0, 3.0]) @ v[0])))

    sphere_min([3], objective, lambda v: [np.diag([1.0, 2.0, 3.0]) @ v[0]], cfg)
    for vs in seen:
        for x in vs:
            assert abs(np.linalg.norm(x) - 1.0) < 1e-12


def test_particle_swarm_parabola():
    cfg = OptimConfig(seed=6, swarm=SwarmConfig(particles=20, iters=200))
    res = particle_swarm(lambda x: (x[0] - 1.0) ** 2, bounds=[(-5.0, 5.0)], config=cfg)
    assert res.value < 1e-6


def test_particle_swarm_rastrigin():
    # oracle: standard benchmark minimum 0 at the origin
    def rastrigin(x):
        return 20.0 + np.sum(x**2 - 10.0 * np.cos(2 * np.pi * x))

    cfg = OptimConfig(seed=0, swarm=SwarmConfig(particles=40, iters=2000))
    res = particle_swarm(rastrigin, bounds=[(-5.12, 5.12)] * 2, config=cfg)
    assert res.value < 1e-3


def test_particle_swarm_spheres_mode():
    c = np.diag([3.0, 1.0, 2.0])
    cfg = OptimConfig(seed=8, swarm=SwarmConfig(particles=20, iters=300))
    res = particle_swarm(lambda v: float(np.real(np.vdot(v[0], c @ v[0]))),
                         spheres=[3], config=cfg)
    assert abs(res.value - 1.0) < 1e-4


def test_particle_swarm_deterministic():
    def f(x):
        return float(np.sum(x**2))

    cfg = OptimConfig(seed=123, swarm=SwarmConfig(particles=10, iters=50))
    r1 = particle_swarm(f, bounds=[(-1, 1)] * 3, config=cfg)
    r2 = particle_swarm(f, bounds=[(-1, 1)] * 3, config=cfg)
    assert r1.value == r2.value
    assert np.array_equal(r1.argument, r2.argument)


def test_swarm_requires_one_space():
    with pytest.raises(ValueError):
        particle_swarm(lambda x: 0.0, bounds=[(-1, 1)], spheres=[2])


def test_config_validation():
    with pytest.raises(ValueError):
        OptimConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimConfig(grad_tol=2.0)

"""Deterministic, seedable optimizers: 1-D concave maximization, ascent on the
density-operator manifold, descent on products of unit spheres, and a
global-best particle swarm.

Every routine is a pure function of (inputs, seed).  Restarts draw their
randomness from per-restart child seeds, so results do not depend on how the
work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0  # 0.618...


@dataclass
class SwarmConfig:
    particles: int = 40
    inertia: float = 0.7
    cognitive: float = 1.5
    social: float = 1.5
    iters: int = 2000


@dataclass
class OptimConfig:
    seed: int = 42
    restarts: int = 50
    max_iters: int = 500
    grad_tol: float = 1e-8
    step_init: float = 0.5
    golden_tol: float = 1e-10
    swarm: SwarmConfig = field(default_factory=SwarmConfig)

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not (0 < self.grad_tol < 1) or not (0 < self.golden_tol < 1):
            raise ValueError("tolerances must lie in (0, 1)")
        if self.step_init <= 0:
            raise ValueError("step_init must be positive")


@dataclass
class OptimResult:
    value: float
    argument: object
    iterations: int
    converged: bool
    seed_used: int

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("optimizer produced a non-finite value")


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(restart,)))


# ---------------------------------------------------------------------------
# Golden-section maximization


def golden_max(f, interval, tol: float = 1e-10) -> OptimResult:
    """Golden-section maximization of f on [lo, hi] down to interval width tol.

    Exact for unimodal f; evaluation count stays within the textbook bound.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")

    def ev(u):
        v = float(f(u))
        if not np.isfinite(v):
            raise ValueError(f"objective is non-finite at {u}")
        return v

    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = ev(x1), ev(x2)
    iters = 0
    while hi - lo > tol:
        iters += 1
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = ev(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = ev(x2)
    u = x1 if f1 >= f2 else x2
    return OptimResult(value=max(f1, f2), argument=u, iterations=iters,
                       converged=True, seed_used=0)


def grid_then_golden(f, interval, tol: float = 1e-10, grid: int = 101) -> OptimResult:
    """Coarse grid scan followed by golden-section refinement around the best
    grid cell.  Robust for objectives that are only piecewise unimodal."""
    lo, hi = float(interval[0]), float(interval[1])
    us = np.linspace(lo, hi, grid)
    vals = [float(f(u)) for u in us]
    k = int(np.argmax(vals))
    a = us[max(k - 1, 0)]
    b = us[min(k + 1, grid - 1)]
    if a == b:
        return OptimResult(value=vals[k], argument=float(us[k]), iterations=grid,
                           converged=True, seed_used=0)
    res = golden_max(f, (a, b), tol)
    if vals[k] > res.value:
        return OptimResult(value=vals[k], argument=float(us[k]),
                           iterations=res.iterations + grid, converged=True, seed_used=0)
    return res


# ---------------------------------------------------------------------------
# Ascent over density operators via the rho = LL†/tr(LL†) parameterization


def _rho_of(l: np.ndarray) -> tuple[np.ndarray, float]:
    t = float(np.sum(np.abs(l) ** 2))
    return (l @ l.conj().T) / t, t


def _ascent_run(dim, objective, gradient, l0, config) -> tuple[float, np.ndarray, int, bool]:
    l = l0 / np.linalg.norm(l0)
    rho, _ = _rho_of(l)
    f = objective(rho)
    step = config.step_init
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        g = gradient(rho)  # Hermitian Euclidean gradient on rho
        t = float(np.sum(np.abs(l) ** 2))
        gl = (g - np.trace(g @ rho).real * np.eye(dim)) @ l / t
        gnorm = np.linalg.norm(gl)
        if gnorm < config.grad_tol:
            converged = True
            break
        improved = False
        while step > 1e-13:
            l_new = l + step * gl
            l_new = l_new / np.linalg.norm(l_new)
            rho_new, _ = _rho_of(l_new)
            f_new = objective(rho_new)
            if f_new >= f + 1e-4 * step * gnorm**2:
                l, rho, f = l_new, rho_new, f_new
                step = min(step * 1.3, 1e3)
                improved = True
                break
            step *= 0.5
        if not improved:
            converged = True  # step collapsed: no ascent direction left
            break
    return f, rho, it, converged


def density_ascent(dim: int, objective, gradient, config: OptimConfig | None = None,
                   inits: list | None = None) -> OptimResult:
    """Projected gradient ascent with Armijo backtracking over unit-trace PSD
    matrices of the given size; best value over config.restarts runs.

    Optional ``inits`` (square-root factors) are injected as the first
    restarts, then the maximally mixed state, then random complex square
    roots.  Ties within 1e-12 keep the earliest restart.
    """
    config = config or OptimConfig()
    inits = [np.asarray(l, dtype=complex) for l in (inits or [])]
    best = None
    for r in range(max(config.restarts, len(inits) + 1)):
        if r < len(inits):
            l0 = inits[r]
        elif r == len(inits):
            l0 = np.eye(dim, dtype=complex)
        else:
            rng = _restart_rng(config.seed, r)
            l0 = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        f, rho, iters, conv = _ascent_run(dim, objective, gradient, l0, config)
        if best is None or f > best[0] + 1e-12:
            best = (f, rho, iters, conv)
    return OptimResult(value=best[0], argument=best[1], iterations=best[2],
                       converged=best[3], seed_used=config.seed)


# ---------------------------------------------------------------------------
# Descent over a product of complex unit spheres


def _sphere_project(vecs, grads):
    """Project Euclidean conjugate gradients onto sphere tangent spaces."""
    out = []
    for v, g in zip(vecs, grads):
        out.append(g - np.real(np.vdot(v, g)) * v)
    return out


def _sphere_run(objective, gradient, vecs0, config) -> tuple[float, list, int, bool]:
    vecs = [v / np.linalg.norm(v) for v in vecs0]
    f = objective(vecs)
    step = config.step_init
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        grads = _sphere_project(vecs, gradient(vecs))
        gnorm = np.sqrt(sum(float(np.sum(np.abs(g) ** 2)) for g in grads))
        if gnorm < config.grad_tol:
            converged = True
            break
        improved = False
        while step > 1e-13:
            cand = [v - step * g for v, g in zip(vecs, grads)]
            cand = [v / np.linalg.norm(v) for v in cand]
            f_new = objective(cand)
            if f_new <= f - 1e-4 * step * gnorm**2:
                vecs, f = cand, f_new
                step = min(step * 1.3, 1e3)
                improved = True
                break
            step *= 0.5
        if not improved:
            converged = True
            break
    return f, vecs, it, converged


def sphere_min(shape, objective, gradient, config: OptimConfig | None = None,
               inits: list | None = None) -> OptimResult:
    """Riemannian gradient descent over a product of complex unit spheres.

    ``shape`` lists the sphere dimensions.  ``gradient`` returns the list of
    Euclidean conjugate-coordinate gradients; tangent projection + retraction
    by normalization keep every iterate on its sphere.  Optional ``inits``
    are injected as the first restarts (e.g. a conjectured optimizer).
    """
    config = config or OptimConfig()
    inits = inits or []
    best = None
    for r in range(config.restarts):
        if r < len(inits):
            vecs0 = [np.asarray(v, dtype=complex) for v in inits[r]]
        else:
            rng = _restart_rng(config.seed, r)
            vecs0 = [rng.normal(size=d) + 1j * rng.normal(size=d) for d in shape]
        f, vecs, iters, conv = _sphere_run(objective, gradient, vecs0, config)
        if best is None or f < best[0] - 1e-12:
            best = (f, vecs, iters, conv)
    return OptimResult(value=best[0], argument=best[1], iterations=best[2],
                       converged=best[3], seed_used=config.seed)


# ---------------------------------------------------------------------------
# Particle swarm (global best)


def _flatten_spheres(vecs):
    return np.concatenate([np.concatenate([v.real, v.imag]) for v in vecs])


def _unflatten_spheres(x, dims):
    vecs = []
    off = 0
    for d in dims:
        re = x[off:off + d]
        im = x[off + d:off + 2 * d]
        v = re + 1j * im
        n = np.linalg.norm(v)
        if n < 1e-12:
            v = np.zeros(d, dtype=complex)
            v[0] = 1.0
        else:
            v = v / n
        vecs.append(v)
        off += 2 * d
    return vecs


def particle_swarm(objective, bounds=None, spheres=None,
                   config: OptimConfig | None = None) -> OptimResult:
    """Global-best particle swarm minimization, deterministic given the seed.

    Exactly one of ``bounds`` (list of (lo, hi) box constraints on a real
    vector) or ``spheres`` (list of complex sphere dimensions; positions are
    renormalized after every move) must be given.
    """
    config = config or OptimConfig()
    sw = config.swarm
    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed, spawn_key=(0x5157,)))
    if (bounds is None) == (spheres is None):
        raise ValueError("give exactly one of bounds or spheres")

    if bounds is not None:
        lo = np.array([b[0] for b in bounds], dtype=float)
        hi = np.array([b[1] for b in bounds], dtype=float)
        ndim = len(bounds)

        def sample():  # noqa: E306
            return rng.uniform(lo, hi)

        def clamp(x):
            return np.clip(x, lo, hi)

        def evaluate(x):
            return float(objective(x))

        vmax = 0.5 * (hi - lo)
    else:
        dims = [int(d) for d in spheres]
        ndim = 2 * sum(dims)

        def sample():
            return _flatten_spheres([
                (lambda z: z / np.linalg.norm(z))(rng.normal(size=d) + 1j * rng.normal(size=d))
                for d in dims
            ])

        def clamp(x):
            return _flatten_spheres(_unflatten_spheres(x, dims))

        def evaluate(x):
            return float(objective(_unflatten_spheres(x, dims)))

        vmax = np.full(ndim, 1.0)

    pos = np.stack([sample() for _ in range(sw.particles)])
    vel = np.stack([rng.uniform(-0.1, 0.1, size=ndim) * vmax for _ in range(sw.particles)])
    pbest = pos.copy()
    pbest_val = np.array([evaluate(p) for p in pos])
    g = int(np.argmin(pbest_val))
    gbest, gbest_val = pbest[g].copy(), float(pbest_val[g])

    for _ in range(sw.iters):
        r1 = rng.uniform(size=(sw.particles, ndim))
        r2 = rng.uniform(size=(sw.particles, ndim))
        vel = (sw.inertia * vel
               + sw.cognitive * r1 * (pbest - pos)
               + sw.social * r2 * (gbest[None, :] - pos))
        vel = np.clip(vel, -vmax, vmax)
        pos = np.stack([clamp(p) for p in pos + vel])
        vals = np.array([evaluate(p) for p in pos])
        better = vals < pbest_val
        pbest[better] = pos[better]
        pbest_val[better] = vals[better]
        g = int(np.argmin(pbest_val))
        if pbest_val[g] < gbest_val:
            gbest, gbest_val = pbest[g].copy(), float(pbest_val[g])

    arg = gbest if bounds is not None else _unflatten_spheres(gbest, [int(d) for d in spheres])
    return OptimResult(value=gbest_val, argument=arg, iterations=sw.iters,
                       converged=True, seed_used=config.seed)

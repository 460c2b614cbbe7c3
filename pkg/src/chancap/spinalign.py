"""Numerical search and verification harness for the spin alignment
conjecture: the entropy of a subset-mixture state is minimized by aligning
every subset factor with the top eigenvector of the single-site state.

Subsets of the n sites are encoded as bitmasks with bit i standing for
site i; the x-distribution is indexed in binary-counter order.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .entropic import shannon_entropy, vn_entropy
from .linalg import dyad, hermitize, permute_systems, tensor_product
from .optimize import OptimConfig, OptimResult, particle_swarm, sphere_min

GRAD_REG = 1e-9


def mask_sites(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if (mask >> i) & 1]


@dataclass
class AlignmentInstance:
    """(site count, single-site state, subset distribution)."""

    n: int
    site_state: np.ndarray
    x: np.ndarray  # length 2^n, binary-counter order

    def __post_init__(self):
        self.site_state = np.asarray(self.site_state, dtype=complex)
        self.x = np.asarray(self.x, dtype=float)
        if self.x.shape != (2**self.n,):
            raise ValueError(f"x must have length 2^{self.n}")
        if np.any(self.x < -1e-12) or abs(self.x.sum() - 1.0) > 1e-12:
            raise ValueError("x must be a probability distribution over subsets")
        if abs(np.trace(self.site_state).real - 1.0) > 1e-9:
            raise ValueError("site state must have unit trace")
        if np.linalg.eigvalsh(hermitize(self.site_state)).min() < -1e-9:
            raise ValueError("site state must be positive semidefinite")

    @property
    def site_dim(self) -> int:
        return self.site_state.shape[0]

    @classmethod
    def qubit(cls, n: int, s: float, x) -> "AlignmentInstance":
        """Site state with weight s on spin-up and 1-s on spin-down, s <= 1/2."""
        if not (0.0 <= s <= 0.5):
            raise ValueError("s must lie in [0, 1/2]")
        return cls(n=n, site_state=np.diag([s, 1.0 - s]).astype(complex), x=np.asarray(x))

    @classmethod
    def random_x(cls, n: int, site_state, rng: np.random.Generator) -> "AlignmentInstance":
        x = rng.dirichlet(np.ones(2**n))
        return cls(n=n, site_state=np.asarray(site_state, dtype=complex), x=x)

    def top_eigenvector(self) -> np.ndarray:
        _, vecs = np.linalg.eigh(hermitize(self.site_state))
        return vecs[:, -1]


def _place(instance: AlignmentInstance, mask: int, omega: np.ndarray) -> np.ndarray:
    """omega on the sites of mask (relative order), site state elsewhere,
    factors arranged back into natural site order."""
    n, q = instance.n, instance.site_dim
    sites = mask_sites(mask, n)
    rest = [i for i in range(n) if i not in sites]
    if not rest:
        op = omega
    elif not sites:
        op = tensor_product(*([instance.site_state] * n)) if n > 1 else instance.site_state
    else:
        tail = tensor_product(*([instance.site_state] * len(rest))) \
            if len(rest) > 1 else instance.site_state
        op = np.kron(omega, tail)
    order = sites + rest
    perm = [order.index(i) for i in range(n)]
    return permute_systems(op, [q] * n, perm) if n > 1 else op


def assemble_state(instance: AlignmentInstance, assignment: dict) -> np.ndarray:
    """kappa = sum over subsets of x_M (omega_M tensor site-state elsewhere).

    ``assignment`` maps nonempty masks to density operators on the matching
    joint space; the empty subset contributes the all-sites product term.
    """
    n, q = instance.n, instance.site_dim
    dim = q**n
    kappa = np.zeros((dim, dim), dtype=complex)
    for mask in range(2**n):
        if instance.x[mask] == 0.0:
            continue
        if mask == 0:
            term = _place(instance, 0, None)
        else:
            omega = np.asarray(assignment[mask], dtype=complex)
            k = len(mask_sites(mask, n))
            if omega.shape != (q**k, q**k):
                raise ValueError(f"assignment for mask {mask} has wrong dimension")
            term = _place(instance, mask, omega)
        kappa += instance.x[mask] * term
    return kappa


def aligned_assignment(instance: AlignmentInstance) -> dict:
    """Every subset factor pinned to the top eigenvector of the site state."""
    gamma = instance.top_eigenvector()
    out = {}
    for mask in range(1, 2**instance.n):
        k = len(mask_sites(mask, instance.n))
        vec = gamma
        for _ in range(k - 1):
            vec = np.kron(vec, gamma)
        out[mask] = dyad(vec)
    return out


def conjectured_value(instance: AlignmentInstance) -> float:
    return vn_entropy(assemble_state(instance, aligned_assignment(instance)))


def n1_solution(x1: float, site_state: np.ndarray) -> tuple[float, np.ndarray]:
    """Closed-form single-site optimum: the top eigenprojector of the site
    state, mixed with weight x1 against the site state itself."""
    if not (0.0 <= x1 <= 1.0):
        raise ValueError("x1 must lie in [0, 1]")
    site_state = np.asarray(site_state, dtype=complex)
    _, vecs = np.linalg.eigh(hermitize(site_state))
    omega = dyad(vecs[:, -1])
    value = vn_entropy(x1 * omega + (1.0 - x1) * site_state)
    return value, omega


# ---------------------------------------------------------------------------
# Search


def _masks(instance: AlignmentInstance) -> list[int]:
    return [m for m in range(1, 2**instance.n)]


def _kappa_from_vecs(instance: AlignmentInstance, vecs: list[np.ndarray]) -> np.ndarray:
    assignment = {mask: dyad(v) for mask, v in zip(_masks(instance), vecs)}
    return assemble_state(instance, assignment)


def _entropy_gradients(instance: AlignmentInstance, vecs: list[np.ndarray]) -> list[np.ndarray]:
    """Conjugate-coordinate gradients of S(kappa) for pure assignments."""
    n, q = instance.n, instance.site_dim
    kappa = _kappa_from_vecs(instance, vecs)
    dim = q**n
    reg = (1.0 - GRAD_REG) * kappa + GRAD_REG * np.eye(dim) / dim
    vals, evecs = np.linalg.eigh(hermitize(reg))
    logk = (evecs * np.log2(vals)) @ evecs.conj().T
    grads = []
    for mask, v in zip(_masks(instance), vecs):
        sites = mask_sites(mask, n)
        rest = [i for i in range(n) if i not in sites]
        order = sites + rest
        logk_arranged = permute_systems(logk, [q] * n, order) if n > 1 else logk
        k = len(sites)
        dm, dr = q**k, q ** len(rest)
        block = logk_arranged.reshape(dm, dr, dm, dr)
        if rest:
            tail = tensor_product(*([instance.site_state] * len(rest))) \
                if len(rest) > 1 else instance.site_state
            gmat = -instance.x[mask] * np.einsum("arbs,sr->ab", block, tail)
        else:
            gmat = -instance.x[mask] * logk_arranged
        grads.append(gmat @ v)
    return grads


def search_minimum(instance: AlignmentInstance, config: OptimConfig | None = None,
                   use_swarm: bool = True, match_tol: float = 1e-5,
                   counterexample_tol: float = 1e-6,
                   replay_dir: str | None = None) -> dict:
    """Minimize the assembled-state entropy over pure subset assignments.

    The aligned assignment is injected as restart 0, so any strict
    improvement over the conjectured value is a genuine counterexample; such
    runs are dumped to a replay file when ``replay_dir`` is given.
    """
    if instance.site_dim ** instance.n > 64:
        raise ValueError("state dimension cap 64 exceeded")
    config = config or OptimConfig()
    masks = _masks(instance)
    q = instance.site_dim
    shape = [q ** len(mask_sites(m, instance.n)) for m in masks]
    gamma = instance.top_eigenvector()
    aligned_vecs = []
    for m in masks:
        vec = gamma
        for _ in range(len(mask_sites(m, instance.n)) - 1):
            vec = np.kron(vec, gamma)
        aligned_vecs.append(vec)

    def objective(vecs):
        return vn_entropy(_kappa_from_vecs(instance, vecs))

    def gradient(vecs):
        return _entropy_gradients(instance, vecs)

    res = sphere_min(shape, objective, gradient, config, inits=[aligned_vecs])
    best = res
    if use_swarm:
        sw = particle_swarm(objective, spheres=shape, config=config)
        if sw.value < best.value - 1e-12:
            best = sw

    conj = conjectured_value(instance)
    gap = best.value - conj
    report = {
        "result": best,
        "conjectured": conj,
        "gap": gap,
        "matched": bool(abs(gap) <= match_tol),
        "counterexample": bool(gap < -counterexample_tol),
        "replay_path": None,
    }
    if report["counterexample"] and replay_dir is not None:
        report["replay_path"] = _write_replay(instance, config.seed, best, replay_dir)
    return report


# ---------------------------------------------------------------------------
# Order-2 purity variant and the tripartite overlap bound


def renyi2_alignment_check(instance: AlignmentInstance, trials: int = 1000,
                           seed: int = 42) -> dict:
    """Compare the aligned assignment's purity tr(kappa^2) against random
    pure assignments (purity maximization is the order-2 variant)."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(2,)))
    masks = _masks(instance)
    q = instance.site_dim
    aligned = assemble_state(instance, aligned_assignment(instance))
    aligned_purity = float(np.sum(np.abs(aligned) ** 2))
    max_random = -np.inf
    violations = 0
    for _ in range(trials):
        vecs = []
        for m in masks:
            d = q ** len(mask_sites(m, instance.n))
            v = rng.normal(size=d) + 1j * rng.normal(size=d)
            vecs.append(v / np.linalg.norm(v))
        purity = float(np.sum(np.abs(_kappa_from_vecs(instance, vecs)) ** 2))
        max_random = max(max_random, purity)
        if purity > aligned_purity + 1e-12:
            violations += 1
    return {
        "aligned_purity": aligned_purity,
        "max_random_purity": max_random,
        "violations": violations,
        "trials": trials,
    }


def tripartite_lemma_check(dims: tuple[int, int, int], trials: int = 500,
                           seed: int = 42) -> dict:
    """Check the overlap bound tr[(P_mu (x) Theta)(Z (x) P_nu)] <= max eig
    product: the proposed split optimizer attains the top-eigenvalue product
    and dominates random samples."""
    d1, d2, d3 = (int(d) for d in dims)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(3,)))

    def rand_psd(d):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        return a @ a.conj().T

    z1 = rand_psd(d1)
    theta3 = rand_psd(d3)
    return _tripartite_check_ops(z1, theta3, (d1, d2, d3), trials, rng)


def _tripartite_check_ops(z1, theta3, dims, trials, rng) -> dict:
    d1, d2, d3 = dims

    def objective(mu_vec, nu_vec):
        left = np.kron(dyad(mu_vec), theta3)
        right = np.kron(z1, dyad(nu_vec))
        return float(np.real(np.trace(left @ right)))

    zvals, zvecs = np.linalg.eigh(hermitize(z1))
    tvals, tvecs = np.linalg.eigh(hermitize(theta3))
    xi = np.zeros(d2, dtype=complex)
    xi[0] = 1.0
    mu_star = np.kron(zvecs[:, -1], xi)
    nu_star = np.kron(xi, tvecs[:, -1])
    proposed = objective(mu_star, nu_star)
    eig_product = float(zvals[-1] * tvals[-1])

    max_sample = -np.inf
    violations = 0
    for _ in range(trials):
        mu = rng.normal(size=d1 * d2) + 1j * rng.normal(size=d1 * d2)
        nu = rng.normal(size=d2 * d3) + 1j * rng.normal(size=d2 * d3)
        val = objective(mu / np.linalg.norm(mu), nu / np.linalg.norm(nu))
        max_sample = max(max_sample, val)
        if val > proposed + 1e-12:
            violations += 1
    return {
        "proposed": proposed,
        "eig_product": eig_product,
        "proposed_matches_eig_product": bool(abs(proposed - eig_product) <= 1e-12
                                             * max(1.0, abs(eig_product))),
        "max_sample": max_sample,
        "violations": violations,
        "trials": trials,
    }


# ---------------------------------------------------------------------------
# Instance file format and replay files


def format_instance(instance: AlignmentInstance) -> str:
    diag = np.diag(instance.site_state).real
    if instance.site_dim == 2 and np.allclose(np.diag(diag), instance.site_state):
        head = f"n={instance.n} s={diag[0]:.17g}"
    else:
        head = f"n={instance.n} upsilon=" + ",".join(f"{v:.17g}" for v in diag)
    lines = [head]
    for mask in range(2**instance.n):
        if instance.x[mask] > 0.0:
            lines.append(f"M={mask} x={instance.x[mask]:.17g}")
    return "\n".join(lines) + "\n"


def parse_instances(text: str) -> list[AlignmentInstance]:
    """Parse the plain-text record format: an `n=... s=...` (or upsilon=...)
    header line followed by `M=<bitmask> x=<real>` lines per instance."""
    out = []
    n = None
    site = None
    x = None

    def flush():
        if n is not None:
            total = x.sum()
            if abs(total - 1.0) > 1e-9:
                raise ValueError("instance x-distribution does not sum to 1")
            x[:] = x / total
            out.append(AlignmentInstance(n=n, site_state=site, x=x.copy()))

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = dict(tok.split("=", 1) for tok in line.split())
        if "n" in fields:
            flush()
            n = int(fields["n"])
            if "s" in fields:
                s = float(fields["s"])
                site = np.diag([s, 1.0 - s]).astype(complex)
            elif "upsilon" in fields:
                vals = np.array([float(v) for v in fields["upsilon"].split(",")])
                site = np.diag(vals).astype(complex)
            else:
                raise ValueError(f"malformed instance header {line!r}")
            x = np.zeros(2**n)
        elif "M" in fields:
            if n is None:
                raise ValueError("subset line before instance header")
            x[int(fields["M"])] = float(fields["x"])
        else:
            raise ValueError(f"malformed instance line {line!r}")
    flush()
    return out


def _write_replay(instance: AlignmentInstance, seed: int, result: OptimResult,
                  replay_dir: str) -> str:
    os.makedirs(replay_dir, exist_ok=True)
    lines = [format_instance(instance).rstrip("\n"), f"seed={seed}",
             f"best={result.value:.17g}"]
    for mask, vec in zip(_masks(instance), result.argument):
        coords = ",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in np.asarray(vec))
        lines.append(f"assignment M={mask} psi={coords}")
    payload = "\n".join(lines) + "\n"
    fd, tmp = tempfile.mkstemp(dir=replay_dir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(payload)
    final = os.path.join(replay_dir, f"counterexample-seed{seed}.replay")
    os.replace(tmp, final)
    return final

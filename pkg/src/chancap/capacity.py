"""Channel information quantities, SDP capacity bounds, and certificate checks.

Values returned by the *_bound functions are log base 2 of the underlying
program optima, so they are directly comparable to the achievable rates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channels import ChannelPair, Ensemble, apply, choi, make_md, make_ns, make_o
from .entropic import (
    GRAD_REG,
    log2m_reg,
    channel_adjoint,
    ci_gradient,
    coherent_information,
    ensemble_holevo,
    ensemble_private_value,
    mutual_information_ea,
    mutual_information_gradient,
    renyi_entropy,
    shannon_entropy,
    vn_entropy,
)
from .linalg import (
    basis_projector,
    dag,
    dyad,
    hermitize,
    ket,
    partial_trace,
    partial_transpose,
    tensor_product,
)
from .optimize import OptimConfig, OptimResult, density_ascent, golden_max, grid_then_golden, sphere_min
from .sdp import LmiProgram, SdpSettings

LN2 = np.log(2.0)


def is_real_pair(pair: ChannelPair) -> bool:
    return float(np.abs(pair.isometry.matrix.imag).max()) == 0.0


def _tb_choi(pair: ChannelPair, leg: str = "direct") -> np.ndarray:
    j = choi(pair, leg)
    dout = pair.out_dim(leg)
    return partial_transpose(j, (pair.d_a, dout), 1)


# ---------------------------------------------------------------------------
# Diamond-norm machinery (output-transposed channels and channel differences)


def _add_diamond_norm(prog: LmiProgram, d_in: int, d_out: int, j_const: np.ndarray,
                      j_terms: list, real: bool):
    """Add variables/blocks computing the diamond norm of the map whose Choi
    operator is the Hermitian affine expression j_const + terms.

    Uses the symmetric reduction of the two-block norm program that is exact
    for Hermitian Choi data: minimize the spectral norm of the input marginal
    of a single witness Y constrained by Y >= +-J.
    """
    dd = d_in * d_out
    y = prog.add_hermitian("Y_diamond", dd, real=real)
    t = prog.add_scalar("t_diamond")
    # Y - J >= 0
    prog.add_block(-j_const, [(y, None)] + [(v, _negate(lm)) for v, lm in j_terms])
    # Y + J >= 0
    prog.add_block(+j_const, [(y, None)] + list(j_terms))
    # t I - Tr_out Y >= 0
    prog.add_block(np.zeros((d_in, d_in)), [
        (t, lambda s, d=d_in: s * np.eye(d)),
        (y, lambda h, di=d_in, do=d_out: -partial_trace(h, (di, do), 0)),
    ])
    return y, t


def _negate(linmap):
    if linmap is None:
        return lambda m: -np.asarray(m)
    return lambda m: -np.asarray(linmap(m))


def transposition_bound(pair: ChannelPair, settings: SdpSettings | None = None) -> float:
    """log2 of the diamond norm of the output-transposed channel."""
    k = _tb_choi(pair)
    prog = LmiProgram()
    _, t = _add_diamond_norm(prog, pair.d_a, pair.d_b, k, [], real=is_real_pair(pair))
    prog.set_objective("min", {t: 1.0})
    res = prog.solve(settings)
    return float(np.log2(res.value_safe_upper))


def gamma_bound(pair: ChannelPair, settings: SdpSettings | None = None) -> float:
    """log2 of the partial-transpose witness program max tr(R J) subject to
    -rho (x) I <= T_b(R) <= rho (x) I with rho a state."""
    j = choi(pair)
    da, db = pair.d_a, pair.d_b
    real = is_real_pair(pair)
    prog = LmiProgram()
    r = prog.add_hermitian("R", da * db, real=real)
    rho = prog.add_hermitian("rho", da, real=real, trace=1.0)
    prog.add_block(np.zeros((da * db, da * db)), [(r, None)])
    prog.add_block(np.zeros((da, da)), [(rho, None)])

    def rho_ext(h):
        return np.kron(h, np.eye(db))

    def tbr(h):
        return partial_transpose(h, (da, db), 1)

    prog.add_block(np.zeros((da * db, da * db)), [(rho, rho_ext), (r, _negate(tbr))])
    prog.add_block(np.zeros((da * db, da * db)), [(rho, rho_ext), (r, tbr)])
    prog.set_objective("max", {r: j})
    res = prog.solve(settings)
    return float(np.log2(res.value_safe_upper))


def beta_bound(pair: ChannelPair, settings: SdpSettings | None = None) -> float:
    """log2 of min tr S_b over Hermitian (R, S) with
    -R <= T_b(J) <= R and -I (x) S <= T_b(R) <= I (x) S."""
    da, db = pair.d_a, pair.d_b
    tj = _tb_choi(pair)
    real = is_real_pair(pair)
    prog = LmiProgram()
    r = prog.add_hermitian("R", da * db, real=real)
    s = prog.add_hermitian("S", db, real=real)

    def tbr(h):
        return partial_transpose(h, (da, db), 1)

    def s_ext(h):
        return np.kron(np.eye(da), h)

    prog.add_block(-tj, [(r, None)])
    prog.add_block(+tj, [(r, None)])
    prog.add_block(np.zeros((da * db, da * db)), [(s, s_ext), (r, _negate(tbr))])
    prog.add_block(np.zeros((da * db, da * db)), [(s, s_ext), (r, tbr)])
    prog.set_objective("min", {s: np.eye(db)})
    res = prog.solve(settings)
    return float(np.log2(res.value_safe_upper))


# ---------------------------------------------------------------------------
# Private-capacity upper bound via the order-alpha conic relaxation


def fourier_basis(d: int) -> list[np.ndarray]:
    om = np.exp(2j * np.pi / d)
    return [np.array([om ** (j * k) for j in range(d)], dtype=complex) / np.sqrt(d)
            for k in range(d)]


def default_witness_states(d: int) -> list[np.ndarray]:
    """Computational basis united with the Fourier (X-eigenvector) basis."""
    return [ket(i, d) for i in range(d)] + fourier_basis(d)


def _witness_set_conj_closed(states: list[np.ndarray]) -> bool:
    for v in states:
        p = dyad(v)
        if not any(np.linalg.norm(np.conj(p) - dyad(w)) < 1e-10 for w in states):
            return False
    return True


def private_upper_bound(pair: ChannelPair, l: int = 5,
                        witness_states: list[np.ndarray] | None = None,
                        settings: SdpSettings | None = None) -> float:
    """Upper bound on the private capacity at order alpha = 1 + 2^-l, with the
    block-positivity constraint relaxed to the listed pure-state witnesses."""
    if l < 1:
        raise ValueError("l must be >= 1")
    da, db = pair.d_a, pair.d_b
    dd = da * db
    j = choi(pair)
    if witness_states is None:
        witness_states = default_witness_states(da)
    witness_states = [np.asarray(v, dtype=complex) for v in witness_states]
    for v in witness_states:
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValueError("witness states must be unit norm")
    real = is_real_pair(pair) and _witness_set_conj_closed(witness_states)

    prog = LmiProgram()
    rho = prog.add_hermitian("rho", da, real=real, trace=1.0)
    kvar = prog.add_matrix("K", dd, dd, real=real)
    zvars = [prog.add_matrix(f"Z{i}", dd, dd, real=real) for i in range(l + 1)]
    wvars = [prog.add_hermitian(f"W{i}", dd, real=real) for i in range(1, l + 1)]

    z2 = np.zeros((2 * dd, 2 * dd), dtype=complex)

    def top_left(h):
        out = np.zeros((2 * dd, 2 * dd), dtype=complex)
        out[:dd, :dd] = h
        return out

    def rho_tl(h):
        return top_left(np.kron(h, np.eye(db)))

    def off_diag(m):
        out = np.zeros((2 * dd, 2 * dd), dtype=complex)
        out[:dd, dd:] = m
        out[dd:, :dd] = m.conj().T
        return out

    def bottom_right_h(m):
        out = np.zeros((2 * dd, 2 * dd), dtype=complex)
        out[dd:, dd:] = m + m.conj().T
        return out

    # [[rho (x) I, K], [K†, Z_l + Z_l†]] >= 0
    prog.add_block(z2, [(rho, rho_tl), (kvar, off_diag), (zvars[l], bottom_right_h)])
    # [[W_i, Z_i], [Z_i†, Z_{i-1} + Z_{i-1}†]] >= 0
    for i in range(1, l + 1):
        prog.add_block(z2, [(wvars[i - 1], top_left), (zvars[i], off_diag),
                            (zvars[i - 1], bottom_right_h)])
    # witness relaxation of block positivity of rho (x) I - Z_0 - Z_0†
    eye_b = np.eye(db)
    for v in witness_states:
        p = np.outer(v.conj(), v)  # transpose of the witness projector
        pk = np.kron(p, eye_b)

        def rho_w(h, p=p):
            return float(np.real(np.trace(h @ p))) * eye_b

        def z0_w(m, pk=pk):
            mm = m + m.conj().T
            return -partial_trace(pk @ mm, (da, db), 1)

        prog.add_block(np.zeros((db, db)), [(rho, rho_w), (zvars[0], z0_w)])

    prog.set_objective("max", dict([(kvar, 2.0 * j)] + [(wv, -j) for wv in wvars]))
    res = prog.solve(settings)
    u = res.value_safe_upper
    two_l = 2.0 ** l
    return float(l * two_l - (two_l + 1) * np.log2(two_l + 1) + (two_l + 1) * np.log2(u))


# ---------------------------------------------------------------------------
# Coherent-information searches


def _family_mu(pair: ChannelPair) -> np.ndarray:
    if pair.family == "Ns":
        s = pair.params["s"]
        return np.array([np.sqrt(s), np.sqrt(1.0 - s)])
    if pair.family == "Md":
        d = pair.params["d"]
        return np.full(d - 1, 1.0 / np.sqrt(d - 1))
    if pair.family == "O":
        return np.asarray(pair.params["mu"], dtype=float)
    raise ValueError("reduced strategy requires an Ns/Md/O family channel")


def _interval_state(pair: ChannelPair, u: float, i: int | None = None) -> np.ndarray:
    d = pair.d_a
    i = d - 1 if i is None else i
    return (1.0 - u) * basis_projector(0, d) + u * basis_projector(i, d)


def q1(pair: ChannelPair, strategy: str = "reduced",
       config: OptimConfig | None = None) -> OptimResult:
    """Best single-use coherent information.

    'reduced' runs the exact one-parameter concave maximization available to
    the Ns/Md/O family; 'general' runs the multi-restart density ascent.
    """
    config = config or OptimConfig()
    if strategy == "reduced":
        _family_mu(pair)  # raises off-family
        res = golden_max(lambda u: coherent_information(pair, _interval_state(pair, u)),
                         (0.0, 1.0), config.golden_tol)
        rho = _interval_state(pair, res.argument)
        return OptimResult(value=res.value, argument=rho, iterations=res.iterations,
                           converged=res.converged, seed_used=config.seed)
    if strategy == "general":
        return density_ascent(pair.d_a,
                              lambda rho: coherent_information(pair, rho),
                              lambda rho: ci_gradient(pair, rho),
                              config)
    raise ValueError(f"unknown strategy {strategy!r}")


def q1_multiletter(pair: ChannelPair, n: int, config: OptimConfig | None = None) -> OptimResult:
    """Per-letter coherent information of n parallel uses (n = 1 or 2).

    The tensor power of a single-use maximizer is injected as a warm start,
    so the per-letter value never drops below the single-use rate by more
    than the ascent tolerance."""
    from .channels import tensor_power

    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    if pair.d_a ** n > 81:
        raise ValueError("input dimension cap d_a^n <= 81 exceeded")
    config = config or OptimConfig()
    big = pair if n == 1 else tensor_power(pair, n)
    inits = None
    if n > 1:
        warm_cfg = replace(config, restarts=min(8, config.restarts))
        rho_star = density_ascent(pair.d_a,
                                  lambda rho: coherent_information(pair, rho),
                                  lambda rho: ci_gradient(pair, rho),
                                  warm_cfg).argument
        vals, vecs = np.linalg.eigh(hermitize(rho_star))
        l_star = vecs * np.sqrt(np.clip(vals, 0.0, None))
        inits = [np.kron(l_star, l_star)]
    res = density_ascent(big.d_a,
                         lambda rho: coherent_information(big, rho),
                         lambda rho: ci_gradient(big, rho),
                         config, inits=inits)
    return OptimResult(value=res.value / n, argument=res.argument,
                       iterations=res.iterations, converged=res.converged,
                       seed_used=res.seed_used)


# ---------------------------------------------------------------------------
# Ensemble searches (Holevo and private information lower bounds)


def _probs_of(q: np.ndarray) -> np.ndarray:
    w = np.abs(q) ** 2
    return w / w.sum()


def _prob_chain(q: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Gradient wrt conj(q) of sum_i g_i p_i with p = |q|^2 / ||q||^2."""
    p = _probs_of(q)
    nrm = float(np.sum(np.abs(q) ** 2))
    return (g * q - float(g @ p) * q) / nrm


def _ensemble_search(pair: ChannelPair, config: OptimConfig, sizes: list[int],
                     pure: bool, inits_extra=None) -> OptimResult:
    d = pair.d_a
    best = None
    n_sizes = len(sizes)
    restarts_per_size = max(2, config.restarts // max(1, n_sizes))

    for m in sizes:
        if pure:
            shape = [d] * m + [m]
        else:
            shape = [d * d] * m + [m]

        def build(vecs):
            q = vecs[-1]
            p = _probs_of(q)
            if pure:
                states = [dyad(v) for v in vecs[:-1]]
            else:
                ls = [v.reshape(d, d) for v in vecs[:-1]]
                states = [l @ dag(l) for l in ls]  # unit trace: ||l||_F = 1
            return p, states

        if pure:
            def objective(vecs):
                p, states = build(vecs)
                outs = [apply(pair, s) for s in states]
                avg = sum(pi * o for pi, o in zip(p, outs))
                return -(vn_entropy(avg) - sum(pi * vn_entropy(o) for pi, o in zip(p, outs)))

            def gradient(vecs):
                p, states = build(vecs)
                outs = [apply(pair, s) for s in states]
                avg = sum(pi * o for pi, o in zip(p, outs))
                log_avg = log2m_reg(avg)
                adj_avg = channel_adjoint(pair, log_avg)
                grads = []
                gq = np.zeros(len(p))
                for i, (v, o) in enumerate(zip(vecs[:-1], outs)):
                    gmat = p[i] * (channel_adjoint(pair, log2m_reg(o)) - adj_avg)
                    grads.append(-(gmat @ v))
                    gq[i] = (-np.real(np.trace(o @ log_avg)) - 1.0 / LN2
                             - vn_entropy(o))
                grads.append(-_prob_chain(vecs[-1], gq))
                return grads
        else:
            def objective(vecs):
                p, states = build(vecs)
                avg = sum(pi * s for pi, s in zip(p, states))
                val = coherent_information(pair, avg)
                val -= sum(pi * coherent_information(pair, s) for pi, s in zip(p, states))
                return -val

            def gradient(vecs):
                p, states = build(vecs)
                avg = sum(pi * s for pi, s in zip(p, states))
                g_avg = _delta_gradient(pair, avg)
                grads = []
                gq = np.zeros(len(p))
                for i, (v, s) in enumerate(zip(vecs[:-1], states)):
                    gmat = p[i] * (g_avg - _delta_gradient(pair, s))
                    l = v.reshape(d, d)
                    gl = (gmat - np.trace(gmat @ s).real * np.eye(d)) @ l
                    grads.append(-gl.reshape(-1))
                    gq[i] = np.real(np.trace(s @ g_avg)) - coherent_information(pair, s)
                grads.append(-_prob_chain(vecs[-1], gq))
                return grads

        inits = []
        basis_states = [ket(i % d, d) for i in range(m)]
        if pure:
            inits.append(basis_states + [np.ones(m, dtype=complex)])
        else:
            inits.append([dyad(b).reshape(-1) for b in basis_states]
                         + [np.ones(m, dtype=complex)])
        if inits_extra:
            for extra in inits_extra:
                full = extra(m, pure)
                if full is not None:
                    inits.append(full)

        cfg = replace(config, restarts=max(restarts_per_size, len(inits)))
        res = sphere_min(shape, objective, gradient, cfg, inits=inits)
        value = -res.value
        if best is None or value > best.value + 1e-12:
            p, states = build(res.argument)
            best = OptimResult(value=value, argument=Ensemble(p, states),
                               iterations=res.iterations, converged=res.converged,
                               seed_used=config.seed)
    return best


def _delta_gradient(pair: ChannelPair, rho: np.ndarray) -> np.ndarray:
    """Euclidean coherent-information gradient including additive constants
    (they cancel inside ensemble differences)."""
    rb = apply(pair, rho, "direct")
    rc = apply(pair, rho, "complement")
    return hermitize(-channel_adjoint(pair, log2m_reg(rb), "direct")
                     + channel_adjoint(pair, log2m_reg(rc), "complement"))


def holevo_info(pair: ChannelPair, config: OptimConfig | None = None) -> OptimResult:
    """Lower bound on the Holevo information from pure-state ensembles of
    sizes d_a .. d_a^2."""
    config = config or OptimConfig()
    sizes = list(range(pair.d_a, pair.d_a ** 2 + 1))
    return _ensemble_search(pair, config, sizes, pure=True)


def private_info(pair: ChannelPair, config: OptimConfig | None = None) -> OptimResult:
    """Lower bound on the private information from mixed-state ensembles of
    sizes 2 .. d_a^2."""
    config = config or OptimConfig()
    d = pair.d_a
    sizes = list(range(2, d * d + 1))

    # warm start: eigen-ensemble of a coherent-information maximizer, which
    # pins the private value at or above the single-use quantum rate
    warm_cfg = replace(config, restarts=min(8, config.restarts))
    rho_star = density_ascent(d, lambda r: coherent_information(pair, r),
                              lambda r: ci_gradient(pair, r), warm_cfg).argument
    vals, vecs = np.linalg.eigh(hermitize(rho_star))

    def eigen_init(m, pure):
        if pure or m < d:
            return None
        states = []
        for i in range(m):
            if i < d:
                states.append(dyad(vecs[:, d - 1 - i]).reshape(-1))
            else:
                states.append(dyad(ket(i % d, d)).reshape(-1))
        q = np.sqrt(np.concatenate([np.clip(vals[::-1], 1e-6, None),
                                    np.full(m - d, 1e-6)]))
        return states + [q.astype(complex)]

    return _ensemble_search(pair, config, sizes, pure=False, inits_extra=[eigen_init])


def ea_capacity(pair: ChannelPair, config: OptimConfig | None = None) -> OptimResult:
    """Channel mutual information by concave ascent (three restarts)."""
    config = config or OptimConfig()
    cfg = replace(config, restarts=min(3, config.restarts))
    return density_ascent(pair.d_a,
                          lambda rho: mutual_information_ea(pair, rho),
                          lambda rho: mutual_information_gradient(pair, rho),
                          cfg)


# ---------------------------------------------------------------------------
# Structure probes


def log_singularity_probe(pair: ChannelPair, base_state: np.ndarray,
                          direction_state: np.ndarray, eps_grid=None,
                          leg: str = "direct") -> dict:
    """Probe the entropy slope of rho(eps) = (1-eps) base + eps direction.

    Fits the requested output-leg entropy against a + x*eps*log2(1/eps) + c*eps
    and reports the singularity-rate estimate x together with positivity of
    the coherent-information difference on the grid.
    """
    if eps_grid is None:
        eps_grid = np.logspace(-6, -3, 13)
    eps_grid = np.asarray(eps_grid, dtype=float)
    base = np.asarray(base_state, dtype=complex)
    direction = np.asarray(direction_state, dtype=complex)
    delta0 = coherent_information(pair, base)
    deltas = []
    s_leg = []
    for eps in eps_grid:
        rho = (1.0 - eps) * base + eps * direction
        deltas.append(coherent_information(pair, rho) - delta0)
        s_leg.append(vn_entropy(apply(pair, rho, leg)))
    deltas = np.asarray(deltas)
    s_leg = np.asarray(s_leg)
    design = np.stack([np.ones_like(eps_grid), eps_grid * np.log2(1.0 / eps_grid), eps_grid],
                      axis=1)
    coef, *_ = np.linalg.lstsq(design, s_leg, rcond=None)
    return {
        "delta_positive": bool(np.all(deltas > 0)),
        "rate_estimate": float(coef[1]),
        "deltas": deltas,
        "entropies": s_leg,
        "eps_grid": eps_grid,
    }


def subchannel_ordering(mu, config: OptimConfig | None = None) -> list[float]:
    """Single-use coherent information of each two-dimensional input
    restriction span{|0>, |i>}, i = 1..d-1; nondecreasing in i."""
    config = config or OptimConfig()
    pair = make_o(mu)
    d = pair.d_a
    out = []
    for i in range(1, d):
        res = golden_max(lambda u, i=i: coherent_information(pair, _interval_state(pair, u, i)),
                         (0.0, 1.0), config.golden_tol)
        out.append(res.value)
    return out


def renyi_q1_reduced(pair: ChannelPair, alpha: float,
                     config: OptimConfig | None = None) -> OptimResult:
    """One-parameter maximization of the order-alpha entropy bias on the
    interval family, with a grid presample before golden refinement (the
    objective need not be concave away from alpha = 1)."""
    config = config or OptimConfig()
    _family_mu(pair)

    def f(u):
        rho = _interval_state(pair, u)
        return (renyi_entropy(apply(pair, rho, "direct"), alpha)
                - renyi_entropy(apply(pair, rho, "complement"), alpha))

    res = grid_then_golden(f, (0.0, 1.0), config.golden_tol, grid=101)
    return OptimResult(value=res.value, argument=_interval_state(pair, res.argument),
                       iterations=res.iterations, converged=res.converged,
                       seed_used=config.seed)


# ---------------------------------------------------------------------------
# Explicit feasibility certificates


def _ns_gamma_certificate(s: float):
    rho = (basis_projector(0, 3) + basis_projector(2, 3)) / 2.0
    v01 = np.kron(ket(0, 3), ket(1, 3))
    v22 = np.kron(ket(2, 3), ket(2, 3))
    v00 = np.kron(ket(0, 3), ket(0, 3))
    r = (dyad(v00) + dyad(v01) + np.outer(v01, v22.conj())
         + np.outer(v22, v01.conj()) + dyad(v22)) / 2.0
    return rho, r


def _ns_diamond_certificate(s: float) -> np.ndarray:
    k3 = ket(0, 3), ket(1, 3), ket(2, 3)
    y = (s * dyad(np.kron(k3[0], k3[0]))
         + (1 - s) * dyad(np.kron(k3[0], k3[1]))
         + np.sqrt(1 - s) * dyad(np.kron(k3[0], k3[2]))
         + dyad(np.kron(k3[1], k3[2]))
         + dyad(np.kron(k3[2], k3[2])))
    phi = ((s**2 / (1 - s)) ** 0.25 * np.kron(k3[1], k3[0])
           + (1 - s) ** 0.25 * np.kron(k3[2], k3[1])) if s > 0 else \
        np.kron(k3[2], k3[1]).astype(complex)
    return y + dyad(phi)


def _ns_beta_certificate(s: float):
    k3 = ket(0, 3), ket(1, 3), ket(2, 3)
    psi = np.sqrt(s) * np.kron(k3[1], k3[0]) + np.sqrt(1 - s) * np.kron(k3[2], k3[1])
    r = (s * dyad(np.kron(k3[0], k3[0])) + (1 - s) * dyad(np.kron(k3[0], k3[1]))
         + dyad(np.kron(k3[0], k3[2])) + dyad(psi)
         + dyad(np.kron(k3[1], k3[2]))) + dyad(np.kron(k3[2], k3[2]))
    sb = np.diag([s, 1 - s, 1.0]).astype(complex)
    return r, sb


def _md_diamond_certificate(d: int) -> np.ndarray:
    y = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d - 1):
        y += dyad(np.kron(ket(0, d), ket(j, d))) / (d - 1)
    y += dyad(np.kron(ket(0, d), ket(d - 1, d))) / np.sqrt(d - 1)
    for j in range(1, d):
        y += dyad(np.kron(ket(j, d), ket(d - 1, d)))
    xi = sum(np.kron(ket(j, d), ket(j - 1, d)) for j in range(1, d)) / (d - 1) ** 0.25
    return y + dyad(xi)


def _md_beta_certificate(d: int):
    r = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d - 1):
        r += dyad(np.kron(ket(0, d), ket(j, d))) / (d - 1)
    for j in range(d):
        r += dyad(np.kron(ket(j, d), ket(d - 1, d)))
    psi = sum(np.kron(ket(j, d), ket(j - 1, d)) for j in range(1, d)) / np.sqrt(d - 1)
    r += dyad(psi)
    sb = (np.diag([1.0 / (d - 1)] * (d - 1) + [1.0])).astype(complex)
    return r, sb


def _min_eig(h: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitize(h)).min())


def _ns_block_spectrum(s: float) -> np.ndarray:
    """Nonzero spectrum of the doubled diamond-certificate feasibility
    operator, from its closed-form block decomposition."""
    lam = (2.0 - s) / np.sqrt(1.0 - s)
    vals = [2 * s, 2 * (1 - s), 2.0, 2.0, lam, lam]
    return np.sort(np.concatenate([np.zeros(12), vals]))


def verify_certificates(family: str, params: dict,
                        tamper=None, tol: float = 1e-9) -> dict:
    """Check the explicit feasibility certificates for the transposition,
    witness, and classical-capacity programs of the Ns/Md families.

    ``tamper`` optionally maps the Choi operator to a corrupted version (a
    negative-control hook); any violated constraint is reported by name.
    """
    checks: dict[str, dict] = {}
    if family == "Ns":
        s = float(params["s"])
        pair = make_ns(s)
        j = choi(pair)
        if tamper is not None:
            j = tamper(j)
        tj = partial_transpose(j, (3, 3), 1)

        rho, r = _ns_gamma_certificate(s)
        rext = np.kron(rho, np.eye(3))
        tbr = partial_transpose(r, (3, 3), 1)
        checks["gamma.R_psd"] = {"residual": -min(_min_eig(r), 0.0)}
        checks["gamma.rho_psd"] = {"residual": -min(_min_eig(rho), 0.0)}
        checks["gamma.rho_trace"] = {"residual": abs(np.trace(rho).real - 1.0)}
        checks["gamma.upper"] = {"residual": -min(_min_eig(rext - tbr), 0.0)}
        checks["gamma.lower"] = {"residual": -min(_min_eig(rext + tbr), 0.0)}
        obj = float(np.real(np.trace(r @ j)))
        checks["gamma.objective"] = {"residual": abs(obj - (1 + np.sqrt(1 - s))),
                                     "value": obj}

        y = _ns_diamond_certificate(s)
        big = np.block([[y, -tj], [-tj, y]])
        checks["diamond.Y_psd"] = {"residual": -min(_min_eig(y), 0.0)}
        checks["diamond.block_psd"] = {"residual": -min(_min_eig(big), 0.0)}
        ya = partial_trace(y, (3, 3), 0)
        norm = float(np.linalg.eigvalsh(hermitize(ya)).max())
        checks["diamond.objective"] = {"residual": abs(norm - (1 + np.sqrt(1 - s))),
                                       "value": norm}
        spec = np.sort(np.linalg.eigvalsh(hermitize(big)))
        checks["diamond.block_decomposition"] = {
            "residual": float(np.abs(spec - _ns_block_spectrum(s)).max())}

        r2, sb = _ns_beta_certificate(s)
        tbr2 = partial_transpose(r2, (3, 3), 1)
        sext = np.kron(np.eye(3), sb)
        checks["beta.choi_upper"] = {"residual": -min(_min_eig(r2 - tj), 0.0)}
        checks["beta.choi_lower"] = {"residual": -min(_min_eig(r2 + tj), 0.0)}
        checks["beta.R_upper"] = {"residual": -min(_min_eig(sext - tbr2), 0.0)}
        checks["beta.R_lower"] = {"residual": -min(_min_eig(sext + tbr2), 0.0)}
        tr_s = float(np.trace(sb).real)
        checks["beta.objective"] = {"residual": abs(tr_s - 2.0), "value": tr_s}
    elif family == "Md":
        d = int(params["d"])
        pair = make_md(d)
        j = choi(pair)
        if tamper is not None:
            j = tamper(j)
        tj = partial_transpose(j, (d, d), 1)

        y = _md_diamond_certificate(d)
        big = np.block([[y, -tj], [-tj, y]])
        checks["diamond.Y_psd"] = {"residual": -min(_min_eig(y), 0.0)}
        checks["diamond.block_psd"] = {"residual": -min(_min_eig(big), 0.0)}
        ya = partial_trace(y, (d, d), 0)
        target = 1 + 1 / np.sqrt(d - 1)
        checks["diamond.marginal_identity"] = {
            "residual": float(np.linalg.norm(ya - target * np.eye(d)))}
        norm = float(np.linalg.eigvalsh(hermitize(ya)).max())
        checks["diamond.objective"] = {"residual": abs(norm - target), "value": norm}
        # quadratic feasibility identity Y = TJ Y^+ TJ on the support
        ypinv = np.linalg.pinv(y, rcond=1e-10, hermitian=True)
        checks["diamond.schur_identity"] = {
            "residual": float(np.linalg.norm(y - tj @ ypinv @ tj))}

        r2, sb = _md_beta_certificate(d)
        tbr2 = partial_transpose(r2, (d, d), 1)
        sext = np.kron(np.eye(d), sb)
        checks["beta.choi_upper"] = {"residual": -min(_min_eig(r2 - tj), 0.0)}
        checks["beta.choi_lower"] = {"residual": -min(_min_eig(r2 + tj), 0.0)}
        checks["beta.R_upper"] = {"residual": -min(_min_eig(sext - tbr2), 0.0)}
        checks["beta.R_lower"] = {"residual": -min(_min_eig(sext + tbr2), 0.0)}
        tr_s = float(np.trace(sb).real)
        checks["beta.objective"] = {"residual": abs(tr_s - 2.0), "value": tr_s}
    else:
        raise ValueError("family must be 'Ns' or 'Md'")

    for name, entry in checks.items():
        entry["passed"] = bool(entry["residual"] <= tol)
    return {
        "family": family,
        "params": dict(params),
        "checks": checks,
        "passed": all(e["passed"] for e in checks.values()),
    }


# ---------------------------------------------------------------------------
# Combined report


@dataclass
class CapacityReport:
    q1_lower: float
    gamma_log: float
    transposition_log: float
    beta_log: float
    holevo_lower: float
    private_lower: float
    private_upper: float
    ea: float
    diagnostics: dict

    def check_ordering(self, slack: float = 1e-6) -> list[str]:
        bad = []
        if not self.q1_lower <= self.private_lower + slack:
            bad.append("q1 <= private")
        if not self.private_lower <= self.holevo_lower + slack:
            bad.append("private <= holevo")
        if not self.holevo_lower <= self.beta_log + slack:
            bad.append("holevo <= beta")
        if not self.q1_lower <= self.gamma_log + slack:
            bad.append("q1 <= gamma")
        if not self.gamma_log <= self.transposition_log + slack:
            bad.append("gamma <= transposition")
        if not self.private_lower <= self.private_upper + slack:
            bad.append("private <= private_upper")
        if not self.holevo_lower <= self.ea + slack:
            bad.append("holevo <= ea")
        return bad


def full_report(pair: ChannelPair, config: OptimConfig | None = None,
                settings: SdpSettings | None = None) -> CapacityReport:
    """Compute every bound for one channel (single-threaded)."""
    config = config or OptimConfig()
    try:
        q1_res = q1(pair, "reduced", config)
        q1_strategy = "reduced"
    except ValueError:
        q1_res = q1(pair, "general", config)
        q1_strategy = "general"
    hol = holevo_info(pair, config)
    priv = private_info(pair, config)
    ea = ea_capacity(pair, config)
    report = CapacityReport(
        q1_lower=q1_res.value,
        gamma_log=gamma_bound(pair, settings),
        transposition_log=transposition_bound(pair, settings),
        beta_log=beta_bound(pair, settings),
        holevo_lower=hol.value,
        private_lower=priv.value,
        private_upper=private_upper_bound(pair, settings=settings),
        ea=ea.value,
        diagnostics={
            "q1_strategy": q1_strategy,
            "holevo_ensemble_size": len(hol.argument.states),
            "private_ensemble_size": len(priv.argument.states),
            "seed": config.seed,
        },
    )
    return report

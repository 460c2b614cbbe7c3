"""Degradability analysis: the product-basis Gram-matrix criterion for the
three-parameter qutrit family, and SDP degradability/antidegradability
parameters for arbitrary small channels.

The scalar dg(B) used here is the diamond-norm distance between the best
CPTP post-processing of B and its complement (and adg swaps the roles); a
channel is degradable iff dg vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import _add_diamond_norm, is_real_pair
from .channels import ChannelPair, apply, choi, complement_pair, ket, make_v
from .linalg import hermitize, partial_trace
from .sdp import LmiProgram, SdpSettings

OMEGA = np.exp(2j * np.pi / 3.0)


@dataclass
class GramMatrix:
    """Circulant 3x3 Gram matrix with unit diagonal determined by one complex
    off-diagonal scalar."""

    m: complex

    @property
    def matrix(self) -> np.ndarray:
        m = complex(self.m)
        return np.array([
            [1.0, m, np.conj(m)],
            [np.conj(m), 1.0, m],
            [m, np.conj(m), 1.0],
        ])

    def is_psd(self, tol: float = 1e-10) -> bool:
        return bool(np.linalg.eigvalsh(self.matrix).min() >= -tol)


@dataclass
class DegradabilityReport:
    dg: float
    adg: float
    degrading_map_choi: np.ndarray | None = None


def pcubed_gram(s: float, mu: float, nu: float):
    """Product-basis decomposition scalars and Gram matrices of the
    three-parameter family at strictly interior parameters.

    Returns (a, b, c, A, B, C) where A, B, C are the Gram matrices of the
    input, output, and environment state triples; the isometry structure
    forces A to equal the Hadamard product of B and C.
    """
    for name, val in (("s", s), ("mu", mu), ("nu", nu)):
        if not (0.0 < val < 1.0):
            raise ValueError(f"{name} must lie strictly inside (0, 1), got {val}")
    r = ((1 - s) * (1 - mu) * (1 - nu) / (s * mu * nu)) ** (1.0 / 6.0)
    k1 = np.sqrt((1 - s) / nu) / r
    k2 = r * np.sqrt(s / (1 - mu))
    l1 = np.sqrt((1 - s) / s) / r
    l2 = r * np.sqrt(mu / (1 - mu))
    a0sq = 1.0 / (1 + k1**2 + k2**2)
    b0sq = 1.0 / (1 + l1**2 + l2**2)
    c0sq = 1.0 / (1 + r**2)
    a = a0sq * (1 + OMEGA * k1**2 + OMEGA**2 * k2**2)
    b = b0sq * (1 + OMEGA * l1**2 + OMEGA**2 * l2**2)
    c = c0sq * (1 + OMEGA**2 * r**2)
    ga, gb, gc = GramMatrix(a), GramMatrix(b), GramMatrix(c)
    if np.linalg.norm(ga.matrix - gb.matrix * gc.matrix) > 1e-10:
        raise ArithmeticError("Gram factorization identity A = B*C violated")
    return a, b, c, ga.matrix, gb.matrix, gc.matrix


def pcubed_product_states(s: float, mu: float, nu: float):
    """The (input, output, environment) state triples witnessing the
    product-basis structure of the isometry."""
    r = ((1 - s) * (1 - mu) * (1 - nu) / (s * mu * nu)) ** (1.0 / 6.0)
    k1 = np.sqrt((1 - s) / nu) / r
    k2 = r * np.sqrt(s / (1 - mu))
    l1 = np.sqrt((1 - s) / s) / r
    l2 = r * np.sqrt(mu / (1 - mu))
    alphas, betas, gammas = [], [], []
    for i in range(3):
        al = np.array([1.0, OMEGA**i * k1, OMEGA ** (2 * i) * k2])
        be = np.array([1.0, OMEGA**i * l1, OMEGA ** (2 * i) * l2])
        ga = np.array([1.0, OMEGA ** (2 * i) * r])
        alphas.append(al / np.linalg.norm(al))
        betas.append(be / np.linalg.norm(be))
        gammas.append(ga / np.linalg.norm(ga))
    return alphas, betas, gammas


def pcubed_degradable(mu: float, s: float = 0.5) -> bool:
    """Degradability of the balanced two-parameter channel from the Gram
    factorization criterion (s = 1/2 closed form)."""
    if not (0.0 < mu < 1.0):
        raise ValueError(f"mu must lie strictly inside (0, 1), got {mu}")
    if s != 0.5:
        raise ValueError("closed-form criterion is defined at s = 1/2")
    d = 2.0 * OMEGA * (1.0 - 2.0 * mu) / (2.0 - mu)
    crit = 1.0 + 2.0 * np.real(d**3) - 3.0 * abs(d) ** 2
    by_formula = bool(crit >= -1e-12)
    by_eigen = GramMatrix(d).is_psd(tol=1e-9)
    if by_formula != by_eigen and abs(crit) > 1e-9:
        raise ArithmeticError("criterion and eigensolve disagree on the Gram matrix")
    return by_formula


def _composition_choi_map(pair: ChannelPair, post_in: int, post_out: int):
    """For a channel leg B with input a, return the linear map sending a
    post-processing Choi operator J_D (on post_in (x) post_out) to the Choi
    operator of the composed map on a (x) post_out."""
    da = pair.d_a
    b_imgs = [[None] * da for _ in range(da)]
    for i in range(da):
        for k in range(da):
            eik = np.outer(ket(i, da), ket(k, da).conj())
            b_imgs[i][k] = apply(pair, eik, "direct")

    def compose(jd: np.ndarray) -> np.ndarray:
        out = np.zeros((da * post_out, da * post_out), dtype=complex)
        for i in range(da):
            for k in range(da):
                block = partial_trace(
                    np.kron(b_imgs[i][k].T, np.eye(post_out)) @ jd,
                    (post_in, post_out), 1)
                out[i * post_out:(i + 1) * post_out,
                    k * post_out:(k + 1) * post_out] = block
        return out

    return compose


def _deg_distance(direct: ChannelPair, settings: SdpSettings | None):
    """min over CPTP D of the diamond-norm distance between D composed with
    the direct leg and the complement leg."""
    da, db, dc = direct.d_a, direct.d_b, direct.d_c
    j_target = choi(direct, "complement")
    compose = _composition_choi_map(direct, db, dc)
    real = is_real_pair(direct)

    prog = LmiProgram()
    jd = prog.add_hermitian_ptrace("JD", db, dc, np.eye(db), real=real)
    prog.add_block(np.zeros((db * dc, db * dc)), [(jd, None)])
    _, t = _add_diamond_norm(prog, da, dc, -j_target, [(jd, compose)], real=real)
    prog.set_objective("min", {t: 1.0})
    res = prog.solve(settings)
    return max(res.value, 0.0), res.vars["JD"]


def dg_adg(pair: ChannelPair, settings: SdpSettings | None = None) -> DegradabilityReport:
    """Degradability and antidegradability parameters of a channel pair.

    dg is the least diamond-norm distance between a post-processed direct leg
    and the complement; adg swaps the two legs.  Both vanish iff the channel
    is degradable resp. antidegradable.
    """
    if pair.d_b * pair.d_c > 36:
        raise ValueError("output x environment dimension cap 36 exceeded")
    dg, jd = _deg_distance(pair, settings)
    adg, _ = _deg_distance(complement_pair(pair), settings)
    report = DegradabilityReport(dg=dg, adg=adg)
    if dg < 1e-6:
        report.degrading_map_choi = jd
    return report


def gram_degrading_exists(s: float, mu: float, nu: float) -> bool:
    """General-parameter Gram test: a degrading map exists iff the entrywise
    quotient of the output and environment Gram matrices is itself a valid
    (PSD, unit diagonal) Gram matrix."""
    _, b, c, *_ = pcubed_gram(s, mu, nu)
    if abs(c) < 1e-14:
        return abs(b) < 1e-14
    return GramMatrix(b / c).is_psd(tol=1e-10)

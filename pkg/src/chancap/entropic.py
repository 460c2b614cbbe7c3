"""Entropies, information functionals on channels and ensembles, gradients,
and majorization utilities.  All entropies are in bits (log base 2)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelPair, Ensemble, apply, kraus_ops
from .linalg import EIG_CUTOFF, dag, hermitize

_NEG_EIG_TOL = 1e-8
GRAD_REG = 1e-9


@dataclass
class Spectrum:
    """Nonnegative values in descending order summing to the declared trace."""

    values: np.ndarray
    trace: float = 1.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < -1e-10):
            raise ValueError("spectrum has a negative entry")
        if np.any(np.diff(self.values) > 1e-12):
            raise ValueError("spectrum is not descending")
        if abs(self.values.sum() - self.trace) > 1e-10:
            raise ValueError("spectrum sum differs from declared trace")

    @classmethod
    def of(cls, op: np.ndarray) -> "Spectrum":
        vals = np.linalg.eigvalsh(hermitize(np.asarray(op, dtype=complex)))
        vals = np.clip(vals, 0.0, None)[::-1]
        return cls(values=vals, trace=float(vals.sum()))


def _clean_eigenvalues(rho: np.ndarray) -> np.ndarray:
    vals = np.linalg.eigvalsh(hermitize(np.asarray(rho, dtype=complex)))
    if vals.min() < -_NEG_EIG_TOL:
        raise ValueError(f"operator has negative eigenvalue {vals.min():.3e}")
    vals = vals.copy()
    vals[np.abs(vals) < EIG_CUTOFF] = 0.0
    return np.clip(vals, 0.0, None)


def shannon_entropy(p) -> float:
    """Shannon entropy in bits with the 0*log 0 := 0 convention."""
    p = np.asarray(p, dtype=float)
    nz = p[p > EIG_CUTOFF]
    return float(-np.sum(nz * np.log2(nz)))


def binary_entropy(u: float) -> float:
    return shannon_entropy([u, 1.0 - u])


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy -sum lambda log2 lambda of a PSD operator."""
    return shannon_entropy(_clean_eigenvalues(rho))


def renyi_entropy(rho: np.ndarray, alpha: float) -> float:
    """Order-alpha entropy (1/(1-alpha)) log2 tr(rho^alpha).

    alpha = 1 dispatches to vn_entropy; alpha = 0 counts the support;
    alpha = inf gives -log2 of the top eigenvalue.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    vals = _clean_eigenvalues(rho)
    if alpha == 1.0:
        return shannon_entropy(vals)
    if np.isinf(alpha):
        return float(-np.log2(vals.max()))
    if alpha == 0.0:
        return float(np.log2(np.count_nonzero(vals > EIG_CUTOFF)))
    nz = vals[vals > EIG_CUTOFF]
    return float(np.log2(np.sum(nz**alpha)) / (1.0 - alpha))


def coherent_information(pair: ChannelPair, rho: np.ndarray) -> float:
    """Output-entropy bias: entropy of the direct image minus the complement image."""
    return vn_entropy(apply(pair, rho, "direct")) - vn_entropy(apply(pair, rho, "complement"))


def channel_adjoint(pair: ChannelPair, y: np.ndarray, leg: str = "direct") -> np.ndarray:
    """Adjoint map via Kraus conjugation: sum_k K† y K."""
    ks = kraus_ops(pair, leg)
    out = np.zeros((pair.d_a, pair.d_a), dtype=complex)
    for k in ks:
        out += dag(k) @ y @ k
    return out


def log2m_reg(rho: np.ndarray, eps: float = GRAD_REG) -> np.ndarray:
    """Matrix log2 of (1-eps) rho + eps I/d: finite on rank-deficient states."""
    d = rho.shape[0]
    reg = (1.0 - eps) * np.asarray(rho, dtype=complex) + eps * np.eye(d) / d
    vals, vecs = np.linalg.eigh(hermitize(reg))
    return (vecs * np.log2(vals)) @ vecs.conj().T


def ci_gradient(pair: ChannelPair, rho: np.ndarray) -> np.ndarray:
    """Euclidean gradient of the coherent information at rho, traceless gauge.

    The matrix logarithms act on eps-regularized operators (eps = 1e-9), so
    rank-deficient inputs and channel images stay differentiable.
    """
    d = pair.d_a
    rb = apply(pair, rho, "direct")
    rc = apply(pair, rho, "complement")
    g = -channel_adjoint(pair, log2m_reg(rb), "direct") \
        + channel_adjoint(pair, log2m_reg(rc), "complement")
    g = hermitize(g)
    return g - np.trace(g).real / d * np.eye(d)


def majorizes(x, y) -> bool:
    """True iff x majorizes y: descending partial sums of x dominate those of y.

    Inputs may be Spectrum objects or plain vectors of equal length and equal
    sum (within 1e-9); partial-sum slack down to -1e-10 is tolerated.
    """
    xv = np.sort(np.asarray(x.values if isinstance(x, Spectrum) else x, dtype=float))[::-1]
    yv = np.sort(np.asarray(y.values if isinstance(y, Spectrum) else y, dtype=float))[::-1]
    if xv.shape != yv.shape:
        raise ValueError("majorization requires equal lengths")
    if abs(xv.sum() - yv.sum()) > 1e-9:
        raise ValueError("majorization requires equal sums")
    return bool(np.all(np.cumsum(xv) - np.cumsum(yv) >= -1e-10))


def ensemble_holevo(pair: ChannelPair, ens: Ensemble) -> float:
    """Output-entropy bias of an ensemble: S(avg output) - avg of S(outputs)."""
    outs = [apply(pair, s, "direct") for s in ens.states]
    avg = sum(p * o for p, o in zip(ens.probabilities, outs))
    return vn_entropy(avg) - float(
        sum(p * vn_entropy(o) for p, o in zip(ens.probabilities, outs))
    )


def ensemble_private_value(pair: ChannelPair, ens: Ensemble) -> float:
    """Coherent information of the average minus the average coherent information."""
    avg = ens.average
    val = coherent_information(pair, avg)
    for p, s in zip(ens.probabilities, ens.states):
        val -= p * coherent_information(pair, s)
    return float(val)


def purification(rho: np.ndarray) -> np.ndarray:
    """A purification |psi> on (reference, system) with reference dim = rank(rho)."""
    vals, vecs = np.linalg.eigh(hermitize(np.asarray(rho, dtype=complex)))
    keep = vals > EIG_CUTOFF
    vals, vecs = vals[keep], vecs[:, keep]
    r = len(vals)
    d = rho.shape[0]
    psi = np.zeros((r, d), dtype=complex)
    for k in range(r):
        psi[k] = np.sqrt(vals[k]) * vecs[:, k]
    return psi.reshape(-1)


def mutual_information_ea(pair: ChannelPair, rho: np.ndarray) -> float:
    """Input-output mutual information S(ref) + S(out) - S(ref,out), evaluated
    on a purification of rho with reference dimension rank(rho)."""
    rho = np.asarray(rho, dtype=complex)
    vals = np.linalg.eigvalsh(hermitize(rho))
    keep = vals > EIG_CUTOFF
    r = int(np.count_nonzero(keep))
    d = rho.shape[0]
    psi = purification(rho)  # (r, d) vector
    e = pair.isometry.matrix
    db, dc = pair.d_b, pair.d_c
    # (I_r (x) E)|psi> lives on (ref, b, c)
    big = (np.kron(np.eye(r), e) @ psi).reshape(r, db, dc)
    sigma_rb = np.einsum("ibc,jdc->ibjd", big, big.conj()).reshape(r * db, r * db)
    s_ref = vn_entropy(rho)  # purification marginal equals rho's spectrum
    s_out = vn_entropy(apply(pair, rho, "direct"))
    return float(s_ref + s_out - vn_entropy(sigma_rb))


def mutual_information_gradient(pair: ChannelPair, rho: np.ndarray) -> np.ndarray:
    """Euclidean gradient of the channel mutual information, traceless gauge.

    Uses S(ref, out) = S(complement image) for a pure joint state, so the
    gradient needs only the input and the two channel legs.
    """
    d = pair.d_a
    rb = apply(pair, rho, "direct")
    rc = apply(pair, rho, "complement")
    g = -log2m_reg(rho) - channel_adjoint(pair, log2m_reg(rb), "direct") \
        + channel_adjoint(pair, log2m_reg(rc), "complement")
    g = hermitize(g)
    return g - np.trace(g).real / d * np.eye(d)

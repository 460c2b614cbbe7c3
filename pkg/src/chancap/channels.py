"""Channel families and the channel calculus.

A channel pair (direct map and its complement) is stored as a single
isometry E : H_a -> H_b (x) H_c; the direct leg traces out c, the
complement leg traces out b.  Composite indices are row-major, so the
isometry matrix has shape (d_b*d_c, d_a) with row index i_b*d_c + i_c.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    dag,
    dyad,
    ket,
    partial_trace,
    permute_vector,
    tensor_product,
)

_ISO_TOL = 1e-10

Leg = str  # "direct" | "complement"


def _check_leg(leg: str) -> str:
    if leg not in ("direct", "complement"):
        raise ValueError(f"leg must be 'direct' or 'complement', got {leg!r}")
    return leg


@dataclass
class Isometry:
    """An isometry H_a -> H_b (x) H_c with dims (d_a, d_b, d_c)."""

    matrix: np.ndarray
    dims: tuple[int, int, int]

    def __post_init__(self):
        da, db, dc = self.dims
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (db * dc, da):
            raise ValueError(
                f"isometry of shape {self.matrix.shape} does not match dims {self.dims}"
            )
        gram = dag(self.matrix) @ self.matrix
        if np.linalg.norm(gram - np.eye(da)) > _ISO_TOL * max(1.0, da):
            raise ValueError("matrix is not an isometry: E†E != I within tolerance")


@dataclass
class ChannelPair:
    """A CPTP map and its complement, both defined by one isometry."""

    isometry: Isometry
    label: str = ""
    family: str | None = field(default=None)
    params: dict = field(default_factory=dict)

    @property
    def d_a(self) -> int:
        return self.isometry.dims[0]

    @property
    def d_b(self) -> int:
        return self.isometry.dims[1]

    @property
    def d_c(self) -> int:
        return self.isometry.dims[2]

    def out_dim(self, leg: Leg) -> int:
        return self.d_b if _check_leg(leg) == "direct" else self.d_c

    def apply(self, rho: np.ndarray, leg: Leg = "direct") -> np.ndarray:
        return apply(self, rho, leg)


@dataclass
class Ensemble:
    """Probabilities and same-dimension density operators."""

    probabilities: np.ndarray
    states: list[np.ndarray]

    def __post_init__(self):
        self.probabilities = np.asarray(self.probabilities, dtype=float)
        self.states = [np.asarray(s, dtype=complex) for s in self.states]
        if len(self.probabilities) != len(self.states):
            raise ValueError("probability/state count mismatch")
        if np.any(self.probabilities < -1e-12):
            raise ValueError("negative probability")
        if abs(self.probabilities.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities do not sum to 1")
        dims = {s.shape for s in self.states}
        if len(dims) != 1:
            raise ValueError("states have mixed dimensions")
        for s in self.states:
            if abs(np.trace(s).real - 1.0) > 1e-9:
                raise ValueError("state trace differs from 1")

    @property
    def average(self) -> np.ndarray:
        return sum(p * s for p, s in zip(self.probabilities, self.states))


# ---------------------------------------------------------------------------
# Families


def make_ns(s: float) -> ChannelPair:
    """Qutrit channel pair with dims (3, 3, 2) and Schmidt weight s on |0>.

    The isometry sends |0> to sqrt(s)|00> + sqrt(1-s)|11>, and |1>, |2> to
    |2> tensored with the environment states |0>, |1>.
    """
    if not (0.0 <= s <= 0.5):
        raise ValueError(f"s must lie in [0, 1/2], got {s}")
    e = np.zeros((6, 3), dtype=complex)
    # rows: i_b*2 + i_c
    e[0 * 2 + 0, 0] = np.sqrt(s)
    e[1 * 2 + 1, 0] = np.sqrt(1.0 - s)
    e[2 * 2 + 0, 1] = 1.0
    e[2 * 2 + 1, 2] = 1.0
    return ChannelPair(Isometry(e, (3, 3, 2)), label=f"Ns(s={s:g})",
                       family="Ns", params={"s": float(s)})


def make_md(d: int) -> ChannelPair:
    """Dimension-d generalization with equal Schmidt weights; dims (d, d, d-1)."""
    d = int(d)
    if d < 3:
        raise ValueError(f"d must be >= 3, got {d}")
    dc = d - 1
    e = np.zeros((d * dc, d), dtype=complex)
    for j in range(d - 1):
        e[j * dc + j, 0] = 1.0 / np.sqrt(d - 1)
    for i in range(1, d):
        e[(d - 1) * dc + (i - 1), i] = 1.0
    return ChannelPair(Isometry(e, (d, d, dc)), label=f"Md(d={d})",
                       family="Md", params={"d": d})


def make_o(mu) -> ChannelPair:
    """General family with Schmidt weights mu (ascending, sum of squares 1)."""
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or len(mu) < 2:
        raise ValueError("mu must be a vector of length >= 2")
    if np.any(mu < -1e-12):
        raise ValueError("mu entries must be nonnegative")
    if np.any(np.diff(mu) < -1e-10):
        raise ValueError("mu entries must be ascending")
    if abs(np.sum(mu**2) - 1.0) > 1e-10:
        raise ValueError("mu must be normalized: sum mu_i^2 = 1")
    d = len(mu) + 1
    dc = d - 1
    e = np.zeros((d * dc, d), dtype=complex)
    for j in range(d - 1):
        e[j * dc + j, 0] = mu[j]
    for i in range(1, d):
        e[(d - 1) * dc + (i - 1), i] = 1.0
    return ChannelPair(Isometry(e, (d, d, dc)), label=f"O(mu={np.array2string(mu, precision=4)})",
                       family="O", params={"mu": mu.copy()})


def make_v(s: float, mu: float, nu: float) -> ChannelPair:
    """Three-parameter qutrit family with dims (3, 3, 2)."""
    for name, val in (("s", s), ("mu", mu), ("nu", nu)):
        if not (0.0 <= val <= 1.0):
            raise ValueError(f"{name} must lie in [0, 1], got {val}")
    e = np.zeros((6, 3), dtype=complex)
    e[0 * 2 + 0, 0] = np.sqrt(s)
    e[1 * 2 + 1, 0] = np.sqrt(1.0 - s)
    e[1 * 2 + 0, 1] = np.sqrt(nu)
    e[2 * 2 + 1, 1] = np.sqrt(1.0 - nu)
    e[2 * 2 + 0, 2] = np.sqrt(mu)
    e[0 * 2 + 1, 2] = np.sqrt(1.0 - mu)
    return ChannelPair(Isometry(e, (3, 3, 2)), label=f"V(s={s:g},mu={mu:g},nu={nu:g})",
                       family="V", params={"s": float(s), "mu": float(mu), "nu": float(nu)})


def make_w(s: float, mu: float) -> ChannelPair:
    """Two-parameter subfamily: make_v with nu = 1 - mu."""
    pair = make_v(s, mu, 1.0 - mu)
    return ChannelPair(pair.isometry, label=f"W(s={s:g},mu={mu:g})",
                       family="W", params={"s": float(s), "mu": float(mu)})


# ---------------------------------------------------------------------------
# Calculus


def apply(pair: ChannelPair, rho: np.ndarray, leg: Leg = "direct") -> np.ndarray:
    """Channel action: trace the environment (direct) or the output (complement)."""
    _check_leg(leg)
    rho = np.asarray(rho, dtype=complex)
    da, db, dc = pair.isometry.dims
    if rho.shape != (da, da):
        raise ValueError(f"state of shape {rho.shape} does not match input dim {da}")
    big = pair.isometry.matrix @ rho @ dag(pair.isometry.matrix)
    keep = 0 if leg == "direct" else 1
    return partial_trace(big, (db, dc), keep)


def choi(pair: ChannelPair, leg: Leg = "direct") -> np.ndarray:
    """Unnormalized Choi operator d_a (I (x) B)([phi]) on input (x) output."""
    _check_leg(leg)
    da = pair.d_a
    dout = pair.out_dim(leg)
    j = np.zeros((da * dout, da * dout), dtype=complex)
    for i in range(da):
        for k in range(da):
            block = apply(pair, np.outer(ket(i, da), ket(k, da).conj()), leg)
            j[i * dout:(i + 1) * dout, k * dout:(k + 1) * dout] = block
    return j


def kraus_ops(pair: ChannelPair, leg: Leg = "direct") -> list[np.ndarray]:
    """Kraus operators K_k = (I (x) <k|) E of the requested leg."""
    _check_leg(leg)
    da, db, dc = pair.isometry.dims
    e = pair.isometry.matrix.reshape(db, dc, da)
    if leg == "direct":
        return [np.ascontiguousarray(e[:, k, :]) for k in range(dc)]
    return [np.ascontiguousarray(e[k, :, :]) for k in range(db)]


def tensor_pair(pair1: ChannelPair, pair2: ChannelPair) -> ChannelPair:
    """Parallel use of two channels with output legs grouped as (b1 b2 | c1 c2)."""
    da1, db1, dc1 = pair1.isometry.dims
    da2, db2, dc2 = pair2.isometry.dims
    e = tensor_product(pair1.isometry.matrix, pair2.isometry.matrix)
    # rows currently indexed by (b1, c1, b2, c2); regroup to (b1, b2, c1, c2)
    n_in = da1 * da2
    cols = []
    for j in range(n_in):
        cols.append(permute_vector(e[:, j], (db1, dc1, db2, dc2), (0, 2, 1, 3)))
    e2 = np.stack(cols, axis=1)
    return ChannelPair(Isometry(e2, (n_in, db1 * db2, dc1 * dc2)),
                       label=f"{pair1.label}(x){pair2.label}")


def tensor_power(pair: ChannelPair, n: int) -> ChannelPair:
    out = pair
    for _ in range(n - 1):
        out = tensor_pair(out, pair)
    return out


def restrict_input(pair: ChannelPair, kets: np.ndarray) -> ChannelPair:
    """Sub-channel obtained by restricting the input to span of the given
    orthonormal columns (stored as a new, smaller isometry)."""
    kets = np.asarray(kets, dtype=complex)
    if kets.ndim != 2 or kets.shape[0] != pair.d_a:
        raise ValueError("kets must be a (d_a, k) matrix of columns")
    gram = dag(kets) @ kets
    if np.linalg.norm(gram - np.eye(kets.shape[1])) > 1e-10:
        raise ValueError("kets are not orthonormal within tolerance")
    e = pair.isometry.matrix @ kets
    return ChannelPair(Isometry(e, (kets.shape[1], pair.d_b, pair.d_c)),
                       label=f"{pair.label}|restricted")


def complement_pair(pair: ChannelPair) -> ChannelPair:
    """Swap the roles of output and environment."""
    da, db, dc = pair.isometry.dims
    cols = [permute_vector(pair.isometry.matrix[:, j], (db, dc), (1, 0))
            for j in range(da)]
    e = np.stack(cols, axis=1)
    return ChannelPair(Isometry(e, (da, dc, db)), label=f"{pair.label}^c")


# ---------------------------------------------------------------------------
# Key-state embedding check


def pbit_witness(s: float) -> dict:
    """Build the 3x3x2 tripartite state produced by sending half of an
    entangled input through the s-family isometry, apply the two local
    key/shield isometries, and verify the controlled-swap keyed form.

    Returns a report with the state, the transformed state, and the maximum
    deviation from the keyed form.
    """
    if not (0.0 <= s <= 0.5):
        raise ValueError(f"s must lie in [0, 1/2], got {s}")
    pair = make_ns(s)
    # |psi>_{A,Atilde}, then the isometry acts on Atilde -> (B, E).
    psi = np.zeros((3, 3), dtype=complex)
    psi[0, 0] = 1.0 / np.sqrt(2.0)
    psi[1, 1] = np.sqrt(s) / np.sqrt(2.0)
    psi[2, 2] = np.sqrt(1.0 - s) / np.sqrt(2.0)
    e = pair.isometry.matrix  # (6, 3), rows (b, e)
    nu = np.einsum("ij,kj->ik", psi, e).reshape(-1)  # systems (A; B, E), dims (3,3,2)

    # Local isometries A -> (K_A, S_A) and B -> (K_B, S_B), both 3 -> 2x2.
    va = np.zeros((4, 3), dtype=complex)
    va[0 * 2 + 0, 0] = 1.0  # |0> -> |0>|0>
    va[1 * 2 + 0, 1] = 1.0  # |1> -> |1>|0>
    va[1 * 2 + 1, 2] = 1.0  # |2> -> |1>|1>
    vb = np.zeros((4, 3), dtype=complex)
    vb[0 * 2 + 0, 0] = 1.0  # |0> -> |0>|0>
    vb[0 * 2 + 1, 1] = 1.0  # |1> -> |0>|1>
    vb[1 * 2 + 0, 2] = 1.0  # |2> -> |1>|0>

    big = tensor_product(va, vb, np.eye(2))  # (A,B,E) -> (K_A,S_A,K_B,S_B,E)
    out = big @ nu
    # Reorder to (K_A, K_B, S_A, S_B, E).
    out = permute_vector(out, (2, 2, 2, 2, 2), (0, 2, 1, 3, 4))

    # Keyed form: (|00>|eta> + |11>|swap eta>)/sqrt(2) on shields+environment.
    eta = np.zeros((2, 2, 2), dtype=complex)
    eta[0, 0, 0] = np.sqrt(s)
    eta[0, 1, 1] = np.sqrt(1.0 - s)
    eta = eta.reshape(-1)
    eta_swapped = permute_vector(eta, (2, 2, 2), (1, 0, 2))
    expected = (tensor_product(np.kron(ket(0, 2), ket(0, 2)).reshape(-1, 1),
                               eta.reshape(-1, 1)).reshape(-1)
                + tensor_product(np.kron(ket(1, 2), ket(1, 2)).reshape(-1, 1),
                                 eta_swapped.reshape(-1, 1)).reshape(-1)) / np.sqrt(2.0)
    deviation = float(np.linalg.norm(out - expected))

    # Traced-out-environment check: controlled unitary acting on a product of
    # a maximally entangled key pair and a shield state, with the swap on the
    # |11> key branch.
    rho = partial_trace(dyad(out), (4, 4, 2), (0, 1))
    sigma = np.outer(eta.reshape(4, 2)[:, 0], eta.reshape(4, 2)[:, 0].conj()) \
        + np.outer(eta.reshape(4, 2)[:, 1], eta.reshape(4, 2)[:, 1].conj())
    phi = (np.kron(ket(0, 2), ket(0, 2)) + np.kron(ket(1, 2), ket(1, 2))) / np.sqrt(2.0)
    swap = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            swap[j * 2 + i, i * 2 + j] = 1.0
    u = np.zeros((16, 16), dtype=complex)
    for i in range(2):
        for j in range(2):
            uij = swap if (i, j) == (1, 1) else np.eye(4)
            u += tensor_product(dyad(np.kron(ket(i, 2), ket(j, 2))), uij)
    keyed = u @ tensor_product(dyad(phi), sigma) @ dag(u)
    # rho lives on (K_A, S_A; K_B, S_B) grouped as (K_A K_B | S_A S_B) already.
    keyed_dev = float(np.linalg.norm(rho - keyed))

    return {
        "state": nu,
        "transformed_state": out,
        "max_deviation": max(deviation, keyed_dev),
        "key_shield_state": rho,
    }


# ---------------------------------------------------------------------------
# Text format for the CLI: family name + parameters.


def parse_channel_spec(spec: str) -> ChannelPair:
    """Parse e.g. 'Ns:s=0.3', 'Md:d=4', 'O:mu=0.2,0.4', 'V:s=0.5,mu=0.7,nu=0.3',
    'W:s=0.5,mu=0.7'."""
    spec = spec.strip()
    if ":" not in spec:
        raise ValueError(f"malformed channel spec {spec!r}: expected 'Family:key=value,...'")
    family, _, rest = spec.partition(":")
    family = family.strip()
    kv: dict[str, str] = {}
    key = None
    for chunk in rest.split(","):
        if "=" in chunk:
            key, _, val = chunk.partition("=")
            key = key.strip()
            kv[key] = val.strip()
        elif key is not None:
            # continuation of a comma-separated vector value
            kv[key] += "," + chunk.strip()
        else:
            raise ValueError(f"malformed channel spec {spec!r}")
    try:
        if family == "Ns":
            return make_ns(float(kv["s"]))
        if family == "Md":
            return make_md(int(kv["d"]))
        if family == "O":
            return make_o([float(x) for x in kv["mu"].split(",")])
        if family == "V":
            return make_v(float(kv["s"]), float(kv["mu"]), float(kv["nu"]))
        if family == "W":
            return make_w(float(kv["s"]), float(kv["mu"]))
    except KeyError as exc:
        raise ValueError(f"channel spec {spec!r} is missing parameter {exc}") from exc
    raise ValueError(f"unknown channel family {family!r}")

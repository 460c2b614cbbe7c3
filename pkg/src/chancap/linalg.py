"""Dense complex matrix kernel: tensor products, partial trace/transpose,
Hermitian eigensystems and operator functions.

All operators are plain ``numpy.ndarray`` objects in the computational basis
with row-major Kronecker ordering: the composite index of (i_A, i_B) is
i_A * dim_B + i_B.  Everything here is pure and safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Eigenvalues below this magnitude are treated as exactly zero in
# entropy/log computations (the 0*log 0 := 0 convention).
EIG_CUTOFF = 1e-12

_HERM_TOL = 1e-10


def dag(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def tensor_product(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, row-major index order."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def _check_dims(x: np.ndarray, dims) -> list[int]:
    dims = [int(d) for d in dims]
    n = int(np.prod(dims))
    if x.shape != (n, n):
        raise ValueError(f"operator of shape {x.shape} does not match factor dims {dims}")
    return dims


def partial_trace(x: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` lists the factor dimensions; ``keep`` is an iterable of factor
    indices to retain.  The result acts on the kept factors in their
    original relative order, and tr(result) = tr(x).
    """
    dims = _check_dims(np.asarray(x), dims)
    keep = sorted(set(int(k) for k in np.atleast_1d(keep)))
    if not keep:
        raise ValueError("keep must be nonempty")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} factors")
    k = len(dims)
    t = np.asarray(x, dtype=complex).reshape(dims + dims)
    # Row index i of factor j, column index k + j; contract traced pairs.
    idx_row = list(range(k))
    idx_col = list(range(k, 2 * k))
    for j in range(k):
        if j not in keep:
            idx_col[j] = idx_row[j]
    out_idx = [idx_row[j] for j in keep] + [idx_col[j] for j in keep]
    t = np.einsum(t, idx_row + idx_col, out_idx)
    dk = int(np.prod([dims[j] for j in keep]))
    return t.reshape(dk, dk)


def partial_transpose(x: np.ndarray, dims, factor: int) -> np.ndarray:
    """Transpose a single tensor factor in the standard basis (involution)."""
    dims = _check_dims(np.asarray(x), dims)
    k = len(dims)
    factor = int(factor)
    if factor < 0 or factor >= k:
        raise ValueError(f"factor {factor} out of range for {k} factors")
    t = np.asarray(x, dtype=complex).reshape(dims + dims)
    perm = list(range(2 * k))
    perm[factor], perm[k + factor] = perm[k + factor], perm[factor]
    n = int(np.prod(dims))
    return t.transpose(perm).reshape(n, n)


def permute_systems(x: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder tensor factors: output factor i is input factor perm[i]."""
    dims = _check_dims(np.asarray(x), dims)
    k = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(k)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{k - 1}")
    t = np.asarray(x, dtype=complex).reshape(dims + dims)
    axes = perm + [k + p for p in perm]
    n = int(np.prod(dims))
    return t.transpose(axes).reshape(n, n)


def permute_vector(v: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder tensor factors of a ket: output factor i is input factor perm[i]."""
    dims = [int(d) for d in dims]
    v = np.asarray(v, dtype=complex).reshape(dims)
    return v.transpose([int(p) for p in perm]).reshape(-1)


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a†)/2."""
    return (a + a.conj().T) / 2


def is_hermitian(a: np.ndarray, tol: float = _HERM_TOL) -> bool:
    a = np.asarray(a)
    scale = max(np.linalg.norm(a), 1.0)
    return np.linalg.norm(a - a.conj().T) <= tol * scale


@dataclass
class HermitianEigen:
    """Eigensystem of a Hermitian operator: ascending eigenvalues and the
    unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def hermitian_eigensystem(h: np.ndarray, tol: float = _HERM_TOL) -> HermitianEigen:
    """Eigendecompose a Hermitian matrix (symmetrized before the solve).

    Raises ValueError when the anti-Hermitian part exceeds ``tol`` relative
    to the Frobenius norm.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(hermitize(h))
    return HermitianEigen(eigenvalues=vals, eigenvectors=vecs)


def operator_function(h: np.ndarray, f) -> np.ndarray:
    """Apply a real function to a Hermitian operator through its spectrum.

    Eigenvalues of magnitude below EIG_CUTOFF are passed to ``f`` as exactly
    zero.  Raises ValueError when ``f`` is non-finite on the (cut) spectrum.
    """
    eig = hermitian_eigensystem(h)
    vals = eig.eigenvalues.copy()
    vals[np.abs(vals) < EIG_CUTOFF] = 0.0
    with np.errstate(all="ignore"):
        fv = np.asarray([f(v) for v in vals], dtype=float)
    if not np.all(np.isfinite(fv)):
        raise ValueError("function undefined on part of the spectrum")
    u = eig.eigenvectors
    return (u * fv) @ u.conj().T


def frob_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def dyad(v: np.ndarray, w: np.ndarray | None = None) -> np.ndarray:
    """|v><w| (defaults to |v><v|)."""
    v = np.asarray(v, dtype=complex)
    w = v if w is None else np.asarray(w, dtype=complex)
    return np.outer(v, w.conj())


def basis_projector(index: int, dim: int) -> np.ndarray:
    p = np.zeros((dim, dim), dtype=complex)
    p[index, index] = 1.0
    return p


# ---------------------------------------------------------------------------
# Seeded random elements (test and optimizer plumbing).


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return hermitize(a)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    r = dim if rank is None else rank
    l = rng.normal(size=(dim, r)) + 1j * rng.normal(size=(dim, r))
    rho = l @ l.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)

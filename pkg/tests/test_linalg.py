import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancap.channels import choi, make_ns
from chancap.linalg import (
    HermitianEigen,
    hermitian_eigensystem,
    ket,
    operator_function,
    partial_trace,
    partial_transpose,
    permute_systems,
    random_density,
    random_hermitian,
    tensor_product,
)

RNG = np.random.default_rng(2024)


def test_tensor_identity_case():
    assert np.allclose(tensor_product(np.eye(2), np.eye(3)), np.eye(6))


def test_tensor_basis_projectors():
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    assert np.allclose(tensor_product(p0, p1), np.diag([0.0, 1.0, 0.0, 0.0]))


def test_tensor_mixed_product_rule():
    # oracle: direct multiplication
    for _ in range(5):
        a, b, c, d = (RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2))
                      for _ in range(4))
        lhs = tensor_product(a, b) @ tensor_product(c, d)
        rhs = tensor_product(a @ c, b @ d)
        assert np.allclose(lhs, rhs)


def test_partial_trace_max_entangled_dyad():
    for da in (2, 3):
        phi = sum(np.kron(ket(i, da), ket(i, da)) for i in range(da)) / np.sqrt(da)
        dyad = da * np.outer(phi, phi.conj())
        assert np.allclose(partial_trace(dyad, (da, da), 0), np.eye(da))


def test_partial_trace_product_rule():
    for _ in range(5):
        a = random_hermitian(2, RNG)
        b = random_hermitian(3, RNG)
        out = partial_trace(tensor_product(a, b), (2, 3), 1)
        assert np.allclose(out, np.trace(a) * b)


def test_partial_trace_choi_marginal():
    # oracle: sum the output-diagonal blocks of the Choi operator by hand
    j = choi(make_ns(0.25))
    blocks = j.reshape(3, 3, 3, 3)
    by_hand = np.einsum("ikjk->ij", blocks)
    assert np.allclose(by_hand, np.eye(3))
    assert np.allclose(partial_trace(j, (3, 3), 0), np.eye(3))


def test_partial_trace_preserves_trace():
    for dims in ((2, 3), (2, 2, 2), (3, 4)):
        n = int(np.prod(dims))
        x = RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n))
        for keep in range(len(dims)):
            assert np.isclose(np.trace(partial_trace(x, dims, keep)), np.trace(x))


def test_partial_trace_errors():
    with pytest.raises(ValueError):
        partial_trace(np.eye(5), (2, 3), 0)  # 5 != 6
    with pytest.raises(ValueError):
        partial_trace(np.eye(6), (2, 3), [])


def test_partial_transpose_product_rule():
    a = random_hermitian(2, RNG)
    b = random_hermitian(3, RNG)
    out = partial_transpose(tensor_product(a, b), (2, 3), 1)
    assert np.allclose(out, tensor_product(a, b.T))


def test_partial_transpose_involution():
    x = RNG.normal(size=(6, 6)) + 1j * RNG.normal(size=(6, 6))
    assert np.allclose(partial_transpose(partial_transpose(x, (2, 3), 0), (2, 3), 0), x)


def test_partial_transpose_identity_channel_choi():
    # oracle: 4x4 eigensolve of the swap operator
    phi = (np.kron(ket(0, 2), ket(0, 2)) + np.kron(ket(1, 2), ket(1, 2))) / np.sqrt(2)
    j = 2 * np.outer(phi, phi.conj())
    vals = np.sort(np.linalg.eigvalsh(partial_transpose(j, (2, 2), 1)))
    assert np.allclose(vals, [-1.0, 1.0, 1.0, 1.0])


def test_permute_systems_roundtrip():
    x = RNG.normal(size=(12, 12)) + 1j * RNG.normal(size=(12, 12))
    y = permute_systems(x, (2, 3, 2), (2, 0, 1))
    z = permute_systems(y, (2, 2, 3), (1, 2, 0))
    assert np.allclose(z, x)


def test_eigensystem_diagonal():
    eig = hermitian_eigensystem(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(eig.eigenvalues, [1.0, 2.0, 3.0])


def test_eigensystem_flip_symmetry():
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    eig = hermitian_eigensystem(x)
    assert np.allclose(eig.eigenvalues, [-1.0, 1.0])


def test_eigensystem_reconstruction_residual():
    h = random_hermitian(9, RNG)
    eig = hermitian_eigensystem(h)
    scale = np.linalg.norm(h)
    assert np.linalg.norm(eig.reconstruct() - h) <= 1e-10 * scale
    u = eig.eigenvectors
    assert np.linalg.norm(u.conj().T @ u - np.eye(9)) <= 1e-10
    assert np.all(np.diff(eig.eigenvalues) >= -1e-12)


def test_eigensystem_rejects_nonhermitian():
    with pytest.raises(ValueError):
        hermitian_eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_operator_function_identity():
    h = random_hermitian(4, RNG)
    assert np.allclose(operator_function(h, lambda v: v), h)


def test_operator_function_log_of_uniform():
    out = operator_function(np.diag([0.5, 0.5]), np.log2)
    assert np.allclose(out, -np.eye(2))


def test_operator_function_exp_log_composition():
    rho = random_density(4, RNG)
    logr = operator_function(rho, np.log)
    assert np.allclose(operator_function(logr, np.exp), rho)


def test_operator_function_rejects_singular_log():
    with pytest.raises(ValueError):
        operator_function(np.diag([1.0, 0.0]), np.log2)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=3), st.integers(min_value=2, max_value=3),
       st.integers(min_value=0, max_value=10_000))
def test_property_partial_trace_total(da, db, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(da * db, da * db)) + 1j * rng.normal(size=(da * db, da * db))
    for keep in (0, 1):
        assert np.isclose(np.trace(partial_trace(x, (da, db), keep)), np.trace(x))


def test_eigen_dataclass_roundtrip():
    h = random_hermitian(3, RNG)
    eig = hermitian_eigensystem(h)
    assert isinstance(eig, HermitianEigen)

import numpy as np
import pytest

from chancap.channels import (
    ChannelPair,
    Ensemble,
    Isometry,
    apply,
    choi,
    complement_pair,
    kraus_ops,
    make_md,
    make_ns,
    make_o,
    make_v,
    make_w,
    parse_channel_spec,
    pbit_witness,
    restrict_input,
    tensor_pair,
)
from chancap.linalg import dag, dyad, ket, random_density, random_unitary, tensor_product

RNG = np.random.default_rng(77)


def _swap12_input(pair):
    u = np.eye(3)[:, [0, 2, 1]]
    return pair.isometry.matrix @ u


# ---------------------------------------------------------------------------
# constructors


def test_ns_half_schmidt_coefficients():
    e = make_ns(0.5).isometry.matrix
    col0 = e[:, 0].reshape(3, 2)
    svals = np.linalg.svd(col0, compute_uv=False)
    assert np.allclose(svals[:2], [1 / np.sqrt(2)] * 2)


def test_ns_isometry_grid():
    for s in np.linspace(0, 0.5, 7):
        e = make_ns(s).isometry.matrix
        assert np.linalg.norm(dag(e) @ e - np.eye(3)) < 1e-12


def test_ns_s0_restriction_complement_constant():
    pair = make_ns(0.0)
    kets = np.zeros((3, 2), dtype=complex)
    kets[0, 0] = kets[2, 1] = 1.0
    sub = restrict_input(pair, kets)
    out0 = apply(sub, np.diag([1.0, 0.0]).astype(complex), "complement")
    out1 = apply(sub, np.diag([0.0, 1.0]).astype(complex), "complement")
    assert np.allclose(out0, np.diag([0.0, 1.0]))
    assert np.allclose(out1, np.diag([0.0, 1.0]))


def test_ns_range_error():
    with pytest.raises(ValueError):
        make_ns(0.6)


def test_md_matches_balanced_qutrit():
    assert np.allclose(make_md(3).isometry.matrix, make_ns(0.5).isometry.matrix)


def test_md_symmetry_covariance():
    # a unitary on the non-distinguished input sector commutes through both
    # legs; the entangled output sector picks up the conjugate copy
    d = 4
    pair = make_md(d)
    for trial in range(20):
        u = random_unitary(d - 1, RNG)
        if trial % 2 == 0:
            # real orthogonal case: output and conjugate copies coincide
            q, r = np.linalg.qr(RNG.normal(size=(d - 1, d - 1)))
            u = (q * np.sign(np.diag(r))).astype(complex)
        ua = np.zeros((d, d), dtype=complex)
        ua[0, 0] = 1.0
        ua[1:, 1:] = u
        ub = np.zeros((d, d), dtype=complex)
        ub[:d - 1, :d - 1] = u.conj()
        ub[d - 1, d - 1] = 1.0
        rho = random_density(d, RNG)
        lhs = apply(pair, ua @ rho @ dag(ua))
        rhs = ub @ apply(pair, rho) @ dag(ub)
        assert np.allclose(lhs, rhs, atol=1e-10)
        lhs_c = apply(pair, ua @ rho @ dag(ua), "complement")
        rhs_c = u @ apply(pair, rho, "complement") @ dag(u)
        assert np.allclose(lhs_c, rhs_c, atol=1e-10)


def test_md_isometry_check():
    e = make_md(6).isometry.matrix
    assert np.linalg.norm(dag(e) @ e - np.eye(6)) < 1e-12


def test_md_range_error():
    with pytest.raises(ValueError):
        make_md(2)


def test_o_reduces_to_ns():
    pair = make_o([np.sqrt(0.3), np.sqrt(0.7)])
    assert np.allclose(pair.isometry.matrix, make_ns(0.3).isometry.matrix)


def test_o_reduces_to_md():
    d = 5
    pair = make_o(np.full(d - 1, 1 / np.sqrt(d - 1)))
    assert np.allclose(pair.isometry.matrix, make_md(d).isometry.matrix)


def test_o_restriction_complement_is_bijection():
    mu = np.sort(RNG.dirichlet(np.ones(3))) ** 0.5
    pair = make_o(mu)
    d = 4
    kets = np.zeros((d, d - 1), dtype=complex)
    kets[1:, :] = np.eye(d - 1)
    sub = restrict_input(pair, kets)
    v = np.eye(d - 1)  # the shift |i> -> |i-1| is the identity in restricted coords
    for _ in range(5):
        rho = random_density(d - 1, RNG)
        assert np.allclose(apply(sub, rho, "complement"), v @ rho @ v.T, atol=1e-10)
        # the direct leg of the restriction is the constant map onto |d-1>
        out = apply(sub, rho, "direct")
        expect = np.zeros((d, d))
        expect[d - 1, d - 1] = 1.0
        assert np.allclose(out, expect, atol=1e-10)


def test_o_validation():
    with pytest.raises(ValueError):
        make_o([0.8, 0.2])  # descending
    with pytest.raises(ValueError):
        make_o([0.5, 0.5])  # not normalized


def test_v_input_swap_recovers_ns():
    # the balanced-output parameter point nu = 1 - mu at mu = 1, composed
    # with the |1> <-> |2> input swap, reproduces the base family isometry
    for s in (0.0, 0.3, 0.5):
        swapped = _swap12_input(make_v(s, 1.0, 0.0))
        assert np.allclose(swapped, make_ns(s).isometry.matrix)


def test_w_equals_v_slice():
    assert np.allclose(make_w(0.4, 0.7).isometry.matrix,
                       make_v(0.4, 0.7, 0.3).isometry.matrix)


def test_w_dephasing_kraus():
    k0, k1 = kraus_ops(make_w(0.5, 0.5))
    assert np.allclose(k0, np.eye(3) / np.sqrt(2))
    x = np.zeros((3, 3))
    x[1, 0] = x[2, 1] = x[0, 2] = 1.0
    assert np.allclose(k1, x / np.sqrt(2))


def test_v_isometry_random_params():
    for _ in range(5):
        s, mu, nu = RNG.uniform(0, 1, size=3)
        e = make_v(s, mu, nu).isometry.matrix
        assert np.linalg.norm(dag(e) @ e - np.eye(3)) < 1e-12


def test_v_range_error():
    with pytest.raises(ValueError):
        make_v(0.5, 1.2, 0.1)


# ---------------------------------------------------------------------------
# calculus


def test_apply_ns_basis_states():
    pair = make_ns(0.3)
    out = apply(pair, dyad(ket(0, 3)))
    assert np.allclose(out, np.diag([0.3, 0.7, 0.0]))
    env = apply(pair, dyad(ket(1, 3)), "complement")
    assert np.allclose(env, np.diag([1.0, 0.0]))


def test_apply_trace_and_positivity():
    pair = make_v(0.4, 0.6, 0.2)
    for _ in range(10):
        rho = random_density(3, RNG)
        for leg in ("direct", "complement"):
            out = apply(pair, rho, leg)
            assert np.isclose(np.trace(out).real, 1.0)
            assert np.linalg.eigvalsh(out).min() >= -1e-10


def test_choi_ns_rank_two_form():
    s = 0.37
    j = choi(make_ns(s))
    psi1 = np.sqrt(s) * np.kron(ket(0, 3), ket(0, 3)) + np.kron(ket(1, 3), ket(2, 3))
    psi2 = np.sqrt(1 - s) * np.kron(ket(0, 3), ket(1, 3)) + np.kron(ket(2, 3), ket(2, 3))
    assert np.allclose(j, dyad(psi1) + dyad(psi2))


def test_choi_md_explicit_form():
    d = 4
    j = choi(make_md(d))
    expect = np.zeros((d * d, d * d), dtype=complex)
    for jj in range(d - 1):
        v0 = np.kron(ket(0, d), ket(jj, d))
        v1 = np.kron(ket(jj + 1, d), ket(d - 1, d))
        expect += dyad(v0) / (d - 1) + dyad(v1)
        expect += (np.outer(v0, v1.conj()) + np.outer(v1, v0.conj())) / np.sqrt(d - 1)
    assert np.allclose(j, expect)


def test_choi_marginal_random_v():
    pair = make_v(*RNG.uniform(0.1, 0.9, size=3))
    j = choi(pair)
    from chancap.linalg import partial_trace

    assert np.allclose(partial_trace(j, (3, 3), 0), np.eye(3))
    assert np.linalg.eigvalsh(j).min() >= -1e-10


def test_kraus_completeness_and_action():
    pair = make_ns(0.2)
    ks = kraus_ops(pair)
    total = sum(dag(k) @ k for k in ks)
    assert np.allclose(total, np.eye(3))
    for _ in range(5):
        rho = random_density(3, RNG)
        out = sum(k @ rho @ dag(k) for k in ks)
        assert np.allclose(out, apply(pair, rho))
    # complement side too
    kc = kraus_ops(pair, "complement")
    for _ in range(3):
        rho = random_density(3, RNG)
        out = sum(k @ rho @ dag(k) for k in kc)
        assert np.allclose(out, apply(pair, rho, "complement"))


def test_tensor_pair_product_rule():
    p = make_ns(0.3)
    both = tensor_pair(p, p)
    assert both.isometry.dims == (9, 9, 4)
    for _ in range(3):
        r1, r2 = random_density(3, RNG), random_density(3, RNG)
        assert np.allclose(apply(both, tensor_product(r1, r2)),
                           tensor_product(apply(p, r1), apply(p, r2)))
        assert np.allclose(apply(both, tensor_product(r1, r2), "complement"),
                           tensor_product(apply(p, r1, "complement"),
                                          apply(p, r2, "complement")))


def test_restrict_full_basis_is_equivalent():
    pair = make_ns(0.25)
    sub = restrict_input(pair, np.eye(3))
    assert np.allclose(sub.isometry.matrix, pair.isometry.matrix)


def test_restrict_degrading_map_identity():
    # the stated degrading isometry for the two-dimensional restrictions
    mu = np.sort(RNG.dirichlet(np.ones(3))) ** 0.5
    pair = make_o(mu)
    d = 4
    for i in (1, 2, 3):
        kets = np.zeros((d, 2), dtype=complex)
        kets[0, 0] = kets[i, 1] = 1.0
        sub = restrict_input(pair, kets)
        ki = np.zeros((d * (d - 1), d), dtype=complex)
        for jj in range(d - 1):
            ki[jj * d + jj, jj] = 1.0
        ki[(i - 1) * d + (d - 1), d - 1] = 1.0
        deg = ChannelPair(Isometry(ki, (d, d - 1, d)))
        for _ in range(4):
            rho = random_density(2, RNG)
            lhs = apply(deg, apply(sub, rho, "direct"), "direct")
            rhs = apply(sub, rho, "complement")
            assert np.allclose(lhs, rhs, atol=1e-10)


def test_hybrid_decomposition():
    s = 0.21
    r1 = np.zeros((6, 2), dtype=complex)
    r1[2 * 2 + 0, 0] = 1.0  # |1> -> |2>|0>
    r1[2 * 2 + 1, 1] = 1.0  # |2> -> |2>|1>
    r2 = np.zeros((6, 2), dtype=complex)
    r2[0 * 2 + 0, 0] = np.sqrt(s)
    r2[1 * 2 + 1, 0] = np.sqrt(1 - s)
    r2[2 * 2 + 1, 1] = 1.0
    f = make_ns(s).isometry.matrix
    assert np.allclose(f[:, 1], r1[:, 0])
    assert np.allclose(f[:, 2], r1[:, 1])
    assert np.allclose(f[:, 0], r2[:, 0])
    assert np.allclose(f[:, 2], r2[:, 1])


def test_complement_pair_swaps_legs():
    pair = make_ns(0.3)
    comp = complement_pair(pair)
    rho = random_density(3, RNG)
    assert np.allclose(apply(comp, rho), apply(pair, rho, "complement"))
    assert np.allclose(apply(comp, rho, "complement"), apply(pair, rho))


def test_pbit_witness():
    for s in (0.5, 0.1):
        report = pbit_witness(s)
        assert report["max_deviation"] < 1e-12
    rho = pbit_witness(0.5)["key_shield_state"]
    assert np.isclose(np.trace(rho).real, 1.0)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        Ensemble([0.6, 0.6], [np.eye(3) / 3, np.eye(3) / 3])
    ens = Ensemble([0.5, 0.5], [np.diag([1, 0, 0]).astype(complex), np.eye(3) / 3])
    assert np.allclose(ens.average, np.diag([2 / 3, 1 / 6, 1 / 6]))


def test_parse_channel_spec():
    assert parse_channel_spec("Ns:s=0.3").params == {"s": 0.3}
    assert parse_channel_spec("Md:d=4").params == {"d": 4}
    pair = parse_channel_spec("O:mu=0.2,0.4," + str(np.sqrt(1 - 0.2)))
    assert pair.d_a == 4
    assert parse_channel_spec("V:s=0.5,mu=0.7,nu=0.3").params["nu"] == 0.3
    assert parse_channel_spec("W:s=0.5,mu=0.7").params == {"s": 0.5, "mu": 0.7}
    with pytest.raises(ValueError):
        parse_channel_spec("Xx:s=0.5")
    with pytest.raises(ValueError):
        parse_channel_spec("Ns")

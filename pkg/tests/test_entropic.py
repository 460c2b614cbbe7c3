import numpy as np
import pytest

from chancap.channels import Ensemble, apply, make_md, make_ns, make_o, make_w
from chancap.entropic import (
    Spectrum,
    binary_entropy,
    ci_gradient,
    coherent_information,
    ensemble_holevo,
    ensemble_private_value,
    majorizes,
    mutual_information_ea,
    renyi_entropy,
    vn_entropy,
)
from chancap.linalg import dyad, ket, random_density, random_hermitian, random_pure_state

RNG = np.random.default_rng(55)


def test_vn_basics():
    assert vn_entropy(np.diag([1.0, 0.0])) == 0.0
    assert np.isclose(vn_entropy(np.eye(2) / 2), 1.0)
    assert np.isclose(vn_entropy(np.diag([1 / 3] * 3 + [0.0])), np.log2(3))


def test_vn_rejects_negative():
    with pytest.raises(ValueError):
        vn_entropy(np.diag([1.1, -0.1]))


def test_renyi_two_level():
    # oracle: direct 2x2 evaluation of -log2(tr rho^2)
    rho = np.diag([0.25, 0.75])
    direct = -np.log2(0.25**2 + 0.75**2)
    assert np.isclose(renyi_entropy(rho, 2.0), direct)
    assert np.isclose(direct, -np.log2(5 / 8))


def test_renyi_pure_and_uniform():
    pure = np.diag([1.0, 0.0, 0.0])
    assert renyi_entropy(pure, 2.0) == 0.0
    assert renyi_entropy(pure, 3.0) == 0.0
    assert np.isclose(renyi_entropy(np.eye(3) / 3, 0.5), np.log2(3))
    assert np.isclose(renyi_entropy(np.eye(3) / 3, np.inf), np.log2(3))
    assert np.isclose(renyi_entropy(np.diag([0.5, 0.5, 0.0]), 0.0), 1.0)


def test_renyi_alpha_one_dispatch():
    rho = random_density(3, RNG)
    assert np.isclose(renyi_entropy(rho, 1.0), vn_entropy(rho))


def test_coherent_information_examples():
    pair = make_ns(0.3)
    assert abs(coherent_information(pair, dyad(ket(0, 3)))) < 1e-12
    deph = make_w(0.5, 0.5)
    assert np.isclose(coherent_information(deph, np.eye(3) / 3), np.log2(1.5))
    pair0 = make_ns(0.0)
    rho = (np.diag([1.0, 0, 0]) + np.diag([0, 0, 1.0])) / 2
    assert np.isclose(coherent_information(pair0, rho.astype(complex)), 1.0)


def test_ci_gradient_finite_difference():
    # oracle: central differences along tangent (traceless Hermitian) directions
    pair = make_ns(1 / 3)
    rho = random_density(3, RNG)
    g = ci_gradient(pair, rho)
    assert abs(np.trace(g)) < 1e-10
    step = 1e-5
    for _ in range(6):
        h = random_hermitian(3, RNG)
        h -= np.trace(h) / 3 * np.eye(3)
        num = (coherent_information(pair, rho + step * h)
               - coherent_information(pair, rho - step * h)) / (2 * step)
        ana = np.real(np.trace(g @ h))
        assert abs(num - ana) <= 1e-5 * max(1.0, abs(num))


def test_ci_gradient_stationary_at_dephasing_optimum():
    deph = make_w(0.5, 0.5)
    g = ci_gradient(deph, np.eye(3) / 3)
    assert np.linalg.norm(g) < 1e-6


def test_majorizes_basics():
    assert majorizes([1.0, 0.0], [0.5, 0.5])
    assert not majorizes([0.5, 0.5], [1.0, 0.0])
    x = np.sort(RNG.dirichlet(np.ones(4)))
    assert majorizes(x, x)
    with pytest.raises(ValueError):
        majorizes([0.7, 0.3], [0.5, 0.4])


def test_majorization_of_sums():
    # sum bound: the spectrum of N+M is majorized by the sum of the sorted
    # spectra (eigensolve both sides)
    for _ in range(10):
        n = random_hermitian(4, RNG)
        m = random_hermitian(4, RNG)
        vs = np.sort(np.abs(np.linalg.eigvalsh(n + m)))[::-1]
        vn_ = np.sort(np.abs(np.linalg.eigvalsh(n)))[::-1]
        vm = np.sort(np.abs(np.linalg.eigvalsh(m)))[::-1]
        lhs = np.cumsum(vn_ + vm) - np.cumsum(vs)
        assert np.all(lhs >= -1e-10)


def test_schur_concavity():
    for _ in range(200):
        d = int(RNG.integers(2, 6))
        y = RNG.dirichlet(np.ones(d))
        # mixing toward uniform produces a majorized vector
        perms = [RNG.permutation(d) for _ in range(4)]
        wts = RNG.dirichlet(np.ones(4))
        x = sum(w * y[p] for w, p in zip(wts, perms))
        assert majorizes(y, x)
        hx = -np.sum(x[x > 0] * np.log2(x[x > 0]))
        hy = -np.sum(y[y > 0] * np.log2(y[y > 0]))
        assert hx >= hy - 1e-12


def test_spectrum_type():
    sp = Spectrum.of(np.diag([0.2, 0.5, 0.3]))
    assert np.allclose(sp.values, [0.5, 0.3, 0.2])
    with pytest.raises(ValueError):
        Spectrum(values=[0.2, 0.5], trace=1.0)


def test_interval_family_midpoint_concavity():
    mu = np.sort(RNG.dirichlet(np.ones(3))) ** 0.5
    pair = make_o(mu)
    d = 4

    def delta(u):
        rho = (1 - u) * dyad(ket(0, d)) + u * dyad(ket(d - 1, d))
        return coherent_information(pair, rho)

    us = np.linspace(0.0, 1.0, 101)
    vals = np.array([delta(u) for u in us])
    for i in range(0, 101, 10):
        for j in range(i + 2, 101, 10):
            if (i + j) % 2 == 0:
                mid = vals[(i + j) // 2]
                assert mid >= (vals[i] + vals[j]) / 2 - 1e-10


def test_ensemble_values_base_family():
    for s in np.linspace(0.0, 0.5, 11):
        pair = make_ns(s)
        ens = Ensemble([0.5, 0.5], [np.diag([1.0, 0, 0]).astype(complex),
                                    np.diag([0.0, s, 1 - s]).astype(complex)])
        assert abs(ensemble_private_value(pair, ens) - 1.0) < 1e-9
        assert abs(ensemble_holevo(pair, ens) - 1.0) < 1e-9


def test_ensemble_holevo_trivial_and_dephasing():
    pair = make_ns(0.3)
    single = Ensemble([1.0], [np.eye(3) / 3])
    assert abs(ensemble_holevo(pair, single)) < 1e-12
    om = np.exp(2j * np.pi / 3)
    states = [np.array([1, om**k, om ** (2 * k)], dtype=complex) / np.sqrt(3)
              for k in (0, 1, 2)]
    ens = Ensemble([1 / 3] * 3, [dyad(v) for v in states])
    assert np.isclose(ensemble_holevo(make_w(0.5, 0.5), ens), np.log2(3))


def test_ensemble_private_pure_reduces_to_average_bias():
    pair = make_ns(0.4)
    vecs = [random_pure_state(3, RNG) for _ in range(3)]
    ens = Ensemble([0.2, 0.5, 0.3], [dyad(v) for v in vecs])
    assert np.isclose(ensemble_private_value(pair, ens),
                      coherent_information(pair, ens.average))


def test_ensemble_private_generalized_family():
    d = 4
    pair = make_md(d)
    rho1 = np.zeros((d, d), dtype=complex)
    rho1[0, 0] = 1.0
    rho2 = np.diag([0.0] + [1.0 / (d - 1)] * (d - 1)).astype(complex)
    ens = Ensemble([0.5, 0.5], [rho1, rho2])
    assert abs(ensemble_private_value(pair, ens) - 1.0) < 1e-9


def test_private_leq_holevo():
    pair = make_w(0.5, 0.8)
    for _ in range(10):
        m = int(RNG.integers(2, 5))
        p = RNG.dirichlet(np.ones(m))
        states = [random_density(3, RNG) for _ in range(m)]
        ens = Ensemble(p, states)
        assert ensemble_private_value(pair, ens) <= ensemble_holevo(pair, ens) + 1e-10


def test_mutual_information_examples():
    pair = make_ns(0.3)
    assert abs(mutual_information_ea(pair, dyad(ket(0, 3)))) < 1e-10
    s = 0.3
    rho = np.diag([0.5, s / 2, (1 - s) / 2]).astype(complex)
    assert np.isclose(mutual_information_ea(pair, rho), 2.0)
    assert np.isclose(mutual_information_ea(make_w(0.5, 0.5), np.eye(3) / 3),
                      np.log2(4.5))


def test_mutual_information_purification_identity():
    pair = make_w(0.5, 0.7)
    for _ in range(5):
        rho = random_density(3, RNG)
        via_complement = (vn_entropy(rho) + vn_entropy(apply(pair, rho))
                          - vn_entropy(apply(pair, rho, "complement")))
        assert np.isclose(mutual_information_ea(pair, rho), via_complement)


def test_mutual_information_midpoint_concavity():
    pair = make_ns(0.2)
    for _ in range(10):
        r1, r2 = random_density(3, RNG), random_density(3, RNG)
        mid = mutual_information_ea(pair, (r1 + r2) / 2)
        avg = (mutual_information_ea(pair, r1) + mutual_information_ea(pair, r2)) / 2
        assert mid >= avg - 1e-8


def test_binary_entropy():
    assert np.isclose(binary_entropy(0.5), 1.0)
    assert binary_entropy(0.0) == 0.0

import numpy as np
import pytest

from qudit_monogamy import (InvalidStateError, antisymmetric_chi, g_concurrence_marginal, ghz,
                            partial_trace, w_class, w_state)
from qudit_monogamy.zoo import named, random_w_coefficients


def singlet(i, j):
    v = np.zeros(9)
    v[3 * i + j] = 1 / np.sqrt(2)
    v[3 * j + i] = -1 / np.sqrt(2)
    return v


class TestGHZ:
    def test_qutrit_marginal(self):
        assert np.allclose(partial_trace(ghz(3), {1}).entries, np.eye(3) / 3, atol=1e-15)

    def test_qubit(self):
        a = ghz(2).amplitudes
        assert a[0] == pytest.approx(2**-0.5) and a[7] == pytest.approx(2**-0.5)
        assert np.count_nonzero(a) == 2

    def test_d5(self):
        a = ghz(5).amplitudes
        assert np.count_nonzero(a) == 5
        assert np.sum(np.abs(a) ** 2) == pytest.approx(1, abs=1e-14)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_marginal_g_is_one(self, d):
        for party in (1, 2, 3):
            g = g_concurrence_marginal(partial_trace(ghz(d), {party}), d)
            assert abs(g.g - 1) < 1e-10

    def test_rejects_d1(self):
        with pytest.raises(InvalidStateError):
            ghz(1)


class TestChi:
    def test_amplitudes(self):
        t = antisymmetric_chi().tensor
        assert np.count_nonzero(t) == 6
        assert np.allclose(np.abs(t[t != 0]), 1 / np.sqrt(6))
        assert t[0, 1, 2] > 0 and t[0, 2, 1] < 0 and t[1, 2, 0] > 0
        assert t[1, 0, 2] < 0 and t[2, 0, 1] > 0 and t[2, 1, 0] < 0

    def test_single_party_marginal(self):
        assert np.allclose(partial_trace(antisymmetric_chi(), {1}).entries, np.eye(3) / 3,
                           atol=1e-15)

    @pytest.mark.parametrize("keep", [{1, 2}, {1, 3}])
    def test_pair_marginal_is_singlet_mixture(self, keep):
        x, y, z = singlet(0, 1), singlet(0, 2), singlet(1, 2)
        expected = (np.outer(x, x) + np.outer(y, y) + np.outer(z, z)) / 3
        assert np.allclose(partial_trace(antisymmetric_chi(), keep).entries, expected, atol=1e-15)

    def test_antisymmetric_under_swap(self):
        t = antisymmetric_chi().tensor
        assert np.allclose(np.transpose(t, (1, 0, 2)), -t)
        assert np.allclose(np.transpose(t, (0, 2, 1)), -t)


class TestW:
    def test_uniform(self):
        t = w_state().tensor
        for ket in [(1, 0, 0), (2, 0, 0), (0, 1, 0), (0, 2, 0), (0, 0, 1), (0, 0, 2)]:
            assert t[ket] == pytest.approx(1 / np.sqrt(6))
        assert np.count_nonzero(t) == 6

    def test_single_term(self):
        c = np.zeros((3, 2))
        c[0, 0] = 1
        t = w_class(c).tensor
        assert t[1, 0, 0] == 1 and np.count_nonzero(t) == 1

    def test_placement(self):
        c = np.arange(1, 7).reshape(3, 2) / np.sqrt(91)
        t = w_class(c).tensor
        assert t[1, 0, 0] == c[0, 0] and t[2, 0, 0] == c[0, 1]
        assert t[0, 1, 0] == c[1, 0] and t[0, 2, 0] == c[1, 1]
        assert t[0, 0, 1] == c[2, 0] and t[0, 0, 2] == c[2, 1]

    def test_random_marginals_rank_at_most_two(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = w_class(random_w_coefficients(rng))
            for party in (1, 2, 3):
                w = np.linalg.eigvalsh(partial_trace(s, {party}).entries)
                assert np.sum(w > 1e-12) <= 2
                assert g_concurrence_marginal(partial_trace(s, {party}), 3).g_pow_d < 1e-12

    @pytest.mark.parametrize("c", [np.ones((3, 2)), np.ones((2, 3)) / np.sqrt(6)])
    def test_rejects(self, c):
        with pytest.raises(InvalidStateError):
            w_class(c)


def test_named():
    assert named("ghz", 4).dim == 4
    assert named("chi").dim == 3
    with pytest.raises(ValueError):
        named("w", 4)
    with pytest.raises(ValueError):
        named("bell")

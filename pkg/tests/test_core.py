from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fastmix.chains import biased_rw, symmetric_bd, uniform_chain
from fastmix.core import (Kernel, Pmf, Poset, ReducibleError, ValidationError, direct_sum, evolve,
                          identity_kernel, is_reversible, is_stationary, mixture, stationary,
                          time_reversal, trivial_kernel)
from fastmix import samplers


def frac_evolve(rows, start, t):
    mu = [Fraction(0)] * len(rows)
    mu[start] = Fraction(1)
    for _ in range(t):
        mu = [sum(mu[i] * rows[i][j] for i in range(len(rows))) for j in range(len(rows))]
    return mu


HALF = Fraction(1, 2)
UNIFORM2 = [[HALF, HALF, 0], [HALF, 0, HALF], [0, HALF, HALF]]


class TestPmf:
    def test_rejects_bad_sum(self):
        with pytest.raises(ValidationError):
            Pmf([0.5, 0.4])

    def test_positive_flag(self):
        Pmf([1.0, 0.0])
        with pytest.raises(ValidationError):
            Pmf([1.0, 0.0], positive=True)

    def test_immutable(self):
        p = Pmf.uniform(3)
        with pytest.raises(ValueError):
            p.weights[0] = 1.0


class TestKernel:
    def test_clamps_roundoff(self):
        k = Kernel([[1.0 + 1e-16, -1e-16], [0.5, 0.5]])
        assert np.asarray(k)[0, 1] == 0.0

    def test_rejects_real_negative(self):
        with pytest.raises(ValidationError):
            Kernel([[1.1, -0.1], [0.5, 0.5]])

    def test_rejects_row_sum(self):
        with pytest.raises(ValidationError, match="row 0"):
            Kernel([[0.5, 0.4], [0.5, 0.5]])

    def test_cached_stationary_is_checked(self):
        with pytest.raises(ValidationError):
            Kernel([[0.5, 0.5], [0.1, 0.9]], stationary=[0.5, 0.5])

    def test_matmul_and_power(self):
        k = uniform_chain(2)
        assert np.allclose(np.asarray(k @ k), np.asarray(k.power(2)))
        assert (k @ k).stationary is not None


class TestStationary:
    def test_symmetric_bd_uniform(self):
        pi = stationary(Kernel(np.asarray(symmetric_bd([0.2, 0.45]))))
        assert np.allclose(pi.weights, [1 / 3] * 3, atol=1e-14)

    def test_biased_rw(self):
        # normalize 1, 2, 4
        pi = stationary(Kernel(np.asarray(biased_rw(2.0, 2))))
        assert np.allclose(pi.weights, [1 / 7, 2 / 7, 4 / 7], atol=1e-14)

    def test_identity_reducible(self):
        with pytest.raises(ReducibleError):
            stationary(identity_kernel(3))

    def test_general_dense(self, rng):
        m = rng.uniform(0.1, 1, (5, 5))
        m /= m.sum(axis=1, keepdims=True)
        pi = stationary(Kernel(m))
        assert np.all(pi.weights > 0)
        assert np.allclose(pi.weights @ m, pi.weights, atol=1e-10)


class TestTimeReversal:
    def test_reversible_is_fixed(self, rng):
        for _ in range(10):
            bd = samplers.monotone_bd_chain(rng, 5)
            k = bd.kernel()
            pi = stationary(k)
            assert np.allclose(np.asarray(time_reversal(k, pi)), np.asarray(k), atol=1e-12, rtol=0)

    def test_cycle_reverses(self):
        cyc = Kernel(np.roll(np.eye(3), 1, axis=1))
        rev = time_reversal(cyc, Pmf.uniform(3))
        assert np.array_equal(np.asarray(rev), np.asarray(cyc).T)

    def test_involution(self, rng):
        m = rng.uniform(0.1, 1, (4, 4))
        m /= m.sum(axis=1, keepdims=True)
        k = Kernel(m)
        pi = stationary(k)
        back = time_reversal(time_reversal(k, pi), pi)
        assert np.allclose(np.asarray(back), m, atol=1e-12, rtol=0)

    def test_requires_stationary(self):
        with pytest.raises(ValidationError):
            time_reversal(biased_rw(2.0, 2), Pmf.uniform(3))


class TestEvolve:
    def test_hand_values(self):
        k = uniform_chain(2)
        expected1 = [float(x) for x in frac_evolve(UNIFORM2, 0, 1)]
        expected2 = [float(x) for x in frac_evolve(UNIFORM2, 0, 2)]
        assert expected1 == [0.5, 0.5, 0.0]
        assert expected2 == [0.5, 0.25, 0.25]
        assert np.allclose(evolve(Pmf.point_mass(3), k, 1).weights, expected1, atol=1e-15)
        assert np.allclose(evolve(Pmf.point_mass(3), k, 2).weights, expected2, atol=1e-15)

    def test_zero_steps(self):
        mu = Pmf([0.2, 0.3, 0.5])
        assert np.array_equal(evolve(mu, uniform_chain(2), 0).weights, mu.weights)

    @given(st.integers(0, 10), st.integers(0, 10), st.integers(1, 6), st.integers(0, 2**31))
    def test_semigroup(self, s, t, n, seed):
        rng = np.random.default_rng(seed)
        k = samplers.random_symmetric(rng, n)
        mu = samplers.random_pmf(rng, n + 1)
        a = evolve(mu, k, s + t).weights
        b = evolve(evolve(mu, k, s), k, t).weights
        assert np.allclose(a, b, atol=1e-12, rtol=0)


class TestMixture:
    def test_endpoints(self):
        a, b = symmetric_bd([0.2, 0.2]), symmetric_bd([0.4, 0.4])
        assert np.array_equal(np.asarray(mixture(0, a, b)), np.asarray(a))
        assert np.array_equal(np.asarray(mixture(1, a, b)), np.asarray(b))

    def test_midpoint(self):
        mid = mixture(0.5, symmetric_bd([0.2, 0.2]), symmetric_bd([0.4, 0.4]))
        assert np.allclose(np.asarray(mid), np.asarray(symmetric_bd([0.3, 0.3])), atol=1e-15)
        assert mid.stationary is not None

    def test_mismatch(self):
        with pytest.raises(ValidationError):
            mixture(0.5, uniform_chain(1), uniform_chain(2))


class TestDirectSum:
    def test_singletons_identity(self):
        k = direct_sum([identity_kernel(1), identity_kernel(1)], [[0], [1]])
        assert np.array_equal(np.asarray(k), np.eye(2))

    def test_two_uniform_copies(self):
        u = uniform_chain(1)
        k = np.asarray(direct_sum([u, u], [[0, 2], [1, 3]]))
        expected = np.zeros((4, 4))
        expected[np.ix_([0, 2], [0, 2])] = 0.5
        expected[np.ix_([1, 3], [1, 3])] = 0.5
        assert np.array_equal(k, expected)

    def test_trivial_blocks_keep_pi(self):
        pi = np.array([0.1, 0.2, 0.3, 0.4])
        cells = [[0, 3], [1, 2]]
        blocks = [trivial_kernel(pi[c] / pi[c].sum()) for c in cells]
        k = direct_sum(blocks, cells)
        assert is_stationary(k, pi) and is_reversible(k, pi)

    def test_bad_partition(self):
        u = uniform_chain(1)
        with pytest.raises(ValidationError):
            direct_sum([u, u], [[0, 1], [1, 2]])
        with pytest.raises(ValidationError):
            direct_sum([u], [[0, 2]])


class TestPoset:
    def test_axioms_enforced(self):
        with pytest.raises(ValidationError):
            Poset(np.array([[True, True], [True, True]]))
        with pytest.raises(ValidationError):
            Poset(np.array([[True, True, False], [False, True, True], [False, False, True]]))
        with pytest.raises(ValidationError):
            Poset(np.zeros((2, 2), dtype=bool))

    def test_product_is_componentwise(self):
        p = Poset.product([2, 2])
        # states 00, 01, 10, 11
        assert p.leq[0].all() and p.leq[:, 3].all()
        assert not p.leq[1, 2] and not p.leq[2, 1]

    def test_from_covers_closure(self):
        p = Poset.from_covers(3, [(0, 1), (1, 2)])
        assert np.array_equal(p.leq, Poset.chain(3).leq)

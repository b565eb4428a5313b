import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_compare_gap, brute_down_sets
from fastmix import samplers
from fastmix.chains import WParams, bd_params, biased_rw, from_w, symmetric_bd, uniform_chain
from fastmix.core import Kernel, Pmf, Poset, ValidationError
from fastmix.core import direct_sum, evolve, identity_kernel, mixture, trivial_kernel
from fastmix.orders import (DownSetLimitError, compare, dominates, enumerate_down_sets,
                            has_positive_correlations, is_down_set, is_monotone, majorization_slack,
                            majorizes, positive_correlation_kernel_check, stochastically_ordered)


def all_small_posets(n):
    """Every order on 0..n-1 compatible with the natural labelling (x < y only if x < y as ints)."""
    pairs = list(itertools.combinations(range(n), 2))
    seen = set()
    for bits in itertools.product([False, True], repeat=len(pairs)):
        r = np.eye(n, dtype=bool)
        for (x, y), b in zip(pairs, bits):
            r[x, y] = b
        try:
            p = Poset(r)
        except ValidationError:
            continue
        key = p.leq.tobytes()
        if key not in seen:
            seen.add(key)
            yield p


class TestDownSets:
    def test_chain_prefixes(self):
        ds = enumerate_down_sets(Poset.chain(5))
        assert ds.shape == (6, 5)
        assert sorted(int(r.sum()) for r in ds) == list(range(6))

    def test_antichain(self):
        assert enumerate_down_sets(Poset.antichain(3)).shape[0] == 8

    def test_square(self):
        p = Poset.product([2, 2])
        assert enumerate_down_sets(p).shape[0] == len(brute_down_sets(p.leq)) == 6

    @pytest.mark.parametrize("n", [3, 4])
    def test_matches_brute_force(self, n):
        for p in all_small_posets(n):
            got = {r.tobytes() for r in enumerate_down_sets(p)}
            want = {m.tobytes() for m in brute_down_sets(p.leq)}
            assert got == want

    def test_deterministic_and_unique(self):
        p = Poset.product([2, 3])
        a, b = enumerate_down_sets(p), enumerate_down_sets(p)
        assert np.array_equal(a, b)
        assert len({r.tobytes() for r in a}) == a.shape[0]
        assert all(is_down_set(r, p) for r in a)

    def test_cap(self):
        with pytest.raises(DownSetLimitError, match="100"):
            enumerate_down_sets(Poset.antichain(10), cap=100)


class TestMonotone:
    def test_examples(self):
        c = Poset.chain(3)
        assert is_monotone(symmetric_bd([0.3, 0.3]), c)
        assert not is_monotone(symmetric_bd([0.6, 0.3]), c)
        assert is_monotone(identity_kernel(4), Poset.product([2, 2]))

    @given(st.integers(1, 6), st.integers(0, 2**31))
    def test_bd_criterion(self, n, seed):
        rng = np.random.default_rng(seed)
        p = samplers.feasible_symmetric_p(rng, n)
        closed = bool(np.all(p <= 0.5 + 1e-12))
        assert is_monotone(symmetric_bd(p), Poset.chain(n + 1)) == closed


class TestCompare:
    def test_uniform_below_monotone(self):
        pi = np.full(3, 1 / 3)
        rep = compare(uniform_chain(2), symmetric_bd([0.4, 0.4]), pi, Poset.chain(3))
        assert rep.holds

    def test_reflexive(self):
        k = symmetric_bd([0.3, 0.2])
        rep = compare(k, k, np.full(3, 1 / 3), Poset.chain(3))
        assert rep.holds and rep.worst_violation == 0

    def test_incomparable(self):
        a, b = symmetric_bd([0.6, 0.2]), symmetric_bd([0.2, 0.6])
        pi, c = np.full(3, 1 / 3), Poset.chain(3)
        assert not compare(a, b, pi, c).holds and not compare(b, a, pi, c).holds
        assert brute_compare_gap(a, b, pi, c.leq) > 1e-3 and brute_compare_gap(b, a, pi, c.leq) > 1e-3

    def test_witness_attains_worst(self):
        a, b = symmetric_bd([0.6, 0.2]), symmetric_bd([0.2, 0.6])
        pi = np.full(3, 1 / 3)
        rep = compare(a, b, pi, Poset.chain(3))
        d, e = rep.witness
        gap = pi[e] @ (np.asarray(a)[np.ix_(e, d)].sum(1) - np.asarray(b)[np.ix_(e, d)].sum(1))
        assert np.isclose(gap, rep.worst_violation, atol=1e-15)

    def test_needs_shared_pi(self):
        with pytest.raises(ValidationError):
            compare(uniform_chain(2), biased_rw(2.0, 2), np.full(3, 1 / 3), Poset.chain(3))

    @given(st.integers(0, 2**31))
    def test_against_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        space = Poset.product([2, 2])
        pi = samplers.random_pmf(rng, 4)
        blocks = [[0, 3], [1, 2]] if rng.random() < 0.5 else [[0, 1], [2, 3]]
        k = direct_sum([trivial_kernel(pi.weights[c] / pi.weights[c].sum()) for c in blocks], blocks)
        l = trivial_kernel(pi)
        rep = compare(k, l, pi, space)
        assert np.isclose(rep.worst_violation, brute_compare_gap(k, l, pi.weights, space.leq), atol=1e-14)

    @given(st.integers(2, 6), st.integers(0, 2**31))
    def test_order_properties(self, n, seed):
        rng = np.random.default_rng(seed)
        pi = samplers.random_pmf(rng, n + 1)
        c = Poset.chain(n + 1)
        k, l = samplers.comparable_pair(rng, pi)
        _, m = samplers.comparable_pair(rng, Pmf(pi.weights, positive=True))
        # transitivity through l: shrink l's flows further
        wl = bd_params(l).p[:-1] * pi.weights[:-1]
        lower = from_w(WParams(wl * rng.uniform(0.1, 1.0, wl.size), pi))
        assert compare(k, l, pi, c).holds and compare(l, lower, pi, c).holds
        assert compare(k, lower, pi, c).holds
        # antisymmetry
        if compare(k, m, pi, c, 1e-12).holds and compare(m, k, pi, c, 1e-12).holds:
            assert np.max(np.abs(np.asarray(k) - np.asarray(m))) <= 1e-9

    @given(st.integers(2, 5), st.floats(0, 1), st.integers(0, 2**31))
    def test_mixture_and_direct_sum_preserve(self, n, lam, seed):
        rng = np.random.default_rng(seed)
        pi = samplers.random_pmf(rng, n + 1)
        c = Poset.chain(n + 1)
        k0, l0 = samplers.comparable_pair(rng, pi)
        k1, l1 = samplers.comparable_pair(rng, pi)
        assert compare(mixture(lam, k0, k1), mixture(lam, l0, l1), pi, c).holds
        # direct sum of two path pieces, ordered as a disjoint union of chains
        pi2 = samplers.random_pmf(rng, 3)
        k2, l2 = samplers.comparable_pair(rng, pi2)
        size = n + 4
        cells = [list(range(n + 1)), list(range(n + 1, size))]
        joint = np.concatenate([pi.weights, pi2.weights]) / 2
        leq = np.zeros((size, size), dtype=bool)
        leq[: n + 1, : n + 1] = c.leq
        leq[n + 1:, n + 1:] = Poset.chain(3).leq
        ks, ls = direct_sum([k0, k2], cells), direct_sum([l0, l2], cells)
        assert compare(ks, ls, joint, Poset(leq)).holds


class TestPositiveCorrelations:
    def test_linear_order(self, rng):
        for _ in range(20):
            assert has_positive_correlations(samplers.random_pmf(rng, 6), Poset.chain(6))

    def test_uniform_square(self):
        assert has_positive_correlations(Pmf.uniform(4), Poset.product([2, 2]))

    def test_four_element_search(self):
        """Exhaustive search over 4-element orders: library agrees with direct inner products."""
        pi = np.array([0.1, 0.2, 0.3, 0.4])
        found_violation = False
        for p in all_small_posets(4):
            ideals = brute_down_sets(p.leq)
            oracle = all(pi[d & e].sum() >= pi[d].sum() * pi[e].sum() - 1e-12
                         for d in ideals for e in ideals)
            assert has_positive_correlations(pi, p) == oracle
            assert positive_correlation_kernel_check(pi, p) == oracle
            found_violation |= not oracle
        assert found_violation

    def test_hand_witness(self):
        # 0 and 1 minimal and incomparable, both below 2 and 3
        leq = np.eye(4, dtype=bool)
        leq[np.ix_([0, 1], [2, 3])] = True
        p = Poset(leq)
        pi = Pmf.uniform(4)
        assert not has_positive_correlations(pi, p)
        assert not compare(trivial_kernel(pi), identity_kernel(4), pi, p).holds


class TestMajorization:
    def test_examples(self):
        assert majorizes([1, 0, 0], [1 / 3] * 3)
        assert majorizes([0.2, 0.5, 0.3], [0.2, 0.5, 0.3])
        assert majorizes([0.7, 0.3, 0.0], [0.5, 0.5, 0.0])
        assert not majorizes([0.5, 0.5, 0.0], [0.7, 0.3, 0.0])

    def test_oracle(self, rng):
        for _ in range(1000):
            size = int(rng.integers(2, 8))
            v, w = rng.dirichlet(np.ones(size)), rng.dirichlet(np.ones(size))
            pv, pw = np.cumsum(sorted(v, reverse=True)), np.cumsum(sorted(w, reverse=True))
            oracle = all(a >= b - 1e-10 for a, b in zip(pv, pw))
            assert majorizes(v, w) == oracle
            assert np.isclose(majorization_slack(v, w), min(pv - pw), atol=1e-14)


class TestDominates:
    def test_examples(self):
        c = Poset.chain(4)
        top, bottom = Pmf.point_mass(4, 3), Pmf.point_mass(4, 0)
        assert dominates(top, bottom, c) and not dominates(bottom, top, c)
        assert dominates(bottom, bottom, c)

    def test_monotone_chain_dominates_uniform(self):
        c = Poset.chain(4)
        l = symmetric_bd([0.3, 0.45, 0.2])
        a = evolve(Pmf.point_mass(4), uniform_chain(3), 5)
        b = evolve(Pmf.point_mass(4), l, 5)
        assert dominates(a, b, c)


def test_stochastic_ordering_helper():
    c = Poset.chain(3)
    up = Kernel([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.0, 0.0, 1.0]])
    assert stochastically_ordered(identity_kernel(3), up, c)
    assert not stochastically_ordered(up, identity_kernel(3), c)
    # the uniform chain and the identity are not ordered either way
    u = uniform_chain(2)
    assert not stochastically_ordered(u, identity_kernel(3), c)
    assert not stochastically_ordered(identity_kernel(3), u, c)


@given(st.integers(0, 2**31))
def test_stochastic_ordering_implies_comparison(seed):
    rng = np.random.default_rng(seed)
    c = Poset.chain(3)
    pi = np.full(3, 1 / 3)
    for _ in range(20):
        k = symmetric_bd(samplers.monotone_symmetric_p(rng, 2))
        l = symmetric_bd(samplers.monotone_symmetric_p(rng, 2))
        if stochastically_ordered(l, k, c):
            assert compare(k, l, pi, c).holds

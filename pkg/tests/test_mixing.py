import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fastmix import samplers
from fastmix.chains import symmetric_bd, uniform_chain
from fastmix.core import Pmf, ValidationError
from fastmix.mixing import (METRICS, distance, majorization_trace, start_state_multiset_invariance,
                            trace)
from fastmix.orders import majorizes
from fastmix.structures import doubly_stochastic_sample


def oracle(rho, pi, metric, p=2.0):
    """Loop-by-loop evaluation of each discrepancy."""
    terms = list(zip(rho, pi))
    if metric == "tv":
        return 0.5 * sum(abs(r - q) for r, q in terms)
    if metric == "sep":
        return max(1 - r / q for r, q in terms)
    if metric == "linf":
        return max(abs(r / q - 1) for r, q in terms)
    if metric == "l2":
        return math.sqrt(sum(q * (r / q - 1) ** 2 for r, q in terms))
    if metric == "lp":
        return sum(q * abs(r / q - 1) ** p for r, q in terms) ** (1 / p)
    if metric == "hellinger":
        return 0.5 * sum(q * (math.sqrt(r / q) - 1) ** 2 for r, q in terms)
    if metric == "kl_forward":
        if any(r == 0 for r, _ in terms):
            return math.inf
        return -sum(q * math.log(r / q) for r, q in terms)
    if metric == "kl_reverse":
        return sum(r * math.log(r / q) for r, q in terms if r > 0)
    raise AssertionError(metric)


class TestDistance:
    @pytest.mark.parametrize("metric", METRICS)
    def test_zero_at_pi(self, metric):
        pi = [0.2, 0.3, 0.5]
        assert distance(pi, pi, metric) == pytest.approx(0, abs=1e-15)

    def test_sep_examples(self):
        pi = np.full(3, 1 / 3)
        assert distance([0.5, 0.5, 0.0], pi, "sep") == pytest.approx(1.0, abs=1e-15)
        assert distance([0.5, 0.25, 0.25], pi, "sep") == pytest.approx(0.25, abs=1e-15)

    def test_kl_forward_infinite(self):
        assert distance([0.5, 0.5, 0.0], np.full(3, 1 / 3), "kl_forward") == math.inf
        assert math.isfinite(distance([0.5, 0.5, 0.0], np.full(3, 1 / 3), "kl_reverse"))

    def test_unknown_metric(self):
        with pytest.raises(ValidationError):
            distance([1.0], [1.0], "chi")

    @given(st.integers(2, 7), st.sampled_from(METRICS), st.integers(0, 2**31))
    def test_against_oracle(self, size, metric, seed):
        rng = np.random.default_rng(seed)
        rho = rng.dirichlet(np.ones(size))
        if rng.random() < 0.3:
            rho[0] = 0
            rho /= rho.sum()
        pi = samplers.random_pmf(rng, size).weights
        assert distance(rho, pi, metric, p=3.0) == pytest.approx(oracle(rho, pi, metric, 3.0), abs=1e-12)

    def test_schur_convex_uniform(self, rng):
        """Smoothing a pmf by a doubly stochastic matrix never increases a discrepancy from uniform."""
        for _ in range(1000):
            size = int(rng.integers(2, 7))
            v = rng.dirichlet(np.ones(size))
            w = v @ np.asarray(doubly_stochastic_sample(size, int(rng.integers(2**31)), 3))
            assert majorizes(v, w)
            u = np.full(size, 1 / size)
            for metric in METRICS:
                for p in (1.0, 3.0):
                    assert distance(v, u, metric, p) >= distance(w, u, metric, p) - 1e-12


class TestTrace:
    def test_uniform_sep(self):
        tr = trace(uniform_chain(2), Pmf.point_mass(3), 5)
        assert np.allclose(tr.sep[:3], [1, 1, 0.25], atol=1e-15)
        assert len(tr) == 6 and tr.horizon == 5

    def test_from_pi(self):
        tr = trace(symmetric_bd([0.3, 0.2]), np.full(3, 1 / 3), 10)
        for name in ("tv", "sep", "l2", "lp", "linf", "hellinger", "kl_pi_rho", "kl_rho_pi"):
            assert np.all(np.abs(getattr(tr, name)) <= 1e-14)

    def test_horizon_zero(self):
        tr = trace(uniform_chain(2), Pmf.point_mass(3), 0)
        assert len(tr) == 1 and tr.sep[0] == 1.0

    def test_matches_distance(self, rng):
        k = samplers.random_symmetric(rng, 4)
        tr = trace(k, Pmf.point_mass(5), 20, lp_order=3.0)
        laws = [np.linalg.matrix_power(np.asarray(k), t)[0] for t in range(21)]
        pi = np.full(5, 0.2)
        for t in (0, 1, 7, 20):
            assert tr.column("kl_fwd")[t] == pytest.approx(distance(laws[t], pi, "kl_forward"), abs=1e-12)
            assert tr.lp[t] == pytest.approx(distance(laws[t], pi, "lp", 3.0), abs=1e-12)
            assert tr.hellinger[t] == pytest.approx(distance(laws[t], pi, "hellinger"), abs=1e-12)

    def test_p03_slower_than_uniform(self):
        a = trace(uniform_chain(2), Pmf.point_mass(3), 100)
        b = trace(symmetric_bd([0.3, 0.3]), Pmf.point_mass(3), 100)
        for m in ("tv", "sep", "l2"):
            assert np.all(b.column(m) >= a.column(m) - 1e-10)

    @given(st.integers(1, 8), st.integers(0, 2**31))
    def test_invariants(self, n, seed):
        bd = samplers.monotone_bd_chain(np.random.default_rng(seed), n)
        tr = trace(bd.kernel(), Pmf.point_mass(n + 1), 60)
        assert np.all((tr.tv >= 0) & (tr.tv <= 1) & (tr.sep >= 0) & (tr.sep <= 1))
        assert np.all(np.diff(tr.sep) <= 1e-12)

    @given(st.integers(1, 6), st.integers(0, 2**31))
    def test_l2_uniform_best_any_symmetric(self, n, seed):
        k = samplers.random_symmetric(np.random.default_rng(seed), n)
        a = trace(uniform_chain(n), Pmf.point_mass(n + 1), 80).l2
        b = trace(k, Pmf.point_mass(n + 1), 80).l2
        assert np.all(a <= b + 1e-10)


class TestMajorizationTrace:
    @given(st.integers(1, 7), st.integers(0, 2**31))
    def test_symmetric_vs_uniform(self, n, seed):
        k = samplers.random_symmetric(np.random.default_rng(seed), n)
        assert majorization_trace(k, uniform_chain(n), Pmf.point_mass(n + 1), 60).all()

    def test_reflexive(self):
        k = symmetric_bd([0.3, 0.1])
        assert majorization_trace(k, k, Pmf.point_mass(3), 10).all()

    def test_first_step(self):
        k = symmetric_bd([0.3, 0.3])
        out = majorization_trace(k, uniform_chain(2), Pmf.point_mass(3), 1)
        assert out[1]


class TestStartStateInvariance:
    def test_examples(self):
        assert start_state_multiset_invariance(2, 1)
        assert start_state_multiset_invariance(5, 0)
        assert start_state_multiset_invariance(4, 7)

    @pytest.mark.parametrize("n,t", [(1, 3), (3, 2), (6, 11)])
    def test_more(self, n, t):
        assert start_state_multiset_invariance(n, t)

    def test_fails_for_other_chain(self):
        # a sanity check that the property is not vacuous
        k = np.linalg.matrix_power(np.asarray(symmetric_bd([0.3, 0.1])), 1)
        srt = np.sort(k, axis=1)
        assert not np.allclose(srt, srt[0])

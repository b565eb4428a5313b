import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def brute_down_sets(leq):
    """All down-sets of the order ``leq`` by checking every subset."""
    n = leq.shape[0]
    out = []
    for bits in itertools.product([False, True], repeat=n):
        mask = np.array(bits)
        ok = all(mask[x] for y in range(n) if mask[y] for x in range(n) if leq[x, y])
        if ok:
            out.append(mask)
    return out


def brute_compare_gap(k, l, pi, leq):
    """max over down-set pairs of <K 1_D, 1_E> - <L 1_D, 1_E>, by explicit loops."""
    k, l, pi = np.asarray(k), np.asarray(l), np.asarray(pi)
    best = -np.inf
    ideals = brute_down_sets(leq)
    for d in ideals:
        for e in ideals:
            gap = sum(pi[i] * (k[i, d].sum() - l[i, d].sum()) for i in range(len(pi)) if e[i])
            best = max(best, gap)
    return best


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

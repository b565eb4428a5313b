"""Named property suites, run at full scale by default.

Each suite is a function ``suite(seed) -> list[CheckResult]``; ``run`` looks
suites up by name.  The suites are the numerical evidence for the main
results: majorization on the path, product preservation of the comparison
order, strong stationary duality, Lovasz-Winkler mixing times, SLEM
optimality, censoring and distance orderings.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import samplers
from .chains import (bd_params, biased_rw, budgeted_min_tmix, fmmc_logconcave, lw_objective,
                     lw_optimal_path, symmetric_bd, theta_closed, theta_ratio, uniform_chain)
from .core import Pmf, Poset, identity_kernel, mixture, stationary
from .duality import DEFAULT_SEED, dual_survival, sep_sum, ssd_dual, tmix_closed, tmix_oracle
from .mixing import laws_over_time, trace
from .orders import compare, enumerate_down_sets, is_monotone, majorization_slack
from .spectral import biased_rw_eigenvalues, slem, spectrum_reversible
from .structures import (SpinSpace, bruhat_poset, doubly_stochastic_sample, ising_pmf,
                         is_monotone_system, scan_kernels, shuffle_site_kernel, spin_site_kernel)

__all__ = ["CheckResult", "SUITES", "run", "suite_names"]

TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _delta0(size):
    return Pmf.point_mass(size, 0)


def path_majorization(seed: int = 1, instances: int = 200, horizon: int = 200):
    """Law of any symmetric path chain from 0 majorizes the uniform chain's law."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(instances):
        n = int(rng.integers(2, 9))
        k = samplers.random_symmetric(rng, n)
        a = laws_over_time(k, _delta0(n + 1), horizon)
        b = laws_over_time(uniform_chain(n), _delta0(n + 1), horizon)
        worst = min(worst, min(majorization_slack(x, y) for x, y in zip(a, b)))
    return [CheckResult("path_majorization", worst >= -TOL,
                        f"{instances} kernels, t<={horizon}, min slack {worst:.3e}")]


def product_preservation(seed: int = 2, instances: int = 100, max_power: int = 6,
                         max_factors: int = 4):
    """``K_s <= L_s`` for monotone reversible kernels survives products."""
    rng = np.random.default_rng(seed)
    worst_pow = worst_mix = -math.inf
    for _ in range(instances):
        n = int(rng.integers(2, 7))
        pi = samplers.random_pmf(rng, n + 1)
        poset = Poset.chain(n + 1)
        ideals = enumerate_down_sets(poset)
        pairs = [samplers.comparable_pair(rng, pi) for _ in range(max_factors)]
        k0, l0 = pairs[0]
        kp, lp = k0, l0
        for t in range(1, max_power + 1):
            if t > 1:
                kp, lp = kp @ k0, lp @ l0
            worst_pow = max(worst_pow, compare(kp, lp, pi, poset, down_sets=ideals).worst_violation)
        kp, lp = pairs[0]
        for t in range(2, max_factors + 1):
            kp, lp = kp @ pairs[t - 1][0], lp @ pairs[t - 1][1]
            worst_mix = max(worst_mix, compare(kp, lp, pi, poset, down_sets=ideals).worst_violation)
    return [
        CheckResult("product_preservation.powers", worst_pow <= TOL,
                    f"K^t <= L^t for t<={max_power}, worst violation {worst_pow:.3e}"),
        CheckResult("product_preservation.mixed", worst_mix <= TOL,
                    f"K1..Kt <= L1..Lt for t<={max_factors}, worst violation {worst_mix:.3e}"),
    ]


def ssd_identity(seed: int = 3, instances: int = 100, horizon: int = 500):
    """Separation of the primal equals the dual's absorption-time survival."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(1, 9))
        bd = samplers.equals1_chain(rng, n)
        k = bd.kernel()
        pi = stationary(k)
        sep = trace(k, _delta0(n + 1), horizon, pi).sep
        surv = dual_survival(ssd_dual(bd, pi), horizon)
        worst = max(worst, float(np.max(np.abs(sep - surv))))
    u = uniform_chain(2)
    upi = stationary(u)
    triple = dual_survival(ssd_dual(bd_params(u), upi), 2)
    direct = trace(u, _delta0(3), 2, upi).sep
    hand = np.array([1.0, 1.0, 0.25])
    ok = np.allclose(triple, hand, atol=TOL, rtol=0) and np.allclose(direct, hand, atol=TOL, rtol=0)
    return [
        CheckResult("ssd_identity.random", worst <= TOL,
                    f"{instances} chains, t<={horizon}, max |sep - P(T>t)| {worst:.3e}"),
        CheckResult("ssd_identity.uniform_n2", bool(ok), f"dual {triple.tolist()}, primal {direct.tolist()}"),
    ]


def tmix_agreement(seed: int = 4, instances: int = 50, samples: int = 10**6):
    """Closed-form LW mixing time against the naive-rule oracles."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(1, 9))
        bd = samplers.monotone_bd_chain(rng, n)
        k = bd.kernel()
        pi = stationary(k)
        worst = max(worst, abs(tmix_closed(bd, pi).value - tmix_oracle(k, pi).value))
    out = [CheckResult("tmix.closed_vs_first_step", worst <= 1e-8,
                       f"{instances} chains, max gap {worst:.3e}")]
    u = uniform_chain(2)
    upi = stationary(u)
    exact = tmix_closed(bd_params(u), upi).value
    first = tmix_oracle(u, upi).value
    out.append(CheckResult("tmix.uniform_n2", abs(exact - 8 / 3) <= 1e-12 and abs(first - 8 / 3) <= 1e-12,
                           f"closed {exact!r}, first-step {first!r}, expected 8/3"))
    mc_cases = [("uniform_n2", u), ("lw_optimal_n3", lw_optimal_path(3)),
                ("biased_rw_2_n4", biased_rw(2.0, 4))]
    for label, k in mc_cases:
        pi = stationary(k)
        exact = tmix_closed(bd_params(k), pi).value
        mc = tmix_oracle(k, pi, "monte_carlo", samples=samples, seed=DEFAULT_SEED)
        z = abs(mc.value - exact) / mc.se
        out.append(CheckResult(f"tmix.monte_carlo.{label}", z <= 4 and mc.halting_violations == 0,
                               f"mc {mc.value:.6f} +- {mc.se:.2e} vs {exact:.6f} (z={z:.2f}), "
                               f"halting violations {mc.halting_violations}"))
    return out


def sep_sum_identity(seed: int = 5, instances: int = 50):
    """Summed separation equals the LW mixing time for monotone chains."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(1, 9))
        bd = samplers.monotone_bd_chain(rng, n)
        pi = stationary(bd.kernel())
        worst = max(worst, abs(sep_sum(bd, pi) - tmix_closed(bd, pi).value))
    return [CheckResult("sep_sum_identity", worst <= 1e-7, f"{instances} chains, max gap {worst:.3e}")]


def _random_feasible_beats(rng, n, reference, draws):
    worst = math.inf
    for _ in range(draws):
        worst = min(worst, lw_objective(samplers.feasible_symmetric_p(rng, n)) - reference)
    return worst


def theta_optimality(seed: int = 6, draws: int = 200, step: float = 1e-6):
    """Alternating theta chain is the LW-optimal symmetric path chain for odd n."""
    rng = np.random.default_rng(seed)
    out = []
    for n in (3, 5, 7):
        th_a, th_b = theta_ratio(n), theta_closed(n)
        k = lw_optimal_path(n)
        best = tmix_closed(bd_params(k), np.full(n + 1, 1 / (n + 1))).value
        unif = lw_objective(np.full(n, 0.5))
        grid = np.arange(step, 1.0, step)
        c = np.array([(i + 1) * (n - i) / (n + 1) for i in range(n)])
        even, odd = c[0::2].sum(), c[1::2].sum()
        sweep = float(np.min(even / (1 - grid) + odd / grid))
        rand_gap = _random_feasible_beats(rng, n, best, draws)
        ok = (abs(th_a - th_b) <= 1e-12 and best < unif and sweep >= best - 1e-12 and rand_gap >= -1e-12)
        out.append(CheckResult(f"theta_optimality.n{n}", ok,
                               f"theta {th_a:.12f}/{th_b:.12f}, T_mix {best:.9f} < uniform {unif:.6f}, "
                               f"grid min {sweep:.9f}, random min gap {rand_gap:.3e}"))
    v3 = tmix_closed(bd_params(lw_optimal_path(3)), np.full(4, 0.25)).value
    out.append(CheckResult("theta_optimality.n3_value", abs(v3 - (2.5 + math.sqrt(6))) <= 1e-12,
                           f"{v3!r} vs 5/2+sqrt(6)"))
    return out


def even_uniform_optimality(seed: int = 7, draws: int = 500):
    """Uniform chain is LW-optimal among symmetric path chains for even n."""
    rng = np.random.default_rng(seed)
    out = []
    for n in (2, 4, 6):
        unif = tmix_closed(bd_params(uniform_chain(n)), np.full(n + 1, 1 / (n + 1))).value
        gap = _random_feasible_beats(rng, n, unif, draws)
        out.append(CheckResult(f"even_uniform_optimality.n{n}", gap >= -1e-12,
                               f"T_mix(uniform) {unif:.6f}, min random gap {gap:.3e}"))
    return out


def _ladder_values(n):
    pi = np.full(n + 1, 1 / (n + 1))
    k = np.arange(n)
    para = (k + 1) * (n - k)
    sqrt_w = budgeted_min_tmix(pi, 1 / (n + 1))
    flat = symmetric_bd(np.full(n, 1 / n))
    parab = symmetric_bd(para / para.sum())
    return {name: (kern, tmix_closed(bd_params(kern), pi).value)
            for name, kern in (("sqrt", sqrt_w), ("flat", flat), ("parabolic", parab))}, pi


def ladder(seed: int = 8, n_max: int = 50, n_asym: int = 400):
    """Square-root rung weights are LW-optimal; flat and parabolic rungs tie."""
    out = []
    beats, ties, oracle = True, True, 0.0
    notes = []
    for n in range(2, n_max + 1):
        vals, pi = _ladder_values(n)
        s, f, p = vals["sqrt"][1], vals["flat"][1], vals["parabolic"][1]
        same = np.allclose(np.asarray(vals["sqrt"][0]), np.asarray(vals["flat"][0]), atol=1e-15, rtol=0)
        if same:
            # n = 2: all three weightings are the same chain
            beats &= abs(s - f) <= 1e-12 and abs(s - p) <= 1e-12
            notes.append(f"n={n} all weightings coincide")
        else:
            beats &= s < f - 1e-9 and s < p - 1e-9
        formula = n * n * (n + 2) / 6
        ties &= abs(f - formula) <= 1e-9 * formula and abs(p - formula) <= 1e-9 * formula
        if n <= 12 or n == n_max:
            for kern, v in vals.values():
                oracle = max(oracle, abs(tmix_oracle(kern, pi).value - v) / v)
    out.append(CheckResult("ladder.sqrt_beats", bool(beats),
                           f"n=2..{n_max}; " + ("; ".join(notes) or "strict everywhere")))
    out.append(CheckResult("ladder.flat_equals_parabolic", bool(ties and oracle <= 1e-9),
                           f"both equal n^2(n+2)/6; max relative oracle gap {oracle:.2e}"))
    pi = np.full(n_asym + 1, 1 / (n_asym + 1))
    val = tmix_closed(bd_params(budgeted_min_tmix(pi, 1 / (n_asym + 1))), pi).value
    ratio = val / n_asym**3
    target = math.pi**2 / 64
    out.append(CheckResult("ladder.asymptotic", abs(ratio / target - 1) <= 0.02,
                           f"n={n_asym}: T_mix/n^3 = {ratio:.6f} vs pi^2/64 = {target:.6f}"))
    return out


def slem_results(seed: int = 9, draws: int = 500, n_max: int = 50):
    """Biased-walk spectrum in closed form; uniform chain minimizes SLEM."""
    rng = np.random.default_rng(seed)
    dev = 0.0
    for rho in (0.25, 0.5, 1.0, 2.0, 4.0):
        for n in range(1, n_max + 1):
            k = biased_rw(rho, n)
            got = spectrum_reversible(k, k.stationary).eigenvalues
            dev = max(dev, float(np.max(np.abs(got - np.sort(biased_rw_eigenvalues(rho, n))[::-1]))))
    gap = math.inf
    for _ in range(draws):
        n = int(rng.integers(1, 7))
        k = samplers.random_symmetric(rng, n)
        pi = np.full(n + 1, 1 / (n + 1))
        gap = min(gap, slem(k, pi) - slem(uniform_chain(n), pi))
    return [
        CheckResult("slem.biased_rw_spectrum", dev <= 1e-8, f"n<={n_max}, max deviation {dev:.3e}"),
        CheckResult("slem.uniform_minimal", gap >= -1e-12, f"{draws} kernels, min gap {gap:.3e}"),
    ]


def censoring(seed: int = 10, ds_samples: int = 200):
    """Single-site updates sit below the identity; systematic scans below random ones."""
    rng = np.random.default_rng(seed)
    out = []
    space = SpinSpace.grid(2, 2)
    ideals = enumerate_down_sets(space.poset)
    pw_worst, scan_worst, mono = -math.inf, -math.inf, True
    for beta in (0.2, 0.5, 1.0):
        pi = ising_pmf(space, beta)
        mono &= is_monotone_system(space, pi)
        eye = identity_kernel(len(space))
        for v in range(space.n_sites):
            kv = spin_site_kernel(space, pi, v)
            mono &= is_monotone(kv, space.poset, down_sets=ideals)
            pw_worst = max(pw_worst, compare(kv, eye, pi, space.poset, down_sets=ideals).worst_violation)
        syst, rand = scan_kernels(space, pi)
        scan_worst = max(scan_worst, compare(syst, rand, pi, space.poset, down_sets=ideals).worst_violation)
    out.append(CheckResult("censoring.spin_site", pw_worst <= TOL and mono,
                           f"2x2 Ising, beta in (0.2, 0.5, 1.0): worst {pw_worst:.3e}, monotone {mono}"))
    out.append(CheckResult("censoring.systematic_vs_random", scan_worst <= TOL,
                           f"worst violation {scan_worst:.3e}"))
    card_worst, card_mono = -math.inf, True
    for n in (3, 4):
        poset = bruhat_poset(n)
        ideals_n = enumerate_down_sets(poset)
        for p in (0.3, 0.5, 0.7):
            for i in range(1, n):
                k = shuffle_site_kernel(n, i, p)
                card_mono &= is_monotone(k, poset, down_sets=ideals_n)
                res = compare(k, identity_kernel(k.n_states), k.stationary, poset, down_sets=ideals_n)
                card_worst = max(card_worst, res.worst_violation)
    out.append(CheckResult("censoring.cards", card_worst <= TOL and card_mono,
                           f"S3, S4, p in (0.3, 0.5, 0.7): worst {card_worst:.3e}, monotone {card_mono}"))
    ds_worst = -math.inf
    for _ in range(ds_samples):
        size = int(rng.integers(2, 9))
        k = doubly_stochastic_sample(size, int(rng.integers(2**31)), int(rng.integers(1, 6)))
        ds_worst = max(ds_worst, compare(k, identity_kernel(size), np.full(size, 1 / size),
                                         Poset.chain(size)).worst_violation)
    out.append(CheckResult("censoring.doubly_stochastic", ds_worst <= TOL,
                           f"{ds_samples} kernels, worst {ds_worst:.3e}"))
    return out


def reverse_scan_bound(seed: int = 11):
    """Experimental: ``K_rand^nu <= p K_syst + (1 - p) I`` with ``p = prod_v p_v``."""
    rng = np.random.default_rng(seed)
    out = []
    systems = [("2x2", SpinSpace.grid(2, 2)), ("1x3", SpinSpace.grid(1, 3)), ("1x2", SpinSpace.grid(1, 2))]
    for label, space in systems:
        ideals = enumerate_down_sets(space.poset)
        worst = -math.inf
        for beta in (0.2, 0.5, 1.0):
            pi = ising_pmf(space, beta)
            for weights in (None, rng.dirichlet(np.ones(space.n_sites))):
                syst, rand = scan_kernels(space, pi, weights=weights)
                wts = np.full(space.n_sites, 1 / space.n_sites) if weights is None else weights
                p = float(np.prod(wts))
                right = mixture(p, identity_kernel(len(space), pi), syst)
                left = rand.power(space.n_sites)
                worst = max(worst, compare(left, right, pi, space.poset, down_sets=ideals).worst_violation)
        out.append(CheckResult(f"reverse_scan_bound.{label}", worst <= TOL, f"worst violation {worst:.3e}"))
    return out


def distance_orderings(seed: int = 12, instances: int = 50, horizon: int = 500):
    """Uniform chain beats monotone symmetric chains; fastest log-concave chain beats uniform in sep."""
    rng = np.random.default_rng(seed)
    worst = {"tv": -math.inf, "sep": -math.inf, "l2": -math.inf}
    for _ in range(instances):
        n = int(rng.integers(1, 9))
        l = symmetric_bd(samplers.monotone_symmetric_p(rng, n))
        a = trace(uniform_chain(n), _delta0(n + 1), horizon)
        b = trace(l, _delta0(n + 1), horizon)
        for m in worst:
            worst[m] = max(worst[m], float(np.max(a.column(m) - b.column(m))))
    sep_worst = -math.inf
    for _ in range(instances):
        n = int(rng.integers(1, 9))
        pi = samplers.logconcave_pmf(rng, n + 1)
        fast = fmmc_logconcave(pi).kernel(pi)
        a = trace(fast, _delta0(n + 1), horizon, pi).sep
        b = trace(uniform_chain(n), _delta0(n + 1), horizon).sep
        sep_worst = max(sep_worst, float(np.max(a - b)))
    w = max(worst.values())
    return [
        CheckResult("distance_orderings.uniform_fastest", w <= TOL,
                    ", ".join(f"{m} {v:.3e}" for m, v in worst.items())),
        CheckResult("distance_orderings.logconcave_vs_uniform", sep_worst <= TOL,
                    f"sep worst {sep_worst:.3e}"),
    ]


SUITES: dict[str, Callable[..., list]] = {
    "path_majorization": path_majorization,
    "product_preservation": product_preservation,
    "ssd_identity": ssd_identity,
    "tmix_agreement": tmix_agreement,
    "sep_sum_identity": sep_sum_identity,
    "theta_optimality": theta_optimality,
    "even_uniform_optimality": even_uniform_optimality,
    "ladder": ladder,
    "slem_results": slem_results,
    "censoring": censoring,
    "distance_orderings": distance_orderings,
    "reverse_scan_bound": reverse_scan_bound,
}

EXPERIMENTAL = frozenset({"reverse_scan_bound"})


def suite_names() -> list[str]:
    return list(SUITES)


def run(name: str, seed=None) -> tuple[list[CheckResult], float]:
    """Run one suite; returns its results and the wall time in seconds."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    start = time.perf_counter()
    results = SUITES[name]() if seed is None else SUITES[name](seed=seed)
    return results, time.perf_counter() - start

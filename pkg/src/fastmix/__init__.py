"""Fastest-mixing Markov chains on paths and posets, checked by comparison inequalities.

Submodules:

- ``core``: pmfs, kernels, posets and elementary kernel algebra
- ``orders``: down-sets, monotonicity, the comparison order, majorization
- ``chains``: birth-and-death families and mixing-time optimal chains
- ``mixing``: distances from stationarity and their time traces
- ``duality``: strong stationary duals, hitting times, Lovasz-Winkler mixing time
- ``spectral``: spectra, SLEM and relaxation time of reversible kernels
- ``structures``: card-shuffling and spin-system testbeds
- ``verify``: named property suites
"""

from .core import (FastmixError, Kernel, NumericalError, Pmf, Poset, ReducibleError, ValidationError,
                   direct_sum, evolve, identity_kernel, mixture, stationary, time_reversal,
                   trivial_kernel)
from .orders import (ComparisonReport, DownSetLimitError, compare, dominates, enumerate_down_sets,
                     has_positive_correlations, is_monotone, majorizes)
from .chains import (BdParams, WParams, biased_rw, budgeted_min_tmix, fmmc_logconcave, fmmc_lw,
                     from_w, lw_optimal_path, symmetric_bd, uniform_chain)
from .mixing import DistanceTrace, distance, majorization_trace, trace
from .duality import (DualChain, TmixReport, dual_survival, hitting_time_mean, sep_sum, ssd_dual,
                      tmix_closed, tmix_oracle)
from .spectral import Spectrum, relaxation_time, slem, spectrum_reversible
from .structures import (PermutationSpace, SpinSpace, bruhat_poset, doubly_stochastic_sample,
                         ising_pmf, scan_kernels, shuffle_site_kernel, spin_site_kernel)

__version__ = "0.1.0"

"""Command-line interface: chain specs in, verdicts, reports and CSV traces out.

A chain spec is a JSON object with a ``kind`` and that kind's parameters::

    {"kind": "uniform", "n": 2}
    {"kind": "symmetric_bd", "p": [0.3, 0.3]}
    {"kind": "fmmc_logconcave", "pi": [0.2, 0.5, 0.3]}
    {"kind": "biased_rw", "rho": 2, "n": 3}
    {"kind": "from_w", "w": [0.1, 0.1], "pi": [0.3, 0.3, 0.4]}
    {"kind": "lw_optimal", "n": 3}
    {"kind": "budgeted", "pi": [...], "c": 0.2}          (or "n" for uniform pi)
    {"kind": "shuffle_site", "n": 3, "i": 1, "p": 0.7}
    {"kind": "spin_site", "rows": 2, "cols": 2, "beta": 0.5, "site": 0}
    {"kind": "raw", "matrix": [[...]], "stationary": [...], "poset": {...}}

``build`` prints a raw spec, so its output can be fed back to every other
subcommand.  Exit codes: 0 success, 1 failed verification, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import verify as verify_mod
from .chains import (biased_rw, bd_params, budgeted_min_tmix, budgeted_tmix_value, fmmc_logconcave,
                     fmmc_lw, from_w, lw_optimal_path, symmetric_bd, uniform_chain, WParams)
from .core import (FastmixError, Kernel, NumericalError, Pmf, Poset, ValidationError, _is_tridiagonal,
                   is_irreducible, is_reversible, is_stationary, stationary)
from .duality import DEFAULT_SEED, dual_survival, ssd_dual, tmix_closed, tmix_oracle
from .mixing import trace
from .orders import DEFAULT_CAP, compare, enumerate_down_sets, is_monotone
from .spectral import relaxation_time, slem, spectrum_reversible
from .structures import SpinSpace, bruhat_poset, ising_pmf, shuffle_site_kernel, spin_site_kernel

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3
TRACE_COLUMNS = ("tv", "sep", "l2", "linf", "hellinger", "kl_fwd", "kl_rev")


@dataclass
class Model:
    kernel: Kernel
    pi: Optional[np.ndarray]
    poset: Poset
    poset_doc: dict
    extra: dict


def _require(doc, *keys):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ValidationError(f"spec of kind {doc.get('kind')!r} needs {', '.join(missing)}")
    return [doc[k] for k in keys]


def _poset_from_doc(doc, size) -> Poset:
    kind = doc.get("type", "chain")
    if kind == "chain":
        return Poset.chain(size)
    if kind == "bruhat":
        return bruhat_poset(int(doc["n"]))
    if kind == "product":
        return Poset.product([int(s) for s in doc["sizes"]])
    if kind == "leq":
        return Poset(np.array(doc["leq"], dtype=bool))
    raise ValidationError(f"unknown poset type {kind!r}")


def _pi_or_none(kernel: Kernel):
    if kernel.stationary is not None:
        return kernel.stationary.weights
    if not is_irreducible(np.asarray(kernel)):
        return None
    return stationary(kernel).weights


def load_model(doc: dict) -> Model:
    """Build the kernel, stationary pmf and state-space order named by a chain spec."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("chain spec must be a JSON object with a 'kind'")
    kind = doc["kind"]
    extra = {}
    poset_doc = {"type": "chain"}
    if kind == "uniform":
        (n,) = _require(doc, "n")
        k = uniform_chain(int(n))
    elif kind == "symmetric_bd":
        (p,) = _require(doc, "p")
        k = symmetric_bd(p)
    elif kind == "fmmc_logconcave":
        (pi,) = _require(doc, "pi")
        pmf = Pmf.from_weights(pi)
        k = fmmc_logconcave(pmf).kernel(pmf)
    elif kind == "biased_rw":
        rho, n = _require(doc, "rho", "n")
        k = biased_rw(float(rho), int(n))
    elif kind == "from_w":
        w, pi = _require(doc, "w", "pi")
        k = from_w(WParams(w, Pmf.from_weights(pi)))
    elif kind == "lw_optimal":
        (n,) = _require(doc, "n")
        k = lw_optimal_path(int(n))
    elif kind == "budgeted":
        (c,) = _require(doc, "c")
        if "pi" in doc:
            pmf = Pmf.from_weights(doc["pi"])
        else:
            (n,) = _require(doc, "n")
            pmf = Pmf.uniform(int(n) + 1)
        k = budgeted_min_tmix(pmf, float(c))
        extra["budget_formula"] = budgeted_tmix_value(pmf, float(c))
    elif kind == "shuffle_site":
        n, i, p = _require(doc, "n", "i", "p")
        k = shuffle_site_kernel(int(n), int(i), float(p))
        poset_doc = {"type": "bruhat", "n": int(n)}
    elif kind == "spin_site":
        rows, cols, beta, site = _require(doc, "rows", "cols", "beta", "site")
        space = SpinSpace.grid(int(rows), int(cols), int(doc.get("spins", 2)))
        k = spin_site_kernel(space, ising_pmf(space, float(beta)), int(site))
        poset_doc = {"type": "product", "sizes": [space.n_spins] * space.n_sites}
    elif kind == "raw":
        (matrix,) = _require(doc, "matrix")
        st = doc.get("stationary")
        k = Kernel(np.array(matrix, dtype=float),
                   stationary=None if st is None else Pmf(np.array(st, dtype=float), positive=True))
        poset_doc = doc.get("poset", {"type": "chain"})
    else:
        raise ValidationError(f"unknown chain kind {kind!r}")
    poset = _poset_from_doc(poset_doc, k.n_states)
    if poset.size != k.n_states:
        raise ValidationError("poset size does not match the kernel")
    return Model(k, _pi_or_none(k), poset, poset_doc, extra)


def _read_doc(source: str):
    try:
        if source == "-":
            return json.load(sys.stdin)
        with open(source, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"cannot parse spec {source!r}: {exc}") from exc
    except OSError as exc:
        raise ValidationError(f"cannot read spec {source!r}: {exc.strerror}") from exc


def _fmt(x: float, precision: int) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.{precision}g}"


def _csv(header, rows, precision) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, (int, np.integer, str)) else _fmt(float(v), precision)
                              for v in row))
    return "\n".join(lines) + "\n"


def _start_pmf(start: str, model: Model) -> np.ndarray:
    size = model.kernel.n_states
    if start == "pi":
        if model.pi is None:
            raise ValidationError("kernel has no unique stationary pmf to start from")
        return model.pi.copy()
    try:
        i = int(start)
    except ValueError as exc:
        raise ValidationError(f"--start must be a state index or 'pi', got {start!r}") from exc
    if not 0 <= i < size:
        raise ValidationError(f"--start {i} out of range 0..{size - 1}")
    return Pmf.point_mass(size, i).weights


def _need_pi(model: Model) -> np.ndarray:
    if model.pi is None:
        raise ValidationError("kernel is reducible; no unique stationary pmf")
    return model.pi


def cmd_build(args) -> str:
    model = load_model(_read_doc(args.spec))
    m = np.asarray(model.kernel)
    pi = model.pi
    mono = is_monotone(model.kernel, model.poset, args.tol, cap=args.cap_downsets)
    out = {
        "kind": "raw",
        "matrix": m.tolist(),
        "stationary": None if pi is None else pi.tolist(),
        "poset": model.poset_doc,
        "monotone": bool(mono),
        "reversible": None if pi is None else bool(is_reversible(m, pi)),
    }
    out.update(model.extra)
    return json.dumps(out) + "\n"


def cmd_trace(args) -> str:
    model = load_model(_read_doc(args.spec))
    pi = _need_pi(model)
    cols = [c.strip() for c in args.metrics.split(",") if c.strip()]
    bad = [c for c in cols if c not in TRACE_COLUMNS]
    if bad or not cols:
        raise ValidationError(f"unknown metrics {bad}; choose from {','.join(TRACE_COLUMNS)}")
    if args.horizon < 0:
        raise ValidationError("--horizon must be nonnegative")
    tr = trace(model.kernel, _start_pmf(args.start, model), args.horizon, pi)
    rows = [[t] + [tr.column(c)[t] for c in cols] for t in range(args.horizon + 1)]
    return _csv(["t"] + cols, rows, args.precision)


def _mask_list(mask) -> str:
    return "[" + " ".join(str(i) for i in np.nonzero(mask)[0]) + "]"


def cmd_compare(args) -> str:
    a, b = load_model(_read_doc(args.spec_a)), load_model(_read_doc(args.spec_b))
    pi = _need_pi(a)
    if a.kernel.n_states != b.kernel.n_states:
        raise ValidationError("kernels act on different state spaces")
    if not is_stationary(b.kernel, pi):
        raise ValidationError("kernels do not share a stationary pmf")
    poset = a.poset if args.poset == "auto" else _poset_from_doc({"type": "chain"}, a.kernel.n_states)
    ideals = enumerate_down_sets(poset, args.cap_downsets)
    ab = compare(a.kernel, b.kernel, pi, poset, args.tol, down_sets=ideals)
    ba = compare(b.kernel, a.kernel, pi, poset, args.tol, down_sets=ideals)
    verdict = {(True, True): "equal", (True, False): "A<=B",
               (False, True): "B<=A", (False, False): "incomparable"}[(ab.holds, ba.holds)]
    lines = [verdict]
    for label, rep in (("A<=B", ab), ("B<=A", ba)):
        d, e = rep.witness
        lines.append(f"{label} worst_violation={_fmt(rep.worst_violation, args.precision)} "
                     f"D={_mask_list(d)} E={_mask_list(e)}")
    return "\n".join(lines) + "\n"


def cmd_tmix(args) -> str:
    model = load_model(_read_doc(args.spec))
    pi = _need_pi(model)
    m = np.asarray(model.kernel)
    rows = []
    methods = ["closed_form", "first_step"] if args.method == "auto" else [args.method]
    for method in methods:
        if method == "closed_form":
            if not _is_tridiagonal(m):
                if args.method == "auto":
                    continue
                raise ValidationError("closed form applies to path chains only")
            rep = tmix_closed(bd_params(model.kernel), pi)
        elif method == "first_step":
            rep = tmix_oracle(model.kernel, pi)
        else:
            rep = tmix_oracle(model.kernel, pi, "monte_carlo", samples=args.samples, seed=args.seed)
        rows.append([rep.method, rep.value, "" if rep.se is None else rep.se])
    if "budget_formula" in model.extra:
        rows.append(["budget_formula", model.extra["budget_formula"], ""])
    lines = ["method,value,se"]
    for name, value, se in rows:
        lines.append(f"{name},{_fmt(value, args.precision)},{'' if se == '' else _fmt(se, args.precision)}")
    return "\n".join(lines) + "\n"


def cmd_dual(args) -> str:
    model = load_model(_read_doc(args.spec))
    pi = _need_pi(model)
    dual = ssd_dual(bd_params(model.kernel), pi)
    if args.horizon is None:
        rows = [[i, dual.q_star[i], dual.p_star[i]] for i in range(dual.n + 1)]
        return _csv(["i", "q_star", "p_star"], rows, args.precision)
    surv = dual_survival(dual, args.horizon)
    sep = trace(model.kernel, Pmf.point_mass(dual.n + 1, 0), args.horizon, pi).sep
    return _csv(["t", "survival", "sep"], [[t, surv[t], sep[t]] for t in range(args.horizon + 1)],
                args.precision)


def cmd_optimize(args) -> str:
    doc = _read_doc(args.spec)
    if not isinstance(doc, dict) or "pi" not in doc:
        raise ValidationError("optimization problem needs a 'pi' vector")
    pmf = Pmf.from_weights(doc["pi"])
    if args.problem == "fmmc_lw":
        kernel, w_star, value = fmmc_lw(pmf)
        extra = {"w_star": w_star, "tmix": value}
    else:
        if "c" not in doc:
            raise ValidationError("budgeted problem needs a budget 'c'")
        kernel = budgeted_min_tmix(pmf, float(doc["c"]))
        value = budgeted_tmix_value(pmf, float(doc["c"]))
        extra = {"tmix": value}
    pi = _pi_or_none(kernel)
    out = {"kind": "raw", "matrix": np.asarray(kernel).tolist(),
           "stationary": None if pi is None else pi.tolist(), "poset": {"type": "chain"}}
    out.update(extra)
    return json.dumps(out) + "\n"


def cmd_spectrum(args) -> str:
    model = load_model(_read_doc(args.spec))
    pi = _need_pi(model)
    if args.slem:
        return _csv(["slem", "relaxation_time"],
                    [[slem(model.kernel, pi), relaxation_time(model.kernel, pi)]], args.precision)
    vals = spectrum_reversible(model.kernel, pi).eigenvalues
    return _csv(["k", "eigenvalue"], [[k, v] for k, v in enumerate(vals)], args.precision)


def cmd_verify(args) -> tuple[str, int]:
    names = args.suites or [s for s in verify_mod.suite_names() if s not in verify_mod.EXPERIMENTAL]
    lines, ok = [], True
    for name in names:
        try:
            results, secs = verify_mod.run(name, args.seed)
        except KeyError as exc:
            raise ValidationError(str(exc.args[0])) from exc
        for r in results:
            lines.append(r.line())
            ok &= r.passed
        lines.append(f"# {name} finished in {secs:.1f}s")
    return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--precision", type=int, default=9, help="significant digits in CSV (1..17)")
    common.add_argument("--tol", type=float, default=1e-10, help="comparison tolerance")
    common.add_argument("--cap-downsets", type=int, default=DEFAULT_CAP, dest="cap_downsets",
                        help="maximum number of down-sets to enumerate")
    common.add_argument("--seed", type=int, default=None, help="random seed")

    parser = argparse.ArgumentParser(prog="fastmix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="print the kernel of a chain spec")
    p.add_argument("spec", nargs="?", default="-", help="spec file, or - for stdin")

    p = sub.add_parser("trace", parents=[common], help="CSV of distances from stationarity over time")
    p.add_argument("spec", nargs="?", default="-")
    p.add_argument("--start", default="0", help="initial state index, or 'pi'")
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--metrics", default=",".join(TRACE_COLUMNS))

    p = sub.add_parser("compare", parents=[common], help="comparison-order verdict for two chains")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--poset", choices=("auto", "chain"), default="auto")

    p = sub.add_parser("tmix", parents=[common], help="Lovasz-Winkler mixing time from state 0")
    p.add_argument("spec", nargs="?", default="-")
    p.add_argument("--method", choices=("auto", "closed_form", "first_step", "monte_carlo"), default="auto")
    p.add_argument("--samples", type=int, default=10**6)

    p = sub.add_parser("dual", parents=[common], help="strong stationary dual of a path chain")
    p.add_argument("spec", nargs="?", default="-")
    p.add_argument("--horizon", type=int, default=None, help="emit survival vs separation instead")

    p = sub.add_parser("optimize", parents=[common], help="LW-optimal path chain for a given pi")
    p.add_argument("problem", choices=("fmmc_lw", "budgeted"))
    p.add_argument("spec", nargs="?", default="-", help="JSON with 'pi' (and 'c' for budgeted)")

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues of a reversible kernel")
    p.add_argument("spec", nargs="?", default="-")
    p.add_argument("--slem", action="store_true", help="print SLEM and relaxation time only")

    p = sub.add_parser("verify", parents=[common], help="run named property suites")
    p.add_argument("suites", nargs="*", help=f"any of: {', '.join(verify_mod.suite_names())}")
    return parser


COMMANDS = {"build": cmd_build, "trace": cmd_trace, "compare": cmd_compare, "tmix": cmd_tmix,
            "dual": cmd_dual, "optimize": cmd_optimize, "spectrum": cmd_spectrum, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not 1 <= args.precision <= 17:
        print("error: --precision must lie in 1..17", file=sys.stderr)
        return EXIT_INVALID
    if args.command == "tmix" and args.seed is None:
        args.seed = DEFAULT_SEED
    try:
        result = COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (FastmixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``pricedquery <command> [options]``.

Exit codes: 0 success, 1 configuration or capacity error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import boolfn as bf
from . import kernels, oracle, report, trees, verify
from .corpus import COST_KINDS, corpus_instances, generate_costs
from .errors import CapacityError, PricedQueryError
from .influence import (
    argmax_cost_weighted_influence,
    bias_exact,
    influence_profile_estimate,
    influence_profile_exact,
)
from .rng import stream
from .strategy import SDiamond, SStar, estimate_strategy_stats, find_budget

EXACT_MAX_FREE = 12

SHORTHANDS = {
    "and": (1, lambda n: bf.and_fn(n)),
    "or": (1, lambda n: bf.or_fn(n)),
    "parity": (1, lambda n: bf.parity(n)),
    "majority": (1, lambda n: bf.majority(n)),
    "dictator": (2, lambda n, i: bf.dictator(n, i - 1)),
    "tribes": (2, lambda w, s: bf.tribes(w, s)),
    "constant": (2, lambda n, v: bf.constant(n, v)),
}


class UsageError(PricedQueryError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors share exit status 1 with configuration errors; 2 is reserved for failed checks
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def load_function(arg: str) -> bf.BoolFn:
    """JSON text, a path to a JSON file, or a shorthand such as ``and:2`` or ``tribes:2:2``."""
    text = arg.strip()
    if text.startswith("{"):
        return bf.parse_spec(text)
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return bf.parse_spec(fh.read())
    name, _, rest = text.partition(":")
    if name not in SHORTHANDS:
        raise UsageError(f"--f: {arg!r} is neither JSON, an existing file, nor a shorthand "
                         f"({', '.join(sorted(SHORTHANDS))})")
    arity, make = SHORTHANDS[name]
    try:
        params = [int(v) for v in rest.split(":")] if rest else []
    except ValueError:
        raise UsageError(f"--f: shorthand parameters must be integers in {arg!r}") from None
    if len(params) != arity:
        raise UsageError(f"--f: {name} takes {arity} integer parameter(s)")
    return make(*params)


def parse_costs(arg: str, n: int, seed: int) -> bf.CostVector:
    """``unit``, an explicit list ``1,4``, ``uniform:M``, ``power_law:M`` or ``spike:j:factor`` (j 1-based)."""
    name, _, rest = arg.partition(":")
    if name in COST_KINDS:
        try:
            params = [int(v) for v in rest.split(":")] if rest else []
        except ValueError:
            raise UsageError(f"--costs: parameters must be integers in {arg!r}") from None
        if name in ("uniform", "power_law"):
            return generate_costs(name, n, seed, M=params[0] if params else 8)
        if name == "spike":
            if len(params) != 2:
                raise UsageError("--costs: spike needs spike:j:factor")
            return generate_costs("spike", n, seed, j=params[0] - 1, factor=params[1])
        return generate_costs("unit", n, seed)
    try:
        values = [int(v) for v in arg.split(",")]
    except ValueError:
        raise UsageError(f"--costs: cannot parse {arg!r}") from None
    return bf.CostVector(values).check_arity(n)


def parse_fraction(text, name):
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{name}: cannot parse {text!r} as a number") from None
    return v


def _emit(args, rows, columns, exact=()):
    out = report.render(rows, columns, args.format, args.command, exact)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _total_influence(f, seed):
    if f.n <= bf.MAX_TABLE_ARITY:
        return influence_profile_exact(f).total
    return influence_profile_estimate(f, 0.05, 0.05, seed).total


def run_row(f, costs, strategy, eps, budget, seed, samples=20000, exact_max=EXACT_MAX_FREE,
            with_opt=True, instance=""):
    """One report row for strategy ``strategy`` ("s_star" or "s_diamond") on ``(f, costs)``."""
    inf = _total_influence(f, seed)
    B = None
    if strategy == "s_star":
        if budget == "auto":
            B = find_budget(f, costs, float(eps), seed=seed).budget
        else:
            B = Fraction(budget)
        S = SStar(f, costs, B, seed=seed)
    elif strategy == "s_diamond":
        S = SDiamond(f, costs, eps, seed=seed)
    else:
        raise UsageError(f"unknown strategy {strategy!r}")
    if len(f.free) <= exact_max:
        stats, method = oracle.strategy_stats_exact(S), "exact"
    else:
        stats, method = estimate_strategy_stats(S, samples, seed), "monte_carlo"
    opt_e = opt_w = ratio = None
    if with_opt and len(f.free) <= oracle.MAX_FREE_WITH_ERROR:
        opt_e = oracle.opt_expected_eps(f, costs, eps).value
        opt_w = oracle.opt_worst_eps(f, costs, eps).value
        scale = opt_e * Fraction(inf) / eps ** 2
        if scale > 0:
            ratio = Fraction(stats.expected_cost) / scale
    return {
        "instance": instance or bf.dump_spec(f), "n": f.n, "kind": f.kind, "strategy": strategy,
        "sum_c": costs.total, "inf": inf, "eps": eps, "B": B, "error": stats.error,
        "expected_cost": stats.expected_cost, "opt_expected": opt_e, "opt_worst": opt_w,
        "bound_ratio": ratio, "method": method, "seed": seed,
    }


def cmd_influence(args):
    f = load_function(args.f)
    costs = parse_costs(args.costs, f.n, args.seed)
    if args.estimate:
        prof = influence_profile_estimate(f, args.tau, args.delta, args.seed)
        mode = "estimated"
    else:
        prof = influence_profile_exact(f)
        mode = "exact"
    best = argmax_cost_weighted_influence(f, costs, mode, args.tau, args.delta, args.seed) if f.free else None
    rows = []
    for i in range(f.n):
        v = prof.per_coordinate[i]
        rows.append({"coord": i + 1, "influence": v, "cost": costs[i],
                     "ratio": Fraction(v) / costs[i] if mode == "exact" else v / costs[i],
                     "argmax": i == best})
    rows.append({"coord": "total", "influence": prof.total})
    if mode == "exact":
        rows.append({"coord": "bias", "influence": bias_exact(f)})
    _emit(args, rows, ("coord", "influence", "cost", "ratio", "argmax"))
    return 0


def cmd_run(args):
    f = load_function(args.f)
    costs = parse_costs(args.costs, f.n, args.seed)
    eps = parse_fraction(args.eps, "--eps")
    budget = args.budget if args.budget == "auto" else parse_fraction(args.budget, "--budget")
    row = run_row(f, costs, args.strategy, eps, budget, args.seed, args.samples, args.exact_max, not args.no_opt)
    _emit(args, [row], report.RUN_COLUMNS)
    return 0


def cmd_opt(args):
    f = load_function(args.f)
    costs = parse_costs(args.costs, f.n, args.seed)
    k = args.k if args.k is not None else oracle.errors_allowed(f, parse_fraction(args.eps, "--eps"))
    objectives = ("expected", "worst") if args.objective == "both" else (args.objective,)
    rows = []
    for obj in objectives:
        res = oracle.opt_expected(f, costs, k) if obj == "expected" else oracle.opt_worst(f, costs, k)
        rows.append({"objective": obj, "k": k, "value": res.value,
                     "witness": json.dumps(trees.to_json(res.witness), sort_keys=True)})
    _emit(args, rows, ("objective", "k", "value", "witness"), exact=("value",))
    return 0


def cmd_budget(args):
    f = load_function(args.f)
    costs = parse_costs(args.costs, f.n, args.seed)
    eps = float(parse_fraction(args.eps, "--eps"))
    res = find_budget(f, costs, eps, m=args.samples, delta=args.delta, seed=args.seed)
    exact = oracle.strategy_stats_exact(res.strategy).error if len(f.free) <= args.exact_max else None
    history = ";".join(f"{report.rational(b)}:{format(e, '.12g')}" for b, e in res.history)
    _emit(args, [{"B": res.budget, "estimated_error": res.error, "exact_error": exact,
                  "doublings": res.doublings, "samples": res.samples, "history": history, "seed": args.seed}],
          ("B", "estimated_error", "exact_error", "doublings", "samples", "history", "seed"))
    return 0


def cmd_verify(args):
    rows = verify.run_suite(args.suite, args.max_n, args.seed)
    rows.sort(key=lambda r: (r["suite"], r["instance"], r["check"]))
    _emit(args, rows, report.VERIFY_COLUMNS, exact=("lhs", "rhs"))
    failed = [r for r in rows if not r["holds"]]
    print(f"{len(rows)} checks, {len(failed)} failed", file=sys.stderr)
    return 2 if failed else 0


def _bench_kernels(args):
    if kernels.compiled_backend is None:
        raise CapacityError("the compiled kernel extension is not built")
    rows = []
    rng = stream(args.seed, "bench-kernels")
    for n in range(4, args.max_n + 1):
        table = (rng.random(1 << n) < 0.5).astype(np.uint8)
        costs = rng.integers(1, 9, size=n).astype(np.int64)
        K = min(args.k, 1 << (n - 1))
        for worst in (False, True):
            times = {}
            for name, mod in (("python", kernels.python_backend), ("compiled", kernels.compiled_backend)):
                start = time.perf_counter()
                ones = np.asarray(mod.subcube_ones(table, n))
                mod.opt_table(ones, n, costs, K, worst)
                times[name] = time.perf_counter() - start
            for name, t in times.items():
                rows.append({"n": n, "K": K, "objective": "worst" if worst else "expected",
                             "backend": name, "seconds": t, "speedup": times["python"] / t})
    _emit(args, rows, ("n", "K", "objective", "backend", "seconds", "speedup"))
    return 0


def cmd_bench(args):
    if args.kernels:
        return _bench_kernels(args)
    eps = parse_fraction(args.eps, "--eps")
    rows = []
    for spec, f, costs in corpus_instances(args.seed, args.cost_kind):
        if f.n > args.max_n:
            continue
        label = f"{spec.label()} c={','.join(map(str, costs))}"
        for strategy in ("s_diamond", "s_star"):
            rows.append(run_row(f, costs, strategy, eps, "auto", args.seed, args.samples,
                                args.exact_max, True, label))
    _emit(args, rows, report.RUN_COLUMNS)
    return 0


def build_parser():
    parser = _Parser(prog="pricedquery",
                                     description="Query strategies for Boolean functions with priced coordinates.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, function=True, seed_required=True):
        if function:
            p.add_argument("--f", required=True,
                           help="function: JSON spec text, a path to one, or a shorthand like and:2, tribes:2:2")
            p.add_argument("--costs", default="unit",
                           help="unit | 1,4,... | uniform:M | power_law:M | spike:j:factor (default unit)")
        p.add_argument("--seed", type=int, required=seed_required, default=0, help="root random seed")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("influence", help="per-coordinate influences and the cost-weighted argmax")
    common(p, seed_required=False)
    p.add_argument("--estimate", action="store_true", help="Monte Carlo estimates instead of exact values")
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=0.05)
    p.set_defaults(handler=cmd_influence)

    p = sub.add_parser("run", help="exact or sampled statistics of one strategy")
    common(p)
    p.add_argument("--strategy", choices=("s_star", "s_diamond"), default="s_star")
    p.add_argument("--eps", default="0.1")
    p.add_argument("--budget", default="auto", help="integer or rational budget, or auto (budget search)")
    p.add_argument("--samples", type=int, default=20000, help="Monte Carlo samples when not exact")
    p.add_argument("--exact-max", type=int, default=EXACT_MAX_FREE,
                   help="largest number of free coordinates evaluated exactly")
    p.add_argument("--no-opt", action="store_true", help="skip the optimal-tree columns")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("opt", help="optimal deterministic trees for a misclassification allowance")
    common(p, seed_required=False)
    p.add_argument("--eps", default="0")
    p.add_argument("--k", type=int, help="misclassified-input allowance (overrides --eps)")
    p.add_argument("--objective", choices=("expected", "worst", "both"), default="both")
    p.set_defaults(handler=cmd_opt)

    p = sub.add_parser("budget", help="doubling search for a budget with estimated error below eps")
    common(p)
    p.add_argument("--eps", default="0.1")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--samples", type=int, help="samples per candidate (default from eps and delta)")
    p.add_argument("--exact-max", type=int, default=EXACT_MAX_FREE)
    p.set_defaults(handler=cmd_budget)

    p = sub.add_parser("verify", help="check inequalities and identities exactly; exit 2 on any failure")
    common(p, function=False)
    p.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    p.add_argument("--max-n", type=int, help="largest arity to include (suite-specific default)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bench", help="corpus sweep of both strategies, or kernel timings with --kernels")
    common(p, function=False)
    p.add_argument("--eps", default="0.1")
    p.add_argument("--cost-kind", choices=COST_KINDS[:2], default="uniform")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--exact-max", type=int, default=EXACT_MAX_FREE)
    p.add_argument("--kernels", action="store_true",
                   help="time the compiled and numpy DP kernels instead (timings are not reproducible)")
    p.add_argument("--k", type=int, default=8, help="error allowance for --kernels")
    p.set_defaults(handler=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except PricedQueryError as e:
        print(f"pricedquery: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

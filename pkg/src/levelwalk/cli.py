"""Command-line front door.

One JSON object per line on stdout (keys sorted, so identical seeded runs
are byte-identical); human diagnostics, including wall time, go to stderr.
Exit codes: 0 success, 2 usage, 3 input parse error, 4 cap exceeded,
5 guarantee violation (validate).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .chain import ChainParams, run_chain, sample_final_states
from .descriptors import DescriptorError, tree_from_descriptor
from .errors import (
    BudgetExceededError,
    CapExceededError,
    DegenerateChainError,
    DimacsParseError,
    LevelwalkError,
    OutOfRangeError,
)
from .estimators import (
    estimate_alpha,
    estimate_probability,
    estimate_size_additive,
    estimate_size_uniform,
    knuth_estimate,
    resolve_burn_in,
)
from .exact import (
    alpha_inverses_of_pruned_family,
    conductance_exact,
    level_counts_from_alphas,
    mixing_time_exact,
    size_from_alpha_inverses,
    stationary_exact,
    transition_matrix,
    verify_detailed_balance,
    verify_stationary,
)
from .rng import RandomStream
from .trees import (
    comb_tree,
    enumerate_tree,
    exact_count,
    full_tree,
    path_tree,
    validate_prefix_closed,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_CAP = 4
EXIT_GUARANTEE = 5


def _emit(record: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        flat = _flatten(record)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(sorted(flat))
        writer.writerow([flat[k] for k in sorted(flat)])
        out.write(buf.getvalue())


def _flatten(record: dict, prefix: str = "") -> dict:
    flat: dict = {}
    for k, v in record.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            flat[key] = json.dumps(v, sort_keys=True, separators=(",", ":"))
        else:
            flat[key] = v
    return flat


def _envelope(args, **fields) -> dict:
    rec = {
        "command": args.command,
        "version": __version__,
        "seed": args.seed,
    }
    rec.update(fields)
    return rec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levelwalk",
        description="Level-weighted walks over succinct binary trees: "
        "exact oracles and size estimators.",
        epilog="Exit codes: 0 ok, 2 usage, 3 parse error, 4 cap exceeded, "
        "5 guarantee violation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, required=True,
                        help="master seed (required: no ambient entropy)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--enum-cap", type=int, default=10**6,
                        help="max nodes to enumerate (default 1e6)")
    common.add_argument("--matrix-cap", type=int, default=4096,
                        help="max states for exact matrices (default 4096)")
    common.add_argument("--conductance-cap", type=int, default=18,
                        help="max states for exhaustive conductance (default 18)")
    treearg = argparse.ArgumentParser(add_help=False)
    treearg.add_argument("--tree", required=True,
                         help="full:<n> | path:<n> | comb:<n> | "
                              "hash:<n>:<q>:<seed> | cnf:<path>")
    est = argparse.ArgumentParser(add_help=False)
    est.add_argument("--delta", type=float, default=0.1,
                     help="failure probability (default 0.1)")
    est.add_argument("--burn-in-mode", choices=("bound", "exact-measured"),
                     default="bound")
    est.add_argument("--burn-in-constant", type=float, default=2.0,
                     help="C in the burn-in bound (default 2)")
    est.add_argument("--sampling", choices=("auto", "counts", "walkers"),
                     default="auto", help="ensemble mechanics (default auto)")

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gen", parents=[common, treearg],
                   help="materialize an instance's node list")
    sub.add_parser("count", parents=[common, treearg],
                   help="exact node count by enumeration")

    p = sub.add_parser("estimate-alpha", parents=[common, treearg, est],
                       help="normalizing factor within (1 +- zeta)")
    p.add_argument("--zeta", type=float, default=0.1)

    p = sub.add_parser("estimate-size", parents=[common, treearg, est],
                       help="tree size within +- xi 2^n")
    p.add_argument("--xi", type=float, default=0.1)

    p = sub.add_parser("estimate-prob", parents=[common, treearg, est],
                       help="|S|/2^n within +- xi")
    p.add_argument("--xi", type=float, default=0.1)

    p = sub.add_parser("sample", parents=[common, treearg, est],
                       help="near-stationary samples")
    p.add_argument("--m", type=int, default=1, help="number of samples")
    p.add_argument("--tv-eps", type=float, default=0.01,
                   help="total-variation budget per sample")
    p.add_argument("--trace", metavar="PATH",
                   help="dump each trajectory, one address per step "
                        "(root shows as an empty line)")

    sub.add_parser("validate", parents=[common, treearg],
                   help="run the exact oracle suite on an instance")

    sub.add_parser("conductance", parents=[common, treearg],
                   help="exhaustive conductance and its lower bound")

    p = sub.add_parser("mixing", parents=[common, treearg],
                       help="exact mixing time from the root")
    p.add_argument("--eps", default="1/4",
                   help="TV threshold, exact rational like 1/4 or 0.01")

    p = sub.add_parser("baseline", parents=[common, treearg, est],
                       help="uniform-sampling size baseline")
    p.add_argument("--xi", type=float, default=0.1)

    p = sub.add_parser("knuth", parents=[common, treearg],
                       help="branching-factor descent estimates")
    p.add_argument("--reps", type=int, default=1)

    p = sub.add_parser("bench", parents=[common, est],
                       help="one record per (n, estimator) with step counts")
    p.add_argument("--ns", default="4,6,8", help="comma-separated heights")
    p.add_argument("--shape", default="full", choices=("full", "path", "comb"))
    p.add_argument("--estimators", default="alpha,size",
                   help="comma-separated from: alpha,size,uniform,knuth")
    p.add_argument("--zeta", type=float, default=0.2)
    p.add_argument("--xi", type=float, default=0.25)
    return parser


def _chain_params(args) -> ChainParams:
    return ChainParams(lazy=True, burn_in_constant=args.burn_in_constant)


def _estimator_kwargs(args) -> dict:
    return dict(
        burn_in_mode=args.burn_in_mode,
        params=_chain_params(args),
        sampling=args.sampling,
        enum_cap=args.enum_cap,
        matrix_cap=args.matrix_cap,
    )


def _cmd_gen(args) -> int:
    tree = tree_from_descriptor(args.tree)
    explicit = enumerate_tree(tree, args.enum_cap)
    _emit(_envelope(args, tree=tree.label, n=tree.level_budget,
                    size=explicit.size, nodes=list(explicit.nodes)), args.format)
    return EXIT_OK


def _cmd_count(args) -> int:
    tree = tree_from_descriptor(args.tree)
    size = exact_count(tree, args.enum_cap)
    _emit(_envelope(args, tree=tree.label, n=tree.level_budget, size=size),
          args.format)
    return EXIT_OK


def _cmd_estimate_alpha(args) -> int:
    tree = tree_from_descriptor(args.tree)
    rng = RandomStream(args.seed)
    est = estimate_alpha(tree, args.zeta, args.delta, rng, **_estimator_kwargs(args))
    rec = _envelope(args, tree=tree.label, n=tree.level_budget,
                    burn_in_mode=args.burn_in_mode, **est.to_record())
    _emit(rec, args.format)
    return EXIT_OK


def _cmd_estimate_size(args) -> int:
    tree = tree_from_descriptor(args.tree)
    rng = RandomStream(args.seed)
    est = estimate_size_additive(tree, args.xi, args.delta, rng,
                                 **_estimator_kwargs(args))
    rec = est.to_record()
    rec.pop("per_level", None)  # keep records one-line friendly
    rec["per_level_alpha"] = [a.value for a in est.per_level_alphas]
    _emit(_envelope(args, tree=tree.label, n=tree.level_budget,
                    burn_in_mode=args.burn_in_mode, **rec), args.format)
    return EXIT_OK


def _cmd_estimate_prob(args) -> int:
    tree = tree_from_descriptor(args.tree)
    rng = RandomStream(args.seed)
    est = estimate_probability(tree, args.xi, args.delta, rng,
                               **_estimator_kwargs(args))
    _emit(_envelope(args, tree=tree.label, n=tree.level_budget,
                    burn_in_mode=args.burn_in_mode, **est.to_record()), args.format)
    return EXIT_OK


def _cmd_sample(args) -> int:
    tree = tree_from_descriptor(args.tree)
    rng = RandomStream(args.seed)
    steps = resolve_burn_in(tree, args.tv_eps, args.burn_in_mode,
                            _chain_params(args), args.enum_cap, args.matrix_cap)
    if args.trace:
        samples = []
        with open(args.trace, "w") as fh:
            for w in range(args.m):
                fh.write(f"# walker {w}\n")
                final = run_chain(tree, steps, rng.child(w), lazy=True,
                                  record=lambda a: fh.write(a + "\n"))
                samples.append(final)
    else:
        samples = sample_final_states(tree, args.m, steps, rng, lazy=True,
                                      enum_cap=args.enum_cap)
    _emit(_envelope(args, tree=tree.label, n=tree.level_budget, m=args.m,
                    tv_eps=args.tv_eps, burn_in=steps,
                    chain_steps_total=steps * args.m, samples=samples),
          args.format)
    return EXIT_OK


def _cmd_validate(args) -> int:
    tree = tree_from_descriptor(args.tree)
    explicit = enumerate_tree(tree, args.enum_cap)
    profile = stationary_exact(explicit)
    n = tree.level_budget
    checks: list[tuple[str, bool, dict]] = []

    violation = validate_prefix_closed(tree, max(args.enum_cap, 1), seed=args.seed)
    checks.append(("prefix_closed", violation is None,
                   {"counterexample": violation}))

    for lazy in (True, False):
        chain = transition_matrix(explicit, lazy=lazy, cap=args.matrix_cap)
        name = "lazy" if lazy else "nonlazy"
        rows_ok = all(
            sum((p for _, p in row), Fraction(0)) == 1 for row in chain.rows
        )
        checks.append((f"rows_stochastic_{name}", rows_ok, {}))
        checks.append((f"stationary_{name}", verify_stationary(chain, profile), {}))
        checks.append((f"detailed_balance_{name}",
                       verify_detailed_balance(chain, profile), {}))

    alphas = alpha_inverses_of_pruned_family(tree, args.enum_cap)
    telescoped = size_from_alpha_inverses(alphas)
    checks.append(("telescoping", telescoped == explicit.size,
                   {"telescoped": telescoped, "size": explicit.size}))
    try:
        levels = level_counts_from_alphas(alphas)
        counts_ok = list(levels.counts) == explicit.level_counts()
    except LevelwalkError:
        counts_ok = False
    checks.append(("level_recurrence", counts_ok, {}))

    bound = (n + 1) * 2**n
    is_full = explicit.size == 2 ** (n + 1) - 1
    checks.append(("alpha_inverse_bound",
                   profile.alpha_inverse <= bound
                   and (profile.alpha_inverse == bound) == is_full,
                   {"alpha_inverse": str(profile.alpha_inverse),
                    "bound": str(bound)}))
    root_ok = profile.probs[""] >= Fraction(1, n + 1)
    checks.append(("root_mass_bound", root_ok,
                   {"pi_root": str(profile.probs[""])}))

    all_ok = True
    for name, ok, detail in checks:
        all_ok &= ok
        rec = _envelope(args, tree=tree.label, n=n, check=name, ok=ok)
        rec.update({k: v for k, v in detail.items() if v is not None})
        _emit(rec, args.format)
    return EXIT_OK if all_ok else EXIT_GUARANTEE


def _cmd_conductance(args) -> int:
    tree = tree_from_descriptor(args.tree)
    explicit = enumerate_tree(tree, args.enum_cap)
    profile = stationary_exact(explicit)
    chain = transition_matrix(explicit, lazy=True, cap=args.matrix_cap)
    phi = conductance_exact(chain, profile, cap=args.conductance_cap)
    n = tree.level_budget
    bound = Fraction(1, 4 * (n + 1))
    _emit(_envelope(args, tree=tree.label, n=n, states=explicit.size,
                    phi=f"{phi.numerator}/{phi.denominator}",
                    bound=f"{bound.numerator}/{bound.denominator}",
                    bound_ok=phi >= bound), args.format)
    return EXIT_OK if phi >= bound else EXIT_GUARANTEE


def _cmd_mixing(args) -> int:
    tree = tree_from_descriptor(args.tree)
    explicit = enumerate_tree(tree, args.enum_cap)
    profile = stationary_exact(explicit)
    chain = transition_matrix(explicit, lazy=True, cap=args.matrix_cap)
    eps = Fraction(args.eps)
    tau = mixing_time_exact(chain, profile, eps)
    n = tree.level_budget
    bound = 2 * (4 * (n + 1)) ** 2 * (math.log(n + 1) + math.log(1 / float(eps)))
    _emit(_envelope(args, tree=tree.label, n=n, eps=str(eps), tau=tau,
                    bound=bound, bound_ok=tau <= bound), args.format)
    return EXIT_OK if tau <= bound else EXIT_GUARANTEE


def _cmd_baseline(args) -> int:
    tree = tree_from_descriptor(args.tree)
    rng = RandomStream(args.seed)
    est = estimate_size_uniform(tree, args.xi, args.delta, rng)
    _emit(_envelope(args, tree=tree.label, n=tree.level_budget,
                    **est.to_record()), args.format)
    return EXIT_OK


def _cmd_knuth(args) -> int:
    tree = tree_from_descriptor(args.tree)
    rng = RandomStream(args.seed)
    values = [knuth_estimate(tree, rng.child(r)) for r in range(args.reps)]
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / max(1, len(values) - 1)
    stderr = math.sqrt(var / len(values))
    _emit(_envelope(args, tree=tree.label, n=tree.level_budget, reps=args.reps,
                    mean=mean, stderr=stderr), args.format)
    return EXIT_OK


_BENCH_IDS = {"alpha": 0, "size": 1, "uniform": 2, "knuth": 3}


def _cmd_bench(args) -> int:
    ns = [int(x) for x in args.ns.split(",") if x]
    wanted = [e for e in args.estimators.split(",") if e]
    makers = {"full": full_tree, "path": path_tree, "comb": comb_tree}
    for n in ns:
        tree = makers[args.shape](n)
        truth = exact_count(tree, args.enum_cap)
        for name in wanted:
            if name not in _BENCH_IDS:
                raise OutOfRangeError(f"unknown estimator {name!r}")
            rng = RandomStream(args.seed, (n, _BENCH_IDS[name]))
            t0 = time.perf_counter()
            if name == "alpha":
                est = estimate_alpha(tree, args.zeta, args.delta, rng,
                                     **_estimator_kwargs(args))
                value, steps, samples = est.value, est.chain_steps_total, \
                    est.batches * est.samples_per_batch
            elif name == "size":
                est = estimate_size_additive(tree, args.xi, args.delta, rng,
                                             **_estimator_kwargs(args))
                value, steps, samples = est.value, est.chain_steps_total, \
                    est.samples_total
            elif name == "uniform":
                est = estimate_size_uniform(tree, args.xi, args.delta, rng)
                value, steps, samples = est.value, 0, est.samples_total
            else:
                value = knuth_estimate(tree, rng)
                steps, samples = 0, 1
            wall_ms = (time.perf_counter() - t0) * 1000
            print(f"# bench {args.shape}:{n} {name} wall_ms={wall_ms:.1f}",
                  file=sys.stderr)
            _emit(_envelope(args, tree=tree.label, n=n, estimator=name,
                            value=value, exact=truth,
                            chain_steps_total=steps, samples_total=samples),
                  args.format)
    return EXIT_OK


_DISPATCH = {
    "gen": _cmd_gen,
    "count": _cmd_count,
    "estimate-alpha": _cmd_estimate_alpha,
    "estimate-size": _cmd_estimate_size,
    "estimate-prob": _cmd_estimate_prob,
    "sample": _cmd_sample,
    "validate": _cmd_validate,
    "conductance": _cmd_conductance,
    "mixing": _cmd_mixing,
    "baseline": _cmd_baseline,
    "knuth": _cmd_knuth,
    "bench": _cmd_bench,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = _DISPATCH[args.command](args)
    except (DimacsParseError, DescriptorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CapExceededError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OutOfRangeError, DegenerateChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LevelwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"# wall_ms={int((time.perf_counter() - t0) * 1000)}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

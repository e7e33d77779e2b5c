"""Command line front end.

Subcommands: gamma (slack/palette tables), color (acyclic edge coloring of
a graph file), verify (recheck a coloring, exit 0/1), sat (resampling on a
DIMACS CNF), bounds (exact/asymptotic step-count tables), bench (seeded
coloring batches with tail statistics), dice (the two-phase dice demo).

Every run echoes its full configuration in the output (`schema`/`config`
fields in JSON, `#`-prefixed comment lines before CSV headers) and a
missing --seed is replaced by a recorded random one, so any data output is
byte-reproducible from its own metadata.

Exit codes: 0 success, 2 verification failure, 3 not terminated within the
step limit, 4 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import bounds as bounds_mod
from . import coloring as coloring_mod
from . import dimacs as dimacs_mod
from . import engine as engine_mod
from . import gamma as gamma_mod
from . import graphs as graphs_mod

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_NOT_TERMINATED = 3
EXIT_INPUT = 4

SUMMARY_GIRTHS = (3, 7, 53, 219)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fresh_seed() -> int:
    return random.SystemRandom().randrange(2**32)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(config: dict, header: list[str], rows, extra_blocks=None) -> str:
    buf = io.StringIO()
    buf.write("# schema=1\n")
    buf.write(f"# config={json.dumps(config, sort_keys=True)}\n")
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    for block_header, block_rows in extra_blocks or ():
        buf.write("\n")
        writer.writerow(block_header)
        writer.writerows(block_rows)
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- gamma -------------------------------------------------------------------

def cmd_gamma(args) -> int:
    if args.summary:
        girths = list(SUMMARY_GIRTHS)
    elif args.table:
        lo, hi = args.table
        if lo < 3 or hi < lo:
            raise ValueError("--table needs 3 <= gmin <= gmax")
        girths = list(range(lo, hi + 1))
    elif args.girth:
        girths = args.girth
    else:
        raise ValueError("give --girth, --table or --summary")
    config = {"command": "gamma", "girths": girths, "delta": args.delta, "tol": args.tol}
    header = ["girth", "r", "gamma", "tau", "rho"]
    if args.delta:
        header.append("colors")
    rows = []
    for g in girths:
        r = gamma_mod.girth_to_r(g)
        gm = gamma_mod.min_gamma(r, tol=args.tol)
        sol = gamma_mod.solve_tau(gamma_mod.PhiParams(gm, r))
        row = [g, r, f"{gm:.3f}", f"{sol.tau:.10f}", f"{sol.rho:.10f}"]
        if args.delta:
            row.append(gamma_mod.colors_needed(args.delta, g))
        rows.append(row)
    _emit(_csv_text(config, header, rows), args.out)
    return EXIT_OK


# -- color / verify ----------------------------------------------------------

def _auto_palette(graph: graphs_mod.Graph) -> int:
    if graph.max_degree < 2:
        return max(1, 2 * graph.max_degree - 1)
    girth = graph.girth()
    if girth is None:  # forest: the greedy threshold suffices, nothing to recolor
        return 2 * graph.max_degree - 1
    return gamma_mod.colors_needed(graph.max_degree, girth)


def cmd_color(args) -> int:
    graph = graphs_mod.Graph.read_edge_list(args.graph)
    k = _auto_palette(graph) if args.k is None else args.k
    seed = args.seed if args.seed is not None else _fresh_seed()
    coloring, stats = coloring_mod.col_alg(
        graph, k, seed=seed, step_limit=args.step_limit, detector=args.detector
    )
    verdict = (
        coloring_mod.verify_acyclic(graph, coloring)
        if stats.terminated
        else coloring_mod.VerifyResult(False, False, None)
    )
    payload = {
        "schema": 1,
        "config": {
            "command": "color",
            "graph": str(args.graph),
            "k": k,
            "auto": args.k is None,
            "seed": seed,
            "step_limit": stats.step_limit,
            "detector": args.detector,
        },
        "K": k,
        "colors": coloring.colors,
        "stats": {"steps": stats.steps, "phases": stats.phases, "seed": seed},
        "terminated": stats.terminated,
        "verdict": {"proper": verdict.proper, "acyclic": verdict.acyclic},
    }
    _emit(_json_text(payload), args.out)
    if not stats.terminated:
        return EXIT_NOT_TERMINATED
    if not (verdict.proper and verdict.acyclic):
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    graph = graphs_mod.Graph.read_edge_list(args.graph)
    with open(args.coloring) as fh:
        payload = json.load(fh)
    coloring = coloring_mod.EdgeColoring(int(payload["K"]), list(payload["colors"]))
    if len(coloring.colors) != graph.m:
        raise ValueError("coloring length does not match the graph's edge count")
    verdict = coloring_mod.verify_acyclic(graph, coloring)
    ok = verdict.proper and verdict.acyclic
    witness = list(verdict.witness.edges) if verdict.witness else None
    _emit(
        _json_text(
            {
                "schema": 1,
                "config": {"command": "verify", "graph": str(args.graph), "coloring": str(args.coloring)},
                "proper": verdict.proper,
                "acyclic": verdict.acyclic,
                "witness": witness,
            }
        ),
        args.out,
    )
    return EXIT_OK if ok else 1


# -- sat ----------------------------------------------------------------------

def cmd_sat(args) -> int:
    n_vars, clauses = dimacs_mod.read_dimacs(args.cnf)
    system = dimacs_mod.clause_system(n_vars, clauses)
    seed = args.seed if args.seed is not None else _fresh_seed()
    values, stats = engine_mod.m_algorithm(system, seed=seed, step_limit=args.step_limit)
    satisfied = dimacs_mod.formula_satisfied(clauses, values) if stats.terminated else None
    payload = {
        "schema": 1,
        "config": {
            "command": "sat",
            "cnf": str(args.cnf),
            "seed": seed,
            "step_limit": stats.step_limit,
        },
        "terminated": stats.terminated,
        "satisfied": satisfied,
        "assignment": values if stats.terminated else None,
        "stats": stats.to_json_dict(),
    }
    _emit(_json_text(payload), args.out)
    if not stats.terminated:
        return EXIT_NOT_TERMINATED
    return EXIT_OK if satisfied else EXIT_VERIFY


# -- bounds -------------------------------------------------------------------

def cmd_bounds(args) -> int:
    params = bounds_mod.BoundParams(Fraction(args.p), args.delta, m=args.m, prefactor=args.prefactor)
    flags = bounds_mod.lll_condition(params)
    try:
        cutoff = bounds_mod.cutoff_estimate(params)
    except bounds_mod.NoCutoffError:
        cutoff = None
    config = {
        "command": "bounds",
        "p": str(params.p),
        "delta": params.delta,
        "m": params.m,
        "prefactor": params.prefactor,
        "n": args.n,
    }
    rows = [
        (n, exact, f"{approx:.12g}", f"{envelope:.12g}", f"{powed:.12g}")
        for n, exact, approx, envelope, powed in bounds_mod.bound_rows(params, args.n)
    ]
    summary = (
        ["strict", "classic", "base", "cutoff"],
        [[flags["strict"], flags["classic"], f"{params.base:.12g}", "" if cutoff is None else cutoff]],
    )
    _emit(
        _csv_text(config, ["n", "q_exact", "q_float", "phase_bound", "base_pow"], rows, [summary]),
        args.out,
    )
    return EXIT_OK


# -- bench --------------------------------------------------------------------

def _parse_generator(descriptor: str, gen_seed: int) -> graphs_mod.Graph:
    name, _, rest = descriptor.partition(":")
    params = [p for p in rest.split(",") if p]
    if name == "cycle":
        (length,) = map(int, params)
        if length < 3:
            return graphs_mod.Graph(max(length, 1), [])
        return graphs_mod.cycle_graph(length)
    if name in ("random-regular", "regular"):
        degree, n = map(int, params)
        return graphs_mod.random_regular_graph(degree, n, seed=gen_seed)
    if name == "gnp":
        n, prob = int(params[0]), float(params[1])
        return graphs_mod.gnp_graph(n, prob, seed=gen_seed)
    raise ValueError(f"unknown generator {descriptor!r}")


def _bench_one(task):
    graph, k, step_limit, seed = task
    _, stats = coloring_mod.col_alg(graph, k, seed=seed, step_limit=step_limit, detector="incremental")
    return (seed, stats.steps, stats.phases, stats.terminated)


def cmd_bench(args) -> int:
    graph = _parse_generator(args.generator, args.gen_seed)
    k = _auto_palette(graph) if args.k is None else args.k
    base = args.seed_base if args.seed_base is not None else _fresh_seed()
    seeds = [base + i for i in range(args.runs)]
    tasks = [(graph, k, args.step_limit, s) for s in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_one, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs))))
    else:
        results = [_bench_one(t) for t in tasks]
    results.sort()
    steps = [r[1] for r in results]
    tail_rows = []
    n = 1
    top = max(steps, default=0)
    while n <= max(top, 1):
        tail_rows.append((n, sum(1 for s in steps if s >= n) / len(steps)))
        n *= 2
    config = {
        "command": "bench",
        "generator": args.generator,
        "gen_seed": args.gen_seed,
        "k": k,
        "runs": args.runs,
        "seed_base": base,
        "step_limit": args.step_limit,
        "jobs": args.jobs,
    }
    _emit(
        _csv_text(
            config,
            ["seed", "steps", "phases", "terminated"],
            results,
            [(["n", "pr_steps_ge_n"], tail_rows)],
        ),
        args.out,
    )
    return EXIT_OK


# -- dice ---------------------------------------------------------------------

def cmd_dice(args) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be >= 1")
    seed = args.seed if args.seed is not None else _fresh_seed()
    estimate = engine_mod.dice_experiment(args.trials, random.Random(seed), phases=args.phases)
    exact = float(Fraction(91, 216) ** args.phases)
    sigma = math.sqrt(exact * (1 - exact) / args.trials)
    z = (estimate - exact) / sigma if sigma else float("nan")
    config = {"command": "dice", "trials": args.trials, "seed": seed, "phases": args.phases}
    lines = [
        "schema=1",
        f"config={json.dumps(config, sort_keys=True)}",
        f"estimate={estimate:.6f}",
        f"exact={exact:.6f}",
        f"z={z:+.3f}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- plumbing -----------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="lllcolor", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", help="minimal palette slack per girth")
    p.add_argument("--girth", type=int, nargs="+", help="girth values to tabulate")
    p.add_argument("--table", type=int, nargs=2, metavar=("GMIN", "GMAX"), help="tabulate a girth range")
    p.add_argument("--summary", action="store_true", help=f"tabulate girths {SUMMARY_GIRTHS}")
    p.add_argument("--delta", type=int, help="also emit the palette size for this max degree")
    p.add_argument("--tol", type=float, default=1e-4, help="bisection width on the slack")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("color", help="acyclically edge-color a graph file")
    p.add_argument("graph")
    p.add_argument("--k", type=int, help="palette size; omit to derive from max degree and girth")
    p.add_argument("--seed", type=int)
    p.add_argument("--step-limit", type=int, dest="step_limit")
    p.add_argument("--detector", choices=("rescan", "incremental"), default="rescan")
    p.add_argument("--out")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="recheck a coloring JSON against a graph (exit 0/1)")
    p.add_argument("graph")
    p.add_argument("coloring")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sat", help="resample a DIMACS CNF until satisfied")
    p.add_argument("cnf")
    p.add_argument("--seed", type=int)
    p.add_argument("--step-limit", type=int, dest="step_limit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("bounds", help="exact and asymptotic step-count table")
    p.add_argument("--p", required=True, help="event probability bound, e.g. 1/8")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--prefactor", type=float, default=4.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("bench", help="seeded coloring batches with tail statistics")
    p.add_argument("--generator", required=True, help="cycle:L | random-regular:D,L | gnp:L,PROB")
    p.add_argument("--gen-seed", type=int, default=0, dest="gen_seed")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed-base", type=int, dest="seed_base")
    p.add_argument("--k", type=int)
    p.add_argument("--step-limit", type=int, dest="step_limit")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dice", help="two-phase dice demo")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--phases", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dice)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"lllcolor: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Command-line interface.

Subcommands: gen, solve, verify, brute, claims, bench. Exit codes:
0 success, 1 failed verification or claim violations, 2 partial solve,
3 search guard exceeded, 64 usage error, 66 file or schema error.

Machine-readable output is canonical JSON on stdout; timings go to
stderr so stdout stays byte-stable under fixed seeds.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import kernel
from .brute import DEFAULT_GUARD, brute_kahn_full, brute_max_rows
from .errors import BasisfillError, SchemaError, SearchBudgetExceeded
from .instance import (
    canonical_json,
    gen_graphic,
    gen_linear_random,
    gen_rota,
    gen_uniform,
    load,
    parse_epsilon,
    save,
)
from .solver import SolverConfig, claims_sweep, load_solution, save_solution, solve
from .table import verify

EX_USAGE = 64
EX_FILE = 66
EX_GUARD = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _out(data) -> None:
    sys.stdout.buffer.write(canonical_json(data))
    sys.stdout.flush()


def _build_parser() -> _Parser:
    parser = _Parser(prog="basisfill")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--kind", required=True,
                     choices=["linear", "graphic", "uniform", "rota"])
    gen.add_argument("--p", type=int, default=2, help="prime field order")
    gen.add_argument("--n", type=int, required=True, help="matroid rank")
    gen.add_argument("--f", type=int, help="row count (derived for rota)")
    gen.add_argument("--epsilon", required=True, help="exact rational, e.g. 1/5")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--ground", type=int,
                     help="ground size for uniform instances (default 2n)")
    gen.add_argument("--out", required=True)

    solve_p = sub.add_parser("solve", help="solve an instance file")
    solve_p.add_argument("--in", dest="infile", required=True)
    solve_p.add_argument("--out", required=True)
    solve_p.add_argument("--seed", type=int, default=0)
    solve_p.add_argument("--epsilon", help="override the instance epsilon")
    solve_p.add_argument("--max-iterations", type=int, default=0)
    solve_p.add_argument("--depth-cap", type=int)
    solve_p.add_argument("--frontier-cap", type=int)
    solve_p.add_argument("--time-limit", type=float)

    ver = sub.add_parser("verify", help="verify a solution against an instance")
    ver.add_argument("--in", dest="infile", required=True)
    ver.add_argument("--solution", required=True)

    brute = sub.add_parser("brute", help="exact search on a tiny instance")
    brute.add_argument("--in", dest="infile", required=True)
    brute.add_argument("--mode", required=True, choices=["max-rows", "kahn-full"])
    brute.add_argument("--guard", type=int, default=DEFAULT_GUARD)

    claims = sub.add_parser("claims", help="zero-tolerance counting-bound sweep")
    claims.add_argument("--in", dest="infile", required=True)
    claims.add_argument("--seeds", type=int, default=1,
                        help="number of solver seeds to sweep")

    bench = sub.add_parser("bench", help="solve a grid of generated instances")
    bench.add_argument("--kinds", default="linear",
                       help="comma list of linear,graphic,uniform,rota")
    bench.add_argument("--sizes", required=True,
                       help="comma list of NxF pairs, e.g. 8x3,12x5")
    bench.add_argument("--seeds", type=int, default=3)
    bench.add_argument("--p", type=int, default=2)
    bench.add_argument("--epsilon", default="1/5")
    bench.add_argument("--out")
    return parser


def _cmd_gen(args) -> int:
    eps = parse_epsilon(args.epsilon)
    if args.kind == "rota":
        if args.f is not None:
            raise SchemaError("rota derives f from n and epsilon; drop --f")
        inst = gen_rota(args.p, args.n, args.seed, eps)
    elif args.kind == "linear":
        if args.f is None:
            raise SchemaError("--f is required for linear instances")
        inst = gen_linear_random(args.p, args.n, args.f, args.seed, eps)
    elif args.kind == "graphic":
        if args.f is None:
            raise SchemaError("--f is required for graphic instances")
        inst = gen_graphic(args.n + 1, args.f, args.seed, eps)
    else:
        if args.f is None:
            raise SchemaError("--f is required for uniform instances")
        ground = args.ground if args.ground else 2 * args.n
        inst = gen_uniform(ground, args.n, args.f, args.seed, eps)
    save(inst, args.out)
    _out({
        "kind": args.kind,
        "n": inst.n,
        "f": inst.f,
        "ground": inst.matroid.ground_size,
        "target_full_rows": inst.target_full_rows,
        "out": args.out,
    })
    return 0


def _cmd_solve(args) -> int:
    inst = load(args.infile)
    config = SolverConfig(
        epsilon=parse_epsilon(args.epsilon) if args.epsilon else None,
        max_iterations=args.max_iterations,
        depth_cap=args.depth_cap,
        frontier_cap=args.frontier_cap,
        time_limit=args.time_limit,
        seed=args.seed,
    )
    started = time.monotonic()
    solution = solve(inst, config)
    elapsed = time.monotonic() - started
    save_solution(solution, args.out)
    print(f"solved in {elapsed:.3f}s [{kernel.IMPLEMENTATION} kernel]",
          file=sys.stderr)
    _out({
        "status": solution.status,
        "full_rows": len(solution.full_rows),
        "target_full_rows": solution.stats["target_full_rows"],
        "filled": solution.table.filled,
        "moves": solution.stats["moves"],
        "out": args.out,
    })
    return 0 if solution.status == "reached_target" else 2


def _cmd_verify(args) -> int:
    inst = load(args.infile)
    solution = load_solution(args.solution, inst)
    report = verify(inst, solution.table)
    _out(report.to_data())
    if not report.ok:
        print(f"first violation: {report.failures[0]}", file=sys.stderr)
    return 0 if report.ok else 1


def _cmd_brute(args) -> int:
    inst = load(args.infile)
    if args.mode == "max-rows":
        optimum, witness = brute_max_rows(inst, args.guard)
        _out({"mode": "max-rows", "optimum": optimum, "witness": witness})
        return 0
    witness = brute_kahn_full(inst, args.guard)
    _out({"mode": "kahn-full", "found": witness is not None, "witness": witness})
    return 0


def _cmd_claims(args) -> int:
    inst = load(args.infile)
    total = 0
    reports = []
    for seed in range(args.seeds):
        report = claims_sweep(inst, SolverConfig(seed=seed))
        reports.append(report)
        total += report["total_violations"]
    _out({"seeds": args.seeds, "total_violations": total, "runs": reports})
    return 0 if total == 0 else 1


def _cmd_bench(args) -> int:
    eps = parse_epsilon(args.epsilon)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    sizes = []
    for chunk in args.sizes.split(","):
        try:
            n_text, f_text = chunk.lower().split("x")
            sizes.append((int(n_text), int(f_text)))
        except ValueError:
            raise SchemaError(f"bad size {chunk!r}; expected NxF") from None
    results = []
    for kind in kinds:
        for n, f in sizes:
            for seed in range(args.seeds):
                if kind == "linear":
                    inst = gen_linear_random(args.p, n, f, seed, eps)
                elif kind == "graphic":
                    inst = gen_graphic(n + 1, f, seed, eps)
                elif kind == "uniform":
                    inst = gen_uniform(2 * n, n, f, seed, eps)
                elif kind == "rota":
                    inst = gen_rota(args.p, n, seed, eps)
                else:
                    raise SchemaError(f"unknown kind {kind!r}")
                started = time.monotonic()
                solution = solve(inst, SolverConfig(seed=seed))
                elapsed = time.monotonic() - started
                target = solution.stats["target_full_rows"]
                results.append({
                    "kind": kind,
                    "n": inst.n,
                    "f": inst.f,
                    "seed": seed,
                    "status": solution.status,
                    "full_rows": len(solution.full_rows),
                    "target_full_rows": target,
                    "ratio": (len(solution.full_rows) / target) if target else None,
                    "runtime_s": round(elapsed, 6),
                    "moves": solution.stats["moves"],
                })
    payload = {"kernel": kernel.IMPLEMENTATION, "results": results}
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(canonical_json(payload))
    _out(payload)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "brute": _cmd_brute,
    "claims": _cmd_claims,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SearchBudgetExceeded as exc:
        print(f"basisfill: {exc}", file=sys.stderr)
        return EX_GUARD
    except (OSError, SchemaError) as exc:
        print(f"basisfill: {exc}", file=sys.stderr)
        return EX_FILE
    except BasisfillError as exc:
        print(f"basisfill: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

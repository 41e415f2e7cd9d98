"""Command-line interface: ``kgdopt {solve,bench,profile,cycle-demo}``.

Problem specs use ``name:key=val,key=val``; bare comma tokens continue the
previous value. Built-in names:

  quadratic:n=10,kappa=100,seed=0      random SPD quadratic, spectrum in [1, kappa]
  quadratic:spectrum=1,10              prescribed spectrum (x0 = ones)
  raydan:n=100                         strongly convex 2, x0 = ones
  cycle:b=1                            four-point cycle function
  logistic:m=1000,n=50,seed=0          synthetic logistic regression, gamma = 1/m
  libsvm:path=FILE,gamma=G             logistic regression on LIBSVM data

The default seed for specs without ``seed=`` comes from $KGDOPT_SEED (else 0).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from . import bench
from .errors import KGDError, ParseError
from .problems import suite
from .solvers import SolverConfig

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
SEED_ENV = "KGDOPT_SEED"


def _default_seed() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def _with_seed(spec: str, seed: int | None) -> str:
    name, params = suite.parse_spec(spec)
    if seed is None or name not in ("quadratic", "logistic") or "seed" in params:
        return spec
    return f"{spec}{',' if params else ':'}seed={seed}"


def _config(args) -> SolverConfig:
    return SolverConfig(eta=args.eta, memory=args.memory, tol=args.tol,
                        max_iter=args.max_iter, alpha0=args.alpha0)


def _add_solver_options(p):
    p.add_argument("--eta", type=float, default=1e-4, help="sufficient-decrease parameter, in (0, 1/3)")
    p.add_argument("--memory", "-M", type=int, default=20, help="nonmonotone window length")
    p.add_argument("--tol", type=float, default=1e-6, help="stop when ||g|| <= tol * ||g0||")
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--alpha0", type=float, default=None, help="first step (default 1/||g0||)")
    p.add_argument("--c", type=float, default=None, help="stabilizer constant for bb1stab")
    p.add_argument("--seed", type=int, default=None, help=f"default seed (env {SEED_ENV})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kgdopt", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="run one solver on one problem")
    p.add_argument("--problem", required=True)
    p.add_argument("--solver", required=True, help=", ".join(bench.SOLVER_NAMES))
    p.add_argument("--out", help="trace CSV path (k,f,rel_gnorm,alpha,shrinks)")
    _add_solver_options(p)

    p = sub.add_parser("bench", help="run a solver x problem matrix")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--suite", choices=sorted(suite.SUITES))
    g.add_argument("--manifest", help="JSON list or one problem spec per line")
    g.add_argument("--problem", action="append", help="problem spec (repeatable)")
    p.add_argument("--solvers", default=",".join(bench.KGDADP_VARIANTS),
                   help="comma-separated solver names")
    p.add_argument("--out", help="records file (default stdout)")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--jobs", type=int, default=1)
    _add_solver_options(p)

    p = sub.add_parser("profile", help="performance profile from a records file")
    p.add_argument("--records", required=True)
    p.add_argument("--metric", default="iters", choices=sorted(bench.METRICS))
    p.add_argument("--out", help="profile file (default stdout)")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--plot", help="also write a gnuplot script here")

    p = sub.add_parser("cycle-demo", help="four-point cycle of the pure long KGD step")
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--periods", type=int, default=50)
    p.add_argument("--show", type=int, default=40, help="iterates to print")
    return ap


def _solver_name(name: str, c: float | None) -> str:
    if c is not None and name == "bb1stab":
        return f"bb1stab:c={c}"
    return name


def cmd_solve(args) -> int:
    bench.check_solver_name(args.solver)
    problem = suite.build_problem(_with_seed(args.problem, args.seed if args.seed is not None else _default_seed()))
    trace = bench.solve(_solver_name(args.solver, args.c), problem, _config(args))
    if args.out:
        g0 = trace.g0_norm or 1.0
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "f", "rel_gnorm", "alpha", "shrinks"])
            for st in trace.states:
                w.writerow([st.k, repr(st.f), repr(st.g_norm / g0), repr(st.alpha), st.shrinks])
    print(f"{args.solver} on {problem.name}: {trace.termination} after {trace.iterations} iterations, "
          f"{trace.gevals} gradient evaluations, ||g||/||g0|| = {trace.rel_gnorm:.3e}"
          + (f" ({trace.message})" if trace.message else ""))
    return EXIT_OK if trace.converged else EXIT_FAILED


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.manifest:
        with open(args.manifest) as fh:
            specs = suite.load_manifest(fh.read())
    elif args.problem:
        specs = args.problem
    else:
        specs = suite.SUITES[args.suite or "smoke"]
    specs = [_with_seed(s, seed) if isinstance(s, str) else s for s in specs]
    problems = suite.build_suite(specs)
    solvers = [_solver_name(s.strip(), args.c) for s in args.solvers.split(",") if s.strip()]
    records = bench.run_matrix(solvers, problems, _config(args), jobs=args.jobs)
    text = bench.emit(records, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    n_ok = sum(r.success for r in records)
    print(f"{len(records)} runs, {n_ok} successful", file=sys.stderr)
    return EXIT_OK


def cmd_profile(args) -> int:
    records = bench.read_records(args.records)
    prof = bench.performance_profile(records, args.metric)
    text = bench.emit(prof, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot:
        bench.emit_plot_script(prof, args.out or "profile.csv", args.plot)
    return EXIT_OK


def cmd_cycle_demo(args) -> int:
    demo = bench.run_cycle_demo(args.b, periods=args.periods)
    p = demo.problem
    print(f"a = {p.a:.15g}  b = {p.b:.15g}  t = a/b = {p.t:.15g}")
    print(f"c1 = {p.c1:.15g}  c2 = {p.c2:.15g}  c3 = {p.c3:.15g}")
    print(f"alpha1 = {demo.alpha1:.15g}")
    print("pure long-KGD iterates:")
    for k, x in enumerate(demo.pure_iterates[: args.show]):
        print(f"  x[{k:3d}] = {x: .15f}")
    print(f"max relative drift from the 4-cycle over {demo.periods} periods: {demo.max_drift:.3e}"
          f" -> {'cycles' if demo.cycles else 'NO CYCLE'}")
    adp = demo.adaptive
    print(f"kgdadp-long: {adp.termination} after {adp.iterations} iterations, x = {adp.x[0]:.3e}"
          f" -> {'converges' if demo.converges else 'DOES NOT CONVERGE'}")
    return EXIT_OK if demo.ok else EXIT_FAILED


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "profile": cmd_profile,
            "cycle-demo": cmd_cycle_demo}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.cmd](args)
    except (ParseError, ValueError, KGDError, OSError) as exc:
        print(f"kgdopt {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Solver x problem benchmark matrices and Dolan-More performance profiles."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .core import Problem, Termination, Trace
from .errors import EmptyInput, KGDError, ParseError
from .solvers import SolverConfig, bbstab, kgdadp, pure_iterate
from .stepsize import BB1, BB2, KGD_LONG, KGD_SHORT, constant_rule

RECORD_FIELDS = ["solver", "problem", "outcome", "iters", "gevals", "seconds", "rel_gnorm"]
PROFILE_FIELDS = ["solver", "tau", "r"]
METRICS = {"iters": "iters", "iterations": "iters", "gevals": "gevals",
           "gradient-evaluations": "gevals", "seconds": "seconds", "wall-seconds": "seconds"}

SUCCESS = "Success"
FAILURE = "Failure"

KGDADP_VARIANTS = ["kgdadp-long", "kgdadp-short", "kgdadp-bb1", "kgdadp-bb2"]
SOLVER_NAMES = KGDADP_VARIANTS + ["pure-bb1", "pure-bb2", "pure-kgd-long", "pure-kgd-short",
                                  "bb1stab", "gd-fixed"]

_RULES = {"long": KGD_LONG, "short": KGD_SHORT, "bb1": BB1, "bb2": BB2,
          "kgd-long": KGD_LONG, "kgd-short": KGD_SHORT}


def _fixed_step(problem: Problem) -> float:
    L = getattr(problem, "lipschitz", None)
    if L is None and problem.bounds is not None:
        L = problem.bounds.lambda_max
    if L is None:
        raise ValueError(f"{problem.name} has no known smoothness constant")
    return 1.0 / L


def solve(solver: str, problem: Problem, config: SolverConfig | None = None) -> Trace:
    """Run the solver called ``solver`` (see :data:`SOLVER_NAMES`).

    ``bb1stab`` and ``gd-fixed`` accept a parameter, e.g. ``bb1stab:c=0.5``
    or ``gd-fixed:alpha=0.1``; ``gd-fixed`` defaults to ``1/L``.
    """
    config = config or SolverConfig()
    name, _, arg = solver.partition(":")
    params = dict(kv.split("=", 1) for kv in arg.split(",") if "=" in kv)
    if name.startswith("kgdadp-") and name[7:] in _RULES:
        return kgdadp(problem, config=config.replace(rule=_RULES[name[7:]]))
    if name.startswith("pure-") and name[5:] in _RULES:
        return pure_iterate(problem, rule=_RULES[name[5:]], config=config)
    if name == "bb1stab":
        return bbstab(problem, config=config, c=float(params.get("c", 1.0)))
    if name == "gd-fixed":
        step = float(params["alpha"]) if "alpha" in params else _fixed_step(problem)
        return pure_iterate(problem, rule=constant_rule(step),
                            config=config.replace(alpha0=step))
    raise ValueError(f"unknown solver {solver!r}; known: {', '.join(SOLVER_NAMES)}")


def check_solver_name(solver: str):
    name = solver.partition(":")[0]
    if name not in SOLVER_NAMES:
        raise ValueError(f"unknown solver {solver!r}; known: {', '.join(SOLVER_NAMES)}")


@dataclass
class BenchmarkRecord:
    solver: str
    problem: str
    outcome: str
    iters: int
    gevals: int
    seconds: float
    rel_gnorm: float

    @property
    def success(self) -> bool:
        return self.outcome == SUCCESS

    def metric(self, name: str) -> float:
        """Value of ``name`` for profiling; ``inf`` for failed runs."""
        if not self.success:
            return math.inf
        return float(getattr(self, METRICS[name]))

    @classmethod
    def from_trace(cls, solver: str, problem: str, trace: Trace) -> BenchmarkRecord:
        ok = trace.termination is Termination.CONVERGED
        return cls(solver, problem, SUCCESS if ok else FAILURE, trace.iterations,
                   trace.gevals, trace.seconds, trace.rel_gnorm)


def _run_pair(task):
    solver, problem, config = task
    try:
        trace = solve(solver, problem, config)
    except (KGDError, ArithmeticError, ValueError) as exc:
        rec = BenchmarkRecord(solver, problem.name, FAILURE, 0, 0, 0.0, math.nan)
        return rec, str(exc)
    return BenchmarkRecord.from_trace(solver, problem.name, trace), trace.message


def run_matrix(solvers, problems, config: SolverConfig | None = None, jobs: int = 1) -> list[BenchmarkRecord]:
    """One record per (solver, problem) pair, solver-major order.

    Errors inside a run become Failure records; they never abort the matrix.
    """
    solvers, problems = list(solvers), list(problems)
    if not solvers or not problems:
        raise EmptyInput("need at least one solver and one problem")
    for s in solvers:
        check_solver_name(s)
    config = (config or SolverConfig()).replace(record_states=False)
    tasks = [(s, p, config) for s in solvers for p in problems]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_pair, tasks))
    else:
        results = [_run_pair(t) for t in tasks]
    return [rec for rec, _ in results]


@dataclass
class PerformanceProfile:
    """Per-solver step functions ``r_s(tau)``, stored as breakpoints.

    ``curves[s]`` lists ``(tau, r)`` pairs with strictly increasing ``tau``;
    ``r_s`` takes value ``r`` on ``[tau_i, tau_{i+1})`` and 0 before the first.
    """

    metric: str
    n_problems: int
    curves: dict[str, list[tuple[float, float]]] = field(default_factory=dict)

    @property
    def solvers(self) -> list[str]:
        return list(self.curves)

    def value(self, solver: str, tau: float) -> float:
        r = 0.0
        for t, v in self.curves[solver]:
            if t <= tau:
                r = v
            else:
                break
        return r

    def final(self, solver: str) -> float:
        pts = self.curves[solver]
        return pts[-1][1] if pts else 0.0

    def rows(self):
        for s in sorted(self.curves):
            for t, r in self.curves[s]:
                yield s, t, r


def log_ratios(records, metric: str) -> dict[str, dict[str, float]]:
    """``log2(metric / best)`` per solver and problem (``inf`` for failures)."""
    metric = METRICS.get(metric, None) or metric
    if metric not in METRICS.values():
        raise ValueError(f"unknown metric {metric!r}")
    table: dict[str, dict[str, float]] = {}
    for rec in records:
        table.setdefault(rec.solver, {})[rec.problem] = rec.metric(metric)
    problems = sorted({p for row in table.values() for p in row})
    out: dict[str, dict[str, float]] = {s: {} for s in table}
    for p in problems:
        vals = [row.get(p, math.inf) for row in table.values()]
        best = min(vals)
        for s, row in table.items():
            v = row.get(p, math.inf)
            if math.isinf(v) or math.isinf(best):
                out[s][p] = math.inf
            elif best <= 0.0:
                out[s][p] = 0.0 if v <= 0.0 else math.inf
            else:
                out[s][p] = math.log2(v / best)
    return out


def performance_profile(records, metric: str = "iters") -> PerformanceProfile:
    records = list(records)
    if not records:
        raise EmptyInput("no records to profile")
    ratios = log_ratios(records, metric)
    n_p = len({r.problem for r in records})
    prof = PerformanceProfile(METRICS.get(metric, metric), n_p)
    for s in sorted(ratios):
        finite = sorted(v for v in ratios[s].values() if math.isfinite(v))
        pts: list[tuple[float, float]] = []
        for i, t in enumerate(finite):
            r = (i + 1) / n_p
            if pts and pts[-1][0] == t:
                pts[-1] = (t, r)
            else:
                pts.append((t, r))
        prof.curves[s] = pts
    return prof


# -- serialization -------------------------------------------------------------
@contextmanager
def _open_sink(sink, mode="w"):
    if isinstance(sink, (str, os.PathLike)):
        try:
            fh = open(sink, mode, newline="")
        except OSError as exc:
            raise OSError(f"{sink}: {exc.strerror}") from exc
        with fh:
            yield fh
    else:
        yield sink


def _record_row(rec: BenchmarkRecord) -> dict:
    return {"solver": rec.solver, "problem": rec.problem, "outcome": rec.outcome,
            "iters": rec.iters, "gevals": rec.gevals, "seconds": repr(float(rec.seconds)),
            "rel_gnorm": repr(float(rec.rel_gnorm))}


def emit(obj, fmt: str = "csv", sink=None):
    """Write records (a list of :class:`BenchmarkRecord`) or a profile.

    ``fmt`` is ``csv`` or ``jsonl``. Returns the text when ``sink`` is None.
    """
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(obj, PerformanceProfile):
        fields = PROFILE_FIELDS
        rows = [{"solver": s, "tau": repr(float(t)), "r": repr(float(r))} for s, t, r in obj.rows()]
    else:
        fields = RECORD_FIELDS
        rows = [_record_row(rec) for rec in obj]
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        for row in rows:
            row = {k: (float(v) if k in ("tau", "r", "seconds", "rel_gnorm") else v)
                   for k, v in row.items()}
            buf.write(json.dumps(row, allow_nan=True) + "\n")
    text = buf.getvalue()
    if sink is None:
        return text
    with _open_sink(sink) as fh:
        fh.write(text)
    return None


def _parse_record(row: dict, where: str) -> BenchmarkRecord:
    try:
        return BenchmarkRecord(str(row["solver"]), str(row["problem"]), str(row["outcome"]),
                               int(row["iters"]), int(row["gevals"]), float(row["seconds"]),
                               float(row["rel_gnorm"]))
    except KeyError as exc:
        raise ParseError(f"{where}: missing column {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def read_records(source, fmt: str | None = None) -> list[BenchmarkRecord]:
    """Parse records CSV/JSON-lines from a path, file object or text."""
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        if fmt is None:
            fmt = "jsonl" if str(source).endswith((".jsonl", ".json")) else "csv"
        with open(source, newline="") as fh:
            text = fh.read()
    elif hasattr(source, "read"):
        text = source.read()
    else:
        text = str(source)
    if fmt is None:
        fmt = "jsonl" if text.lstrip().startswith("{") else "csv"
    out = []
    if fmt == "jsonl":
        for lineno, line in enumerate(text.splitlines(), start=1):
            if line.strip():
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"line {lineno}: {exc.msg}") from None
                out.append(_parse_record(row, f"line {lineno}"))
        return out
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in RECORD_FIELDS if c not in (reader.fieldnames or [])]
    if missing:
        raise ParseError(f"line 1: missing column {missing[0]!r}")
    for lineno, row in enumerate(reader, start=2):
        out.append(_parse_record(row, f"line {lineno}"))
    return out


def read_profile(source) -> PerformanceProfile:
    """Parse a profile CSV back (``n_problems`` is not stored and is set to 0)."""
    text = source.read() if hasattr(source, "read") else open(source).read()
    prof = PerformanceProfile("?", 0)
    for row in csv.DictReader(io.StringIO(text)):
        prof.curves.setdefault(row["solver"], []).append((float(row["tau"]), float(row["r"])))
    return prof


def gnuplot_script(profile: PerformanceProfile, csv_path: str, output: str | None = None) -> str:
    """Gnuplot script drawing one step curve per solver from a profile CSV."""
    lines = ["# performance profile: " + profile.metric,
             "set datafile separator ','",
             "set key bottom right",
             "set xlabel 'tau (log2 ratio to best)'",
             f"set ylabel 'r(tau), metric = {profile.metric}'",
             "set yrange [0:1.05]",
             "set xrange [0:*]"]
    if output:
        lines += ["set terminal pngcairo size 800,600", f"set output '{output}'"]
    curves = []
    for s in sorted(profile.curves):
        curves.append(f"'{csv_path}' every ::1 using 2:(strcol(1) eq '{s}' ? $3 : 1/0) "
                      f"with steps title '{s}'")
    lines.append("plot " + ", \\\n     ".join(curves) if curves else "# no curves")
    return "\n".join(lines) + "\n"


def emit_plot_script(profile: PerformanceProfile, csv_path: str, sink, output: str | None = None):
    with _open_sink(sink) as fh:
        fh.write(gnuplot_script(profile, csv_path, output))


# -- cycle demonstration -----------------------------------------------------------
@dataclass
class CycleDemo:
    problem: object
    alpha1: float
    pure_iterates: np.ndarray
    max_drift: float
    periods: int
    cycles: bool
    adaptive: Trace
    converges: bool

    @property
    def ok(self) -> bool:
        return self.cycles and self.converges


def run_cycle_demo(b: float = 1.0, periods: int = 50, drift_tol: float = 1e-8,
                   x_tol: float = 1e-4) -> CycleDemo:
    """Pure long-KGD iteration vs KGDadp on the four-point cycle function."""
    from .problems.cycle import make_cycle_problem

    prob = make_cycle_problem(b)
    n_iter = 4 * periods + 4
    cfg = SolverConfig(max_iter=n_iter, tol=0.0, cycle_check=False)
    pure = pure_iterate(prob, rule=KGD_LONG, config=cfg)
    xs = pure.iterates()[:, 0]
    pts = prob.cycle_points()
    expect = pts[np.arange(xs.size) % 4]
    drift = float(np.max(np.abs(xs - expect) / np.abs(expect)))
    alpha1 = pure.states[1].alpha
    cycles = (xs.size >= 4 * periods + 1 and drift <= drift_tol
              and abs(alpha1 - 0.5) <= 1e-12)
    adp = kgdadp(prob, config=SolverConfig(rule=KGD_LONG))
    converges = adp.converged and abs(float(adp.x[0])) <= x_tol
    return CycleDemo(prob, alpha1, xs, drift, periods, cycles, adp, converges)

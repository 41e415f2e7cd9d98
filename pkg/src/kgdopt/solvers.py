"""Gradient iterations: the pure step-size recursion, the adaptive KGDadp
method with its nonmonotone Regime-0 shrink loop, and stabilized BB1."""

from __future__ import annotations

import dataclasses
import math
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .core import EvalCounter, IterationState, Problem, Termination, Trace, evaluate
from .errors import InnerLoopStall, NonFinite, StepError
from .stepsize import (
    KGD_LONG,
    RuleTag,
    StabilizerConfig,
    StepPair,
    StepRule,
    kgd0,
    next_step,
    stab_cap,
)

CYCLE_RTOL = 1e-8
CYCLE_CONFIRMATIONS = 8


@dataclass
class SolverConfig:
    """Parameters shared by all drivers.

    ``alpha0=None`` means: use the problem's suggested first step if it has
    one, else ``1/||g0||``.
    """

    eta: float = 1e-4
    memory: int = 20
    tol: float = 1e-6
    max_iter: int = 100_000
    alpha0: float | None = None
    max_shrinks: int = 100
    rule: StepRule = field(default=KGD_LONG)
    record_states: bool = True
    cycle_check: bool = True

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0 / 3.0:
            raise ValueError("eta must lie in (0, 1/3)")
        if int(self.memory) < 1:
            raise ValueError("memory M must be >= 1")
        if not self.tol >= 0.0:
            raise ValueError("tol must be nonnegative")
        if int(self.max_iter) < 1 or int(self.max_shrinks) < 1:
            raise ValueError("iteration caps must be positive")
        if self.alpha0 is not None and not (math.isfinite(self.alpha0) and self.alpha0 > 0):
            raise ValueError("alpha0 must be finite and positive")

    def replace(self, **changes) -> SolverConfig:
        return dataclasses.replace(self, **changes)


class FHistory:
    """Window of the last ``min(k, M) + 1`` accepted objective values."""

    def __init__(self, memory: int):
        self.memory = int(memory)
        self._buf = deque(maxlen=self.memory + 1)

    def push(self, f: float):
        self._buf.append(float(f))

    def __len__(self):
        return len(self._buf)

    def __iter__(self):
        return iter(self._buf)

    def ref(self) -> float:
        return nonmonotone_ref(self)


def nonmonotone_ref(history) -> float:
    """Reference value ``max_{0<=j<=min(k,M)} f(x_{k-j})``."""
    vals = list(history)
    if not vals:
        raise ValueError("empty history")
    return max(vals)


def _candidate(rule: StepRule, pair: StepPair, g_new_norm: float) -> tuple[float, bool]:
    """Next step from ``rule``; falls back to ``1/||g_new||`` when undefined."""
    try:
        a = next_step(rule, pair)
    except StepError:
        a = math.nan
    if math.isfinite(a) and a > 0.0:
        return a, False
    if g_new_norm > 0.0:
        return 1.0 / g_new_norm, True
    return pair.alpha_prev, True


class _Recorder:
    def __init__(self, keep_all: bool):
        self.keep_all = keep_all
        self.states: list[IterationState] = []

    def add(self, st: IterationState):
        if self.keep_all or len(self.states) < 2:
            self.states.append(st)
        else:
            self.states[-1] = st


def _run(problem: Problem, x0, config: SolverConfig, rule: StepRule, *,
         adaptive: bool, stabilizer: StabilizerConfig | None = None,
         label: str = "") -> Trace:
    counter = EvalCounter()
    rec = _Recorder(config.record_states)
    trace = Trace(solver=label)
    t0 = time.perf_counter()

    def finish(term: Termination, x, f, g, gnorm, k, alpha, msg=""):
        rec.add(IterationState(k=k, x=x, f=f, g=g, g_norm=gnorm, alpha=alpha))
        trace.states = rec.states
        trace.termination = term
        trace.x = x
        trace.message = msg
        trace.fevals, trace.gevals = counter.fevals, counter.gevals
        trace.seconds = time.perf_counter() - t0
        return trace

    if x0 is None:
        x0 = problem.x0
    if x0 is None:
        raise ValueError(f"no starting point given and {problem.name} has no default")
    x = np.array(x0, dtype=float)
    f, g = evaluate(problem, x, counter)
    gnorm = float(np.linalg.norm(g))
    thresh = config.tol * gnorm

    alpha = config.alpha0 if config.alpha0 is not None else problem.alpha0
    if alpha is None:
        alpha = 1.0 / gnorm if gnorm > 0.0 else 1.0

    hist = FHistory(config.memory)
    hist.push(f)
    recent = deque([(x, g)], maxlen=5)
    cycle_hits = 0
    was_reset = False
    s_norms: list[float] = []
    k = 0
    while True:
        if gnorm <= thresh:
            return finish(Termination.CONVERGED, x, f, g, gnorm, k, alpha)
        if k >= config.max_iter:
            return finish(Termination.BUDGET_EXHAUSTED, x, f, g, gnorm, k, alpha)

        gg = gnorm * gnorm
        alpha_init = alpha
        shrinks = 0
        f_ref = hist.ref() if adaptive else None
        while True:
            x_t = x - alpha * g
            try:
                f_t, g_t = evaluate(problem, x_t, counter)
            except NonFinite as exc:
                if not adaptive:
                    return finish(Termination.NUMERICAL_FAILURE, x, f, g, gnorm, k, alpha, str(exc))
                shrinks += 1
                if shrinks > config.max_shrinks:
                    return finish(Termination.NUMERICAL_FAILURE, x, f, g, gnorm, k, alpha,
                                  f"InnerLoopStall: {exc}")
                alpha *= 0.5
                continue
            if not adaptive or f_t <= f_ref - config.eta * alpha * gg:
                break
            shrinks += 1
            if shrinks > config.max_shrinks:
                err = InnerLoopStall(f"no acceptable step after {config.max_shrinks} shrinks")
                return finish(Termination.NUMERICAL_FAILURE, x, f, g, gnorm, k, alpha, str(err))
            try:
                df = problem.step_difference(f, g, f_t, g_t, alpha)
                alpha = kgd0(StepPair(0.0, df, g, g_t, alpha))
            except StepError as exc:
                return finish(Termination.NUMERICAL_FAILURE, x, f, g, gnorm, k, alpha, str(exc))

        trace.shrinks += shrinks
        rec.add(IterationState(k=k, x=x, f=f, g=g, g_norm=gnorm, alpha=alpha,
                               alpha_init=alpha_init, shrinks=shrinks, f_ref=f_ref,
                               reset=was_reset))

        gnorm_t = float(np.linalg.norm(g_t))
        pair = StepPair(0.0, problem.step_difference(f, g, f_t, g_t, alpha), g, g_t, alpha)
        alpha_next, reset = _candidate(rule, pair, gnorm_t)
        if stabilizer is not None:
            s_norms.append(alpha * gnorm)
            if stabilizer.delta is None and len(s_norms) == 3:
                stabilizer.fix_delta(s_norms)
            if stabilizer.delta is not None:
                # cap uses the gradient norm at the point just left
                alpha_next = stab_cap(alpha_next, gnorm, stabilizer)
        was_reset = reset

        x, f, g, gnorm, alpha = x_t, f_t, g_t, gnorm_t, alpha_next
        hist.push(f)
        k += 1

        if config.cycle_check and not adaptive:
            recent.append((x, g))
            if len(recent) == 5 and gnorm > thresh:
                old, g_old = recent[0]
                # a true cycle repeats the gradient too; slow convergence does not
                if (np.linalg.norm(x - old) <= CYCLE_RTOL * (1.0 + np.linalg.norm(old))
                        and np.linalg.norm(g - g_old) <= CYCLE_RTOL * np.linalg.norm(g_old)):
                    cycle_hits += 1
                else:
                    cycle_hits = 0
                if cycle_hits >= CYCLE_CONFIRMATIONS:
                    return finish(Termination.CYCLE_SUSPECTED, x, f, g, gnorm, k, alpha,
                                  "iterates repeat with period 4")


def pure_iterate(problem: Problem, x0=None, alpha0: float | None = None,
                 rule: StepRule | None = None, config: SolverConfig | None = None) -> Trace:
    """Run ``x+ = x - alpha g``, ``alpha+ = rule(...)`` with no acceptance test."""
    config = config or SolverConfig()
    if alpha0 is not None:
        config = config.replace(alpha0=alpha0)
    rule = rule or config.rule
    return _run(problem, x0, config, rule, adaptive=False, label=f"pure-{rule.tag.value}")


def kgdadp(problem: Problem, x0=None, config: SolverConfig | None = None) -> Trace:
    """Adaptive KGD method: Regime-0 shrinks under a nonmonotone Armijo test,
    then ``config.rule`` proposes the next trial step."""
    config = config or SolverConfig()
    return _run(problem, x0, config, config.rule, adaptive=True,
                label=f"kgdadp-{config.rule.tag.value}")


def bbstab(problem: Problem, x0=None, config: SolverConfig | None = None,
           c: float = 1.0) -> Trace:
    """BB1 with the step capped at ``delta/||g||`` once ``delta`` is known."""
    config = config or SolverConfig()
    stab = StabilizerConfig(c=c)
    rule = StepRule(RuleTag.BB1, stabilizer=stab)
    return _run(problem, x0, config, rule, adaptive=False, stabilizer=stab,
                label=f"bb1stab(c={c:g})")

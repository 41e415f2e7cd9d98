"""Gradient descent with Kahan's automatic step sizes, Barzilai-Borwein steps
and the adaptive KGDadp globalization."""

from .core import (
    EvalCounter,
    FunctionProblem,
    IterationState,
    Problem,
    SmoothnessBounds,
    Termination,
    Trace,
    evaluate,
    finite_difference_gradient,
)
from .solvers import FHistory, SolverConfig, bbstab, kgdadp, nonmonotone_ref, pure_iterate
from .stepsize import (
    BB1,
    BB2,
    KGD_LONG,
    KGD_SHORT,
    RuleTag,
    StabilizerConfig,
    StepPair,
    StepRule,
    bb1,
    bb2,
    constant_rule,
    kgd0,
    kgd1_long,
    kgd1_short,
    stab_cap,
)

__version__ = "0.1.0"

__all__ = [
    "EvalCounter", "FunctionProblem", "IterationState", "Problem", "SmoothnessBounds",
    "Termination", "Trace", "evaluate", "finite_difference_gradient",
    "FHistory", "SolverConfig", "bbstab", "kgdadp", "nonmonotone_ref", "pure_iterate",
    "BB1", "BB2", "KGD_LONG", "KGD_SHORT", "RuleTag", "StabilizerConfig", "StepPair", "StepRule",
    "bb1", "bb2", "constant_rule", "kgd0", "kgd1_long", "kgd1_short", "stab_cap",
]

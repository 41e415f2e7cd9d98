"""Problem abstraction, iteration records and evaluation counting."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NonFinite


@dataclass(frozen=True)
class SmoothnessBounds:
    """Curvature constants of an objective over its sublevel set.

    For quadratics these are exact: ``lambda_max``/``lambda_min`` are the
    extreme Hessian eigenvalues and ``hessian_lipschitz`` is zero.
    """

    lambda_max: float
    lambda_min: float = 0.0
    hessian_lipschitz: float = 0.0
    gradient_sup: float | None = None

    def __post_init__(self):
        vals = [self.lambda_max, self.lambda_min, self.hessian_lipschitz]
        if self.gradient_sup is not None:
            vals.append(self.gradient_sup)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("smoothness bounds must be finite")
        if not (self.lambda_max > 0 and self.lambda_max >= self.lambda_min >= 0):
            raise ValueError("need lambda_max >= lambda_min >= 0 and lambda_max > 0")
        if self.hessian_lipschitz < 0 or (self.gradient_sup is not None and self.gradient_sup < 0):
            raise ValueError("Lipschitz constant and gradient bound must be nonnegative")


class Problem:
    """A smooth objective ``f: R^n -> R`` with its gradient.

    Subclasses implement :meth:`value` and :meth:`gradient` (and may override
    :meth:`value_and_gradient` when the two share work). Instances must be
    immutable after construction so several runs can evaluate them at once.

    Optional metadata:

    ``x0``
        Suggested starting point.
    ``alpha0``
        Suggested first step; solvers fall back to ``1/||g0||``.
    ``x_star``
        Known minimizer.
    ``bounds``
        :class:`SmoothnessBounds`, when known.
    """

    name = "problem"
    x0: np.ndarray | None = None
    alpha0: float | None = None
    x_star: np.ndarray | None = None
    bounds: SmoothnessBounds | None = None

    def __init__(self, n: int):
        if int(n) < 1:
            raise ValueError("dimension must be positive")
        self.n = int(n)

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value_and_gradient(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        return self.value(x), self.gradient(x)

    def step_difference(self, f, g, f_new, g_new, alpha) -> float:
        """``f(x_new) - f(x)`` for ``x_new = x - alpha * g``.

        The default subtracts the evaluated values; problems with an exact
        identity for the difference may override it.
        """
        return f_new - f

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r} n={self.n}>"


class FunctionProblem(Problem):
    """Wrap a pair of plain callables as a :class:`Problem`."""

    def __init__(self, f, grad, n, name="function", x0=None, x_star=None, alpha0=None, bounds=None):
        super().__init__(n)
        self._f = f
        self._grad = grad
        self.name = name
        self.x0 = None if x0 is None else np.asarray(x0, dtype=float)
        self.x_star = None if x_star is None else np.asarray(x_star, dtype=float)
        self.alpha0 = alpha0
        self.bounds = bounds

    def value(self, x):
        return float(self._f(x))

    def gradient(self, x):
        return np.asarray(self._grad(x), dtype=float)


@dataclass
class EvalCounter:
    fevals: int = 0
    gevals: int = 0


def evaluate(problem: Problem, x, counter: EvalCounter | None = None) -> tuple[float, np.ndarray]:
    """Return ``(f(x), grad f(x))`` and bump both counters.

    Raises :class:`NonFinite` when the value or any gradient entry is NaN/inf.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ValueError(f"expected a vector of length {problem.n}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise NonFinite("non-finite evaluation point")
    if counter is not None:
        counter.fevals += 1
        counter.gevals += 1
    with np.errstate(over="ignore", invalid="ignore"):
        f, g = problem.value_and_gradient(x)
    f = float(f)
    g = np.asarray(g, dtype=float)
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise NonFinite(f"non-finite objective or gradient in {problem.name}")
    return f, g


def fd_step(x: np.ndarray) -> np.ndarray:
    """Default central-difference step ``1e-6 * (1 + |x_i|)``."""
    return 1e-6 * (1.0 + np.abs(x))


def finite_difference_gradient(problem: Problem, x, h=None) -> np.ndarray:
    """Central-difference gradient of ``problem.value`` at ``x``.

    ``h`` may be a scalar, a per-coordinate array, or a callable mapping
    ``x`` to per-coordinate steps; it defaults to :func:`fd_step`.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFinite("non-finite evaluation point")
    if h is None:
        h = fd_step(x)
    elif callable(h):
        h = h(x)
    h = np.broadcast_to(np.asarray(h, dtype=float), x.shape)
    out = np.empty_like(x)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(x.size):
            xp = x.copy()
            xm = x.copy()
            xp[i] += h[i]
            xm[i] -= h[i]
            # use the actually representable step
            out[i] = (problem.value(xp) - problem.value(xm)) / (xp[i] - xm[i])
    if not np.all(np.isfinite(out)):
        raise NonFinite(f"non-finite finite-difference gradient in {problem.name}")
    return out


class Termination(enum.Enum):
    CONVERGED = "Converged"
    BUDGET_EXHAUSTED = "BudgetExhausted"
    CYCLE_SUSPECTED = "Cycle-suspected"
    NUMERICAL_FAILURE = "NumericalFailure"

    def __str__(self):
        return self.value


@dataclass
class IterationState:
    """Snapshot at iterate ``x_k``.

    ``alpha`` is the step applied at ``x_k`` (after any shrinks); ``alpha_init``
    is the candidate the step rule proposed before the acceptance test, and
    ``f_ref`` the nonmonotone reference value the test compared against.
    For the final state ``alpha`` is the unused next candidate.
    """

    k: int
    x: np.ndarray | None
    f: float
    g: np.ndarray | None
    g_norm: float
    alpha: float
    alpha_init: float | None = None
    shrinks: int = 0
    f_ref: float | None = None
    reset: bool = False


@dataclass
class Trace:
    states: list[IterationState] = field(default_factory=list)
    fevals: int = 0
    gevals: int = 0
    shrinks: int = 0
    seconds: float = 0.0
    termination: Termination | None = None
    x: np.ndarray | None = None
    message: str = ""
    solver: str = ""

    @property
    def iterations(self) -> int:
        """Number of accepted outer steps."""
        return self.states[-1].k if self.states else 0

    @property
    def converged(self) -> bool:
        return self.termination is Termination.CONVERGED

    @property
    def g0_norm(self) -> float:
        return self.states[0].g_norm

    @property
    def rel_gnorm(self) -> float:
        g0 = self.g0_norm
        return self.states[-1].g_norm / g0 if g0 > 0 else 0.0

    @property
    def f(self) -> float:
        return self.states[-1].f

    def iterates(self) -> np.ndarray:
        return np.array([s.x for s in self.states])

    def steps(self) -> np.ndarray:
        return np.array([s.alpha for s in self.states])

    def fvalues(self) -> np.ndarray:
        return np.array([s.f for s in self.states])

    def gnorms(self) -> np.ndarray:
        return np.array([s.g_norm for s in self.states])

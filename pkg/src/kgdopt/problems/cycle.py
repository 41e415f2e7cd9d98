"""One-dimensional strongly convex function on which the pure long KGD
iteration cycles through ``-b -> -a -> b -> a``.

    f(x) = (x - b)^2                 x <= -a
           c1 x^4 + c2 x^2 + c3      |x| < a
           (x + b)^2                 x >= a

Starting from ``x0 = -b`` with the step that lands on ``x1 = -a``, both points
sit on the left parabola (curvature 2), so every rule returns ``alpha1 = 1/2``
and ``x2 = b``. Asking the long rule for ``alpha2 = (b - a)/(4b)`` (which sends
``x2`` to ``a``) reads, with ``f(b) = 4b^2``, ``f(-a) = (a + b)^2`` and
``||g(-a)||^2 = 4(a + b)^2``:

    (1 + t)^2 / (2 ((1 + t)^2 + 4)) = (1 - t) / 4,     t = a / b,

which only involves ``t``. Symmetry closes the cycle.
"""

from __future__ import annotations

import numpy as np

from ..core import Problem
from ..errors import NoRootBracketed


def cycle_residual(t: float) -> float:
    """Long KGD step at ``x2 = b`` minus the step that lands on ``a``."""
    u2 = (1.0 + t) ** 2
    return u2 / (2.0 * (u2 + 4.0)) - (1.0 - t) / 4.0


def bisect(fun, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoRootBracketed(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        if fm == 0.0 or (hi - lo) <= 4e-16 * max(1.0, abs(mid)):
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    if abs(fun(0.5 * (lo + hi))) > tol:
        raise NoRootBracketed("bisection did not converge")
    return 0.5 * (lo + hi)


def cycle_ratio() -> float:
    """Root ``t = a/b`` in (0, 1) of :func:`cycle_residual`."""
    t = bisect(cycle_residual, 1e-6, 1.0 - 1e-6)
    if abs(cycle_residual(t)) > 1e-12:
        raise NoRootBracketed(f"residual {cycle_residual(t):.3e} at t={t}")
    return t


def middle_coefficients(a: float, b: float) -> tuple[float, float, float]:
    """Quartic coefficients giving C^2 contact with ``(x + b)^2`` at ``x = a``."""
    M = np.array([[a**4, a**2, 1.0],
                  [4 * a**3, 2 * a, 0.0],
                  [12 * a**2, 2.0, 0.0]])
    rhs = np.array([(a + b) ** 2, 2 * (a + b), 2.0])
    c1, c2, c3 = np.linalg.solve(M, rhs)
    return float(c1), float(c2), float(c3)


class CycleProblem(Problem):
    def __init__(self, b: float = 1.0):
        if not b > 0:
            raise ValueError("b must be positive")
        super().__init__(1)
        self.t = cycle_ratio()
        self.b = float(b)
        self.a = self.t * self.b
        self.c1, self.c2, self.c3 = middle_coefficients(self.a, self.b)
        self.name = f"cycle-b{self.b:g}"
        self.x0 = np.array([-self.b])
        # first step sends -b to -a
        self.alpha0 = (self.b - self.a) / (4.0 * self.b)
        self.x_star = np.zeros(1)

    def fun(self, x: float) -> float:
        a, b = self.a, self.b
        if x <= -a:
            return (x - b) ** 2
        if x >= a:
            return (x + b) ** 2
        return (self.c1 * x * x + self.c2) * x * x + self.c3

    def grad(self, x: float) -> float:
        a, b = self.a, self.b
        if x <= -a:
            return 2.0 * (x - b)
        if x >= a:
            return 2.0 * (x + b)
        return (4.0 * self.c1 * x * x + 2.0 * self.c2) * x

    def value(self, x):
        return self.fun(float(x[0]))

    def gradient(self, x):
        return np.array([self.grad(float(x[0]))])

    def cycle_points(self) -> np.ndarray:
        return np.array([-self.b, -self.a, self.b, self.a])


def make_cycle_problem(b: float = 1.0) -> CycleProblem:
    return CycleProblem(b)

import numpy as np

from ..core import Problem


class RaydanSC2(Problem):
    """``f(x) = sum_i i (exp(x_i) - x_i) / 10`` ("strongly convex 2"), minimizer 0."""

    def __init__(self, n: int, x0=None):
        super().__init__(n)
        self.name = f"raydan-sc2-{n}"
        self.w = np.arange(1, self.n + 1, dtype=float) / 10.0
        self.x0 = np.ones(self.n) if x0 is None else np.asarray(x0, dtype=float)
        self.x_star = np.zeros(self.n)

    def value(self, x):
        return float(self.w @ (np.exp(x) - x))

    def gradient(self, x):
        return self.w * (np.exp(x) - 1.0)

    def value_and_gradient(self, x):
        e = np.exp(x)
        return float(self.w @ (e - x)), self.w * (e - 1.0)


def raydan_sc2(n: int, x0=None) -> RaydanSC2:
    if n < 1:
        raise ValueError("n must be >= 1")
    return RaydanSC2(n, x0=x0)

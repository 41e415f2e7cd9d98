"""L2-regularized binary logistic regression."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from ..core import Problem, SmoothnessBounds
from ..errors import BadLabel, EmptyInput, PowerIterationStall

DENSE_LIMIT = 10**6


def _check_labels(y) -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if not np.all((y == 0.0) | (y == 1.0)):
        bad = y[(y != 0.0) & (y != 1.0)][0]
        raise BadLabel(f"label {bad!r} not in {{0, 1}}")
    return y


def logistic_loss(z, y) -> np.ndarray:
    """Per-sample ``-y log s(z) - (1-y) log(1-s(z)) = log(1+e^{-z}) + (1-y) z``."""
    return np.logaddexp(0.0, -z) + (1.0 - y) * z


class LogisticProblem(Problem):
    def __init__(self, A, y, gamma: float = 0.0, name="logistic", x0=None):
        if sp.issparse(A):
            A = sp.csr_matrix(A, dtype=float)
            if A.shape[0] * A.shape[1] < DENSE_LIMIT:
                A = A.toarray()
        else:
            A = np.atleast_2d(np.asarray(A, dtype=float))
        m, n = A.shape
        if m < 1:
            raise EmptyInput("design matrix has no rows")
        if gamma < 0:
            raise ValueError("gamma must be nonnegative")
        super().__init__(n)
        self.A = A
        self.y = _check_labels(y)
        if self.y.size != m:
            raise ValueError(f"{m} rows but {self.y.size} labels")
        self.m = m
        self.gamma = float(gamma)
        self.name = name
        self.x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float)
        self._L = None

    def value(self, x):
        z = self.A @ x
        return float(np.mean(logistic_loss(z, self.y))) + 0.5 * self.gamma * float(x @ x)

    def gradient(self, x):
        z = self.A @ x
        return self.A.T @ (expit(z) - self.y) / self.m + self.gamma * x

    def value_and_gradient(self, x):
        z = self.A @ x
        f = float(np.mean(logistic_loss(z, self.y))) + 0.5 * self.gamma * float(x @ x)
        g = self.A.T @ (expit(z) - self.y) / self.m + self.gamma * x
        return f, np.asarray(g).ravel()

    @property
    def lipschitz(self) -> float:
        if self._L is None:
            self._L = smoothness_constant(self)
        return self._L

    @property
    def smoothness(self) -> SmoothnessBounds:
        return SmoothnessBounds(lambda_max=self.lipschitz, lambda_min=self.gamma)


def make_logistic(A, y, gamma: float = 0.0, name="logistic") -> LogisticProblem:
    return LogisticProblem(A, y, gamma, name=name)


def synth_logistic(m: int, n: int, seed=None, gamma: float | None = None) -> LogisticProblem:
    """Gaussian design, planted Gaussian weights, Bernoulli labels; ``gamma = 1/m`` by default."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    w = rng.standard_normal(n)
    y = (rng.random(m) < expit(A @ w)).astype(float)
    gamma = 1.0 / m if gamma is None else gamma
    return LogisticProblem(A, y, gamma, name=f"logistic-m{m}-n{n}-s{seed}")


def gram_lambda_max(A, seed=0, rtol=1e-8, max_iter=10_000) -> float:
    """Largest eigenvalue of ``A'A`` by power iteration."""
    n = A.shape[1]
    if A.shape[0] == 0 or n == 0:
        raise EmptyInput("empty matrix")
    v = np.random.default_rng(seed).standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = A.T @ (A @ v)
        w = np.asarray(w).ravel()
        lam_new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(lam_new - lam) <= rtol * abs(lam_new):
            return lam_new
        lam = lam_new
    raise PowerIterationStall(f"no convergence in {max_iter} iterations")


def smoothness_constant(problem: LogisticProblem, scaled: bool = True, seed=0) -> float:
    """Gradient Lipschitz constant ``lambda_max(A'A)/(4m) + gamma``.

    ``scaled=False`` drops the ``1/m``, i.e. ``lambda_max(A'A)/4 + gamma``.
    """
    lam = gram_lambda_max(problem.A, seed=seed)
    return 0.25 * lam / (problem.m if scaled else 1) + problem.gamma

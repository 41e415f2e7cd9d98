"""Strongly convex quadratics ``f(x) = x'Hx/2 + b'x`` with a prescribed spectrum."""

from __future__ import annotations

import numpy as np

from ..core import Problem, SmoothnessBounds
from ..errors import DegenerateSpectrum


def random_orthogonal(n: int, seed=None) -> np.ndarray:
    """Haar-distributed orthogonal matrix from the QR factor of a Gaussian draw."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


class QuadraticProblem(Problem):
    """``H = Q' diag(spectrum) Q`` stored alongside its factors."""

    def __init__(self, spectrum, Q, b, x0=None, name="quadratic", exact_differences=True):
        lam = np.asarray(spectrum, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("spectrum must be a non-empty vector")
        if np.any(~np.isfinite(lam)) or np.any(lam <= 0):
            raise DegenerateSpectrum("all eigenvalues must be finite and positive")
        super().__init__(lam.size)
        order = np.argsort(lam)
        self.spectrum = lam[order]
        self.Q = np.asarray(Q, dtype=float)[order]
        H = (self.Q.T * self.spectrum) @ self.Q
        self.H = 0.5 * (H + H.T)
        self.b = np.asarray(b, dtype=float).reshape(self.n)
        self.name = name
        self.exact_differences = exact_differences
        # x* = -H^{-1} b via the factorization
        self.x_star = -(self.Q.T @ ((self.Q @ self.b) / self.spectrum))
        self.x0 = np.zeros(self.n) if x0 is None else np.asarray(x0, dtype=float)
        self.bounds = SmoothnessBounds(lambda_max=float(self.spectrum[-1]),
                                       lambda_min=float(self.spectrum[0]),
                                       hessian_lipschitz=0.0)

    @property
    def kappa(self) -> float:
        return float(self.spectrum[-1] / self.spectrum[0])

    @property
    def f_star(self) -> float:
        return 0.5 * float(self.b @ self.x_star)

    def value(self, x):
        return 0.5 * float(x @ (self.H @ x)) + float(self.b @ x)

    def gradient(self, x):
        return self.H @ x + self.b

    def value_and_gradient(self, x):
        hx = self.H @ x
        return 0.5 * float(x @ hx) + float(self.b @ x), hx + self.b

    def step_difference(self, f, g, f_new, g_new, alpha):
        # f(x_new) - f(x) = (g + g_new)'(x_new - x) / 2, free of cancellation
        if not self.exact_differences:
            return f_new - f
        return -0.5 * alpha * float((g + g_new) @ g)

    def sqrt_hessian(self) -> np.ndarray:
        S = (self.Q.T * np.sqrt(self.spectrum)) @ self.Q
        return 0.5 * (S + S.T)


def make_quadratic(spectrum, b=None, seed=None, x0=None, name="quadratic",
                   exact_differences=True) -> QuadraticProblem:
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.size and np.any(spectrum <= 0):
        raise DegenerateSpectrum("all eigenvalues must be positive")
    n = spectrum.size
    b = np.zeros(n) if b is None else b
    return QuadraticProblem(spectrum, random_orthogonal(n, seed), b, x0=x0, name=name,
                            exact_differences=exact_differences)


def random_quadratic(n: int, kappa: float, seed=None, name=None,
                     exact_differences=True) -> QuadraticProblem:
    """Seeded SPD quadratic with spectrum in ``[1, kappa]`` (both ends attained),
    Gaussian linear term and start ``x0 = 0``."""
    if n < 1 or kappa < 1:
        raise ValueError("need n >= 1 and kappa >= 1")
    rng = np.random.default_rng(seed)
    if n == 1:
        spectrum = np.array([1.0])
    else:
        spectrum = np.concatenate([[1.0, float(kappa)], rng.uniform(1.0, kappa, n - 2)])
    b = rng.standard_normal(n)
    Q = random_orthogonal(n, rng)
    return QuadraticProblem(spectrum, Q, b,
                            name=name or f"quadratic-n{n}-k{kappa:g}-s{seed}",
                            exact_differences=exact_differences)


def half_power_transform(q: QuadraticProblem):
    """Quadratic ``phi(w) = w'Hw/2 + (H^{1/2} b)'w`` and the map ``x -> H^{1/2} x``.

    Gradient steps on ``phi`` from ``w0 = H^{1/2} x0`` track the short-step
    iterates on ``q`` with the long-step rule.
    """
    S = q.sqrt_hessian()

    def to_w(x):
        return S @ np.asarray(x, dtype=float)

    phi = QuadraticProblem(q.spectrum, q.Q, S @ q.b, x0=to_w(q.x0), name=f"{q.name}-half-power",
                           exact_differences=q.exact_differences)
    return phi, to_w

import math

import numpy as np
import pytest

from kgdopt import (
    EvalCounter,
    FunctionProblem,
    SmoothnessBounds,
    SolverConfig,
    Termination,
    evaluate,
    finite_difference_gradient,
    kgdadp,
)
from kgdopt.errors import NonFinite
from kgdopt.problems import (
    make_cycle_problem,
    make_logistic,
    make_quadratic,
    raydan_sc2,
    random_quadratic,
    synth_logistic,
)


def half_square(n=1):
    return FunctionProblem(lambda x: 0.5 * x @ x, lambda x: x.copy(), n)


def test_evaluate_centered_quadratic():
    f, g = evaluate(make_quadratic([1.0, 1.0], seed=3), np.zeros(2))
    assert f == 0.0
    assert np.all(g == 0.0)


def test_evaluate_diag_quadratic():
    q = make_quadratic([1.0, 2.0], seed=0)
    # rotate into the basis where H = diag(1, 2)
    x = q.Q.T @ np.array([1.0, 1.0])
    f, g = evaluate(q, x)
    assert f == pytest.approx(1.5, rel=1e-14)
    np.testing.assert_allclose(q.Q @ g, [1.0, 2.0], rtol=1e-14)


def test_evaluate_logistic_single_sample():
    p = make_logistic(np.array([[1.0, 0.0]]), [1.0], gamma=0.0)
    f, g = evaluate(p, np.zeros(2))
    assert f == pytest.approx(math.log(2.0), rel=1e-15)
    np.testing.assert_allclose(g, [-0.5, 0.0], atol=1e-16)


def test_evaluate_counts_and_rejects_nonfinite():
    c = EvalCounter()
    evaluate(half_square(), np.array([1.0]), c)
    evaluate(half_square(), np.array([2.0]), c)
    assert (c.fevals, c.gevals) == (2, 2)
    with pytest.raises(NonFinite):
        evaluate(raydan_sc2(2), np.array([800.0, 0.0]), c)
    with pytest.raises(NonFinite):
        evaluate(half_square(), np.array([np.nan]))
    with pytest.raises(ValueError):
        evaluate(half_square(2), np.zeros(3))


def test_fd_examples():
    assert finite_difference_gradient(half_square(), np.array([1.0]))[0] == pytest.approx(1.0, abs=1e-8)
    np.testing.assert_allclose(finite_difference_gradient(raydan_sc2(2), np.zeros(2)), 0.0, atol=1e-9)
    p = make_logistic(np.array([[1.0, 0.0]]), [1.0])
    np.testing.assert_allclose(finite_difference_gradient(p, np.zeros(2)), [-0.5, 0.0], atol=1e-6)


def test_fd_accepts_scalar_and_callable_steps():
    p = half_square(3)
    x = np.array([1.0, -2.0, 0.5])
    np.testing.assert_allclose(finite_difference_gradient(p, x, h=1e-4), x, rtol=1e-9)
    np.testing.assert_allclose(finite_difference_gradient(p, x, h=lambda z: 1e-5 * np.ones_like(z)), x, rtol=1e-9)


SUITE = [
    lambda: random_quadratic(10, 100, seed=4),
    lambda: random_quadratic(2, 1000, seed=5),
    lambda: raydan_sc2(20),
    lambda: make_cycle_problem(1.0),
    lambda: make_cycle_problem(3.0),
    lambda: synth_logistic(200, 8, seed=1),
]


@pytest.mark.parametrize("make", SUITE)
def test_gradient_matches_finite_differences(make):
    p = make()
    rng = np.random.default_rng(2024)
    x0 = p.x0
    width = 1.0 if p.n > 1 else 0.5 * float(abs(x0[0]))
    worst = 0.0
    for _ in range(20):
        x = x0 + rng.uniform(-width, width, p.n)
        g = p.gradient(x)
        fd = finite_difference_gradient(p, x)
        worst = max(worst, np.max(np.abs(g - fd)) / max(np.max(np.abs(g)), 1e-12))
    assert worst <= 1e-5


@pytest.mark.parametrize("make", SUITE)
def test_evaluation_is_deterministic(make):
    p = make()
    x = p.x0 + 0.1
    f1, g1 = evaluate(p, x)
    f2, g2 = evaluate(p, x)
    assert f1 == f2 and np.array_equal(g1, g2)


def test_smoothness_bounds_validation():
    SmoothnessBounds(2.0, 1.0)
    with pytest.raises(ValueError):
        SmoothnessBounds(1.0, 2.0)
    with pytest.raises(ValueError):
        SmoothnessBounds(math.inf)
    with pytest.raises(ValueError):
        SmoothnessBounds(1.0, 0.0, -1.0)


def test_gradient_evaluation_count_rule():
    # K outer iterations and S shrinks cost exactly K + S + 1 gradients
    for p in [raydan_sc2(50), random_quadratic(20, 1000, seed=1), make_cycle_problem()]:
        t = kgdadp(p)
        assert t.termination is Termination.CONVERGED
        assert t.gevals == t.fevals == t.iterations + t.shrinks + 1
        assert sum(s.shrinks for s in t.states) == t.shrinks


def test_trace_invariants():
    t = kgdadp(random_quadratic(10, 100, seed=9), config=SolverConfig(tol=1e-8))
    assert t.gevals >= t.iterations + 1
    assert t.states[-1].g_norm <= 1e-8 * t.g0_norm
    for s in t.states:
        assert s.alpha > 0 and math.isfinite(s.alpha)
        assert s.g_norm == pytest.approx(np.linalg.norm(s.g), rel=1e-15)

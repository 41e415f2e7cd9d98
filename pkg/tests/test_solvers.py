import math

import numpy as np
import pytest

from kgdopt import (
    BB1,
    BB2,
    KGD_LONG,
    KGD_SHORT,
    FHistory,
    FunctionProblem,
    SolverConfig,
    Termination,
    bbstab,
    constant_rule,
    kgdadp,
    nonmonotone_ref,
    pure_iterate,
)
from kgdopt.problems import half_power_transform, make_cycle_problem, make_quadratic, raydan_sc2, random_quadratic

RULES = [KGD_LONG, KGD_SHORT, BB1, BB2]


def test_nonmonotone_ref_examples():
    assert nonmonotone_ref([3.0]) == 3.0
    assert nonmonotone_ref([1.0, 5.0, 2.0]) == 5.0
    h = FHistory(2)
    for v in [9.0, 1.0, 2.0, 3.0]:
        h.push(v)
    # only the last M + 1 = 3 values count
    assert list(h) == [1.0, 2.0, 3.0]
    assert h.ref() == 3.0
    with pytest.raises(ValueError):
        nonmonotone_ref([])


def test_config_validation():
    for bad in [dict(eta=0.0), dict(eta=0.34), dict(memory=0), dict(tol=-1.0),
                dict(max_iter=0), dict(alpha0=-1.0), dict(alpha0=math.inf)]:
        with pytest.raises(ValueError):
            SolverConfig(**bad)
    assert SolverConfig().replace(memory=3).memory == 3


def test_pure_iterate_exact_on_identity():
    # f = |x|^2/2 with alpha = 1 jumps straight to the minimizer
    q = make_quadratic([1.0, 1.0, 1.0], seed=0, x0=[1.0, -2.0, 3.0])
    t = pure_iterate(q, alpha0=1.0)
    assert t.converged and t.iterations == 1
    np.testing.assert_allclose(t.x, 0.0, atol=1e-14)


def test_pure_constant_rule_follows_gradient_descent():
    q = make_quadratic([1.0, 4.0], seed=2, x0=[1.0, 1.0])
    t = pure_iterate(q, alpha0=0.2, rule=constant_rule(0.2), config=SolverConfig(max_iter=5, tol=0.0))
    x = q.x0.copy()
    for st in t.states:
        np.testing.assert_allclose(st.x, x, rtol=1e-14, atol=1e-15)
        x = x - 0.2 * q.gradient(x)
    assert t.termination is Termination.BUDGET_EXHAUSTED and t.iterations == 5


def test_pure_iteration_stops_on_nonfinite():
    # exp overflows once a huge first step sends x far out
    p = raydan_sc2(3)
    t = pure_iterate(p, alpha0=1e6)
    assert t.termination is Termination.NUMERICAL_FAILURE
    assert np.all(np.isfinite(t.x))


def test_kgdadp_recovers_from_nonfinite_trial():
    p = raydan_sc2(3)
    t = kgdadp(p, config=SolverConfig(alpha0=1e6))
    assert t.converged
    assert t.states[0].shrinks > 0


def test_kgdadp_reports_inner_stall():
    # every trial point off the start evaluates to NaN
    def f(x):
        return float(x @ x) if np.all(x == 1.0) else math.nan

    p = FunctionProblem(f, lambda x: 2 * x, 1, x0=[1.0])
    t = kgdadp(p, config=SolverConfig(max_shrinks=5))
    assert t.termination is Termination.NUMERICAL_FAILURE
    assert "InnerLoopStall" in t.message
    assert t.gevals == 7


def test_budget_exhausted():
    t = kgdadp(random_quadratic(50, 1000, seed=3), config=SolverConfig(max_iter=3))
    assert t.termination is Termination.BUDGET_EXHAUSTED and t.iterations == 3


def test_zero_gradient_start_converges_immediately():
    q = make_quadratic([1.0, 2.0], seed=0)
    t = kgdadp(q)
    assert t.converged and t.iterations == 0 and t.gevals == 1


@pytest.mark.parametrize("rule", RULES, ids=lambda r: r.tag.value)
def test_acceptance_inequality_holds_on_every_step(rule):
    for p in [random_quadratic(50, 1000, seed=5), raydan_sc2(100), make_cycle_problem()]:
        cfg = SolverConfig(rule=rule)
        t = kgdadp(p, config=cfg)
        assert t.converged
        for a, b in zip(t.states, t.states[1:]):
            assert b.f <= a.f_ref - cfg.eta * a.alpha * a.g_norm ** 2
            assert a.f_ref == max(s.f for s in t.states[max(0, a.k - cfg.memory): a.k + 1])


@pytest.mark.parametrize("memory", [1, 5, 20])
def test_reference_values_decrease(memory):
    # F_k = max of the window is nonincreasing and drops strictly every M + 1 steps
    t = kgdadp(random_quadratic(50, 1000, seed=8), config=SolverConfig(memory=memory))
    states = t.states[:-1]
    F = [s.f_ref for s in states]
    assert all(b <= a for a, b in zip(F, F[1:]))
    checked = 0
    for k in range(len(F) - memory - 1):
        # skip the tail where the required decrease is below the resolution of f
        window = states[k: k + memory + 1]
        if min(1e-4 * s.alpha * s.g_norm ** 2 for s in window) <= 4 * np.spacing(abs(F[k])):
            continue
        checked += 1
        assert F[k + memory + 1] < F[k]
    assert checked > 0.8 * (len(F) - memory - 1)


def test_monotone_with_unit_memory_and_strict_armijo():
    t = kgdadp(raydan_sc2(50), config=SolverConfig(memory=1))
    assert t.converged
    f = t.fvalues()
    # window of two values: never exceed the previous reference
    assert all(f[k + 2] < max(f[k], f[k + 1]) for k in range(len(f) - 2))


def test_duality_short_vs_long():
    for seed in range(3):
        q = random_quadratic(10, 100, seed=seed)
        phi, to_w = half_power_transform(q)
        a0 = 1.0 / q.bounds.lambda_max
        cfg = SolverConfig(max_iter=20, tol=0.0)
        ts = pure_iterate(q, alpha0=a0, rule=KGD_SHORT, config=cfg)
        tl = pure_iterate(phi, alpha0=a0, rule=KGD_LONG, config=cfg)
        np.testing.assert_allclose(ts.steps(), tl.steps(), rtol=1e-8)
        np.testing.assert_allclose([to_w(s.x) for s in ts.states], tl.iterates(), rtol=1e-7, atol=1e-9)


def test_kgd_and_bb_traces_coincide():
    q = random_quadratic(10, 100, seed=4)
    cfg = SolverConfig(max_iter=30, tol=0.0)
    a = pure_iterate(q, rule=KGD_LONG, config=cfg)
    b = pure_iterate(q, rule=BB1, config=cfg)
    np.testing.assert_allclose(a.iterates()[1:], b.iterates()[1:], rtol=1e-8)


def test_r_linear_rate_on_quadratic():
    q = random_quadratic(10, 100, seed=6)
    t = kgdadp(q, config=SolverConfig(rule=KGD_SHORT, tol=1e-10))
    K = t.iterations
    assert t.rel_gnorm ** (1.0 / K) <= 1 - 1 / q.kappa + 0.02


def test_stopping_rule_is_relative():
    q = random_quadratic(10, 100, seed=6)
    for tol in (1e-3, 1e-6, 1e-9):
        t = kgdadp(q, config=SolverConfig(tol=tol))
        g = t.gnorms()
        assert g[-1] <= tol * g[0]
        assert np.all(g[:-1] > tol * g[0])


def test_pure_long_cycles_and_adaptive_escapes():
    p = make_cycle_problem()
    t = pure_iterate(p)
    assert t.termination is Termination.CYCLE_SUSPECTED
    assert kgdadp(p).converged


def test_bbstab_caps_steps():
    q = random_quadratic(50, 1000, seed=2)
    t = bbstab(q, c=0.5)
    assert t.converged
    states = t.states
    delta = 0.5 * min(st.alpha * st.g_norm for st in states[:3])
    # from the fourth step on, alpha_k is capped by delta over the previous gradient norm
    for prev, cur in zip(states[2:-1], states[3:-1]):
        assert cur.alpha * prev.g_norm <= delta * (1 + 1e-12)


def test_reset_on_undefined_step():
    # a linear function has zero curvature, so BB1 is undefined after one step
    p = FunctionProblem(lambda x: float(x.sum()), lambda x: np.ones_like(x), 2, x0=[0.0, 0.0])
    t = pure_iterate(p, rule=BB1, config=SolverConfig(max_iter=3))
    assert t.termination is Termination.BUDGET_EXHAUSTED
    assert all(s.reset for s in t.states[1:-1])
    assert all(s.alpha == pytest.approx(1 / math.sqrt(2)) for s in t.states)


def test_record_states_off_keeps_endpoints():
    q = random_quadratic(10, 100, seed=1)
    full = kgdadp(q)
    lean = kgdadp(q, config=SolverConfig(record_states=False))
    assert len(lean.states) == 2
    assert lean.iterations == full.iterations and lean.gevals == full.gevals
    np.testing.assert_array_equal(lean.x, full.x)


@pytest.mark.parametrize("solve", [kgdadp, pure_iterate])
def test_tight_tolerance_is_not_mistaken_for_a_cycle(solve):
    # near the minimizer iterates move less than 1e-8 relative, but the gradient keeps changing
    q = random_quadratic(50, 1000, seed=3)
    t = solve(q, config=SolverConfig(rule=KGD_SHORT, tol=1e-8))
    assert t.termination is Termination.CONVERGED

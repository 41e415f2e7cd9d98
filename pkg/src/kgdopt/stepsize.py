"""Step-size formulas.

Every rule is a pure function of two consecutive points ``x`` and
``x_new = x - alpha * g``, summarised by a :class:`StepPair`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DeltaUnset,
    NonpositiveRadicand,
    NonpositiveStep,
    ZeroCurvature,
    ZeroDenominator,
    ZeroGradient,
)


class RuleTag(enum.Enum):
    KGD_LONG = "kgd-long"
    KGD_SHORT = "kgd-short"
    BB1 = "bb1"
    BB2 = "bb2"
    CONSTANT = "constant"  # fixed-step baseline


@dataclass
class StabilizerConfig:
    """Cap ``alpha <= delta / ||g||`` with ``delta = c * min(||s1||, ||s2||, ||s3||)``."""

    c: float = 1.0
    delta: float | None = None

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("stabilizer constant c must be positive")

    def fix_delta(self, s_norms) -> float:
        if self.delta is not None:
            raise RuntimeError("delta is already fixed for this run")
        s_norms = list(s_norms)
        if len(s_norms) < 3:
            raise ValueError("need the first three displacement norms")
        self.delta = self.c * min(s_norms[:3])
        return self.delta


@dataclass(frozen=True)
class StepRule:
    tag: RuleTag
    stabilizer: StabilizerConfig | None = None
    constant: float | None = None

    def __post_init__(self):
        if self.tag is RuleTag.CONSTANT and not (self.constant and self.constant > 0):
            raise ValueError("constant rule needs a positive step")

    def __call__(self, pair: StepPair) -> float:
        return next_step(self, pair)


@dataclass(frozen=True)
class StepPair:
    f_prev: float
    f_new: float
    g_prev: np.ndarray
    g_new: np.ndarray
    alpha_prev: float

    def __post_init__(self):
        if np.shape(self.g_prev) != np.shape(self.g_new):
            raise ValueError("gradient vectors differ in length")
        if not (math.isfinite(self.alpha_prev) and self.alpha_prev > 0):
            raise ValueError("alpha_prev must be finite and positive")

    @property
    def s(self) -> np.ndarray:
        return -self.alpha_prev * np.asarray(self.g_prev)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.g_new) - np.asarray(self.g_prev)


def kgd0(pair: StepPair) -> float:
    """Regime-0 shrink step computed from a rejected trial point."""
    a = pair.alpha_prev
    g, gn = pair.g_prev, pair.g_new
    gsum = g + gn
    d = float(gsum @ gsum + 4.0 * (g @ g))
    if d == 0.0:
        raise ZeroGradient("kgd0 needs a nonzero gradient")
    radicand = 3.0 + 24.0 * (pair.f_new - pair.f_prev) / (a * d)
    if not radicand > 0.0:
        raise NonpositiveRadicand(f"kgd0 radicand {radicand!r} <= 0")
    out = a / math.sqrt(radicand)
    if not (math.isfinite(out) and out > 0.0):
        raise NonpositiveStep(f"kgd0 produced {out!r}")
    return out


def kgd1_long(pair: StepPair) -> float:
    """Long Regime-1 step; equals BB1 on a quadratic."""
    a = pair.alpha_prev
    gg = float(pair.g_prev @ pair.g_prev)
    if gg == 0.0:
        raise ZeroGradient("kgd1_long needs a nonzero gradient")
    denom = 2.0 + 2.0 * (pair.f_new - pair.f_prev) / (a * gg)
    if not denom > 0.0:
        raise NonpositiveStep(f"kgd1_long denominator {denom!r} <= 0")
    out = a / denom
    if not (math.isfinite(out) and out > 0.0):
        raise NonpositiveStep(f"kgd1_long produced {out!r}")
    return out


def kgd1_short(pair: StepPair) -> float:
    """Short Regime-1 step; equals BB2 on a quadratic."""
    y = pair.y
    yy = float(y @ y)
    if yy == 0.0:
        raise ZeroDenominator("kgd1_short: gradient did not change")
    gg = float(pair.g_prev @ pair.g_prev)
    out = 2.0 * (pair.alpha_prev * gg + (pair.f_new - pair.f_prev)) / yy
    if not (math.isfinite(out) and out > 0.0):
        raise NonpositiveStep(f"kgd1_short produced {out!r}")
    return out


def bb1(s, y) -> float:
    """Long Barzilai-Borwein step ``s's / s'y``.

    A negative value (negative curvature along ``s``) is returned unchanged;
    callers decide what to do with it.
    """
    s = np.asarray(s, dtype=float)
    sy = float(s @ np.asarray(y, dtype=float))
    if sy == 0.0:
        raise ZeroCurvature("bb1: s'y == 0")
    return float(s @ s) / sy


def bb2(s, y) -> float:
    """Short Barzilai-Borwein step ``s'y / y'y``."""
    y = np.asarray(y, dtype=float)
    yy = float(y @ y)
    if yy == 0.0:
        raise ZeroDenominator("bb2: y == 0")
    return float(np.asarray(s, dtype=float) @ y) / yy


def stab_cap(alpha: float, g_norm: float, cfg: StabilizerConfig) -> float:
    if cfg.delta is None:
        raise DeltaUnset("stabilizer radius not yet computed")
    if not g_norm > 0:
        raise ValueError("g_norm must be positive")
    return min(alpha, cfg.delta / g_norm)


def next_step(rule: StepRule, pair: StepPair) -> float:
    """Evaluate ``rule`` on ``pair`` (stabilizer cap excluded)."""
    tag = rule.tag
    if tag is RuleTag.KGD_LONG:
        return kgd1_long(pair)
    if tag is RuleTag.KGD_SHORT:
        return kgd1_short(pair)
    if tag is RuleTag.BB1:
        return bb1(pair.s, pair.y)
    if tag is RuleTag.BB2:
        return bb2(pair.s, pair.y)
    if tag is RuleTag.CONSTANT:
        return float(rule.constant)
    raise ValueError(f"unknown rule {tag}")


KGD_LONG = StepRule(RuleTag.KGD_LONG)
KGD_SHORT = StepRule(RuleTag.KGD_SHORT)
BB1 = StepRule(RuleTag.BB1)
BB2 = StepRule(RuleTag.BB2)


def constant_rule(alpha: float) -> StepRule:
    return StepRule(RuleTag.CONSTANT, constant=float(alpha))

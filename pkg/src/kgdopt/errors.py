"""Exception hierarchy shared across the package."""


class KGDError(Exception):
    """Base class for every error raised by kgdopt."""


class NonFinite(KGDError, ArithmeticError):
    """Objective or gradient evaluated to NaN or +/-inf."""


# -- step-size rule failures -------------------------------------------------
class StepError(KGDError, ArithmeticError):
    """A step-size rule could not produce a usable step.

    Solvers catch this family and apply their reset policy.
    """


class NonpositiveRadicand(StepError):
    pass


class ZeroGradient(StepError):
    pass


class NonpositiveStep(StepError):
    pass


class ZeroDenominator(StepError):
    pass


class ZeroCurvature(StepError):
    pass


class DeltaUnset(KGDError):
    """The stabilizer cap was queried before its radius was fixed."""


# -- solver failures -----------------------------------------------------------
class InnerLoopStall(KGDError):
    """The Regime-0 shrink loop exceeded its iteration cap."""


# -- problem construction / ingestion --------------------------------------------
class DegenerateSpectrum(KGDError, ValueError):
    pass


class NoRootBracketed(KGDError, ValueError):
    pass


class BadLabel(KGDError, ValueError):
    pass


class ParseError(KGDError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class PowerIterationStall(KGDError, RuntimeError):
    pass


class EmptyInput(KGDError, ValueError):
    pass

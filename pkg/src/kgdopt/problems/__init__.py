from .cycle import CycleProblem, cycle_ratio, cycle_residual, make_cycle_problem, middle_coefficients
from .libsvm import dump_libsvm, load_libsvm, parse_libsvm
from .logistic import (
    LogisticProblem,
    gram_lambda_max,
    logistic_loss,
    make_logistic,
    smoothness_constant,
    synth_logistic,
)
from .quadratic import QuadraticProblem, half_power_transform, make_quadratic, random_quadratic
from .raydan import RaydanSC2, raydan_sc2
from .suite import SMOKE_SUITE, SUITES, build_problem, build_suite, load_manifest, parse_spec

__all__ = [
    "CycleProblem", "cycle_ratio", "cycle_residual", "make_cycle_problem", "middle_coefficients",
    "dump_libsvm", "load_libsvm", "parse_libsvm",
    "LogisticProblem", "gram_lambda_max", "logistic_loss", "make_logistic",
    "smoothness_constant", "synth_logistic",
    "QuadraticProblem", "half_power_transform", "make_quadratic", "random_quadratic",
    "RaydanSC2", "raydan_sc2",
    "SMOKE_SUITE", "SUITES", "build_problem", "build_suite", "load_manifest", "parse_spec",
]

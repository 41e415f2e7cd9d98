"""Named problem constructors, the ``name:key=val,...`` spec grammar and
suite manifests (JSON list or one spec per line)."""

from __future__ import annotations

import json
import os

from ..errors import ParseError
from .cycle import make_cycle_problem
from .libsvm import load_libsvm
from .logistic import make_logistic, synth_logistic
from .quadratic import make_quadratic, random_quadratic
from .raydan import raydan_sc2

SMOKE_SUITE = [
    "quadratic:n=10,kappa=10,seed=1",
    "quadratic:n=50,kappa=100,seed=2",
    "quadratic:n=50,kappa=1000,seed=3",
    "raydan:n=100",
    "cycle:b=1",
    "logistic:m=1000,n=50,seed=0",
]

SUITES = {"smoke": SMOKE_SUITE}


def parse_spec(spec: str) -> tuple[str, dict]:
    """Split ``name:k=v,k=v`` into ``(name, {k: v})``.

    Bare comma-separated tokens extend the previous value, so
    ``quadratic:spectrum=1,10`` gives ``{"spectrum": "1,10"}``.
    """
    spec = spec.strip()
    name, _, rest = spec.partition(":")
    name = name.strip()
    if not name:
        raise ParseError(f"empty problem name in {spec!r}")
    params: dict[str, str] = {}
    key = None
    for tok in filter(None, (t.strip() for t in rest.split(","))):
        if "=" in tok:
            key, _, val = tok.partition("=")
            key = key.strip()
            params[key] = val.strip()
        elif key is not None:
            params[key] += "," + tok
        else:
            raise ParseError(f"expected key=value, got {tok!r} in {spec!r}")
    return name, params


def _floats(s: str) -> list[float]:
    return [float(v) for v in s.split(",") if v.strip()]


def _opt_seed(params, default=None):
    s = params.pop("seed", None)
    return default if s is None else int(s)


def _quadratic(params):
    seed = _opt_seed(params, 0)
    if "spectrum" in params:
        spectrum = _floats(params.pop("spectrum"))
        b = _floats(params.pop("b")) if "b" in params else None
        x0 = _floats(params.pop("x0")) if "x0" in params else [1.0] * len(spectrum)
        label = "quadratic-spec" + "-".join(f"{v:g}" for v in spectrum)
        return make_quadratic(spectrum, b=b, seed=seed, x0=x0, name=label)
    n = int(params.pop("n", 10))
    kappa = float(params.pop("kappa", 100))
    return random_quadratic(n, kappa, seed=seed)


def _raydan(params):
    return raydan_sc2(int(params.pop("n", 100)))


def _cycle(params):
    return make_cycle_problem(float(params.pop("b", 1.0)))


def _logistic(params):
    m = int(params.pop("m", 1000))
    n = int(params.pop("n", 50))
    gamma = params.pop("gamma", None)
    return synth_logistic(m, n, seed=_opt_seed(params, 0),
                          gamma=None if gamma is None else float(gamma))


def _libsvm(params):
    try:
        path = params.pop("path")
    except KeyError:
        raise ParseError("libsvm problem needs path=...") from None
    A, y = load_libsvm(path)
    gamma = params.pop("gamma", None)
    gamma = 1.0 / A.shape[0] if gamma is None else float(gamma)
    return make_logistic(A, y, gamma, name=f"libsvm-{os.path.basename(path)}")


BUILDERS = {
    "quadratic": _quadratic,
    "raydan": _raydan,
    "cycle": _cycle,
    "logistic": _logistic,
    "libsvm": _libsvm,
}


def build_problem(spec):
    """Construct a problem from a spec string or a ``{"name":..., "params":...}`` dict."""
    if isinstance(spec, dict):
        name = spec["name"]
        params = {k: ",".join(map(str, v)) if isinstance(v, list) else str(v)
                  for k, v in spec.get("params", {}).items()}
        label = spec.get("id")
    else:
        name, params = parse_spec(spec)
        label = None
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise ParseError(f"unknown problem {name!r}; known: {', '.join(BUILDERS)}") from None
    try:
        problem = builder(params)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad parameters for {name!r}: {exc}") from exc
    if params:
        raise ParseError(f"unused parameters for {name!r}: {', '.join(params)}")
    if label:
        problem.name = label
    return problem


def load_manifest(text: str) -> list:
    """Problem specs from a JSON list or from plain text (one per line, ``#`` comments)."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            entries = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"manifest JSON: {exc.msg}", exc.lineno) from None
        return list(entries)
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def build_suite(specs) -> list:
    problems = []
    for i, spec in enumerate(specs, start=1):
        try:
            problems.append(build_problem(spec))
        except ParseError as exc:
            raise ParseError(f"entry {i}: {exc}") from exc
    return problems

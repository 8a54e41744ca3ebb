"""Objective-function abstractions, the built-in test corpus, and gradient self-checks.

Objectives are immutable value objects: evaluating one twice at the same point
yields identical bits, so traces are reproducible and concurrent use is safe.
Metadata fields (extremum, Lipschitz/convexity constants) are optional; analysis
routines that need a missing constant raise instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, NonEmptyRequired, NonFiniteValue

__all__ = [
    "ScalarObjective",
    "VectorObjective",
    "Polynomial",
    "quadratic",
    "power_four_thirds",
    "check_gradient",
    "parse_objective",
]


@dataclass(frozen=True, eq=False)
class ScalarObjective:
    """A differentiable scalar function with optional convexity metadata.

    ``lipschitz_mu``/``lipschitz_order`` describe ``|f'(x)-f'(y)| <= mu*|x-y|^p``
    on the region where the pair is valid; ``strong_lambda``/``convexity_order``
    describe the matching lower bound.
    """

    evaluate: Callable[[float], float]
    gradient: Callable[[float], float]
    extremum: float | None = None
    lipschitz_mu: float | None = None
    strong_lambda: float | None = None
    lipschitz_order: float | None = None
    convexity_order: float | None = None
    name: str = ""


@dataclass(frozen=True, eq=False)
class VectorObjective:
    """A differentiable function on R^n with an optional known minimizer."""

    evaluate: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    dimension: int
    extremum: np.ndarray | None = None
    lipschitz_mu: float | None = None
    name: str = ""


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with coefficients in ascending powers.

    Carries exact derivatives of every order, which the series evaluators need.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            coeffs = (0.0,)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        for i in range(len(self.coefficients) - 1, -1, -1):
            if self.coefficients[i] != 0.0:
                return i
        return 0

    def evaluate(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def derivative(self, order: int = 1) -> "Polynomial":
        if order < 0:
            raise DomainError("derivative order must be nonnegative")
        coeffs = list(self.coefficients)
        for _ in range(order):
            coeffs = [i * c for i, c in enumerate(coeffs)][1:]
            if not coeffs:
                return Polynomial((0.0,))
        return Polynomial(tuple(coeffs))


def quadratic(c: float = 0.0) -> ScalarObjective:
    """f(t) = (t - c)^2, the canonical strongly convex test function."""
    c = float(c)
    return ScalarObjective(
        evaluate=lambda t: (t - c) ** 2,
        gradient=lambda t: 2.0 * (t - c),
        extremum=c,
        lipschitz_mu=2.0,
        strong_lambda=2.0,
        lipschitz_order=1.0,
        convexity_order=1.0,
        name=f"quadratic:c={c:g}",
    )


def power_four_thirds(c: float = 0.0) -> ScalarObjective:
    """f(t) = |t - c|^(4/3), convex and differentiable but not gradient-Lipschitz.

    The gradient at t = c is the limit value 0, so iterations landing exactly
    on the minimizer stay defined.  The stored (mu, order) pair (1, 0.4) is the
    far-field bound valid for |t - c| > 1000.
    """
    c = float(c)

    def grad(t: float) -> float:
        x = t - c
        if x == 0.0:
            return 0.0
        return math.copysign((4.0 / 3.0) * abs(x) ** (1.0 / 3.0), x)

    return ScalarObjective(
        evaluate=lambda t: abs(t - c) ** (4.0 / 3.0),
        gradient=grad,
        extremum=c,
        lipschitz_mu=1.0,
        strong_lambda=None,
        lipschitz_order=0.4,
        convexity_order=None,
        name=f"pow43:c={c:g}",
    )


def check_gradient(obj: ScalarObjective, points: Iterable[float]) -> float:
    """Max relative error between the analytic gradient and a central difference.

    Uses step h = 1e-6 * max(1, |t|).  Raises NonFiniteValue if the objective
    or its gradient is non-finite at any probed point.
    """
    pts = [float(t) for t in points]
    if not pts:
        raise NonEmptyRequired("check_gradient requires at least one point")
    worst = 0.0
    for t in pts:
        h = 1e-6 * max(1.0, abs(t))
        lo = obj.evaluate(t - h)
        hi = obj.evaluate(t + h)
        analytic = obj.gradient(t)
        if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(analytic)):
            raise NonFiniteValue(f"objective not finite near t={t!r}")
        fd = (hi - lo) / (2.0 * h)
        scale = max(abs(analytic), abs(fd))
        if scale > 0.0:
            worst = max(worst, abs(analytic - fd) / scale)
    return worst


_CORPUS: dict[str, Callable[..., ScalarObjective]] = {
    "quadratic": quadratic,
    "pow43": power_four_thirds,
}


def parse_objective(objective_id: str) -> ScalarObjective:
    """Build a corpus objective from an id like ``"quadratic:c=3"``.

    Grammar: name, colon, comma-separated key=value pairs with decimal reals.
    The parameter list may be omitted, in which case c defaults to 0.
    """
    name, sep, rest = objective_id.partition(":")
    name = name.strip()
    factory = _CORPUS.get(name)
    if factory is None:
        known = ", ".join(sorted(_CORPUS))
        raise DomainError(f"unknown objective {name!r} (known: {known})")
    params: dict[str, float] = {}
    if sep and rest.strip():
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or not key:
                raise DomainError(f"malformed parameter {item!r} in {objective_id!r}")
            try:
                params[key] = float(value)
            except ValueError:
                raise DomainError(
                    f"parameter {key!r} in {objective_id!r} is not a decimal real"
                ) from None
    try:
        return factory(**params)
    except TypeError:
        raise DomainError(
            f"objective {name!r} does not accept parameters {sorted(params)}"
        ) from None


def corpus_ids() -> Sequence[str]:
    """Names accepted by :func:`parse_objective`."""
    return tuple(sorted(_CORPUS))

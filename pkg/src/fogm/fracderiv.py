"""Truncated Caputo and Riemann-Liouville series for polynomials.

Both one-sided derivatives admit Taylor-like expansions around a base point
t0 < t; restricting to polynomial inputs keeps every higher derivative exact,
so the truncated sums can be validated against closed forms.  The single
retained Caputo term is what turns a plain gradient step into the
fractional-order update used by the optimizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .objective import Polynomial

__all__ = [
    "SeriesKind",
    "FracSeriesSpec",
    "gamma",
    "caputo_series",
    "rl_series",
    "fogm_direction_term",
]


class SeriesKind(str, Enum):
    CAPUTO = "caputo"
    RIEMANN_LIOUVILLE = "riemann_liouville"


def gamma(x: float) -> float:
    """Gamma function on the positive axis.

    Relative error is well under 1e-12 across (0, 50].  Nonpositive arguments
    are rejected: the series forms never need them once simplified.
    """
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    return math.gamma(x)


@dataclass(frozen=True)
class FracSeriesSpec:
    """Parameters of a one-sided fractional-derivative series evaluation."""

    definition: SeriesKind
    alpha: float
    base_point: float
    eval_point: float
    truncation: int

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0 and not float(self.alpha).is_integer()):
            raise DomainError(f"alpha must be positive and non-integer, got {self.alpha!r}")
        if not self.eval_point > self.base_point:
            raise DomainError(
                f"eval_point must exceed base_point "
                f"(got {self.eval_point!r} <= {self.base_point!r})"
            )
        if self.truncation < 1:
            raise DomainError("truncation must be a positive integer")


def _require(spec: FracSeriesSpec, kind: SeriesKind) -> None:
    if spec.definition is not kind:
        raise DomainError(f"spec.definition is {spec.definition}, expected {kind}")
    if not 0.0 < spec.alpha < 1.0:
        raise DomainError(f"series evaluation requires 0 < alpha < 1, got {spec.alpha!r}")


def caputo_series(p: Polynomial, spec: FracSeriesSpec) -> float:
    """Truncated Caputo series: sum_i f^(i+1)(t0) / Gamma(i+2-a) * (t-t0)^(i+1-a).

    Exact (the tail vanishes) once truncation >= degree(p).
    """
    _require(spec, SeriesKind.CAPUTO)
    t0, dt, a = spec.base_point, spec.eval_point - spec.base_point, spec.alpha
    total = 0.0
    for i in range(spec.truncation):
        deriv = p.derivative(i + 1).evaluate(t0)
        total += deriv / gamma(i + 2 - a) * dt ** (i + 1 - a)
    return total


def rl_series(p: Polynomial, spec: FracSeriesSpec) -> float:
    """Truncated Riemann-Liouville series: sum_i f^(i)(t0) / Gamma(i+1-a) * (t-t0)^(i-a).

    Differs from the Caputo sum only by the i = 0 term, which carries the
    constant part of the function.
    """
    _require(spec, SeriesKind.RIEMANN_LIOUVILLE)
    t0, dt, a = spec.base_point, spec.eval_point - spec.base_point, spec.alpha
    total = 0.0
    for i in range(spec.truncation):
        deriv = p.derivative(i).evaluate(t0)
        total += deriv / gamma(i + 1 - a) * dt ** (i - a)
    return total


def fogm_direction_term(grad_at_base: float, delta: float, alpha: float) -> float:
    """Leading series term with the Gamma factor absorbed into the step size.

    This is the direction a fractional-order step follows: the base-point
    gradient scaled by delta^(1-alpha).
    """
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha!r}")
    return grad_at_base * delta ** (1.0 - alpha)

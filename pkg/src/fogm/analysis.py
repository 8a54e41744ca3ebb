"""Convergence-region bounds, delta prescription, trace classification, and
empirical estimation of Lipschitz/strong-convexity orders.

The central quantity is (rho * mu)^(1 / (alpha - p)): for a convex objective
whose gradient is p-order Lipschitz it bounds the radius of the region the
fractional-order iterates oscillate in once alpha exceeds p, and evaluated at
p = 1 it is the regularizer that restores asymptotic convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import BracketingFailed, DegenerateSample, DomainError, MissingMetadata
from .objective import ScalarObjective
from .optimizers import Method, OptimizerConfig, Termination, Trace, run

__all__ = [
    "Classification",
    "ConvergenceReport",
    "CrossingSummary",
    "SampleRegion",
    "OrderFit",
    "theoretical_bound",
    "recommend_delta",
    "crossings",
    "classify",
    "estimate_convexity_order",
    "estimate_lipschitz_order",
]


class Classification(str, Enum):
    ASYMPTOTIC = "asymptotic"
    BOUNDED_OSCILLATION = "bounded_oscillation"
    DIVERGED = "diverged"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConvergenceReport:
    """Classification of a finished run with the measured and predicted radii."""

    classification: Classification
    final_error: float
    oscillation_amplitude: float | None
    crossing_count: int
    theoretical_bound: float | None = None

    def as_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "final_error": self.final_error,
            "oscillation_amplitude": self.oscillation_amplitude,
            "crossing_count": self.crossing_count,
            "theoretical_bound": self.theoretical_bound,
        }


@dataclass(frozen=True)
class CrossingSummary:
    count: int
    indices: tuple[int, ...]


@dataclass(frozen=True)
class SampleRegion:
    """Annulus around ``center`` from which gradient-difference pairs are drawn."""

    center: float
    radius_lo: float
    radius_hi: float


@dataclass(frozen=True)
class OrderFit:
    """Log-log least-squares fit |grad(x)-grad(y)| ~ mu_hat * |x-y|^p_hat."""

    p_hat: float
    mu_hat: float


def theoretical_bound(rho: float, mu: float, alpha: float, p: float = 1.0) -> float:
    """Radius (rho*mu)^(1/(alpha-p)) of the limiting oscillation region.

    Defined for alpha > p; at alpha <= p the iterates are in the asymptotic
    regime and no finite bound applies.
    """
    if not (rho > 0.0 and math.isfinite(rho)):
        raise DomainError(f"rho must be positive, got {rho!r}")
    if not (mu > 0.0 and math.isfinite(mu)):
        raise DomainError(f"mu must be positive, got {mu!r}")
    if not alpha > p:
        raise DomainError(f"bound requires alpha > p, got alpha={alpha!r}, p={p!r}")
    return (rho * mu) ** (1.0 / (alpha - p))


def recommend_delta(rho: float, mu: float, alpha: float) -> float:
    """Smallest regularizer guaranteeing asymptotic convergence: (rho*mu)^(1/(alpha-1)).

    Sits exactly on the boundary of the contraction condition
    rho * mu * delta^(1-alpha) <= 1.
    """
    if not (rho > 0.0 and math.isfinite(rho)):
        raise DomainError(f"rho must be positive, got {rho!r}")
    if not (mu > 0.0 and math.isfinite(mu)):
        raise DomainError(f"mu must be positive, got {mu!r}")
    if not alpha > 1.0:
        raise DomainError(f"delta recommendation requires alpha > 1, got {alpha!r}")
    return (rho * mu) ** (1.0 / (alpha - 1.0))


def crossings(trace: Trace) -> CrossingSummary:
    """Steps at which the gradient changes sign (the iterate passes the minimizer).

    An exactly zero gradient ends the scan: the iterate has landed.
    """
    if trace.dimension is not None:
        raise DomainError("crossings is defined for scalar traces")
    indices: list[int] = []
    records = trace.records
    for i in range(len(records) - 1):
        g0, g1 = records[i].grad, records[i + 1].grad
        if g0 == 0.0:
            break
        if math.isfinite(g0) and math.isfinite(g1) and g0 * g1 < 0.0:
            indices.append(records[i].k)
    return CrossingSummary(len(indices), tuple(indices))


def classify(
    trace: Trace,
    t_star: float,
    window: int = 200,
    theoretical_bound: float | None = None,
) -> ConvergenceReport:
    """Label a trace asymptotic, bounded oscillation, diverged, or inconclusive.

    Bounded oscillation requires a stationary trailing amplitude (the sup of
    |t - t*| over the last two length-``window`` blocks agreeing within 10%)
    with at least one crossing inside the trailing block, measured after a
    transient of max(500, 10% of the trace).
    """
    if trace.dimension is not None:
        raise DomainError("classify is defined for scalar traces")
    if window < 1:
        raise DomainError("window must be a positive integer")
    records = trace.records
    final_error = abs(records[-1].t - t_star)
    count = crossings(trace).count

    classification = Classification.INCONCLUSIVE
    amplitude: float | None = None
    if trace.termination in (Termination.TOLERANCE_MET, Termination.ZERO_STEP_FIXED_POINT):
        classification = Classification.ASYMPTOTIC
    elif trace.termination is Termination.DIVERGENCE_DETECTED:
        classification = Classification.DIVERGED
    else:
        n = len(records)
        transient = max(500, n // 10)
        if n - transient >= 2 * window:
            errs = [abs(r.t - t_star) for r in records[-2 * window:]]
            amp_prev = max(errs[:window])
            amp_last = max(errs[window:])
            ref = max(amp_prev, amp_last)
            stationary = ref > 0.0 and abs(amp_prev - amp_last) < 0.1 * ref
            tail = records[-window:]
            tail_crossing = any(
                tail[i].grad * tail[i + 1].grad < 0.0 for i in range(len(tail) - 1)
            )
            if stationary and tail_crossing:
                classification = Classification.BOUNDED_OSCILLATION
                amplitude = amp_last
    return ConvergenceReport(classification, final_error, amplitude, count, theoretical_bound)


def estimate_convexity_order(
    obj: ScalarObjective,
    cfg_template: OptimizerConfig,
    alpha_lo: float,
    alpha_hi: float,
    tol_alpha: float,
    window: int = 200,
) -> float:
    """Bisect the gradient order for the onset of sustained bounded oscillation.

    Below the objective's strong-convexity order the plain fractional method
    settles (asymptotically, or by blowing past the divergence guard once the
    oscillation bound leaves float range exactly at the transition); above it
    the runs oscillate inside a stationary region.  The returned critical order
    estimates that convexity order.  Endpoints must bracket: the low run must
    not oscillate, the high run must.
    """
    if obj.extremum is None:
        raise MissingMetadata("order estimation needs the objective's extremum")
    if not (0.0 < alpha_lo < alpha_hi < 1.0):
        raise DomainError(
            f"bracket must satisfy 0 < alpha_lo < alpha_hi < 1, got "
            f"({alpha_lo!r}, {alpha_hi!r})"
        )
    if not tol_alpha > 0.0:
        raise DomainError(f"tol_alpha must be positive, got {tol_alpha!r}")

    def classify_at(alpha: float) -> Classification:
        cfg = replace(cfg_template, method=Method.FOGM, alpha=alpha, delta=0.0)
        trace = run(obj, cfg)
        return classify(trace, obj.extremum, window).classification

    lo_cls = classify_at(alpha_lo)
    hi_cls = classify_at(alpha_hi)
    if hi_cls is not Classification.BOUNDED_OSCILLATION:
        raise BracketingFailed(
            f"upper endpoint alpha={alpha_hi!r} classifies {hi_cls.value}, "
            f"expected bounded oscillation"
        )
    if lo_cls not in (Classification.ASYMPTOTIC, Classification.DIVERGED):
        raise BracketingFailed(
            f"lower endpoint alpha={alpha_lo!r} classifies {lo_cls.value}, "
            f"expected a non-oscillating run"
        )

    lo, hi = alpha_lo, alpha_hi
    while hi - lo > tol_alpha:
        mid = 0.5 * (lo + hi)
        if classify_at(mid) is Classification.BOUNDED_OSCILLATION:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def estimate_lipschitz_order(
    obj: ScalarObjective,
    region: SampleRegion,
    samples: int,
) -> OrderFit:
    """Fit |grad(x) - grad(center)| = mu * |x - center|^p by log-log regression.

    Probes ``samples`` radii geometrically spaced across the region, on both
    sides of the center.
    """
    if samples < 10:
        raise DomainError(f"need at least 10 samples, got {samples!r}")
    if not (0.0 < region.radius_lo < region.radius_hi):
        raise DomainError(
            f"region radii must satisfy 0 < radius_lo < radius_hi, got "
            f"({region.radius_lo!r}, {region.radius_hi!r})"
        )
    radii = np.geomspace(region.radius_lo, region.radius_hi, samples)
    g_center = obj.gradient(region.center)
    log_dt: list[float] = []
    log_dg: list[float] = []
    for r in radii:
        for x in (region.center + r, region.center - r):
            dg = abs(obj.gradient(x) - g_center)
            if dg > 0.0:
                log_dt.append(math.log(r))
                log_dg.append(math.log(dg))
    if not log_dg:
        raise DegenerateSample("all sampled gradient differences vanish")
    slope, intercept = np.polyfit(log_dt, log_dg, 1)
    return OrderFit(p_hat=float(slope), mu_hat=float(math.exp(intercept)))

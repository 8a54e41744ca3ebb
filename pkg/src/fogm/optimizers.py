"""Iterative minimizers: plain gradient steps and their fractional-order variants.

All methods share the two-point update

    t[k+1] = t[k] - rho * f'(t[k]) * (|t[k] - t[k-1]| + delta)^(1 - alpha)

with method-specific (alpha, delta): plain gradient descent is alpha = 1,
delta = 0; the fractional method keeps delta = 0 and alpha in (0, 2); the
modified variant adds delta > 0 so the multiplier stays bounded; the switching
variant runs alpha < 1 until a latch condition fires, then alpha > 1 with a
delta large enough to restore asymptotic convergence.

Runs return a fully instrumented :class:`Trace`: one record per iterate with
the gradient, increment, and the multiplier actually applied, so every step can
be reconstructed bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainError, MissingMetadata, NonFiniteValue, SingularStep
from .objective import ScalarObjective, VectorObjective

__all__ = [
    "Method",
    "Phase",
    "Termination",
    "OptimizerConfig",
    "IterationRecord",
    "Trace",
    "DIVERGENCE_GUARD",
    "gm_step",
    "fogm_step",
    "switching_policy",
    "run",
    "run_vector",
]

# Iterates, gradients, or objective values beyond this magnitude count as
# divergence: far below float overflow, far above any meaningful iterate.
DIVERGENCE_GUARD = 1e150

_NAN = float("nan")


class Method(str, Enum):
    GM = "gm"
    FOGM = "fogm"
    MODIFIED_FOGM = "modified_fogm"
    SWITCHING_FOGM = "switching_fogm"


class Phase(str, Enum):
    PRE_SWITCH = "pre_switch"
    POST_SWITCH = "post_switch"
    NOT_APPLICABLE = "na"


class Termination(str, Enum):
    TOLERANCE_MET = "tolerance_met"
    MAX_ITER_REACHED = "max_iter_reached"
    DIVERGENCE_DETECTED = "divergence_detected"
    ZERO_STEP_FIXED_POINT = "zero_step_fixed_point"


@dataclass
class OptimizerConfig:
    """Method selector plus step size, orders, initial points, and stopping rules.

    ``alpha`` is the gradient order (the pre-switch order for the switching
    method, which additionally needs ``alpha_post`` in (1, 2)).  ``t2`` may be
    left unset for the fractional-order methods, in which case the second
    initial point is seeded with one plain gradient step from ``t1``.
    """

    method: Method
    rho: float
    alpha: float = 1.0
    alpha_post: float | None = None
    delta: float = 0.0
    t1: float | Sequence[float] = 0.0
    t2: float | Sequence[float] | None = None
    max_iter: int = 50_000
    tol_abs: float = 1e-12
    stationary_window: int = 10

    def validate(self) -> None:
        if not isinstance(self.method, Method):
            raise DomainError(f"unknown method {self.method!r}")
        if not (math.isfinite(self.rho) and self.rho > 0.0):
            raise DomainError(f"rho must be positive and finite, got {self.rho!r}")
        if not (self.delta >= 0.0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be nonnegative and finite, got {self.delta!r}")
        if self.max_iter < 1:
            raise DomainError("max_iter must be a positive integer")
        if not self.tol_abs > 0.0:
            raise DomainError(f"tol_abs must be positive, got {self.tol_abs!r}")
        if self.stationary_window < 1:
            raise DomainError("stationary_window must be a positive integer")
        if self.method is Method.SWITCHING_FOGM:
            if self.alpha_post is None:
                raise DomainError("switching method requires alpha_post")
            if not (0.0 < self.alpha < 1.0 < self.alpha_post < 2.0):
                raise DomainError(
                    f"switching orders must satisfy alpha < 1 < alpha_post, "
                    f"got {self.alpha!r} / {self.alpha_post!r}"
                )
            if self.delta != 0.0:
                raise DomainError("switching method derives delta; leave it at 0")
        elif self.method is not Method.GM:
            if not 0.0 < self.alpha < 2.0:
                raise DomainError(f"alpha must lie in (0, 2), got {self.alpha!r}")
            if self.method is Method.FOGM and self.delta != 0.0:
                raise DomainError("plain fogm has delta = 0; use modified_fogm")
        for name, value in (("t1", self.t1), ("t2", self.t2)):
            if value is None:
                continue
            arr = np.asarray(value, dtype=float)
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} must be finite")


@dataclass(slots=True)
class IterationRecord:
    """Per-iterate diagnostics.

    ``delta_k`` is t[k] - t[k-1] (NaN on the first record).  ``effective_step``
    is the multiplier rho * (|delta_k| + delta)^(1-alpha) applied to move to
    the next iterate; it is NaN on records from which no update was computed
    (the final record, and an explicitly supplied second initial point).
    """

    k: int
    t: float | np.ndarray
    f_value: float
    grad: float | np.ndarray
    delta_k: float | np.ndarray
    effective_step: float | np.ndarray
    phase: Phase = Phase.NOT_APPLICABLE


@dataclass
class Trace:
    """Ordered iterate records plus the reason the run stopped."""

    records: list[IterationRecord]
    termination: Termination

    def __post_init__(self) -> None:
        if not self.records:
            raise DomainError("a trace must contain at least one record")

    @property
    def dimension(self) -> int | None:
        """Number of components for vector runs, None for scalar runs."""
        t = self.records[0].t
        return int(np.size(t)) if isinstance(t, np.ndarray) else None

    def iterates(self) -> list[float] | list[np.ndarray]:
        return [r.t for r in self.records]


def gm_step(t: float, rho: float, grad: float) -> float:
    """One plain gradient step t - rho * grad."""
    if not (math.isfinite(t) and math.isfinite(rho) and math.isfinite(grad)):
        raise NonFiniteValue("gm_step requires finite inputs")
    out = t - rho * grad
    if not math.isfinite(out):
        raise NonFiniteValue("gm_step produced a non-finite iterate")
    return out


def fogm_step(
    t_prev: float,
    t_curr: float,
    rho: float,
    alpha: float,
    delta: float,
    grad_curr: float,
) -> float:
    """One fractional-order step from t_curr given the previous iterate.

    With delta = 0 this is the plain fractional update; with alpha = 1 and
    delta = 0 it reduces exactly to :func:`gm_step` (0^0 is taken as 1).
    """
    increment = abs(t_curr - t_prev)
    if delta == 0.0 and increment == 0.0 and alpha > 1.0:
        raise SingularStep(
            "zero increment with alpha > 1 and delta = 0 makes the multiplier unbounded"
        )
    eff = rho * (increment + delta) ** (1.0 - alpha)
    out = t_curr - eff * grad_curr
    if not math.isfinite(out):
        raise NonFiniteValue("fogm_step produced a non-finite iterate")
    return out


def switching_policy(
    delta_k: float,
    grad_t2: float,
    grad_curr: float,
    latched: bool,
) -> tuple[Phase, bool]:
    """Latched two-phase rule, evaluated from the second iterate on.

    The switch fires once the increment drops below one or the current gradient
    has the opposite sign of the gradient at the second initial point, and it
    never un-fires.
    """
    latched = latched or abs(delta_k) < 1.0 or grad_t2 * grad_curr < 0.0
    return (Phase.POST_SWITCH if latched else Phase.PRE_SWITCH), latched


def _safe_eval(evaluate, gradient, t):
    # Objective overflow past float range counts as divergence, not a crash.
    try:
        return evaluate(t), gradient(t)
    except OverflowError:
        return math.inf, math.inf


def _beyond_guard(*values: float) -> bool:
    return any(not math.isfinite(v) or abs(v) > DIVERGENCE_GUARD for v in values)


def run(obj: ScalarObjective, cfg: OptimizerConfig) -> Trace:
    """Iterate the configured method on a scalar objective until termination.

    Stops with TOLERANCE_MET after ``stationary_window`` consecutive increments
    below ``tol_abs``, DIVERGENCE_DETECTED when an iterate, gradient, or
    objective value leaves the guard range, ZERO_STEP_FIXED_POINT when the
    iterate is provably fixed, else MAX_ITER_REACHED.
    """
    cfg.validate()
    if np.size(cfg.t1) != 1 or (cfg.t2 is not None and np.size(cfg.t2) != 1):
        raise DomainError("run expects scalar initial points; use run_vector for vectors")

    method = cfg.method
    switching = method is Method.SWITCHING_FOGM
    if switching:
        if obj.lipschitz_mu is None:
            raise MissingMetadata(
                "switching method needs the objective's gradient Lipschitz constant"
            )
        from .analysis import recommend_delta  # local import: analysis depends on traces

        delta_post = recommend_delta(cfg.rho, obj.lipschitz_mu, cfg.alpha_post)

    evaluate, gradient = obj.evaluate, obj.gradient
    rho, tol, window = cfg.rho, cfg.tol_abs, cfg.stationary_window
    base_phase = Phase.PRE_SWITCH if switching else Phase.NOT_APPLICABLE

    t1 = float(np.asarray(cfg.t1, dtype=float).reshape(()))
    f1, g1 = _safe_eval(evaluate, gradient, t1)
    records: list[IterationRecord] = []

    if _beyond_guard(t1, f1, g1):
        records.append(IterationRecord(1, t1, f1, g1, _NAN, _NAN, base_phase))
        return Trace(records, Termination.DIVERGENCE_DETECTED)
    if cfg.max_iter == 1:
        records.append(IterationRecord(1, t1, f1, g1, _NAN, _NAN, base_phase))
        return Trace(records, Termination.MAX_ITER_REACHED)

    if method is Method.GM or cfg.t2 is None:
        # Second point from one plain gradient step; multiplier is rho itself.
        t_cur = t1 - rho * g1
        records.append(IterationRecord(1, t1, f1, g1, _NAN, rho, base_phase))
    else:
        t_cur = float(np.asarray(cfg.t2, dtype=float).reshape(()))
        records.append(IterationRecord(1, t1, f1, g1, _NAN, _NAN, base_phase))

    t_prev = t1
    grad_t2 = 0.0
    latched = False
    sub_tol = 0
    k = 2
    while True:
        f_cur, g_cur = _safe_eval(evaluate, gradient, t_cur)
        d = t_cur - t_prev

        if switching:
            if k == 2:
                grad_t2 = g_cur
            phase, latched = switching_policy(d, grad_t2, g_cur, latched)
            alpha, delta = (cfg.alpha_post, delta_post) if latched else (cfg.alpha, 0.0)
        else:
            phase = Phase.NOT_APPLICABLE
            if method is Method.GM:
                alpha, delta = 1.0, 0.0
            else:
                alpha, delta = cfg.alpha, cfg.delta

        if _beyond_guard(t_cur, f_cur, g_cur):
            records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, _NAN, phase))
            return Trace(records, Termination.DIVERGENCE_DETECTED)

        if abs(d) < tol:
            sub_tol += 1
            if sub_tol >= window:
                records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, _NAN, phase))
                return Trace(records, Termination.TOLERANCE_MET)
        else:
            sub_tol = 0

        if k >= cfg.max_iter:
            records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, _NAN, phase))
            return Trace(records, Termination.MAX_ITER_REACHED)

        ad = abs(d)
        if ad == 0.0 and delta == 0.0 and alpha != 1.0:
            if alpha < 1.0 or g_cur == 0.0:
                # Zero multiplier (alpha < 1) or exact landing: iterate is fixed.
                records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, _NAN, phase))
                return Trace(records, Termination.ZERO_STEP_FIXED_POINT)
            raise SingularStep(
                f"zero increment at step {k} with alpha > 1, delta = 0, "
                f"and nonzero gradient"
            )

        try:
            eff = rho * (ad + delta) ** (1.0 - alpha)
        except OverflowError:
            # denormal increment with alpha near 2: multiplier past float range
            eff = math.inf
        t_next = t_cur if g_cur == 0.0 else t_cur - eff * g_cur
        records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, eff, phase))
        t_prev, t_cur = t_cur, t_next
        k += 1


def run_vector(obj: VectorObjective, cfg: OptimizerConfig) -> Trace:
    """Componentwise extension of :func:`run` to objectives on R^n.

    The increment magnitude, the regularizer, and the power law all apply per
    component; at n = 1 the iterate sequence is bit-identical to the scalar
    run.  The switching method is scalar-only (its latch compares gradient
    signs).
    """
    cfg.validate()
    method = cfg.method
    if method is Method.SWITCHING_FOGM:
        raise DomainError("switching method is defined for scalar runs only")
    n = obj.dimension
    if n < 1:
        raise DomainError("dimension must be at least 1")

    evaluate, gradient = obj.evaluate, obj.gradient
    rho, tol, window = cfg.rho, cfg.tol_abs, cfg.stationary_window

    def as_point(value, name: str) -> np.ndarray:
        arr = np.asarray(value, dtype=float).reshape(-1)
        if arr.size != n:
            raise DomainError(f"{name} must have {n} components, got {arr.size}")
        arr = arr.copy()
        arr.flags.writeable = False
        return arr

    def eval_at(t: np.ndarray) -> tuple[float, np.ndarray]:
        try:
            f_val = float(evaluate(t))
            # copy so freezing never touches a buffer the gradient fn owns
            g_val = np.array(gradient(t), dtype=float).reshape(-1)
        except OverflowError:
            return math.inf, np.full(n, math.inf)
        if g_val.size != n:
            raise DomainError(f"gradient returned {g_val.size} components, expected {n}")
        g_val.flags.writeable = False
        return f_val, g_val

    def beyond(t: np.ndarray, f_val: float, g_val: np.ndarray) -> bool:
        vals = np.concatenate([t, g_val, [f_val]])
        return bool(np.any(~np.isfinite(vals)) or np.any(np.abs(vals) > DIVERGENCE_GUARD))

    nan_vec = np.full(n, _NAN)
    nan_vec.flags.writeable = False

    t1 = as_point(cfg.t1, "t1")
    f1, g1 = eval_at(t1)
    records: list[IterationRecord] = []

    if beyond(t1, f1, g1):
        records.append(IterationRecord(1, t1, f1, g1, nan_vec, nan_vec))
        return Trace(records, Termination.DIVERGENCE_DETECTED)
    if cfg.max_iter == 1:
        records.append(IterationRecord(1, t1, f1, g1, nan_vec, nan_vec))
        return Trace(records, Termination.MAX_ITER_REACHED)

    if method is Method.GM or cfg.t2 is None:
        t_cur = t1 - rho * g1
        t_cur.flags.writeable = False
        eff1 = np.full(n, rho)
        eff1.flags.writeable = False
        records.append(IterationRecord(1, t1, f1, g1, nan_vec, eff1))
    else:
        t_cur = as_point(cfg.t2, "t2")
        records.append(IterationRecord(1, t1, f1, g1, nan_vec, nan_vec))

    if method is Method.GM:
        alpha, delta = 1.0, 0.0
    else:
        alpha, delta = cfg.alpha, cfg.delta

    t_prev = t1
    sub_tol = 0
    k = 2
    while True:
        f_cur, g_cur = eval_at(t_cur)
        d = t_cur - t_prev
        d.flags.writeable = False

        if beyond(t_cur, f_cur, g_cur):
            records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, nan_vec))
            return Trace(records, Termination.DIVERGENCE_DETECTED)

        if float(np.max(np.abs(d))) < tol:
            sub_tol += 1
            if sub_tol >= window:
                records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, nan_vec))
                return Trace(records, Termination.TOLERANCE_MET)
        else:
            sub_tol = 0

        if k >= cfg.max_iter:
            records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, nan_vec))
            return Trace(records, Termination.MAX_ITER_REACHED)

        # Per-component update in plain float arithmetic so the n = 1 case
        # reproduces the scalar run exactly.
        eff = np.empty(n)
        nxt = np.empty(n)
        frozen = 0
        for j in range(n):
            ad = abs(float(d[j]))
            gj = float(g_cur[j])
            if ad == 0.0 and delta == 0.0 and alpha != 1.0:
                if alpha > 1.0 and gj != 0.0:
                    raise SingularStep(
                        f"zero increment in component {j} at step {k} with "
                        f"alpha > 1, delta = 0, and nonzero gradient"
                    )
                # Component is fixed: zero multiplier or exact landing.
                eff[j] = 0.0
                nxt[j] = float(t_cur[j])
                frozen += 1
                continue
            try:
                e = rho * (ad + delta) ** (1.0 - alpha)
            except OverflowError:
                e = math.inf
            eff[j] = e
            nxt[j] = float(t_cur[j]) if gj == 0.0 else float(t_cur[j]) - e * gj
        if frozen == n:
            records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, nan_vec))
            return Trace(records, Termination.ZERO_STEP_FIXED_POINT)
        eff.flags.writeable = False
        nxt.flags.writeable = False
        records.append(IterationRecord(k, t_cur, f_cur, g_cur, d, eff))
        t_prev, t_cur = t_cur, nxt
        k += 1

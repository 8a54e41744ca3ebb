"""Figure rendering for convergence traces (file output only)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["render_error_curves"]


def render_error_curves(title: str, curves, path: Path | str) -> None:
    """Render |t_k - t*| against the step index on a log scale.

    ``curves`` is an iterable of (label, trace, t_star); exact zeros plot as
    gaps rather than minus infinity.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, trace, t_star in curves:
        ks = np.array([r.k for r in trace.records])
        if trace.dimension is None:
            errs = np.array([abs(r.t - t_star) for r in trace.records])
        else:
            target = np.asarray(t_star, dtype=float)
            errs = np.array(
                [float(np.linalg.norm(np.asarray(r.t) - target)) for r in trace.records]
            )
        errs = np.where(errs > 0.0, errs, np.nan)
        ax.semilogy(ks, errs, linewidth=1.0, label=label)
    ax.set_xlabel("step $k$")
    ax.set_ylabel(r"$|t_k - t^*|$")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8, ncols=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""Fractional-time nonlocal parabolic equations."""

import json

from ._core import (
    HypothesisError,
    NumericalError,
    __version__,
    caputo,
    fode,
    holder_report_json,
    mittag_leffler,
    mittag_leffler_deriv,
    pucci,
    run_cli,
    solve,
)


def fit_holder(field, x_min, x_max, t_start, dt, alpha, sigma, x0, t0, ratio=0.25, depth=4):
    """Oscillation report of a sampled field u[k, i] as a dict (NaN exponents become None)."""
    return json.loads(
        holder_report_json(field, x_min, x_max, t_start, dt, alpha, sigma, x0, t0, ratio, depth)
    )


__all__ = [
    "HypothesisError",
    "NumericalError",
    "__version__",
    "caputo",
    "fit_holder",
    "fode",
    "mittag_leffler",
    "mittag_leffler_deriv",
    "pucci",
    "run_cli",
    "solve",
]

"""Double-exponential quadrature rules.

Both rules are trapezoidal sums in a variable ``t`` after a change of
variables that makes the integrand decay like ``exp(-c exp|t|)``.  Each level
halves the step and reuses previous nodes; the estimate is accepted once two
successive levels agree to the requested tolerance, at which point the finer
level is usually accurate to about the square of that difference.

Integrands must accept and return numpy arrays.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .context import DEFAULT_ACCURACY, EvalAccuracy
from .errors import ConvergenceError

_HALF_PI = 0.5 * math.pi


def _refine(level_sum, accuracy: EvalAccuracy, what: str):
    """Drive level halving.  ``level_sum(k)`` returns the new-node sum at level ``k``."""
    h = 1.0
    total = level_sum(0)
    estimate = h * total
    err = math.inf
    for k in range(1, accuracy.max_subdivisions + 1):
        h *= 0.5
        total += level_sum(k)
        new = h * total
        err = abs(new - estimate)
        estimate = new
        if k >= 3 and err <= max(accuracy.rel_tol * abs(estimate), accuracy.abs_tol):
            return estimate, err
    raise ConvergenceError(
        f"{what}: no convergence after {accuracy.max_subdivisions} halvings "
        f"(last difference {err:.3e}, estimate {estimate:.6e})",
        achieved=err,
    )


def _level_nodes(k: int, t_max: float, t_min: float | None = None) -> np.ndarray:
    t_min = -t_max if t_min is None else t_min
    if k == 0:
        return np.arange(math.ceil(t_min), math.floor(t_max) + 1, dtype=float)
    h = 2.0 ** -k
    # odd multiples of h only: the even ones belong to coarser levels
    j = np.arange(math.ceil((t_min / h - 1) / 2), math.floor((t_max / h - 1) / 2) + 1)
    return (2 * j + 1) * h


def tanh_sinh(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    accuracy: EvalAccuracy = DEFAULT_ACCURACY,
    t_max: float = 4.0,
    with_distances: bool = False,
) -> tuple[float, float]:
    """Integrate ``f`` over the finite interval ``[a, b]``.

    Integrable endpoint singularities (logarithms, inverse square roots) are
    handled by the transformation; ``f`` is never called at ``a`` or ``b``.
    With ``with_distances`` the integrand is called as ``f(x, x - a, b - x)``
    with both distances computed exactly, so singularities at a nonzero
    endpoint keep full accuracy.

    Returns
    -------
    (value, error_estimate)
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        if with_distances:
            v, e = tanh_sinh(lambda x, da, db: f(x, db, da), b, a, accuracy, t_max, True)
        else:
            v, e = tanh_sinh(f, b, a, accuracy, t_max)
        return -v, e
    half = 0.5 * (b - a)

    def level_sum(k):
        t = _level_nodes(k, t_max)
        u = _HALF_PI * np.sinh(t)
        # distances to both endpoints computed without cancellation
        e2u = np.exp(-2.0 * np.abs(u))
        near = (b - a) * e2u / (1.0 + e2u)
        x = np.where(u < 0, a + near, b - near)
        w = half * _HALF_PI * np.cosh(t) / np.cosh(u) ** 2
        if with_distances:
            far = (b - a) - near
            da = np.where(u < 0, near, far)
            db = np.where(u < 0, far, near)
            keep = (w > 0) & (near > 0)
            return float(np.sum(w[keep] * f(x[keep], da[keep], db[keep])))
        keep = (w > 0) & (x > a) & (x < b)
        if not np.any(keep):
            return 0.0
        return float(np.sum(w[keep] * f(x[keep])))

    return _refine(level_sum, accuracy, "tanh-sinh")


def exp_sinh(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    scale: float = 1.0,
    accuracy: EvalAccuracy = DEFAULT_ACCURACY,
    t_min: float = -4.5,
    t_max: float = 4.0,
) -> tuple[float, float]:
    """Integrate ``f`` over ``[a, inf)`` with ``x = a + scale * exp(pi/2 sinh t)``.

    ``scale`` should be of the order of the integrand's decay length.  Nodes
    where ``f`` is not finite (overflowed far tails) contribute zero.
    """

    def level_sum(k):
        t = _level_nodes(k, t_max, t_min)
        g = np.exp(_HALF_PI * np.sinh(t))
        x = a + scale * g
        w = scale * _HALF_PI * np.cosh(t) * g
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            vals = w * f(x)
        vals = np.where(np.isfinite(vals), vals, 0.0)
        return float(np.sum(vals))

    return _refine(level_sum, accuracy, "exp-sinh")

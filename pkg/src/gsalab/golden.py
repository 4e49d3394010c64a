"""Golden-section search for unimodal scalar objectives."""

from __future__ import annotations

import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 400):
    """Maximize a unimodal f on [lo, hi]; returns (argmax, value).

    The bracket shrinks by the golden ratio each step, so max_iter is a
    safety stop well beyond what any representable tolerance needs.
    """
    if not hi > lo:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    else:
        raise RuntimeError(f"golden section failed to shrink [{lo}, {hi}] to {tol}")
    x = 0.5 * (a + b)
    return x, f(x)


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 400):
    x, fx = golden_section_max(lambda t: -f(t), lo, hi, tol=tol, max_iter=max_iter)
    return x, -fx


def grid_then_golden_min(f, lo: float, hi: float, grid: int = 257, tol: float = 1e-10):
    """Dense scan followed by golden refinement around the best cell.

    Robust against mild multimodality from floating-point plateaus; used for
    infima of log-space integrands over the radius shell.
    """
    import numpy as np

    xs = np.linspace(lo, hi, grid)
    vals = np.array([f(x) for x in xs])
    k = int(np.argmin(vals))
    a = xs[max(0, k - 1)]
    b = xs[min(grid - 1, k + 1)]
    if a == b:
        return float(xs[k]), float(vals[k])
    x, fx = golden_section_min(f, a, b, tol=tol)
    if vals[k] < fx:
        return float(xs[k]), float(vals[k])
    return x, fx

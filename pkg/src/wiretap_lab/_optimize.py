"""Deterministic maximisation over binary priors: a fixed grid followed by
golden-section refinement around the best grid point."""
import math

import numpy as np

GRID_STEP = 1e-3
TOL = 1e-8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo, hi, tol=TOL):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def maximize_binary_prior(f, grid_values=None, step=GRID_STEP, tol=TOL):
    """Maximise ``f(p1)`` over ``p1`` in [0, 1].

    ``grid_values`` may supply ``f`` already evaluated on the grid (for callers
    that vectorise). Ties on the grid go to the smallest ``p1``.
    Returns ``(best_p1, best_value)``.
    """
    n = int(round(1.0 / step))
    grid = np.linspace(0.0, 1.0, n + 1)
    values = np.asarray(grid_values if grid_values is not None else [f(x) for x in grid])
    i = int(np.argmax(values))
    best_x, best_v = float(grid[i]), float(values[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n)]
    x, v = golden_section_max(f, float(lo), float(hi), tol)
    if v > best_v:
        best_x, best_v = x, v
    return best_x, best_v

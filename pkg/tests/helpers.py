"""Shared test fixtures: polynomial surfaces and boundary-data sampling."""

import numpy as np

from smoothfill.grid import outward_direction, stencil_data_points

# a full cubic: every monomial of total degree <= 3 with asymmetric weights
CUBIC_COEFFS = {
    (0, 0): 0.7, (1, 0): -1.3, (0, 1): 2.1, (1, 1): 0.9,
    (2, 0): -0.4, (0, 2): 1.6, (2, 1): 0.8, (1, 2): -0.6,
    (3, 0): 0.5, (0, 3): -1.1,
}


def poly_value(x, y, coeffs=CUBIC_COEFFS):
    return sum(a * x**i * y**j for (i, j), a in coeffs.items())


def poly_laplacian(x, y, coeffs=CUBIC_COEFFS):
    acc = 0.0 * (x + y)
    for (i, j), a in coeffs.items():
        if i >= 2:
            acc = acc + a * i * (i - 1) * x ** (i - 2) * y**j
        if j >= 2:
            acc = acc + a * j * (j - 1) * x**i * y ** (j - 2)
    return acc


def poly_gradient(x, y, coeffs=CUBIC_COEFFS):
    gx = 0.0 * (x + y)
    gy = 0.0 * (x + y)
    for (i, j), a in coeffs.items():
        if i >= 1:
            gx = gx + a * i * x ** (i - 1) * y**j
        if j >= 1:
            gy = gy + a * j * x**i * y ** (j - 1)
    return gx, gy


def sample_data(grid, cls, value, lap=None, grad=None):
    """(g, f, q) dicts sampled from callables over the data support."""
    g, f, q = {}, {}, {}
    for row, col in sorted(stencil_data_points(cls)):
        x, y = grid.xy(row, col)
        g[(row, col)] = float(value(x, y))
        if lap is not None:
            f[(row, col)] = float(lap(x, y))
        if grad is not None and cls.ring1[row, col]:
            out = outward_direction(cls, row, col)
            if out is not None:
                dr, dc = out
                gx, gy = grad(x, y)
                q[(row, col)] = float(dc * gx + dr * gy)
    return g, f, q


def exact_at_unknowns(grid, cls, value):
    pts = cls.index.points
    xs = grid.x_min + pts[:, 1] * grid.h
    ys = grid.y_min + pts[:, 0] * grid.h
    return np.asarray(value(xs, ys), dtype=float)

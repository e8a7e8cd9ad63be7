"""Brute-force reference assemblies built by literal stencil enumeration.

Independent of the production assembly path: dense matrices over the unknown
set, a dict of stencil taps walked one by one, and explicit per-direction case
analysis for the boundary treatment. Used to cross-check every assembled
system entry for entry.
"""

import numpy as np

POISSON_TAPS = {(0, 0): -4.0, (1, 0): 1.0, (-1, 0): 1.0, (0, 1): 1.0, (0, -1): 1.0}

BIHARMONIC_TAPS = {
    (0, 0): 20.0,
    (1, 0): -8.0, (-1, 0): -8.0, (0, 1): -8.0, (0, -1): -8.0,
    (1, 1): 2.0, (1, -1): 2.0, (-1, 1): 2.0, (-1, -1): 2.0,
    (2, 0): 1.0, (-2, 0): 1.0, (0, 2): 1.0, (0, -2): 1.0,
}


def _positions(cls):
    pts = [(int(r), int(c)) for r, c in cls.index.points]
    return pts, {p: k for k, p in enumerate(pts)}


def poisson_reference(cls, h, f_rhs, g):
    """Dense (A, b) for the 5-point scheme."""
    pts, pos = _positions(cls)
    n = len(pts)
    a = np.zeros((n, n))
    b = np.asarray(f_rhs, dtype=float).copy()
    for k, (r, c) in enumerate(pts):
        for (dr, dc), w in POISSON_TAPS.items():
            target = (r + dr, c + dc)
            if target in pos:
                a[k, pos[target]] += w / h**2
            else:
                b[k] -= w * g[target] / h**2
    return a, b


def biharmonic_reference(cls, h, g, q, strict=False, ghost="reflect"):
    """Dense (A, b) for the 13-point scheme with ghost elimination."""
    pts, pos = _positions(cls)
    nr, nc = cls.shape
    n = len(pts)
    a = np.zeros((n, n))
    b = np.zeros(n)
    for k, (r, c) in enumerate(pts):
        skipped_far = set()
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            near = (r + dr, c + dc)
            if near in pos:
                continue  # neighbour is unknown, no elimination
            far = (r + 2 * dr, c + 2 * dc)
            far_inside = 0 <= far[0] < nr and 0 <= far[1] < nc
            if strict or not far_inside:
                skipped_far.add(far)
                if ghost == "reflect":
                    a[k, k] += 1.0 / h**4
                    b[k] -= 2.0 * q[near] / h**3
                elif ghost == "one-sided":
                    b[k] -= q[near] / h**3 + g[near] / h**4
                else:
                    raise ValueError(ghost)
        for (dr, dc), w in BIHARMONIC_TAPS.items():
            target = (r + dr, c + dc)
            if target in skipped_far:
                continue
            if target in pos:
                a[k, pos[target]] += w / h**4
            else:
                b[k] -= w * g[target] / h**4
    return a, b


def assert_system_matches(system, a_ref, b_ref, rtol=1e-13):
    """Entry-for-entry comparison: identical sparsity, equal values."""
    a = system.to_dense()
    assert a.shape == a_ref.shape
    np.testing.assert_array_equal(a != 0.0, a_ref != 0.0)
    scale = np.abs(a_ref).max()
    np.testing.assert_allclose(a, a_ref, rtol=rtol, atol=rtol * scale)
    b_scale = max(np.abs(b_ref).max(), 1.0)
    np.testing.assert_allclose(system.b, b_ref, rtol=1e-12, atol=1e-12 * b_scale)

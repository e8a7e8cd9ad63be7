"""Uniform square lattices and classification of lattice points around a hole.

The completion problem lives on a regular lattice: a set of missing points
(the hole) is solved for, the known points immediately around it carry the
boundary data. Two classifiers are provided: one for the square-domain
experiments (every strictly interior point is missing) and one for raster
masks (arbitrary missing pixel sets with a two-pixel known collar).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

# Axis directions as (drow, dcol) steps.
AXIS_DIRECTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))


class CollarError(ValueError):
    """Missing pixels sit too close to the image edge to extract boundary data."""


class CellKind(IntEnum):
    UNKNOWN_INTERIOR = 0
    BOUNDARY = 1
    KNOWN_EXTERIOR = 2


@dataclass(frozen=True)
class Grid2D:
    """Uniform square-celled lattice of (n+1) x (n+1) points over a square.

    ``h`` is the spacing between adjacent lattice points. Point (row, col)
    sits at ``(x_min + col*h, y_min + row*h)``.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    n: int
    h: float

    def xy(self, row: int, col: int) -> tuple[float, float]:
        return (self.x_min + col * self.h, self.y_min + row * self.h)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n + 1, self.n + 1)


def build_grid(rect: tuple[float, float, float, float], n: int) -> Grid2D:
    """Build the lattice for a square ``rect = (x_min, x_max, y_min, y_max)``.

    Raises ValueError for n < 2 or a non-square rectangle (sides must agree
    to a relative 1e-12).
    """
    x_min, x_max, y_min, y_max = (float(v) for v in rect)
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not (x_max > x_min and y_max > y_min):
        raise ValueError("rectangle must have positive extent")
    side_x = x_max - x_min
    side_y = y_max - y_min
    if abs(side_x - side_y) > 1e-12 * max(side_x, side_y):
        raise ValueError(f"rectangle must be square, got sides {side_x} x {side_y}")
    return Grid2D(x_min, x_max, y_min, y_max, int(n), side_x / n)


class IndexMap:
    """Row-major bijection between unknown lattice points and 0..n_unknown-1."""

    def __init__(self, unknown: np.ndarray):
        self._index = np.full(unknown.shape, -1, dtype=np.int64)
        pts = np.argwhere(unknown)  # row-major scan order
        self._index[pts[:, 0], pts[:, 1]] = np.arange(len(pts))
        self._points = pts

    def __len__(self) -> int:
        return len(self._points)

    def index_of(self, row: int, col: int) -> int:
        k = int(self._index[row, col])
        if k < 0:
            raise KeyError(f"({row}, {col}) is not an unknown point")
        return k

    def point_of(self, k: int) -> tuple[int, int]:
        row, col = self._points[k]
        return (int(row), int(col))

    @property
    def points(self) -> np.ndarray:
        """All unknown points as an (n_unknown, 2) array of (row, col)."""
        return self._points

    @property
    def index_array(self) -> np.ndarray:
        """Lattice-shaped array of unknown indices, -1 at known points."""
        return self._index


@dataclass(frozen=True)
class CellClassification:
    """Per-lattice-point role plus ring bookkeeping for the stencils.

    ``kinds`` holds a CellKind code per point. ``ring1`` marks known points
    with an unknown axis neighbour; ``ring2`` marks known points two axis
    steps from an unknown (the far taps of the 13-point operator). A point
    may belong to both rings.
    """

    kinds: np.ndarray
    ring1: np.ndarray
    ring2: np.ndarray
    index: IndexMap
    n_unknown: int
    n_boundary: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.kinds.shape

    def is_unknown(self, row: int, col: int) -> bool:
        return self.kinds[row, col] == CellKind.UNKNOWN_INTERIOR

    def on_lattice(self, row: int, col: int) -> bool:
        nr, nc = self.kinds.shape
        return 0 <= row < nr and 0 <= col < nc

    def unknown_mask(self) -> np.ndarray:
        return self.kinds == CellKind.UNKNOWN_INTERIOR


def _shifted(mask: np.ndarray, drow: int, dcol: int) -> np.ndarray:
    """Mask shifted by (drow, dcol), padded with False."""
    out = np.zeros_like(mask)
    nr, nc = mask.shape
    src_r = slice(max(0, -drow), min(nr, nr - drow))
    src_c = slice(max(0, -dcol), min(nc, nc - dcol))
    dst_r = slice(max(0, drow), min(nr, nr + drow))
    dst_c = slice(max(0, dcol), min(nc, nc + dcol))
    out[dst_r, dst_c] = mask[src_r, src_c]
    return out


def _rings(unknown: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    known = ~unknown
    near1 = np.zeros_like(unknown)
    near2 = np.zeros_like(unknown)
    for dr, dc in AXIS_DIRECTIONS:
        near1 |= _shifted(unknown, dr, dc)
        near2 |= _shifted(unknown, 2 * dr, 2 * dc)
    return known & near1, known & near2


def _classify(unknown: np.ndarray, boundary: np.ndarray) -> CellClassification:
    ring1, ring2 = _rings(unknown)
    kinds = np.full(unknown.shape, CellKind.KNOWN_EXTERIOR, dtype=np.int8)
    kinds[boundary] = CellKind.BOUNDARY
    kinds[unknown] = CellKind.UNKNOWN_INTERIOR
    return CellClassification(
        kinds=kinds,
        ring1=ring1,
        ring2=ring2,
        index=IndexMap(unknown),
        n_unknown=int(unknown.sum()),
        n_boundary=int(boundary.sum()),
    )


def classify_rect_hole(grid: Grid2D) -> CellClassification:
    """Classify the square-domain problem: every strictly interior point is
    unknown and the whole lattice edge carries boundary data."""
    npts = grid.n + 1
    unknown = np.zeros((npts, npts), dtype=bool)
    unknown[1:-1, 1:-1] = True
    boundary = ~unknown
    return _classify(unknown, boundary)


def classify_mask(width: int, height: int, mask: np.ndarray) -> CellClassification:
    """Classify a raster lattice from per-pixel missing flags.

    ``mask`` is a (height, width) boolean array, True where the pixel is
    missing. Known pixels one or two axis steps from a missing pixel become
    BOUNDARY; the rest stay KNOWN_EXTERIOR. Every missing pixel must be at
    least two pixels from the image edge so that boundary data can be read
    from known pixels (CollarError otherwise).
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (height, width):
        raise ValueError(f"mask shape {mask.shape} does not match {height} x {width}")
    if mask.any():
        bad = np.zeros_like(mask)
        bad[:2, :] = True
        bad[-2:, :] = True
        bad[:, :2] = True
        bad[:, -2:] = True
        offenders = np.argwhere(mask & bad)
        if len(offenders):
            r, c = offenders[0]
            raise CollarError(
                f"missing pixel at (row={r}, col={c}) is within 2 pixels of the image edge"
            )
    ring1, ring2 = _rings(mask)
    return _classify(mask, ring1 | ring2)


def outward_direction(cls: CellClassification, row: int, col: int) -> tuple[int, int] | None:
    """Outward axis direction at a ring-1 point, or None if it is ambiguous.

    The direction points away from the unknown neighbour, out of the hole.
    """
    inward = [
        (dr, dc)
        for dr, dc in AXIS_DIRECTIONS
        if cls.on_lattice(row + dr, col + dc) and cls.is_unknown(row + dr, col + dc)
    ]
    if len(inward) != 1:
        return None
    dr, dc = inward[0]
    return (-dr, -dc)


def stencil_data_points(cls: CellClassification) -> set[tuple[int, int]]:
    """Known lattice points any 5- or 13-point tap from an unknown can land on.

    This is the support the Dirichlet data must cover: axis neighbours at
    distance 1 and 2 plus the four diagonal neighbours of every unknown.
    """
    offsets = [(dr, dc) for dr, dc in AXIS_DIRECTIONS]
    offsets += [(2 * dr, 2 * dc) for dr, dc in AXIS_DIRECTIONS]
    offsets += [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    unknown = cls.unknown_mask()
    covered = np.zeros_like(unknown)
    for dr, dc in offsets:
        covered |= _shifted(unknown, dr, dc)
    covered &= ~unknown
    return {(int(r), int(c)) for r, c in np.argwhere(covered)}

"""Assembly of the 5-point Laplacian and 13-point bilaplacian linear systems.

Rows are written for unknown points only; taps that land on known points move
to the right-hand side with the known value. Where a far axis tap of the
13-point operator would leave the known lattice entirely, the row is closed
with the one-sided correction ``q(Q)/h^3 + g(Q)/h^4`` built from the Dirichlet
value and outward normal derivative at the intervening boundary point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Mapping

import numpy as np
import scipy.sparse as sp

from .grid import AXIS_DIRECTIONS, CellClassification, Grid2D

Point = tuple[int, int]

# 13-point bilaplacian taps as (drow, dcol, weight); weights carry 1/h^4.
BIHARMONIC_TAPS = (
    (0, 0, 20.0),
    (-1, 0, -8.0), (1, 0, -8.0), (0, -1, -8.0), (0, 1, -8.0),
    (-1, -1, 2.0), (-1, 1, 2.0), (1, -1, 2.0), (1, 1, 2.0),
    (-2, 0, 1.0), (2, 0, 1.0), (0, -2, 1.0), (0, 2, 1.0),
)


@dataclass
class BoundaryData:
    """Boundary values keyed by lattice point (row, col).

    ``g`` are Dirichlet values, ``f`` Laplacian traces, ``q`` outward normal
    derivatives. ``g`` must cover every known point a stencil tap can reach;
    ``f`` and ``q`` are only needed on ring-1 points and may be absent.
    """

    g: Mapping[Point, float]
    f: Mapping[Point, float] | None = None
    q: Mapping[Point, float] | None = None

    def __post_init__(self):
        for name in ("g", "f", "q"):
            values = getattr(self, name)
            if values is None:
                continue
            for pt, v in values.items():
                if not np.isfinite(v):
                    raise ValueError(f"non-finite boundary value {name}[{pt}] = {v}")


class SparseSystem:
    """Linear system A u = b with A stored as canonical sorted triplets.

    Triplets are sorted by (row, col) with duplicates summed, so two systems
    assembled the same way compare entry-for-entry.
    """

    def __init__(self, n_unknown: int, rows, cols, vals, b):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows):
            same = np.zeros(len(rows), dtype=bool)
            same[1:] = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
            if same.any():
                # accumulate duplicates into the first occurrence
                keep = ~same
                group = np.cumsum(keep) - 1
                summed = np.zeros(int(keep.sum()))
                np.add.at(summed, group, vals)
                rows, cols, vals = rows[keep], cols[keep], summed
        self.n_unknown = int(n_unknown)
        self.rows = rows
        self.cols = cols
        self.vals = vals
        self.b = np.asarray(b, dtype=np.float64)
        if self.b.shape != (self.n_unknown,):
            raise ValueError("right-hand side length does not match n_unknown")
        diag_rows = set(self.rows[self.rows == self.cols].tolist())
        for r in range(self.n_unknown):
            if r not in diag_rows:
                raise ValueError(f"row {r} has a zero diagonal")

    def to_csr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.vals, (self.rows, self.cols)),
            shape=(self.n_unknown, self.n_unknown),
        )

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n_unknown, self.n_unknown))
        a[self.rows, self.cols] = self.vals
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.to_csr() @ x


def laplacian_5pt_apply(values: np.ndarray, grid: Grid2D, p: Point) -> float:
    """Apply the 5-point Laplacian (1, 1, -4, 1, 1)/h^2 to a lattice field at p."""
    row, col = p
    nr, nc = values.shape
    if not (0 < row < nr - 1 and 0 < col < nc - 1):
        raise ValueError(f"point {p} has no full 5-point neighbourhood on the lattice")
    acc = -4.0 * values[row, col]
    acc += values[row - 1, col] + values[row + 1, col]
    acc += values[row, col - 1] + values[row, col + 1]
    return acc / grid.h**2


def _data_value(data: Mapping[Point, float], pt: Point, what: str) -> float:
    try:
        return data[pt]
    except KeyError:
        raise ValueError(f"missing {what} value at lattice point {pt}") from None


def assemble_poisson(
    cls: CellClassification,
    grid: Grid2D | None,
    f_rhs: np.ndarray,
    g: Mapping[Point, float],
) -> SparseSystem:
    """Assemble the 5-point system for the Poisson problem on the unknowns.

    ``f_rhs`` is the source evaluated at the unknowns (length n_unknown, in
    index-map order). Known neighbours Q contribute -g(Q)/h^2 to b, so
    b = f_rhs - g_moved/h^2. ``grid=None`` means unit pixel spacing.
    """
    h = 1.0 if grid is None else grid.h
    inv_h2 = 1.0 / h**2
    f_rhs = np.asarray(f_rhs, dtype=np.float64)
    if f_rhs.shape != (cls.n_unknown,):
        raise ValueError("f_rhs must have one value per unknown")
    index = cls.index.index_array
    rows, cols, vals = [], [], []
    b = f_rhs.copy()
    for k, (row, col) in enumerate(cls.index.points):
        rows.append(k)
        cols.append(k)
        vals.append(-4.0 * inv_h2)
        for dr, dc in AXIS_DIRECTIONS:
            r, c = row + dr, col + dc
            if not cls.on_lattice(r, c):
                raise ValueError(f"unknown ({row}, {col}) touches the lattice edge")
            j = index[r, c]
            if j >= 0:
                rows.append(k)
                cols.append(int(j))
                vals.append(inv_h2)
            else:
                b[k] -= _data_value(g, (r, c), "Dirichlet") * inv_h2
    return SparseSystem(cls.n_unknown, rows, cols, vals, b)


GHOST_REFLECT = "reflect"
GHOST_ONE_SIDED = "one-sided"


def assemble_biharmonic_13pt(
    cls: CellClassification,
    grid: Grid2D | None,
    g: Mapping[Point, float],
    q: Mapping[Point, float],
    strict_stencil: bool = False,
    ghost: str = GHOST_REFLECT,
) -> SparseSystem:
    """Assemble the 13-point system for the bilaplacian with Dirichlet and
    normal-derivative data.

    Interior rows carry weights {20, -8, 2, 1}/h^4 and b = 0. For a row whose
    far axis tap in some direction leaves the lattice, the tap is eliminated
    with the boundary neighbour Q in that direction; corrections from several
    directions add up. Two eliminations are available:

    * ``reflect`` (default): the far value is the central-difference mirror
      ``u(P) + 2h q(Q)``, folding weight 1/h^4 back onto the centre and
      sending -2 q(Q)/h^3 to b. Exact through quadratics along the normal;
      this is the variant whose completion error decays at 4th order.
    * ``one-sided``: the far value is ``g(Q) + h q(Q)``, sending
      -(q(Q)/h^3 + g(Q)/h^4) to b. Only first-order accurate along the
      normal; kept for fidelity runs, its completion error decays at 2nd
      order.

    A far tap landing on a known lattice point normally uses that value;
    ``strict_stencil`` forces the ghost elimination whenever the
    adjacent axis neighbour is known, regardless of what the far tap would
    land on.
    """
    if ghost not in (GHOST_REFLECT, GHOST_ONE_SIDED):
        raise ValueError(f"unknown ghost elimination {ghost!r}")
    h = 1.0 if grid is None else grid.h
    inv_h3 = 1.0 / h**3
    inv_h4 = 1.0 / h**4
    index = cls.index.index_array
    rows, cols, vals = [], [], []
    b = np.zeros(cls.n_unknown)
    for k, (row, col) in enumerate(cls.index.points):
        row = int(row)
        col = int(col)
        # directions closed with a ghost elimination instead of a far tap
        corrected = []
        for dr, dc in AXIS_DIRECTIONS:
            qr, qc = row + dr, col + dc
            if not cls.on_lattice(qr, qc) or index[qr, qc] >= 0:
                continue  # neighbour unknown: the far tap stays a normal tap
            far_on_lattice = cls.on_lattice(row + 2 * dr, col + 2 * dc)
            if strict_stencil or not far_on_lattice:
                corrected.append((dr, dc))
                qv = _data_value(q, (qr, qc), "normal-derivative")
                if ghost == GHOST_REFLECT:
                    rows.append(k)
                    cols.append(k)
                    vals.append(inv_h4)
                    b[k] -= 2.0 * qv * inv_h3
                else:
                    gv = _data_value(g, (qr, qc), "Dirichlet")
                    b[k] -= qv * inv_h3 + gv * inv_h4
        for dr, dc, w in BIHARMONIC_TAPS:
            if (dr, dc) == (0, 0):
                rows.append(k)
                cols.append(k)
                vals.append(w * inv_h4)
                continue
            if abs(dr) == 2 or abs(dc) == 2:
                if (dr // 2, dc // 2) in corrected:
                    continue
            r, c = row + dr, col + dc
            if not cls.on_lattice(r, c):
                raise ValueError(
                    f"stencil tap ({r}, {c}) from unknown ({row}, {col}) leaves the lattice"
                )
            j = index[r, c]
            if j >= 0:
                rows.append(k)
                cols.append(int(j))
                vals.append(w * inv_h4)
            else:
                b[k] -= w * _data_value(g, (r, c), "Dirichlet") * inv_h4
    return SparseSystem(cls.n_unknown, rows, cols, vals, b)


def write_matrix_market(system: SparseSystem, stream: IO[str]) -> None:
    """Dump the matrix as MatrixMarket coordinate text (1-based indices)."""
    stream.write("%%MatrixMarket matrix coordinate real general\n")
    stream.write(f"{system.n_unknown} {system.n_unknown} {len(system.vals)}\n")
    for r, c, v in zip(system.rows, system.cols, system.vals):
        stream.write(f"{r + 1} {c + 1} {float(v)!r}\n")

"""Completion schemes: harmonic, biharmonic, and the general Poisson cascade.

Three ways to fill the unknowns from boundary data:

* harmonic: one 5-point Poisson solve with the Dirichlet trace.
* biharmonic via Laplacian traces: two chained Poisson solves (the first
  extends the Laplacian trace, the second uses it as a source).
* biharmonic via normal derivatives: one 13-point bilaplacian solve.

The cascade generalises the first two to any depth: stage i solves
``lap v_i = v_{i-1}`` with the i-th supplied trace as Dirichlet data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .assembly import GHOST_REFLECT, Point, assemble_biharmonic_13pt, assemble_poisson
from .grid import CellClassification, Grid2D
from .solver import SolverOptions, SolveStats, solve_system

HARMONIC = "harmonic"
BIHARMONIC_L = "biharmonic-l"
BIHARMONIC_N = "biharmonic-n"
POLYHARMONIC_L = "polyharmonic-l"


@dataclass(frozen=True)
class CompletedField:
    """Filled lattice: known points keep their data, unknowns hold the solution.

    ``values`` covers the whole lattice; known points outside the supplied
    data support stay 0. ``order`` is the cascade depth (1 harmonic,
    2 biharmonic, n for the general cascade).
    """

    grid: Grid2D | None
    cls: CellClassification
    values: np.ndarray
    scheme: str
    order: int
    stats: tuple[SolveStats, ...]

    def unknown_values(self) -> np.ndarray:
        pts = self.cls.index.points
        return self.values[pts[:, 0], pts[:, 1]]


def _field_from(
    cls: CellClassification,
    grid: Grid2D | None,
    known: Mapping[Point, float],
    solution: np.ndarray,
    scheme: str,
    order: int,
    stats: Sequence[SolveStats],
) -> CompletedField:
    values = np.zeros(cls.shape)
    for (r, c), v in known.items():
        values[r, c] = v
    pts = cls.index.points
    values[pts[:, 0], pts[:, 1]] = solution
    if not np.all(np.isfinite(values)):
        raise ValueError("completed field contains non-finite values")
    return CompletedField(grid, cls, values, scheme, order, tuple(stats))


def complete_polyharmonic_laplacian(
    cls: CellClassification,
    grid: Grid2D | None,
    traces: Sequence[Mapping[Point, float]],
    options: SolverOptions | None = None,
    scheme: str = POLYHARMONIC_L,
) -> CompletedField:
    """Run the Poisson cascade over the supplied traces.

    ``traces[i]`` is the Dirichlet data of stage i+1: the (n-1-i)-th Laplacian
    power of the target surface on the boundary, so the list runs from the
    highest-order trace down to the plain Dirichlet values.
    """
    if not traces:
        raise ValueError("at least one boundary trace is required")
    options = options or SolverOptions()
    v = np.zeros(cls.n_unknown)
    stats = []
    for trace in traces:
        system = assemble_poisson(cls, grid, v, trace)
        v, stage_stats = solve_system(system, options)
        stats.append(stage_stats)
    return _field_from(cls, grid, traces[-1], v, scheme, len(traces), stats)


def complete_harmonic(
    cls: CellClassification,
    grid: Grid2D | None,
    g: Mapping[Point, float],
    options: SolverOptions | None = None,
) -> CompletedField:
    """Fill the unknowns with the discrete harmonic extension of g."""
    return complete_polyharmonic_laplacian(cls, grid, [g], options, scheme=HARMONIC)


def complete_biharmonic_laplacian(
    cls: CellClassification,
    grid: Grid2D | None,
    g: Mapping[Point, float],
    f: Mapping[Point, float],
    options: SolverOptions | None = None,
) -> CompletedField:
    """Biharmonic fill from Dirichlet values g and Laplacian traces f."""
    return complete_polyharmonic_laplacian(cls, grid, [f, g], options, scheme=BIHARMONIC_L)


def complete_biharmonic_normal(
    cls: CellClassification,
    grid: Grid2D | None,
    g: Mapping[Point, float],
    q: Mapping[Point, float],
    options: SolverOptions | None = None,
    strict_stencil: bool = False,
    ghost: str = GHOST_REFLECT,
) -> CompletedField:
    """Biharmonic fill from Dirichlet values g and outward normal derivatives q."""
    options = options or SolverOptions()
    system = assemble_biharmonic_13pt(
        cls, grid, g, q, strict_stencil=strict_stencil, ghost=ghost
    )
    solution, stats = solve_system(system, options)
    return _field_from(cls, grid, g, solution, BIHARMONIC_N, 2, [stats])

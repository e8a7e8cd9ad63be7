"""Surface completion and image inpainting by harmonic and biharmonic fills."""

from .assembly import (
    GHOST_ONE_SIDED,
    GHOST_REFLECT,
    BoundaryData,
    SparseSystem,
    assemble_biharmonic_13pt,
    assemble_poisson,
    laplacian_5pt_apply,
    write_matrix_market,
)
from .grid import (
    CellClassification,
    CellKind,
    CollarError,
    Grid2D,
    IndexMap,
    build_grid,
    classify_mask,
    classify_rect_hole,
    outward_direction,
    stencil_data_points,
)
from .harness import (
    COSINE,
    CUBIC,
    PLANE,
    ConvergenceReport,
    ConvergenceRow,
    OrderEstimate,
    estimate_order,
    laplacian_power,
    reference_surface,
    run_convergence_study,
    sample_boundary_data,
    sample_traces,
    sup_error,
)
from .inpaint import (
    InpaintJob,
    InpaintResult,
    PNMError,
    RasterImage,
    extract_boundary_data,
    inpaint,
    inpaint_metrics,
    read_mask,
    read_pnm,
    run_inpaint_job,
    synthetic_bump,
    synthetic_edge,
    synthetic_ramp,
    write_pnm,
)
from .schemes import (
    BIHARMONIC_L,
    BIHARMONIC_N,
    HARMONIC,
    POLYHARMONIC_L,
    CompletedField,
    complete_biharmonic_laplacian,
    complete_biharmonic_normal,
    complete_harmonic,
    complete_polyharmonic_laplacian,
)
from .solver import (
    MaxIterationsError,
    NonSymmetricSystemError,
    SingularSystemError,
    SolverError,
    SolverOptions,
    SolveStats,
    residual_norm,
    solve_cg,
    solve_dense,
    solve_system,
)

__version__ = "0.1.0"

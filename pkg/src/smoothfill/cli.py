"""Command-line interface: complete, convergence, inpaint, dump-system.

Exit codes: 0 success, 2 usage error, 3 I/O or input-data error, 4 solver
failure. Every output file is written atomically (temp file + rename). With
``--plots`` each command also renders a PNG figure next to its main output.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .assembly import (
    GHOST_ONE_SIDED,
    GHOST_REFLECT,
    assemble_biharmonic_13pt,
    assemble_poisson,
    write_matrix_market,
)
from .grid import CollarError, build_grid, classify_rect_hole, stencil_data_points
from .harness import (
    SURFACES,
    reference_surface,
    run_convergence_study,
    sample_boundary_data,
    sample_traces,
)
from .inpaint import (
    InpaintJob,
    PNMError,
    inpaint_metrics,
    read_mask,
    read_pnm,
    run_inpaint_job,
    write_pnm,
)
from .schemes import (
    BIHARMONIC_L,
    BIHARMONIC_N,
    HARMONIC,
    POLYHARMONIC_L,
    complete_biharmonic_laplacian,
    complete_biharmonic_normal,
    complete_harmonic,
    complete_polyharmonic_laplacian,
)
from .solver import SolverError, SolverOptions

COMPLETE_METHODS = (HARMONIC, BIHARMONIC_L, BIHARMONIC_N, POLYHARMONIC_L)


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--solver", choices=("auto", "dense", "cg"), default="auto")
    parser.add_argument("--tol", type=float, default=1e-12, help="CG relative residual target")
    parser.add_argument("--max-iter", type=int, default=None, help="CG iteration cap")
    parser.add_argument("--precond", choices=("none", "jacobi"), default="none")


def _add_stencil_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--strict-stencil",
        action="store_true",
        help="force the ghost elimination at every hole-adjacent row of the "
        "13-point operator, even where known far values exist",
    )
    parser.add_argument(
        "--ghost",
        choices=(GHOST_REFLECT, GHOST_ONE_SIDED),
        default=GHOST_REFLECT,
        help="ghost elimination for the 13-point operator (one-sided is the "
        "first-order fidelity variant)",
    )


def _solver_options(args: argparse.Namespace) -> SolverOptions:
    return SolverOptions(
        method=args.solver, tol=args.tol, max_iter=args.max_iter, precond=args.precond
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothfill",
        description="Surface completion and image inpainting by harmonic and biharmonic fills.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complete", help="fill a square hole with exact boundary data")
    p.add_argument("--method", choices=COMPLETE_METHODS, required=True)
    p.add_argument("--order", type=int, default=2, help="cascade depth for polyharmonic-l")
    p.add_argument("--function", choices=SURFACES, default="cosine")
    p.add_argument("--domain-halfwidth", type=float, default=1.0)
    p.add_argument("--grid-n", type=int, default=50)
    p.add_argument("--out", required=True, help="field CSV: x,y,value,known")
    p.add_argument("--plots", action="store_true", help="render a PNG next to --out")
    _add_solver_flags(p)
    _add_stencil_flags(p)

    p = sub.add_parser("convergence", help="domain-shrinking study over D_i = [-2^-i, 2^-i]^2")
    p.add_argument("--function", choices=SURFACES, default="cosine")
    p.add_argument("--imax", type=int, default=6)
    p.add_argument("--grid-n", type=int, default=50)
    p.add_argument("--out", required=True, help="report CSV")
    p.add_argument("--plots", action="store_true", help="render a PNG next to --out")
    _add_solver_flags(p)
    _add_stencil_flags(p)

    p = sub.add_parser("inpaint", help="fill the masked pixels of a PNM image")
    p.add_argument("--image", required=True, help="P5/P6 input image")
    p.add_argument("--mask", required=True, help="P5 mask; >= 128 means missing")
    p.add_argument("--method", choices=(HARMONIC, BIHARMONIC_L, BIHARMONIC_N), required=True)
    p.add_argument("--out", required=True, help="output PNM path")
    p.add_argument("--metrics", default=None, help="metrics CSV path")
    p.add_argument("--truth", default=None, help="ground-truth PNM for error metrics")
    p.add_argument("--plots", action="store_true", help="render a PNG next to --out")
    _add_solver_flags(p)
    _add_stencil_flags(p)

    p = sub.add_parser("dump-system", help="MatrixMarket dump of an assembled matrix")
    p.add_argument("--method", choices=(HARMONIC, BIHARMONIC_L, BIHARMONIC_N), required=True)
    p.add_argument("--grid-n", type=int, default=4)
    p.add_argument("--domain-halfwidth", type=float, default=1.0)
    p.add_argument("--out", required=True)
    _add_stencil_flags(p)
    return parser


def _cmd_complete(args: argparse.Namespace) -> int:
    r = args.domain_halfwidth
    grid = build_grid((-r, r, -r, r), args.grid_n)
    cls = classify_rect_hole(grid)
    data = sample_boundary_data(args.function, grid, cls)
    options = _solver_options(args)
    if args.method == HARMONIC:
        field = complete_harmonic(cls, grid, data.g, options)
    elif args.method == BIHARMONIC_L:
        field = complete_biharmonic_laplacian(cls, grid, data.g, data.f, options)
    elif args.method == BIHARMONIC_N:
        field = complete_biharmonic_normal(
            cls,
            grid,
            data.g,
            data.q,
            options,
            strict_stencil=args.strict_stencil,
            ghost=args.ghost,
        )
    else:
        traces = sample_traces(args.function, grid, cls, args.order)
        field = complete_polyharmonic_laplacian(cls, grid, traces, options)
    lines = ["x,y,value,known"]
    unknown = cls.unknown_mask()
    for row in range(grid.n + 1):
        for col in range(grid.n + 1):
            x, y = grid.xy(row, col)
            known = 0 if unknown[row, col] else 1
            lines.append(f"{x:.12g},{y:.12g},{field.values[row, col]:.17g},{known}")
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    if args.plots:
        from .figures import render_field

        exact = lambda xs, ys: reference_surface(args.function, xs, ys)[0]
        atomic_write_bytes(_figure_path(args.out), render_field(field, reference=exact))
    return 0


def _cmd_convergence(args: argparse.Namespace) -> int:
    report = run_convergence_study(
        args.function,
        args.imax,
        args.grid_n,
        _solver_options(args),
        strict_stencil=args.strict_stencil,
        ghost=args.ghost,
    )
    atomic_write_text(args.out, report.to_csv_text())
    if args.plots:
        from .figures import render_convergence

        atomic_write_bytes(_figure_path(args.out), render_convergence(report))
    return 0


def _cmd_inpaint(args: argparse.Namespace) -> int:
    image = read_pnm(Path(args.image).read_bytes())
    mask = read_mask(Path(args.mask).read_bytes())
    job = InpaintJob(
        image=image,
        mask=mask,
        method=args.method,
        options=_solver_options(args),
        strict_stencil=args.strict_stencil,
        ghost=args.ghost,
    )
    result = run_inpaint_job(job)
    atomic_write_bytes(args.out, write_pnm(result.image))
    truth = None
    if args.truth is not None:
        truth = read_pnm(Path(args.truth).read_bytes())
    if args.metrics is not None:
        m = inpaint_metrics(result, job, truth)
        sup = "" if m["sup_error"] is None else f"{m['sup_error']:.6g}"
        psnr = "" if m["psnr"] is None else f"{m['psnr']:.6g}"
        text = "method,sup_error,psnr,iterations\n"
        text += f"{m['method']},{sup},{psnr},{m['iterations']}\n"
        atomic_write_text(args.metrics, text)
    if args.plots:
        from .figures import render_inpaint_panel

        atomic_write_bytes(
            _figure_path(args.out), render_inpaint_panel(image, job.mask, result.image, truth)
        )
    return 0


def _cmd_dump_system(args: argparse.Namespace) -> int:
    r = args.domain_halfwidth
    grid = build_grid((-r, r, -r, r), args.grid_n)
    cls = classify_rect_hole(grid)
    zeros = {pt: 0.0 for pt in stencil_data_points(cls)}
    if args.method == BIHARMONIC_N:
        system = assemble_biharmonic_13pt(
            cls,
            grid,
            zeros,
            zeros,
            strict_stencil=args.strict_stencil,
            ghost=args.ghost,
        )
    else:
        system = assemble_poisson(cls, grid, np.zeros(cls.n_unknown), zeros)
    buf = io.StringIO()
    write_matrix_market(system, buf)
    atomic_write_text(args.out, buf.getvalue())
    return 0


_COMMANDS = {
    "complete": _cmd_complete,
    "convergence": _cmd_convergence,
    "inpaint": _cmd_inpaint,
    "dump-system": _cmd_dump_system,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except (PNMError, CollarError, OSError, ValueError) as exc:
        print(f"smoothfill: {exc}", file=sys.stderr)
        return 3
    except SolverError as exc:
        print(f"smoothfill: solver failure: {exc}", file=sys.stderr)
        return 4


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()

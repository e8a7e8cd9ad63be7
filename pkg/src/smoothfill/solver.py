"""Direct and conjugate-gradient solvers for the assembled sparse systems.

The dense LU path is the oracle for small systems; CG is the scalable path.
Both report the relative residual ||A x - b|| / max(||b||, 1). Solves are
deterministic: zero initial guess and a fixed accumulation order, so repeated
runs produce bit-identical iterates.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .assembly import SparseSystem

DENSE_GUARD = 20000
AUTO_DENSE_LIMIT = 5000


class SolverError(RuntimeError):
    pass


class SingularSystemError(SolverError):
    pass


class NonSymmetricSystemError(SolverError):
    pass


class MaxIterationsError(SolverError):
    """CG hit the iteration cap; carries the best iterate seen."""

    def __init__(self, message: str, best_x: np.ndarray, best_residual: float, iterations: int):
        super().__init__(message)
        self.best_x = best_x
        self.best_residual = best_residual
        self.iterations = iterations


@dataclass(frozen=True)
class SolveStats:
    iterations: int
    relative_residual: float
    method: str  # "dense" or "cg"
    wall_time: float


@dataclass(frozen=True)
class SolverOptions:
    """Solver selection shared by the completion schemes and the CLI.

    ``method="auto"`` picks the dense path for systems up to
    AUTO_DENSE_LIMIT unknowns and CG beyond that.
    """

    method: str = "auto"
    tol: float = 1e-12
    max_iter: int | None = None
    precond: str = "none"

    def __post_init__(self):
        if self.method not in ("auto", "dense", "cg"):
            raise ValueError(f"unknown solver method {self.method!r}")
        if self.precond not in ("none", "jacobi"):
            raise ValueError(f"unknown preconditioner {self.precond!r}")


def residual_norm(system: SparseSystem, x: np.ndarray) -> float:
    """Relative residual ||A x - b||_2 / max(||b||_2, 1)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (system.n_unknown,):
        raise ValueError(f"solution length {x.shape} does not match {system.n_unknown}")
    r = system.b - system.to_csr() @ x
    return float(np.linalg.norm(r) / max(np.linalg.norm(system.b), 1.0))


def solve_dense(system: SparseSystem) -> tuple[np.ndarray, SolveStats]:
    """LU solve with one refinement step; guards against oversized systems."""
    start = time.perf_counter()
    n = system.n_unknown
    if n > DENSE_GUARD:
        raise SolverError(f"dense solve guard: {n} unknowns exceeds {DENSE_GUARD}")
    a = system.to_dense()
    try:
        with warnings.catch_warnings():
            # exact singularity is detected below via the U diagonal
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(a)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rank errors
        raise SingularSystemError(str(exc)) from exc
    if np.any(np.diag(lu) == 0.0):
        raise SingularSystemError("matrix is singular")
    x = scipy.linalg.lu_solve((lu, piv), system.b)
    # one step of iterative refinement to push the residual to roundoff
    r = system.b - a @ x
    x = x + scipy.linalg.lu_solve((lu, piv), r)
    rel = residual_norm(system, x)
    if not np.isfinite(rel) or rel > 1e-10:
        raise SingularSystemError(f"dense solve residual {rel:.3e} exceeds 1e-10")
    return x, SolveStats(0, rel, "dense", time.perf_counter() - start)


def _definite_sign(diag: np.ndarray) -> float:
    if np.all(diag > 0):
        return 1.0
    if np.all(diag < 0):
        return -1.0
    raise SolverError("diagonal has mixed signs; system is not definite either way")


def solve_cg(
    system: SparseSystem,
    tol: float = 1e-12,
    max_iter: int | None = None,
    precond: str = "none",
) -> tuple[np.ndarray, SolveStats]:
    """Conjugate gradients from a zero initial guess.

    The matrix must be symmetric and (after flipping sign if the diagonal is
    negative) positive definite. Optional Jacobi preconditioning. Raises
    MaxIterationsError with the best iterate if the cap is reached.
    """
    start = time.perf_counter()
    n = system.n_unknown
    if max_iter is None:
        max_iter = max(10 * n, 1000)
    a = system.to_csr()
    asym = abs(a - a.T)
    scale = max(np.abs(system.vals).max(), 1.0) if len(system.vals) else 1.0
    if asym.nnz and asym.max() > 1e-12 * scale:
        raise NonSymmetricSystemError("matrix is not symmetric")

    sign = _definite_sign(a.diagonal())
    if sign < 0:
        a = -a
        b = -system.b
    else:
        b = system.b.copy()

    inv_diag = 1.0 / a.diagonal() if precond == "jacobi" else None
    den = max(np.linalg.norm(b), 1.0)

    x = np.zeros(n)
    r = b.copy()
    rel = float(np.linalg.norm(r) / den)
    if rel <= tol:
        return x, SolveStats(0, rel, "cg", time.perf_counter() - start)

    z = inv_diag * r if inv_diag is not None else r
    p = z.copy()
    rz = float(r @ z)
    best_x, best_rel = x.copy(), rel
    k = 0
    while k < max_iter:
        k += 1
        ap = a @ p
        pap = float(p @ ap)
        if pap <= 0.0:
            raise SolverError("matrix is not positive definite (p^T A p <= 0)")
        alpha = rz / pap
        x = x + alpha * p
        r = r - alpha * ap
        rel = float(np.linalg.norm(r) / den)
        if rel < best_rel:
            best_rel = rel
            best_x = x.copy()
        if rel <= tol:
            # guard against recurrence drift: accept only the true residual
            true_r = b - a @ x
            true_rel = float(np.linalg.norm(true_r) / den)
            if true_rel <= tol:
                return x, SolveStats(k, true_rel, "cg", time.perf_counter() - start)
            # restart from the recomputed residual
            r = true_r
            z = inv_diag * r if inv_diag is not None else r
            p = z.copy()
            rz = float(r @ z)
            continue
        z = inv_diag * r if inv_diag is not None else r
        rz_new = float(r @ z)
        beta = rz_new / rz
        p = z + beta * p
        rz = rz_new
    raise MaxIterationsError(
        f"CG did not reach tol={tol:g} in {max_iter} iterations "
        f"(best relative residual {best_rel:.3e})",
        best_x,
        best_rel,
        max_iter,
    )


def solve_system(system: SparseSystem, options: SolverOptions | None = None) -> tuple[np.ndarray, SolveStats]:
    """Dispatch to the dense or CG path per the options."""
    options = options or SolverOptions()
    method = options.method
    if method == "auto":
        method = "dense" if system.n_unknown <= AUTO_DENSE_LIMIT else "cg"
    if method == "dense":
        return solve_dense(system)
    return solve_cg(system, tol=options.tol, max_iter=options.max_iter, precond=options.precond)

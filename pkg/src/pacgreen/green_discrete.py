"""Discrete Green's function and Dirichlet solver on lattice domains.

Conventions: generator Delta f(z) = (1/4) sum_e f(z+e) - f(z); the Green's
field solves Delta F = -delta_w with zero boundary values, equivalently
(I - P) F = e_w on interior sites, where P is the interior-to-interior
quarter-weight adjacency.  Fields are stored over interior sites only, in
the domain's fixed (y, x) ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .domain import LatticeDomain
from .errors import ConvergenceError, DomainError
from .potential import REPRESENTATION_CONFIG, PotentialKernelConfig, potential_many
from .walk_mc import ArcMeasure


@dataclass
class ScalarField:
    """Real value per interior site of a lattice domain."""

    domain: LatticeDomain
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.domain.interior_count,):
            raise DomainError("field length must equal interior site count")
        if not np.all(np.isfinite(v)):
            raise DomainError("field values must be finite")
        self.values = v

    def value_at(self, z) -> float:
        i = self.domain.interior_index(z)
        if i < 0:
            raise DomainError(f"{z} is not an interior site")
        return float(self.values[i])


@dataclass(frozen=True)
class SolverConfig:
    method: str = "conjugate-gradient"
    residual_tolerance: float = 1e-10
    max_iterations: int = 200_000

    def __post_init__(self):
        if self.method not in ("conjugate-gradient", "gauss-seidel"):
            raise DomainError(f"unknown solver method {self.method!r}")
        if not (0.0 < self.residual_tolerance <= 1e-6):
            raise DomainError("residual_tolerance must lie in (0, 1e-6]")
        if self.max_iterations < 1000:
            raise DomainError("max_iterations must be >= 1000")


DEFAULT_SOLVER = SolverConfig()


def _system(d: LatticeDomain):
    """(I - P) over interior sites and the boundary quarter-weight coupling."""
    cached = getattr(d, "_system_cache", None)
    if cached is not None:
        return cached
    g = d.geometry
    M = d.interior_count
    off = d._offset
    wx = d.interior[:, 0] + g.z0[0] + off
    wy = d.interior[:, 1] + g.z0[1] + off
    int_rows, int_cols, bnd_rows, bnd_cols = [], [], [], []
    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        j = d._interior_grid[wx + dx, wy + dy]
        ok = j >= 0
        int_rows.append(np.nonzero(ok)[0])
        int_cols.append(j[ok])
        jb = d._boundary_grid[wx + dx, wy + dy]
        okb = jb >= 0
        bnd_rows.append(np.nonzero(okb)[0])
        bnd_cols.append(jb[okb])
    rows = np.concatenate(int_rows)
    cols = np.concatenate(int_cols)
    A = sp.identity(M, format="csr") - sp.csr_matrix(
        (np.full(rows.shape, 0.25), (rows, cols)), shape=(M, M))
    rows = np.concatenate(bnd_rows)
    cols = np.concatenate(bnd_cols)
    B = sp.csr_matrix((np.full(rows.shape, 0.25), (rows, cols)),
                      shape=(M, d.boundary_count))
    d._system_cache = (A, B)
    return A, B


def _cg(A, b, tol, maxit):
    x = np.zeros_like(b)
    r = b.copy()
    if np.max(np.abs(r)) <= tol:
        return x, 0
    p = r.copy()
    rs = r @ r
    for it in range(1, maxit + 1):
        Ap = A @ p
        step = rs / (p @ Ap)
        x += step * p
        r -= step * Ap
        if np.max(np.abs(r)) <= tol:
            # guard against accumulated drift in the recurrence
            true_r = b - A @ x
            if np.max(np.abs(true_r)) <= tol:
                return x, it
            r = true_r
        rs_new = r @ r
        p = r + (rs_new / rs) * p
        rs = rs_new
    raise ConvergenceError("conjugate gradient did not converge",
                           residual=float(np.max(np.abs(r))), iterations=maxit)


def _gauss_seidel(A, b, d: LatticeDomain, tol, maxit):
    # red-black sweeps; intended for small domains and verification runs
    parity = (d.interior[:, 0] + d.interior[:, 1]) & 1
    red = parity == 0
    black = ~red
    P = sp.identity(A.shape[0], format="csr") - A
    x = np.zeros_like(b)
    for it in range(1, maxit + 1):
        x[red] = b[red] + (P @ x)[red]
        x[black] = b[black] + (P @ x)[black]
        if it % 4 == 0 or it == maxit:
            res = np.max(np.abs(b - A @ x))
            if res <= tol:
                return x, it
    raise ConvergenceError("gauss-seidel did not converge",
                           residual=float(np.max(np.abs(b - A @ x))),
                           iterations=maxit)


def _solve(d: LatticeDomain, b, cfg: SolverConfig):
    A, _ = _system(d)
    if cfg.method == "conjugate-gradient":
        x, _ = _cg(A, b, cfg.residual_tolerance, cfg.max_iterations)
    else:
        x, _ = _gauss_seidel(A, b, d, cfg.residual_tolerance,
                             cfg.max_iterations)
    return x


def green_solve(d: LatticeDomain, w, cfg: SolverConfig = DEFAULT_SOLVER) -> ScalarField:
    """Discrete Green's function G(., w): expected visits to w before exit."""
    iw = d.interior_index(w)
    if iw < 0:
        raise DomainError(f"source {w} is not an interior site")
    b = np.zeros(d.interior_count)
    b[iw] = 1.0
    return ScalarField(d, _solve(d, b, cfg))


def dirichlet_solve(d: LatticeDomain, h, cfg: SolverConfig = DEFAULT_SOLVER) -> ScalarField:
    """Discrete-harmonic extension of boundary data h (per boundary site)."""
    h = np.asarray(h, dtype=np.float64)
    if h.shape != (d.boundary_count,):
        raise DomainError("boundary data length must equal boundary count")
    if not np.all(np.isfinite(h)):
        raise DomainError("boundary data must be finite")
    _, B = _system(d)
    return ScalarField(d, _solve(d, B @ h, cfg))


def green_via_potential(d: LatticeDomain, w,
                        cfg: SolverConfig = DEFAULT_SOLVER,
                        kernel_cfg: PotentialKernelConfig = REPRESENTATION_CONFIG,
                        ) -> ScalarField:
    """Green's function through the potential-kernel representation.

    Solves the Dirichlet problem with boundary data a(b - w) and subtracts
    a(z - w) pointwise; agrees with green_solve up to solver tolerance and
    kernel evaluation error.
    """
    iw = d.interior_index(w)
    if iw < 0:
        raise DomainError(f"source {w} is not an interior site")
    wx, wy = int(w[0]), int(w[1])
    h = potential_many(d.boundary[:, 0] - wx, d.boundary[:, 1] - wy, kernel_cfg)
    ext = dirichlet_solve(d, h, cfg)
    a_int = potential_many(d.interior[:, 0] - wx, d.interior[:, 1] - wy,
                           kernel_cfg)
    return ScalarField(d, ext.values - a_int)


def discrete_arc_measure(d: LatticeDomain, x,
                         cfg: SolverConfig = DEFAULT_SOLVER) -> ArcMeasure:
    """Exact discrete harmonic measure of each boundary arc, seen from x.

    One Dirichlet solve per arc with indicator boundary data; the rows are
    nonnegative and sum to 1 because the indicators partition the boundary.
    """
    ix = d.interior_index(x)
    if ix < 0:
        raise DomainError(f"{x} is not an interior site")
    N = d.geometry.N
    p = np.zeros(N)
    for k in range(1, N + 1):
        h = (d.boundary_arc == k).astype(np.float64)
        p[k - 1] = dirichlet_solve(d, h, cfg).values[ix]
    p = np.clip(p, 0.0, 1.0)
    total = p.sum()
    if 1.0 < total <= 1.0 + 1e-6:
        # solver roundoff can push the row sum a hair over 1
        p = p / total
    return ArcMeasure(probabilities=p)

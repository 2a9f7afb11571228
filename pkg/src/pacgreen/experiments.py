"""Convergence-rate experiments and the exit-radius comparison estimator.

The headline experiment: solve the discrete Green's function with source
at the origin once per (alpha, n), evaluate the continuous closed form at
every interior lattice point w with |w| >= (n / log^2 n)^{c_alpha / 2}
(the restriction that absorbs the additive O(|w|^-2) term), and regress
log sup-error against log(log^2 n / n).  The fitted slope is the measured
rate exponent, to be compared with c_alpha.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .domain import (PacmanGeometry, build_geometry, build_lattice_domain,
                     contains, nearest_boundary)
from .errors import DomainError, FitError
from .green_continuous import bm_arc_measure, green_pacman_many
from .green_discrete import DEFAULT_SOLVER, ScalarField, SolverConfig, green_solve
from .walk_mc import WalkRunConfig, sample_exits, trial_rng, workers_from_env

_BM_STREAM = 1 << 48   # keeps the exit-radius sampler off the walk streams


def region_min_radius(g: PacmanGeometry) -> float:
    """Inner exclusion radius (n / log^2 n)^{c_alpha / 2} around the origin."""
    return (g.n / g.bucket_width) ** (g.c_alpha / 2.0)


def fit_loglog(points) -> tuple[float, float, float]:
    """Least squares of log(value) on log(scale): (slope, intercept, r^2)."""
    pts = list(points)
    if len(pts) < 3:
        raise FitError("need at least 3 points")
    scales = np.array([p[0] for p in pts], dtype=np.float64)
    values = np.array([p[1] for p in pts], dtype=np.float64)
    if np.any(scales <= 0) or np.any(values <= 0):
        raise FitError("scales and values must be positive")
    x, y = np.log(scales), np.log(values)
    dx = x - x.mean()
    denom = float(dx @ dx)
    if denom == 0.0:
        raise FitError("scales are all identical")
    slope = float(dx @ (y - y.mean())) / denom
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float((resid ** 2).sum()) / ss_tot
    return slope, intercept, max(0.0, min(1.0, r2))


@dataclass(frozen=True)
class RatePoint:
    n: int
    sup_error: float
    mean_error: float
    region_min_radius: float


@dataclass
class RateFitResult:
    alpha: float
    c_alpha: float
    points: list[RatePoint]
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class ExperimentConfig:
    alphas: tuple
    ns: tuple
    solver: SolverConfig = DEFAULT_SOLVER
    walk: WalkRunConfig | None = None
    region_rule: str = "restricted"
    seed: int = 0

    def __post_init__(self):
        if not self.alphas:
            raise DomainError("need at least one alpha")
        ns = list(self.ns)
        if any(n < 8 for n in ns):
            raise DomainError("every n must be >= 8")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise DomainError("ns must be strictly increasing")
        if self.region_rule not in ("restricted", "all"):
            raise DomainError(f"unknown region rule {self.region_rule!r}")


def _region_errors(g: PacmanGeometry, solver: SolverConfig, region_rule: str):
    """Absolute error |G(w) - (2/pi) g(w)| on the admissible region.

    Returns (rmin, mask over interior sites, errors on the masked sites,
    discrete field).  One solve with source at the origin serves the whole
    field through the symmetry G(0, w) = G(w, 0).
    """
    if not contains(g, 0j):
        raise DomainError("origin is not interior for this geometry")
    d = build_lattice_domain(g)
    G = green_solve(d, (0, 0), solver)
    zc = d.interior[:, 0] + 1j * d.interior[:, 1]
    rmin = region_min_radius(g) if region_rule == "restricted" else 1.0
    mask = np.abs(zc) >= rmin
    gvals = green_pacman_many(g, 0j, zc[mask])
    err = np.abs(G.values[mask] - (2.0 / math.pi) * gvals)
    return rmin, mask, err, G


def error_field(g: PacmanGeometry,
                cfg: SolverConfig = DEFAULT_SOLVER) -> ScalarField:
    """Field of |G(w) - (2/pi) g(w)| on the admissible region.

    Sites inside the excluded origin ball carry 0 so the field stays
    defined over all interior sites.
    """
    _, mask, err, G = _region_errors(g, cfg, "restricted")
    values = np.zeros(G.domain.interior_count)
    values[mask] = err
    return ScalarField(G.domain, values)


def _rate_point(alpha: float, n: int, solver: SolverConfig,
                region_rule: str) -> RatePoint:
    g = build_geometry(alpha, n)
    rmin, _, err, _ = _region_errors(g, solver, region_rule)
    return RatePoint(n=n, sup_error=float(err.max()),
                     mean_error=float(err.mean()), region_min_radius=rmin)


def rate_sweep(cfg: ExperimentConfig, workers: int | None = None) -> list[RateFitResult]:
    """Sup-error decay and fitted rate exponent per alpha."""
    if workers is None:
        workers = workers_from_env()
    tasks = [(a, n) for a in cfg.alphas for n in cfg.ns]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(
                lambda t: _rate_point(t[0], t[1], cfg.solver, cfg.region_rule),
                tasks))
    else:
        done = [_rate_point(a, n, cfg.solver, cfg.region_rule) for a, n in tasks]
    by_alpha = {a: [] for a in cfg.alphas}
    for (a, _), pt in zip(tasks, done):
        by_alpha[a].append(pt)
    results = []
    for a in cfg.alphas:
        pts = sorted(by_alpha[a], key=lambda p: p.n)
        if len(pts) < 3:
            raise FitError("need at least 3 scales per alpha")
        slope, intercept, r2 = fit_loglog(
            [(math.log(p.n) ** 2 / p.n, p.sup_error) for p in pts])
        results.append(RateFitResult(alpha=a, c_alpha=build_geometry(a, pts[0].n).c_alpha,
                                     points=pts, slope=slope,
                                     intercept=intercept, r_squared=r2))
    return results


def prop_bound_scale(g: PacmanGeometry, k0: int) -> float:
    """Reference scale k0^{c-1} n^{-c} log^{c+1} n for the exit-radius gap."""
    c = g.c_alpha
    return k0 ** (c - 1.0) * g.n ** (-c) * math.log(g.n) ** (c + 1.0)


def expdiff_estimate(g: PacmanGeometry, x, y,
                     walk_cfg: WalkRunConfig) -> tuple[float, float]:
    """Mean absolute log-ratio of walk and Brownian exit radii.

    The walk side is simulated from x; the Brownian side draws an arc from
    the exact exit law at y and places the radius uniformly inside the
    arc's radial bucket, then converts tip-radius to distance from the
    origin along a wedge ray (the two rays agree up to the lattice rounding
    of z0).  Both starts must sit within 10 log n of the boundary and of
    each other.

    Returns (estimate, standard error).
    """
    yc = complex(y[0], y[1]) if isinstance(y, (tuple, list)) else complex(y)
    xc = complex(x[0], x[1])
    limit = 10.0 * math.log(g.n)
    dist, _ = nearest_boundary(g, xc)
    if dist > limit:
        raise DomainError(f"x must be within {limit:.2f} of the boundary")
    if abs(xc - yc) > limit:
        raise DomainError(f"|x - y| must be within {limit:.2f}")
    if not contains(g, xc) or not contains(g, yc):
        raise DomainError("x and y must be interior")

    d = build_lattice_domain(g)
    exits = sample_exits(d, (int(x[0]), int(x[1])), walk_cfg)
    s_radii = np.hypot(exits[:, 0], exits[:, 1])

    probs = bm_arc_measure(g, yc).probabilities
    cum = np.cumsum(probs)
    rng = trial_rng(walk_cfg.seed, _BM_STREAM)
    u = rng.random(walk_cfg.trials) * cum[-1]
    k = np.searchsorted(cum, u, side="right")          # 0-based bucket
    L2 = g.bucket_width
    lo = k * L2
    hi = np.minimum((k + 1) * L2, g.radius)
    rho = lo + rng.random(walk_cfg.trials) * (hi - lo)
    b_radii = np.abs(rho - g.z0_complex)

    vals = np.abs(np.log(s_radii / b_radii))
    se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return float(vals.mean()), se

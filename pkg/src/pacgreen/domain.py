"""Pacman domains and their lattice discretization.

A pacman domain of scale n and wedge angle alpha in [0, pi] is the disk
sector

    { r e^{i theta} : 0 < theta < 2 pi - alpha, 0 < r < 2n } - z0,

where z0 is the lattice point closest to n e^{i (pi - alpha/2)}.  Two
coordinate frames appear throughout:

  * the z-frame, in which lattice walks live and the origin is the point
    Green's functions are anchored at;
  * the w-frame, w = z + z0, in which the re-entrant tip sits at 0 and the
    membership test is a plain sector condition.

The boundary is partitioned into radial arcs of width log^2 n measured
from the tip; the last arc (index N) also carries the whole circular part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# Distance below which a point counts as sitting on the tip singularity.
TIP_GUARD = 1e-9


def c_alpha(alpha: float) -> float:
    """Rate exponent pi / (2 pi - alpha), increasing from 1/2 to 1."""
    return math.pi / (2.0 * math.pi - alpha)


def _closest_lattice_point(target: complex) -> tuple[int, int]:
    """Lattice point minimizing distance to target, ties by smaller x then y."""
    cx, cy = round(target.real), round(target.imag)
    best = None
    for x in (cx - 1, cx, cx + 1):
        for y in (cy - 1, cy, cy + 1):
            d = abs(complex(x, y) - target)
            key = (d, x, y)
            if best is None or key < best:
                best = key
    return best[1], best[2]


@dataclass(frozen=True)
class PacmanGeometry:
    """Continuous description of one pacman domain."""

    alpha: float
    n: int
    z0: tuple[int, int]
    c_alpha: float
    N: int
    radius: float

    @property
    def z0_complex(self) -> complex:
        return complex(self.z0[0], self.z0[1])

    @property
    def bucket_width(self) -> float:
        """Radial arc width log^2 n (natural logarithm)."""
        return math.log(self.n) ** 2


def build_geometry(alpha: float, n: int) -> PacmanGeometry:
    """Construct the geometry for wedge angle alpha and scale n."""
    if not (0.0 <= alpha <= math.pi):
        raise DomainError(f"alpha must lie in [0, pi], got {alpha}")
    if int(n) != n or n < 8:
        raise DomainError(f"n must be an integer >= 8, got {n}")
    n = int(n)
    z0 = _closest_lattice_point(n * np.exp(1j * (math.pi - alpha / 2.0)))
    N = math.ceil(2 * n / math.log(n) ** 2)
    return PacmanGeometry(alpha=float(alpha), n=n, z0=z0,
                          c_alpha=c_alpha(alpha), N=N, radius=2.0 * n)


def _snap(v: float) -> float:
    # sin/cos of the exact angles 0, pi/2, pi must classify lattice points
    # on the wedge edges exactly.
    for t in (0.0, 1.0, -1.0):
        if abs(v - t) < 1e-12:
            return t
    return v


def sector_mask(g: PacmanGeometry, wx, wy):
    """Vectorized membership test in w-frame coordinates (tip at 0).

    True where 0 < |w| < 2n and the argument of w, taken in [0, 2 pi),
    is strictly inside (0, 2 pi - alpha).  Points exactly on either wedge
    edge are excluded.
    """
    wx = np.asarray(wx)
    wy = np.asarray(wy)
    s, c = _snap(math.sin(g.alpha)), _snap(math.cos(g.alpha))
    r2 = wx * wx + wy * wy
    inside_disk = (r2 > 0) & (r2 < (2 * g.n) ** 2)
    # the theta = 0 edge
    on_positive_axis = (wy == 0) & (wx > 0)
    # the theta = 2 pi - alpha edge and the wedge below it: rotate by alpha
    # and look for arguments landing in [0, alpha)
    ry = wx * s + wy * c
    rx = wx * c - wy * s
    wedge = (wy <= 0) & ((ry > 0) | ((ry == 0) & (rx > 0)))
    return inside_disk & ~on_positive_axis & ~wedge


def contains(g: PacmanGeometry, z) -> bool:
    """True iff the z-frame point z lies strictly inside the domain."""
    z = complex(z[0], z[1]) if isinstance(z, (tuple, list)) else complex(z)
    w = z + g.z0_complex
    return bool(sector_mask(g, np.float64(w.real), np.float64(w.imag)))


def arc_index(g: PacmanGeometry, z) -> int:
    """Arc bucket of a boundary point: radial bucket of |z + z0|.

    Buckets have width log^2 n; everything at tip-distance
    >= (N - 1) log^2 n, including the circular part, maps to N.
    """
    z = complex(z[0], z[1]) if isinstance(z, (tuple, list)) else complex(z)
    r = abs(z + g.z0_complex)
    return min(g.N, int(r / g.bucket_width) + 1)


def arc_index_of_radius(g: PacmanGeometry, r):
    """Vectorized arc bucket from tip-distance r."""
    k = np.floor(np.asarray(r, dtype=np.float64) / g.bucket_width).astype(np.int64) + 1
    return np.minimum(k, g.N)


def nearest_boundary(g: PacmanGeometry, z) -> tuple[float, int]:
    """Distance from z to the continuous boundary and the nearest arc index."""
    z = complex(z[0], z[1]) if isinstance(z, (tuple, list)) else complex(z)
    w = z + g.z0_complex
    R = g.radius
    candidates = []
    # ray at theta = 0
    t = min(max(w.real, 0.0), R)
    candidates.append((abs(w - t), t))
    # ray at theta = 2 pi - alpha: rotate onto the positive axis
    wr = w * np.exp(1j * g.alpha)
    t = min(max(wr.real, 0.0), R)
    candidates.append((abs(wr - t), t))
    # circular arc
    candidates.append((abs(R - abs(w)), R))
    d, t = min(candidates)
    k = min(g.N, int(t / g.bucket_width) + 1)
    return d, k


@dataclass
class LatticeDomain:
    """Lattice discretization: interior sites, boundary sites, arc indices.

    Sites are stored in z-frame coordinates, ordered row-major by y then x
    so that solver iterations are reproducible.  Boundary sites are the
    non-interior lattice points one step from an interior point.
    """

    geometry: PacmanGeometry
    interior: np.ndarray        # (M, 2) int64
    boundary: np.ndarray        # (B, 2) int64
    boundary_arc: np.ndarray    # (B,) int64 in 1..N
    _interior_grid: np.ndarray = field(repr=False)   # dense w-frame index grid
    _boundary_grid: np.ndarray = field(repr=False)
    _offset: int = field(repr=False)

    @property
    def interior_count(self) -> int:
        return self.interior.shape[0]

    @property
    def boundary_count(self) -> int:
        return self.boundary.shape[0]

    def _grid_lookup(self, grid: np.ndarray, z) -> int:
        x, y = (int(z[0]), int(z[1])) if isinstance(z, (tuple, list, np.ndarray)) \
            else (int(z.real), int(z.imag))
        wx = x + self.geometry.z0[0] + self._offset
        wy = y + self.geometry.z0[1] + self._offset
        if not (0 <= wx < grid.shape[0] and 0 <= wy < grid.shape[1]):
            return -1
        return int(grid[wx, wy])

    def interior_index(self, z) -> int:
        """Dense index of an interior site, or -1."""
        return self._grid_lookup(self._interior_grid, z)

    def boundary_index(self, z) -> int:
        """Dense index of a boundary site, or -1."""
        return self._grid_lookup(self._boundary_grid, z)


def lattice_domain_from_sites(g: PacmanGeometry, interior_sites) -> LatticeDomain:
    """Lattice domain with an explicit interior site set (z-frame points).

    Boundary and arc classification follow the same rules as the full
    discretization.  Intended for small hand-checkable domains; the
    geometry supplies the coordinate frame and arc metadata.
    """
    sites = sorted((int(p[0]), int(p[1])) for p in interior_sites)
    if not sites:
        raise DomainError("need at least one interior site")
    coords = np.array(sorted(sites, key=lambda p: (p[1], p[0])), dtype=np.int64)
    w = coords + np.array(g.z0, dtype=np.int64)
    off = int(np.abs(w).max()) + 2
    W = 2 * off + 1
    int_grid = np.full((W, W), -1, dtype=np.int64)
    int_grid[w[:, 0] + off, w[:, 1] + off] = np.arange(coords.shape[0])
    bnd = set()
    for x, y in coords:
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            q = (x + dx, y + dy)
            if int_grid[q[0] + g.z0[0] + off, q[1] + g.z0[1] + off] < 0:
                bnd.add(q)
    bnd_coords = np.array(sorted(bnd, key=lambda p: (p[1], p[0])), dtype=np.int64)
    wb = bnd_coords + np.array(g.z0, dtype=np.int64)
    bnd_grid = np.full((W, W), -1, dtype=np.int64)
    bnd_grid[wb[:, 0] + off, wb[:, 1] + off] = np.arange(bnd_coords.shape[0])
    arcs = arc_index_of_radius(g, np.hypot(wb[:, 0], wb[:, 1]))
    return LatticeDomain(geometry=g, interior=coords, boundary=bnd_coords,
                         boundary_arc=arcs, _interior_grid=int_grid,
                         _boundary_grid=bnd_grid, _offset=off)


def build_lattice_domain(g: PacmanGeometry) -> LatticeDomain:
    """Enumerate interior and boundary lattice sites of the domain."""
    R = 2 * g.n
    off = R + 1
    ax = np.arange(-off, off + 1, dtype=np.int64)
    WX, WY = np.meshgrid(ax, ax, indexing="ij")
    interior = sector_mask(g, WX, WY)
    near = np.zeros_like(interior)
    near[1:, :] |= interior[:-1, :]
    near[:-1, :] |= interior[1:, :]
    near[:, 1:] |= interior[:, :-1]
    near[:, :-1] |= interior[:, 1:]
    boundary = near & ~interior

    def coords_of(mask):
        # argwhere on the transposed mask yields (y, x) lexicographic order
        yx = np.argwhere(mask.T)
        wx = yx[:, 1] - off
        wy = yx[:, 0] - off
        return np.stack([wx - g.z0[0], wy - g.z0[1]], axis=1), wx, wy

    int_coords, iwx, iwy = coords_of(interior)
    bnd_coords, bwx, bwy = coords_of(boundary)

    W = 2 * off + 1
    int_grid = np.full((W, W), -1, dtype=np.int64)
    int_grid[iwx + off, iwy + off] = np.arange(int_coords.shape[0])
    bnd_grid = np.full((W, W), -1, dtype=np.int64)
    bnd_grid[bwx + off, bwy + off] = np.arange(bnd_coords.shape[0])

    arcs = arc_index_of_radius(g, np.hypot(bwx, bwy))
    return LatticeDomain(geometry=g, interior=int_coords, boundary=bnd_coords,
                         boundary_arc=arcs, _interior_grid=int_grid,
                         _boundary_grid=bnd_grid, _offset=off)

"""Boundary samples, polygon regions and the example boundaries.

Boundary generators build their point lists the same way a ``a:d:b``
colon range would (see :func:`colon`) and then drop the repeated endpoints
where consecutive segments meet.
"""
import csv
import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from . import kernels
from .exceptions import InvalidInput

DEFAULT_POLYGON_TOL = 1e-16
# relative to the boundary diameter; segment endpoints computed along two
# different parametrizations can disagree in the last bit
DEDUP_RTOL = 1e-12


class RegionClass(enum.IntEnum):
    EXTERIOR = kernels.EXTERIOR
    INTERIOR = kernels.INTERIOR
    ON_BOUNDARY = kernels.ON_BOUNDARY


@dataclass(frozen=True, eq=False)
class PolygonRegion:
    """Closed polygon given by its vertex loop (last vertex joins the first)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.complex128).ravel()
        if v.shape[0] >= 2 and v[0] == v[-1]:
            v = v[:-1]
        if v.shape[0] < 3:
            raise InvalidInput("polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidInput("polygon vertices must be finite")
        object.__setattr__(self, "vertices", v)
        if self.signed_area == 0.0:
            raise InvalidInput("degenerate polygon (zero signed area)")

    @property
    def signed_area(self) -> float:
        x, y = self.vertices.real, self.vertices.imag
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @property
    def edges(self):
        """(start, end) vertex pairs."""
        return self.vertices, np.roll(self.vertices, -1)

    def classify(self, points, tol=DEFAULT_POLYGON_TOL) -> np.ndarray:
        """Vectorized :func:`classify_point`; returns an int8 array of RegionClass codes."""
        if not tol > 0:
            raise InvalidInput("tol must be positive")
        p = np.atleast_1d(np.asarray(points, dtype=np.complex128)).ravel()
        return kernels.classify_points(p.real, p.imag, self.vertices.real,
                                       self.vertices.imag, tol)

    def distance(self, points) -> np.ndarray:
        """Euclidean distance from each point to the polygon's edges."""
        p = np.atleast_1d(np.asarray(points, dtype=np.complex128)).ravel()[:, None]
        a, b = self.edges
        e = b - a
        t = np.clip(((p - a) * e.conj()).real / np.abs(e) ** 2, 0.0, 1.0)
        return np.abs(p - (a + t * e)).min(axis=1)


def classify_point(p, poly: PolygonRegion, tol=DEFAULT_POLYGON_TOL) -> RegionClass:
    """Winding-number classification of a single point.

    Points within ``tol`` of an edge are ON_BOUNDARY.
    """
    return RegionClass(int(poly.classify([p], tol)[0]))


@dataclass(frozen=True, eq=False)
class BoundarySamples:
    """Ordered boundary points with (optionally) their real Dirichlet values."""

    points: np.ndarray
    values: Optional[np.ndarray] = None
    ccw: bool = True

    def __post_init__(self):
        z = np.asarray(self.points, dtype=np.complex128).ravel()
        if z.shape[0] < 3:
            raise InvalidInput("need at least 3 boundary samples")
        if not np.all(np.isfinite(z)):
            raise InvalidInput("boundary samples must be finite")
        if np.any(z == np.roll(z, -1)):
            raise InvalidInput("consecutive boundary samples coincide")
        object.__setattr__(self, "points", z)
        if self.values is not None:
            u = np.asarray(self.values, dtype=np.float64).ravel()
            if u.shape != z.shape:
                raise InvalidInput(f"{u.shape[0]} values for {z.shape[0]} points")
            if not np.all(np.isfinite(u)):
                raise InvalidInput("boundary values must be finite")
            object.__setattr__(self, "values", u)

    def __len__(self):
        return self.points.shape[0]

    def with_values(self, values) -> "BoundarySamples":
        if callable(values):
            values = values(self.points)
        return BoundarySamples(self.points, values, self.ccw)

    def require_values(self) -> np.ndarray:
        if self.values is None:
            raise InvalidInput("boundary samples carry no values")
        return self.values


def colon(a, d, b) -> np.ndarray:
    """Range ``a:d:b`` with endpoint-symmetric rounding.

    The first half is built as ``a + k*d``, the second half backwards from
    ``a + n*d``, so both ends are hit as exactly as floating point allows.
    """
    n = int(np.floor((b - a) / d + 1e-10))
    if n < 0:
        return np.empty(0)
    k = np.arange(n + 1)
    end = a + n * d
    return np.where(k <= n / 2, a + k * d, end - (n - k) * d)


def dedup_cyclic(points, tol=0.0) -> np.ndarray:
    """Drop points equal (within ``tol``) to their predecessor, wrapping around."""
    z = np.asarray(points, dtype=np.complex128).ravel()
    if z.shape[0] == 0:
        return z
    keep = np.ones(z.shape[0], dtype=bool)
    last = z[0]
    for j in range(1, z.shape[0]):
        if abs(z[j] - last) <= tol:
            keep[j] = False
        else:
            last = z[j]
    # closing point repeating the first one
    idx = np.flatnonzero(keep)
    while idx.shape[0] > 1 and abs(z[idx[-1]] - z[0]) <= tol:
        keep[idx[-1]] = False
        idx = idx[:-1]
    return z[keep]


def _dedup_tol(z):
    return DEDUP_RTOL * max(1.0, float(np.ptp(z.real) + np.ptp(z.imag)))


def _samples(raw) -> BoundarySamples:
    raw = np.asarray(raw, dtype=np.complex128)
    return BoundarySamples(dedup_cyclic(raw, _dedup_tol(raw)))


def l_shape_raw(step: float) -> np.ndarray:
    """The six L-shape edges concatenated, shared endpoints still repeated."""
    return np.concatenate([
        colon(0, step, 2),
        2 + 1j * colon(0, step, 1),
        colon(2, -step, 1) + 1j,
        1 + 1j * colon(1, step, 2),
        colon(1, -step, 0) + 2j,
        1j * colon(2, -step, 0),
    ])


def l_shape_boundary(step: float = 0.01):
    """Uniformly sampled L-shaped boundary with vertices 0, 2, 2+i, 1+i, 1+2i, 2i."""
    if not 0 < step < 1:
        raise InvalidInput("step must lie in (0, 1)")
    poly = PolygonRegion(np.array([0, 2, 2 + 1j, 1 + 1j, 1 + 2j, 2j]))
    return _samples(l_shape_raw(step)), poly


def blade_point(theta):
    theta = np.asarray(theta, dtype=np.float64)
    return 2 * np.cos(theta) + 1j * (np.sin(theta) + 2 * np.cos(theta) ** 3)


def blade_boundary(n: int = 500):
    """Blade curve 2cos(t) + i(sin(t) + 2cos(t)^3) on ``n`` uniform angles in [0, 2pi].

    The closing sample at 2pi is dropped; the polygon is the sample loop.
    """
    if n < 16:
        raise InvalidInput("blade boundary needs n >= 16")
    theta = np.linspace(0.0, 2 * np.pi, n)[:-1]
    z = blade_point(theta)
    return BoundarySamples(z), PolygonRegion(z)


def double_boundary_raw(step: float):
    s1 = colon(0, step, 2)
    r2 = np.sqrt(2)
    outer = np.concatenate([
        1j * r2 + s1 * np.exp(1j * 5 / 4 * np.pi),
        -r2 + s1 * np.exp(1j * 7 / 4 * np.pi),
        -1j * r2 + s1 * np.exp(1j * 1 / 4 * np.pi),
        r2 + s1 * np.exp(1j * 3 / 4 * np.pi),
    ])
    s2 = colon(0, step, 0.5)
    inner = np.concatenate([
        s2 - 0.5 - 0.5j,
        s2 * np.exp(1j * np.pi / 2) + 0.0 - 0.5j,
        s2 * np.exp(1j * np.pi) + 0.0 + 0.0j,
        s2 * np.exp(1j * 3 / 2 * np.pi) - 0.5 + 0.0j,
    ])
    return outer, inner


def double_boundary(step: float = 0.01):
    """Tilted square with a square hole.

    Returns ``((outer_samples, outer_poly), (inner_samples, inner_poly))``.
    Both loops run counterclockwise.
    """
    if not 0 < step < 0.5:
        raise InvalidInput("step must lie in (0, 0.5)")
    outer, inner = double_boundary_raw(step)
    r2 = np.sqrt(2)
    outer_poly = PolygonRegion(np.array([1j * r2, -r2, -1j * r2, r2]))
    inner_poly = PolygonRegion(np.array([-0.5 - 0.5j, 0.0 - 0.5j, 0.0 + 0.0j, -0.5 + 0.0j]))
    return (_samples(outer), outer_poly), (_samples(inner), inner_poly)


def corner_offsets(edge_length: float, per_side: int, min_exp: float) -> np.ndarray:
    """Arclength offsets, measured from the edge start, of clustered points on one edge.

    Points sit at ``logspace(min_exp, 0, per_side)`` from each end corner;
    offsets reaching the far corner are skipped.
    """
    d = np.logspace(min_exp, 0.0, per_side)
    d = d[d < edge_length * (1 - 1e-12)]
    return np.concatenate([d, edge_length - d])


def cluster_corners(s: BoundarySamples, poly: PolygonRegion, per_side: int = 50,
                    min_exp: float = -6.0, interp: str = "cubic") -> BoundarySamples:
    """Add log-spaced samples next to every polygon corner.

    On each edge, ``per_side`` points are placed at distances
    ``10**min_exp .. 1`` from both end corners. Their values come from
    interpolating the existing samples of that edge in arclength: a
    not-a-knot cubic spline (``interp="cubic"``, needs 4 samples on the
    edge) or piecewise linear (``interp="linear"``).

    Every sample must lie on the polygon and every vertex must be one of the
    samples. The result keeps the original samples, in traversal order,
    starting from the original first sample.
    """
    if per_side < 1:
        raise InvalidInput("per_side must be >= 1")
    if not min_exp < 0:
        raise InvalidInput("min_exp must be negative")
    if interp not in ("cubic", "linear"):
        raise InvalidInput(f"unknown interpolation {interp!r}")
    u = s.require_values()
    z = s.points
    tol = 1e-9 * max(1.0, float(np.ptp(z.real) + np.ptp(z.imag)))

    a, b = poly.edges
    e = b - a
    lengths = np.abs(e)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])

    # edge parameter of every sample against every edge
    t = ((z[:, None] - a) * e.conj()).real / lengths
    tc = np.clip(t, 0.0, lengths)
    dist = np.abs(z[:, None] - (a + tc / lengths * e))
    if np.any(dist.min(axis=1) > tol):
        raise InvalidInput("samples do not lie on the polygon edges")
    owner = np.argmin(dist, axis=1)
    arc = cum[owner] + tc[np.arange(z.shape[0]), owner]

    new_z, new_u, new_arc = [], [], []
    for k in range(poly.vertices.shape[0]):
        on = dist[:, k] <= tol
        tk, order = np.unique(tc[on, k], return_index=True)
        uk = u[on][order]
        if tk.shape[0] < 2 or tk[0] > tol or tk[-1] < lengths[k] - tol:
            raise InvalidInput(f"corner of edge {k} not found among the samples")
        offs = corner_offsets(lengths[k], per_side, min_exp)
        if interp == "cubic" and tk.shape[0] >= 4:
            vals = CubicSpline(tk, uk)(offs)
        else:
            vals = np.interp(offs, tk, uk)
        new_z.append(a[k] + offs / lengths[k] * e[k])
        new_u.append(vals)
        new_arc.append(cum[k] + offs)

    all_z = np.concatenate([z] + new_z)
    all_u = np.concatenate([u] + new_u)
    all_arc = np.concatenate([arc] + new_arc)
    # traversal order starting from the original first sample
    all_arc = (all_arc - arc[0]) % cum[-1]
    order = np.argsort(all_arc, kind="stable")
    all_z, all_u = all_z[order], all_u[order]
    first = int(np.flatnonzero(order == 0)[0])
    all_z, all_u = np.roll(all_z, -first), np.roll(all_u, -first)

    dtol = _dedup_tol(all_z)
    keep = np.ones(all_z.shape[0], dtype=bool)
    last = all_z[0]
    for j in range(1, all_z.shape[0]):
        if abs(all_z[j] - last) <= dtol:
            keep[j] = False
        else:
            last = all_z[j]
    if abs(all_z[keep][-1] - all_z[0]) <= dtol:
        keep[np.flatnonzero(keep)[-1]] = False
    return BoundarySamples(all_z[keep], all_u[keep], s.ccw)


# ---------------------------------------------------------------- CSV formats

def _parse_rows(path, ncols, names):
    rows = []
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not c.strip() for c in rec):
                continue
            if lineno == 1 and [c.strip().lower() for c in rec] == names[:len(rec)]:
                continue  # header
            if len(rec) not in ncols:
                raise InvalidInput(f"{path}:{lineno}: expected {max(ncols)} fields, got {len(rec)}")
            try:
                rows.append([float(c) for c in rec])
            except ValueError:
                raise InvalidInput(f"{path}:{lineno}: malformed number in {rec!r}") from None
    if not rows:
        raise InvalidInput(f"{path}: no data rows")
    return rows


def read_boundary_csv(path, require_values=True) -> BoundarySamples:
    """Read ``x,y,u`` records. Without ``require_values`` the ``u`` column may be absent."""
    rows = _parse_rows(path, (3,) if require_values else (2, 3), ["x", "y", "u"])
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InvalidInput(f"{path}: mixed record widths")
    arr = np.array(rows)
    z = arr[:, 0] + 1j * arr[:, 1]
    vals = arr[:, 2] if arr.shape[1] == 3 else None
    x, y = z.real, z.imag
    area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    return BoundarySamples(z, vals, ccw=bool(area > 0))


def read_vertices_csv(path) -> PolygonRegion:
    arr = np.array(_parse_rows(path, (2,), ["x", "y"]))
    return PolygonRegion(arr[:, 0] + 1j * arr[:, 1])


def read_points_csv(path) -> np.ndarray:
    """Read ``x,y`` records as complex points."""
    arr = np.array(_parse_rows(path, (2,), ["x", "y"]))
    return arr[:, 0] + 1j * arr[:, 1]


def write_boundary_csv(path, s: BoundarySamples):
    u = s.values if s.values is not None else np.zeros(len(s))
    with open(path, "w", newline="") as fh:
        fh.write("x,y,u\n")
        for zj, uj in zip(s.points, u):
            fh.write(f"{zj.real:.17g},{zj.imag:.17g},{uj:.17g}\n")


def write_vertices_csv(path, poly: PolygonRegion):
    with open(path, "w", newline="") as fh:
        fh.write("x,y\n")
        for v in poly.vertices:
            fh.write(f"{v.real:.17g},{v.imag:.17g}\n")

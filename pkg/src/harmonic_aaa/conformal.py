"""Conformal maps onto the unit disk and onto an annulus.

Each map comes from a Laplace solve with Green's-function data: with
``u = -log|z - c|`` and its harmonic completion ``w``, the function
``g = (z - c) exp(w)`` has modulus one on the boundary. Forward and inverse
maps are then AAA fits of ``g`` against ``z`` and of ``z`` against ``g``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import InvalidInput
from .geometry import BoundarySamples, PolygonRegion, RegionClass, cluster_corners
from .laplace import EXTERIOR, INTERIOR, ComplexPotential, SolverConfig, _check_center, _solve
from .rational import BarycentricApproximant, aaa

DISK_INTERIOR = "disk-interior"
DISK_EXTERIOR = "disk-exterior"
ANNULUS = "annulus"


@dataclass(frozen=True, eq=False)
class ConformalMap:
    forward: BarycentricApproximant
    inverse: BarycentricApproximant
    kind: str
    potential: ComplexPotential
    modulus: Optional[float] = None

    def __call__(self, z):
        return self.forward(z)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "modulus": self.modulus,
            "forward": self.forward.to_dict(),
            "inverse": self.inverse.to_dict(),
            "potential": self.potential.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConformalMap":
        try:
            kind = d["kind"]
            if kind not in (DISK_INTERIOR, DISK_EXTERIOR, ANNULUS):
                raise ValueError(f"unknown map kind {kind!r}")
            mod = d.get("modulus")
            return cls(BarycentricApproximant.from_dict(d["forward"]),
                       BarycentricApproximant.from_dict(d["inverse"]), kind,
                       ComplexPotential.from_dict(d["potential"]),
                       None if mod is None else float(mod))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad map record: {exc}") from exc


def _green_samples(s: BoundarySamples, poly, center, sign, cfg):
    if cfg.cluster:
        per_side, min_exp = cfg.cluster
        s = cluster_corners(s.with_values(np.zeros(len(s))), poly, int(per_side), float(min_exp))
    return s.with_values(sign * np.log(np.abs(s.points - center)))


def _fit_maps(z, g):
    if np.unique(g).shape[0] != g.shape[0]:
        raise InvalidInput("boundary images collide; the map is not injective on the samples")
    return aaa(g, z), aaa(z, g)


def map_interior(s: BoundarySamples, poly: PolygonRegion, center,
                 cfg: SolverConfig = SolverConfig()) -> ConformalMap:
    """Map the inside of ``poly`` onto the unit disk, sending ``center`` to 0."""
    center = complex(center)
    _check_center(center, poly, cfg)
    s = _green_samples(s, poly, center, -1.0, cfg)
    pot, _ = _solve(s, [poly], center, INTERIOR, cfg, normalize=False)
    z = s.points
    g = (z - center) * np.exp(pot(z))
    fwd, inv = _fit_maps(z, g)
    return ConformalMap(fwd, inv, DISK_INTERIOR, pot)


def map_exterior(s: BoundarySamples, poly: PolygonRegion, center,
                 cfg: SolverConfig = SolverConfig()) -> ConformalMap:
    """Map the outside of ``poly`` onto the unit disk, sending infinity to 0."""
    center = complex(center)
    _check_center(center, poly, cfg)
    s = _green_samples(s, poly, center, 1.0, cfg)
    pot, _ = _solve(s, [poly], center, EXTERIOR, cfg, normalize=False)
    z = s.points
    g = np.exp(pot(z)) / (z - center)
    fwd, inv = _fit_maps(z, g)
    return ConformalMap(fwd, inv, DISK_EXTERIOR, pot)


def map_doubly_connected(outer, inner, center,
                         cfg: SolverConfig = SolverConfig()) -> ConformalMap:
    """Map the region between two polygons onto ``rho < |zeta| < 1``.

    ``outer`` and ``inner`` are ``(BoundarySamples, PolygonRegion)`` pairs;
    ``center`` must lie inside the hole. The modulus ``rho`` comes from the
    coefficient of the inner-boundary indicator column in the pole fit,
    ``rho = exp(-coefficient)``.
    """
    (s_out, p_out), (s_in, p_in) = outer, inner
    center = complex(center)
    if p_in.classify([center], cfg.polygon_tol)[0] != RegionClass.INTERIOR:
        raise InvalidInput(f"center {center} is not inside the hole")
    s_out = _green_samples(s_out, p_out, center, -1.0, cfg)
    s_in = _green_samples(s_in, p_in, center, -1.0, cfg)
    z = np.concatenate([s_out.points, s_in.points])
    if np.unique(z).shape[0] != z.shape[0]:
        raise InvalidInput("outer and inner boundaries share sample points")
    s = BoundarySamples(z, np.concatenate([s_out.values, s_in.values]))
    mask = np.arange(z.shape[0]) >= len(s_out)
    pot, _ = _solve(s, [p_out, p_in], center, INTERIOR, cfg, jump_mask=mask, normalize=False)
    rho = float(np.exp(-pot.jump_coeff))
    g = (z - center) * np.exp(pot(z))
    fwd, inv = _fit_maps(z, g)
    return ConformalMap(fwd, inv, ANNULUS, pot, rho)


def gridline_images(cmap: ConformalMap, n_circles: int = 9, n_rays: int = 16,
                    n_lines: int = 21, n_pts: int = 200):
    """Polylines for plotting a map.

    Returns a list of ``(polyline_id, points)``: images under the inverse
    map of concentric circles and radial rays of the disk/annulus, and
    images under the forward map of the domain's horizontal and vertical
    grid lines (clipped to the domain).
    """
    out = []
    r_in = cmap.modulus if cmap.kind == ANNULUS else 0.0
    radii = np.linspace(r_in, 1.0, n_circles + 2)[1:-1]
    theta = np.linspace(0.0, 2 * np.pi, n_pts)
    for r in radii:
        out.append((f"circle:{r:.6g}", cmap.inverse(r * np.exp(1j * theta))))
    rr = np.linspace(r_in, 1.0, n_pts)[1:-1] if r_in > 0 else np.linspace(0.0, 1.0, n_pts)[:-1]
    for k in range(n_rays):
        a = 2 * np.pi * k / n_rays
        out.append((f"ray:{a:.6g}", cmap.inverse(rr * np.exp(1j * a))))

    pot = cmap.potential
    verts = np.concatenate([p.vertices for p in pot.polygons])
    x0, x1 = verts.real.min(), verts.real.max()
    y0, y1 = verts.imag.min(), verts.imag.max()
    if cmap.kind == DISK_EXTERIOR:
        pad = 0.5 * max(x1 - x0, y1 - y0)
        x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    t = np.linspace(0.0, 1.0, n_pts)
    for label, lines in (("gridx", np.linspace(x0, x1, n_lines)[1:-1]),
                         ("gridy", np.linspace(y0, y1, n_lines)[1:-1])):
        for c in lines:
            if label == "gridx":
                pts = c + 1j * (y0 + t * (y1 - y0))
            else:
                pts = x0 + t * (x1 - x0) + 1j * c
            inside = pot.in_region(pts)
            # split at region exits
            runs = np.split(np.arange(pts.shape[0]), np.flatnonzero(np.diff(inside.astype(int))) + 1)
            for j, run in enumerate(r for r in runs if inside[r[0]] and r.shape[0] > 1):
                out.append((f"{label}:{c:.6g}:{j}", cmap.forward(pts[run])))
    return out

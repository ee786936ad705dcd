"""Laplace Dirichlet solver: smooth power sum plus region-filtered AAA poles.

The complex potential is assembled as

    w(z) = sum_n a_n phi_n(z)  +  b0  +  sum_k b_k / (z - p_k)  -  i * im_shift

where ``phi_n`` is the Arnoldi basis in ``z - c`` (interior problems) or
``1/(z - c)`` (exterior problems) and the ``p_k`` are the AAA poles of the
residual that lie on the far side of the boundary.
"""
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .arnoldi import FORWARD, RECIPROCAL, ArnoldiBasisFit, arnoldi_fit
from .exceptions import InvalidInput
from .geometry import (DEFAULT_POLYGON_TOL, BoundarySamples, PolygonRegion,
                       RegionClass, cluster_corners)
from .linalg import lstsq
from .rational import aaa, cleanup, poles_residues_zeros

log = logging.getLogger(__name__)

INTERIOR = "interior"
EXTERIOR = "exterior"


@dataclass(frozen=True)
class SolverConfig:
    smooth_degree: Optional[int] = None
    #: None means 1000, or 200 when corner clustering is on
    mmax: Optional[int] = None
    aaa_tol: float = 1e-13
    lawson: int = 0
    polygon_tol: float = DEFAULT_POLYGON_TOL
    #: (per_side, min_exp) for corner clustering, or None
    cluster: Optional[Tuple[int, float]] = None
    cleanup: bool = True
    cleanup_tol: float = 1e-13

    def __post_init__(self):
        if self.mmax is not None and self.mmax < 1:
            raise InvalidInput("mmax must be >= 1")
        if not self.aaa_tol > 0:
            raise InvalidInput("aaa_tol must be positive")
        if self.lawson not in (0, 1):
            raise InvalidInput("lawson must be 0 or 1")
        if self.smooth_degree is not None and self.smooth_degree < 0:
            raise InvalidInput("smooth_degree must be >= 0")

    @property
    def effective_mmax(self) -> int:
        if self.mmax is not None:
            return self.mmax
        return 200 if self.cluster else 1000


@dataclass(frozen=True, eq=False)
class ComplexPotential:
    smooth: ArnoldiBasisFit
    kept_poles: np.ndarray
    pole_coeffs: np.ndarray
    b0: complex
    im_shift: float
    region: str
    boundary_max_error: float
    polygons: Tuple[PolygonRegion, ...] = ()
    total_poles: int = 0
    jump_coeff: Optional[float] = None
    n_samples: int = 0
    config: dict = field(default_factory=dict)
    #: every AAA pole of the residual, kept or not
    all_poles: np.ndarray = field(default_factory=lambda: np.empty(0, np.complex128))

    @property
    def center(self) -> complex:
        return self.smooth.center

    def singular_part(self, z, shift: complex = 0j) -> np.ndarray:
        """``b0 + shift + sum b_k/(z - p_k)``; NaN where z hits a kept pole.

        ``shift`` goes into the compensated sum, so a constant that cancels
        most of the pole terms does not leave their rounding behind.
        """
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
        const = complex(self.b0) + shift
        out = np.full(z.shape, const)
        fin = ~np.isinf(z)
        out[fin] = kernels.pole_sum(z[fin], self.kept_poles, self.pole_coeffs, const)
        return out

    def __call__(self, z):
        """Vectorized evaluation; NaN at kept poles."""
        z_arr = np.asarray(z, dtype=np.complex128)
        flat = z_arr.ravel()
        hit = np.isin(flat, self.kept_poles) if self.kept_poles.size else np.zeros(flat.shape, bool)
        if self.smooth.basis_kind == RECIPROCAL:
            hit |= flat == self.smooth.center
        out = np.full(flat.shape, complex(np.nan, np.nan))
        ok = ~hit
        if np.any(ok):
            out[ok] = (self.smooth.basis(flat[ok]) @ self.smooth.coeffs
                       + self.singular_part(flat[ok], -1j * self.im_shift))
        if z_arr.ndim == 0:
            return complex(out[0])
        return out.reshape(z_arr.shape)

    def in_region(self, z, tol=None) -> np.ndarray:
        """True where ``z`` lies strictly inside the solution region."""
        tol = self.config.get("polygon_tol", DEFAULT_POLYGON_TOL) if tol is None else tol
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
        if not self.polygons:
            raise InvalidInput("potential carries no region polygons")
        c0 = self.polygons[0].classify(z, tol)
        if self.region == INTERIOR:
            ok = c0 == RegionClass.INTERIOR
            for hole in self.polygons[1:]:
                ok &= hole.classify(z, tol) == RegionClass.EXTERIOR
            return ok
        return c0 == RegionClass.EXTERIOR

    def to_dict(self) -> dict:
        return {
            "region": self.region,
            "center": [float(np.real(self.center)), float(np.imag(self.center))],
            "smooth": self.smooth.to_dict(),
            "kept_poles": _pairs(self.kept_poles),
            "pole_coeffs": _pairs(self.pole_coeffs),
            "b0": [float(np.real(self.b0)), float(np.imag(self.b0))],
            "im_shift": float(self.im_shift),
            "boundary_max_error": float(self.boundary_max_error),
            "jump_coeff": None if self.jump_coeff is None else float(self.jump_coeff),
            "total_poles": int(self.total_poles),
            "sample_count": int(self.n_samples),
            "polygons": [_pairs(p.vertices) for p in self.polygons],
            "all_poles": _pairs(self.all_poles),
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComplexPotential":
        try:
            region = d["region"]
            if region not in (INTERIOR, EXTERIOR):
                raise ValueError(f"unknown region {region!r}")
            jump = d.get("jump_coeff")
            return cls(
                smooth=ArnoldiBasisFit.from_dict(d["smooth"]),
                kept_poles=_unpairs(d["kept_poles"]),
                pole_coeffs=_unpairs(d["pole_coeffs"]),
                b0=complex(*d["b0"]),
                im_shift=float(d["im_shift"]),
                region=region,
                boundary_max_error=float(d["boundary_max_error"]),
                polygons=tuple(PolygonRegion(_unpairs(p)) for p in d.get("polygons", [])),
                total_poles=int(d.get("total_poles", 0)),
                jump_coeff=None if jump is None else float(jump),
                n_samples=int(d.get("sample_count", 0)),
                config=dict(d.get("config", {})),
                all_poles=_unpairs(d.get("all_poles", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad solution record: {exc}") from exc


def _pairs(a):
    return [[float(v.real), float(v.imag)] for v in np.asarray(a, dtype=np.complex128)]


def _unpairs(rows):
    arr = np.asarray(rows, dtype=np.float64).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


def default_smooth_degree(n_samples: int) -> int:
    """10 + ceil(ln n)."""
    if n_samples < 3:
        raise InvalidInput("need at least 3 samples")
    return 10 + math.ceil(math.log(n_samples))


def extract_singular(s: BoundarySamples, smooth: ArnoldiBasisFit) -> np.ndarray:
    """Boundary data minus the real part of the smooth fit."""
    return s.require_values() - np.real(smooth(s.points))


def filter_poles(poles, region: str, polys: Sequence[PolygonRegion],
                 tol: float = DEFAULT_POLYGON_TOL) -> np.ndarray:
    """Keep the poles that do not spoil analyticity in the solution region.

    Interior solves keep poles outside ``polys[0]`` and, if a second
    (inner) polygon is given, poles inside it. Exterior solves keep poles
    inside ``polys[0]``. Poles on a boundary are always dropped.
    """
    poles = np.asarray(poles, dtype=np.complex128).ravel()
    if not polys:
        raise InvalidInput("need at least one polygon")
    if len(polys) > 2:
        raise InvalidInput("at most an outer and an inner polygon are supported")
    if poles.shape[0] == 0:
        return poles
    outer = polys[0].classify(poles, tol)
    if region == INTERIOR:
        keep = outer == RegionClass.EXTERIOR
        if len(polys) == 2:
            keep |= polys[1].classify(poles, tol) == RegionClass.INTERIOR
    elif region == EXTERIOR:
        if len(polys) != 1:
            raise InvalidInput("exterior solves take a single polygon")
        keep = outer == RegionClass.INTERIOR
    else:
        raise InvalidInput(f"unknown region {region!r}")
    return poles[keep]


def fit_singular(s: BoundarySamples, residual, kept_poles, jump_mask=None):
    """Second least-squares stage for the pole coefficients.

    Solves ``[Re B, -Im B, 1, mask] x ~ residual`` in split-real form,
    where ``B[j, k] = 1/(z_j - p_k)``. The constant and the optional jump
    indicator are real columns, so their imaginary counterparts (identically
    zero) are left out and fixed at 0.

    Returns ``(pole_coeffs, b0, jump_coeff)``; ``jump_coeff`` is None
    without a ``jump_mask``.
    """
    z = s.points
    r = np.asarray(residual, dtype=np.float64).ravel()
    if r.shape[0] != z.shape[0]:
        raise InvalidInput(f"{r.shape[0]} residual values for {z.shape[0]} samples")
    p = np.asarray(kept_poles, dtype=np.complex128).ravel()
    k = p.shape[0]
    B = 1.0 / (z[:, None] - p[None, :])
    cols = [B.real, -B.imag, np.ones((z.shape[0], 1))]
    if jump_mask is not None:
        mask = np.asarray(jump_mask, dtype=bool).ravel()
        if mask.shape != z.shape:
            raise InvalidInput("jump mask length does not match the samples")
        cols.append(mask[:, None].astype(np.float64))
    V = np.hstack(cols)
    x, resid = lstsq(V, r)
    if k == 0 and np.max(np.abs(r - V @ x)) > 1e-8 * max(1.0, np.max(np.abs(r))):
        log.warning("no poles kept; singular part reduces to a constant (residual %.3g)", resid)
    coeffs = x[:k] + 1j * x[k:2 * k]
    b0 = complex(x[2 * k])
    jump = float(x[2 * k + 1]) if jump_mask is not None else None
    return coeffs, b0, jump


@dataclass
class _Stage:
    """Intermediate results of one solve, kept for diagnostics."""
    smooth: ArnoldiBasisFit
    residual: np.ndarray
    poles: np.ndarray
    kept: np.ndarray
    approximant: object = None


def _solve(s: BoundarySamples, polys: List[PolygonRegion], center: complex, region: str,
           cfg: SolverConfig, jump_mask=None, normalize=True):
    u = s.require_values()
    z = s.points
    degree = cfg.smooth_degree if cfg.smooth_degree is not None else default_smooth_degree(len(s))
    kind = FORWARD if region == INTERIOR else RECIPROCAL
    smooth = arnoldi_fit(z, u, degree, center, kind)

    residual = extract_singular(s, smooth)
    r = aaa(residual, z, mmax=cfg.effective_mmax, tol=cfg.aaa_tol, lawson=cfg.lawson)
    if cfg.cleanup:
        r = cleanup(r, residual, z, cfg.cleanup_tol)
    poles = poles_residues_zeros(r).poles if r.m >= 2 else np.empty(0, complex)
    kept = filter_poles(poles, region, polys, cfg.polygon_tol)
    # a sample can sit a few ulps off its edge, so a pole landing exactly on
    # it passes the boundary test; its column would be infinite
    hit = np.isin(kept, z)
    if np.any(hit):
        log.info("dropping %d poles that coincide with samples", int(np.count_nonzero(hit)))
        kept = kept[~hit]
    coeffs, b0, jump = fit_singular(s, residual, kept, jump_mask)

    im_shift = 0.0
    if normalize:
        anchor = center if region == INTERIOR else complex(np.inf, 0.0)
        part = ComplexPotential(smooth, kept, coeffs, b0, 0.0, region, 0.0)
        im_shift = float(np.imag(part(anchor)))
        # im_shift is rounded at the scale of the raw pole sum; the leftover
        # goes into the constant basis column, whose coefficient is O(1)
        left = float(np.imag(replace(part, im_shift=im_shift)(anchor)))
        if left:
            c = smooth.coeffs.copy()
            c[0] -= 1j * left
            smooth = replace(smooth, coeffs=c)

    echo = asdict(cfg)
    echo["mmax"] = cfg.effective_mmax
    echo["smooth_degree"] = degree
    pot = ComplexPotential(smooth, kept, coeffs, b0, im_shift, region, 0.0, tuple(polys),
                           total_poles=int(poles.shape[0]), jump_coeff=jump,
                           n_samples=len(s), config=echo, all_poles=poles)
    # measured on the assembled potential so it matches what callers evaluate
    re_w = pot(z).real
    if jump is not None:
        re_w = re_w + jump * np.asarray(jump_mask, dtype=np.float64)
    pot = replace(pot, boundary_max_error=float(np.max(np.abs(u - re_w))))
    return pot, _Stage(smooth, residual, poles, kept, r)


def _check_center(center, poly, cfg, what="center"):
    if poly.classify([center], cfg.polygon_tol)[0] != RegionClass.INTERIOR:
        raise InvalidInput(f"{what} {center} is not interior to the polygon")


def _prepare(s, poly, cfg):
    s.require_values()
    if cfg.cluster:
        per_side, min_exp = cfg.cluster
        s = cluster_corners(s, poly, int(per_side), float(min_exp))
    return s


def solve_interior(s: BoundarySamples, poly: PolygonRegion, center,
                   cfg: SolverConfig = SolverConfig()) -> ComplexPotential:
    """Harmonic function inside ``poly`` matching the boundary values.

    ``Im w`` is normalized to vanish at ``center``.
    """
    center = complex(center)
    _check_center(center, poly, cfg)
    return _solve(_prepare(s, poly, cfg), [poly], center, INTERIOR, cfg)[0]


def solve_exterior(s: BoundarySamples, poly: PolygonRegion, center,
                   cfg: SolverConfig = SolverConfig()) -> ComplexPotential:
    """Harmonic function outside ``poly``, bounded at infinity.

    ``center`` must be inside ``poly``; it is the expansion point of the
    reciprocal power sum. ``Im w`` is normalized to vanish at infinity.
    """
    center = complex(center)
    _check_center(center, poly, cfg)
    return _solve(_prepare(s, poly, cfg), [poly], center, EXTERIOR, cfg)[0]


def evaluate_potential(w: ComplexPotential, p):
    """``w(p)``; raises InvalidInput if ``p`` hits a kept pole."""
    val = w(p)
    if np.any(np.isnan(val)):
        raise InvalidInput("evaluation point coincides with a pole of the potential")
    return val


@dataclass(frozen=True, eq=False)
class FieldTable:
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray  # complex, NaN where masked
    mask: np.ndarray    # True = outside the solution region
    nx: int
    ny: int


def evaluate_grid(w: ComplexPotential, window, nx: int, ny: int,
                  polys: Optional[Sequence[PolygonRegion]] = None) -> FieldTable:
    """Evaluate ``w`` on an ``nx`` x ``ny`` grid over ``(xmin, xmax, ymin, ymax)``.

    Nodes outside the solution region (or on its boundary) are masked. Rows
    run with x varying fastest.
    """
    if nx < 2 or ny < 2:
        raise InvalidInput("grid needs nx, ny >= 2")
    xmin, xmax, ymin, ymax = map(float, window)
    X, Y = np.meshgrid(np.linspace(xmin, xmax, nx), np.linspace(ymin, ymax, ny))
    x, y = X.ravel(), Y.ravel()
    z = x + 1j * y
    if polys is not None:
        w = replace(w, polygons=tuple(polys))
    inside = w.in_region(z)
    vals = np.full(z.shape, complex(np.nan, np.nan))
    if np.any(inside):
        vals[inside] = w(z[inside])
    return FieldTable(x, y, vals, ~inside, nx, ny)

"""Command-line front end: ``harmonic-aaa {demo,solve,map,eval}``.

Exit status is 0 on success, 1 for data or numerical errors and 2 for usage
errors.
"""
import argparse
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import conformal, geometry, laplace
from .exceptions import InvalidInput, NumericalFailure
from .geometry import BoundarySamples, PolygonRegion
from .svg import field_svg, map_svg

DEMOS = ("l-shape", "blade", "l-exterior", "map-l", "map-l-exterior", "annulus")
MAP_KINDS = (conformal.DISK_INTERIOR, conformal.DISK_EXTERIOR, conformal.ANNULUS)

# the interior test point used by the L-shape demos
L_TEST_POINT = 0.99 + 0.99j

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<im>[+-](?:{_NUM})?)i)?$")
_IMAG_RE = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
# flags whose values may start with "-"
_VALUE_FLAGS = ("--center", "--grid")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` / ``a-bi`` / ``a`` / ``bi`` (spaces allowed, ``i`` required)."""
    t = text.replace(" ", "")
    m = _COMPLEX_RE.match(t)
    if m:
        re_part = float(m.group("re"))
        im = m.group("im")
        return complex(re_part, 0.0 if im is None else _imag(im))
    m = _IMAG_RE.match(t)
    if m:
        return complex(0.0, _imag(m.group("im")))
    raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")


def _imag(s):
    if s in ("", "+"):
        return 1.0
    if s == "-":
        return -1.0
    return float(s)


def parse_grid(text: str):
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("grid is xmin,xmax,ymin,ymax,nx,ny")
    try:
        xmin, xmax, ymin, ymax = (float(p) for p in parts[:4])
        nx, ny = int(parts[4]), int(parts[5])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid spec {text!r}") from None
    if not (xmin < xmax and ymin < ymax and nx >= 2 and ny >= 2):
        raise argparse.ArgumentTypeError(f"bad grid spec {text!r}")
    return (xmin, xmax, ymin, ymax), nx, ny


@dataclass
class RunReport:
    command: str
    samples: int = 0
    smooth_degree: int = 0
    total_poles: int = 0
    kept_poles: int = 0
    boundary_max_error: float = 0.0
    wall_time: float = 0.0
    outputs: List[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_potential(cls, command, pot: laplace.ComplexPotential):
        return cls(command, pot.n_samples, int(pot.smooth.degree), pot.total_poles,
                   int(pot.kept_poles.shape[0]), pot.boundary_max_error)

    def format(self) -> str:
        lines = [f"command: {self.command}",
                 f"samples: {self.samples}",
                 f"smooth degree N: {self.smooth_degree}",
                 f"poles: {self.total_poles} total, {self.kept_poles} kept",
                 f"boundary max error: {self.boundary_max_error:.3e}"]
        for k, v in self.extra.items():
            lines.append(f"{k}: {_fmt(v)}")
        lines.append(f"wall time: {self.wall_time:.2f} s")
        lines.extend(f"wrote: {p}" for p in self.outputs)
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}i"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


# ---------------------------------------------------------------- writers

def _g(v: float) -> str:
    return f"{v:.17g}"


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, allow_nan=False)
        fh.write("\n")


def write_poles_csv(path, pot: laplace.ComplexPotential):
    kept = set(pot.kept_poles.tolist())
    poles = pot.all_poles if pot.all_poles.size else pot.kept_poles
    with open(path, "w") as fh:
        fh.write("x,y,kept\n")
        for p in poles:
            fh.write(f"{_g(p.real)},{_g(p.imag)},{int(complex(p) in kept)}\n")


def write_field_csv(path, x, y, values, mask):
    """``mask`` entries are 0 (valid), 1 (outside the region) or ``"error"``."""
    with open(path, "w") as fh:
        fh.write("x,y,re_w,im_w,mask\n")
        for xi, yi, v, m in zip(x, y, values, mask):
            fh.write(f"{_g(xi)},{_g(yi)},{_g(v.real)},{_g(v.imag)},{m}\n")


def write_gridlines_csv(path, lines):
    with open(path, "w") as fh:
        fh.write("polyline_id,x,y\n")
        for pid, pts in lines:
            for p in pts:
                fh.write(f"{pid},{_g(p.real)},{_g(p.imag)}\n")


def _default_window(pot: laplace.ComplexPotential):
    verts = np.concatenate([p.vertices for p in pot.polygons])
    xmin, xmax = verts.real.min(), verts.real.max()
    ymin, ymax = verts.imag.min(), verts.imag.max()
    pad = (0.5 if pot.region == laplace.EXTERIOR else 0.02) * max(xmax - xmin, ymax - ymin)
    return (xmin - pad, xmax + pad, ymin - pad, ymax + pad)


def _emit_solution(pot, report, out, grid, svg):
    os.makedirs(out, exist_ok=True)
    sol = os.path.join(out, "solution.json")
    write_json(sol, pot.to_dict())
    poles = os.path.join(out, "poles.csv")
    write_poles_csv(poles, pot)
    report.outputs += [sol, poles]
    if grid is not None or svg:
        window, nx, ny = grid if grid is not None else (_default_window(pot), 81, 81)
        table = laplace.evaluate_grid(pot, window, nx, ny)
        if grid is not None:
            path = os.path.join(out, "field.csv")
            write_field_csv(path, table.x, table.y, table.values, table.mask.astype(int))
            report.outputs.append(path)
        if svg:
            with open(svg, "w") as fh:
                fh.write(field_svg(pot, table))
            report.outputs.append(svg)


def _emit_map(cmap, report, out, svg):
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "map.json")
    write_json(path, cmap.to_dict())
    poles = os.path.join(out, "poles.csv")
    write_poles_csv(poles, cmap.potential)
    lines = conformal.gridline_images(cmap)
    grid = os.path.join(out, "gridlines.csv")
    write_gridlines_csv(grid, lines)
    report.outputs += [path, poles, grid]
    if svg:
        with open(svg, "w") as fh:
            fh.write(map_svg(cmap, lines))
        report.outputs.append(svg)


def _config(args) -> laplace.SolverConfig:
    cluster = None
    if getattr(args, "cluster_corners", None):
        cluster = (args.cluster_corners, -6.0)
    return laplace.SolverConfig(smooth_degree=args.n_smooth, mmax=args.mmax, aaa_tol=args.tol,
                                lawson=args.lawson, cluster=cluster)


# ---------------------------------------------------------------- commands

def _l_shape(args):
    s, poly = geometry.l_shape_boundary(0.01)
    return s.with_values(lambda z: z.real ** 2), poly


def cmd_demo(args) -> RunReport:
    cfg = _config(args)
    name = args.name
    out = args.out
    if name in ("l-shape", "l-exterior", "blade"):
        if name == "blade":
            s, poly = geometry.blade_boundary(500)
            s = s.with_values(lambda z: z.real ** 2)
            center = 0j
        else:
            s, poly = _l_shape(args)
            center = 0.5 + 0.5j
        solver = laplace.solve_exterior if name == "l-exterior" else laplace.solve_interior
        pot = solver(s, poly, center, cfg)
        report = RunReport.from_potential(f"demo {name}", pot)
        if name == "l-shape":
            report.extra["Re w(0.99+0.99i)"] = float(pot(L_TEST_POINT).real)
        if name == "l-exterior":
            report.extra["Im w(inf)"] = float(pot(complex(math.inf, 0.0)).imag)
        os.makedirs(out, exist_ok=True)
        bpath = os.path.join(out, "boundary.csv")
        vpath = os.path.join(out, "vertices.csv")
        geometry.write_boundary_csv(bpath, s)
        geometry.write_vertices_csv(vpath, poly)
        report.outputs += [bpath, vpath]
        _emit_solution(pot, report, out, args.grid, args.svg)
        return report

    if name == "annulus":
        outer, inner = geometry.double_boundary(0.01)
        cmap = conformal.map_doubly_connected(outer, inner, -0.25 - 0.25j, cfg)
    else:
        s, poly = geometry.l_shape_boundary(0.01)
        fn = conformal.map_interior if name == "map-l" else conformal.map_exterior
        cmap = fn(s, poly, 0.5 + 0.5j, cfg)
    report = RunReport.from_potential(f"demo {name}", cmap.potential)
    if cmap.modulus is not None:
        report.extra["modulus"] = cmap.modulus
    _emit_map(cmap, report, out, args.svg)
    return report


def _polygon(samples: BoundarySamples, vertices: Optional[str]) -> PolygonRegion:
    if vertices:
        return geometry.read_vertices_csv(vertices)
    return PolygonRegion(samples.points)


def cmd_solve(args) -> RunReport:
    if args.cluster_corners and not args.vertices:
        raise UsageError("--cluster-corners needs --vertices")
    s = geometry.read_boundary_csv(args.boundary)
    poly = _polygon(s, args.vertices)
    cfg = _config(args)
    solver = laplace.solve_interior if args.region == laplace.INTERIOR else laplace.solve_exterior
    pot = solver(s, poly, args.center, cfg)
    report = RunReport.from_potential(f"solve {args.boundary} {args.region}", pot)
    _emit_solution(pot, report, args.out, args.grid, args.svg)
    return report


def cmd_map(args) -> RunReport:
    if args.kind == conformal.ANNULUS:
        if args.inner is None:
            raise UsageError("annulus maps need an outer and an inner boundary file")
    elif args.inner is not None:
        raise UsageError(f"{args.kind} maps take a single boundary file")
    if args.cluster_corners and not args.vertices:
        raise UsageError("--cluster-corners needs --vertices")
    cfg = _config(args)
    s = geometry.read_boundary_csv(args.boundary, require_values=False)
    poly = _polygon(s, args.vertices)
    if args.kind == conformal.ANNULUS:
        s_in = geometry.read_boundary_csv(args.inner, require_values=False)
        p_in = _polygon(s_in, args.inner_vertices)
        cmap = conformal.map_doubly_connected((s, poly), (s_in, p_in), args.center, cfg)
    elif args.kind == conformal.DISK_INTERIOR:
        cmap = conformal.map_interior(s, poly, args.center, cfg)
    else:
        cmap = conformal.map_exterior(s, poly, args.center, cfg)
    report = RunReport.from_potential(f"map {args.kind} {args.boundary}", cmap.potential)
    if cmap.modulus is not None:
        report.extra["modulus"] = cmap.modulus
    _emit_map(cmap, report, args.out, args.svg)
    return report


def _load_solution(path) -> laplace.ComplexPotential:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from None
    if isinstance(d, dict) and "potential" in d and "region" not in d:
        d = d["potential"]  # a map record
    if not isinstance(d, dict):
        raise InvalidInput(f"{path}: expected a JSON object")
    return laplace.ComplexPotential.from_dict(d)


def cmd_eval(args) -> RunReport:
    if (args.points is None) == (args.grid is None):
        raise UsageError("give exactly one of --points or --grid")
    pot = _load_solution(args.solution)
    if args.grid is not None:
        window, nx, ny = args.grid
        table = laplace.evaluate_grid(pot, window, nx, ny)
        x, y, vals = table.x, table.y, table.values
        mask = table.mask.astype(int).astype(object)
    else:
        z = geometry.read_points_csv(args.points)
        x, y = z.real, z.imag
        inside = pot.in_region(z)
        vals = np.full(z.shape, complex(np.nan, np.nan))
        if np.any(inside):
            vals[inside] = pot(z[inside])
        mask = np.where(inside, 0, 1).astype(object)
    hit = ~mask.astype(bool) & np.isnan(vals)
    mask[hit] = "error"
    out_dir = os.path.dirname(args.out)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    write_field_csv(args.out, x, y, vals, mask)
    report = RunReport.from_potential(f"eval {args.solution}", pot)
    report.extra["points"] = int(x.shape[0])
    report.extra["masked"] = int(np.count_nonzero(mask != 0))
    report.outputs.append(args.out)
    return report


# ---------------------------------------------------------------- parser

def _solver_flags(p, cluster=True):
    p.add_argument("--n-smooth", type=int, default=None, metavar="N",
                   help="degree of the smooth polynomial part (default 10+ceil(ln n))")
    p.add_argument("--mmax", type=int, default=None,
                   help="max AAA degree (default 1000, or 200 with --cluster-corners)")
    p.add_argument("--tol", type=float, default=1e-13, help="AAA relative tolerance")
    p.add_argument("--lawson", type=int, choices=(0, 1), default=0)
    if cluster:
        p.add_argument("--cluster-corners", type=int, default=None, metavar="K",
                       help="add K log-spaced samples on each side of every corner")
    p.add_argument("--svg", default=None, metavar="PATH")
    p.add_argument("--out", default=".", metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="harmonic-aaa",
                                 description="Laplace solves and conformal maps with AAA poles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", help="run a built-in example")
    p.add_argument("name", choices=DEMOS)
    p.add_argument("--grid", type=parse_grid, default=None,
                   metavar="xmin,xmax,ymin,ymax,nx,ny")
    _solver_flags(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("solve", help="solve a Dirichlet problem from a boundary CSV")
    p.add_argument("boundary", help="CSV of x,y,u records")
    p.add_argument("--region", choices=(laplace.INTERIOR, laplace.EXTERIOR), required=True)
    p.add_argument("--center", type=parse_complex, required=True)
    p.add_argument("--vertices", default=None, help="CSV of polygon vertices x,y")
    p.add_argument("--grid", type=parse_grid, default=None,
                   metavar="xmin,xmax,ymin,ymax,nx,ny")
    _solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("map", help="conformal map onto the disk or an annulus")
    p.add_argument("kind", choices=MAP_KINDS)
    p.add_argument("boundary", help="CSV of x,y (outer boundary for annulus)")
    p.add_argument("inner", nargs="?", default=None, help="inner boundary CSV (annulus)")
    p.add_argument("--center", type=parse_complex, required=True)
    p.add_argument("--vertices", default=None)
    p.add_argument("--inner-vertices", default=None)
    _solver_flags(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("eval", help="evaluate a saved solution")
    p.add_argument("solution", help="solution or map JSON")
    p.add_argument("--points", default=None, help="CSV of x,y")
    p.add_argument("--grid", type=parse_grid, default=None,
                   metavar="xmin,xmax,ymin,ymax,nx,ny")
    p.add_argument("--out", required=True, help="field CSV path")
    p.set_defaults(func=cmd_eval)
    return ap


def _attach_values(argv):
    """Rewrite ``--center -1-2i`` as ``--center=-1-2i`` so argparse does not
    take the value for an option."""
    out = []
    it = iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _attach_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"harmonic-aaa: error: {exc}", file=sys.stderr)
        return 2
    except (InvalidInput, NumericalFailure, OSError) as exc:
        print(f"harmonic-aaa: {exc}", file=sys.stderr)
        return 1
    report.wall_time = time.perf_counter() - t0
    print(report.format())
    return 0


if __name__ == "__main__":
    sys.exit(main())

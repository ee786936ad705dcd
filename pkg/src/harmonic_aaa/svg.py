"""Static SVG renderings of solutions and maps.

Output is a pure function of the data (fixed number formatting, no ids or
timestamps), so identical inputs give byte-identical files.
"""
import numpy as np

from .laplace import EXTERIOR, ComplexPotential, FieldTable

_BANDS = ["#313695", "#4575b4", "#74add1", "#abd9e9", "#e0f3f8", "#ffffbf",
          "#fee090", "#fdae61", "#f46d43", "#d73027", "#a50026"]


class _Panel:
    def __init__(self, window, x0, width, height):
        self.xmin, self.xmax, self.ymin, self.ymax = map(float, window)
        self.x0 = x0
        sx = width / (self.xmax - self.xmin)
        sy = height / (self.ymax - self.ymin)
        self.scale = min(sx, sy)
        self.height = height

    def xy(self, z):
        z = np.asarray(z, dtype=np.complex128)
        x = self.x0 + (z.real - self.xmin) * self.scale
        y = self.height - (z.imag - self.ymin) * self.scale
        return x, y

    def inside(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return ((z.real >= self.xmin) & (z.real <= self.xmax)
                & (z.imag >= self.ymin) & (z.imag <= self.ymax))

    def polyline(self, z, stroke, width=1.0, closed=False):
        z = np.asarray(z, dtype=np.complex128)
        z = z[np.isfinite(z)]
        if z.shape[0] < 2:
            return ""
        x, y = self.xy(z)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(x, y))
        tag = "polygon" if closed else "polyline"
        return (f'<{tag} points="{pts}" fill="none" stroke="{stroke}" '
                f'stroke-width="{width:g}"/>\n')

    def crosses(self, z, stroke, r=3.0):
        out = []
        z = np.asarray(z, dtype=np.complex128)
        for a, b in zip(*self.xy(z[self.inside(z)])):
            out.append(f'<path d="M{a - r:.2f},{b - r:.2f}L{a + r:.2f},{b + r:.2f}'
                       f'M{a - r:.2f},{b + r:.2f}L{a + r:.2f},{b - r:.2f}" '
                       f'stroke="{stroke}" stroke-width="1"/>\n')
        return "".join(out)

    def dots(self, z, fill, r=1.5):
        z = np.asarray(z, dtype=np.complex128)
        return "".join(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="{r:g}" fill="{fill}"/>\n'
                       for a, b in zip(*self.xy(z[self.inside(z)])))


def _doc(width, height, body):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n'
            f'<rect width="{width}" height="{height}" fill="white"/>\n{body}</svg>\n')


def _pole_marks(panel, pot: ComplexPotential):
    kept = pot.kept_poles
    dropped = pot.all_poles[~np.isin(pot.all_poles, kept)] if pot.all_poles.size else pot.all_poles
    return panel.dots(dropped, "#777777") + panel.crosses(kept, "#000000")


def _boundaries(panel, pot):
    return "".join(panel.polyline(p.vertices, "#000000", 1.5, closed=True) for p in pot.polygons)


def field_svg(pot: ComplexPotential, table: FieldTable, size: int = 600) -> str:
    """Filled bands of Re w on the grid, with boundary and pole markers."""
    x = table.x.reshape(table.ny, table.nx)[0]
    y = table.y.reshape(table.ny, table.nx)[:, 0]
    window = (x[0], x[-1], y[0], y[-1])
    panel = _Panel(window, 0.0, size, size)
    body = []
    re = table.values.real.reshape(table.ny, table.nx)
    ok = ~table.mask.reshape(table.ny, table.nx)
    if np.any(ok):
        lo, hi = float(np.min(re[ok])), float(np.max(re[ok]))
        span = hi - lo if hi > lo else 1.0
        level = (np.where(ok, re, lo) - lo) / span * len(_BANDS)
        band = np.clip(level.astype(int), 0, len(_BANDS) - 1)
        dx = (x[1] - x[0]) * panel.scale
        dy = (y[1] - y[0]) * panel.scale
        for j in range(table.ny):
            for i in range(table.nx):
                if not ok[j, i]:
                    continue
                cx, cy = panel.xy(x[i] + 1j * y[j])
                body.append(f'<rect x="{cx - dx / 2:.2f}" y="{cy - dy / 2:.2f}" '
                            f'width="{dx:.2f}" height="{dy:.2f}" fill="{_BANDS[band[j, i]]}"/>\n')
    body.append(_boundaries(panel, pot))
    body.append(_pole_marks(panel, pot))
    return _doc(size, size, "".join(body))


def map_svg(cmap, lines, size: int = 500) -> str:
    """Two panels: the physical domain (left) and the disk/annulus (right)."""
    pot = cmap.potential
    verts = np.concatenate([p.vertices for p in pot.polygons])
    xmin, xmax = verts.real.min(), verts.real.max()
    ymin, ymax = verts.imag.min(), verts.imag.max()
    pad = 0.1 * max(xmax - xmin, ymax - ymin)
    if pot.region == EXTERIOR:
        pad *= 5
    left = _Panel((xmin - pad, xmax + pad, ymin - pad, ymax + pad), 0.0, size, size)
    right = _Panel((-1.1, 1.1, -1.1, 1.1), size + 20.0, size, size)
    body = []
    theta = np.linspace(0.0, 2 * np.pi, 400)
    body.append(right.polyline(np.exp(1j * theta), "#000000", 1.5))
    if cmap.modulus is not None:
        body.append(right.polyline(cmap.modulus * np.exp(1j * theta), "#000000", 1.5))
    for pid, pts in lines:
        if pid.startswith(("circle", "ray")):
            body.append(left.polyline(pts, "#2166ac", 0.8))
        else:
            body.append(right.polyline(pts, "#b2182b", 0.8))
    body.append(_boundaries(left, pot))
    body.append(_pole_marks(left, pot))
    return _doc(2 * size + 20, size, "".join(body))

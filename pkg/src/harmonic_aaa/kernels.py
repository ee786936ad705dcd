"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

The unsuffixed wrappers at the bottom of this module dispatch to whichever
flavour is active (see :mod:`harmonic_aaa._jit`). Both flavours are always importable as
``<name>_numpy`` / ``<name>_numba`` so tests and the benchmark can compare
them directly.
"""
import numpy as np

from ._jit import JIT_ENABLED, njit

EXTERIOR = 0
INTERIOR = 1
ON_BOUNDARY = 2


# --------------------------------------------------------------------------
# point-in-polygon (winding number with on-edge tolerance)
# --------------------------------------------------------------------------

def classify_points_numpy(px, py, vx, vy, tol):
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    ax = np.asarray(vx, dtype=np.float64)
    ay = np.asarray(vy, dtype=np.float64)
    bx = np.roll(ax, -1)
    by = np.roll(ay, -1)
    ex = bx - ax
    ey = by - ay
    len2 = ex * ex + ey * ey

    out = np.empty(px.shape[0], dtype=np.int8)
    # chunk rows so the (points x edges) temporaries stay small
    chunk = max(1, 2_000_000 // max(1, ax.shape[0]))
    for lo in range(0, px.shape[0], chunk):
        qx = px[lo:lo + chunk, None]
        qy = py[lo:lo + chunk, None]
        dx = qx - ax
        dy = qy - ay
        cross = ex * dy - dx * ey
        t = np.clip((dx * ex + dy * ey) / len2, 0.0, 1.0)
        dist = np.hypot(dx - t * ex, dy - t * ey)
        in_box = ((qx >= np.minimum(ax, bx)) & (qx <= np.maximum(ax, bx))
                  & (qy >= np.minimum(ay, by)) & (qy <= np.maximum(ay, by)))
        on_edge = ((dist <= tol) | ((cross == 0.0) & in_box)).any(axis=1)
        up = (ay <= qy) & (by > qy) & (cross > 0.0)
        down = (ay > qy) & (by <= qy) & (cross < 0.0)
        wn = up.sum(axis=1) - down.sum(axis=1)
        res = np.where(wn != 0, INTERIOR, EXTERIOR).astype(np.int8)
        res[on_edge] = ON_BOUNDARY
        out[lo:lo + chunk] = res
    return out


@njit(cache=True)
def classify_points_numba(px, py, vx, vy, tol):
    n = px.shape[0]
    nv = vx.shape[0]
    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        qx = px[i]
        qy = py[i]
        wn = 0
        on_edge = False
        for k in range(nv):
            ax = vx[k]
            ay = vy[k]
            bx = vx[(k + 1) % nv]
            by = vy[(k + 1) % nv]
            ex = bx - ax
            ey = by - ay
            dx = qx - ax
            dy = qy - ay
            cross = ex * dy - dx * ey
            t = (dx * ex + dy * ey) / (ex * ex + ey * ey)
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            if np.hypot(dx - t * ex, dy - t * ey) <= tol:
                on_edge = True
                break
            if cross == 0.0 and min(ax, bx) <= qx <= max(ax, bx) \
                    and min(ay, by) <= qy <= max(ay, by):
                on_edge = True
                break
            if ay <= qy:
                if by > qy and cross > 0.0:
                    wn += 1
            elif by <= qy and cross < 0.0:
                wn -= 1
        if on_edge:
            out[i] = ON_BOUNDARY
        elif wn != 0:
            out[i] = INTERIOR
        else:
            out[i] = EXTERIOR
    return out


# --------------------------------------------------------------------------
# barycentric evaluation  r(x) = sum(w f / (x - t)) / sum(w / (x - t))
# --------------------------------------------------------------------------

def barycentric_eval_numpy(x, t, f, w):
    x = np.asarray(x, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        C = 1.0 / (x[:, None] - t[None, :])
        r = (C @ (w * f)) / (C @ w)
    # removable singularities at the support points
    hit_row, hit_col = np.nonzero(x[:, None] == t[None, :])
    r[hit_row] = f[hit_col]
    return r


@njit(cache=True)
def barycentric_eval_numba(x, t, f, w):
    n = x.shape[0]
    m = t.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        num = 0j
        den = 0j
        hit = -1
        for k in range(m):
            d = x[i] - t[k]
            if d == 0:
                hit = k
                break
            c = w[k] / d
            num += c * f[k]
            den += c
        if hit >= 0:
            out[i] = f[hit]
        else:
            out[i] = num / den
    return out


# --------------------------------------------------------------------------
# partial-fraction sum  c + sum_k b_k / (x - p_k)
#
# Fitted pole coefficients can be large and cancel each other (and the
# constant) down to an O(1) result, so plain summation leaves noise of size
# eps * sum|b_k / (x - p_k)| in the value. Each term is computed in
# double-double (error-free TwoSum / Dekker TwoProduct) and the terms are
# summed with a running compensation, so the result is accurate relative to
# its own size instead.
# --------------------------------------------------------------------------

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_term(xr, xi, pr, pi, br, bi):
    """``b / (x - p)`` as an unevaluated sum hi + lo, per real component."""
    dr, dr_lo = _two_sum(xr, -pr)
    di, di_lo = _two_sum(xi, -pi)
    den = dr * dr + di * di
    qr = (br * dr + bi * di) / den
    qi = (bi * dr - br * di) / den
    # residual b - q*d, with the products formed exactly
    a1, e1 = _two_prod(qr, dr)
    a2, e2 = _two_prod(qi, di)
    s, t1 = _two_sum(br, -a1)
    s, t2 = _two_sum(s, a2)
    rr = s + (t1 + t2 - e1 + e2 - (qr * dr_lo - qi * di_lo))
    a1, e1 = _two_prod(qr, di)
    a2, e2 = _two_prod(qi, dr)
    s, t1 = _two_sum(bi, -a1)
    s, t2 = _two_sum(s, -a2)
    ri = s + (t1 + t2 - e1 - e2 - (qr * di_lo + qi * dr_lo))
    return qr, qi, (rr * dr + ri * di) / den, (ri * dr - rr * di) / den


def pole_sum_numpy(x, poles, coeffs, const=0j):
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    sr = np.full(n, float(np.real(const)))
    si = np.full(n, float(np.imag(const)))
    cr = np.zeros(n)
    ci = np.zeros(n)
    hit = np.zeros(n, dtype=bool)
    xr, xi = x.real, x.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(poles.shape[0]):
            p = poles[k]
            b = coeffs[k]
            hit |= x == p
            hr, hi, lr, li = _dd_term(xr, xi, p.real, p.imag, b.real, b.imag)
            sr, t = _two_sum(sr, hr)
            cr += t + lr
            si, t = _two_sum(si, hi)
            ci += t + li
    out = (sr + cr) + 1j * (si + ci)
    out[hit] = complex(np.nan, np.nan)
    return out


_two_sum_nb = njit(cache=True, inline="always")(_two_sum)
_two_prod_nb = njit(cache=True, inline="always")(_two_prod)


@njit(cache=True)
def _dd_term_nb(xr, xi, pr, pi, br, bi):
    dr, dr_lo = _two_sum_nb(xr, -pr)
    di, di_lo = _two_sum_nb(xi, -pi)
    den = dr * dr + di * di
    qr = (br * dr + bi * di) / den
    qi = (bi * dr - br * di) / den
    a1, e1 = _two_prod_nb(qr, dr)
    a2, e2 = _two_prod_nb(qi, di)
    s, t1 = _two_sum_nb(br, -a1)
    s, t2 = _two_sum_nb(s, a2)
    rr = s + (t1 + t2 - e1 + e2 - (qr * dr_lo - qi * di_lo))
    a1, e1 = _two_prod_nb(qr, di)
    a2, e2 = _two_prod_nb(qi, dr)
    s, t1 = _two_sum_nb(bi, -a1)
    s, t2 = _two_sum_nb(s, -a2)
    ri = s + (t1 + t2 - e1 - e2 - (qr * di_lo + qi * dr_lo))
    return qr, qi, (rr * dr + ri * di) / den, (ri * dr - rr * di) / den


@njit(cache=True)
def pole_sum_numba(x, poles, coeffs, const=0j):
    n = x.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        xr = x[i].real
        xi = x[i].imag
        sr = const.real
        si = const.imag
        cr = 0.0
        ci = 0.0
        hit = False
        for k in range(poles.shape[0]):
            if x[i] == poles[k]:
                hit = True
                break
            hr, hi, lr, li = _dd_term_nb(xr, xi, poles[k].real, poles[k].imag,
                                         coeffs[k].real, coeffs[k].imag)
            sr, t = _two_sum_nb(sr, hr)
            cr += t + lr
            si, t = _two_sum_nb(si, hi)
            ci += t + li
        if hit:
            out[i] = complex(np.nan, np.nan)
        else:
            out[i] = complex(sr + cr, si + ci)
    return out


# --------------------------------------------------------------------------
# Arnoldi basis regeneration from a stored Hessenberg recurrence
# --------------------------------------------------------------------------

def arnoldi_basis_numpy(s, H):
    s = np.asarray(s, dtype=np.complex128)
    n = H.shape[1]
    W = np.empty((s.shape[0], n + 1), dtype=np.complex128)
    W[:, 0] = 1.0
    for k in range(n):
        v = s * W[:, k] - W[:, :k + 1] @ H[:k + 1, k]
        W[:, k + 1] = v / H[k + 1, k]
    return W


@njit(cache=True)
def arnoldi_basis_numba(s, H):
    M = s.shape[0]
    n = H.shape[1]
    W = np.empty((M, n + 1), dtype=np.complex128)
    for i in range(M):
        W[i, 0] = 1.0
        for k in range(n):
            v = s[i] * W[i, k]
            for j in range(k + 1):
                v -= H[j, k] * W[i, j]
            W[i, k + 1] = v / H[k + 1, k]
    return W


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _c128(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def classify_points(px, py, vx, vy, tol):
    """Winding-number classification; returns EXTERIOR/INTERIOR/ON_BOUNDARY codes."""
    impl = classify_points_numba if JIT_ENABLED else classify_points_numpy
    return impl(_f64(px), _f64(py), _f64(vx), _f64(vy), float(tol))


def barycentric_eval(x, t, f, w):
    impl = barycentric_eval_numba if JIT_ENABLED else barycentric_eval_numpy
    return impl(_c128(x), _c128(t), _c128(f), _c128(w))


def pole_sum(x, poles, coeffs, const=0j):
    """``const + sum b_k/(x - p_k)``, compensated; NaN where ``x`` hits a pole exactly."""
    impl = pole_sum_numba if JIT_ENABLED else pole_sum_numpy
    return impl(_c128(x), _c128(poles), _c128(coeffs), complex(const))


def arnoldi_basis(s, H):
    impl = arnoldi_basis_numba if JIT_ENABLED else arnoldi_basis_numpy
    return impl(_c128(s), _c128(H))

"""Compare the numba and pure-numpy kernel flavours.

Runs each hot kernel on synthetic inputs shaped like the L-shape solve
(800 boundary samples, a few hundred poles/support points, a 201x201 grid)
and prints best-of-N wall times plus the max disagreement between flavours.

    python benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import time

import numpy as np

from harmonic_aaa import kernels
from harmonic_aaa._jit import JIT_ENABLED


def _best(fn, args, repeat):
    fn(*args)  # warm-up (and JIT compile)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(grid_n, n_support, n_poles):
    rng = np.random.default_rng(7)
    g = np.linspace(-0.5, 2.5, grid_n)
    X, Y = np.meshgrid(g, g)
    pts = (X + 1j * Y).ravel()
    verts = np.array([0, 2, 2 + 1j, 1 + 1j, 1 + 2j, 2j])
    t = np.exp(2j * np.pi * np.arange(n_support) / n_support) * 1.5 + 1 + 1j
    f = rng.standard_normal(n_support) + 1j * rng.standard_normal(n_support)
    w = rng.standard_normal(n_support) + 1j * rng.standard_normal(n_support)
    poles = 3 * np.exp(2j * np.pi * rng.random(n_poles)) + 1 + 1j
    coeffs = rng.standard_normal(n_poles) + 1j * rng.standard_normal(n_poles)
    H = np.triu(rng.standard_normal((18, 17)) * 0.3, -1) + 0j
    for k in range(17):
        H[k + 1, k] = 1.0
    s = pts / 3
    return {
        "classify_points": (pts.real, pts.imag, verts.real, verts.imag, 1e-16),
        "barycentric_eval": (pts, t, f, w),
        "pole_sum": (pts, poles, coeffs),
        "arnoldi_basis": (s, H),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=201, help="points per grid side")
    ap.add_argument("--support", type=int, default=200)
    ap.add_argument("--poles", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"numba active for the library: {JIT_ENABLED}")
    print(f"grid={args.grid}x{args.grid} support={args.support} poles={args.poles}")
    print(f"{'kernel':<18}{'numpy s':>12}{'numba s':>12}{'speedup':>10}{'max diff':>12}")
    for name, inputs in _cases(args.grid, args.support, args.poles).items():
        f_np = getattr(kernels, name + "_numpy")
        f_nb = getattr(kernels, name + "_numba")
        t_np = _best(f_np, inputs, args.repeat)
        t_nb = _best(f_nb, inputs, args.repeat)
        a, b = f_np(*inputs), f_nb(*inputs)
        diff = float(np.nanmax(np.abs(np.asarray(a) - np.asarray(b))))
        print(f"{name:<18}{t_np:>12.4g}{t_nb:>12.4g}{t_np / t_nb:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()

"""AAA rational approximation in barycentric form.

    r(z) = sum_k w_k f_k / (z - t_k)  /  sum_k w_k / (z - t_k)

Support points ``t_k`` are picked greedily from the samples where the current
approximant is worst; the weights ``w_k`` are the minimal right singular
vector of the Loewner matrix on the remaining samples.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .exceptions import InvalidInput
from .linalg import generalized_eigenvalues, svd_min_right_vector

DEFAULT_TOL = 1e-13
DEFAULT_MMAX = 100
DEFAULT_CLEANUP_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class BarycentricApproximant:
    support_points: np.ndarray
    support_values: np.ndarray
    weights: np.ndarray
    max_error: float
    #: max deviation on the fitting set after each greedy step
    errors: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def m(self) -> int:
        return self.support_points.shape[0]

    def __call__(self, z):
        return evaluate(self, z)

    def to_dict(self) -> dict:
        return {
            "support_points": _pairs(self.support_points),
            "support_values": _pairs(self.support_values),
            "weights": _pairs(self.weights),
            "max_error": float(self.max_error),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BarycentricApproximant":
        try:
            return cls(_unpairs(d["support_points"]), _unpairs(d["support_values"]),
                       _unpairs(d["weights"]), float(d["max_error"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad approximant record: {exc}") from exc


@dataclass(frozen=True, eq=False)
class PoleData:
    poles: np.ndarray
    residues: np.ndarray
    zeros: np.ndarray


def _pairs(a):
    return [[float(v.real), float(v.imag)] for v in np.asarray(a, dtype=np.complex128)]


def _unpairs(rows):
    arr = np.asarray(rows, dtype=np.float64).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


def evaluate(r: BarycentricApproximant, z):
    """Evaluate ``r`` at ``z`` (scalar or array); exact at the support points."""
    z_arr = np.asarray(z, dtype=np.complex128)
    out = kernels.barycentric_eval(z_arr.ravel(), r.support_points,
                                   r.support_values, r.weights)
    if z_arr.ndim == 0:
        return complex(out[0])
    return out.reshape(z_arr.shape)


def _check_samples(values, points):
    F = np.asarray(values, dtype=np.complex128).ravel()
    Z = np.asarray(points, dtype=np.complex128).ravel()
    if Z.shape[0] < 2:
        raise InvalidInput("AAA needs at least 2 samples")
    if F.shape != Z.shape:
        raise InvalidInput(f"{F.shape[0]} values for {Z.shape[0]} points")
    if not (np.all(np.isfinite(F)) and np.all(np.isfinite(Z))):
        raise InvalidInput("non-finite samples")
    if np.unique(Z).shape[0] != Z.shape[0]:
        raise InvalidInput("sample points must be pairwise distinct")
    return F, Z


def aaa(values, points, mmax: int = DEFAULT_MMAX, tol: float = DEFAULT_TOL,
        lawson: int = 0,
        callback: Optional[Callable[[int, float], None]] = None) -> BarycentricApproximant:
    """Greedy AAA fit of ``values`` sampled at ``points``.

    Stops when the max deviation on the samples drops to
    ``tol * max|values|`` or after ``mmax`` support points. Support points
    whose weight comes out exactly zero are discarded at the end; they carry
    no information and would show up as spurious poles sitting on a sample.

    ``lawson=1`` runs a single Lawson reweighting pass with the support
    points frozen; ``lawson=0`` (the default) leaves the weights alone.
    ``callback(m, err)`` is invoked after every greedy step.
    """
    F, Z = _check_samples(values, points)
    if mmax < 1:
        raise InvalidInput("mmax must be >= 1")
    if not tol > 0:
        raise InvalidInput("tol must be positive")
    if lawson not in (0, 1):
        raise InvalidInput("lawson must be 0 or 1")

    M = Z.shape[0]
    steps = min(mmax, M - 1)
    reltol = tol * np.max(np.abs(F))
    C = np.empty((M, steps), dtype=np.complex128)
    J = np.ones(M, dtype=bool)
    idx = []
    R = np.full(M, F.mean())
    errors = []
    w = np.ones(1, dtype=np.complex128)

    for m in range(1, steps + 1):
        # first index wins ties
        jj = int(np.argmax(np.abs(F - R)))
        idx.append(jj)
        J[jj] = False
        with np.errstate(divide="ignore", invalid="ignore"):
            C[:, m - 1] = 1.0 / (Z - Z[jj])
        f = F[idx]
        Cj = C[J, :m]
        A = (F[J, None] - f[None, :]) * Cj
        _, w = svd_min_right_vector(A)
        R = F.copy()
        R[J] = (Cj @ (w * f)) / (Cj @ w)
        err = float(np.max(np.abs(F - R)))
        errors.append(err)
        if callback is not None:
            callback(m, err)
        if err <= reltol:
            break

    t = Z[idx]
    f = F[idx]
    if lawson:
        w = _lawson_step(F, Z, J, t, f, w)
    keep = w != 0
    if not np.any(keep):
        keep[:] = True
    t, f, w = t[keep], f[keep], w[keep]
    R = kernels.barycentric_eval(Z, t, f, w)
    max_error = float(np.max(np.abs(F - R)))
    return BarycentricApproximant(t, f, w, max_error, np.asarray(errors))


def _lawson_step(F, Z, J, t, f, w):
    """One iteratively-reweighted pass of the linearized least-squares problem."""
    C = 1.0 / (Z[J, None] - t[None, :])
    resid = F[J] - (C @ (w * f)) / (C @ w)
    scale = np.max(np.abs(resid))
    if scale == 0:
        return w
    wt = np.sqrt(np.abs(resid) / scale)
    A = wt[:, None] * (F[J, None] - f[None, :]) * C
    return svd_min_right_vector(A)[1]


def poles_residues_zeros(r: BarycentricApproximant) -> PoleData:
    """Poles, residues and zeros from the (m+1)-dimensional arrowhead pencils."""
    m = r.m
    if m < 2:
        raise InvalidInput("a constant approximant has no pole pencil")
    t, f, w = r.support_points, r.support_values, r.weights
    B = np.eye(m + 1)
    B[0, 0] = 0.0
    E = np.zeros((m + 1, m + 1), dtype=np.complex128)
    E[0, 1:] = w
    E[1:, 0] = 1.0
    E[1:, 1:] = np.diag(t)
    poles = generalized_eigenvalues(E, B)
    E[0, 1:] = w * f
    zeros = generalized_eigenvalues(E, B)
    residues = residues_at(r, poles)
    return PoleData(poles, residues, zeros)


def residues_at(r: BarycentricApproximant, poles) -> np.ndarray:
    """Residues of simple poles via numerator / derivative of denominator."""
    poles = np.asarray(poles, dtype=np.complex128)
    if poles.shape[0] == 0:
        return np.empty(0, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        C = 1.0 / (poles[:, None] - r.support_points[None, :])
        num = C @ (r.weights * r.support_values)
        dden = -(C ** 2) @ r.weights
        res = num / dden
    return np.where(np.isfinite(res), res, 0.0)


def cleanup(r: BarycentricApproximant, values, points,
            residue_tol: float = DEFAULT_CLEANUP_TOL) -> BarycentricApproximant:
    """Remove Froissart doublets.

    Every pole with ``|residue| < residue_tol * max|values|`` costs the
    support point nearest to it; the weights are then refitted once on the
    reduced support. Returns ``r`` itself when nothing qualifies.
    """
    if residue_tol <= 0 or r.m < 2:
        return r
    F, Z = _check_samples(values, points)
    pd = poles_residues_zeros(r)
    spurious = np.abs(pd.residues) < residue_tol * np.max(np.abs(F))
    if not np.any(spurious):
        return r
    t = list(r.support_points)
    f = list(r.support_values)
    for p in pd.poles[spurious]:
        if len(t) == 1:
            break
        k = int(np.argmin(np.abs(np.asarray(t) - p)))
        del t[k], f[k]
    t = np.asarray(t)
    f = np.asarray(f)
    rows = ~np.isin(Z, t)
    A = (F[rows, None] - f[None, :]) / (Z[rows, None] - t[None, :])
    _, w = svd_min_right_vector(A)
    R = kernels.barycentric_eval(Z, t, f, w)
    return BarycentricApproximant(t, f, w, float(np.max(np.abs(F - R))), r.errors)

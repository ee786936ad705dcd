"""Vandermonde-with-Arnoldi polynomial least squares.

The power basis 1, s, s^2, ... (with ``s = z - c`` or ``s = 1/(z - c)``) is
replaced by a Krylov basis orthogonalized on the sample set. The Hessenberg
matrix of the recurrence is kept so the same basis can be regenerated at
arbitrary points. Basis columns are scaled to norm ``sqrt(M)`` on the ``M``
fitting points, so the first column is the constant 1.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import InvalidInput, NumericalFailure
from .linalg import lstsq

FORWARD = "forward"
RECIPROCAL = "reciprocal"


@dataclass(frozen=True, eq=False)
class ArnoldiBasisFit:
    center: complex
    degree: int
    basis_kind: str
    hessenberg: np.ndarray  # (degree+1, degree)
    coeffs: np.ndarray      # (degree+1,)
    residual: float = 0.0   # 2-norm of the fitting residual

    def argument(self, z):
        """Map points to the basis argument; ``inf`` maps to 0 for the reciprocal basis."""
        z = np.asarray(z, dtype=np.complex128)
        if self.basis_kind == FORWARD:
            if np.any(np.isinf(z)):
                raise InvalidInput("forward basis cannot be evaluated at infinity")
            return z - self.center
        if np.any(z == self.center):
            raise InvalidInput("reciprocal basis is singular at its center")
        s = np.zeros(z.shape, dtype=np.complex128)
        fin = ~np.isinf(z)
        s[fin] = 1.0 / (z[fin] - self.center)
        return s

    def basis(self, z) -> np.ndarray:
        """Basis columns evaluated at the points ``z`` (shape ``(len(z), degree+1)``)."""
        s = self.argument(np.atleast_1d(z).ravel())
        return kernels.arnoldi_basis(s, self.hessenberg)

    def __call__(self, z):
        return arnoldi_eval(self, z)

    def to_dict(self) -> dict:
        H = self.hessenberg
        return {
            "center": [float(np.real(self.center)), float(np.imag(self.center))],
            "degree": int(self.degree),
            "basis_kind": self.basis_kind,
            "H": [[[float(v.real), float(v.imag)] for v in row] for row in H],
            "coeffs": [[float(v.real), float(v.imag)] for v in self.coeffs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArnoldiBasisFit":
        try:
            n = int(d["degree"])
            H = np.asarray(d["H"], dtype=np.float64).reshape(n + 1, n, 2)
            a = np.asarray(d["coeffs"], dtype=np.float64).reshape(n + 1, 2)
            c = complex(*d["center"])
            kind = d["basis_kind"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad Arnoldi fit record: {exc}") from exc
        if kind not in (FORWARD, RECIPROCAL):
            raise InvalidInput(f"unknown basis kind {kind!r}")
        return cls(c, n, kind, H[..., 0] + 1j * H[..., 1], a[:, 0] + 1j * a[:, 1])


def arnoldi_fit(points, values, degree: int, center=0.0, kind: str = FORWARD) -> ArnoldiBasisFit:
    """Least-squares fit of ``values`` by a degree-``degree`` polynomial in the basis argument.

    The solve is a single complex least-squares problem, also for real data.
    """
    if kind not in (FORWARD, RECIPROCAL):
        raise InvalidInput(f"unknown basis kind {kind!r}")
    if degree < 0:
        raise InvalidInput("degree must be >= 0")
    z = np.asarray(points, dtype=np.complex128).ravel()
    f = np.asarray(values).ravel()
    if f.shape != z.shape:
        raise InvalidInput(f"{f.shape[0]} values for {z.shape[0]} points")
    M = z.shape[0]
    if M < degree + 1:
        raise InvalidInput(f"degree {degree} needs at least {degree + 1} points")

    proto = ArnoldiBasisFit(complex(center), degree, kind,
                            np.zeros((degree + 1, degree), complex), np.zeros(degree + 1, complex))
    s = proto.argument(z)
    if degree > 0 and np.all(s == s[0]):
        raise NumericalFailure("all fitting points coincide; the Krylov basis is degenerate")
    Q = np.empty((M, degree + 1), dtype=np.complex128)
    Q[:, 0] = 1.0
    H = np.zeros((degree + 1, degree), dtype=np.complex128)
    for k in range(degree):
        q = s * Q[:, k]
        # modified Gram-Schmidt, then one reorthogonalization sweep
        for _ in range(2):
            for j in range(k + 1):
                h = np.vdot(Q[:, j], q) / M
                H[j, k] += h
                q = q - h * Q[:, j]
        nrm = np.linalg.norm(q) / np.sqrt(M)
        # tiny norms are fine (the column is then rounding noise, still
        # orthogonal); only an exact zero leaves nothing to normalize
        if not (nrm > 0 and np.isfinite(nrm)):
            raise NumericalFailure(f"Krylov basis broke down at degree {k + 1}")
        H[k + 1, k] = nrm
        Q[:, k + 1] = q / nrm
    d, resid = lstsq(Q, f)
    return ArnoldiBasisFit(complex(center), degree, kind, H, d, resid)


def arnoldi_eval(fit: ArnoldiBasisFit, p):
    """Evaluate the fitted polynomial at ``p`` (scalar or array)."""
    p_arr = np.asarray(p, dtype=np.complex128)
    out = fit.basis(p_arr.ravel()) @ fit.coeffs
    if p_arr.ndim == 0:
        return complex(out[0])
    return out.reshape(p_arr.shape)

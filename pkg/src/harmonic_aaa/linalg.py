"""Dense complex linear algebra shared by the fitting modules.

Matrices are plain 2-D numpy arrays; real input is promoted to complex.
"""
import numpy as np
import scipy.linalg

from .exceptions import InvalidInput, NumericalFailure

#: singular values below RANK_TOL * s_max count as zero in :func:`lstsq`
RANK_TOL = 1e-13


def as_matrix(a, name="matrix"):
    """Validate ``a`` as a finite 2-D array and promote it to complex."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise InvalidInput(f"{name} must be 2-D, got shape {a.shape}")
    a = a.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def svd_min_right_vector(m):
    """Smallest singular value of ``m`` and a unit right singular vector for it.

    Wide matrices (more columns than rows) have a nontrivial null space; the
    returned ``sigma_min`` is then 0 and ``v`` spans part of that null space.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        raise InvalidInput("empty matrix")
    try:
        _, s, vh = np.linalg.svd(m, full_matrices=rows < cols)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    v = vh[-1].conj()
    sigma = float(s[-1]) if rows >= cols else 0.0
    return sigma, v / np.linalg.norm(v)


def lstsq(a, rhs, rank_tol=RANK_TOL):
    """Least-squares solve ``a x ~ rhs``.

    Columns are equilibrated to unit 2-norm before the SVD solve, so badly
    scaled columns (Cauchy columns of poles very close to the data) do not
    get truncated as numerically rank deficient. Zero columns get a zero
    coefficient. For genuinely rank-deficient ``a`` the result is the
    minimum-norm minimizer in the equilibrated coordinates.

    Returns
    -------
    x : ndarray
        Coefficients, real when both inputs are real.
    residual : float
        ``||a x - rhs||_2``.
    """
    a = np.asarray(a)
    rhs = np.asarray(rhs)
    if a.ndim != 2 or a.shape[0] < 1:
        raise InvalidInput(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    if rhs.ndim != 1 or rhs.shape[0] != a.shape[0]:
        raise InvalidInput(f"rhs length {rhs.shape} does not match {a.shape[0]} rows")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(rhs))):
        raise InvalidInput("non-finite entries in least-squares system")
    real = np.isrealobj(a) and np.isrealobj(rhs)
    dtype = np.float64 if real else np.complex128
    a = a.astype(dtype, copy=False)
    rhs = rhs.astype(dtype, copy=False)

    scale = np.linalg.norm(a, axis=0)
    live = scale > 0
    x = np.zeros(a.shape[1], dtype=dtype)
    if np.any(live):
        try:
            y = np.linalg.lstsq(a[:, live] / scale[live], rhs, rcond=rank_tol)[0]
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(str(exc)) from exc
        x[live] = y / scale[live]
    return x, float(np.linalg.norm(a @ x - rhs))


def generalized_eigenvalues(e, b):
    """Finite eigenvalues of the pencil ``e - lambda b``.

    Eigenvalues at infinity (from a singular ``b``) are dropped.
    """
    e = as_matrix(e, "e")
    b = as_matrix(b, "b")
    if e.shape[0] != e.shape[1] or e.shape != b.shape:
        raise InvalidInput(f"need square matrices of equal size, got {e.shape} and {b.shape}")
    try:
        alpha, beta = scipy.linalg.eigvals(e, b, homogeneous_eigvals=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure(str(exc)) from exc
    finite = np.abs(beta) > 1e-14 * np.abs(alpha)
    return alpha[finite] / beta[finite]

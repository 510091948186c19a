"""Input validation helpers.

``check_density_matrix`` validates a single state and ``check_density_batch``
a stack of them; both return plain complex arrays and raise
:class:`~wignerlab.exceptions.InvalidStateError` naming the violated
invariant.
"""

import numpy as np

from . import linalg
from .exceptions import InvalidStateError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9


def _matrix_array(rho):
    mat = getattr(rho, "mat", rho)
    try:
        return np.asarray(mat, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidStateError("shape", f"cannot interpret input as a matrix ({exc})")


def state_residuals(a):
    """Hermiticity residual, trace residual and minimum eigenvalue.

    Works on a single matrix or a stack; the eigenvalue is only meaningful
    when the hermiticity residual is small.
    """
    herm = np.linalg.norm(a - linalg.adjoint(a), axis=(-2, -1))
    tr = np.abs(np.trace(a, axis1=-2, axis2=-1) - 1.0)
    sym = 0.5 * (a + linalg.adjoint(a))
    lam = linalg.min_eigenvalue(sym)
    return herm, tr, lam


def check_density_batch(X, *, dims=(2, 4), psd_tol=PSD_TOL):
    """Validate a stack of density matrices with shape ``(n, d, d)``.

    A single ``(d, d)`` matrix is promoted to a stack of one.
    """
    a = _matrix_array(X)
    if a.ndim == 2:
        a = a[np.newaxis]
    if a.ndim != 3 or a.shape[-1] != a.shape[-2]:
        raise InvalidStateError("shape", f"expected (n, d, d) matrices, got shape {a.shape}")
    if a.shape[-1] not in dims:
        raise InvalidStateError("shape", f"dimension must be one of {dims}, got {a.shape[-1]}")
    if not np.all(np.isfinite(a)):
        raise InvalidStateError("finite", "matrix has NaN or infinite entries")
    herm = np.linalg.norm(a - linalg.adjoint(a), axis=(-2, -1))
    tr = np.abs(np.trace(a, axis1=-2, axis2=-1) - 1.0)
    bad = np.flatnonzero(herm > HERMITIAN_TOL)
    if bad.size:
        raise InvalidStateError(
            "hermitian", f"sample {bad[0]} has ||rho - rho^H||_F = {herm[bad[0]]:.3e}"
        )
    bad = np.flatnonzero(tr > TRACE_TOL)
    if bad.size:
        raise InvalidStateError("unit-trace", f"sample {bad[0]} has |tr - 1| = {tr[bad[0]]:.3e}")
    lam = linalg.min_eigenvalue(a)
    bad = np.flatnonzero(lam < -psd_tol)
    if bad.size:
        raise InvalidStateError(
            "positive-semidefinite", f"sample {bad[0]} has min eigenvalue {lam[bad[0]]:.3e}"
        )
    return a


def check_density_matrix(rho, *, dims=(2, 4), psd_tol=PSD_TOL):
    """Validate one density matrix and return it as a complex array."""
    if getattr(rho, "_validated", False):
        return rho.mat
    a = _matrix_array(rho)
    if a.ndim != 2:
        raise InvalidStateError("shape", f"expected a square matrix, got shape {a.shape}")
    return check_density_batch(a, dims=dims, psd_tol=psd_tol)[0]


def check_n_qubits(a, n_qubits, what="state"):
    expected = 2**n_qubits
    if a.shape[-1] != expected:
        raise InvalidStateError(
            "shape", f"{what} must be a {n_qubits}-qubit ({expected}x{expected}) matrix, "
            f"got dimension {a.shape[-1]}"
        )
    return a

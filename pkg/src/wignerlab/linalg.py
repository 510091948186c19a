"""Small dense complex linear algebra.

Every function accepts a single square matrix or a stack of them with shape
``(..., n, n)``; leading axes are treated as batch axes. The Hermitian
eigensolver is a cyclic Jacobi method, which is plenty for the 2x2 to 6x6
matrices used in this package and vectorizes cleanly across a batch because
the pivot order is fixed.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, InvalidInputError, NotHermitianError

__all__ = [
    "EigenResult",
    "adjoint",
    "frobenius_inner",
    "hermitian_eigenvalues",
    "is_psd",
    "matmul",
    "min_eigenvalue",
    "partial_transpose_second",
    "tensor",
    "trace",
]

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
HERMITIAN_RTOL = 1e-10
PSD_TOL = 1e-9
MAX_TENSOR_DIM = 16


def _as_square(a, name="a"):
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InvalidInputError(f"{name} must be square, got shape {a.shape}")
    return a


def matmul(a, b):
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape[-1] != b.shape[-1]:
        raise InvalidInputError(
            f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}"
        )
    return a @ b


def adjoint(a):
    a = np.asarray(a, dtype=complex)
    return np.conj(np.swapaxes(a, -1, -2))


def trace(a):
    return np.trace(_as_square(a), axis1=-2, axis2=-1)


def tensor(a, b):
    """Kronecker product with ``a`` as the slow (first) factor."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    n, m = a.shape[-1], b.shape[-1]
    if n * m > MAX_TENSOR_DIM:
        raise InvalidInputError(f"tensor dimension {n * m} exceeds {MAX_TENSOR_DIM}")
    out = np.einsum("...ij,...kl->...ikjl", a, b)
    return out.reshape(out.shape[:-4] + (n * m, n * m))


def partial_transpose_second(a):
    """Transpose the second qubit of a 4x4 operator.

    With ``a[(m, mu), (n, nu)]`` the result is ``a[(m, nu), (n, mu)]``.
    """
    a = _as_square(a)
    if a.shape[-1] != 4:
        raise InvalidInputError(f"partial transpose needs a 4x4 matrix, got {a.shape[-1]}")
    t = a.reshape(a.shape[:-2] + (2, 2, 2, 2))
    t = np.swapaxes(t, -3, -1)
    return t.reshape(a.shape).copy()


def frobenius_inner(a, b):
    """``tr(a^dagger b)``."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape[-1] != b.shape[-1]:
        raise InvalidInputError(
            f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}"
        )
    return np.einsum("...ij,...ij->...", np.conj(a), b)


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues (ascending) and the final off-diagonal Frobenius norm.

    For a stacked input both fields carry the same leading batch axes.
    """

    eigenvalues: np.ndarray
    offdiag_residual: np.ndarray
    sweeps: int

    @property
    def min(self):
        return self.eigenvalues[..., 0]


def _offdiag_norm(m):
    n = m.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(m[..., mask]) ** 2, axis=-1))


def _rotate(m, p, q):
    # Phase q so that m[p, q] becomes real, then a real Givens rotation.
    apq = m[:, p, q]
    r = np.abs(apq)
    phase = np.exp(-1j * np.angle(apq))
    app = m[:, p, p].real
    aqq = m[:, q, q].real
    theta = 0.5 * np.arctan2(2.0 * r, aqq - app)
    # smallest rotation angle; the near-swap branch stalls convergence
    theta = np.where(theta > np.pi / 4, theta - np.pi / 2, theta)
    theta = np.where(r > 0.0, theta, 0.0)
    c, s = np.cos(theta), np.sin(theta)

    u = np.empty((m.shape[0], 2, 2), dtype=complex)
    u[:, 0, 0] = c
    u[:, 0, 1] = s
    u[:, 1, 0] = -s * phase
    u[:, 1, 1] = c * phase

    idx = [p, q]
    m[:, :, idx] = m[:, :, idx] @ u
    m[:, idx, :] = np.conj(np.swapaxes(u, -1, -2)) @ m[:, idx, :]
    m[:, p, q] = 0.0
    m[:, q, p] = 0.0


def hermitian_eigenvalues(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues of a Hermitian matrix (or stack) by cyclic Jacobi sweeps.

    Sweeps stop once every matrix has off-diagonal Frobenius norm at most
    ``tol * ||a||_F``. Raises :class:`NotHermitianError` when
    ``||a - a^dagger||_F > 1e-10 ||a||_F`` and :class:`ConvergenceError`
    after ``max_sweeps`` unsuccessful sweeps.
    """
    a = _as_square(a)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    n = a.shape[-1]
    batch_shape = a.shape[:-2]

    norm = np.linalg.norm(a, axis=(-2, -1))
    skew = np.linalg.norm(a - adjoint(a), axis=(-2, -1))
    if np.any(skew > HERMITIAN_RTOL * norm):
        raise NotHermitianError(
            f"matrix is not Hermitian (||a - a^H||_F = {np.max(skew):.3e})"
        )

    stack = (0.5 * (a + adjoint(a))).reshape(-1, n, n).copy()
    threshold = tol * norm.reshape(-1)
    off = _offdiag_norm(stack)
    sweeps = 0
    while sweeps < max_sweeps:
        active = off > threshold
        if not np.any(active):
            break
        sub = stack[active]
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(sub, p, q)
        stack[active] = sub
        off = _offdiag_norm(stack)
        sweeps += 1
    if np.any(off > threshold):
        raise ConvergenceError(float(np.max(off)), sweeps)

    evals = np.sort(np.diagonal(stack, axis1=-2, axis2=-1).real, axis=-1)
    evals = evals.reshape(batch_shape + (n,))
    off = off.reshape(batch_shape)
    if not batch_shape:
        off = float(off)
    return EigenResult(evals, off, sweeps)


def min_eigenvalue(a):
    return hermitian_eigenvalues(a).min


def is_psd(a, tol=PSD_TOL):
    """True where the smallest eigenvalue is at least ``-tol``."""
    result = min_eigenvalue(a) >= -tol
    return bool(result) if np.ndim(result) == 0 else result

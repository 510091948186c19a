"""Axis operators and first/second phase-space moments.

The axis operators are the projectors ``p = (I - X)/2``, ``d = (I - Y)/2``
and ``q = (I - Z)/2`` (indices 1, 2, 3). Their phase-space symbols are
``p``, ``(q + p) mod 2`` and ``q``, so means and discrete anticommutators are
plain sums over the Wigner grid.

Two-qubit covariance matrices are ordered ``(p1, d1, q1, p2, d2, q2)``.
"""

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .exceptions import InvalidInputError
from .phase_space import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, WignerGrid
from .validation import check_density_matrix

__all__ = [
    "Anticommutator",
    "CovarianceReport",
    "anticom",
    "axis_operator",
    "axis_symbol",
    "commutator_skew",
    "covariance_single",
    "covariance_two",
    "moments_from_wigner",
]


class Anticommutator(str, enum.Enum):
    STANDARD = "standard"
    DISCRETE = "discrete"


_PAULI_FOR_AXIS = {1: SIGMA_X, 2: SIGMA_Y, 3: SIGMA_Z}
AXIS_NAMES = {1: "p", 2: "d", 3: "q"}


def _axis(i):
    if i not in (1, 2, 3):
        raise InvalidInputError(f"axis index must be 1, 2 or 3, got {i!r}")
    return i


def _kind(kind):
    try:
        return Anticommutator(kind)
    except ValueError:
        raise InvalidInputError(f"unknown anticommutator kind {kind!r}") from None


def axis_operator(i):
    """``(I - S_i) / 2``: 1 -> momentum, 2 -> diagonal, 3 -> position."""
    return 0.5 * (I2 - _PAULI_FOR_AXIS[_axis(i)])


def axis_symbol(i, q, p):
    """Phase-space function of axis operator ``i`` at ``(q, p)``."""
    return {1: p, 2: (q + p) % 2, 3: q}[_axis(i)]


def anticom(i, j, kind=Anticommutator.DISCRETE):
    """Symmetrized product of two axis operators.

    ``standard``: ``(xi_i xi_j + xi_j xi_i) / 2``.
    ``discrete``: ``(xi_i + xi_j - |eps_ijk| xi_k) / 2``, whose mean is the
    Wigner-grid sum of the product of the two symbols.
    """
    i, j, kind = _axis(i), _axis(j), _kind(kind)
    a, b = axis_operator(i), axis_operator(j)
    if kind is Anticommutator.STANDARD:
        return 0.5 * (a @ b + b @ a)
    if i == j:
        return a
    (k,) = {1, 2, 3} - {i, j}
    return 0.5 * (a + b - axis_operator(k))


def _levi_civita():
    eps = np.zeros((3, 3, 3))
    for a, b, c in itertools.permutations(range(3)):
        eps[a, b, c] = np.linalg.det(np.eye(3)[[a, b, c]])
    return eps


EPSILON = _levi_civita()


def commutator_skew(chi):
    """Mean of ``xi_j xi_k - {xi_j, xi_k}_S``, i.e. ``(i/4) eps_jkl chi_l``.

    ``chi`` is a Pauli expectation vector ``(<X>, <Y>, <Z>)`` (or a stack).
    """
    chi = np.asarray(chi, dtype=float)
    return 0.25j * np.einsum("jkl,...l->...jk", EPSILON, chi)


def _embedded_ops():
    ops1 = [axis_operator(i) for i in (1, 2, 3)]
    return [linalg.tensor(o, I2) for o in ops1] + [linalg.tensor(I2, o) for o in ops1]


def _second_moment_table(kind):
    """``(6, 6, 4, 4)`` operators whose means are the second moments."""
    ops = _embedded_ops()
    table = np.empty((6, 6, 4, 4), dtype=complex)
    for a, b in itertools.product(range(6), repeat=2):
        if a // 3 == b // 3:
            local = anticom(a % 3 + 1, b % 3 + 1, kind)
            table[a, b] = linalg.tensor(local, I2) if a < 3 else linalg.tensor(I2, local)
        else:
            table[a, b] = ops[a] @ ops[b]
    return table


_FIRST = np.stack(_embedded_ops())
_SECOND = {k: _second_moment_table(k) for k in Anticommutator}
_FIRST_1 = np.stack([axis_operator(i) for i in (1, 2, 3)])
_SECOND_1 = {
    k: np.array([[anticom(i, j, k) for j in (1, 2, 3)] for i in (1, 2, 3)])
    for k in Anticommutator
}


def covariance_values(rho, kind=Anticommutator.DISCRETE):
    """Vectorized two-qubit kernel: ``(V, chi1, chi2)`` for ``(..., 4, 4)`` input.

    No validation, so it also accepts partially transposed matrices.
    """
    rho = np.asarray(rho, dtype=complex)
    kind = _kind(kind)
    means = np.einsum("...ij,aji->...a", rho, _FIRST).real
    second = np.einsum("...ij,abji->...ab", rho, _SECOND[kind]).real
    v = second - means[..., :, None] * means[..., None, :]
    v = 0.5 * (v + np.swapaxes(v, -1, -2))
    chi = 1.0 - 2.0 * means
    return v, chi[..., :3], chi[..., 3:]


def covariance_single_values(rho, kind=Anticommutator.DISCRETE):
    rho = np.asarray(rho, dtype=complex)
    kind = _kind(kind)
    means = np.einsum("...ij,aji->...a", rho, _FIRST_1).real
    second = np.einsum("...ij,abji->...ab", rho, _SECOND_1[kind]).real
    v = second - means[..., :, None] * means[..., None, :]
    return 0.5 * (v + np.swapaxes(v, -1, -2)), 1.0 - 2.0 * means


def covariance_single(rho, kind=Anticommutator.DISCRETE):
    """3x3 covariance matrix of ``(p, d, q)`` for a one-qubit state."""
    rho = check_density_matrix(rho, dims=(2,))
    return covariance_single_values(rho, kind)[0]


@dataclass(frozen=True, eq=False)
class CovarianceReport:
    """6x6 covariance ``[[A, C], [C^T, B]]`` and single-qubit Pauli vectors.

    ``chi1[l] = tr(rho S_l (x) I)`` and ``chi2[l] = tr(rho I (x) S_l)`` with
    ``S = (X, Y, Z)``.
    """

    kind: Anticommutator
    V: np.ndarray
    chi1: np.ndarray
    chi2: np.ndarray

    @property
    def A(self):
        return self.V[:3, :3]

    @property
    def B(self):
        return self.V[3:, 3:]

    @property
    def C(self):
        return self.V[:3, 3:]

    def gup_matrix(self):
        """Hermitian 6x6 ``[[A + skew(chi1), C], [C^T, B + skew(chi2)]]``."""
        m = self.V.astype(complex)
        m[:3, :3] += commutator_skew(self.chi1)
        m[3:, 3:] += commutator_skew(self.chi2)
        return m


def _report(v, chi1, chi2, kind):
    for arr in (v, chi1, chi2):
        arr.setflags(write=False)
    return CovarianceReport(_kind(kind), v, chi1, chi2)


def covariance_two(rho, kind=Anticommutator.DISCRETE):
    rho = check_density_matrix(rho, dims=(4,))
    return _report(*covariance_values(rho, kind), kind)


def _grid_symbols():
    # f[a] over the [q1, q2, p1, p2] grid for the six axis operators
    f = np.zeros((6, 2, 2, 2, 2))
    for q1, q2, p1, p2 in itertools.product((0, 1), repeat=4):
        for i in (1, 2, 3):
            f[i - 1, q1, q2, p1, p2] = axis_symbol(i, q1, p1)
            f[i + 2, q1, q2, p1, p2] = axis_symbol(i, q2, p2)
    return f


_GRID_SYMBOLS = _grid_symbols()


def moments_from_wigner_values(w):
    """Vectorized phase-space-sum path for ``(..., 2, 2, 2, 2)`` grids."""
    w = np.asarray(w, dtype=float)
    means = np.einsum("aqrst,...qrst->...a", _GRID_SYMBOLS, w)
    second = np.einsum("aqrst,bqrst,...qrst->...ab", _GRID_SYMBOLS, _GRID_SYMBOLS, w)
    v = second - means[..., :, None] * means[..., None, :]
    chi = 1.0 - 2.0 * means
    return v, chi[..., :3], chi[..., 3:]


def moments_from_wigner(w):
    """Discrete-kind covariance report computed purely as grid sums."""
    if not isinstance(w, WignerGrid):
        w = WignerGrid(w)
    if w.n_qubits != 2:
        raise InvalidInputError("moments_from_wigner needs a two-qubit grid")
    return _report(*moments_from_wigner_values(w.values), Anticommutator.DISCRETE)

"""Discrete phase space for one and two qubits.

One-qubit grids are arrays of shape ``(2, 2)`` indexed ``[q, p]``; two-qubit
grids have shape ``(2, 2, 2, 2)`` indexed ``[q1, q2, p1, p2]``, so the
C-order flat index is ``8*q1 + 4*q2 + 2*p1 + p2``. Characteristic grids use
the same layout with ``(u, v)`` in place of ``(q, p)``.

The translation operators are ``S(0,0)=I``, ``S(1,0)=X``, ``S(0,1)=Z`` and
``S(1,1)=Y``. Conjugating by ``S(a, b)`` shifts the Wigner function by
``(a, b)``, and the Fourier kernel pairing consistent with that choice is
``(-1)**(p*u + q*v)``.
"""

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .exceptions import InvalidGridError, InvalidInputError

__all__ = [
    "CharGrid",
    "Line",
    "PhasePoint1",
    "PhasePoint2",
    "Reconstruction",
    "Slice",
    "Striation",
    "WignerGrid",
    "char_from_wigner",
    "char_of",
    "density_of",
    "phase_point_op1",
    "phase_point_op2",
    "purity",
    "slice_probability",
    "slice_projector",
    "striations",
    "translate",
    "translation_op",
    "wf_inner",
    "wigner_from_char",
    "wigner_of",
]

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

NORMALIZATION_TOL = 1e-8


class PhasePoint1(NamedTuple):
    q: int
    p: int


class PhasePoint2(NamedTuple):
    q1: int
    p1: int
    q2: int
    p2: int


def _bit(x, name):
    if x not in (0, 1):
        raise InvalidInputError(f"{name} must be 0 or 1, got {x!r}")
    return int(x)


def translation_op(u, v):
    """Single-qubit translation operator ``S(u, v)``."""
    u, v = _bit(u, "u"), _bit(v, "v")
    return {(0, 0): I2, (1, 0): SIGMA_X, (0, 1): SIGMA_Z, (1, 1): SIGMA_Y}[(u, v)].copy()


def phase_point_op1(q, p):
    """``A(q, p) = (I + (-1)^q Z + (-1)^p X + (-1)^(q+p) Y) / 2``."""
    q, p = _bit(q, "q"), _bit(p, "p")
    sq, sp = (-1) ** q, (-1) ** p
    return 0.5 * (I2 + sq * SIGMA_Z + sp * SIGMA_X + sq * sp * SIGMA_Y)


def phase_point_op2(q1, p1, q2, p2):
    return linalg.tensor(phase_point_op1(q1, p1), phase_point_op1(q2, p2))


def _build_tables():
    a1 = np.empty((2, 2, 2, 2), dtype=complex)
    s1 = np.empty((2, 2, 2, 2), dtype=complex)
    for u, v in itertools.product((0, 1), repeat=2):
        a1[u, v] = phase_point_op1(u, v)
        s1[u, v] = translation_op(u, v)
    a2 = np.einsum("acij,bdkl->abcdikjl", a1, a1).reshape((2,) * 4 + (4, 4))
    s2 = np.einsum("acij,bdkl->abcdikjl", s1, s1).reshape((2,) * 4 + (4, 4))
    return a1, a2, s1, s2


# indexed [q, p, i, j] and [q1, q2, p1, p2, i, j]
_A1, _A2, _S1, _S2 = _build_tables()
for _t in (_A1, _A2, _S1, _S2):
    _t.setflags(write=False)

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]])


def _n_qubits_for_dim(dim):
    if dim == 2:
        return 1
    if dim == 4:
        return 2
    raise InvalidInputError(f"only 1 or 2 qubits are supported (dimension {dim})")


def _operator_table(n_qubits, kind):
    if kind == "A":
        return _A1 if n_qubits == 1 else _A2
    return _S1 if n_qubits == 1 else _S2


# -- vectorized kernels ------------------------------------------------------
# These take (..., d, d) matrices or (..., 2, ..., 2) grids and skip validation.

def wigner_values(rho):
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits_for_dim(rho.shape[-1])
    table = _operator_table(n, "A").reshape(-1, rho.shape[-1], rho.shape[-1])
    w = np.einsum("...ij,kji->...k", rho, table).real / rho.shape[-1]
    return w.reshape(rho.shape[:-2] + (2,) * (2 * n))


def char_values(rho):
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits_for_dim(rho.shape[-1])
    table = _operator_table(n, "S").reshape(-1, rho.shape[-1], rho.shape[-1])
    chi = np.einsum("...ij,kji->...k", rho, table).real
    return chi.reshape(rho.shape[:-2] + (2,) * (2 * n))


def density_values(w, n_qubits):
    table = _operator_table(n_qubits, "A")
    axes = tuple(range(-2 * n_qubits, 0))
    return np.tensordot(w, table, axes=(axes, tuple(range(2 * n_qubits))))


def _fourier(values, n_qubits):
    # (q, p) <-> (u, v) with kernel (-1)^(p*u + q*v): position axes pair with
    # the v axes and momentum axes with the u axes.
    h = _HADAMARD
    if n_qubits == 1:
        return np.einsum("...uv,pu,qv->...qp", values, h, h)
    return np.einsum("...abcd,pa,qb,rc,sd->...rspq", values, h, h, h, h)


def wigner_from_char_values(chi, n_qubits):
    return _fourier(chi, n_qubits) / 4**n_qubits


def char_from_wigner_values(w, n_qubits):
    return _fourier(w, n_qubits)


# -- grid value types --------------------------------------------------------

def _check_grid_values(values, kind):
    values = np.array(values, dtype=float)
    if values.size == 4:
        values = values.reshape(2, 2)
    elif values.size == 16:
        values = values.reshape(2, 2, 2, 2)
    else:
        raise InvalidGridError(f"{kind} grid needs 4 or 16 values, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise InvalidGridError(f"{kind} grid has non-finite values")
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Discrete Wigner function of one or two qubits.

    ``values`` may be given flat (length 4 or 16, ordered ``2*q + p`` or
    ``8*q1 + 4*q2 + 2*p1 + p2``) or already shaped. The grid must sum to 1.
    """

    values: np.ndarray

    def __post_init__(self):
        values = _check_grid_values(self.values, "Wigner")
        total = values.sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InvalidGridError(f"Wigner grid sums to {total!r}, not 1")
        object.__setattr__(self, "values", values)

    @property
    def n_qubits(self):
        return self.values.ndim // 2

    @property
    def dim(self):
        return 2**self.n_qubits

    def flat(self):
        return self.values.ravel()

    def min(self):
        return float(self.values.min())

    def __getitem__(self, index):
        return float(self.values[index])

    def rows(self):
        """Cells in display orientation.

        Rows run over momentum from all-ones down to all-zeros, columns over
        position from all-zeros up, i.e. ``(p1 p2) = 11, 10, 01, 00`` by
        ``(q1 q2) = 00, 01, 10, 11`` for two qubits.
        """
        n = self.n_qubits
        labels = ["".join(map(str, b)) for b in itertools.product((0, 1), repeat=n)]
        grid = self.values.reshape(2**n, 2**n)  # [q, p] with multi-bit labels
        return [[float(grid[qi, pi]) for qi in range(2**n)] for pi in reversed(range(2**n))], labels


@dataclass(frozen=True, eq=False)
class CharGrid:
    """Characteristic function ``chi(u, v) = tr(rho S(u, v))``."""

    values: np.ndarray

    def __post_init__(self):
        values = _check_grid_values(self.values, "characteristic")
        origin = values.flat[0]
        if abs(origin - 1.0) > NORMALIZATION_TOL:
            raise InvalidGridError(f"characteristic grid has chi(0) = {origin!r}, not 1")
        object.__setattr__(self, "values", values)

    @property
    def n_qubits(self):
        return self.values.ndim // 2

    @property
    def dim(self):
        return 2**self.n_qubits

    def flat(self):
        return self.values.ravel()


class Reconstruction(NamedTuple):
    """A density matrix rebuilt from a grid, with its PSD check."""

    matrix: np.ndarray
    min_eigenvalue: float
    is_state: bool


# -- public single-state operations -----------------------------------------

def _density_array(rho):
    from .validation import check_density_matrix

    return check_density_matrix(rho)


def wigner_of(rho):
    """Wigner grid ``W(alpha) = tr(rho A(alpha)) / N`` of a valid state."""
    return WignerGrid(wigner_values(_density_array(rho)))


def char_of(rho):
    return CharGrid(char_values(_density_array(rho)))


def density_of(w, tol=linalg.PSD_TOL):
    """Rebuild ``sum_alpha W(alpha) A(alpha)``.

    Arbitrary normalized grids need not give positive matrices, so the result
    is flagged instead of rejected.
    """
    if not isinstance(w, WignerGrid):
        w = WignerGrid(w)
    mat = density_values(w.values, w.n_qubits)
    lam = float(linalg.min_eigenvalue(mat))
    return Reconstruction(mat, lam, lam >= -tol)


def wigner_from_char(chi):
    if not isinstance(chi, CharGrid):
        chi = CharGrid(chi)
    return WignerGrid(wigner_from_char_values(chi.values, chi.n_qubits))


def char_from_wigner(w):
    if not isinstance(w, WignerGrid):
        w = WignerGrid(w)
    return CharGrid(char_from_wigner_values(w.values, w.n_qubits))


def _shift_bits(shift, n_qubits):
    shift = np.asarray(shift, dtype=int)
    if shift.shape == (2,) and n_qubits == 1:
        shift = shift.reshape(1, 2)
    if shift.shape != (n_qubits, 2) or not np.all((shift == 0) | (shift == 1)):
        raise InvalidInputError(
            f"shift must be {n_qubits} pair(s) of bits (a, b), got {shift.tolist()}"
        )
    return shift


def translate(w, shift):
    """``W'(q, p) = W(q + a, p + b)`` per qubit, sums mod 2.

    ``shift`` is ``(a, b)`` for one qubit or ``((a1, b1), (a2, b2))`` for two.
    """
    if not isinstance(w, WignerGrid):
        w = WignerGrid(w)
    n = w.n_qubits
    shift = _shift_bits(shift, n)
    axes = [k for k in range(n) if shift[k, 0]] + [n + k for k in range(n) if shift[k, 1]]
    values = np.flip(w.values, axis=axes) if axes else w.values
    return WignerGrid(values)


def translation_op_for(shift):
    """Operator whose conjugation realizes :func:`translate` with ``shift``."""
    shift = np.asarray(shift, dtype=int)
    if shift.ndim == 1:
        return translation_op(*shift)
    op = translation_op(*shift[0])
    for a, b in shift[1:]:
        op = linalg.tensor(op, translation_op(a, b))
    return op


def wf_inner(wa, wb):
    """``N * sum W_a W_b``, which equals ``tr(rho_a rho_b)``."""
    if not isinstance(wa, WignerGrid):
        wa = WignerGrid(wa)
    if not isinstance(wb, WignerGrid):
        wb = WignerGrid(wb)
    if wa.n_qubits != wb.n_qubits:
        raise InvalidInputError(
            f"grids cover {wa.n_qubits} and {wb.n_qubits} qubits"
        )
    return float(wa.dim * np.sum(wa.values * wb.values))


def purity(w):
    return wf_inner(w, w)


# -- lines, slices, striations ----------------------------------------------

@dataclass(frozen=True)
class Line:
    """Points ``(q, p)`` of one qubit with ``(u*q + v*p) mod 2 == c``."""

    u: int
    v: int
    c: int

    def __post_init__(self):
        for name in ("u", "v", "c"):
            _bit(getattr(self, name), name)
        if self.u == 0 and self.v == 0:
            raise InvalidInputError("line direction (u, v) must not be (0, 0)")

    def points(self):
        return [
            (q, p)
            for q, p in itertools.product((0, 1), repeat=2)
            if (self.u * q + self.v * p) % 2 == self.c
        ]

    def mask(self):
        m = np.zeros((2, 2), dtype=bool)
        for q, p in self.points():
            m[q, p] = True
        return m


@dataclass(frozen=True)
class Slice:
    """Product of one line per qubit."""

    lines: tuple

    def __post_init__(self):
        lines = tuple(self.lines)
        if len(lines) not in (1, 2) or not all(isinstance(x, Line) for x in lines):
            raise InvalidInputError("a slice needs one Line per qubit (1 or 2 lines)")
        object.__setattr__(self, "lines", lines)

    @property
    def n_qubits(self):
        return len(self.lines)

    def mask(self):
        """Boolean grid in the same layout as the Wigner values."""
        if self.n_qubits == 1:
            return self.lines[0].mask()
        m1, m2 = self.lines[0].mask(), self.lines[1].mask()
        return np.einsum("ac,bd->abcd", m1, m2)

    def points(self):
        return [tuple(int(i) for i in idx) for idx in np.argwhere(self.mask())]


@dataclass(frozen=True)
class Striation:
    """All slices sharing one direction per qubit; they partition the grid."""

    directions: tuple

    def __post_init__(self):
        directions = tuple(tuple(d) for d in self.directions)
        for u, v in directions:
            Line(u, v, 0)
        object.__setattr__(self, "directions", directions)

    @property
    def slices(self):
        offsets = itertools.product((0, 1), repeat=len(self.directions))
        return [
            Slice(tuple(Line(u, v, c) for (u, v), c in zip(self.directions, cs)))
            for cs in offsets
        ]


_DIRECTIONS = ((1, 0), (0, 1), (1, 1))


def striations(n_qubits):
    """The 3 (one qubit) or 9 (two qubits) striations."""
    return [Striation(d) for d in itertools.product(_DIRECTIONS, repeat=n_qubits)]


def slice_probability(w, s):
    if not isinstance(w, WignerGrid):
        w = WignerGrid(w)
    if not isinstance(s, Slice):
        raise InvalidInputError(f"expected a Slice, got {type(s).__name__}")
    if s.n_qubits != w.n_qubits:
        raise InvalidInputError(
            f"slice covers {s.n_qubits} qubit(s), grid covers {w.n_qubits}"
        )
    return float(w.values[s.mask()].sum())


def slice_projector(s):
    """``P = (1/N) sum_{alpha in slice} A(alpha)``."""
    table = _operator_table(s.n_qubits, "A")
    n = 2**s.n_qubits
    return table[s.mask()].sum(axis=0) / n

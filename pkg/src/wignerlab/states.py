"""Density matrices used throughout the package, plus random samplers.

Samplers take a :class:`numpy.random.Generator` (PCG64 via
``numpy.random.default_rng(seed)``), so a fixed seed replays the same states.
With ``size=None`` they return a single :class:`DensityMatrix`; with an
integer ``size`` they return a validated complex array of shape
``(size, d, d)``.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linalg
from .exceptions import InvalidInputError, InvalidStateError, StateSpecError
from .validation import check_density_batch, check_density_matrix, state_residuals

__all__ = [
    "BELL_KINDS",
    "DensityMatrix",
    "basis_state",
    "bell",
    "coherent",
    "load_state",
    "maximally_mixed",
    "mixture",
    "parse_state",
    "product",
    "pure",
    "random_mixed",
    "random_pure",
    "random_separable",
    "state_to_spec",
    "werner",
]

WEIGHT_TOL = 1e-10
NORM_TOL = 1e-10
MAX_SEPARABLE_TERMS = 16


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated Hermitian, unit-trace, positive semidefinite 2x2 or 4x4 matrix.

    The residuals of each invariant are kept alongside the matrix.
    """

    mat: np.ndarray
    hermiticity_residual: float = field(init=False)
    trace_residual: float = field(init=False)
    min_eigenvalue: float = field(init=False)

    _validated = True

    def __post_init__(self):
        a = np.array(getattr(self.mat, "mat", self.mat), dtype=complex)
        check_density_batch(a)
        herm, tr, lam = state_residuals(a)
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)
        object.__setattr__(self, "hermiticity_residual", float(herm))
        object.__setattr__(self, "trace_residual", float(tr))
        object.__setattr__(self, "min_eigenvalue", float(lam))

    @property
    def dim(self):
        return self.mat.shape[0]

    @property
    def n_qubits(self):
        return 1 if self.dim == 2 else 2

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(n_qubits={self.n_qubits}, min_eigenvalue={self.min_eigenvalue:.3g})"


def _projector(vec):
    vec = np.asarray(vec, dtype=complex)
    return np.einsum("...i,...j->...ij", vec, np.conj(vec))


def pure(amplitudes):
    """Projector onto a normalized state vector of length 2 or 4."""
    vec = np.asarray(amplitudes, dtype=complex)
    if vec.ndim != 1 or vec.size not in (2, 4):
        raise InvalidInputError(f"state vector must have 2 or 4 amplitudes, got shape {vec.shape}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORM_TOL:
        raise InvalidInputError(f"state vector has norm {norm!r}, not 1")
    return DensityMatrix(_projector(vec / norm))


def basis_state(bits):
    """Computational basis projector, e.g. ``basis_state("0")`` or ``"01"``."""
    bits = str(bits)
    if len(bits) not in (1, 2) or set(bits) - {"0", "1"}:
        raise InvalidInputError(f"basis label must be 1 or 2 bits, got {bits!r}")
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return DensityMatrix(_projector(vec))


def maximally_mixed(dim=4):
    if dim not in (2, 4):
        raise InvalidInputError(f"dimension must be 2 or 4, got {dim}")
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


_S = 1 / math.sqrt(2)
_BELL_VECTORS = {
    "phi_plus": np.array([_S, 0, 0, _S]),
    "phi_minus": np.array([_S, 0, 0, -_S]),
    "psi_plus": np.array([0, _S, _S, 0]),
    "psi_minus": np.array([0, _S, -_S, 0]),
}
BELL_KINDS = tuple(_BELL_VECTORS)


def bell(kind):
    try:
        vec = _BELL_VECTORS[kind]
    except KeyError:
        raise InvalidInputError(f"unknown Bell state {kind!r}; expected one of {BELL_KINDS}") from None
    return DensityMatrix(_projector(vec))


def werner(x):
    """``x |psi-><psi-| + (1 - x) I/4`` for ``0 <= x <= 1``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise InvalidInputError(f"Werner parameter must lie in [0, 1], got {x}")
    singlet = _projector(_BELL_VECTORS["psi_minus"])
    return DensityMatrix(x * singlet + (1.0 - x) * np.eye(4) / 4)


def coherent(xi):
    """Spin-1/2 coherent state ``(|0> + xi |1>) / sqrt(1 + |xi|^2)``."""
    xi = complex(xi)
    if not (math.isfinite(xi.real) and math.isfinite(xi.imag)):
        raise InvalidInputError(f"coherent-state parameter must be finite, got {xi}")
    vec = np.array([1.0, xi]) / math.sqrt(1.0 + abs(xi) ** 2)
    return DensityMatrix(_projector(vec))


def product(a, b):
    a = check_density_matrix(a, dims=(2,))
    b = check_density_matrix(b, dims=(2,))
    return DensityMatrix(linalg.tensor(a, b))


def mixture(weights, components):
    weights = np.asarray(weights, dtype=float)
    mats = [check_density_matrix(c) for c in components]
    if weights.ndim != 1 or weights.size != len(mats) or not mats:
        raise InvalidInputError("need one weight per component and at least one component")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > WEIGHT_TOL:
        raise InvalidInputError(f"weights must be nonnegative and sum to 1, got {weights.tolist()}")
    if len({m.shape for m in mats}) != 1:
        raise InvalidInputError("components have different dimensions")
    return DensityMatrix(np.einsum("k,kij->ij", weights, np.stack(mats)))


# -- samplers ----------------------------------------------------------------

def _complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _haar_vectors(rng, n, dim):
    v = _complex_gaussian(rng, (n, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _finish(stack, size):
    stack = check_density_batch(stack)
    return DensityMatrix(stack[0]) if size is None else stack


def random_pure(rng, dim=4, size=None):
    """Projector onto a Haar-random unit vector."""
    if dim not in (2, 4):
        raise InvalidInputError(f"dimension must be 2 or 4, got {dim}")
    n = 1 if size is None else int(size)
    return _finish(_projector(_haar_vectors(rng, n, dim)), size)


def random_mixed(rng, dim=4, rank=None, size=None):
    """``G G^H / tr(G G^H)`` with ``G`` a ``dim x rank`` complex Gaussian matrix.

    ``rank`` defaults to ``dim`` (the Hilbert-Schmidt ensemble).
    """
    if dim not in (2, 4):
        raise InvalidInputError(f"dimension must be 2 or 4, got {dim}")
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise InvalidInputError(f"rank must lie in [1, {dim}], got {rank}")
    n = 1 if size is None else int(size)
    g = _complex_gaussian(rng, (n, dim, rank))
    m = g @ linalg.adjoint(g)
    m /= np.trace(m, axis1=-2, axis2=-1).real[:, None, None]
    return _finish(m, size)


def random_separable(rng, k=None, size=None):
    """Mixture of ``k`` random product pure states with flat Dirichlet weights.

    With ``k=None`` every sample draws its own ``k`` uniformly from 1..16.
    """
    n = 1 if size is None else int(size)
    if k is None:
        ks = rng.integers(1, MAX_SEPARABLE_TERMS + 1, size=n)
    else:
        k = int(k)
        if not 1 <= k <= MAX_SEPARABLE_TERMS:
            raise InvalidInputError(f"component count must lie in [1, {MAX_SEPARABLE_TERMS}], got {k}")
        ks = np.full(n, k)
    out = np.empty((n, 4, 4), dtype=complex)
    for i, kk in enumerate(ks):
        left = _haar_vectors(rng, kk, 2)
        right = _haar_vectors(rng, kk, 2)
        vecs = np.einsum("ka,kb->kab", left, right).reshape(kk, 4)
        weights = rng.dirichlet(np.ones(kk))
        out[i] = np.einsum("k,kij->ij", weights, _projector(vecs))
    return _finish(out, size)


# -- JSON state specifications -----------------------------------------------

def _require(obj, key, path):
    if not isinstance(obj, dict) or key not in obj:
        raise StateSpecError(f"{path}.{key}", "missing field")
    return obj[key]


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateSpecError(path, f"expected a number, got {value!r}")
    return float(value)


def _real_array(value, path, ndim):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise StateSpecError(path, "expected an array of numbers") from None
    if arr.ndim != ndim:
        raise StateSpecError(path, f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    return arr


def _complex_array(obj, path, ndim):
    re = _real_array(_require(obj, "re", path), f"{path}.re", ndim)
    im = obj.get("im")
    im = np.zeros_like(re) if im is None else _real_array(im, f"{path}.im", ndim)
    if im.shape != re.shape:
        raise StateSpecError(f"{path}.im", f"shape {im.shape} does not match re {re.shape}")
    return re + 1j * im


def _parse_named(obj, path):
    name = _require(obj, "name", path)
    if name == "werner":
        return werner(_number(_require(obj, "x", path), f"{path}.x"))
    if name == "bell":
        kind = _require(obj, "kind", path)
        if kind not in BELL_KINDS:
            raise StateSpecError(f"{path}.kind", f"unknown Bell state {kind!r}")
        return bell(kind)
    if name == "coherent":
        re = _number(obj.get("re", 0.0), f"{path}.re")
        im = _number(obj.get("im", 0.0), f"{path}.im")
        return coherent(complex(re, im))
    if name == "maximally_mixed":
        dim = obj.get("dim", 4)
        if dim not in (2, 4):
            raise StateSpecError(f"{path}.dim", f"expected 2 or 4, got {dim!r}")
        return maximally_mixed(dim)
    if name == "basis":
        return basis_state(_require(obj, "bits", path))
    raise StateSpecError(f"{path}.name", f"unknown named state {name!r}")


def _parse(obj, path):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise StateSpecError(
            path, "expected an object with exactly one of named/matrix/pure/mixture/product"
        )
    (tag, body), = obj.items()
    sub = f"{path}.{tag}"
    try:
        if tag == "named":
            return _parse_named(body, sub)
        if tag == "matrix":
            return DensityMatrix(_complex_array(body, sub, 2))
        if tag == "pure":
            return pure(_complex_array(body, sub, 1))
        if tag == "mixture":
            if not isinstance(body, list) or not body:
                raise StateSpecError(sub, "expected a nonempty list of {weight, state}")
            weights = [_number(_require(t, "weight", f"{sub}[{i}]"), f"{sub}[{i}].weight")
                       for i, t in enumerate(body)]
            comps = [_parse(_require(t, "state", f"{sub}[{i}]"), f"{sub}[{i}].state")
                     for i, t in enumerate(body)]
            return mixture(weights, comps)
        if tag == "product":
            if not isinstance(body, list) or len(body) != 2:
                raise StateSpecError(sub, "expected a list of two one-qubit states")
            return product(_parse(body[0], f"{sub}[0]"), _parse(body[1], f"{sub}[1]"))
    except StateSpecError:
        raise
    except InvalidStateError as exc:
        raise StateSpecError(sub, f"invalid state ({exc})") from exc
    except InvalidInputError as exc:
        raise StateSpecError(sub, str(exc)) from exc
    raise StateSpecError(f"{path}.{tag}", "unknown state kind")


def parse_state(spec):
    """Build a :class:`DensityMatrix` from a JSON state specification.

    Accepted forms::

        {"named": {"name": "werner", "x": 0.3}}
        {"named": {"name": "bell", "kind": "psi_minus"}}
        {"named": {"name": "coherent", "re": r, "im": s}}
        {"named": {"name": "maximally_mixed", "dim": 4}}
        {"named": {"name": "basis", "bits": "01"}}
        {"matrix": {"re": [[...]], "im": [[...]]}}
        {"pure": {"re": [...], "im": [...]}}
        {"mixture": [{"weight": w, "state": <spec>}, ...]}
        {"product": [<one-qubit spec>, <one-qubit spec>]}

    ``spec`` may be a dict or a JSON string.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise StateSpecError("state", f"invalid JSON ({exc.msg} at char {exc.pos})") from None
    return _parse(spec, "state")


def load_state(text_or_path):
    """Parse inline JSON, or read it from a file when the text is a path."""
    text = text_or_path.strip()
    if not text.startswith(("{", "[")):
        path = Path(text)
        if not path.is_file():
            raise StateSpecError("state", f"not inline JSON and no such file: {text}")
        text = path.read_text(encoding="utf-8")
    return parse_state(text)


def state_to_spec(rho):
    """Inverse of :func:`parse_state` in the explicit matrix form."""
    a = np.asarray(getattr(rho, "mat", rho), dtype=complex)
    return {"matrix": {"re": a.real.tolist(), "im": a.imag.tolist()}}

"""Entanglement and separability tests for two-qubit states.

Each test returns a :class:`Verdict`. One-sided tests answer ``Inconclusive``
on the side they cannot certify; the partial-transpose eigenvalue test
(:func:`ppt_oracle`) is exact for two qubits and serves as ground truth.

Every test has a vectorized kernel (``*_margin`` helpers and
:func:`evaluate_batch`) so large random sweeps avoid per-state overhead.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .covariance import (
    Anticommutator,
    CovarianceReport,
    commutator_skew,
    covariance_single_values,
    covariance_two,
    covariance_values,
)
from .exceptions import ConsistencyError, InvalidInputError
from .phase_space import (
    SIGMA_Y,
    WignerGrid,
    _A1,
    density_of,
    wigner_values,
)
from .validation import check_density_batch, check_density_matrix

__all__ = [
    "CRITERIA",
    "NEGATIVITY_BOUND",
    "CriteriaReport",
    "Decision",
    "GupReport",
    "PtPair",
    "Verdict",
    "dual_nonnegativity",
    "evaluate_batch",
    "gup_pt",
    "gup_single",
    "gup_two",
    "lur_generalized",
    "lur_trace",
    "negativity_criterion",
    "ppt_oracle",
    "run_all",
    "witness_overlap",
    "wigner_pt",
]

DEFAULT_TOL = 1e-9

# most negative separable two-qubit value: (1 - sqrt 3)/4 times 1/2
NEGATIVITY_BOUND = (1.0 - math.sqrt(3.0)) / 8.0

CRITERIA = ("negativity", "dual_nonnegativity", "lur_trace", "lur_generalized", "gup_pt")


class Decision(str, enum.Enum):
    ENTANGLED = "entangled"
    SEPARABLE = "separable"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value.capitalize()


@dataclass(frozen=True)
class Verdict:
    """Outcome of one criterion.

    ``margin`` is signed so that larger means stronger evidence for the
    criterion's certifying side; ``evidence`` holds the raw scalars.
    """

    decision: Decision
    criterion: str
    margin: float
    tol: float
    evidence: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "criterion": self.criterion,
            "decision": self.decision.value,
            "margin": self.margin,
            "tol": self.tol,
            "evidence": dict(self.evidence),
        }


def _check_tol(tol):
    tol = float(tol)
    if not tol >= 0.0:
        raise InvalidInputError(f"tolerance must be nonnegative, got {tol}")
    return tol


def _two_qubit(rho):
    return check_density_matrix(rho, dims=(4,))


# -- vectorized margins -------------------------------------------------------

def negativity_margin(w):
    """``(1 - sqrt 3)/8 - min W`` per grid; positive certifies entanglement."""
    w = np.asarray(w, dtype=float)
    return NEGATIVITY_BOUND - w.reshape(w.shape[:-4] + (16,)).min(axis=-1)


def tau_values(rho):
    """The grid ``tau`` with ``W(rho^T2) = W(rho) - tau``.

    ``tau(q1, q2, p1, p2) = (-1)^(q2 + p2) tr(rho A(q1, p1) (x) Y) / 4``.
    """
    rho = np.asarray(rho, dtype=complex)
    ops = np.einsum("qpij,kl->qpikjl", _A1, SIGMA_Y).reshape(2, 2, 4, 4)
    t = np.einsum("...ij,qpji->...qp", rho, ops).real / 4.0
    sign = np.array([[1.0, -1.0], [-1.0, 1.0]])  # indexed [q2, p2]
    return np.einsum("...ac,bd->...abcd", t, sign)


def lur_margins(v):
    """``(lur_trace, lur_generalized)`` margins from 6x6 covariance matrices."""
    v = np.asarray(v, dtype=float)
    diag = np.diagonal(v, axis1=-2, axis2=-1)
    tr_a = diag[..., :3].sum(axis=-1)
    tr_b = diag[..., 3:].sum(axis=-1)
    c_diag = np.diagonal(v[..., :3, 3:], axis1=-2, axis2=-1)
    trace_margin = 1.0 - (tr_a + tr_b + 2.0 * c_diag.sum(axis=-1))
    general_margin = np.abs(c_diag).sum(axis=-1) - 0.5 * (tr_a + tr_b - 1.0)
    return trace_margin, general_margin


def gup_matrices(rho):
    """Hermitian 6x6 moment matrices from standard-kind covariance blocks."""
    v, chi1, chi2 = covariance_values(rho, Anticommutator.STANDARD)
    m = v.astype(complex)
    m[..., :3, :3] += commutator_skew(chi1)
    m[..., 3:, 3:] += commutator_skew(chi2)
    return m


def _entangled_if(margin, tol):
    return np.where(margin > tol, Decision.ENTANGLED.value, Decision.INCONCLUSIVE.value)


def evaluate_batch(rhos, tol=DEFAULT_TOL, validate=True):
    """Run every criterion and the oracle on a stack of two-qubit states.

    Returns a dict of arrays: ``min_w``, ``min_w_pt``, ``oracle_min_eig``,
    ``purity``, ``<criterion>_margin`` and ``<criterion>`` (decision strings)
    for each name in :data:`CRITERIA` plus ``ppt_oracle``, and
    ``contradiction`` (bool).
    """
    tol = _check_tol(tol)
    rhos = check_density_batch(rhos, dims=(4,)) if validate else np.asarray(rhos, dtype=complex)
    pt = linalg.partial_transpose_second(rhos)
    w = wigner_values(rhos).reshape(-1, 16)
    w_pt = wigner_values(pt).reshape(-1, 16)
    oracle = linalg.min_eigenvalue(pt)
    lur_t, lur_g = lur_margins(covariance_values(rhos, Anticommutator.DISCRETE)[0])
    gup = -linalg.min_eigenvalue(gup_matrices(pt))
    dual = np.minimum(w.min(axis=-1), w_pt.min(axis=-1))

    out = {
        "min_w": w.min(axis=-1),
        "min_w_pt": w_pt.min(axis=-1),
        "oracle_min_eig": oracle,
        "purity": 4.0 * np.sum(w * w, axis=-1),
        "negativity_margin": NEGATIVITY_BOUND - w.min(axis=-1),
        "dual_nonnegativity_margin": dual,
        "lur_trace_margin": lur_t,
        "lur_generalized_margin": lur_g,
        "gup_pt_margin": gup,
        "ppt_oracle_margin": oracle,
    }
    out["negativity"] = _entangled_if(out["negativity_margin"], tol)
    out["dual_nonnegativity"] = np.where(
        dual >= -tol, Decision.SEPARABLE.value, Decision.INCONCLUSIVE.value
    )
    out["lur_trace"] = _entangled_if(lur_t, tol)
    out["lur_generalized"] = _entangled_if(lur_g, tol)
    out["gup_pt"] = _entangled_if(gup, tol)
    out["ppt_oracle"] = np.where(
        oracle >= -tol, Decision.SEPARABLE.value, Decision.ENTANGLED.value
    )
    contradiction = np.zeros(len(oracle), dtype=bool)
    for name in CRITERIA:
        contradiction |= _contradicts(out[name], out["ppt_oracle"])
    out["contradiction"] = contradiction
    return out


def _contradicts(decision, oracle):
    decision = np.asarray(decision)
    oracle = np.asarray(oracle)
    return ((decision == Decision.ENTANGLED.value) & (oracle == Decision.SEPARABLE.value)) | (
        (decision == Decision.SEPARABLE.value) & (oracle == Decision.ENTANGLED.value)
    )


# -- single-state criteria -----------------------------------------------------

def negativity_criterion(w, tol=DEFAULT_TOL):
    """Entangled when some Wigner value lies below ``(1 - sqrt 3)/8``.

    Never answers Separable: separable and entangled states alike can sit
    above the bound.
    """
    tol = _check_tol(tol)
    if not isinstance(w, WignerGrid):
        w = WignerGrid(w)
    if w.n_qubits != 2:
        raise InvalidInputError("the negativity criterion needs a two-qubit grid")
    margin = float(negativity_margin(w.values))
    return Verdict(
        Decision(str(_entangled_if(margin, tol))),
        "negativity",
        margin,
        tol,
        {"min_w": w.min(), "bound": NEGATIVITY_BOUND},
    )


@dataclass(frozen=True, eq=False)
class PtPair:
    """Wigner grids of ``rho`` and ``rho^T2`` with ``w_pt = w - tau``."""

    w: WignerGrid
    w_pt: WignerGrid
    tau: np.ndarray


def wigner_pt(rho):
    rho = _two_qubit(rho)
    w = wigner_values(rho)
    tau = tau_values(rho)
    tau.setflags(write=False)
    return PtPair(WignerGrid(w), WignerGrid(w - tau), tau)


def ppt_oracle(rho, tol=DEFAULT_TOL):
    """Separable iff ``rho^T2`` has no eigenvalue below ``-tol``."""
    tol = _check_tol(tol)
    lam = float(linalg.min_eigenvalue(linalg.partial_transpose_second(_two_qubit(rho))))
    decision = Decision.SEPARABLE if lam >= -tol else Decision.ENTANGLED
    return Verdict(decision, "ppt_oracle", lam, tol, {"min_eigenvalue": lam})


def witness_overlap(pt, w_prime):
    """``sum_alpha W_{rho^T2}(alpha) W'(alpha)``; negative certifies entanglement.

    ``w_prime`` is the Wigner grid (or density matrix) of a valid two-qubit
    state.
    """
    if not isinstance(pt, PtPair):
        pt = wigner_pt(pt)
    if not isinstance(w_prime, WignerGrid):
        arr = np.asarray(getattr(w_prime, "mat", w_prime))
        if arr.shape == (4, 4):
            w_prime = WignerGrid(wigner_values(check_density_matrix(arr, dims=(4,))))
        else:
            w_prime = WignerGrid(arr)
    if w_prime.n_qubits != 2:
        raise InvalidInputError("witness must be a two-qubit Wigner grid")
    if not density_of(w_prime).is_state:
        raise InvalidInputError("witness grid does not correspond to a valid state")
    return float(np.sum(pt.w_pt.values * w_prime.values))


def dual_nonnegativity(rho, tol=DEFAULT_TOL):
    """Separable when both ``W_rho`` and ``W_{rho^T2}`` are nonnegative.

    Negative cells in either grid prove nothing, so the other answer is
    Inconclusive.
    """
    tol = _check_tol(tol)
    pair = wigner_pt(rho)
    margin = min(pair.w.min(), pair.w_pt.min())
    decision = Decision.SEPARABLE if margin >= -tol else Decision.INCONCLUSIVE
    return Verdict(
        decision,
        "dual_nonnegativity",
        margin,
        tol,
        {"min_w": pair.w.min(), "min_w_pt": pair.w_pt.min()},
    )


def _report_of(report):
    if not isinstance(report, CovarianceReport):
        raise InvalidInputError(f"expected a CovarianceReport, got {type(report).__name__}")
    return report


def lur_trace(report, tol=DEFAULT_TOL):
    """Entangled when ``trA + trB + 2 trC < 1``."""
    tol = _check_tol(tol)
    report = _report_of(report)
    margin, _ = lur_margins(report.V)
    margin = float(margin)
    return Verdict(
        Decision(str(_entangled_if(margin, tol))),
        "lur_trace",
        margin,
        tol,
        {
            "trA": float(np.trace(report.A)),
            "trB": float(np.trace(report.B)),
            "trC": float(np.trace(report.C)),
        },
    )


def lur_generalized(report, tol=DEFAULT_TOL):
    """Entangled when ``sum |C_ii| > (trA + trB - 1) / 2``."""
    tol = _check_tol(tol)
    report = _report_of(report)
    _, margin = lur_margins(report.V)
    margin = float(margin)
    return Verdict(
        Decision(str(_entangled_if(margin, tol))),
        "lur_generalized",
        margin,
        tol,
        {
            "sum_abs_C_diag": float(np.abs(np.diag(report.C)).sum()),
            "bound": float((np.trace(report.A) + np.trace(report.B) - 1.0) / 2.0),
        },
    )


@dataclass(frozen=True, eq=False)
class GupReport:
    """A moment matrix and whether it is positive semidefinite within ``tol``."""

    matrix: np.ndarray
    min_eigenvalue: float
    is_psd: bool
    tol: float


def _gup_report(m, tol):
    lam = float(linalg.min_eigenvalue(m))
    return GupReport(m, lam, lam >= -tol, tol)


def gup_single(rho, tol=DEFAULT_TOL):
    """``V^S + (i/4) eps chi`` for one qubit; PSD for every valid state."""
    tol = _check_tol(tol)
    rho = check_density_matrix(rho, dims=(2,))
    v, chi = covariance_single_values(rho, Anticommutator.STANDARD)
    return _gup_report(v + commutator_skew(chi), tol)


def gup_two(rho, tol=DEFAULT_TOL):
    tol = _check_tol(tol)
    return _gup_report(gup_matrices(_two_qubit(rho)), tol)


def gup_pt(rho, tol=DEFAULT_TOL):
    """Entangled when the moment matrix of ``rho^T2`` has a negative eigenvalue."""
    tol = _check_tol(tol)
    pt = linalg.partial_transpose_second(_two_qubit(rho))
    m = gup_matrices(pt)
    lam = float(linalg.min_eigenvalue(m))
    margin = -lam
    return Verdict(
        Decision(str(_entangled_if(margin, tol))),
        "gup_pt",
        margin,
        tol,
        {"min_eigenvalue": lam},
    )


@dataclass(frozen=True)
class CriteriaReport:
    verdicts: tuple
    oracle: Verdict

    def __iter__(self):
        return iter(self.verdicts + (self.oracle,))

    def by_name(self, name):
        for v in self:
            if v.criterion == name:
                return v
        raise KeyError(name)


def run_all(rho, tol=DEFAULT_TOL, check=True):
    """Every criterion in order, then the oracle.

    With ``check=True`` a criterion that contradicts the oracle raises
    :class:`ConsistencyError`; this is a test oracle, not a recoverable state.
    """
    rho = _two_qubit(rho)
    cov = covariance_two(rho)
    verdicts = (
        negativity_criterion(WignerGrid(wigner_values(rho)), tol),
        dual_nonnegativity(rho, tol),
        lur_trace(cov, tol),
        lur_generalized(cov, tol),
        gup_pt(rho, tol),
    )
    oracle = ppt_oracle(rho, tol)
    report = CriteriaReport(verdicts, oracle)
    if check:
        bad = [v for v in verdicts if _contradicts(v.decision.value, oracle.decision.value)]
        if bad:
            names = ", ".join(f"{v.criterion}={v.decision}" for v in bad)
            raise ConsistencyError(
                f"{names} contradicts ppt_oracle={oracle.decision}", bad + [oracle]
            )
    return report

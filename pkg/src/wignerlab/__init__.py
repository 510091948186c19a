"""Discrete Wigner functions of one and two qubits and entanglement tests
built on them, cross-checked against the partial-transpose eigenvalue."""

__version__ = "0.1.0"

from .covariance import Anticommutator, CovarianceReport, covariance_single, covariance_two
from .criteria import (
    CRITERIA,
    Decision,
    Verdict,
    dual_nonnegativity,
    evaluate_batch,
    gup_pt,
    gup_single,
    gup_two,
    lur_generalized,
    lur_trace,
    negativity_criterion,
    ppt_oracle,
    run_all,
    wigner_pt,
    witness_overlap,
)
from .estimators import CovarianceTransformer, EntanglementDetector, WignerTransformer
from .exceptions import (
    ConsistencyError,
    ConvergenceError,
    InvalidGridError,
    InvalidInputError,
    InvalidStateError,
    StateSpecError,
    WignerLabError,
)
from .phase_space import (
    CharGrid,
    WignerGrid,
    char_from_wigner,
    char_of,
    density_of,
    purity,
    striations,
    translate,
    wf_inner,
    wigner_from_char,
    wigner_of,
)
from .states import DensityMatrix, bell, coherent, load_state, parse_state, werner

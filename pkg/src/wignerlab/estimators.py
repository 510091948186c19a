"""scikit-learn compatible wrappers.

``X`` is always a stack of density matrices with shape ``(n_samples, d, d)``
(``d`` = 2 or 4). The transformers are stateless apart from recording the
input dimension, so ``fit`` only validates.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import criteria, linalg
from .covariance import Anticommutator, covariance_values
from .exceptions import InvalidInputError
from .phase_space import char_values, density_values, wigner_from_char_values, wigner_values
from .validation import check_density_batch

__all__ = ["CovarianceTransformer", "EntanglementDetector", "WignerTransformer"]

_REPRESENTATIONS = ("wigner", "wigner_pt", "characteristic")


class WignerTransformer(TransformerMixin, BaseEstimator):
    """Map density matrices to flattened phase-space grids.

    Parameters
    ----------
    representation : {"wigner", "wigner_pt", "characteristic"}
        ``wigner_pt`` gives the Wigner grid of the partial transpose on the
        second qubit (two qubits only).
    psd_tol : float
        Tolerance on the minimum eigenvalue when validating input states.

    Features follow the flat grid order ``8*q1 + 4*q2 + 2*p1 + p2`` (or
    ``2*q + p`` for one qubit).
    """

    def __init__(self, representation="wigner", psd_tol=1e-9):
        self.representation = representation
        self.psd_tol = psd_tol

    def _check_params(self):
        if self.representation not in _REPRESENTATIONS:
            raise InvalidInputError(
                f"representation must be one of {_REPRESENTATIONS}, got {self.representation!r}"
            )

    def fit(self, X, y=None):
        self._check_params()
        X = check_density_batch(X, psd_tol=self.psd_tol)
        if self.representation == "wigner_pt" and X.shape[-1] != 4:
            raise InvalidInputError("wigner_pt needs two-qubit states")
        self.dim_ = X.shape[-1]
        self.n_qubits_ = 1 if self.dim_ == 2 else 2
        self.n_features_in_ = self.dim_ * self.dim_
        return self

    def transform(self, X):
        check_is_fitted(self, "dim_")
        X = check_density_batch(X, dims=(self.dim_,), psd_tol=self.psd_tol)
        if self.representation == "wigner":
            grids = wigner_values(X)
        elif self.representation == "wigner_pt":
            grids = wigner_values(linalg.partial_transpose_second(X))
        else:
            grids = char_values(X)
        return grids.reshape(len(X), -1)

    def inverse_transform(self, Xt):
        """Rebuild density matrices from ``wigner`` or ``characteristic`` features."""
        check_is_fitted(self, "dim_")
        if self.representation == "wigner_pt":
            raise InvalidInputError("wigner_pt features cannot be inverted to rho directly")
        Xt = np.asarray(Xt, dtype=float)
        n = self.n_qubits_
        if Xt.ndim != 2 or Xt.shape[1] != 4**n:
            raise InvalidInputError(f"expected shape (n, {4**n}), got {Xt.shape}")
        grids = Xt.reshape((-1,) + (2,) * (2 * n))
        if self.representation == "characteristic":
            grids = wigner_from_char_values(grids, n)
        return density_values(grids, n)


class CovarianceTransformer(TransformerMixin, BaseEstimator):
    """Flattened 6x6 axis-operator covariance matrices of two-qubit states.

    With ``include_chi=True`` the six single-qubit Pauli expectations are
    appended, giving 42 features.
    """

    def __init__(self, kind="discrete", include_chi=False, psd_tol=1e-9):
        self.kind = kind
        self.include_chi = include_chi
        self.psd_tol = psd_tol

    def fit(self, X, y=None):
        Anticommutator(self.kind)
        check_density_batch(X, dims=(4,), psd_tol=self.psd_tol)
        self.n_features_in_ = 16
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_density_batch(X, dims=(4,), psd_tol=self.psd_tol)
        v, chi1, chi2 = covariance_values(X, self.kind)
        feats = v.reshape(len(X), 36)
        if self.include_chi:
            feats = np.hstack([feats, chi1, chi2])
        return feats


class EntanglementDetector(ClassifierMixin, BaseEstimator):
    """Label two-qubit states as entangled, separable or inconclusive.

    Parameters
    ----------
    criterion : str
        One of ``"ppt_oracle"``, ``"negativity"``, ``"dual_nonnegativity"``,
        ``"lur_trace"``, ``"lur_generalized"`` or ``"gup_pt"``.
    tol : float
        Margin tolerance passed to the criterion.

    No learning happens in ``fit``; the criteria are fixed rules. ``score``
    (from :class:`~sklearn.base.ClassifierMixin`) compares predicted labels
    against ground-truth strings.
    """

    _CHOICES = criteria.CRITERIA + ("ppt_oracle",)

    def __init__(self, criterion="ppt_oracle", tol=criteria.DEFAULT_TOL):
        self.criterion = criterion
        self.tol = tol

    def fit(self, X, y=None):
        if self.criterion not in self._CHOICES:
            raise InvalidInputError(
                f"criterion must be one of {self._CHOICES}, got {self.criterion!r}"
            )
        check_density_batch(X, dims=(4,))
        self.classes_ = np.array([d.value for d in criteria.Decision])
        return self

    def _evaluate(self, X):
        check_is_fitted(self, "classes_")
        return criteria.evaluate_batch(X, tol=self.tol)

    def predict(self, X):
        return self._evaluate(X)[self.criterion]

    def decision_function(self, X):
        """Signed margins; see :class:`wignerlab.criteria.Verdict`."""
        return self._evaluate(X)[f"{self.criterion}_margin"]


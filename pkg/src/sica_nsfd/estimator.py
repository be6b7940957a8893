"""scikit-learn style wrapper around the NSFD scheme.

``SICATransformer`` maps a batch of states (one row of ``S, I, C, A`` per
sample) to the states reached after ``n_steps`` NSFD steps, so it can sit in
a ``Pipeline`` or be cloned/grid-searched like any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import InvalidParameters, NoEndemicEquilibrium
from .model import ModelParams, derived_constants, dfe, endemic_equilibrium
from .nsfd import Denominator, psi, simulate
from .presets import CAPE_VERDE


class SICATransformer(TransformerMixin, BaseEstimator):
    """Advance SICA states with the nonstandard finite-difference scheme.

    Parameters
    ----------
    Lambda, mu, beta, phi, rho, alpha, omega, d, eta_C, eta_A : float
        Model rates; defaults are the Cape Verde case-study values.
    h : float, default=1.0
        Step size in years.
    n_steps : int, default=1
        Number of steps applied by :meth:`transform`.
    denominator : {"mickens", "identity"}, default="mickens"

    Attributes
    ----------
    params_ : ModelParams
    psi_ : float
        Denominator-function value used per step.
    r0_ : float
    dfe_ : ndarray of shape (4,)
    endemic_ : ndarray of shape (4,) or None
        ``None`` when ``r0_ <= 1``.
    """

    def __init__(self, Lambda=CAPE_VERDE.Lambda, mu=CAPE_VERDE.mu, beta=CAPE_VERDE.beta,
                 phi=CAPE_VERDE.phi, rho=CAPE_VERDE.rho, alpha=CAPE_VERDE.alpha,
                 omega=CAPE_VERDE.omega, d=CAPE_VERDE.d, eta_C=CAPE_VERDE.eta_C,
                 eta_A=CAPE_VERDE.eta_A, h=1.0, n_steps=1, denominator="mickens"):
        self.Lambda = Lambda
        self.mu = mu
        self.beta = beta
        self.phi = phi
        self.rho = rho
        self.alpha = alpha
        self.omega = omega
        self.d = d
        self.eta_C = eta_C
        self.eta_A = eta_A
        self.h = h
        self.n_steps = n_steps
        self.denominator = denominator

    def _model_params(self) -> ModelParams:
        return ModelParams(self.Lambda, self.mu, self.beta, self.phi, self.rho,
                           self.alpha, self.omega, self.d, self.eta_C, self.eta_A)

    def fit(self, X=None, y=None):
        """Validate hyperparameters and precompute R0 and equilibria.

        ``X`` is only checked for shape; nothing is learned from it.
        """
        if X is not None:
            self._check_X(X, reset=True)
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise InvalidParameters(f"n_steps must be a nonnegative integer, got {self.n_steps!r}")
        self.params_ = self._model_params()
        self.psi_ = psi(Denominator(self.denominator), self.params_.mu, self.h)
        self.r0_ = derived_constants(self.params_).r0
        self.dfe_ = dfe(self.params_).state.as_array()
        try:
            self.endemic_ = endemic_equilibrium(self.params_).state.as_array()
        except NoEndemicEquilibrium:
            self.endemic_ = None
        return self

    def _check_X(self, X, reset=False):
        X = check_array(X, dtype=np.float64, ensure_all_finite=True)
        if X.shape[1] != 4:
            raise ValueError(f"expected 4 columns (S, I, C, A), got {X.shape[1]}")
        if np.any(X < 0):
            raise ValueError("compartment values must be nonnegative")
        if reset:
            self.n_features_in_ = 4
        return X

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = self._check_X(X)
        out = np.empty_like(X)
        for i, row in enumerate(X):
            out[i] = simulate(self.params_, row, self.h, int(self.n_steps), self.denominator).final
        return out

    def trajectories(self, X) -> list:
        """Full :class:`~sica_nsfd.nsfd.Trajectory` for every row of ``X``."""
        check_is_fitted(self, "params_")
        X = self._check_X(X)
        return [simulate(self.params_, row, self.h, int(self.n_steps), self.denominator)
                for row in X]

    def get_feature_names_out(self, input_features=None):
        return np.array(["S", "I", "C", "A"], dtype=object)

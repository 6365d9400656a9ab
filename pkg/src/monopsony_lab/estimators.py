"""scikit-learn compatible wrappers.

:class:`FirmEconomy` treats productivities as the feature column and firm
decisions as the transform output, so it can be cloned, grid-searched over
policy parameters, and dropped into pipelines.  :class:`FatPetRegressor`
fits the FAT-PET meta-regression with standard errors as the feature.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .core_model import DetectionTech, LaborSupply, Policy, ProductionTech
from .economy import simulate_economy
from .exceptions import ModelDomainError
from .firm_solver import Status
from .metareg import StudyEstimate, fat_pet


def _productivity_column(X):
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single productivity column, got {X.shape[1]} columns")
        X = X[:, 0]
    if np.any(X <= 0):
        raise ModelDomainError("productivities must be > 0")
    return X


class FirmEconomy(TransformerMixin, BaseEstimator):
    """Heterogeneous-firm economy with monopsony, minimum wage and informality.

    ``fit`` solves every firm in ``X`` (one productivity per row) and stores
    the aggregate outcome.  ``transform`` returns one row per firm:
    ``[is_formal, employment, wage, profit]``.  ``predict`` returns the
    formality indicator alone.
    """

    output_columns = ("is_formal", "employment", "wage", "profit")

    def __init__(
        self,
        alpha=0.5,
        b=1.0,
        eta=1.4,
        tau=0.0,
        c_f=0.0,
        w_min=0.0,
        phi=0.0,
        delta=0.0,
        l_bar=1.0,
        gamma=1.0,
        n_jobs=1,
    ):
        self.alpha = alpha
        self.b = b
        self.eta = eta
        self.tau = tau
        self.c_f = c_f
        self.w_min = w_min
        self.phi = phi
        self.delta = delta
        self.l_bar = l_bar
        self.gamma = gamma
        self.n_jobs = n_jobs

    def _model(self):
        tech = ProductionTech(self.alpha)
        supply = LaborSupply(self.b, self.eta)
        policy = Policy(
            tau=self.tau, c_f=self.c_f, w_min=self.w_min, phi=self.phi, delta=self.delta,
            detection=DetectionTech(self.l_bar, self.gamma),
        )
        return tech, supply, policy

    def fit(self, X, y=None):
        a = _productivity_column(X)
        self.tech_, self.supply_, self.policy_ = self._model()
        self.aggregate_, self.records_ = simulate_economy(
            self.tech_, self.supply_, self.policy_, a, n_jobs=self.n_jobs
        )
        self.threshold_ = self.aggregate_.threshold_a
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "aggregate_")
        a = _productivity_column(X)
        _, records = simulate_economy(self.tech_, self.supply_, self.policy_, a, n_jobs=self.n_jobs)
        return np.array(
            [
                [float(r.decision.status is Status.FORMAL), r.decision.employment, r.decision.wage, r.decision.profit]
                for r in records
            ]
        )

    def predict(self, X):
        return self.transform(X)[:, 0].astype(int)

    def get_feature_names_out(self, input_features=None):
        return np.array(self.output_columns, dtype=object)


class FatPetRegressor(RegressorMixin, BaseEstimator):
    """FAT-PET meta-regression as a regressor.

    ``X`` holds one standard error per study and ``y`` the reported effects.
    After fitting, ``pet_`` (``intercept_``) is the bias-corrected effect and
    ``fat_`` (``coef_[0]``) the funnel-asymmetry slope; ``predict`` returns the
    effect expected at a given standard error.
    """

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        if X.shape[1] != 1:
            raise ValueError(f"expected a single standard-error column, got {X.shape[1]} columns")
        studies = [StudyEstimate(e, s) for e, s in zip(y, X[:, 0])]
        res = fat_pet(studies)
        self.pet_, self.fat_ = res.pet, res.fat
        self.se_pet_, self.se_fat_ = res.se_pet, res.se_fat
        self.intercept_ = res.pet
        self.coef_ = np.array([res.fat])
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        return self.intercept_ + X @ self.coef_

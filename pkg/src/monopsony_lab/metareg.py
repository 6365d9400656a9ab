"""Publication-bias toolkit: funnel data, pooling and FAT-PET meta-regression.

FAT-PET regresses reported effects on their standard errors with weights
``1/se**2``.  The intercept (PET) estimates the effect a study of infinite
precision would report; the slope (FAT) measures funnel asymmetry.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ._validation import check_finite, check_interval, check_positive
from .exceptions import CensoringTooRestrictive, ModelDomainError, SingularDesign
from .rng import SplitMix64

__all__ = [
    "StudyEstimate",
    "FatPetResult",
    "CensorKind",
    "CensorRule",
    "WlsFit",
    "wls_fit",
    "fat_pet",
    "fat_pet_precision_form",
    "naive_pooled_mean",
    "funnel_points",
    "simulate_studies",
]

SIGNIFICANCE_Z = 1.96
MAX_ATTEMPTS_PER_STUDY = 1000


@dataclass(frozen=True)
class StudyEstimate:
    effect: float
    se: float

    def __post_init__(self):
        object.__setattr__(self, "effect", check_finite("effect", self.effect))
        object.__setattr__(self, "se", check_positive("se", self.se))

    @property
    def precision(self) -> float:
        return 1.0 / self.se

    @property
    def t_stat(self) -> float:
        return self.effect / self.se


@dataclass(frozen=True)
class FatPetResult:
    pet: float
    fat: float
    se_pet: float
    se_fat: float
    n: int


class CensorKind(str, enum.Enum):
    NONE = "none"
    TWO_SIDED_SIG = "two_sided_sig"
    NEGATIVE_SIG = "negative_sig"


@dataclass(frozen=True)
class CensorRule:
    """Selective-publication rule.

    Estimates that fail the rule are still published with probability
    ``p_keep``.
    """

    kind: CensorKind = CensorKind.NONE
    p_keep: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CensorKind(self.kind))
        object.__setattr__(self, "p_keep", check_interval("p_keep", self.p_keep, 0.0, 1.0))

    def passes(self, effect: float, se: float) -> bool:
        if self.kind is CensorKind.NONE:
            return True
        significant = abs(effect / se) >= SIGNIFICANCE_Z
        if self.kind is CensorKind.TWO_SIDED_SIG:
            return significant
        return effect < 0.0 and significant


@dataclass(frozen=True)
class WlsFit:
    intercept: float
    slope: float
    se_intercept: float
    se_slope: float

    def __iter__(self):
        return iter((self.intercept, self.slope, self.se_intercept, self.se_slope))


def wls_fit(xs, ys, weights=None) -> WlsFit:
    """Two-parameter weighted least squares, ``y = b0 + b1 * x``.

    Coefficient standard errors use the weighted residual variance with
    ``n - 2`` degrees of freedom (``n`` counts positive weights).
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    if not (x.ndim == y.ndim == w.ndim == 1) or not (len(x) == len(y) == len(w)):
        raise ModelDomainError("xs, ys and weights must be 1-d and of equal length")
    if len(x) < 3:
        raise ModelDomainError(f"need at least 3 observations, got {len(x)}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ModelDomainError("weights must be finite and >= 0")
    w_sum = w.sum()
    if w_sum <= 0:
        raise ModelDomainError("weights are all zero")

    x_bar = np.dot(w, x) / w_sum
    y_bar = np.dot(w, y) / w_sum
    dx = x - x_bar
    sxx = np.dot(w, dx * dx)
    if sxx <= 1e-14 * np.dot(w, x * x) or sxx == 0.0:
        raise SingularDesign("regressor has no variation; slope is not identified")
    slope = np.dot(w, dx * (y - y_bar)) / sxx
    intercept = y_bar - slope * x_bar

    n_eff = int(np.count_nonzero(w))
    dof = n_eff - 2
    resid = y - intercept - slope * x
    if dof > 0:
        s2 = np.dot(w, resid * resid) / dof
        se_slope = math.sqrt(s2 / sxx)
        se_intercept = math.sqrt(s2 * (1.0 / w_sum + x_bar * x_bar / sxx))
    else:
        se_slope = se_intercept = math.nan
    return WlsFit(float(intercept), float(slope), se_intercept, se_slope)


def _check_studies(studies: Sequence[StudyEstimate]):
    if len(studies) < 3:
        raise ModelDomainError(f"FAT-PET needs at least 3 studies, got {len(studies)}")
    se = np.array([s.se for s in studies])
    if np.all(se == se[0]):
        raise SingularDesign("all standard errors are equal; the FAT slope is unidentified")
    return np.array([s.effect for s in studies]), se


def fat_pet(studies: Sequence[StudyEstimate]) -> FatPetResult:
    """Precision-weighted regression of effects on standard errors."""
    effect, se = _check_studies(studies)
    fit = wls_fit(se, effect, 1.0 / se**2)
    return FatPetResult(fit.intercept, fit.slope, fit.se_intercept, fit.se_slope, len(studies))


def fat_pet_precision_form(studies: Sequence[StudyEstimate]) -> FatPetResult:
    """Same estimator written as OLS of t-statistics on precision.

    ``t = fat + pet * (1/se)``, so PET is the slope and FAT the intercept.
    """
    effect, se = _check_studies(studies)
    fit = wls_fit(1.0 / se, effect / se)
    return FatPetResult(fit.slope, fit.intercept, fit.se_slope, fit.se_intercept, len(studies))


def naive_pooled_mean(studies: Sequence[StudyEstimate]) -> float:
    """Inverse-variance weighted mean of the published effects."""
    if not studies:
        raise ModelDomainError("cannot pool an empty set of studies")
    w = np.array([1.0 / s.se**2 for s in studies])
    e = np.array([s.effect for s in studies])
    return float(np.dot(w, e) / w.sum())


def funnel_points(studies: Sequence[StudyEstimate]) -> List[tuple]:
    return [(s.effect, 1.0 / s.se) for s in studies]


def simulate_studies(
    true_effect: float,
    n: int,
    se_lo: float,
    se_hi: float,
    rule: CensorRule = CensorRule(),
    seed: int = 0,
) -> List[StudyEstimate]:
    """Draw a censored literature of ``n`` published studies.

    Each attempt draws ``se ~ U[se_lo, se_hi)`` and then
    ``effect ~ N(true_effect, se**2)``.  Estimates failing ``rule`` consume one
    more uniform to decide publication with probability ``rule.p_keep``.
    """
    if not 0.0 < se_lo < se_hi:
        raise ModelDomainError(f"need 0 < se_lo < se_hi, got {se_lo!r}, {se_hi!r}")
    if n < 1:
        raise ModelDomainError(f"n must be >= 1, got {n!r}")
    rng = SplitMix64(seed)
    out: List[StudyEstimate] = []
    budget = MAX_ATTEMPTS_PER_STUDY * n
    attempts = 0
    while len(out) < n:
        if attempts >= budget:
            raise CensoringTooRestrictive(
                f"published {len(out)} of {n} studies after {attempts} attempts"
            )
        attempts += 1
        se = se_lo + (se_hi - se_lo) * rng.uniform()
        effect = true_effect + se * rng.normal()
        if rule.passes(effect, se) or rng.uniform() < rule.p_keep:
            out.append(StudyEstimate(effect, se))
    return out

"""Functional forms and primitive parameters of the firm environment.

Production is Cobb-Douglas in labor, ``q = a * l**alpha``.  Each firm faces an
isoelastic labor supply curve ``w(l) = b * l**(1/eta)`` so the supply
elasticity is the constant ``eta``.  An informal firm is detected with
probability ``min(1, (l / l_bar)**gamma)``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

from ._validation import check_interval, check_nonnegative, check_positive
from .exceptions import ModelDomainError, UsageError

__all__ = [
    "ProductionTech",
    "LaborSupply",
    "DetectionTech",
    "Policy",
    "POLICY_PARAMETERS",
    "production_output",
    "marginal_product",
    "supply_wage",
    "supply_employment",
    "detection_prob",
    "detection_prob_slope",
]


@dataclass(frozen=True)
class ProductionTech:
    alpha: float = 0.5

    def __post_init__(self):
        object.__setattr__(
            self,
            "alpha",
            check_interval("alpha", self.alpha, 0.0, 1.0, closed_low=False, closed_high=False),
        )


@dataclass(frozen=True)
class LaborSupply:
    b: float = 1.0
    eta: float = 1.4

    def __post_init__(self):
        object.__setattr__(self, "b", check_positive("b", self.b))
        object.__setattr__(self, "eta", check_positive("eta", self.eta))


@dataclass(frozen=True)
class DetectionTech:
    l_bar: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "l_bar", check_positive("l_bar", self.l_bar))
        gamma = check_positive("gamma", self.gamma)
        if gamma < 1.0:
            raise ModelDomainError(f"gamma must be >= 1, got {gamma!r}", "gamma")
        object.__setattr__(self, "gamma", gamma)


# parameters that policy_sweep and Policy.with_param accept
POLICY_PARAMETERS = ("tau", "c_f", "w_min", "phi", "l_bar", "gamma", "delta")


@dataclass(frozen=True)
class Policy:
    """Regulatory environment faced by every firm.

    ``w_min == 0`` means there is no minimum wage.  ``delta`` is the share of
    productivity lost by operating informally.
    """

    tau: float = 0.0
    c_f: float = 0.0
    w_min: float = 0.0
    phi: float = 0.0
    delta: float = 0.0
    detection: DetectionTech = field(default_factory=DetectionTech)

    def __post_init__(self):
        for name in ("tau", "c_f", "w_min", "phi"):
            object.__setattr__(self, name, check_nonnegative(name, getattr(self, name)))
        object.__setattr__(
            self, "delta", check_interval("delta", self.delta, 0.0, 1.0, closed_high=False)
        )
        if not isinstance(self.detection, DetectionTech):
            raise ModelDomainError("detection must be a DetectionTech", "detection")

    def with_param(self, name: str, value: float) -> "Policy":
        """Return a copy with one scalar parameter replaced.

        ``l_bar`` and ``gamma`` reach into the nested detection technology.
        """
        if name in ("l_bar", "gamma"):
            detection = dataclasses.replace(self.detection, **{name: value})
            return dataclasses.replace(self, detection=detection)
        if name not in POLICY_PARAMETERS:
            raise UsageError(f"unknown policy parameter {name!r}; expected one of {POLICY_PARAMETERS}")
        return dataclasses.replace(self, **{name: value})

    def get_param(self, name: str) -> float:
        if name in ("l_bar", "gamma"):
            return getattr(self.detection, name)
        if name not in POLICY_PARAMETERS:
            raise UsageError(f"unknown policy parameter {name!r}; expected one of {POLICY_PARAMETERS}")
        return getattr(self, name)


def production_output(tech: ProductionTech, a: float, l: float) -> float:
    if a < 0 or l < 0:
        raise ModelDomainError(f"productivity and employment must be >= 0, got a={a!r}, l={l!r}")
    if l == 0.0:
        return 0.0
    return a * l**tech.alpha


def marginal_product(tech: ProductionTech, a: float, l: float) -> float:
    """Marginal revenue product of labor, ``a * alpha * l**(alpha - 1)``."""
    if l <= 0:
        raise ModelDomainError(f"marginal product diverges at l={l!r}; need l > 0")
    if a < 0:
        raise ModelDomainError(f"productivity must be >= 0, got {a!r}")
    if math.isinf(l):
        return 0.0
    return a * tech.alpha * l ** (tech.alpha - 1.0)


def supply_wage(s: LaborSupply, l: float) -> float:
    """Wage needed to attract ``l`` worker-units."""
    if l < 0:
        raise ModelDomainError(f"employment must be >= 0, got {l!r}")
    if l == 0.0:
        return 0.0
    return s.b * l ** (1.0 / s.eta)


def supply_employment(s: LaborSupply, w: float) -> float:
    """Worker-units supplied at wage ``w``; inverse of :func:`supply_wage`.

    Returns ``inf`` when the result overflows (nearly flat supply curves).
    """
    if w < 0:
        raise ModelDomainError(f"wage must be >= 0, got {w!r}")
    if w == 0.0:
        return 0.0
    log_l = s.eta * math.log(w / s.b)
    if log_l > 709.0:
        return math.inf
    return math.exp(log_l)


def detection_prob(d: DetectionTech, l: float) -> float:
    if l < 0:
        raise ModelDomainError(f"employment must be >= 0, got {l!r}")
    if l >= d.l_bar:
        return 1.0
    return (l / d.l_bar) ** d.gamma


def detection_prob_slope(d: DetectionTech, l: float) -> float:
    """Right derivative of :func:`detection_prob`; zero above the cap."""
    if l >= d.l_bar:
        return 0.0
    if d.gamma == 1.0:
        return 1.0 / d.l_bar
    return d.gamma / d.l_bar * (l / d.l_bar) ** (d.gamma - 1.0)

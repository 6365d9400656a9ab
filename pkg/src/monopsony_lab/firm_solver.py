"""Single-firm profit maximization in each regulatory status.

The formal firm has a closed-form monopsony optimum.  A minimum wage above
the monopsony wage flattens the labor cost curve up to ``L_min`` and the
optimum lands in one of three regimes.  The informal firm pays no tax and
ignores the minimum wage but faces a size-dependent expected fine, which is
solved numerically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import ModelDomainError
from .core_model import (
    LaborSupply,
    Policy,
    ProductionTech,
    detection_prob,
    detection_prob_slope,
    marginal_product,
    production_output,
    supply_employment,
    supply_wage,
)
from .optimize import bisect_root, golden_section_max

__all__ = [
    "Status",
    "MinWageRegime",
    "FirmDecision",
    "formal_optimum_unconstrained",
    "formal_optimum",
    "informal_optimum",
    "profit_at",
    "competitive_optimum",
]

L_TOL = 1e-10


class Status(str, enum.Enum):
    FORMAL = "formal"
    INFORMAL = "informal"


class MinWageRegime(str, enum.Enum):
    NOT_BINDING = "not_binding"
    SUPPLY_CONSTRAINED = "supply_constrained"
    DEMAND_CONSTRAINED = "demand_constrained"


@dataclass(frozen=True)
class FirmDecision:
    """Optimal choice of one firm in one status.

    ``profit`` is expected profit for informal firms.  ``regime`` is only set
    for formal decisions and ``detection_prob`` only for informal ones.
    """

    status: Status
    employment: float
    wage: float
    profit: float
    regime: Optional[MinWageRegime] = None
    detection_prob: Optional[float] = None

    @property
    def wage_bill(self) -> float:
        return self.wage * self.employment


def _check_productivity(a):
    if not a > 0 or not math.isfinite(a):
        raise ModelDomainError(f"productivity must be finite and > 0, got {a!r}")


def _monopsony_employment(a, alpha, s: LaborSupply, tau):
    # solves a*alpha*L**(alpha-1) = (1+tau)*b*L**(1/eta)*(1+1/eta)
    inv_eta = 1.0 / s.eta
    ratio = a * alpha / ((1.0 + tau) * s.b * (1.0 + inv_eta))
    return ratio ** (1.0 / (inv_eta + 1.0 - alpha))


def formal_optimum_unconstrained(
    a: float, tech: ProductionTech, supply: LaborSupply, tau: float = 0.0
) -> FirmDecision:
    """Monopsony optimum with no minimum wage; profit is gross of ``c_f``."""
    _check_productivity(a)
    l_star = _monopsony_employment(a, tech.alpha, supply, tau)
    wage = supply_wage(supply, l_star)
    profit = production_output(tech, a, l_star) - (1.0 + tau) * wage * l_star
    return FirmDecision(Status.FORMAL, l_star, wage, profit, MinWageRegime.NOT_BINDING)


def formal_optimum(
    a: float, tech: ProductionTech, supply: LaborSupply, policy: Policy
) -> FirmDecision:
    """Formal optimum under the policy's tax, fixed cost and minimum wage."""
    base = formal_optimum_unconstrained(a, tech, supply, policy.tau)
    w_min = policy.w_min
    gross = 1.0 + policy.tau
    if w_min <= base.wage:
        return FirmDecision(
            Status.FORMAL, base.employment, base.wage, base.profit - policy.c_f,
            MinWageRegime.NOT_BINDING,
        )

    l_min = supply_employment(supply, w_min)
    if math.isfinite(l_min) and marginal_product(tech, a, l_min) >= gross * w_min:
        l, regime = l_min, MinWageRegime.SUPPLY_CONSTRAINED
    else:
        l = (a * tech.alpha / (gross * w_min)) ** (1.0 / (1.0 - tech.alpha))
        regime = MinWageRegime.DEMAND_CONSTRAINED
    profit = production_output(tech, a, l) - gross * w_min * l - policy.c_f
    return FirmDecision(Status.FORMAL, l, w_min, profit, regime)


def _informal_value(a_eff, tech, supply, policy, l):
    return (
        production_output(tech, a_eff, l)
        - supply_wage(supply, l) * l
        - detection_prob(policy.detection, l) * policy.phi
    )


def _informal_slope(a_eff, tech, supply, policy, l):
    # derivative of the informal objective below the detection cap
    return (
        marginal_product(tech, a_eff, l)
        - supply_wage(supply, l) * (1.0 + 1.0 / supply.eta)
        - detection_prob_slope(policy.detection, l) * policy.phi
    )


def informal_optimum(
    a: float, tech: ProductionTech, supply: LaborSupply, policy: Policy
) -> FirmDecision:
    """Expected-profit maximum of an informal firm.

    The objective is concave below the detection cap ``l_bar`` and equals the
    fine-free objective minus ``phi`` above it, so the global maximum is the
    better of the concave-branch maximum and the fine-free optimum (when
    that lies beyond the cap).
    """
    _check_productivity(a)
    a_eff = (1.0 - policy.delta) * a
    free = formal_optimum_unconstrained(a_eff, tech, supply, 0.0)
    l_hi = free.employment

    if policy.phi == 0.0:
        pd = detection_prob(policy.detection, l_hi)
        return FirmDecision(Status.INFORMAL, l_hi, free.wage, free.profit, detection_prob=pd)

    def value(l):
        return _informal_value(a_eff, tech, supply, policy, l)

    def slope(l):
        return _informal_slope(a_eff, tech, supply, policy, l)

    cap = min(policy.detection.l_bar, l_hi)
    l_in, v_in = golden_section_max(value, 0.0, cap, tol=L_TOL)
    if 0.0 < l_in < cap:
        # golden section resolves the argmax only to ~sqrt(eps); polish on the FOC
        for width in (1e-6, 1e-4, 1e-2):
            lo, hi = l_in * (1.0 - width), min(l_in * (1.0 + width), cap)
            if slope(lo) > 0.0 > slope(hi):
                l_root = bisect_root(slope, lo, hi, tol=1e-15)
                v_root = value(l_root)
                if v_root >= v_in:
                    l_in, v_in = l_root, v_root
                break

    l_opt, v_opt = l_in, v_in
    if l_hi > policy.detection.l_bar:
        v_cap = value(l_hi)
        if v_cap > v_opt:
            l_opt, v_opt = l_hi, v_cap

    return FirmDecision(
        Status.INFORMAL,
        l_opt,
        supply_wage(supply, l_opt),
        v_opt,
        detection_prob=detection_prob(policy.detection, l_opt),
    )


def profit_at(a, tech: ProductionTech, supply: LaborSupply, policy: Policy, status, l):
    """Objective of ``status`` evaluated at employment ``l``.

    ``l`` may be a scalar or a numpy array; formal labor cost uses the kinked
    schedule ``(1+tau) * max(w(l), w_min) * l``.
    """
    status = Status(status)
    arr = np.asarray(l, dtype=float)
    if np.any(arr < 0):
        raise ModelDomainError("employment must be >= 0")
    out_per = arr**tech.alpha
    wage = supply.b * arr ** (1.0 / supply.eta)
    if status is Status.FORMAL:
        cost = (1.0 + policy.tau) * np.maximum(wage, policy.w_min) * arr
        res = a * out_per - cost - policy.c_f
    else:
        d = policy.detection
        pd = np.minimum(1.0, (arr / d.l_bar) ** d.gamma)
        res = (1.0 - policy.delta) * a * out_per - wage * arr - pd * policy.phi
    if np.ndim(res) == 0:
        return float(res)
    return res


def competitive_optimum(a: float, tech: ProductionTech, supply: LaborSupply, tau: float = 0.0):
    """Employment and wage where ``a*f'(L) = (1+tau)*w(L)``.

    This is where employment peaks as a function of the minimum wage.
    """
    _check_productivity(a)
    inv_eta = 1.0 / supply.eta
    l_c = (a * tech.alpha / ((1.0 + tau) * supply.b)) ** (1.0 / (inv_eta + 1.0 - tech.alpha))
    return l_c, supply_wage(supply, l_c)

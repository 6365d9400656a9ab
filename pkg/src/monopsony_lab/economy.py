"""Formality choice, productivity threshold, taxonomy and aggregation.

A population is a deterministic lognormal quantile grid of productivities,
each grid firm carrying weight ``1/k``.  Aggregates are therefore averages per
firm and converge as ``k`` grows.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import List, Optional, Sequence

import numpy as np

from ._validation import check_finite, check_positive
from .core_model import (
    POLICY_PARAMETERS,
    LaborSupply,
    Policy,
    ProductionTech,
    detection_prob,
    production_output,
)
from .exceptions import (
    ModelDomainError,
    NoAffectedWorkers,
    NonMonotoneCrossing,
    UndefinedOwe,
    UsageError,
)
from .firm_solver import FirmDecision, Status, formal_optimum, informal_optimum

__all__ = [
    "PopulationSpec",
    "FirmTaxonomy",
    "ThresholdKind",
    "Threshold",
    "FirmRecord",
    "AggregateOutcome",
    "OweResult",
    "choose_status",
    "profit_gap",
    "find_threshold",
    "classify_firm",
    "build_population",
    "simulate_economy",
    "compute_owe",
    "policy_sweep",
]

THRESHOLD_SCAN_POINTS = 64
THRESHOLD_REL_TOL = 1e-8


@dataclass(frozen=True)
class PopulationSpec:
    mu: float = 0.0
    sigma: float = 1.0
    k: int = 256

    def __post_init__(self):
        object.__setattr__(self, "mu", check_finite("mu", self.mu))
        object.__setattr__(self, "sigma", check_positive("sigma", self.sigma))
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ModelDomainError(f"k must be an integer >= 1, got {self.k!r}", "k")
        object.__setattr__(self, "k", int(self.k))


class FirmTaxonomy(str, enum.Enum):
    FORMAL_CHOOSER = "formal_chooser"
    DE_SOTO = "de_soto"
    PARASITE = "parasite"
    SURVIVAL = "survival"


class ThresholdKind(str, enum.Enum):
    INTERIOR = "interior"
    ALL_FORMAL = "all_formal"
    ALL_INFORMAL = "all_informal"
    NON_MONOTONE = "non_monotone"


@dataclass(frozen=True)
class Threshold:
    """Productivity cutoff; ``value`` is NaN unless ``kind`` is INTERIOR."""

    kind: ThresholdKind
    value: float = math.nan
    bracket: Optional[tuple] = None

    @property
    def is_interior(self) -> bool:
        return self.kind is ThresholdKind.INTERIOR


@dataclass(frozen=True)
class FirmRecord:
    a: float
    decision: FirmDecision
    taxonomy: FirmTaxonomy
    exited: bool = False


@dataclass(frozen=True)
class AggregateOutcome:
    total_employment: float
    formal_employment: float
    informal_employment: float
    formal_firm_share: float
    informal_employment_share: float
    output: float
    avg_wage: float
    labor_productivity: float
    gov_revenue: float
    threshold_a: float
    threshold_kind: str

    def as_dict(self):
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class OweResult:
    owe: float
    pct_demployment: float
    pct_dwage: float
    affected_employment_share: float

    def as_dict(self):
        return dataclasses.asdict(self)


def _pick(formal: FirmDecision, informal: FirmDecision):
    """Status choice and exit flag; ties favor formality."""
    if formal.profit < 0.0 and informal.profit < 0.0:
        return FirmDecision(Status.INFORMAL, 0.0, 0.0, 0.0, detection_prob=0.0), True
    if formal.profit >= informal.profit:
        return formal, False
    return informal, False


def choose_status(a: float, tech: ProductionTech, supply: LaborSupply, policy: Policy) -> FirmDecision:
    """Best of the formal and informal optima.

    A firm whose best profit is negative in both statuses exits and is
    reported as informal with zero employment and zero profit.
    """
    decision, _ = _pick(
        formal_optimum(a, tech, supply, policy), informal_optimum(a, tech, supply, policy)
    )
    return decision


def profit_gap(a, tech, supply, policy) -> float:
    """Maximal formal profit minus maximal expected informal profit."""
    return formal_optimum(a, tech, supply, policy).profit - informal_optimum(a, tech, supply, policy).profit


def find_threshold(
    tech: ProductionTech,
    supply: LaborSupply,
    policy: Policy,
    a_lo: float,
    a_hi: float,
    scan_points: int = THRESHOLD_SCAN_POINTS,
) -> Threshold:
    """Productivity above which firms choose formality.

    The profit gap is scanned on a log grid first; bisection only runs when
    the scan shows one upward crossing.  Any other sign pattern raises
    :class:`NonMonotoneCrossing` listing every bracket.
    """
    if not 0.0 < a_lo < a_hi:
        raise ModelDomainError(f"need 0 < a_lo < a_hi, got a_lo={a_lo!r}, a_hi={a_hi!r}")
    grid = np.geomspace(a_lo, a_hi, scan_points)
    formal = [profit_gap(float(a), tech, supply, policy) >= 0.0 for a in grid]
    if all(formal):
        return Threshold(ThresholdKind.ALL_FORMAL)
    if not any(formal):
        return Threshold(ThresholdKind.ALL_INFORMAL)

    changes = [i for i in range(scan_points - 1) if formal[i] != formal[i + 1]]
    brackets = [(grid[i], grid[i + 1]) for i in changes]
    if len(changes) != 1:
        raise NonMonotoneCrossing(brackets)
    i = changes[0]
    if formal[i]:
        raise NonMonotoneCrossing(
            brackets,
            f"profit gap crosses zero downward near [{grid[i]:.6g}, {grid[i + 1]:.6g}]: "
            "formality loses ground as productivity rises",
        )

    lo, hi = float(grid[i]), float(grid[i + 1])
    while hi - lo > THRESHOLD_REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        if profit_gap(mid, tech, supply, policy) >= 0.0:
            hi = mid
        else:
            lo = mid
    return Threshold(ThresholdKind.INTERIOR, 0.5 * (lo + hi), (lo, hi))


def _classify(a, tech, supply, policy, decision, exited):
    if decision.status is Status.FORMAL:
        return FirmTaxonomy.FORMAL_CHOOSER
    if exited:
        return FirmTaxonomy.SURVIVAL
    no_entry_cost = dataclasses.replace(policy, c_f=0.0)
    formal0 = formal_optimum(a, tech, supply, no_entry_cost)
    if formal0.profit < 0.0:
        return FirmTaxonomy.SURVIVAL
    if formal0.profit >= informal_optimum(a, tech, supply, no_entry_cost).profit:
        return FirmTaxonomy.DE_SOTO
    return FirmTaxonomy.PARASITE


def classify_firm(a: float, tech: ProductionTech, supply: LaborSupply, policy: Policy) -> FirmTaxonomy:
    """Label a firm by the informality view it fits.

    Informal firms are checked in priority order: survival (formal profit is
    negative even without the fixed cost), De Soto (removing the fixed cost
    makes formality optimal), then parasite.
    """
    decision, exited = _pick(
        formal_optimum(a, tech, supply, policy), informal_optimum(a, tech, supply, policy)
    )
    return _classify(a, tech, supply, policy, decision, exited)


def build_population(spec: PopulationSpec) -> np.ndarray:
    """Lognormal quantile grid ``exp(mu + sigma * z_j)``, z_j at ``(j - 0.5)/k``."""
    std = NormalDist()
    k = spec.k
    z = [std.inv_cdf((j - 0.5) / k) for j in range(1, k + 1)]
    return np.array([math.exp(spec.mu + spec.sigma * zj) for zj in z])


def _solve_firm(args):
    a, tech, supply, policy = args
    decision, exited = _pick(
        formal_optimum(a, tech, supply, policy), informal_optimum(a, tech, supply, policy)
    )
    return FirmRecord(a, decision, _classify(a, tech, supply, policy, decision, exited), exited)


def solve_firms(tech, supply, policy, population, n_jobs: int = 1) -> List[FirmRecord]:
    """Per-firm decisions in population order.

    ``n_jobs > 1`` fans the solves out to worker processes; results come back
    in index order either way.
    """
    tasks = [(float(a), tech, supply, policy) for a in population]
    if n_jobs is None or n_jobs <= 1 or len(tasks) < 2:
        return [_solve_firm(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_solve_firm, tasks, chunksize=max(1, len(tasks) // (4 * n_jobs))))


def _population_threshold(tech, supply, policy, population, records) -> Threshold:
    if all(r.decision.status is Status.FORMAL for r in records):
        return Threshold(ThresholdKind.ALL_FORMAL)
    if all(r.decision.status is Status.INFORMAL for r in records):
        return Threshold(ThresholdKind.ALL_INFORMAL)
    try:
        return find_threshold(tech, supply, policy, float(population[0]), float(population[-1]))
    except NonMonotoneCrossing as exc:
        return Threshold(ThresholdKind.NON_MONOTONE, bracket=tuple(exc.brackets))


def aggregate(tech, supply, policy, records: Sequence[FirmRecord], threshold: Threshold) -> AggregateOutcome:
    """Reduce per-firm records in index order with weight ``1/k`` each."""
    k = len(records)
    weight = 1.0 / k
    formal_emp = informal_emp = output = wage_bill = revenue = 0.0
    n_formal = 0
    for r in records:
        d = r.decision
        if d.status is Status.FORMAL:
            n_formal += 1
            formal_emp += weight * d.employment
            output += weight * production_output(tech, r.a, d.employment)
            revenue += weight * policy.tau * d.wage * d.employment
        else:
            informal_emp += weight * d.employment
            output += weight * production_output(tech, (1.0 - policy.delta) * r.a, d.employment)
            revenue += weight * detection_prob(policy.detection, d.employment) * policy.phi
        wage_bill += weight * d.wage * d.employment
    total = formal_emp + informal_emp
    return AggregateOutcome(
        total_employment=total,
        formal_employment=formal_emp,
        informal_employment=informal_emp,
        formal_firm_share=n_formal / k,
        informal_employment_share=informal_emp / total if total > 0 else 0.0,
        output=output,
        avg_wage=wage_bill / total if total > 0 else 0.0,
        labor_productivity=output / total if total > 0 else 0.0,
        gov_revenue=revenue,
        threshold_a=threshold.value,
        threshold_kind=threshold.kind.value,
    )


def simulate_economy(tech, supply, policy, population, n_jobs: int = 1):
    """Solve every firm and aggregate.

    Returns ``(AggregateOutcome, records)`` where ``records`` is the per-firm
    decision table in population order.
    """
    population = np.asarray(population, dtype=float)
    if population.size == 0:
        raise ModelDomainError("population is empty")
    records = solve_firms(tech, supply, policy, population, n_jobs=n_jobs)
    threshold = _population_threshold(tech, supply, policy, population, records)
    return aggregate(tech, supply, policy, records, threshold), records


def compute_owe(tech, supply, policy_base: Policy, w_min_new: float, population) -> OweResult:
    """Own-wage elasticity of a minimum-wage increase.

    The affected set is fixed at baseline: firms paying less than
    ``w_min_new`` before the change.
    """
    if not w_min_new > policy_base.w_min:
        raise ModelDomainError(
            f"new minimum wage {w_min_new!r} must exceed the baseline {policy_base.w_min!r}"
        )
    population = np.asarray(population, dtype=float)
    base = solve_firms(tech, supply, policy_base, population)
    new = solve_firms(tech, supply, dataclasses.replace(policy_base, w_min=w_min_new), population)

    affected = [i for i, r in enumerate(base) if r.decision.wage < w_min_new]
    if not affected:
        raise NoAffectedWorkers(f"no firm pays below the new minimum wage {w_min_new!r}")
    e0 = sum(base[i].decision.employment for i in affected)
    e1 = sum(new[i].decision.employment for i in affected)
    w0 = sum(base[i].decision.wage_bill for i in affected)
    w1 = sum(new[i].decision.wage_bill for i in affected)
    if e0 <= 0.0 or e1 <= 0.0:
        raise UndefinedOwe("affected firms employ nobody, so their average wage is undefined")
    pct_e = 100.0 * (e1 - e0) / e0
    avg0, avg1 = w0 / e0, w1 / e1
    pct_w = 100.0 * (avg1 - avg0) / avg0
    if pct_w == 0.0:
        raise UndefinedOwe("average wage of affected workers is unchanged")
    total0 = sum(r.decision.employment for r in base)
    return OweResult(
        owe=pct_e / pct_w,
        pct_demployment=pct_e,
        pct_dwage=pct_w,
        affected_employment_share=e0 / total0 if total0 > 0 else 0.0,
    )


def policy_sweep(tech, supply, policy: Policy, name: str, grid, population, n_jobs: int = 1):
    """One aggregate row per grid value of a single policy parameter.

    Returns a list of ``(value, AggregateOutcome)`` in grid order.
    """
    if name not in POLICY_PARAMETERS:
        raise UsageError(f"cannot sweep {name!r}; choose one of {', '.join(POLICY_PARAMETERS)}")
    values = [float(v) for v in grid]
    if not values:
        raise UsageError("sweep grid is empty")
    diffs = np.diff(values)
    if not (np.all(diffs >= 0) or np.all(diffs <= 0)):
        raise UsageError("sweep grid must be sorted")
    rows = []
    for v in values:
        outcome, _ = simulate_economy(tech, supply, policy.with_param(name, v), population, n_jobs=n_jobs)
        rows.append((v, outcome))
    return rows

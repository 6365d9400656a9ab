"""Monopsony, minimum wage and informality: a firm-level numerical laboratory.

The package solves a heterogeneous-firm model in which each firm has wage
setting power, may face a minimum wage, and chooses whether to register
given taxes, fixed compliance costs and size-dependent enforcement.  It also
ships a publication-bias toolkit (funnel data and FAT-PET meta-regression)
with a seeded simulator of censored study literatures.
"""

__version__ = "0.1.0"

from .core_model import (
    DetectionTech,
    LaborSupply,
    Policy,
    ProductionTech,
    detection_prob,
    marginal_product,
    production_output,
    supply_employment,
    supply_wage,
)
from .economy import (
    AggregateOutcome,
    FirmTaxonomy,
    OweResult,
    PopulationSpec,
    Threshold,
    ThresholdKind,
    build_population,
    choose_status,
    classify_firm,
    compute_owe,
    find_threshold,
    policy_sweep,
    simulate_economy,
)
from .exceptions import (
    CensoringTooRestrictive,
    ConfigError,
    ModelDomainError,
    NoAffectedWorkers,
    NonMonotoneCrossing,
    SingularDesign,
    SolverError,
    UndefinedOwe,
    UsageError,
)
from .firm_solver import (
    FirmDecision,
    MinWageRegime,
    Status,
    formal_optimum,
    formal_optimum_unconstrained,
    informal_optimum,
    profit_at,
)
from .metareg import (
    CensorKind,
    CensorRule,
    FatPetResult,
    StudyEstimate,
    fat_pet,
    funnel_points,
    naive_pooled_mean,
    simulate_studies,
    wls_fit,
)

"""Strict TOML run configuration.

Every group is optional and falls back to documented defaults; unknown keys
anywhere are rejected so a typo in a calibration file cannot pass silently.

Example::

    seed = 42
    output_dir = "out"

    [tech]
    alpha = 0.5

    [supply]
    b = 1.0
    eta = 1.4

    [policy]
    tau = 0.3
    c_f = 0.05
    phi = 0.2
    delta = 0.1

    [policy.detection]
    l_bar = 1.0
    gamma = 2.0

    [population]
    mu = 0.0
    sigma = 1.0
    k = 512
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .core_model import POLICY_PARAMETERS, DetectionTech, LaborSupply, Policy, ProductionTech
from .economy import PopulationSpec
from .exceptions import ConfigError, ModelDomainError
from .metareg import CensorKind, CensorRule


@dataclass(frozen=True)
class ThresholdConfig:
    a_lo: Optional[float] = None
    a_hi: Optional[float] = None


@dataclass(frozen=True)
class SweepConfig:
    parameter: str
    grid: Tuple[float, ...]


@dataclass(frozen=True)
class OweConfig:
    w_min_new: float


@dataclass(frozen=True)
class StudySimConfig:
    true_effect: float = 0.0
    n: int = 2000
    se_lo: float = 0.05
    se_hi: float = 0.5
    rule: str = "negative_sig"
    p_keep: float = 0.1

    @property
    def censor_rule(self) -> CensorRule:
        return CensorRule(CensorKind(self.rule), self.p_keep)


@dataclass(frozen=True)
class MetaregConfig:
    input: Optional[str] = None
    simulate: Optional[StudySimConfig] = None


@dataclass(frozen=True)
class RunConfig:
    tech: ProductionTech = field(default_factory=ProductionTech)
    supply: LaborSupply = field(default_factory=LaborSupply)
    policy: Policy = field(default_factory=Policy)
    population: PopulationSpec = field(default_factory=PopulationSpec)
    threshold: ThresholdConfig = field(default_factory=ThresholdConfig)
    sweep: Optional[SweepConfig] = None
    owe: Optional[OweConfig] = None
    metareg: Optional[MetaregConfig] = None
    output_dir: str = "out"
    seed: int = 0
    n_jobs: int = 1
    source: Optional[str] = None

    def echo(self):
        """Flat ``(key, value)`` pairs covering every parameter."""
        pairs = [("seed", self.seed), ("output_dir", self.output_dir), ("n_jobs", self.n_jobs)]
        pairs += [(f"tech.{k}", v) for k, v in dataclasses.asdict(self.tech).items()]
        pairs += [(f"supply.{k}", v) for k, v in dataclasses.asdict(self.supply).items()]
        for k in ("tau", "c_f", "w_min", "phi", "delta"):
            pairs.append((f"policy.{k}", getattr(self.policy, k)))
        pairs += [(f"policy.detection.{k}", v) for k, v in dataclasses.asdict(self.policy.detection).items()]
        pairs += [(f"population.{k}", v) for k, v in dataclasses.asdict(self.population).items()]
        pairs += [(f"threshold.{k}", v) for k, v in dataclasses.asdict(self.threshold).items()]
        if self.sweep is not None:
            pairs += [("sweep.parameter", self.sweep.parameter), ("sweep.grid", list(self.sweep.grid))]
        if self.owe is not None:
            pairs.append(("owe.w_min_new", self.owe.w_min_new))
        if self.metareg is not None:
            pairs.append(("metareg.input", self.metareg.input))
            if self.metareg.simulate is not None:
                pairs += [
                    (f"metareg.simulate.{k}", v)
                    for k, v in dataclasses.asdict(self.metareg.simulate).items()
                ]
        return pairs


_TOP_KEYS = {
    "tech", "supply", "policy", "population", "threshold", "sweep", "owe", "metareg",
    "output_dir", "seed", "n_jobs",
}


def _table(raw, path):
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"`{path}` must be a table")
    return raw


def _reject_unknown(raw, allowed, path):
    for key in raw:
        if key not in allowed:
            where = f"{path}.{key}" if path else key
            raise ConfigError(f"unknown key `{where}`")


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"`{path}` must be a number, got {value!r}")
    return float(value)


def _integer(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"`{path}` must be an integer, got {value!r}")
    return value


def _build(cls, raw, path, *, integers=(), skip=()):
    """Instantiate a model dataclass from a table, naming the key on failure."""
    names = [f.name for f in dataclasses.fields(cls) if f.name not in skip]
    _reject_unknown(raw, set(names) | set(skip), path)
    kwargs = {}
    for name in names:
        if name in raw:
            conv = _integer if name in integers else _number
            kwargs[name] = conv(raw[name], f"{path}.{name}")
    return kwargs


def _construct(cls, kwargs, path, **extra):
    try:
        return cls(**kwargs, **extra)
    except ModelDomainError as exc:
        where = f"{path}.{exc.param}" if exc.param else path
        raise ConfigError(f"constraint violation at `{where}`: {exc}") from exc


def parse_config(raw: dict, source: Optional[str] = None) -> RunConfig:
    _reject_unknown(raw, _TOP_KEYS, "")

    tech = _construct(ProductionTech, _build(ProductionTech, _table(raw.get("tech"), "tech"), "tech"), "tech")
    supply = _construct(LaborSupply, _build(LaborSupply, _table(raw.get("supply"), "supply"), "supply"), "supply")

    policy_raw = _table(raw.get("policy"), "policy")
    det_raw = _table(policy_raw.get("detection"), "policy.detection")
    detection = _construct(
        DetectionTech, _build(DetectionTech, det_raw, "policy.detection"), "policy.detection"
    )
    policy = _construct(
        Policy, _build(Policy, policy_raw, "policy", skip=("detection",)), "policy", detection=detection
    )

    population = _construct(
        PopulationSpec,
        _build(PopulationSpec, _table(raw.get("population"), "population"), "population", integers=("k",)),
        "population",
    )

    thr_raw = _table(raw.get("threshold"), "threshold")
    threshold = ThresholdConfig(**_build(ThresholdConfig, thr_raw, "threshold"))
    if threshold.a_lo is not None and threshold.a_hi is not None and not 0 < threshold.a_lo < threshold.a_hi:
        raise ConfigError("constraint violation at `threshold`: need 0 < a_lo < a_hi")

    sweep = None
    if "sweep" in raw:
        sw = _table(raw["sweep"], "sweep")
        _reject_unknown(sw, {"parameter", "grid"}, "sweep")
        if sw.get("parameter") not in POLICY_PARAMETERS:
            raise ConfigError(
                f"`sweep.parameter` must be one of {', '.join(POLICY_PARAMETERS)}, got {sw.get('parameter')!r}"
            )
        grid = sw.get("grid")
        if not isinstance(grid, list) or not grid:
            raise ConfigError("`sweep.grid` must be a nonempty array of numbers")
        sweep = SweepConfig(sw["parameter"], tuple(_number(v, f"sweep.grid[{i}]") for i, v in enumerate(grid)))

    owe = None
    if "owe" in raw:
        ow = _table(raw["owe"], "owe")
        _reject_unknown(ow, {"w_min_new"}, "owe")
        if "w_min_new" not in ow:
            raise ConfigError("missing key `owe.w_min_new`")
        owe = OweConfig(_number(ow["w_min_new"], "owe.w_min_new"))
        if not owe.w_min_new > policy.w_min:
            raise ConfigError("constraint violation at `owe.w_min_new`: must exceed `policy.w_min`")

    metareg = None
    if "metareg" in raw:
        mr = _table(raw["metareg"], "metareg")
        _reject_unknown(mr, {"input", "simulate"}, "metareg")
        inp = mr.get("input")
        if inp is not None and not isinstance(inp, str):
            raise ConfigError("`metareg.input` must be a path string")
        sim = None
        if "simulate" in mr:
            sr = _table(mr["simulate"], "metareg.simulate")
            _reject_unknown(sr, {f.name for f in dataclasses.fields(StudySimConfig)}, "metareg.simulate")
            kwargs = {}
            for key in ("true_effect", "se_lo", "se_hi", "p_keep"):
                if key in sr:
                    kwargs[key] = _number(sr[key], f"metareg.simulate.{key}")
            if "n" in sr:
                kwargs["n"] = _integer(sr["n"], "metareg.simulate.n")
            if "rule" in sr:
                if sr["rule"] not in [k.value for k in CensorKind]:
                    raise ConfigError(
                        f"`metareg.simulate.rule` must be one of {[k.value for k in CensorKind]}"
                    )
                kwargs["rule"] = sr["rule"]
            sim = StudySimConfig(**kwargs)
            _check_sim(sim)
        if inp is not None and source is not None and not os.path.isabs(inp):
            inp = os.path.join(os.path.dirname(os.path.abspath(source)), inp)
        metareg = MetaregConfig(inp, sim)

    seed = _integer(raw.get("seed", 0), "seed")
    if not 0 <= seed < 2**64:
        raise ConfigError("constraint violation at `seed`: must be a 64-bit unsigned integer")
    n_jobs = _integer(raw.get("n_jobs", 1), "n_jobs")
    if n_jobs < 1:
        raise ConfigError("constraint violation at `n_jobs`: must be >= 1")
    output_dir = raw.get("output_dir", "out")
    if not isinstance(output_dir, str):
        raise ConfigError("`output_dir` must be a path string")

    return RunConfig(
        tech=tech, supply=supply, policy=policy, population=population, threshold=threshold,
        sweep=sweep, owe=owe, metareg=metareg, output_dir=output_dir, seed=seed, n_jobs=n_jobs,
        source=source,
    )


def _check_sim(sim: StudySimConfig):
    if not math.isfinite(sim.true_effect):
        raise ConfigError("constraint violation at `metareg.simulate.true_effect`: must be finite")
    if not 0 < sim.se_lo < sim.se_hi:
        raise ConfigError("constraint violation at `metareg.simulate.se_lo`: need 0 < se_lo < se_hi")
    if sim.n < 1:
        raise ConfigError("constraint violation at `metareg.simulate.n`: must be >= 1")
    if not 0 <= sim.p_keep <= 1:
        raise ConfigError("constraint violation at `metareg.simulate.p_keep`: must lie in [0, 1]")


def load_config(path) -> RunConfig:
    """Read and validate a TOML run configuration.

    Raises ``FileNotFoundError`` for a missing file and :class:`ConfigError`
    for syntax errors or constraint violations.
    """
    path = os.fspath(path)
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        raw = tomllib.loads(data.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: cannot parse configuration: {exc}") from exc
    return parse_config(raw, source=path)

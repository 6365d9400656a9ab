"""Command line front end.

    monopsony-lab <subcommand> --config <path> [--out <dir>]

Exit status: 0 success, 2 model-domain error, 64 usage or configuration
error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from . import __version__
from .config import RunConfig, StudySimConfig, load_config
from .csvio import format_value, read_studies, write_csv
from .economy import (
    AggregateOutcome,
    FirmTaxonomy,
    OweResult,
    build_population,
    compute_owe,
    find_threshold,
    policy_sweep,
    simulate_economy,
)
from .exceptions import ConfigError, ModelDomainError, NonMonotoneCrossing, SolverError, UsageError
from .metareg import fat_pet, funnel_points, naive_pooled_mean, simulate_studies

log = logging.getLogger("monopsony_lab")

EXIT_OK = 0
EXIT_MODEL = 2
EXIT_USAGE = 64
EXIT_IO = 74

SUBCOMMANDS = ("simulate", "sweep", "owe", "threshold", "classify", "metareg", "biasdemo")

AGGREGATE_FIELDS = [f.name for f in dataclasses.fields(AggregateOutcome)]
OWE_FIELDS = [f.name for f in dataclasses.fields(OweResult)]
FIRM_FIELDS = ["a", "status", "employment", "wage", "profit", "regime", "taxonomy"]
METAREG_FIELDS = ["pet", "fat", "se_pet", "se_fat", "n", "naive_mean"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _firm_rows(records):
    for r in records:
        d = r.decision
        yield [r.a, d.status, d.employment, d.wage, d.profit, d.regime, r.taxonomy]


def _aggregate_row(outcome):
    return [getattr(outcome, name) for name in AGGREGATE_FIELDS]


def write_manifest(cfg: RunConfig, subcommand: str, out_dir: str, outputs) -> None:
    lines = [
        f"tool = monopsony-lab {__version__}",
        f"subcommand = {subcommand}",
        f"config = {cfg.source or ''}",
        f"seed = {cfg.seed}",
    ]
    for key, value in cfg.echo():
        if key == "seed":
            continue
        if isinstance(value, list):
            value = "[" + ", ".join(format_value(v) for v in value) + "]"
        else:
            value = format_value(value)
        lines.append(f"{key} = {value}")
    lines.append("outputs = " + ", ".join(outputs))
    with open(os.path.join(out_dir, "manifest.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _population(cfg):
    return build_population(cfg.population)


def cmd_simulate(cfg, out):
    outcome, records = simulate_economy(cfg.tech, cfg.supply, cfg.policy, _population(cfg), n_jobs=cfg.n_jobs)
    write_csv(AGGREGATE_FIELDS, [_aggregate_row(outcome)], os.path.join(out, "aggregate.csv"))
    write_csv(FIRM_FIELDS, _firm_rows(records), os.path.join(out, "firms.csv"))
    return ["aggregate.csv", "firms.csv"]


def cmd_sweep(cfg, out):
    if cfg.sweep is None:
        raise UsageError("the sweep subcommand needs a [sweep] block in the configuration")
    rows = policy_sweep(
        cfg.tech, cfg.supply, cfg.policy, cfg.sweep.parameter, cfg.sweep.grid,
        _population(cfg), n_jobs=cfg.n_jobs,
    )
    write_csv(
        [cfg.sweep.parameter] + AGGREGATE_FIELDS,
        ([v] + _aggregate_row(o) for v, o in rows),
        os.path.join(out, "sweep.csv"),
    )
    return ["sweep.csv"]


def cmd_owe(cfg, out):
    if cfg.owe is None:
        raise UsageError("the owe subcommand needs an [owe] block with w_min_new")
    result = compute_owe(cfg.tech, cfg.supply, cfg.policy, cfg.owe.w_min_new, _population(cfg))
    write_csv(OWE_FIELDS, [[getattr(result, f) for f in OWE_FIELDS]], os.path.join(out, "owe.csv"))
    return ["owe.csv"]


def cmd_threshold(cfg, out):
    pop = _population(cfg)
    a_lo = cfg.threshold.a_lo if cfg.threshold.a_lo is not None else float(pop[0])
    a_hi = cfg.threshold.a_hi if cfg.threshold.a_hi is not None else float(pop[-1])
    if not a_lo < a_hi:
        raise UsageError("threshold search needs a_lo < a_hi; set [threshold] a_lo and a_hi")
    thr = find_threshold(cfg.tech, cfg.supply, cfg.policy, a_lo, a_hi)
    lo, hi = thr.bracket if thr.bracket else (None, None)
    write_csv(
        ["kind", "a_star", "bracket_lo", "bracket_hi", "a_lo", "a_hi"],
        [[thr.kind, thr.value, lo, hi, a_lo, a_hi]],
        os.path.join(out, "threshold.csv"),
    )
    return ["threshold.csv"]


def cmd_classify(cfg, out):
    outcome, records = simulate_economy(cfg.tech, cfg.supply, cfg.policy, _population(cfg), n_jobs=cfg.n_jobs)
    k = len(records)
    counts = {label: 0 for label in FirmTaxonomy}
    for r in records:
        counts[r.taxonomy] += 1
    n_informal = k - counts[FirmTaxonomy.FORMAL_CHOOSER]
    rows = []
    for label in FirmTaxonomy:
        share_informal = None
        if label is not FirmTaxonomy.FORMAL_CHOOSER:
            share_informal = counts[label] / n_informal if n_informal else 0.0
        rows.append([label, counts[label], counts[label] / k, share_informal])
    write_csv(["taxonomy", "count", "share", "share_of_informal"], rows, os.path.join(out, "taxonomy.csv"))
    write_csv(FIRM_FIELDS, _firm_rows(records), os.path.join(out, "firms.csv"))
    return ["taxonomy.csv", "firms.csv"]


def _write_metareg(studies, out):
    res = fat_pet(studies)
    write_csv(
        METAREG_FIELDS,
        [[res.pet, res.fat, res.se_pet, res.se_fat, res.n, naive_pooled_mean(studies)]],
        os.path.join(out, "metareg.csv"),
    )
    write_csv(["effect", "precision"], funnel_points(studies), os.path.join(out, "funnel.csv"))
    return ["metareg.csv", "funnel.csv"]


def _simulated(cfg, sim: StudySimConfig):
    return simulate_studies(sim.true_effect, sim.n, sim.se_lo, sim.se_hi, sim.censor_rule, cfg.seed)


def cmd_metareg(cfg, out):
    mr = cfg.metareg
    if mr is None or (mr.input is None and mr.simulate is None):
        raise UsageError("the metareg subcommand needs [metareg] input = <csv> or a [metareg.simulate] block")
    studies = read_studies(mr.input) if mr.input is not None else _simulated(cfg, mr.simulate)
    return _write_metareg(studies, out)


def cmd_biasdemo(cfg, out):
    sim = cfg.metareg.simulate if cfg.metareg and cfg.metareg.simulate else StudySimConfig()
    studies = _simulated(cfg, sim)
    write_csv(["effect", "se"], ([s.effect, s.se] for s in studies), os.path.join(out, "studies.csv"))
    return ["studies.csv"] + _write_metareg(studies, out)


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "owe": cmd_owe,
    "threshold": cmd_threshold,
    "classify": cmd_classify,
    "metareg": cmd_metareg,
    "biasdemo": cmd_biasdemo,
}


def run(subcommand: str, cfg: RunConfig, out_dir=None) -> int:
    """Execute one subcommand and write its outputs plus ``manifest.txt``."""
    if subcommand not in COMMANDS:
        log.error("unknown subcommand %r; choose from %s", subcommand, ", ".join(SUBCOMMANDS))
        return EXIT_USAGE
    out = out_dir or cfg.output_dir
    try:
        os.makedirs(out, exist_ok=True)
        outputs = COMMANDS[subcommand](cfg, out)
        write_manifest(cfg, subcommand, out, outputs)
    except NonMonotoneCrossing as exc:
        log.error("%s", exc)
        for lo, hi in exc.brackets:
            log.error("  sign change in [%r, %r]", lo, hi)
        return EXIT_MODEL
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (ModelDomainError, SolverError) as exc:
        log.error("model error: %s", exc)
        return EXIT_MODEL
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    log.info("%s: wrote %s to %s", subcommand, ", ".join(outputs), out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _Parser(prog="monopsony-lab", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        log.error("cannot read configuration: %s", exc)
        return EXIT_IO
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    return run(args.subcommand, cfg, args.out)


if __name__ == "__main__":
    sys.exit(main())

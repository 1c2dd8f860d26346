"""Command-line experiment runner: per-iteration CSV records, paired comparisons, SVG snapshots."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .anytime import afmt
from .cspace import InvalidInputError, free_space_measure
from .instrument import RunRecord, compare_runs
from .lbt import lbt_anytime
from .mplb import MplbParams, mplb
from .neighbors import DEFAULT_ETA, RadiusParams
from .scenario_io import ScenarioParseError, ScenarioValidationError, parse_scenario
from .search import SEARCH_MODES, fmt_star
from .svg import render_tree

log = logging.getLogger("lbplanner")

PLANNERS = ("fmt", "afmt", "mplb", "ano_mplb", "lbt_fmt")
RUN_COLUMNS = ["planner", "seed", "iteration", "n", "preproc_size", "tree_size", "discarded",
               "cost", "wall_time_ms", "nn_calls", "lp_calls", "epsilon"]
COMPARISON_COLUMNS = ["seed", "iteration", "lp_subset", "tree_size_leq", "cost_relation",
                      "lp_ratio", "nn_ratio"]
MU_SEED = 0


@dataclass
class ExperimentConfig:
    scenario: str
    planners: list[str]
    n0: int = 50
    iterations: int = 4
    seeds: list[int] = field(default_factory=lambda: [0])
    epsilon: float = 0.0
    eta: float = DEFAULT_ETA
    mu: str = "bounds"
    out: str = "results"
    snapshots: bool = False
    compare: bool = False
    search_mode: str = "exact"

    def __post_init__(self):
        if not self.planners:
            raise InvalidInputError("at least one planner is required")
        if not self.seeds:
            raise InvalidInputError("at least one seed is required")
        unknown = [p for p in self.planners if p not in PLANNERS]
        if unknown:
            raise InvalidInputError(f"unknown planner(s) {unknown}; choose from {PLANNERS}")
        if self.epsilon < 0:
            raise InvalidInputError("epsilon must be >= 0")
        if "ano_mplb" in self.planners and self.epsilon == 0:
            raise InvalidInputError("ano_mplb needs --epsilon > 0")
        if self.search_mode not in SEARCH_MODES:
            raise InvalidInputError(f"unknown search mode {self.search_mode!r}")
        _parse_mu(self.mu)


def _parse_mu(mu: str) -> int | None:
    if mu == "bounds":
        return None
    if mu.startswith("mc:"):
        try:
            count = int(mu[3:])
        except ValueError:
            count = 0
        if count >= 1:
            return count
    raise InvalidInputError(f"--mu must be 'bounds' or 'mc:COUNT', got {mu!r}")


def fmt_cost(c: float) -> str:
    return "inf" if math.isinf(c) else f"{c:.12g}"


def run_row(r: RunRecord) -> list:
    return [r.planner, r.seed, r.iteration, r.n, r.preproc_size, r.tree_size, r.discarded,
            fmt_cost(r.cost), f"{r.wall_time * 1000:.3f}", r.counters.nn_calls, r.counters.lp_calls,
            f"{r.epsilon:.12g}"]


def _check_writable(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write_probe"
    probe.write_text("")
    probe.unlink()


def run_planner(name: str, scenario, cfg: ExperimentConfig, params: RadiusParams, seed: int) -> list[RunRecord]:
    keep = cfg.snapshots and scenario.dimension == 2
    if name == "fmt":
        n = cfg.n0 * 2 ** (cfg.iterations - 1)
        _, _, rec = fmt_star(scenario, n, params, np.random.default_rng(seed), search_mode=cfg.search_mode)
        rec.seed = seed
        if not keep:
            rec.snapshot = None
        return [rec]
    if name == "afmt":
        return afmt(scenario, cfg.n0, cfg.iterations, params, seed, keep_snapshots=keep,
                    search_mode=cfg.search_mode)
    if name in ("mplb", "ano_mplb"):
        eps = cfg.epsilon if name == "ano_mplb" else 0.0
        return mplb(scenario, MplbParams(cfg.n0, cfg.iterations, params, seed, eps,
                                         search_mode=cfg.search_mode), keep_snapshots=keep)
    return lbt_anytime(scenario, cfg.n0, cfg.iterations, params, seed, cfg.epsilon, keep_snapshots=keep)


def write_snapshots(out: Path, scenario, records: list[RunRecord]) -> list[Path]:
    written = []
    for r in records:
        if r.snapshot is None:
            continue
        points, tree = r.snapshot
        current = r.iteration_cost == r.cost and r.outcome == "path"
        title = f"{r.planner} seed={r.seed} iter={r.iteration} n={r.n} cost={fmt_cost(r.cost)}"
        svg = render_tree(scenario, points, tree.edges(), r.path, title, path_is_current=current)
        p = out / f"{r.planner}_seed{r.seed}_iter{r.iteration}.svg"
        p.write_text(svg)
        written.append(p)
    return written


def run_experiment(cfg: ExperimentConfig) -> dict[str, Path]:
    """Run every (planner, seed) pair and write ``runs.csv`` (plus
    ``comparison.csv`` and SVG snapshots when applicable) under ``cfg.out``.
    """
    out = Path(cfg.out)
    _check_writable(out)
    scenario = parse_scenario(cfg.scenario)
    mc = _parse_mu(cfg.mu)
    mu = (free_space_measure(scenario) if mc is None
          else free_space_measure(scenario, "monte_carlo", mc, np.random.default_rng(MU_SEED)))
    params = RadiusParams(mu=mu, dimension=scenario.dimension, eta=cfg.eta)
    if cfg.snapshots and scenario.dimension != 2:
        log.warning("snapshots skipped: scenario %r is %d-D", scenario.name, scenario.dimension)

    results: dict[tuple[str, int], list[RunRecord]] = {}
    for seed in cfg.seeds:
        for name in cfg.planners:
            log.info("running %s seed=%d", name, seed)
            results[name, seed] = run_planner(name, scenario, cfg, params, seed)

    files = {"runs": out / "runs.csv"}
    with open(files["runs"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RUN_COLUMNS)
        for seed in cfg.seeds:
            for name in cfg.planners:
                for r in results[name, seed]:
                    w.writerow(run_row(r))

    partner = next((p for p in ("mplb", "ano_mplb") if p in cfg.planners), None)
    if "afmt" in cfg.planners and partner is not None:
        files["comparison"] = out / "comparison.csv"
        with open(files["comparison"], "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(COMPARISON_COLUMNS)
            for seed in cfg.seeds:
                b = results[partner, seed]
                rep = compare_runs(results["afmt", seed], b, b[0].epsilon)
                for row in rep.rows:
                    w.writerow([seed, row.iteration, row.lp_subset, row.tree_size_leq,
                                "pass" if row.cost_ok else "fail",
                                f"{row.lp_ratio:.6g}", f"{row.nn_ratio:.6g}"])
    elif cfg.compare:
        log.warning("--compare needs afmt and mplb (or ano_mplb) among the planners; no comparison written")

    if cfg.snapshots and scenario.dimension == 2:
        for recs in results.values():
            write_snapshots(out, scenario, recs)
    return files


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lbplanner", description=__doc__)
    p.add_argument("--scenario", required=True,
                   help="scenario JSON file, or a bundled name (corridors, grids)")
    p.add_argument("--planner", action="append", choices=PLANNERS, dest="planners",
                   help="planner to run (repeatable)")
    p.add_argument("--n0", type=int, default=50)
    p.add_argument("--iterations", type=int, default=4)
    p.add_argument("--seed", type=int, action="append", dest="seeds")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--mu", default="bounds", help="'bounds' or 'mc:COUNT'")
    p.add_argument("--out", default="results")
    p.add_argument("--snapshots", action="store_true", help="write per-iteration SVGs (2-D only)")
    p.add_argument("--compare", action="store_true", help="write comparison.csv for afmt vs mplb")
    p.add_argument("--search-mode", default="exact", choices=sorted(SEARCH_MODES))
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = ExperimentConfig(
            scenario=args.scenario, planners=args.planners or ["afmt", "mplb"], n0=args.n0,
            iterations=args.iterations, seeds=args.seeds or [0], epsilon=args.epsilon, eta=args.eta,
            mu=args.mu, out=args.out, snapshots=args.snapshots, compare=args.compare,
            search_mode=args.search_mode,
        )
        files = run_experiment(cfg)
    except (ScenarioParseError, ScenarioValidationError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    for name, path in files.items():
        print(f"{name}: {os.fspath(path)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

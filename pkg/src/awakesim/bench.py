"""Seeded experiment harness.

Runs one of the packaged algorithms for a configured number of trials,
derives every trial seed from the master seed, and writes one CSV row per
trial plus mean/stddev/max summary rows.  Output bytes depend only on the
config (wall times are blanked unless timing is requested), so result files
are diffable fixtures.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import fractional, mis
from .augmentation import (MatchBox, bipartite_one_plus_eps, full_matching_pipeline,
                           general_one_plus_eps)
from .errors import OracleTooLarge
from .graphs import (Graph, complete_graph, cycle_graph, gen_bipartite, gen_gnp,
                     path_graph, star_graph)
from .oracles import (exact_max_matching, exact_min_vertex_cover,
                      max_bipartite_matching, verify_matching, verify_mis,
                      verify_vertex_cover)
from .rng import node_rng

ALGORITHMS = ("luby", "awake_mis", "vanilla_match", "sampled_match",
              "vertex_cover", "bipartite_amplify", "general_amplify", "pipeline")

COLUMNS = ("trial", "n", "m", "algorithm", "rounds", "total_awake", "avg_awake",
           "max_awake", "parts", "size", "validity", "optimum", "ratio",
           "heavy", "light", "spoiled", "wall_time")

_SUMMARY_FIELDS = ("rounds", "total_awake", "avg_awake", "max_awake", "size",
                   "ratio")


@dataclass
class ExperimentConfig:
    algorithm: str
    graph: str = "gnp"
    n: int = 256
    n_list: Optional[List[int]] = None      # sweep only
    p: Optional[float] = None               # family density; default 10/n
    eps: float = 0.1
    trials: int = 1
    master_seed: int = 1
    oracle: bool = False
    out: Optional[str] = None
    timing: bool = False
    overrides: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; "
                             f"choose from {', '.join(ALGORITHMS)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n_list is not None and not self.n_list:
            raise ValueError("n_list must be non-empty")


def build_graph(family: str, n: int, p: Optional[float], seed: int) -> Graph:
    """Instantiate a test graph.  ``family`` is a generator name or
    ``file:PATH`` pointing at the text format (header ``n m``, one edge per
    line)."""
    if family.startswith("file:"):
        with open(family[5:], "r", encoding="utf-8") as fh:
            return Graph.from_text(fh.read())
    if family == "gnp":
        return gen_gnp(n, p if p is not None else min(1.0, 10 / max(2, n)), seed)
    if family == "bipartite":
        half = max(1, n // 2)
        return gen_bipartite(half, n - half,
                             p if p is not None else min(1.0, 10 / max(2, n)),
                             seed)
    if family == "cycle":
        return cycle_graph(n)
    if family == "path":
        return path_graph(n)
    if family == "complete":
        return complete_graph(n)
    if family == "star":
        return star_graph(max(0, n - 1))
    if family == "edgeless":
        return Graph(n)
    raise ValueError(f"unknown graph family {family!r}")


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _ovr(overrides: Dict[str, str], key: str, cast, default=None):
    if key in overrides:
        return cast(overrides[key])
    return default


def _mis_params(overrides: Dict[str, str]) -> Optional[mis.MisParams]:
    kwargs = {}
    if "participation" in overrides:
        kwargs["p"] = Fraction(overrides["participation"])
    if "C" in overrides:
        kwargs["C"] = int(overrides["C"])
    if "d" in overrides:
        kwargs["d"] = int(overrides["d"])
    if "K" in overrides:
        kwargs["K"] = int(overrides["K"])
    if "window" in overrides:
        kwargs["part1_window"] = int(overrides["window"])
    return mis.MisParams(**kwargs) if kwargs else None


def _optimum_matching(g: Graph) -> Optional[int]:
    if g.sides is not None:
        return len(max_bipartite_matching(g, list(g.sides)))
    return len(exact_max_matching(g))


def run_trial(cfg: ExperimentConfig, t: int) -> Dict[str, Any]:
    """Execute trial ``t`` and return one result row (dict keyed by COLUMNS)."""
    seed = node_rng(cfg.master_seed, 0, "trial", t)
    g = build_graph(cfg.graph, cfg.n, cfg.p, seed)
    ovr = cfg.overrides
    row: Dict[str, Any] = {k: "" for k in COLUMNS}
    row.update(trial=t, n=g.n, m=g.m, algorithm=cfg.algorithm)
    t0 = time.perf_counter()
    optimum: Optional[int] = None

    if cfg.algorithm == "luby":
        s, led = mis.luby_mis(g, seed)
        row.update(rounds=led.rounds, total_awake=led.total_awake(),
                   avg_awake=led.node_averaged(), max_awake=led.max_awake(),
                   size=len(s), validity=verify_mis(g, s))
    elif cfg.algorithm == "awake_mis":
        s, led, met = mis.awake_mis(g, seed, params=_mis_params(ovr))
        parts = ";".join(f"{k}={v}" for k, v in sorted(led.part_totals().items()))
        row.update(rounds=met.rounds, total_awake=met.total_awake,
                   avg_awake=met.avg_awake, max_awake=met.max_awake,
                   parts=parts, size=len(s), validity=met.validity)
    elif cfg.algorithm == "vanilla_match":
        asg = fractional.vanilla_fractional(g, _eps_fraction(cfg.eps))
        rounds = 1 + max((j for j in asg.frozen_round.values() if j is not None),
                         default=-1)
        row.update(rounds=rounds, total_awake=g.n * rounds, avg_awake=float(rounds),
                   max_awake=rounds, size=asg.total_float(), validity=True)
        if cfg.oracle:
            optimum = _try_optimum(g)
    elif cfg.algorithm == "sampled_match":
        asg, led, diag = _sampled(cfg, g, seed)
        row.update(rounds=led.rounds, total_awake=led.total_awake(),
                   avg_awake=led.node_averaged(), max_awake=led.max_awake(),
                   size=asg.total_float(), validity=True,
                   heavy=diag.heavy_events, light=diag.light_events,
                   spoiled=float(diag.spoiled_value))
        if cfg.oracle:
            optimum = _try_optimum(g)
    elif cfg.algorithm == "vertex_cover":
        asg, led, diag = _sampled(cfg, g, seed)
        cover = fractional.extract_vertex_cover(asg)
        row.update(rounds=led.rounds, total_awake=led.total_awake(),
                   avg_awake=led.node_averaged(), max_awake=led.max_awake(),
                   size=len(cover), validity=verify_vertex_cover(g, cover),
                   heavy=diag.heavy_events, light=diag.light_events,
                   spoiled=float(diag.spoiled_value))
        if cfg.oracle:
            try:
                optimum = len(exact_min_vertex_cover(g))
            except OracleTooLarge:
                optimum = None
    elif cfg.algorithm in ("bipartite_amplify", "general_amplify", "pipeline"):
        if cfg.algorithm == "pipeline":
            m, led = full_matching_pipeline(
                g, _eps_fraction(cfg.eps), seed,
                improve_iterations=_ovr(ovr, "improve_iterations", int),
                delta_iterations=_ovr(ovr, "delta_iterations", int, 12))
        else:
            box = MatchBox(_ovr(ovr, "box", str, "greedy"),
                           master_seed=seed, host_n=g.n)
            if cfg.algorithm == "bipartite_amplify":
                if g.sides is None:
                    raise ValueError("bipartite_amplify needs a bipartite family")
                m = bipartite_one_plus_eps(g, box, cfg.eps)
            else:
                m = general_one_plus_eps(
                    g, box, cfg.eps, seed,
                    improve_iterations=_ovr(ovr, "improve_iterations", int))
            led = box.ledger
        if led is not None:
            row.update(rounds=led.rounds, total_awake=led.total_awake(),
                       avg_awake=led.node_averaged(), max_awake=led.max_awake())
        else:
            row.update(rounds=0, total_awake=0, avg_awake=0.0, max_awake=0)
        row.update(size=len(m), validity=verify_matching(g, m))
        if cfg.oracle:
            optimum = _try_optimum(g)
    else:  # pragma: no cover - guarded by ExperimentConfig
        raise AssertionError(cfg.algorithm)

    if optimum is not None:
        row["optimum"] = optimum
        if optimum > 0 and row["size"] != "":
            row["ratio"] = float(row["size"]) / optimum
    if cfg.timing:
        row["wall_time"] = time.perf_counter() - t0
    return row


def _eps_fraction(eps: float) -> Fraction:
    return Fraction(str(eps))


def _sampled(cfg: ExperimentConfig, g: Graph, seed: int):
    ovr = cfg.overrides
    return fractional.sampled_fractional(
        g, _eps_fraction(cfg.eps), seed,
        estimator_constant=_ovr(ovr, "estimator_constant", int, 64),
        force_stop_round=_ovr(ovr, "stop_round", int))


def _try_optimum(g: Graph) -> Optional[int]:
    try:
        return _optimum_matching(g)
    except OracleTooLarge:
        return None


def _summary_rows(rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    out = []
    for stat in ("mean", "stddev", "max"):
        srow: Dict[str, Any] = {k: "" for k in COLUMNS}
        srow["trial"] = stat
        srow["algorithm"] = rows[0]["algorithm"] if rows else ""
        for key in _SUMMARY_FIELDS:
            vals = [float(r[key]) for r in rows if r[key] != ""]
            if not vals:
                continue
            if stat == "mean":
                srow[key] = statistics.fmean(vals)
            elif stat == "stddev":
                srow[key] = statistics.pstdev(vals)
            else:
                srow[key] = max(vals)
        out.append(srow)
    return out


def rows_to_csv(rows: List[Dict[str, Any]]) -> str:
    lines = [",".join(COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(r[k]) for k in COLUMNS))
    return "\n".join(lines) + "\n"


def _config_dict(cfg: ExperimentConfig) -> Dict[str, Any]:
    return {"algorithm": cfg.algorithm, "graph": cfg.graph, "n": cfg.n,
            "n_list": cfg.n_list, "p": cfg.p, "eps": cfg.eps,
            "trials": cfg.trials, "master_seed": cfg.master_seed,
            "oracle": cfg.oracle, "timing": cfg.timing,
            "overrides": dict(sorted(cfg.overrides.items()))}


def run_experiment(cfg: ExperimentConfig) -> Tuple[List[Dict[str, Any]], bool]:
    """All trials plus summary rows; writes CSV (and a JSON config sidecar)
    when cfg.out is set.  Returns (rows, ok) where ok is False if any
    validity flag came back false."""
    rows = [run_trial(cfg, t) for t in range(cfg.trials)]
    ok = all(r["validity"] in ("", True) for r in rows)
    all_rows = rows + _summary_rows(rows)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(rows_to_csv(all_rows))
        with open(cfg.out + ".json", "w", encoding="utf-8") as fh:
            json.dump(_config_dict(cfg), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return all_rows, ok


SWEEP_COLUMNS = ("n", "trials", "mean_rounds", "mean_avg_awake",
                 "mean_max_awake", "mean_size")


def sweep(cfg: ExperimentConfig) -> Tuple[List[Dict[str, Any]], bool]:
    """Run the experiment once per n in cfg.n_list and emit a scaling table
    (one row per size) suitable for fitting rounds against log n."""
    if not cfg.n_list:
        raise ValueError("sweep needs n_list")
    table: List[Dict[str, Any]] = []
    ok = True
    for n in cfg.n_list:
        sub = ExperimentConfig(algorithm=cfg.algorithm, graph=cfg.graph, n=n,
                               p=cfg.p, eps=cfg.eps, trials=cfg.trials,
                               master_seed=cfg.master_seed, oracle=cfg.oracle,
                               timing=False, overrides=dict(cfg.overrides))
        rows, part_ok = run_experiment(sub)
        ok &= part_ok
        mean = next(r for r in rows if r["trial"] == "mean")
        table.append({"n": n, "trials": cfg.trials,
                      "mean_rounds": mean["rounds"],
                      "mean_avg_awake": mean["avg_awake"],
                      "mean_max_awake": mean["max_awake"],
                      "mean_size": mean["size"]})
    if cfg.out:
        lines = [",".join(SWEEP_COLUMNS)]
        for r in table:
            lines.append(",".join(_fmt(r[k]) for k in SWEEP_COLUMNS))
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        with open(cfg.out + ".json", "w", encoding="utf-8") as fh:
            json.dump(_config_dict(cfg), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return table, ok


def fit_log_scaling(ns: Sequence[int], ys: Sequence[float]) -> Tuple[float, float, float]:
    """Least squares y = a*log2(n) + b; returns (a, b, r_squared)."""
    xs = [math.log2(n) for n in ns]
    n = len(xs)
    mx, my = statistics.fmean(xs), statistics.fmean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    a = sxy / sxx if sxx else 0.0
    b = my - a * mx
    ss_res = sum((y - (a * x + b)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - my) ** 2 for y in ys)
    r2 = 1.0 - ss_res / ss_tot if ss_tot else 1.0
    return a, b, r2

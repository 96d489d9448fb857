"""Experiment harness: cell grids, trial records, ROC summaries.

A run is defined by a JSON config (mode, population size, grids over the
window size s and the correlation rho, the motif family, trial count, master
seed). Each (s, rho, hypothesis, trial) work item derives its own random
stream from the master seed, so results do not depend on execution order and
any worker count produces the same records. Scores land in a CSV with the
fixed header `s,rho,hypothesis,trial,statistic`; per-cell AUCs and the
config hash land in an `auc.json` next to it. Downstream tooling consumes
those files only, never this package's internals.

Synthetic mode draws fresh population pairs per trial: under H0 two
independent graphs, under H1 a correlated pair, then independent induced
windows from each side. Real mode ingests one edge list, keeps the top-K
vertices by degree, and compares windows drawn from one shared n-subset (H1)
against windows from two disjoint n-subsets (H0), centering at the empirical
density of the filtered graph.
"""

from __future__ import annotations

import concurrent.futures
import csv
import hashlib
import json
import os
import time
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DegenerateParameterError, ParameterError
from .graphs import (ModelParams, SimpleGraph, center, induced_subgraph,
                     read_edge_list, sample_correlated_pair, sample_er,
                     sample_induced_subgraph)
from .motifs import parse_family_spec
from .rng import derive_rng
from .stats import (WeightedFamily, default_m, it_statistic_exhaustive,
                    motif_statistic)

_STATISTICS = ("motif", "it-exhaustive")
_MODES = ("synthetic", "real")


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    n: int
    s_grid: tuple
    rho_grid: tuple
    family: str
    statistic: str = "motif"
    trials_per_cell: int = 100
    master_seed: int = 0
    p: float | None = None
    edge_list: str | None = None
    m0: float = 1.0
    top_k: int | None = None
    it_m: int | None = None
    it_eps: float = 0.1

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ParameterError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.statistic not in _STATISTICS:
            raise ParameterError(f"statistic must be one of {_STATISTICS}, "
                                 f"got {self.statistic!r}")
        if self.n < 2:
            raise ParameterError(f"n must be >= 2, got {self.n}")
        if not self.s_grid:
            raise ParameterError("s grid is empty")
        if any(not 1 <= s <= self.n for s in self.s_grid):
            raise ParameterError(f"every s must lie in [1, n]; got {self.s_grid}")
        if not self.rho_grid:
            raise ParameterError("rho grid is empty")
        if any(not 0.0 <= r <= 1.0 for r in self.rho_grid):
            raise ParameterError(f"every rho must lie in [0, 1]; got {self.rho_grid}")
        if self.trials_per_cell < 1:
            raise ParameterError("trials_per_cell must be >= 1")
        if self.mode == "synthetic":
            if self.p is None or not 0.0 < self.p < 1.0:
                raise ParameterError("synthetic mode needs p in (0, 1)")
        else:
            if not self.edge_list:
                raise ParameterError("real mode needs an edge_list path")
        if self.statistic == "motif":
            parse_family_spec(self.family)  # validates eagerly

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {
            "mode": data.get("mode", "synthetic"),
            "n": int(data["n"]),
            "s_grid": tuple(int(x) for x in _as_list(data, "s")),
            "rho_grid": tuple(float(x) for x in _as_list(data, "rho")),
            "family": data.get("family", ""),
            "statistic": data.get("statistic", "motif"),
            "trials_per_cell": int(data.get("trials_per_cell", 100)),
            "master_seed": int(data.get("master_seed", 0)),
            "p": None if data.get("p") is None else float(data["p"]),
            "edge_list": data.get("edge_list"),
            "m0": float(data.get("m0", 1.0)),
            "top_k": None if data.get("top_k") is None else int(data["top_k"]),
            "it_m": None if data.get("it_m") is None else int(data["it_m"]),
            "it_eps": float(data.get("it_eps", 0.1)),
        }
        unknown = set(data) - set(known) - {"s", "rho"}
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls(**known)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ParameterError("config JSON must be an object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["s"] = list(d.pop("s_grid"))
        d["rho"] = list(d.pop("rho_grid"))
        return d

    def config_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


def _as_list(data: dict, key: str):
    val = data.get(key)
    if val is None:
        raise ParameterError(f"config needs {key!r}")
    if not isinstance(val, (list, tuple)):
        val = [val]
    if not val:
        raise ParameterError(f"config {key!r} grid is empty")
    return val


@dataclass(frozen=True)
class TrialRecord:
    s: int
    rho: float
    hypothesis: str
    trial: int
    statistic: float
    wall_time: float = 0.0


# ---------------------------------------------------------------------------
# statistic evaluation


@lru_cache(maxsize=64)
def _family_and_weights(family_spec: str, n: int, p: float, rho: float):
    family = parse_family_spec(family_spec)
    params = ModelParams(n=n, s=min(n, 1), p=p, rho=rho)
    wf = WeightedFamily.build(family, params)
    return family, wf


def _evaluate(cfg_tuple, s: int, rho: float, g1: SimpleGraph, g2: SimpleGraph,
              p_center: float) -> float:
    statistic, family_spec, n, it_m, it_eps = cfg_tuple
    if statistic == "motif":
        _, wf = _family_and_weights(family_spec, n, p_center, rho)
        return motif_statistic(wf, center(g1, p_center), center(g2, p_center))
    m = it_m if it_m is not None else default_m(n, s, it_eps)
    return float(it_statistic_exhaustive(g1, g2, m))


def _synthetic_trial(task):
    (statistic, family_spec, n, p, it_m, it_eps, master_seed,
     s, rho, trial, hyp) = task
    t0 = time.perf_counter()
    rng = derive_rng(master_seed, "synthetic", s, rho, trial, hyp)
    if hyp == "H0":
        pop1 = sample_er(n, p, rng)
        pop2 = sample_er(n, p, rng)
    else:
        pop1, pop2, _ = sample_correlated_pair(n, p, rho, rng)
    g1, _ = sample_induced_subgraph(pop1, s, rng)
    g2, _ = sample_induced_subgraph(pop2, s, rng)
    value = _evaluate((statistic, family_spec, n, it_m, it_eps), s, rho,
                      g1, g2, p)
    return TrialRecord(s, rho, hyp, trial, value, time.perf_counter() - t0)


def _record_sort_key(r: TrialRecord):
    return (r.s, r.rho, r.hypothesis, r.trial)


def run_synthetic(config: ExperimentConfig, workers: int = 1) -> list:
    """All trial records for a synthetic-mode config, sorted by cell."""
    if config.mode != "synthetic":
        raise ParameterError("config mode is not synthetic")
    tasks = [
        (config.statistic, config.family, config.n, config.p,
         config.it_m, config.it_eps, config.master_seed,
         s, rho, trial, hyp)
        for s in config.s_grid
        for rho in config.rho_grid
        for trial in range(config.trials_per_cell)
        for hyp in ("H0", "H1")
    ]
    if workers > 1:
        chunk = max(1, len(tasks) // (workers * 8))
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_synthetic_trial, tasks, chunksize=chunk))
    else:
        records = [_synthetic_trial(t) for t in tasks]
    return sorted(records, key=_record_sort_key)


# ---------------------------------------------------------------------------
# real-data protocol


def ingest_edge_list(path, m0: float = 1.0):
    """Parse an edge-list file into a simple graph; see graphs.parse_edge_list.

    Lines may carry a weight; an edge is kept iff some line for it has
    weight >= m0 (unweighted lines count as weight 1).
    """
    return read_edge_list(path, m0=m0)


def _top_k_by_degree(graph: SimpleGraph, k: int) -> SimpleGraph:
    order = sorted(range(graph.n), key=lambda u: (-graph.degree(u), u))
    return induced_subgraph(graph, sorted(order[:k]))


def run_real(config: ExperimentConfig) -> list:
    """Trial records for the real-data protocol.

    H0: windows from two disjoint n-subsets of the host graph.
    H1: two windows from one shared n-subset.
    Centering and weights use the empirical density of the filtered host.
    """
    if config.mode != "real":
        raise ParameterError("config mode is not real")
    host, _ids = ingest_edge_list(config.edge_list, m0=config.m0)
    if config.top_k is not None and config.top_k < host.n:
        host = _top_k_by_degree(host, config.top_k)
    if host.n < 2 * config.n:
        raise CapacityError(f"host graph has {host.n} vertices after filtering; "
                            f"the protocol needs at least 2n = {2 * config.n}")
    pairs = host.n * (host.n - 1) / 2.0
    p_hat = host.edge_count / pairs
    if p_hat in (0.0, 1.0):
        raise DegenerateParameterError(f"empirical density is {p_hat}; "
                                       "centering is degenerate")
    cfg_tuple = (config.statistic, config.family, config.n,
                 config.it_m, config.it_eps)
    records = []
    for s in config.s_grid:
        for rho in config.rho_grid:
            for trial in range(config.trials_per_cell):
                for hyp in ("H0", "H1"):
                    t0 = time.perf_counter()
                    rng = derive_rng(config.master_seed, "real", s, rho,
                                     trial, hyp)
                    if hyp == "H0":
                        both = rng.choice(host.n, size=2 * config.n,
                                          replace=False)
                        popA = induced_subgraph(host, [int(x) for x in
                                                       both[:config.n]])
                        popB = induced_subgraph(host, [int(x) for x in
                                                       both[config.n:]])
                    else:
                        sub = rng.choice(host.n, size=config.n, replace=False)
                        popA = induced_subgraph(host, [int(x) for x in sub])
                        popB = popA
                    g1, _ = sample_induced_subgraph(popA, s, rng)
                    g2, _ = sample_induced_subgraph(popB, s, rng)
                    value = _evaluate(cfg_tuple, s, rho, g1, g2, p_hat)
                    records.append(TrialRecord(s, rho, hyp, trial, value,
                                               time.perf_counter() - t0))
    return sorted(records, key=_record_sort_key)


def run_experiment_records(config: ExperimentConfig, workers: int = 1) -> list:
    if config.mode == "synthetic":
        return run_synthetic(config, workers=workers)
    return run_real(config)


# ---------------------------------------------------------------------------
# ROC / AUC


@dataclass(frozen=True)
class RocCurve:
    """Threshold-sweep ROC (decision: statistic >= threshold -> positive)."""

    fpr: tuple
    tpr: tuple
    auc: float
    auc_trapezoid: float


def roc_auc(h0_scores, h1_scores) -> RocCurve:
    """ROC curve plus AUC; the AUC is the Mann-Whitney statistic
    P(S1 > S0) + P(S1 = S0)/2, which equals the trapezoid area under the
    swept curve exactly (up to float error)."""
    s0 = np.asarray(list(h0_scores), dtype=float)
    s1 = np.asarray(list(h1_scores), dtype=float)
    if s0.size == 0 or s1.size == 0:
        raise ParameterError("both score collections must be non-empty")

    thresholds = np.unique(np.concatenate([s0, s1]))[::-1]
    fpr = [0.0]
    tpr = [0.0]
    for t in thresholds:
        fpr.append(float(np.count_nonzero(s0 >= t)) / s0.size)
        tpr.append(float(np.count_nonzero(s1 >= t)) / s1.size)
    area = float(getattr(np, "trapezoid", np.trapz)(tpr, fpr))

    pooled = np.concatenate([s0, s1])
    order = np.argsort(pooled, kind="mergesort")
    ranks = np.empty(pooled.size, dtype=float)
    sorted_vals = pooled[order]
    i = 0
    while i < pooled.size:
        j = i
        while j + 1 < pooled.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    r1 = float(ranks[s0.size:].sum())
    auc = (r1 - s1.size * (s1.size + 1) / 2.0) / (s0.size * s1.size)
    return RocCurve(tuple(fpr), tuple(tpr), float(auc), area)


def cell_scores(records, s: int, rho: float):
    h0 = [r.statistic for r in records
          if r.s == s and r.rho == rho and r.hypothesis == "H0"]
    h1 = [r.statistic for r in records
          if r.s == s and r.rho == rho and r.hypothesis == "H1"]
    return h0, h1


def summarize_cells(records, config: ExperimentConfig) -> list:
    out = []
    for s in config.s_grid:
        for rho in config.rho_grid:
            h0, h1 = cell_scores(records, s, rho)
            curve = roc_auc(h0, h1)
            out.append({"s": s, "rho": rho, "auc": curve.auc,
                        "trials_per_hypothesis": len(h0)})
    return out


# ---------------------------------------------------------------------------
# file emission


SCORES_HEADER = ["s", "rho", "hypothesis", "trial", "statistic"]


def write_scores_csv(path, records):
    """Fixed-schema scores CSV; floats via repr so reruns are byte-identical."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCORES_HEADER)
        for r in sorted(records, key=_record_sort_key):
            writer.writerow([r.s, repr(float(r.rho)), r.hypothesis, r.trial,
                             repr(float(r.statistic))])


def read_scores_csv(path) -> list:
    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SCORES_HEADER:
            raise ParameterError(f"unexpected scores header {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 5:
                raise ParameterError(f"line {lineno}: expected 5 columns")
            try:
                records.append(TrialRecord(int(row[0]), float(row[1]), row[2],
                                           int(row[3]), float(row[4])))
            except ValueError as exc:
                raise ParameterError(f"line {lineno}: {exc}") from exc
    return records


def write_auc_json(path, records, config: ExperimentConfig):
    payload = {
        "config_hash": config.config_hash(),
        "mode": config.mode,
        "statistic": config.statistic,
        "family": config.family,
        "n": config.n,
        "p": config.p,
        "cells": summarize_cells(records, config),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_roc_outputs(out_dir, records, config: ExperimentConfig) -> list:
    """Per-cell fpr,tpr CSVs plus {auc, cell, config_hash} sidecars."""
    chash = config.config_hash()
    written = []
    for s in config.s_grid:
        for rho in config.rho_grid:
            h0, h1 = cell_scores(records, s, rho)
            curve = roc_auc(h0, h1)
            stem = f"roc_s{s}_rho{rho!r}"
            csv_path = os.path.join(out_dir, stem + ".csv")
            with open(csv_path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["fpr", "tpr"])
                for x, y in zip(curve.fpr, curve.tpr):
                    writer.writerow([repr(x), repr(y)])
            side_path = os.path.join(out_dir, stem + ".json")
            with open(side_path, "w", encoding="utf-8") as fh:
                json.dump({"auc": curve.auc, "cell": {"s": s, "rho": rho},
                           "config_hash": chash}, fh, indent=2, sort_keys=True)
                fh.write("\n")
            written.append(csv_path)
    return written


def run_experiment(config: ExperimentConfig, out_dir, workers: int = 1) -> dict:
    """Run all cells and write scores.csv, auc.json and meta.json."""
    os.makedirs(out_dir, exist_ok=True)
    t0 = time.perf_counter()
    records = run_experiment_records(config, workers=workers)
    total = time.perf_counter() - t0
    write_scores_csv(os.path.join(out_dir, "scores.csv"), records)
    write_auc_json(os.path.join(out_dir, "auc.json"), records, config)
    meta = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "total_wall_time_s": total,
        "mean_trial_wall_time_s": (sum(r.wall_time for r in records)
                                   / max(1, len(records))),
        "records": len(records),
    }
    with open(os.path.join(out_dir, "meta.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return meta

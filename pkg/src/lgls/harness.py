"""Monte Carlo schedule-length experiment over random topologies."""
from __future__ import annotations

import csv
import io
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .baseline import OPTIMAL_MAX_LINKS, gp_schedule, optimal_schedule
from .line_graph import build_line_graph
from .radio import (
    DEFAULT_ALPHA,
    DEFAULT_GAMMA_DB,
    DEFAULT_NOISE_DBM,
    DEFAULT_POWER_MW,
    DEFAULT_SIDE_M,
    RadioParams,
)
from .schedule import Schedule, format_reports, node_conflicts, verify_schedule
from .scheduler import lgls_schedule
from .topology import CommGraph, build_comm_graph, generate_topology, save_topology

log = logging.getLogger(__name__)

ALGORITHMS = ("lgls", "gp", "optimal")
RESULT_HEADER = ["n", "trial", "algo", "links", "schedule_length", "runtime_ms", "verified"]
SUMMARY_HEADER = ["n", "algo", "mean_len", "std_len"]


class VerificationError(RuntimeError):
    """A scheduler produced a slot that fails the SINR check."""

    def __init__(self, message: str, topology_path: Optional[Path] = None):
        super().__init__(message)
        self.topology_path = topology_path


@dataclass(frozen=True)
class ExperimentConfig:
    node_counts: Tuple[int, ...] = tuple(range(25, 251, 25))
    trials: int = 200
    side: float = DEFAULT_SIDE_M
    power_mw: float = DEFAULT_POWER_MW
    noise_dbm: float = DEFAULT_NOISE_DBM
    gamma_db: float = DEFAULT_GAMMA_DB
    alpha: float = DEFAULT_ALPHA
    algorithms: Tuple[str, ...] = ("lgls", "gp")
    master_seed: int = 0
    ordering: str = "interference-degree"
    deterministic: bool = False
    # wall-clock columns make output bytes run-dependent
    timing: bool = False
    workers: int = 1
    repro_dir: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.node_counts:
            raise ValueError("node_counts must be non-empty")
        if any(n < 1 for n in self.node_counts):
            raise ValueError("node counts must be >= 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown or not self.algorithms:
            raise ValueError(f"algorithms must be a non-empty subset of {ALGORITHMS}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        self.params  # validates radio parameters

    @property
    def params(self) -> RadioParams:
        return RadioParams.from_db(
            power_mw=self.power_mw,
            noise_dbm=self.noise_dbm,
            gamma_db=self.gamma_db,
            alpha=self.alpha,
        )


@dataclass(frozen=True)
class ResultRow:
    n: int
    trial: int
    algo: str
    links: int
    schedule_length: int
    runtime_ms: Optional[float]
    verified: bool

    def as_csv_row(self) -> List[str]:
        runtime = "" if self.runtime_ms is None else f"{self.runtime_ms:.3f}"
        return [str(self.n), str(self.trial), self.algo, str(self.links),
                str(self.schedule_length), runtime, str(self.verified).lower()]


def trial_seed(master_seed: int, n: int, trial: int) -> int:
    """Seed for one (n, trial) cell.

    First 64-bit word of ``numpy.random.SeedSequence([master_seed, n, trial])``.
    Depends only on these three values, so any slice of an experiment
    regenerates the same topologies, and every algorithm sees the same one.
    """
    state = np.random.SeedSequence([master_seed, n, trial]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def run_algorithm(
    algo: str,
    g: CommGraph,
    params: RadioParams,
    seed: Optional[int] = None,
    *,
    ordering: str = "interference-degree",
    deterministic: bool = False,
) -> Schedule:
    if algo == "lgls":
        return lgls_schedule(build_line_graph(g, params), seed, deterministic=deterministic)
    if algo == "gp":
        return gp_schedule(g, params, ordering=ordering, seed=seed)
    if algo == "optimal":
        return optimal_schedule(g, params)
    raise ValueError(f"unknown algorithm {algo!r}")


def _verify_or_raise(g: CommGraph, params: RadioParams, s: Schedule, label: str, repro_dir: Optional[Path]) -> None:
    reports = verify_schedule(g, params, s)
    conflicts = node_conflicts(g, s)
    if all(r.feasible for r in reports) and not conflicts:
        return
    path = None
    if repro_dir is not None:
        repro_dir.mkdir(parents=True, exist_ok=True)
        path = repro_dir / f"failed_{label}.csv"
        save_topology(g.nodes, path)
    raise VerificationError(
        f"{label}: schedule failed verification (node conflicts: {conflicts[:5]})\n"
        + format_reports(reports)
        + (f"\ntopology saved to {path}" if path else ""),
        path,
    )


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> List[ResultRow]:
    params = cfg.params
    seed = trial_seed(cfg.master_seed, n, trial)
    g = build_comm_graph(generate_topology(n, cfg.side, seed), params)
    rows = []
    for algo in cfg.algorithms:
        if algo == "optimal" and g.num_links > OPTIMAL_MAX_LINKS:
            log.warning("n=%d trial=%d: %d links exceed the optimal search cap, skipped", n, trial, g.num_links)
            continue
        start = time.perf_counter()
        s = run_algorithm(algo, g, params, seed, ordering=cfg.ordering, deterministic=cfg.deterministic)
        elapsed = (time.perf_counter() - start) * 1e3
        _verify_or_raise(g, params, s, f"n{n}_trial{trial}_{algo}", cfg.repro_dir)
        rows.append(ResultRow(n, trial, algo, g.num_links, s.num_slots,
                              elapsed if cfg.timing else None, True))
    return rows


def _run_cell(args: Tuple[ExperimentConfig, int, int]) -> List[ResultRow]:
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig) -> List[ResultRow]:
    """All trials for all node counts, sorted by (n, trial, algorithm order)."""
    cells = [(cfg, n, t) for n in cfg.node_counts for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            batches = list(pool.map(_run_cell, cells, chunksize=4))
    else:
        batches = [_run_cell(c) for c in cells]
    rank = {a: k for k, a in enumerate(ALGORITHMS)}
    rows = [r for batch in batches for r in batch]
    rows.sort(key=lambda r: (r.n, r.trial, rank[r.algo]))
    return rows


def summarize(rows: Sequence[ResultRow]) -> List[Tuple[int, str, float, float]]:
    """(n, algo, mean length, sample std of length) per group."""
    groups: Dict[Tuple[int, str], List[int]] = {}
    for r in rows:
        groups.setdefault((r.n, r.algo), []).append(r.schedule_length)
    rank = {a: k for k, a in enumerate(ALGORITHMS)}
    out = []
    for (n, algo), lengths in sorted(groups.items(), key=lambda kv: (kv[0][0], rank[kv[0][1]])):
        std = statistics.stdev(lengths) if len(lengths) > 1 else 0.0
        out.append((n, algo, statistics.fmean(lengths), std))
    return out


def results_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_HEADER)
    for r in rows:
        writer.writerow(r.as_csv_row())
    return buf.getvalue()


def summary_csv(summary: Sequence[Tuple[int, str, float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for n, algo, mean, std in summary:
        writer.writerow([n, algo, f"{mean:.6f}", f"{std:.6f}"])
    return buf.getvalue()


def read_results(path: Union[str, Path]) -> List[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            ResultRow(int(d["n"]), int(d["trial"]), d["algo"], int(d["links"]),
                      int(d["schedule_length"]),
                      float(d["runtime_ms"]) if d["runtime_ms"] else None,
                      d["verified"] == "true")
            for d in reader
        ]


def write_outputs(rows: Sequence[ResultRow], out: Union[str, Path], summary_out: Optional[Union[str, Path]] = None) -> None:
    out = Path(out)
    out.write_text(results_csv(rows))
    if summary_out is None:
        summary_out = out.with_name(out.stem + "_summary.csv")
    Path(summary_out).write_text(summary_csv(summarize(rows)))


def reduction(summary: Sequence[Tuple[int, str, float, float]], algo: str = "lgls", baseline: str = "gp") -> Dict[int, float]:
    """Relative schedule-length reduction ``1 - mean(algo) / mean(baseline)`` per n."""
    means = {(n, a): m for n, a, m, _ in summary}
    out = {}
    for n, a in sorted(means):
        if a == algo and (n, baseline) in means and means[(n, baseline)] > 0:
            out[n] = 1.0 - means[(n, algo)] / means[(n, baseline)]
    return out

"""Exit criteria, each at its pinned tolerance.

Run alone with ``pytest tests/test_acceptance.py -v``; one PASS/FAIL line per
criterion is printed in the "acceptance criteria" section at the end.
"""
import math
import time

import numpy as np
import pytest

from lgls.baseline import optimal_schedule
from lgls.harness import ExperimentConfig, reduction, results_csv, run_experiment, summarize, write_outputs
from lgls.line_graph import LoadMap, build_line_graph, expand_loads
from lgls.radio import DEFAULT_PARAMS, sinr_feasible
from lgls.schedule import node_conflicts, verify_schedule
from lgls.scheduler import lgls_schedule, theorem1_holds
from lgls.topology import build_comm_graph, generate_topology

SIDE = 3000.0
P = DEFAULT_PARAMS


def comm_graph(n, seed, side=SIDE):
    return build_comm_graph(generate_topology(n, side, seed), P)


def test_c1_safety(acceptance):
    topologies = 100
    bad_slots = conflicts = 0
    for seed in range(topologies):
        g = comm_graph(50, 1000 + seed)
        s = lgls_schedule(build_line_graph(g), seed)
        bad_slots += sum(not r.feasible for r in verify_schedule(g, P, s))
        conflicts += len(node_conflicts(g, s))
    ok = bad_slots == 0 and conflicts == 0
    acceptance("C1 safety", ok, f"{topologies} topologies N=50, infeasible slots={bad_slots}, node-sharing pairs={conflicts}")
    assert ok


def _sample_subset(rng, g, lg, local):
    """Random pairwise non-adjacent subset (size 2-5) with every pairwise w < 1, or None."""
    e = g.num_links
    size = int(rng.integers(2, 6))
    first = int(rng.integers(e))
    if local:
        # neighbours by receiver distance, to hit the infeasible side often
        rx = g.positions[[l.rx for l in g.links]]
        order = np.argsort(np.hypot(*(rx - rx[first]).T))
        pool = [int(i) for i in order[1:40]]
        rng.shuffle(pool)
    else:
        pool = [int(i) for i in rng.permutation(e) if i != first]
    subset = [first]
    for j in pool:
        if len(subset) == size:
            break
        ends = {n for i in subset for n in g.links[i].endpoints}
        if ends & set(g.links[j].endpoints):
            continue
        if all(lg.w[i, j] < 1 and lg.w[j, i] < 1 for i in subset):
            subset.append(j)
    return subset if len(subset) == size else None


def test_c2_theorem1_equivalence(acceptance):
    rng = np.random.default_rng(20240601)
    target = 10_000
    checked = mismatches = holds = 0
    seed = 0
    while checked < target:
        g = comm_graph(int(rng.integers(40, 120)), 5000 + seed)
        seed += 1
        if g.num_links < 10:
            continue
        lg = build_line_graph(g)
        for k in range(200):
            subset = _sample_subset(rng, g, lg, local=k % 2 == 0)
            if subset is None:
                continue
            predicted = theorem1_holds(lg, subset)
            rep = sinr_feasible(P, [(tuple(g.positions[g.links[i].tx]), tuple(g.positions[g.links[i].rx])) for i in subset])
            actual = all(x > P.gamma_lin for x in rep.sinr)
            mismatches += predicted != actual
            holds += predicted
            checked += 1
    ok = mismatches == 0 and 0 < holds < checked
    acceptance("C2 theorem-1 equivalence", ok,
               f"{checked} subsets, {holds} feasible / {checked - holds} infeasible, mismatches={mismatches}")
    assert ok


def test_c3_fig1_reproduction(acceptance, tmp_path):
    cfg = ExperimentConfig(node_counts=(25, 50, 75, 100), trials=50, algorithms=("lgls", "gp"), master_seed=1)
    rows = run_experiment(cfg)
    write_outputs(rows, tmp_path / "fig1.csv")
    summary = summarize(rows)
    means = {(n, a): m for n, a, m, _ in summary}
    ratios = {n: means[(n, "lgls")] / means[(n, "gp")] for n in cfg.node_counts}
    red = reduction(summary)
    within_bar = all(r <= 0.6 for r in ratios.values())
    growing = all(red[a] < red[b] for a, b in zip(cfg.node_counts, cfg.node_counts[1:]))
    detail = ", ".join(f"N={n}: lgls {means[(n, 'lgls')]:.2f} gp {means[(n, 'gp')]:.2f} ratio {ratios[n]:.3f}"
                       for n in cfg.node_counts)
    acceptance("C3 Fig.1 reproduction (ratio <= 0.6, reduction grows with N)", within_bar and growing, detail)
    assert within_bar, ratios
    assert growing, red


def _small_instances(count, max_links, rng):
    seed = 0
    while count:
        seed += 1
        g = comm_graph(int(rng.integers(2, 7)), 9000 + seed, side=float(rng.choice([400.0, 700.0, 1000.0])))
        if 1 <= g.num_links <= max_links:
            count -= 1
            yield seed, g


def test_c4_optimal_lower_bound(acceptance):
    rng = np.random.default_rng(4)
    violations = 0
    ratios = []
    for seed, g in _small_instances(500, 8, rng):
        opt = optimal_schedule(g).num_slots
        got = lgls_schedule(build_line_graph(g), seed).num_slots
        violations += not (opt <= got <= g.num_links)
        ratios.append(got / opt)
    ok = violations == 0
    acceptance("C4 optimal lower bound", ok,
               f"500 instances <= 8 links, violations={violations}, mean lgls/optimal={np.mean(ratios):.4f}")
    assert ok


def test_c5_non_uniform_load(acceptance):
    rng = np.random.default_rng(5)
    k = 5
    violations = topologies = 0
    for seed in range(30):
        g = comm_graph(40, 7000 + seed)
        if not g.links:
            continue
        topologies += 1
        loads = LoadMap({l.id: int(rng.integers(1, k + 1)) for l in g.links}, max_ratio=k)
        ex = expand_loads(g, loads)
        s = lgls_schedule(build_line_graph(ex), seed)
        for link in g.links:
            slots = [s.colors[r.id] for r in ex.links if r.physical == link.id]
            violations += len(slots) != loads.demand(link.id) or len(set(slots)) != len(slots)
        violations += sum(not r.feasible for r in verify_schedule(ex, P, s))
        violations += len(node_conflicts(ex, s))
    ok = violations == 0
    acceptance("C5 non-uniform load", ok, f"{topologies} topologies, demands in [1, {k}], violations={violations}")
    assert ok


def _phase4_seconds(lg, repeats=3):
    best = math.inf
    for r in range(repeats):
        start = time.perf_counter()
        lgls_schedule(lg, r)
        best = min(best, time.perf_counter() - start)
    return best


def test_c6_empirical_complexity(acceptance):
    # links grow ~ N^2, so N * sqrt(2) roughly doubles e
    sizes = (50, 71, 100, 141, 200)
    points = []
    for n in sizes:
        es, ts = [], []
        for seed in range(3):
            lg = build_line_graph(comm_graph(n, 300 + seed))
            es.append(lg.link_count)
            ts.append(_phase4_seconds(lg))
        points.append((float(np.mean(es)), float(np.mean(ts))))
    factors = []
    for (e1, t1), (e2, t2) in zip(points, points[1:]):
        factors.append((t2 / t1) ** (1.0 / math.log2(e2 / e1)))
    ok = all(f <= 5.0 for f in factors)
    detail = "; ".join(f"e={e:.0f} t={1e3 * t:.1f}ms" for e, t in points)
    detail += " | growth per doubling: " + ", ".join(f"{f:.2f}" for f in factors)
    acceptance("C6 empirical complexity (<= 5x per doubling)", ok, detail)
    assert ok


def test_c7_determinism(acceptance, tmp_path):
    cfg = ExperimentConfig(node_counts=(25, 50, 75), trials=5, algorithms=("lgls", "gp"), master_seed=77)
    write_outputs(run_experiment(cfg), tmp_path / "a.csv")
    write_outputs(run_experiment(cfg), tmp_path / "b.csv")
    same = (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    same_summary = (tmp_path / "a_summary.csv").read_bytes() == (tmp_path / "b_summary.csv").read_bytes()
    ok = same and same_summary
    acceptance("C7 determinism", ok, "result and summary CSVs byte-identical" if ok else "outputs differ")
    assert ok

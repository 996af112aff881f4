"""Command line entry point: ``lgls schedule`` and ``lgls experiment``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .baseline import ORDERINGS
from .harness import (
    ALGORITHMS,
    ExperimentConfig,
    VerificationError,
    reduction,
    run_algorithm,
    run_experiment,
    summarize,
    summary_csv,
    write_outputs,
)
from .line_graph import LoadMap, expand_loads
from .radio import (
    DEFAULT_ALPHA,
    DEFAULT_GAMMA_DB,
    DEFAULT_NOISE_DBM,
    DEFAULT_POWER_MW,
    DEFAULT_SIDE_M,
    RadioParams,
    DegenerateGeometryError,
)
from .schedule import format_reports, node_conflicts, schedule_to_csv, verify_schedule
from .topology import TopologyError, build_comm_graph, generate_topology, load_topology

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_radio_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--side", type=float, default=DEFAULT_SIDE_M, help="square side in meters (default: %(default)s)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="path-loss exponent (default: %(default)s)")
    p.add_argument("--gamma-db", type=float, default=DEFAULT_GAMMA_DB, help="SINR threshold in dB (default: %(default)s)")
    p.add_argument("--power-mw", type=float, default=DEFAULT_POWER_MW, help="transmit power in mW (default: %(default)s)")
    p.add_argument("--noise-dbm", type=float, default=DEFAULT_NOISE_DBM, help="noise power in dBm (default: %(default)s)")
    p.add_argument("--ordering", choices=ORDERINGS, default="interference-degree", help="link order for gp")
    p.add_argument("--deterministic", action="store_true", help="lgls opens each slot with the lowest-id link instead of a random one")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lgls", description="STDMA link scheduling under the SINR model")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sch = sub.add_parser("schedule", help="schedule one topology and print the schedule CSV")
    src = sch.add_mutually_exclusive_group()
    src.add_argument("--topology", type=Path, help="topology CSV (id,x,y)")
    src.add_argument("--nodes", type=int, help="generate this many random nodes from --seed")
    sch.add_argument("--algo", choices=ALGORITHMS, default="lgls")
    sch.add_argument("--loads", type=Path, help="per-link demands CSV (link_id,demand)")
    sch.add_argument("--report", action="store_true", help="print the per-slot SINR report to stderr")
    _add_radio_args(sch)

    exp = sub.add_parser("experiment", help="schedule length versus node count over random topologies")
    exp.add_argument("--nodes", type=_int_list, default=list(range(25, 251, 25)), help="comma-separated node counts")
    exp.add_argument("--trials", type=int, default=200)
    exp.add_argument("--algo", type=lambda s: s.split(","), default=["lgls", "gp"], help="comma-separated subset of lgls,gp,optimal")
    exp.add_argument("--workers", type=int, default=1)
    exp.add_argument("--timing", action="store_true", help="fill runtime_ms (output then differs between runs)")
    exp.add_argument("--summary", type=Path, default=None, help="aggregate CSV path (default: <out>_summary.csv)")
    _add_radio_args(exp)
    return parser


def _params(args: argparse.Namespace) -> RadioParams:
    return RadioParams.from_db(power_mw=args.power_mw, noise_dbm=args.noise_dbm,
                               gamma_db=args.gamma_db, alpha=args.alpha)


def cmd_schedule(args: argparse.Namespace) -> int:
    params = _params(args)
    if args.topology is not None:
        nodes = load_topology(args.topology)
    else:
        nodes = generate_topology(args.nodes or 25, args.side, args.seed)
    g = build_comm_graph(nodes, params)
    loaded = args.loads is not None
    if loaded:
        g = expand_loads(g, LoadMap.from_csv(args.loads), strict=False)
    s = run_algorithm(args.algo, g, params, args.seed, ordering=args.ordering, deterministic=args.deterministic)
    reports = verify_schedule(g, params, s)
    ok = all(r.feasible for r in reports) and not node_conflicts(g, s)
    if args.report or not ok:
        print(format_reports(reports), file=sys.stderr)
    if not ok:
        print("error: schedule failed SINR verification", file=sys.stderr)
        return EXIT_VERIFY
    text = schedule_to_csv(g, s, with_algo=args.algo != "lgls", physical_ids=loaded)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        node_counts=tuple(args.nodes),
        trials=args.trials,
        side=args.side,
        power_mw=args.power_mw,
        noise_dbm=args.noise_dbm,
        gamma_db=args.gamma_db,
        alpha=args.alpha,
        algorithms=tuple(args.algo),
        master_seed=args.seed,
        ordering=args.ordering,
        deterministic=args.deterministic,
        timing=args.timing,
        workers=args.workers,
        repro_dir=(args.out.parent if args.out else Path(".")),
    )
    rows = run_experiment(cfg)
    out = args.out or Path("results.csv")
    write_outputs(rows, out, args.summary)
    summary = summarize(rows)
    sys.stdout.write(summary_csv(summary))
    for n, r in reduction(summary).items():
        print(f"n={n}: lgls vs gp reduction {100 * r:.1f}%")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "schedule":
            return cmd_schedule(args)
        return cmd_experiment(args)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (TopologyError, DegenerateGeometryError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

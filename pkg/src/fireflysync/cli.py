"""Command-line front end: single runs, sweeps, CSV analysis, graph validation."""

import argparse
import json
import logging
import os
import sys

import pandas as pd
from numpy.random import Generator, PCG64, SeedSequence

from . import __version__
from .engine import simulate
from .graphs import (Topology, check_topology, complete_topology,
                     generate_geometric, generate_k_regular)
from .harness import PRESETS, SweepSpec, run_sweep
from .metrics import (CSV_HEADER, classify_success, max_amplitude,
                      phase_clusters, time_to_sync)
from .model import ModelParams

log = logging.getLogger("fireflysync")

DEFAULT_OUT = os.environ.get("FIREFLYSYNC_OUT", "results")


def _add_model_flags(p):
    # Defaults are the headline configuration: N=100, C=10, T=1000,
    # theta=f=0.5, sigma=0, fully connected.
    p.add_argument("--n", type=int, default=100, help="number of agents (default 100)")
    p.add_argument("--c", type=int, default=10, help="clock cycle length (default 10)")
    p.add_argument("--t", type=int, default=1000, help="simulation horizon in steps (default 1000)")
    p.add_argument("--theta", type=float, default=0.5, help="quorum threshold (default 0.5)")
    p.add_argument("--f", type=float, default=0.5, help="flash fraction of the cycle (default 0.5)")
    p.add_argument("--sigma", type=float, default=0.0, help="clock-update noise level (default 0)")


def _build_topology(args, params, rng):
    if args.topology == "geometric":
        if args.r is None:
            raise SystemExit("--topology geometric requires --r")
        return generate_geometric(params.n_agents, args.r, rng)
    if args.topology == "regular":
        if args.k is None:
            raise SystemExit("--topology regular requires --k")
        return generate_k_regular(params.n_agents, args.k, rng)
    return complete_topology(params.n_agents)


def cmd_run(args) -> int:
    try:
        params = ModelParams(n_agents=args.n, cycle_len=args.c, horizon=args.t,
                             quorum_threshold=args.theta, flash_fraction=args.f,
                             noise_level=args.sigma)
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    _, topo_ss, _ = SeedSequence(args.seed).spawn(3)
    topology = _build_topology(args, params, Generator(PCG64(topo_ss)))
    init_clocks = None
    if args.init_clocks:
        with open(args.init_clocks) as fh:
            init_clocks = json.load(fh)
    traj = simulate(params, topology, args.seed, init_clocks=init_clocks)
    a_max = max_amplitude(traj)
    success = classify_success(a_max)
    tts = time_to_sync(traj) if success else None
    clusters, sizes = phase_clusters(traj.final_clocks % params.cycle_len, params)
    if args.format == "json":
        print(json.dumps({
            "seed": args.seed, "a_max": a_max, "success": success,
            "time_to_sync": tts, "cluster_count_final": clusters,
            "cluster_sizes": sizes,
        }))
    else:
        print(f"a_max={a_max:.3f} success={success} time_to_sync={tts} "
              f"clusters={clusters} sizes={sizes}")
    if args.trajectory_out:
        traj.export_csv(args.trajectory_out)
        log.info("wrote amplitude series to %s", args.trajectory_out)
    return 0


def cmd_sweep(args) -> int:
    if args.preset:
        spec = PRESETS[args.preset](repetitions=args.reps, base_seed=args.seed,
                                    jobs=args.jobs)
    else:
        with open(args.grid) as fh:
            doc = json.load(fh)
        doc.setdefault("base_seed", args.seed)
        doc.setdefault("jobs", args.jobs)
        if args.reps:
            doc["repetitions"] = args.reps
        spec = SweepSpec.from_dict(doc)
    records = run_sweep(spec, args.out, progress=True)
    by_point = {}
    for rec in records:
        key = (rec.params.n_agents, rec.params.cycle_len, rec.params.quorum_threshold,
               rec.params.flash_fraction, rec.params.noise_level, rec.k_or_r)
        by_point.setdefault(key, []).append(rec)
    print("N,C,theta,f,sigma,k_or_r,runs,success_fraction")
    for key in sorted(by_point):
        group = by_point[key]
        p = sum(r.success for r in group) / len(group)
        print(",".join(str(v) for v in key) + f",{len(group)},{p:.3f}")
    return 0


def cmd_analyze(args) -> int:
    try:
        df = pd.read_csv(args.csv)
    except pd.errors.EmptyDataError:
        print(f"empty CSV: {args.csv}", file=sys.stderr)
        return 2
    except pd.errors.ParserError as exc:
        print(f"malformed CSV {args.csv}: {exc}", file=sys.stderr)
        return 2
    expected = CSV_HEADER.split(",")
    missing = [c for c in args.group_by if c not in df.columns]
    if missing or list(df.columns) != expected:
        print(f"CSV header mismatch; expected {expected}, "
              f"missing group columns {missing}", file=sys.stderr)
        return 2
    if df.empty:
        print(f"no data rows in {args.csv}", file=sys.stderr)
        return 2
    grouped = df.groupby(args.group_by)["success"]
    table = grouped.agg(n_runs="count", success_fraction="mean").reset_index()
    table["ci_half_width"] = 1.96 * (
        table["success_fraction"] * (1 - table["success_fraction"]) / table["n_runs"]
    ) ** 0.5
    print(table.to_string(index=False))
    if args.out:
        table.to_csv(args.out, index=False)
        log.info("wrote tidy table to %s", args.out)
    return 0


def cmd_validate_graph(args) -> int:
    if args.json_in:
        with open(args.json_in) as fh:
            topology = Topology.from_json(fh.read())
    else:
        rng = Generator(PCG64(args.seed))
        if args.topology == "geometric":
            topology = generate_geometric(args.n, args.r, rng)
        elif args.topology == "regular":
            topology = generate_k_regular(args.n, args.k, rng)
        else:
            topology = complete_topology(args.n)
    report = check_topology(topology)
    print(f"symmetric: {report.symmetric}")
    print(f"self_loops: {list(report.self_loops)}")
    print(f"duplicates: {list(report.duplicate_entries)}")
    print(f"degree_histogram: {dict(sorted(report.degree_histogram.items()))}")
    print(f"components: {report.component_count} sizes={list(report.component_sizes)}")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(topology.to_json())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fireflysync",
        description="Quorum-threshold pulse-coupled oscillator simulator",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a single run")
    _add_model_flags(p_run)
    p_run.add_argument("--topology", choices=["complete", "geometric", "regular"],
                       default="complete")
    p_run.add_argument("--r", type=float, help="geometric communication range")
    p_run.add_argument("--k", type=int, help="regular graph degree")
    p_run.add_argument("--seed", type=int, required=True)
    p_run.add_argument("--init-clocks", help="JSON file with explicit initial clocks")
    p_run.add_argument("--trajectory-out", help="write step,amplitude,flashing_count CSV")
    p_run.add_argument("--format", choices=["text", "json"], default="text")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a preset or custom parameter sweep")
    group = p_sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=sorted(PRESETS))
    group.add_argument("--grid", help="JSON file with SweepSpec fields")
    p_sweep.add_argument("--reps", type=int, default=None, help="repetitions per grid point")
    p_sweep.add_argument("--seed", type=int, required=True, help="base seed")
    p_sweep.add_argument("--out", default=DEFAULT_OUT, help="output directory")
    p_sweep.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_sweep.set_defaults(func=cmd_sweep)

    p_an = sub.add_parser("analyze", help="aggregate a results CSV")
    p_an.add_argument("csv")
    p_an.add_argument("--group-by", nargs="+", required=True,
                      help="columns to group by, e.g. n_agents cycle_len")
    p_an.add_argument("--out", help="write the tidy table as CSV")
    p_an.set_defaults(func=cmd_analyze)

    p_vg = sub.add_parser("validate-graph", help="generate or load a topology and audit it")
    p_vg.add_argument("--topology", choices=["complete", "geometric", "regular"],
                      default="regular")
    p_vg.add_argument("--n", type=int, default=100)
    p_vg.add_argument("--r", type=float, default=0.5)
    p_vg.add_argument("--k", type=int, default=19)
    p_vg.add_argument("--seed", type=int, default=0)
    p_vg.add_argument("--json-in", help="load topology from JSON instead of generating")
    p_vg.add_argument("--json-out", help="export the topology as JSON")
    p_vg.set_defaults(func=cmd_validate_graph)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "sweep" and args.preset and args.reps is None:
        args.reps = 50 if args.preset == "fig1" else 100
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

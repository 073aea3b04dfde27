"""Seeded parameter sweeps with incremental CSV persistence and a replayable manifest."""

import dataclasses
import datetime
import itertools
import json
import logging
import multiprocessing
import os
from dataclasses import dataclass

from numpy.random import Generator, PCG64, SeedSequence

from . import __version__
from .engine import simulate
from .graphs import (complete_topology, degree_from_removal, generate_geometric,
                     generate_k_regular)
from .metrics import (CSV_HEADER, RunRecord, SUCCESS_THRESHOLD, classify_success,
                      max_amplitude, phase_clusters, time_to_sync)
from .model import ModelParams

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepSpec:
    """A parameter grid, repetition count, and seed policy.

    Axes are Cartesian-product lists. topology is one of "geometric",
    "regular", "complete"; connectivity lists the r values (geometric), k
    values (regular), or removal sigmas (regular via degree_from_removal,
    when removal_mode is True).
    """

    name: str
    n_agents: tuple
    cycle_len: tuple
    horizon: int
    theta: tuple
    flash_fraction: tuple
    noise_sigma: tuple
    topology: str
    connectivity: tuple  # r values, k values, or removal sigmas
    removal_mode: bool = False
    repetitions: int = 50
    base_seed: int = 0
    jobs: int = 1
    success_threshold: float = SUCCESS_THRESHOLD

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(doc: dict) -> "SweepSpec":
        doc = dict(doc)
        for key in ("n_agents", "cycle_len", "theta", "flash_fraction",
                    "noise_sigma", "connectivity"):
            doc[key] = tuple(doc[key])
        return SweepSpec(**doc)


@dataclass(frozen=True)
class RunConfig:
    """One fully resolved run: parameters, topology request, and its seed."""

    params: ModelParams
    topology: str  # "geometric" | "regular" | "complete"
    k_or_r: float  # r for geometric, k for regular/complete
    seed: int
    point_index: int
    rep_index: int


def _derive_seed(base_seed: int, point_index: int, rep_index: int) -> int:
    state = SeedSequence([base_seed, point_index, rep_index]).generate_state(2)
    return int(state[0]) << 32 | int(state[1])


def expand_grid(spec: SweepSpec):
    """Cartesian product of axes x repetitions with derived seeds.

    Invalid combinations (e.g. f*C < 2, odd n*k) are skipped and returned
    as (point, reason) pairs instead of aborting the sweep.
    """
    configs = []
    skipped = []
    axes = itertools.product(spec.n_agents, spec.cycle_len, spec.theta,
                             spec.flash_fraction, spec.noise_sigma,
                             spec.connectivity)
    for point_index, (n, c, theta, f, sigma, conn) in enumerate(axes):
        point = {"n_agents": n, "cycle_len": c, "theta": theta, "f": f,
                 "sigma": sigma, "connectivity": conn}
        try:
            params = ModelParams(
                n_agents=n, cycle_len=c, horizon=spec.horizon,
                quorum_threshold=theta, flash_fraction=f, noise_level=sigma,
            )
            if spec.topology == "geometric":
                topology, k_or_r = "geometric", float(conn)
            elif spec.topology == "complete":
                topology, k_or_r = "complete", float(n - 1)
            elif spec.removal_mode:
                topology, k_or_r = "regular", float(degree_from_removal(n, conn))
            else:
                topology, k_or_r = "regular", float(conn)
            if topology == "regular":
                k = int(k_or_r)
                if not 1 <= k <= n - 1:
                    raise ValueError(f"degree k={k} outside [1, {n - 1}]")
                if (n * k) % 2 != 0:
                    raise ValueError(f"n*k odd for n={n}, k={k}")
        except ValueError as exc:
            log.warning("skipping grid point %s: %s", point, exc)
            skipped.append((point, str(exc)))
            continue
        for rep in range(spec.repetitions):
            configs.append(RunConfig(
                params=params, topology=topology, k_or_r=k_or_r,
                seed=_derive_seed(spec.base_seed, point_index, rep),
                point_index=point_index, rep_index=rep,
            ))
    return configs, skipped


def execute_run(config: RunConfig, success_threshold: float = SUCCESS_THRESHOLD) -> RunRecord:
    """Sample a fresh topology, simulate, and reduce to a RunRecord."""
    params = config.params
    _, topo_ss, _ = SeedSequence(config.seed).spawn(3)
    topo_rng = Generator(PCG64(topo_ss))
    if config.topology == "geometric":
        topology = generate_geometric(params.n_agents, config.k_or_r, topo_rng)
    elif config.topology == "complete":
        topology = complete_topology(params.n_agents)
    else:
        topology = generate_k_regular(params.n_agents, int(config.k_or_r), topo_rng)
    traj = simulate(params, topology, config.seed)
    a_max = max_amplitude(traj)
    success = classify_success(a_max, success_threshold)
    clusters, _ = phase_clusters(traj.final_clocks % params.cycle_len, params)
    return RunRecord(
        seed=config.seed,
        params=params,
        topology_kind=config.topology,
        k_or_r=config.k_or_r,
        a_max=a_max,
        success=success,
        time_to_sync=time_to_sync(traj, success_threshold) if success else None,
        cluster_count_final=clusters,
    )


def _worker(args):
    config, threshold = args
    return execute_run(config, threshold)


def run_sweep(spec: SweepSpec, out_dir, progress: bool = False):
    """Execute every valid config of the sweep, appending rows as they finish.

    Writes <name>.csv and <name>.manifest.json into out_dir and returns the
    list of RunRecords. The manifest plus this package fully determine the
    CSV contents (up to row order; sort by seed to compare).
    """
    os.makedirs(out_dir, exist_ok=True)
    configs, skipped = expand_grid(spec)
    csv_path = os.path.join(out_dir, f"{spec.name}.csv")
    manifest_path = os.path.join(out_dir, f"{spec.name}.manifest.json")
    manifest = {
        "spec": spec.to_dict(),
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "base_seed": spec.base_seed,
        "skipped_points": [{"point": p, "reason": r} for p, r in skipped],
    }
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)

    records = []
    tasks = [(c, spec.success_threshold) for c in configs]
    with open(csv_path, "w", buffering=1) as fh:
        fh.write(CSV_HEADER + "\n")
        if spec.jobs > 1:
            with multiprocessing.Pool(spec.jobs) as pool:
                for idx, rec in enumerate(pool.imap_unordered(_worker, tasks)):
                    records.append(rec)
                    fh.write(rec.to_csv_row() + "\n")
                    if progress and (idx + 1) % 50 == 0:
                        log.info("%s: %d/%d runs done", spec.name, idx + 1, len(tasks))
        else:
            for idx, task in enumerate(tasks):
                rec = _worker(task)
                records.append(rec)
                fh.write(rec.to_csv_row() + "\n")
                if progress and (idx + 1) % 50 == 0:
                    log.info("%s: %d/%d runs done", spec.name, idx + 1, len(tasks))
    return records


def replay_manifest(manifest_path, out_dir):
    """Re-run the sweep recorded in a manifest; reproduces the CSV rows."""
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    spec = SweepSpec.from_dict(manifest["spec"])
    return run_sweep(spec, out_dir)


def preset_fig1(repetitions: int = 50, base_seed: int = 1, jobs: int = 1) -> SweepSpec:
    """Quorum-threshold vs flash-duration grid over geometric connectivity.

    f=0.1 points are carried in the axis and dropped by validation
    (f*C < 2 at C=10); the skip is logged in the manifest.
    """
    return SweepSpec(
        name="fig1",
        n_agents=(100,), cycle_len=(10,), horizon=1000,
        theta=tuple(round(0.1 * i, 1) for i in range(1, 10)),
        flash_fraction=tuple(round(0.1 * i, 1) for i in range(1, 10)),
        noise_sigma=(0.0,),
        topology="geometric",
        connectivity=tuple(round(0.05 * i, 2) for i in range(1, 21)),
        repetitions=repetitions, base_seed=base_seed, jobs=jobs,
    )


def preset_fig3_noise(repetitions: int = 100, base_seed: int = 3, jobs: int = 1) -> SweepSpec:
    """Clock-update noise sweep over (N, C) at full connectivity."""
    return SweepSpec(
        name="fig3_noise",
        n_agents=tuple(range(50, 191, 10)),
        cycle_len=tuple(range(10, 71, 10)),
        horizon=10_000,
        theta=(0.5,), flash_fraction=(0.5,),
        noise_sigma=(0.0, 0.1, 0.3, 0.5, 0.7),
        topology="complete",
        connectivity=(0.0,),  # unused for complete topology
        repetitions=repetitions, base_seed=base_seed, jobs=jobs,
    )


def preset_fig3_removal(repetitions: int = 100, base_seed: int = 4, jobs: int = 1) -> SweepSpec:
    """Link-removal sweep over (N, C): degree k = N-1-floor(sigma*N), fresh
    connected k-regular graph per run."""
    return SweepSpec(
        name="fig3_removal",
        n_agents=tuple(range(50, 191, 10)),
        cycle_len=tuple(range(10, 71, 10)),
        horizon=10_000,
        theta=(0.5,), flash_fraction=(0.5,),
        noise_sigma=(0.0,),
        topology="regular",
        connectivity=(0.0, 0.3, 0.5, 0.8, 0.9),
        removal_mode=True,
        repetitions=repetitions, base_seed=base_seed, jobs=jobs,
    )


def preset_parity(repetitions: int = 100, base_seed: int = 5, jobs: int = 1) -> SweepSpec:
    """Odd vs even degree at sparse connectivity (qualitative comparison)."""
    return SweepSpec(
        name="parity",
        n_agents=(100,), cycle_len=(10,), horizon=10_000,
        theta=(0.5,), flash_fraction=(0.5,),
        noise_sigma=(0.0,),
        topology="regular",
        connectivity=(19.0, 20.0),
        repetitions=repetitions, base_seed=base_seed, jobs=jobs,
    )


PRESETS = {
    "fig1": preset_fig1,
    "fig3-noise": preset_fig3_noise,
    "fig3-removal": preset_fig3_removal,
    "parity": preset_parity,
}

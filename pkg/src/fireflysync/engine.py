"""Simulation loop: sequential per-agent updates with quorum acceleration.

Within each step, agents update in ascending index order and the quorum
count reads live flash flags, so lower-indexed agents already reflect the
current step. A run is deterministic given (params, topology, seed).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit
from numpy.random import Generator, PCG64, SeedSequence

from .graphs import Topology
from .model import ModelParams, flash_start_phase, noisy_update, quorum_decision


@dataclass
class SwarmState:
    """Clocks and derived flash flags of the whole population at one step."""

    clocks: np.ndarray  # int64, unbounded counters
    step: int
    params: ModelParams

    @property
    def phases(self) -> np.ndarray:
        return self.clocks % self.params.cycle_len

    @property
    def flash_flags(self) -> np.ndarray:
        return self.phases >= flash_start_phase(self.params)

    @property
    def amplitude(self) -> float:
        return float(self.flash_flags.sum()) / self.params.n_agents


@dataclass
class Trajectory:
    """Outcome of one run: per-step amplitudes plus optional clock snapshots."""

    amplitude_series: np.ndarray  # float64, length T
    rng_seed: object
    params: ModelParams
    topology_summary: dict
    final_clocks: np.ndarray
    snapshots: Optional[dict] = field(default=None)  # step -> clock vector

    def export_csv(self, path):
        n = self.params.n_agents
        with open(path, "w") as fh:
            fh.write("step,amplitude,flashing_count\n")
            for t, a in enumerate(self.amplitude_series, start=1):
                fh.write(f"{t},{float(a)!r},{round(float(a) * n)}\n")


def _spawn_streams(seed):
    """Derive the (init, topology, noise) sub-streams from a master seed."""
    ss = seed if isinstance(seed, SeedSequence) else SeedSequence(seed)
    return ss.spawn(3)


def init_state(params: ModelParams, rng_seed) -> SwarmState:
    """Clocks i.i.d. uniform over {0, ..., C-1}."""
    init_ss, _, _ = _spawn_streams(rng_seed)
    rng = Generator(PCG64(init_ss))
    clocks = rng.integers(0, params.cycle_len, size=params.n_agents, dtype=np.int64)
    return SwarmState(clocks=clocks, step=0, params=params)


def init_state_explicit(params: ModelParams, clocks) -> SwarmState:
    """State with exactly the given clocks (for constructed initial conditions)."""
    arr = np.asarray(clocks, dtype=np.int64)
    if arr.shape != (params.n_agents,):
        raise ValueError(f"expected {params.n_agents} clocks, got shape {arr.shape}")
    if arr.min() < 0 or arr.max() > params.cycle_len - 1:
        raise ValueError(f"clocks must lie in [0, {params.cycle_len - 1}]")
    return SwarmState(clocks=arr.copy(), step=0, params=params)


def step(state: SwarmState, topology: Topology, params: ModelParams,
         rng: Optional[Generator] = None) -> SwarmState:
    """Advance the swarm by one full sequential sweep.

    Each agent: clock += 1; if its new phase is the quorum-check phase
    (flash_start + 1), count flashing neighbors from live flags, apply the
    (possibly noise-inverted) quorum decision, and advance once more if it
    holds. Noise draws are taken only at the check phase and only when
    noise_level > 0, so the sigma=0 stream is untouched.
    """
    if topology.n_agents != params.n_agents:
        raise ValueError("topology size does not match params.n_agents")
    s = flash_start_phase(params)
    check_phase = s + 1
    c = params.cycle_len
    clocks = state.clocks.copy()
    flash = (clocks % c) >= s
    for i in range(params.n_agents):
        clocks[i] += 1
        phase = clocks[i] % c
        flash[i] = phase >= s
        if phase == check_phase:
            nbrs = topology.neighbor_lists[i]
            m = sum(1 for j in nbrs if flash[j])
            decision = quorum_decision(m, len(nbrs), params)
            if params.noise_level > 0.0:
                xi = rng.random() < params.noise_level
                decision = noisy_update(decision, xi)
            if decision:
                clocks[i] += 1
                flash[i] = (clocks[i] % c) >= s
    return SwarmState(clocks=clocks, step=state.step + 1, params=params)


@njit(cache=True)
def _run_kernel(clocks, offsets, neighbors, cycle_len, flash_start, theta,
                horizon, sigma, noise_draws, record_clocks):
    n = clocks.shape[0]
    check_phase = flash_start + 1
    flash = np.empty(n, np.bool_)
    for i in range(n):
        flash[i] = (clocks[i] % cycle_len) >= flash_start
    amplitude = np.empty(horizon, np.float64)
    if record_clocks:
        clock_log = np.empty((horizon, n), np.int64)
    else:
        clock_log = np.empty((0, n), np.int64)
    draw_idx = 0
    for t in range(horizon):
        for i in range(n):
            clocks[i] += 1
            phase = clocks[i] % cycle_len
            flash[i] = phase >= flash_start
            if phase == check_phase:
                m = 0
                for jj in range(offsets[i], offsets[i + 1]):
                    if flash[neighbors[jj]]:
                        m += 1
                deg = offsets[i + 1] - offsets[i]
                decision = m > theta * deg
                if sigma > 0.0:
                    xi = noise_draws[draw_idx] < sigma
                    draw_idx += 1
                    decision = decision != xi
                if decision:
                    clocks[i] += 1
                    flash[i] = (clocks[i] % cycle_len) >= flash_start
        count = 0
        for i in range(n):
            if flash[i]:
                count += 1
        amplitude[t] = count / n
        if record_clocks:
            for i in range(n):
                clock_log[t, i] = clocks[i]
    return amplitude, clock_log, draw_idx


def simulate(params: ModelParams, topology: Topology, rng_seed,
             snapshot_interval: Optional[int] = None,
             init_clocks=None) -> Trajectory:
    """Run the full horizon and record the amplitude after every sweep.

    snapshot_interval=k keeps the clock vector every k-th step (1 = every
    step); None keeps none. init_clocks bypasses the random initialization.
    """
    if topology.n_agents != params.n_agents:
        raise ValueError("topology size does not match params.n_agents")
    if init_clocks is not None:
        state = init_state_explicit(params, init_clocks)
    else:
        state = init_state(params, rng_seed)
    _, _, noise_ss = _spawn_streams(rng_seed)

    sigma = params.noise_level
    if sigma > 0.0:
        # Upper bound on quorum-check events: one per cycle traversal, and
        # clocks gain at most 2 per step.
        cap = params.n_agents * (2 * params.horizon // params.cycle_len + 2)
        noise_draws = Generator(PCG64(noise_ss)).random(cap)
    else:
        noise_draws = np.empty(0, dtype=np.float64)

    offsets, neighbors = topology.to_csr()
    record = snapshot_interval is not None
    work_clocks = state.clocks.copy()
    amplitude, clock_log, _ = _run_kernel(
        work_clocks, offsets, neighbors,
        params.cycle_len, flash_start_phase(params), params.quorum_threshold,
        params.horizon, sigma, noise_draws, record,
    )
    snapshots = None
    if record:
        snapshots = {
            t + 1: clock_log[t].copy()
            for t in range(params.horizon)
            if (t + 1) % snapshot_interval == 0 or t == params.horizon - 1
        }
    final_clocks = work_clocks  # kernel mutates its clock argument in place
    degs = topology.degrees
    summary = {
        "kind": topology.kind,
        "param": topology.provenance[1],
        "degree_min": int(min(degs)),
        "degree_max": int(max(degs)),
    }
    return Trajectory(
        amplitude_series=amplitude,
        rng_seed=rng_seed,
        params=params,
        topology_summary=summary,
        final_clocks=final_clocks,
        snapshots=snapshots,
    )

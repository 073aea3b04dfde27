"""Discrete-time quorum-threshold pulse-coupled oscillator simulator."""

__version__ = "0.1.0"

from .model import (ModelParams, StepDecision, flash_start_phase, is_flashing,
                    noisy_update, quorum_decision)
from .graphs import (Topology, check_topology, complete_topology,
                     degree_from_removal, from_edges, generate_geometric,
                     generate_k_regular)
from .engine import SwarmState, Trajectory, init_state, init_state_explicit, simulate, step
from .metrics import (RunRecord, SUCCESS_THRESHOLD, classify_success, max_amplitude,
                      phase_clusters, success_fraction, time_to_sync)
from .harness import (PRESETS, RunConfig, SweepSpec, execute_run, expand_grid,
                      replay_manifest, run_sweep)

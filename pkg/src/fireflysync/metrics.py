"""Outcome measures over trajectories: A_max, success, time-to-sync, clusters."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import ModelParams

SUCCESS_THRESHOLD = 0.85

CSV_HEADER = ("seed,n_agents,cycle_len,horizon,theta,f,sigma,"
              "topology,k_or_r,a_max,success,time_to_sync,cluster_count_final")


@dataclass(frozen=True)
class RunRecord:
    """Per-run outcome row."""

    seed: int
    params: ModelParams
    topology_kind: str
    k_or_r: float
    a_max: float
    success: bool
    time_to_sync: Optional[int]
    cluster_count_final: Optional[int] = None

    def to_csv_row(self) -> str:
        p = self.params
        tts = "" if self.time_to_sync is None else str(self.time_to_sync)
        clusters = "" if self.cluster_count_final is None else str(self.cluster_count_final)
        return (f"{self.seed},{p.n_agents},{p.cycle_len},{p.horizon},"
                f"{p.quorum_threshold!r},{p.flash_fraction!r},{p.noise_level!r},"
                f"{self.topology_kind},{self.k_or_r!r},{self.a_max!r},"
                f"{int(self.success)},{tts},{clusters}")


def max_amplitude(traj) -> float:
    """Largest fraction of agents flashing simultaneously over the run."""
    series = np.asarray(traj.amplitude_series)
    if series.size == 0:
        raise ValueError("empty amplitude series")
    return float(series.max())


def classify_success(a_max: float, threshold: float = SUCCESS_THRESHOLD) -> bool:
    """A run succeeds when a_max reaches the threshold (inclusive)."""
    if not 0.0 <= a_max <= 1.0:
        raise ValueError(f"a_max must be in [0,1], got {a_max}")
    return a_max >= threshold


def time_to_sync(traj, threshold: float = SUCCESS_THRESHOLD) -> Optional[int]:
    """First step (1-based) at which the amplitude reaches the threshold."""
    series = np.asarray(traj.amplitude_series)
    hits = np.flatnonzero(series >= threshold)
    if hits.size == 0:
        return None
    return int(hits[0]) + 1


def phase_clusters(phases, params: ModelParams, gap_threshold: int = 1):
    """Group occupied phase bins on the cycle into clusters.

    Clusters are maximal circular runs of occupied bins separated by gaps of
    at least gap_threshold consecutive empty bins. Returns (count, sizes)
    with sizes as agent counts per cluster, largest first. This diagnostic
    is descriptive only; nothing in the dynamics depends on it.
    """
    c = params.cycle_len
    phases = np.asarray(phases)
    if phases.size and (phases.min() < 0 or phases.max() >= c):
        raise ValueError(f"phases must lie in [0, {c - 1}]")
    counts = np.bincount(phases, minlength=c)
    occupied = np.flatnonzero(counts > 0)
    if occupied.size == 0:
        return 0, []
    # Circular gaps between consecutive occupied bins.
    gaps = np.diff(occupied) - 1
    wrap_gap = (occupied[0] + c - occupied[-1]) - 1
    breaks = [idx for idx, g in enumerate(gaps) if g >= gap_threshold]
    if not breaks and wrap_gap < gap_threshold:
        return 1, [int(counts.sum())]
    # Split occupied bins at break positions; the wrap gap, when large
    # enough, separates the last segment from the first; otherwise they merge.
    segments = []
    start = 0
    for b in breaks:
        segments.append(occupied[start:b + 1])
        start = b + 1
    segments.append(occupied[start:])
    if wrap_gap < gap_threshold and len(segments) > 1:
        segments[0] = np.concatenate([segments[-1], segments[0]])
        segments.pop()
    sizes = sorted((int(counts[seg].sum()) for seg in segments), reverse=True)
    return len(sizes), sizes


def success_fraction(records):
    """Fraction of successful records with a 95% normal-approximation half-width."""
    records = list(records)
    if not records:
        raise ValueError("no records")
    n = len(records)
    p = sum(1 for r in records if r.success) / n
    half_width = 1.96 * math.sqrt(p * (1.0 - p) / n)
    return p, half_width

"""Core model definitions: parameters, flash window, quorum rule, noisy updates.

Everything here is a pure function of its inputs. The flashing state is
always a predicate on the phase (phase >= flash_start), never a stored
toggle, so it can never get stuck out of sync with the clock.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """All scalar knobs of a single run.

    n_agents      number of agents (N)
    cycle_len     clock cycle length in ticks (C)
    horizon       number of simulation steps (T)
    quorum_threshold   fraction of flashing neighbors that must be strictly
                       exceeded to trigger the extra tick (theta)
    flash_fraction     fraction of the cycle spent flashing (f)
    noise_level        per-decision probability of inverting the quorum
                       decision (sigma)
    """

    n_agents: int
    cycle_len: int
    horizon: int
    quorum_threshold: float = 0.5
    flash_fraction: float = 0.5
    noise_level: float = 0.0

    def __post_init__(self):
        if self.n_agents < 2:
            raise ValueError(f"n_agents must be >= 2, got {self.n_agents}")
        if self.cycle_len < 1:
            raise ValueError(f"cycle_len must be positive, got {self.cycle_len}")
        if self.horizon < self.cycle_len:
            raise ValueError(
                f"horizon ({self.horizon}) must be >= cycle_len ({self.cycle_len})"
            )
        if not 0.0 <= self.quorum_threshold <= 1.0:
            raise ValueError(f"quorum_threshold must be in [0,1], got {self.quorum_threshold}")
        if not 0.0 < self.flash_fraction <= 1.0:
            raise ValueError(f"flash_fraction must be in (0,1], got {self.flash_fraction}")
        if not 0.0 <= self.noise_level <= 1.0:
            raise ValueError(f"noise_level must be in [0,1], got {self.noise_level}")
        s = flash_start_phase(self)
        # The quorum check happens at phase s+1; it must lie inside the cycle
        # (equivalently f*C >= 2), otherwise the check phase would wrap.
        if s + 1 > self.cycle_len - 1:
            raise ValueError(
                f"flash window too short: flash_fraction={self.flash_fraction} with "
                f"cycle_len={self.cycle_len} puts the quorum-check phase ({s + 1}) "
                f"outside the cycle; need flash_fraction * cycle_len >= 2"
            )


def flash_start_phase(params: ModelParams) -> int:
    """First phase of the flashing window: ceil((1 - f) * C).

    The window is {s, ..., C-1}; quantizing with ceil preserves the
    "phase >= (1-f)*C" comparison exactly on integer phases.
    """
    return math.ceil((1.0 - params.flash_fraction) * params.cycle_len)


def is_flashing(phase: int, params: ModelParams) -> bool:
    """Whether an agent at the given phase is in the flashing window."""
    if not 0 <= phase <= params.cycle_len - 1:
        raise ValueError(f"phase {phase} outside [0, {params.cycle_len - 1}]")
    return phase >= flash_start_phase(params)


def quorum_decision(flashing_neighbors: int, neighbor_count: int, params: ModelParams) -> bool:
    """Deterministic quorum rule: strictly more than theta * |neighbors| flashing.

    An isolated agent (neighbor_count 0) never advances: 0 > 0 is false.
    """
    if not 0 <= flashing_neighbors <= neighbor_count:
        raise ValueError(
            f"flashing_neighbors ({flashing_neighbors}) outside [0, {neighbor_count}]"
        )
    return flashing_neighbors > params.quorum_threshold * neighbor_count


def noisy_update(quorum_met: bool, noise_draw: bool) -> bool:
    """Applied advance decision: the quorum decision, inverted when the noise draw fires."""
    return quorum_met != noise_draw


@dataclass(frozen=True)
class StepDecision:
    """Record of one agent's quorum-check evaluation within a step."""

    flashing_neighbors: int
    quorum_met: bool
    noise_draw: bool

    @property
    def applied_advance(self) -> bool:
        return noisy_update(self.quorum_met, self.noise_draw)

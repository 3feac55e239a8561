"""Exact and simulated winning probabilities for penalty-shootout order rules."""

from .core import (
    KickContext,
    Mechanism,
    Params,
    PressureModel,
    RoundRecord,
    ShootoutState,
    Slot,
    Team,
    apply_round,
    first_kicker_of_round,
    scoring_probability,
)
from .engine import PhaseDistribution, WinReport, regular_phase_distribution, sweep_grid, table2, total_win_probability
from .sudden_death import DegenerateParameters, ModelClass, SdPattern, sd_stats, sd_win

__all__ = [
    "DegenerateParameters",
    "KickContext",
    "Mechanism",
    "ModelClass",
    "Params",
    "PhaseDistribution",
    "PressureModel",
    "RoundRecord",
    "SdPattern",
    "ShootoutState",
    "Slot",
    "Team",
    "WinReport",
    "apply_round",
    "first_kicker_of_round",
    "regular_phase_distribution",
    "scoring_probability",
    "sd_stats",
    "sd_win",
    "sweep_grid",
    "table2",
    "total_win_probability",
]

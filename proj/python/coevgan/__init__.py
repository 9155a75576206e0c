"""Python front end to the coevgan C++ engine.

>>> import coevgan
>>> round(coevgan.tvd([10, 0]), 3)
0.5
"""

from ._core import (
    AuditFailure,
    ConfigError,
    ExperimentConfig,
    NumericError,
    audit_interactions,
    cmd_ablate,
    cmd_audit,
    cmd_heatmap_disc,
    cmd_heatmap_mode,
    cmd_render,
    cmd_run,
    config_keys,
    discriminator_collapse_heatmap,
    evolve_mixture,
    expected_mass,
    generator_distance,
    l2_diversity,
    mode_collapse_heatmap,
    neighborhood,
    run_grid,
    summarize,
    toy_loss,
    tvd,
)

__all__ = [name for name in dir() if not name.startswith("_")]

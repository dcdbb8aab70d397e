"""Grouped/shifted temporal attention and key-frame masking for long videos."""

from ._longdiff import (
    build_ifs_mask,
    default_config,
    detect_keyframes,
    entropy_check,
    group_config,
    logit,
    longdiff_attention,
    plan_layers,
    pseudo_video,
    read_tensor,
    run_pipeline,
    schedule,
    synth_features,
    synthetic_survey,
    theorem1_check,
    vanilla_attention,
    write_tensor,
)

__all__ = [
    "build_ifs_mask",
    "default_config",
    "detect_keyframes",
    "entropy_check",
    "group_config",
    "logit",
    "longdiff_attention",
    "plan_layers",
    "pseudo_video",
    "read_tensor",
    "run_pipeline",
    "schedule",
    "synth_features",
    "synthetic_survey",
    "theorem1_check",
    "vanilla_attention",
    "write_tensor",
]

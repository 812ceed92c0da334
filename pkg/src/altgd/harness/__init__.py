"""Experiment harness: configuration, drivers, CSV serialization, CLI."""

from .config import ExperimentConfig, build_config, parse_config_file
from .csvio import SUMMARY_COLUMNS, TRAJECTORY_COLUMNS
from .experiments import cmd_fig1, cmd_fig2, cmd_montecarlo, cmd_run, cmd_theory, cmd_verify

__all__ = [
    "ExperimentConfig",
    "SUMMARY_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "build_config",
    "cmd_fig1",
    "cmd_fig2",
    "cmd_montecarlo",
    "cmd_run",
    "cmd_theory",
    "cmd_verify",
    "parse_config_file",
]

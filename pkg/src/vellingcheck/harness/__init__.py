from .config import SCHEMA, ExperimentConfig, RandomSource, config_from_dict, load_config
from .instances import random_partition
from .render import render_margins, render_svg
from .report import CSV_COLUMNS, ReportRow
from .suite import exit_status, run_suite

__all__ = ["SCHEMA", "ExperimentConfig", "RandomSource", "config_from_dict", "load_config",
           "random_partition", "render_margins", "render_svg", "CSV_COLUMNS", "ReportRow",
           "exit_status", "run_suite"]

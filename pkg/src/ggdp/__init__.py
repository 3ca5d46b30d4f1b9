"""Grundy domination of graphs with mixed open/closed neighborhoods."""

from .closedform import path_grundy, web_grundy
from .graph import (
    GenerationError,
    Instance,
    InstanceError,
    gen_bull,
    gen_cycle,
    gen_path,
    gen_random,
    gen_web,
    is_clutter,
    parse_instance,
    read_instance,
)
from .model import build_formulation, enumerate_solutions, export_lp
from .sequence import BudgetExceeded, greedy_sequence, grundy_exact

__all__ = [
    "BudgetExceeded",
    "GenerationError",
    "Instance",
    "InstanceError",
    "build_formulation",
    "enumerate_solutions",
    "export_lp",
    "gen_bull",
    "gen_cycle",
    "gen_path",
    "gen_random",
    "gen_web",
    "greedy_sequence",
    "grundy_exact",
    "is_clutter",
    "parse_instance",
    "path_grundy",
    "read_instance",
    "web_grundy",
]

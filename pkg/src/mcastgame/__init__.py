"""Coalition analysis for energy-aware wireless multicast downloads."""

from .core import core_nonempty, core_screen, is_convex, is_in_core
from .dcstable import best_partition_bruteforce, is_dc_stable, is_dc_stable_by_definition
from .scenario import (
    Collection,
    Partition,
    Scenario,
    derive_constants,
    deterministic_scenario,
    generate_scenario,
    load_scenario,
    symmetric_scenario,
)
from .value import coalition_value, collection_value, value_table

__version__ = "0.1.0"

__all__ = [
    "Collection",
    "Partition",
    "Scenario",
    "best_partition_bruteforce",
    "coalition_value",
    "collection_value",
    "core_nonempty",
    "core_screen",
    "derive_constants",
    "deterministic_scenario",
    "generate_scenario",
    "is_convex",
    "is_dc_stable",
    "is_dc_stable_by_definition",
    "is_in_core",
    "load_scenario",
    "symmetric_scenario",
    "value_table",
]

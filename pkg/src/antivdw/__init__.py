"""Exact computation of anti-van der Waerden numbers on [n] and Z_n."""

from .bounds import BoundReport, bounds_for, seed_lower
from .closedform import (
    FCounts,
    Factorization,
    PrimeClass,
    aw_zn3,
    classify_odd_prime,
    f_counts,
    factorize,
    mult_order,
    singleton_extremal_coloring,
)
from .core import (
    CYCLIC,
    INTERVAL,
    Coloring,
    Progression,
    Structure,
    elements,
    enumerate_kaps,
    has_rainbow_kap,
    is_rainbow,
)
from .oracle import brute_force_aw, brute_force_sz
from .solver import (
    PartialColoring,
    SearchOptions,
    SearchResult,
    compute_aw,
    compute_sz,
    find_rainbow_free,
    propagate,
)
from .store import AwRecord, AwStore, bootstrap_cyclic, bootstrap_interval

__version__ = "0.1.0"

__all__ = [
    "AwRecord",
    "AwStore",
    "BoundReport",
    "CYCLIC",
    "Coloring",
    "FCounts",
    "Factorization",
    "INTERVAL",
    "PartialColoring",
    "PrimeClass",
    "Progression",
    "SearchOptions",
    "SearchResult",
    "Structure",
    "aw_zn3",
    "bootstrap_cyclic",
    "bootstrap_interval",
    "bounds_for",
    "brute_force_aw",
    "brute_force_sz",
    "classify_odd_prime",
    "compute_aw",
    "compute_sz",
    "elements",
    "enumerate_kaps",
    "f_counts",
    "factorize",
    "find_rainbow_free",
    "has_rainbow_kap",
    "is_rainbow",
    "mult_order",
    "propagate",
    "seed_lower",
    "singleton_extremal_coloring",
]

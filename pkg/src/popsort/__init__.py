"""Sorting machines made of pop stacks, queues and stacks.

Simulators and sortability deciders for the six serial machines, divided
permutations and their block-respecting containment, class enumeration and
basis mining, the exact generating function of the pop-stack-then-stack
sortable class, and the infinite antichain living inside a divided-pattern
avoidance class.
"""

from .classes import ClassSpec, compute_basis, count_members, structural_member, wilf_table
from .divided import DividedPattern, DividedPermutation, div_contains, parse_divided
from .machines import (
    MachineKind,
    Move,
    is_sortable,
    replay,
    sorting_witness,
)
from .perms import (
    EMPTY,
    ParseError,
    Permutation,
    all_perms,
    avoids,
    contains,
    count_occurrences,
    delete_entry,
    identity,
    inflate,
    is_simple,
    parallel_alternation,
    parse,
    substitution_decompose,
)
from .series import PowerSeries, closed_form, components, fixed_point

__all__ = [
    "EMPTY",
    "ClassSpec",
    "DividedPattern",
    "DividedPermutation",
    "MachineKind",
    "Move",
    "ParseError",
    "Permutation",
    "PowerSeries",
    "all_perms",
    "avoids",
    "closed_form",
    "components",
    "compute_basis",
    "contains",
    "count_members",
    "count_occurrences",
    "delete_entry",
    "div_contains",
    "fixed_point",
    "identity",
    "inflate",
    "is_simple",
    "is_sortable",
    "parallel_alternation",
    "parse",
    "parse_divided",
    "replay",
    "sorting_witness",
    "structural_member",
    "substitution_decompose",
    "wilf_table",
]

__version__ = "0.1.0"

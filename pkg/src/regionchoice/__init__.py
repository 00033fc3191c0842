"""Integral region choice problems on link diagrams."""

from .diagram import (
    Crossing,
    DiagramError,
    InvariantError,
    LinkDiagram,
    Region,
    SpliceRecord,
    parse_diagram,
    splice,
    unsplice,
)
from .numbering import (
    NumberingVector,
    alexander_numbering,
    checkerboard,
    componentwise_alexander,
    standard_kernel_basis_vectors,
)
from .matrices import IntMatrix, Rule, all_matrices, find_permutation, mod2_reduce, region_choice_matrix
from .zlinalg import hnf, kernel_lattice, lattice_equal, rank, smith_invariants, solve_integer
from .choice import (
    ProblemInstance,
    ScoreVector,
    Solution,
    flip_by_checkerboard,
    image_basis_two_component,
    image_membership,
    kernel_basis,
    pair_solution_two_component,
    pinned_kernel_solution,
    single_from_double,
    solve,
    special_solution_double,
    special_solution_single_pinned,
    special_solution_single_reducible,
)
from .corpus import CorpusEntry, builtin, list_builtins, random_diagram

__all__ = [name for name in dir() if not name.startswith("_")]

"""Faithful transitive permutation representations of toroidal regular maps.

Builds the symmetry groups of the maps {4,4}_(s,0), {4,4}_(s,s), {3,6}_(s,0)
and {3,6}_(s,s) as affine groups modulo a lattice, determines their degree
sets (closed formulas, constructive witnesses and an exhaustive subgroup
oracle), and produces CPR graphs for the known families.
"""

from .cpr import (
    CprGraph,
    FamilyId,
    NonFaithfulError,
    ParameterError,
    canonical_graph,
    explicit_graph,
    export,
    family_graph,
    from_coset_action,
    graph_to_perms,
    parse_json,
    validate,
)
from .degrees import DegreeFormulaSet, DegreeReport, degrees_formula, lcm_pairs, verify_degrees
from .family import MapFamily
from .lattice import CosetVec, IntMat2, Sublattice, canonical_rep, lattice_for, smith_form
from .permgroup import (
    BlockSystemInfo,
    CosetActionResult,
    Perm,
    PermGroup,
    SubgroupHandle,
    actions_equivalent,
    block_systems,
    closure,
    coset_action,
    orbits,
    subgroup_core,
    subgroup_intersection,
)
from .stabilizers import StabilizerSpec
from .strcg import StringCGroupVerdict, check_string_cgroup
from .subgroups import OracleResult, SubgroupClass, all_subgroups, degree_oracle
from .toroidal_groups import (
    AffineElem,
    NamedTranslations,
    ToroidalGroup,
    build_group,
    element_order,
    evaluate_word,
    invert,
    multiply,
    named_translations,
)

__version__ = "0.1.0"

"""Exact orders on torsion-free nilpotent groups and the commensurator action on them."""

from .comm import (Commensuration, FIXES_ALL, OUTER, act_on_order, apply, bo_trivial_certificate,
                   compose, equivalent, faithfulness_witness, from_images, in_domain, invert, is_inner,
                   tau, validate_comm)
from .group import GroupSpec, RationalPoint, collect, from_presentation
from .lattice import index_in, induced_sequence, lattice_membership, subgroup
from .oracle import Ball, PartialCone, crosscheck, enumerate_cones, restrict_scheme
from .order import (OrderScheme, coordinate_schemes, perturb_biinvariant, random_scheme,
                    restrict_to_subgroup, scheme_family, transport_scheme)
from .registry import acceptance_groups, free_abelian, get_group, heisenberg, sublattices, class3_example
from .textio import InputError, Workspace, emit_comm, emit_order, parse_input

__all__ = [
    "Ball", "Commensuration", "FIXES_ALL", "GroupSpec", "InputError", "OUTER", "OrderScheme",
    "PartialCone", "RationalPoint", "Workspace", "acceptance_groups", "act_on_order", "apply",
    "bo_trivial_certificate", "collect", "compose", "coordinate_schemes", "crosscheck", "emit_comm",
    "emit_order", "enumerate_cones", "equivalent", "faithfulness_witness", "free_abelian",
    "from_images", "from_presentation", "get_group", "heisenberg", "in_domain", "index_in",
    "induced_sequence", "invert", "is_inner", "lattice_membership", "parse_input",
    "perturb_biinvariant", "random_scheme", "restrict_scheme", "restrict_to_subgroup",
    "scheme_family", "subgroup", "sublattices", "tau", "transport_scheme", "validate_comm", "class3_example",
]

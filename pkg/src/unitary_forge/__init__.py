"""Unitary subgroups of modular group algebras of small p-groups."""

from .abelian import AbelianType, all_types
from .finite_field import FieldDesc, FieldElement, Matrix, make_field
from .formulas import (
    InconsistentInput,
    UniquenessViolation,
    UnitaryInvariants,
    is_full_unitary,
    odd_group_invariants,
    two_group_invariants,
    two_group_unitary_order,
    two_group_unitary_rank,
    order_of_base_group,
    reconstruct,
    theta_closed_form,
)
from .fingerprint import Fingerprint, distinguish, fingerprint, unitary_order_table
from .group_algebra import AlgebraElement, CapacityError, GroupAlgebra
from .groups import GroupTable, catalog, parse_group
from .unitary import (
    UnitGroupView,
    h_set_size,
    s_star_two_size,
    theta_brute,
    theta_structured,
    unitary_subgroup,
    unitary_type_exact,
)

__version__ = "0.1.0"

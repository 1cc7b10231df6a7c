"""Exact computational algebra for the orbit, span (Mackey), and
double-coset (Hecke) categories of a finite permutation group, homological
algebra over them, and Houghton's groups of eventual translations."""

from .errors import (CapExceeded, FiniteOrder, FunctorNotAdditive,
                     InfiniteOrder, IsotropyNotInFamily, NotAComplex,
                     NotASubgroup, NotBijective, NotNormalised, OrbcatError,
                     RingMismatch)
from .linalg import (GF, QQ, ZZ, AbelianInvariants, ChainComplex, Matrix,
                     Ring, kernel_basis, smith_normal_form, solve)
from .permgroup import (Family, PermGroup, Subgroup, double_cosets,
                        enumerate_group, fixed_points, group_from_spec,
                        is_subconjugate, parse_cycles, preset_group,
                        subgroups_up_to_conjugacy, weyl_group)

__all__ = [
    "AbelianInvariants", "CapExceeded", "ChainComplex", "Family",
    "FiniteOrder", "FunctorNotAdditive", "GF", "InfiniteOrder",
    "IsotropyNotInFamily", "Matrix", "NotAComplex", "NotASubgroup",
    "NotBijective", "NotNormalised", "OrbcatError", "PermGroup", "QQ",
    "Ring", "RingMismatch", "Subgroup", "ZZ", "double_cosets",
    "enumerate_group", "fixed_points", "group_from_spec",
    "is_subconjugate", "kernel_basis", "parse_cycles", "preset_group",
    "smith_normal_form", "solve", "subgroups_up_to_conjugacy",
    "weyl_group",
]

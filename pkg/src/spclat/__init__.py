"""Balmer spectra at the level of finite distributive lattices."""

from .dlat import (
    DistLattice,
    DLatMorphism,
    booleanize,
    boolean_lattice,
    chain_lattice,
    free_dlat,
    from_downsets,
    from_order,
    join_irreducibles,
    opposite,
    power,
    powerset_lattice,
    tensor,
)
from .errors import (
    CapacityExceeded,
    Inconclusive,
    InvalidInput,
    JoinNotFound,
    JoinNotUnique,
    SizeGuard,
    SpclatError,
    Undecided,
)
from .oag import Decision, OrderedAbelianGroup, arch, cone_member, identity_component, leq, principal_leq, try_join
from .order import FinPoset, UpperSemilattice, alexandroff_opens, product, semilattice_from_poset, validate_poset
from .spectral import SpectralSpace, constructible, homeomorphic, sierpinski, space_product, spc, spec

__version__ = "0.1.0"

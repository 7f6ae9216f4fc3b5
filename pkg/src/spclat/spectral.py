"""Finite spectral spaces.

A finite spectral space is the same thing as a finite T0 space, and a
finite T0 space is determined by its specialization order: the opens
are exactly the upward closed sets.  :class:`SpectralSpace` therefore
stores the specialization poset and materializes the opens lazily.

Orientation: ``p <= q`` iff ``p`` lies in the closure of ``{q}``, so
closed points are minimal and open points are maximal.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

from .dlat import DLatMorphism, DistLattice, booleanize, opposite, upsets_lattice
from .errors import InvalidInput, SizeGuard
from .order import FinPoset, Label, bits, fmt_label, poset_isomorphism, product

HOMEO_GUARD = 12


class SpectralSpace:
    def __init__(self, specialization: FinPoset):
        self.specialization = specialization

    @property
    def points(self) -> tuple:
        return self.specialization.elements

    def __len__(self) -> int:
        return len(self.specialization)

    @cached_property
    def opens(self) -> DistLattice:
        """Open sets as frozensets of points (the up-sets of the specialization order)."""
        return upsets_lattice(self.specialization)

    def is_open(self, subset: Iterable[Label]) -> bool:
        return self.specialization.is_upset(self.specialization.mask_of(subset))

    def closure(self, subset: Iterable[Label]) -> frozenset:
        P = self.specialization
        m = 0
        for x in subset:
            m |= P.down_mask(P.index(x))
        return P.labels_of(m)

    def closed_sets(self) -> list[frozenset]:
        P = self.specialization
        return [P.labels_of(m) for m in P.downset_masks()]

    def closed_points(self) -> list[Label]:
        return self.specialization.minimal()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpectralSpace):
            return NotImplemented
        return self.specialization == other.specialization

    def __hash__(self) -> int:
        return hash(self.specialization)

    def __repr__(self) -> str:
        return f"SpectralSpace({len(self)} points)"

    def to_json(self) -> dict:
        return {
            "points": [fmt_label(p) for p in self.points],
            "opens": [sorted(fmt_label(p) for p in U) for U in self.opens.elements],
        }


def space_from_opens(points: Sequence[Label], opens: Iterable[Iterable[Label]]) -> SpectralSpace:
    """Validate a finite topology given by its open sets; it must be T0."""
    points = list(points)
    if len(set(points)) != len(points):
        raise InvalidInput("point labels must be pairwise distinct")
    index = {p: i for i, p in enumerate(points)}
    masks = set()
    for U in opens:
        m = 0
        for p in U:
            if p not in index:
                raise InvalidInput(f"open set mentions unknown point {p!r}")
            m |= 1 << index[p]
        masks.add(m)
    full = (1 << len(points)) - 1
    if 0 not in masks or full not in masks:
        raise InvalidInput("opens must contain the empty set and the whole space")
    for a in masks:
        for b in masks:
            if a | b not in masks or a & b not in masks:
                raise InvalidInput("opens are not closed under union and intersection")
    # p <= q iff every open containing p contains q
    up = []
    for i in range(len(points)):
        nbhd = full
        for m in masks:
            if m >> i & 1:
                nbhd &= m
        up.append(nbhd)
    for i in range(len(points)):
        for j in bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise InvalidInput(f"not T0: {points[i]!r} and {points[j]!r} are topologically indistinguishable")
    X = SpectralSpace(FinPoset(points, up))
    if {X.specialization.mask_of(U) for U in X.opens.elements} != masks:
        raise InvalidInput("opens differ from the up-sets of the specialization order")
    return X


def spec(L: DistLattice) -> SpectralSpace:
    """Prime filters of ``L`` with the basic opens ``D(a)``.

    The prime filters are the principal filters of join-irreducibles; a
    point is labelled by its generator.  ``D(a)`` is the set of
    join-irreducibles below ``a``, so ``a -> D(a)`` is an isomorphism onto
    the opens by construction.
    """
    return SpectralSpace(L.irr.dual())


def basic_open(L: DistLattice, a: Label) -> frozenset:
    return L.irr_below(a)


def spc(zar: DistLattice) -> SpectralSpace:
    return spec(opposite(zar))


def spec_map(phi: DLatMorphism) -> dict:
    """The continuous map ``Spec(target) -> Spec(source)`` sending a prime filter to its preimage."""
    L, M = phi.source, phi.target
    out = {}
    for k in M.irr.elements:
        preimage = [a for a in L.elements if M.leq(k, phi(a))]
        j = L.meet_all(preimage)
        if j not in L.irr:
            raise InvalidInput("preimage of a prime filter is not prime; not a lattice morphism")
        out[k] = j
    return out


def is_continuous(f: dict, X: SpectralSpace, Y: SpectralSpace) -> bool:
    """Preimages of opens are open (it suffices to test principal opens of ``Y``)."""
    P = Y.specialization
    for i in range(len(P)):
        U = P.labels_of(P.up_mask(i))
        if not X.is_open(x for x in X.points if f[x] in U):
            return False
    return True


def space_product(X: SpectralSpace, Y: SpectralSpace) -> SpectralSpace:
    return SpectralSpace(product(X.specialization, Y.specialization))


def constructible(X: SpectralSpace) -> SpectralSpace:
    """Patch topology: ``Spec`` of the Booleanization of the opens, moved back onto ``X``.

    A point ``x`` corresponds to the prime filter of opens containing it,
    generated by the principal open ``up(x)``.
    """
    B = booleanize(X.opens).lattice
    S = spec(B)
    P = X.specialization
    by_principal = {P.labels_of(P.up_mask(i)): P.elements[i] for i in range(len(P))}
    relabel = []
    for atom in S.points:
        (principal,) = atom
        relabel.append(by_principal[principal])
    return SpectralSpace(S.specialization.relabel(relabel))


def specialization_poset(X: SpectralSpace) -> FinPoset:
    return X.specialization


def homeomorphic(X: SpectralSpace, Y: SpectralSpace, max_points: int = HOMEO_GUARD) -> dict | None:
    """A point bijection inducing an isomorphism of open lattices, or ``None``.

    Exhaustive backtracking on specialization orders, so ``None`` is
    definitive.
    """
    n = max(len(X), len(Y))
    if n > max_points:
        raise SizeGuard(f"homeomorphism search: {n} points exceeds guard {max_points}")
    phi = poset_isomorphism(X.specialization, Y.specialization)
    if phi is None:
        return None
    # opens are unions of principal opens; check those are matched both ways
    P, Q = X.specialization, Y.specialization
    for i, x in enumerate(P.elements):
        image = frozenset(phi[p] for p in P.labels_of(P.up_mask(i)))
        if image != Q.up(phi[x]):
            raise AssertionError("isomorphism search returned a non-homeomorphism")
    return phi


# -- named spaces -------------------------------------------------------------


def sierpinski() -> SpectralSpace:
    """Two points; ``closed`` lies in the closure of ``open``."""
    return SpectralSpace(FinPoset(["closed", "open"], [0b11, 0b10]))


def point() -> SpectralSpace:
    return SpectralSpace(FinPoset(["*"], [1]))


def discrete(n: int) -> SpectralSpace:
    return SpectralSpace(FinPoset([str(i) for i in range(n)], [1 << i for i in range(n)]))


def power_space(X: SpectralSpace, k: int) -> SpectralSpace:
    """``X x ... x X`` (``k`` factors); the empty product is a point."""
    out = point()
    for _ in range(k):
        out = space_product(out, X)
    return out


def coproduct(parts: Sequence[tuple[Label, SpectralSpace]]) -> SpectralSpace:
    from .order import disjoint_union

    return SpectralSpace(disjoint_union([(tag, X.specialization) for tag, X in parts]))

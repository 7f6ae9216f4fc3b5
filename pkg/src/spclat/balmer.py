"""Zariski lattices and spectra of diagram, sheaf and filtered categories.

The base category only enters through its Zariski lattice ``zar_c``, an
arbitrary finite distributive lattice.  The constructors return the
lattices on the right-hand sides of the comparison isomorphisms; the
filtered case additionally carries the support formula

    s(F)(J) = join of F(a) over those a in B with J in Theta(B, a)

evaluated on finite presentations ``F`` (a saturated subset ``B`` of the
group with a ``zar_c``-value at each point).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, NamedTuple, Sequence

from .dlat import (
    DistLattice,
    DLatMorphism,
    FreeLattice,
    booleanize,
    free_dlat,
    power,
    powerset_lattice,
    tensor,
    tensor_with_injections,
)
from .errors import CapacityExceeded, InvalidInput, JoinError, JoinsMissing, NotSaturated
from .oag import (
    ArchSemilattice,
    Element,
    OrderedAbelianGroup,
    arch,
    leq,
    require,
    try_join,
)
from .order import Label
from .spectral import SpectralSpace, constructible, homeomorphic, sierpinski, spc, spec, space_product

SATURATE_CAPACITY = 4096


# -- Zar(Fun(K, C)) -----------------------------------------------------------------


def zar_pointwise(zar_c: DistLattice, k0: Sequence[Label]) -> DistLattice:
    """``zar_c`` to the power of the object set ``k0``."""
    return power(zar_c, list(k0))


def pointwise_comparison(zar_c: DistLattice, k0: Sequence[Label]) -> DLatMorphism:
    """Verified isomorphism ``zar_c ^ k0 -> zar_c (x) P(k0)``.

    A tuple goes to the join of the rectangles ``x_k (x) {k}``.
    """
    k0 = list(k0)
    P = powerset_lattice(k0)
    T, left, right = tensor_with_injections(zar_c, P)
    L = zar_pointwise(zar_c, k0)
    mapping = {
        x: T.join_all(T.meet(left(v), right(frozenset([k]))) for k, v in zip(k0, x)) for x in L.elements
    }
    phi = DLatMorphism(L, T, mapping)
    if not phi.is_injective() or len(L) != len(T):
        raise AssertionError("pointwise comparison map is not bijective")
    return phi


def support_pointwise(zar_c: DistLattice, k0: Sequence[Label], values: Mapping[Label, Label]) -> tuple:
    """Support of a diagram with objectwise supports ``values``: the tuple itself."""
    k0 = list(k0)
    if set(values) != set(k0):
        raise InvalidInput("diagram values must be given on exactly the objects of the shape")
    for k in k0:
        if values[k] not in zar_c:
            raise InvalidInput(f"value at {k!r} is not in the Zariski lattice")
    return tuple(values[k] for k in k0)


def pointwise_generator(zar_c: DistLattice, k0: Sequence[Label], k: Label) -> dict:
    """Objectwise supports of the generator concentrated at ``k``: 1 there, 0 elsewhere."""
    if k not in k0:
        raise InvalidInput(f"{k!r} is not an object of the shape")
    return {l: zar_c.top if l == k else zar_c.bottom for l in k0}


# -- Zar(Shv_C(X)) ------------------------------------------------------------------


def zar_sheaf(zar_c: DistLattice, l: DistLattice) -> DistLattice:
    return tensor(zar_c, booleanize(l).lattice)


class SheafSpectrum(NamedTuple):
    space: SpectralSpace
    model: SpectralSpace
    homeomorphism: dict


def spc_sheaf(zar_c: DistLattice, l: DistLattice, max_points: int = 64) -> SheafSpectrum:
    """``Spc`` of the sheaf lattice with a verified homeomorphism to ``Spec(l)_cons x Spc(zar_c)``."""
    X = spc(zar_sheaf(zar_c, l))
    Y = space_product(constructible(spec(l)), spc(zar_c))
    phi = homeomorphic(X, Y, max_points=max_points)
    if phi is None:
        raise AssertionError("sheaf spectrum is not homeomorphic to the constructible product")
    return SheafSpectrum(X, Y, phi)


# -- saturated sets and presentations ---------------------------------------------------


@dataclass(frozen=True)
class SaturatedSet:
    """Finite subset of the group closed under binary joins (checked)."""

    group: OrderedAbelianGroup
    elements: tuple[Element, ...]

    def __post_init__(self):
        A = self.group
        elems = tuple(sorted(set(A.element(x) for x in self.elements)))
        if not elems:
            raise NotSaturated("a saturated set is nonempty")
        object.__setattr__(self, "elements", elems)
        present = set(elems)
        for a, b in itertools.combinations(elems, 2):
            try:
                c = try_join(A, a, b)
            except JoinError as exc:
                raise NotSaturated(str(exc)) from None
            if c not in present:
                raise NotSaturated(f"{A.fmt(a)} v {A.fmt(b)} = {A.fmt(c)} is missing")

    def __contains__(self, x) -> bool:
        return self.group.element(x) in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def translate(self, a) -> SaturatedSet:
        A = self.group
        return SaturatedSet(A, tuple(A.add(x, a) for x in self.elements))


def saturate(A: OrderedAbelianGroup, xs, capacity: int = SATURATE_CAPACITY) -> SaturatedSet:
    """Close a finite set under binary joins."""
    seen = {A.element(x) for x in xs}
    if not seen:
        raise InvalidInput("cannot saturate the empty set")
    frontier = sorted(seen)
    while frontier:
        new = []
        current = sorted(seen)
        for a in frontier:
            for b in current:
                try:
                    c = try_join(A, a, b)
                except JoinError as exc:
                    raise JoinsMissing(f"cone lacks a needed join: {exc}") from None
                if c not in seen:
                    seen.add(c)
                    new.append(c)
                    if len(seen) > capacity:
                        raise CapacityExceeded(f"saturation exceeded {capacity} elements")
        frontier = new
    return SaturatedSet(A, tuple(seen))


@dataclass(frozen=True)
class FilteredPresentation:
    """Values of a compact filtered object on a saturated set."""

    base: SaturatedSet
    zar: DistLattice
    values: tuple  # aligned with base.elements

    @classmethod
    def from_mapping(cls, base: SaturatedSet, zar: DistLattice, values: Mapping) -> FilteredPresentation:
        A = base.group
        given = {A.element(k): v for k, v in values.items()}
        if set(given) != set(base.elements):
            raise InvalidInput("presentation must assign a value to every base element and nothing else")
        for k, v in given.items():
            if v not in zar:
                raise InvalidInput(f"value at {A.fmt(k)} is not in the Zariski lattice")
        return cls(base, zar, tuple(given[b] for b in base.elements))

    @property
    def group(self) -> OrderedAbelianGroup:
        return self.base.group

    def value(self, a) -> Label:
        return self.values[self.base.elements.index(self.group.element(a))]

    def items(self):
        return zip(self.base.elements, self.values)


def shift(F: FilteredPresentation, a) -> FilteredPresentation:
    """Translate the presentation by ``a``."""
    A = F.group
    B = F.base.translate(a)
    return FilteredPresentation.from_mapping(B, F.zar, {A.add(x, a): v for x, v in F.items()})


def generator(A: OrderedAbelianGroup, zar: DistLattice, c: Label, a_list) -> FilteredPresentation:
    """Presentation of ``C{0/a_1}...{0/a_n}``: value ``c`` at 0, bottom at the other subset sums."""
    a_list = [A.element(a) for a in a_list]
    if c not in zar:
        raise InvalidInput(f"{c!r} is not in the Zariski lattice")
    sums = [A.sum(a_list[i] for i in I) for k in range(len(a_list) + 1) for I in itertools.combinations(range(len(a_list)), k)]
    B = saturate(A, sums)
    return FilteredPresentation.from_mapping(B, zar, {b: c if not any(b) else zar.bottom for b in B})


def extend_presentation(F: FilteredPresentation, B2: SaturatedSet) -> FilteredPresentation:
    """Left Kan extension along ``B <= B2``: take the value of the greatest point of ``B`` below."""
    A = F.group
    if B2.group != A:
        raise InvalidInput("saturated sets live over different groups")
    missing = [b for b in F.base if b not in B2]
    if missing:
        raise InvalidInput(f"{A.fmt(missing[0])} is not in the extension base")
    out = {}
    for y in B2:
        below = [x for x in F.base if require(leq(A, x, y), f"{A.fmt(x)} <= {A.fmt(y)}")]
        if not below:
            out[y] = F.zar.bottom
            continue
        top = [g for g in below if all(require(leq(A, x, g), f"{A.fmt(x)} <= {A.fmt(g)}") for x in below)]
        if len(top) != 1:
            raise NotSaturated(f"no greatest base element below {A.fmt(y)}")
        out[y] = F.value(top[0])
    return FilteredPresentation.from_mapping(B2, F.zar, out)


# -- Theta sets and the support formula -----------------------------------------------


@lru_cache(maxsize=256)
def arch_free(W: ArchSemilattice) -> FreeLattice:
    return free_dlat(W.semilattice)


def theta(B: SaturatedSet, a, W: ArchSemilattice) -> frozenset:
    """Window classes ``J`` with ``(a + J) meet B = {a}``.

    ``J`` is excluded exactly when some ``b != a`` in ``B`` has
    ``b - a >= 0`` and ``<b - a>`` inside ``J``.
    """
    A = B.group
    if W.group != A:
        raise InvalidInput("Arch window is over a different group")
    a = A.element(a)
    if a not in B:
        raise InvalidInput(f"{A.fmt(a)} is not in the saturated set")
    blockers = []
    for b in B:
        if b == a:
            continue
        d = A.sub(b, a)
        if require(leq(A, a, b), f"{A.fmt(a)} <= {A.fmt(b)}"):
            blockers.append(d)
    out = frozenset(J for J in W.labels if not any(W.ideal_leq(d, J) for d in blockers))
    if out not in arch_free(W).lattice:
        raise AssertionError(f"Theta set {sorted(out)} is not in the free lattice image")
    return out


@dataclass(frozen=True)
class DayElement:
    """Element of ``zar_c (x) Free(Arch)`` as an Arch-class-indexed tuple."""

    classes: tuple[str, ...]
    values: tuple

    def __getitem__(self, J: str) -> Label:
        return self.values[self.classes.index(J)]

    def to_json(self) -> dict:
        from .order import fmt_label

        return {J: fmt_label(v) for J, v in zip(self.classes, self.values)}


def day_meet(zar: DistLattice, x: DayElement, y: DayElement) -> DayElement:
    return DayElement(x.classes, tuple(zar.meet(u, v) for u, v in zip(x.values, y.values)))


def day_join(zar: DistLattice, x: DayElement, y: DayElement) -> DayElement:
    return DayElement(x.classes, tuple(zar.join(u, v) for u, v in zip(x.values, y.values)))


def rectangle(zar: DistLattice, W: ArchSemilattice, value: Label, classes: frozenset) -> DayElement:
    return DayElement(W.labels, tuple(value if J in classes else zar.bottom for J in W.labels))


def day_support(F: FilteredPresentation, W: ArchSemilattice) -> DayElement:
    """Join over ``a`` in ``B`` of the rectangles ``F(a) x Theta(B, a)``."""
    zar = F.zar
    out = DayElement(W.labels, (zar.bottom,) * len(W.labels))
    for a, v in F.items():
        out = day_join(zar, out, rectangle(zar, W, v, theta(F.base, a, W)))
    return out


# -- Zar(Fun(A, C)) -----------------------------------------------------------------


class DayData(NamedTuple):
    arch: ArchSemilattice
    free: FreeLattice
    window_closure: SaturatedSet


def day_data(A: OrderedAbelianGroup, window) -> DayData:
    """Arch window plus its free lattice, after checking the joins hypothesis on the window sums."""
    window = [A.element(a) for a in window]
    sums = [A.sum(window[i] for i in I) for k in range(len(window) + 1) for I in itertools.combinations(range(len(window)), k)]
    B = saturate(A, sums)
    W = arch(A, window)
    return DayData(W, arch_free(W), B)


def zar_day(zar_c: DistLattice, A: OrderedAbelianGroup, window) -> DistLattice:
    """``zar_c (x) Free(Arch(A))`` on the sub-semilattice generated by ``window``."""
    return tensor(zar_c, day_data(A, window).free.lattice)


def spc_day(zar_c: DistLattice, A: OrderedAbelianGroup, window) -> SpectralSpace:
    return spc(zar_day(zar_c, A, window))


def tensor_to_day(zar_c: DistLattice, W: ArchSemilattice, x: frozenset) -> DayElement:
    """Image of a tensor element under ``zar_c (x) Free(W) -> zar_c (x) P(W) = zar_c ^ W``.

    Points of the tensor are pairs ``(j, k)`` with ``k`` a join-irreducible
    subset of ``W``; class ``J`` receives the join of the ``j`` whose ``k``
    contains ``J``.
    """
    return DayElement(W.labels, tuple(zar_c.join_all(j for j, k in x if J in k) for J in W.labels))


def day_support_tensor(F: FilteredPresentation, W: ArchSemilattice) -> frozenset:
    """The support formula evaluated inside the spectral tensor product."""
    T, left, right = tensor_with_injections(F.zar, arch_free(W).lattice)
    out = T.bottom
    for a, v in F.items():
        out = T.join(out, T.meet(left(v), right(theta(F.base, a, W))))
    return out


# -- closed sets of the filtered spectrum ---------------------------------------------


def closed_set_pairs(X: SpectralSpace) -> list[tuple[frozenset, frozenset]]:
    """Pairs ``Z1 <= Z2`` of closed subsets."""
    closed = X.closed_sets()
    return [(z1, z2) for z1 in closed for z2 in closed if z1 <= z2]


def filtered_closed_sets(zar_c: DistLattice) -> dict:
    """Closed sets of ``Spc`` for ``Z``-filtered objects, matched with pairs ``Z1 <= Z2`` in ``Spc(zar_c)``.

    Goes through a homeomorphism with ``Sierpinski x Spc(zar_c)``; the
    pair attached to a closed set records its slices over the open and the
    closed Sierpinski point.
    """
    Z = OrderedAbelianGroup(1, (), ((1,),))
    X = spc_day(zar_c, Z, [(1,)])
    Y = space_product(sierpinski(), spc(zar_c))
    phi = homeomorphic(X, Y, max_points=max(len(X), len(Y), 1))
    if phi is None:
        raise AssertionError("filtered spectrum is not Sierpinski x Spc(zar_c)")
    out = {}
    for C in X.closed_sets():
        image = {phi[p] for p in C}
        z1 = frozenset(x for s, x in image if s == "open")
        z2 = frozenset(x for s, x in image if s == "closed")
        out[C] = (z1, z2)
    return out

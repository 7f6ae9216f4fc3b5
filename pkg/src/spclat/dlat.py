"""Finite distributive lattices and their morphisms.

Every finite distributive lattice is the lattice of down-sets of its
poset of join-irreducibles.  :class:`DistLattice` stores exactly that
poset plus a labelling of down-sets, so an element is an ``int`` bitmask
internally and join/meet/order are ``|``, ``&`` and subset tests.
Lattices given as explicit order relations are validated exhaustively
(lattice axioms and both distributive laws) before being converted.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .errors import CapacityExceeded, InvalidInput, NotALattice, NotAMorphism, NotDistributive
from .order import (
    FinPoset,
    Label,
    UpperSemilattice,
    antichain,
    bits,
    disjoint_union,
    fmt_label,
    product,
    validate_poset,
)

FREE_CAPACITY = 1 << 16


class DistLattice:
    """A finite distributive lattice.

    ``irr`` is the poset of join-irreducible elements (labelled by their
    element labels); element ``x`` is encoded as the bitmask of
    join-irreducibles below it.
    """

    def __init__(
        self,
        base: FinPoset,
        decode: Callable[[int], Label],
        encode: Callable[[Label], int] | None = None,
        order: Sequence[int] | None = None,
    ):
        self._base = base
        self._decode = decode
        self._encode = encode
        self._order = tuple(order) if order is not None else None
        self.full = base.full_mask
        self.irr = base.relabel([decode(base.down_mask(i)) for i in range(len(base))])

    # -- encoding ----------------------------------------------------------

    @cached_property
    def codes(self) -> tuple[int, ...]:
        if self._order is not None:
            return self._order
        return tuple(self._base.downset_masks())

    @cached_property
    def elements(self) -> tuple:
        return tuple(self._decode(m) for m in self.codes)

    @cached_property
    def _code_of(self) -> dict:
        return {x: m for x, m in zip(self.elements, self.codes)}

    def code(self, x: Label) -> int:
        if self._encode is None:
            try:
                return self._code_of[x]
            except (KeyError, TypeError):
                raise InvalidInput(f"{x!r} is not an element of the lattice") from None
        try:
            m = self._encode(x)
        except (KeyError, TypeError, ValueError, InvalidInput):
            raise InvalidInput(f"{x!r} is not an element of the lattice") from None
        if m & ~self.full or not self._base.is_downset(m):
            raise InvalidInput(f"{x!r} is not an element of the lattice")
        return m

    def label(self, mask: int) -> Label:
        return self._decode(mask)

    # -- lattice operations -------------------------------------------------

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        try:
            self.code(x)
        except InvalidInput:
            return False
        return True

    @property
    def bottom(self) -> Label:
        return self._decode(0)

    @property
    def top(self) -> Label:
        return self._decode(self.full)

    def leq(self, a: Label, b: Label) -> bool:
        return self.code(a) & ~self.code(b) == 0

    def join(self, a: Label, b: Label) -> Label:
        return self._decode(self.code(a) | self.code(b))

    def meet(self, a: Label, b: Label) -> Label:
        return self._decode(self.code(a) & self.code(b))

    def join_all(self, xs: Iterable[Label]) -> Label:
        m = 0
        for x in xs:
            m |= self.code(x)
        return self._decode(m)

    def meet_all(self, xs: Iterable[Label]) -> Label:
        m = self.full
        for x in xs:
            m &= self.code(x)
        return self._decode(m)

    def is_boolean(self) -> bool:
        return self._base.is_antichain()

    def complement(self, x: Label) -> Label:
        if not self.is_boolean():
            raise InvalidInput("complements exist only in Boolean lattices")
        return self._decode(self.full ^ self.code(x))

    def irr_below(self, x: Label) -> frozenset:
        return self.irr.labels_of(self.code(x))

    def covers(self) -> list[tuple[Label, Label]]:
        """Hasse covers ``a < b``: ``b`` adds one join-irreducible to ``a``."""
        out = []
        for m in self.codes:
            for i in bits(self.full & ~m):
                if self._base.down_mask(i) & ~(m | 1 << i) == 0:
                    out.append((self._decode(m), self._decode(m | 1 << i)))
        return out

    def as_poset(self) -> FinPoset:
        codes = self.codes
        up = []
        for m in codes:
            mask = 0
            for k, c in enumerate(codes):
                if m & ~c == 0:
                    mask |= 1 << k
            up.append(mask)
        return FinPoset(self.elements, up)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistLattice):
            return NotImplemented
        if self.irr != other.irr or len(self) != len(other):
            return False
        for x in self.elements:
            if x not in other or self.irr_below(x) != other.irr_below(x):
                return False
        return True

    def __hash__(self) -> int:
        return hash(self.irr)

    def __repr__(self) -> str:
        return f"DistLattice({len(self.irr)} join-irreducibles)"

    def to_json(self) -> dict:
        pos = {x: i for i, x in enumerate(self.elements)}
        covers = sorted(self.covers(), key=lambda c: (pos[c[0]], pos[c[1]]))
        return {
            "elements": [fmt_label(x) for x in self.elements],
            "leq": [[fmt_label(a), fmt_label(b)] for a, b in covers],
        }


class DLatMorphism:
    """Map preserving 0, 1, binary joins and binary meets (checked)."""

    EXHAUSTIVE_LIMIT = 256

    def __init__(self, source: DistLattice, target: DistLattice, mapping: Mapping[Label, Label], check: bool = True):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        if check:
            problem = self.violation()
            if problem is not None:
                raise NotAMorphism(problem)

    def __call__(self, x: Label) -> Label:
        return self.mapping[x]

    def violation(self) -> str | None:
        S, T, f = self.source, self.target, self.mapping
        if set(f) != set(S.elements):
            return "map is not total on the source"
        for x, y in f.items():
            if y not in T:
                return f"image of {x!r} is not in the target"
        if f[S.bottom] != T.bottom or f[S.top] != T.top:
            return "bottom or top not preserved"
        if len(S) <= self.EXHAUSTIVE_LIMIT:
            # work on codes: source code -> target code
            fc = {c: T.code(f[x]) for x, c in zip(S.elements, S.codes)}
            items = list(fc.items())
            for ca, ta in items:
                for cb, tb in items:
                    if fc[ca | cb] != ta | tb:
                        return f"join not preserved at ({S.label(ca)!r}, {S.label(cb)!r})"
                    if fc[ca & cb] != ta & tb:
                        return f"meet not preserved at ({S.label(ca)!r}, {S.label(cb)!r})"
            return None
        # join-irreducibles are join-prime, so these two conditions suffice
        for x in S.elements:
            if f[x] != T.join_all(f[j] for j in S.irr_below(x)):
                return f"{x!r} is not sent to the join of its irreducibles' images"
        for j in S.irr.elements:
            for k in S.irr.elements:
                if f[S.meet(j, k)] != T.meet(f[j], f[k]):
                    return f"meet not preserved at ({j!r}, {k!r})"
        return None

    def compose(self, other: DLatMorphism) -> DLatMorphism:
        """``other`` after ``self``."""
        return DLatMorphism(self.source, other.target, {x: other(y) for x, y in self.mapping.items()}, check=False)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def __repr__(self) -> str:
        return f"DLatMorphism({len(self.mapping)} elements)"


# -- constructors ------------------------------------------------------------


def from_downsets(P: FinPoset) -> DistLattice:
    """Lattice of down-sets of ``P``, elements labelled by frozensets."""
    return DistLattice(P, P.labels_of, lambda x: P.mask_of(x))


def upsets_lattice(P: FinPoset) -> DistLattice:
    Q = P.dual()
    return DistLattice(Q, Q.labels_of, lambda x: Q.mask_of(x))


def from_order(elements: Sequence[Label], pairs: Iterable[tuple[Label, Label]]) -> DistLattice:
    """Validate an explicit order as a distributive lattice.

    Checks bounds, binary joins/meets and both distributive laws on every
    triple, then locates the join-irreducibles.
    """
    P = validate_poset(elements, pairs)
    n = len(P)
    if n == 0:
        raise NotALattice("a lattice needs at least one element")
    if P.least() is None or P.greatest() is None:
        raise NotALattice("lattice needs a bottom and a top")
    by_up = {P.up_mask(i): i for i in range(n)}
    by_down = {P.down_mask(i): i for i in range(n)}
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            k = by_up.get(P.up_mask(i) & P.up_mask(j))
            l = by_down.get(P.down_mask(i) & P.down_mask(j))
            if k is None or l is None:
                raise NotALattice(f"{P.elements[i]!r}, {P.elements[j]!r} lack a join or meet")
            join[i][j] = k
            meet[i][j] = l
    for a in range(n):
        ma, ja = meet[a], join[a]
        for b in range(n):
            for c in range(n):
                if ma[join[b][c]] != join[ma[b]][ma[c]] or ja[meet[b][c]] != meet[ja[b]][ja[c]]:
                    raise NotDistributive(tuple(P.elements[t] for t in (a, b, c)))
    bottom = P.index(P.least())
    reducible = {join[a][b] for a in range(n) for b in range(n) if join[a][b] not in (a, b)}
    irr = [i for i in range(n) if i != bottom and i not in reducible]
    position = {i: k for k, i in enumerate(irr)}
    base = FinPoset(
        [P.elements[i] for i in irr],
        [sum(1 << position[j] for j in bits(P.up_mask(i)) if j in position) for i in irr],
    )
    codes = [sum(1 << position[j] for j in bits(P.down_mask(i)) if j in position) for i in range(n)]
    if len(set(codes)) != n:
        raise NotDistributive(("birkhoff",))
    decode = dict(zip(codes, P.elements))
    encode = dict(zip(P.elements, codes))
    return DistLattice(base, decode.__getitem__, encode.__getitem__, order=codes)


def from_set_family(family: Iterable[Iterable[Label]]) -> DistLattice:
    """Sublattice of a power set, given as a family closed under union and intersection."""
    fam = sorted({frozenset(s) for s in family}, key=lambda s: (len(s), sorted(map(fmt_label, s))))
    if not fam:
        raise NotALattice("empty family")
    present = set(fam)
    for a in fam:
        for b in fam:
            if a | b not in present or a & b not in present:
                raise NotALattice("family is not closed under union and intersection")
    bottom = frozenset.intersection(*fam)
    irr = []
    for x in fam:
        if x == bottom:
            continue
        if frozenset().union(*[y for y in fam if y < x]) != x:
            irr.append(x)
    position = {x: k for k, x in enumerate(irr)}
    base = FinPoset(irr, [sum(1 << position[y] for y in irr if x <= y) for x in irr])
    codes = [sum(1 << position[j] for j in irr if j <= x) for x in fam]
    decode = dict(zip(codes, fam))
    encode = dict(zip(fam, codes))
    return DistLattice(base, decode.__getitem__, encode.__getitem__, order=codes)


def chain_lattice(n: int) -> DistLattice:
    """``n``-element chain with labels ``"0" < "1" < ...``."""
    labels = [str(i) for i in range(n)]
    return from_order(labels, zip(labels, labels[1:]))


def powerset_lattice(S: Sequence[Label]) -> DistLattice:
    return from_downsets(FinPoset(list(S), [1 << i for i in range(len(S))]))


def boolean_lattice(k: int) -> DistLattice:
    return from_downsets(antichain(k))


def trivial_lattice() -> DistLattice:
    return from_order(["*"], [])


def join_irreducibles(L: DistLattice) -> FinPoset:
    return L.irr


def opposite(L: DistLattice) -> DistLattice:
    full = L.full
    return DistLattice(
        L._base.dual(),
        lambda m: L.label(full ^ m),
        lambda x: full ^ L.code(x),
    )


def power(L: DistLattice, S: Sequence[Label]) -> DistLattice:
    """Componentwise power ``L^S``; elements are tuples in the order of ``S``."""
    S = list(S)
    k = len(L.irr)
    low = L.full

    def decode(mask: int):
        return tuple(L.label(mask >> (t * k) & low) for t in range(len(S)))

    def encode(x):
        if not isinstance(x, tuple) or len(x) != len(S):
            raise InvalidInput(f"{x!r} is not an {len(S)}-tuple")
        return sum(L.code(c) << (t * k) for t, c in enumerate(x))

    base = disjoint_union([(s, L.irr) for s in S])
    return DistLattice(base, decode, encode)


def product_lattice(L: DistLattice, M: DistLattice) -> DistLattice:
    """Cartesian product ``L x M`` with componentwise order; elements are pairs."""
    k = len(L.irr)

    def decode(mask: int):
        return (L.label(mask & L.full), M.label(mask >> k))

    def encode(x):
        if not isinstance(x, tuple) or len(x) != 2:
            raise InvalidInput(f"{x!r} is not a pair")
        return L.code(x[0]) | M.code(x[1]) << k

    return DistLattice(disjoint_union([(0, L.irr), (1, M.irr)]), decode, encode)


class Tensor(NamedTuple):
    lattice: DistLattice
    left: DLatMorphism
    right: DLatMorphism


def tensor_with_injections(L: DistLattice, M: DistLattice) -> Tensor:
    """Coproduct ``L (x) M``: quasi-compact opens of ``Spec L x Spec M``.

    Elements are frozensets of point pairs ``(j, k)`` where ``j``, ``k``
    run over join-irreducibles (points of the spectra).
    """
    base = product(L.irr, M.irr)
    T = DistLattice(base, base.labels_of, lambda x: base.mask_of(x))
    m = len(M.irr)

    def rect(mask_l: int, mask_m: int) -> int:
        out = 0
        for i in bits(mask_l):
            for j in bits(mask_m):
                out |= 1 << (i * m + j)
        return out

    left = {a: T.label(rect(L.code(a), M.full)) for a in L.elements}
    right = {b: T.label(rect(L.full, M.code(b))) for b in M.elements}
    return Tensor(T, DLatMorphism(L, T, left, check=False), DLatMorphism(M, T, right, check=False))


def tensor(L: DistLattice, M: DistLattice) -> DistLattice:
    return tensor_with_injections(L, M).lattice


class Booleanization(NamedTuple):
    lattice: DistLattice
    unit: DLatMorphism


def booleanize(L: DistLattice) -> Booleanization:
    """Power set of the prime filters; ``a`` goes to the filters containing it.

    The prime filters of a finite distributive lattice are the principal
    filters of its join-irreducibles, so a filter is labelled by its
    generator.
    """
    B = powerset_lattice(L.irr.elements)
    unit = {x: L.irr_below(x) for x in L.elements}
    return Booleanization(B, DLatMorphism(L, B, unit, check=False))


class FreeLattice(NamedTuple):
    lattice: DistLattice
    unit: dict


def free_dlat(U: UpperSemilattice, capacity: int = FREE_CAPACITY) -> FreeLattice:
    """Free distributive lattice on an upper semilattice, inside ``P(U)``.

    ``u`` is sent to ``{v in U : u not <= v}``; the images together with
    the empty set and ``U`` itself are closed under finite unions and
    intersections.
    """
    elems = U.elements
    unit = {u: frozenset(v for v in elems if not U.leq(u, v)) for u in elems}
    seen = set(unit.values()) | {frozenset(), frozenset(elems)}
    frontier = list(seen)
    while frontier:
        new = []
        current = list(seen)
        for a in frontier:
            for b in current:
                for c in (a | b, a & b):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
                        if len(seen) > capacity:
                            raise CapacityExceeded(f"free lattice closure exceeded {capacity} subsets")
        frontier = new
    return FreeLattice(from_set_family(seen), unit)

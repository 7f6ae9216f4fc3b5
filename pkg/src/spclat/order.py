"""Finite posets, monotone maps, upper semilattices.

A :class:`FinPoset` keeps the full order relation as one bitmask of
up-set members per element, so ``leq`` is a shift and a mask.  Hasse
covers are derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import CycleDetected, InvalidInput, NoBottom, NoJoin, SizeGuard

Label = Hashable


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def fmt_label(x) -> str:
    """Deterministic text rendering of a (possibly composite) label."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(fmt_label(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(fmt_label(y) for y in x)) + "}"
    return str(x)


class FinPoset:
    """Immutable finite poset.

    ``up[i]`` is the bitmask of indices ``j`` with ``elements[i] <= elements[j]``.
    The constructor trusts its input; use :func:`validate_poset` for raw
    relations.
    """

    def __init__(self, elements: Sequence[Label], up: Sequence[int]):
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise InvalidInput("poset labels must be pairwise distinct")
        self._up = tuple(up)
        down = [0] * len(self.elements)
        for i, m in enumerate(self._up):
            for j in bits(m):
                down[j] |= 1 << i
        self._down = tuple(down)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __repr__(self) -> str:
        covers = ", ".join(f"{fmt_label(a)}<{fmt_label(b)}" for a, b in self.covers())
        return f"FinPoset([{', '.join(map(fmt_label, self.elements))}]; {covers})"

    @cached_property
    def _pairs(self) -> frozenset:
        return frozenset(self.relation())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinPoset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def index(self, x: Label) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise InvalidInput(f"{x!r} is not an element") from None

    def leq(self, a: Label, b: Label) -> bool:
        return bool(self._up[self.index(a)] >> self.index(b) & 1)

    def lt(self, a: Label, b: Label) -> bool:
        return a != b and self.leq(a, b)

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def up(self, a: Label) -> frozenset:
        return self.labels_of(self._up[self.index(a)])

    def down(self, a: Label) -> frozenset:
        return self.labels_of(self._down[self.index(a)])

    def mask_of(self, labels: Iterable[Label]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def labels_of(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in bits(mask))

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def relation(self) -> Iterator[tuple[Label, Label]]:
        for i, a in enumerate(self.elements):
            for j in bits(self._up[i]):
                yield a, self.elements[j]

    def is_downset(self, mask: int) -> bool:
        return all(self._down[i] & ~mask == 0 for i in bits(mask))

    def is_upset(self, mask: int) -> bool:
        return all(self._up[i] & ~mask == 0 for i in bits(mask))

    @cached_property
    def cover_masks(self) -> tuple[int, ...]:
        """``cover_masks[i]``: indices of the upper covers of element ``i``."""
        out = []
        for i in range(len(self.elements)):
            strict = self._up[i] & ~(1 << i)
            above = 0
            for j in bits(strict):
                above |= self._up[j] & ~(1 << j)
            out.append(strict & ~above)
        return tuple(out)

    def covers(self) -> list[tuple[Label, Label]]:
        return [
            (self.elements[i], self.elements[j])
            for i in range(len(self.elements))
            for j in bits(self.cover_masks[i])
        ]

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        return tuple(sorted(range(len(self.elements)), key=lambda i: (bin(self._down[i]).count("1"), i)))

    def downset_masks(self) -> list[int]:
        """All downward closed subsets, sorted by (size, mask)."""
        order = self.linear_extension
        strict = [self._down[i] & ~(1 << i) for i in range(len(self.elements))]
        out: list[int] = []
        stack = [(0, 0)]
        n = len(order)
        while stack:
            k, mask = stack.pop()
            if k == n:
                out.append(mask)
                continue
            i = order[k]
            stack.append((k + 1, mask))
            if strict[i] & ~mask == 0:
                stack.append((k + 1, mask | 1 << i))
        out.sort(key=lambda m: (bin(m).count("1"), m))
        return out

    def dual(self) -> FinPoset:
        return FinPoset(self.elements, self._down)

    def relabel(self, labels: Sequence[Label]) -> FinPoset:
        return FinPoset(labels, self._up)

    def least(self) -> Label | None:
        for i, m in enumerate(self._up):
            if m == self.full_mask:
                return self.elements[i]
        return None

    def greatest(self) -> Label | None:
        for i, m in enumerate(self._down):
            if m == self.full_mask:
                return self.elements[i]
        return None

    def minimal(self) -> list[Label]:
        return [self.elements[i] for i, m in enumerate(self._down) if m == 1 << i]

    def maximal(self) -> list[Label]:
        return [self.elements[i] for i, m in enumerate(self._up) if m == 1 << i]

    def is_antichain(self) -> bool:
        return all(m == 1 << i for i, m in enumerate(self._up))

    def to_json(self) -> dict:
        return {
            "elements": [fmt_label(x) for x in self.elements],
            "leq": [[fmt_label(a), fmt_label(b)] for a, b in self.covers()],
        }


def validate_poset(elements: Sequence[Label], pairs: Iterable[tuple[Label, Label]]) -> FinPoset:
    """Reflexive-transitive closure of ``pairs``; rejects cycles."""
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise InvalidInput("poset labels must be pairwise distinct")
    up = [1 << i for i in range(len(elements))]
    for a, b in pairs:
        if a not in index or b not in index:
            raise InvalidInput(f"relation pair ({a!r}, {b!r}) uses an unknown label")
        up[index[a]] |= 1 << index[b]
    for k in range(len(elements)):
        for i in range(len(elements)):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i in range(len(elements)):
        for j in bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise CycleDetected(elements[i], elements[j])
    return FinPoset(elements, up)


def chain(n: int) -> FinPoset:
    return FinPoset([str(i) for i in range(n)], [((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)])


def antichain(n: int) -> FinPoset:
    return FinPoset([str(i) for i in range(n)], [1 << i for i in range(n)])


def product(P: FinPoset, Q: FinPoset) -> FinPoset:
    """Componentwise order on pairs, lexicographic element order."""
    m = len(Q)
    elements = [(p, q) for p in P.elements for q in Q.elements]
    up = []
    for i in range(len(P)):
        for j in range(m):
            mask = 0
            for i2 in bits(P.up_mask(i)):
                for j2 in bits(Q.up_mask(j)):
                    mask |= 1 << (i2 * m + j2)
            up.append(mask)
    return FinPoset(elements, up)


def disjoint_union(parts: Sequence[tuple[Label, FinPoset]]) -> FinPoset:
    """Elements ``(tag, x)``; no relations across parts."""
    elements, up, offset = [], [], 0
    for tag, P in parts:
        elements.extend((tag, x) for x in P.elements)
        up.extend(m << offset for m in (P.up_mask(i) for i in range(len(P))))
        offset += len(P)
    return FinPoset(elements, up)


def alexandroff_opens(P: FinPoset):
    """Upward closed subsets of ``P`` as a distributive lattice of frozensets."""
    from .dlat import upsets_lattice

    return upsets_lattice(P)


@dataclass(frozen=True)
class MonotoneMap:
    source: FinPoset
    target: FinPoset
    assignment: Mapping[Label, Label]

    def __post_init__(self):
        if set(self.assignment) != set(self.source.elements):
            raise InvalidInput("monotone map must be total on the source")
        for a, b in self.source.relation():
            if not self.target.leq(self.assignment[a], self.assignment[b]):
                raise InvalidInput(f"not monotone at {a!r} <= {b!r}")

    def __call__(self, x: Label) -> Label:
        return self.assignment[x]


class UpperSemilattice:
    """Poset with all finite joins; ``join`` is a precomputed table."""

    def __init__(self, poset: FinPoset, join: Mapping[tuple[Label, Label], Label], bottom: Label):
        self.poset = poset
        self._join = dict(join)
        self.bottom = bottom

    @property
    def elements(self) -> tuple:
        return self.poset.elements

    def __len__(self) -> int:
        return len(self.poset)

    def join(self, a: Label, b: Label) -> Label:
        return self._join[a, b]

    def join_all(self, xs: Iterable[Label]) -> Label:
        out = self.bottom
        for x in xs:
            out = self._join[out, x]
        return out

    def leq(self, a: Label, b: Label) -> bool:
        return self.poset.leq(a, b)

    def __repr__(self) -> str:
        return f"UpperSemilattice({self.poset!r})"


def semilattice_from_poset(P: FinPoset) -> UpperSemilattice:
    bottom = P.least()
    if bottom is None:
        raise NoBottom("poset has no least element (empty join missing)")
    by_up = {P.up_mask(i): i for i in range(len(P))}
    join = {}
    for i, a in enumerate(P.elements):
        for j, b in enumerate(P.elements):
            k = by_up.get(P.up_mask(i) & P.up_mask(j))
            if k is None:
                raise NoJoin(a, b)
            join[a, b] = P.elements[k]
    return UpperSemilattice(P, join, bottom)


# -- isomorphism search ------------------------------------------------------


def _refine(P: FinPoset, Q: FinPoset) -> tuple[list[int], list[int]]:
    """Joint colour refinement by (down size, up size, cover colours)."""

    def initial(R):
        return [(bin(R.down_mask(i)).count("1"), bin(R.up_mask(i)).count("1")) for i in range(len(R))]

    def lower_covers(R):
        lc = [0] * len(R)
        for i in range(len(R)):
            for j in bits(R.cover_masks[i]):
                lc[j] |= 1 << i
        return lc

    lcP, lcQ = lower_covers(P), lower_covers(Q)
    cP, cQ = initial(P), initial(Q)
    n_classes = -1
    while True:
        sigP = [(cP[i], tuple(sorted(cP[j] for j in bits(P.cover_masks[i]))),
                 tuple(sorted(cP[j] for j in bits(lcP[i])))) for i in range(len(P))]
        sigQ = [(cQ[i], tuple(sorted(cQ[j] for j in bits(Q.cover_masks[i]))),
                 tuple(sorted(cQ[j] for j in bits(lcQ[i])))) for i in range(len(Q))]
        palette = {s: k for k, s in enumerate(sorted(set(sigP) | set(sigQ)))}
        cP = [palette[s] for s in sigP]
        cQ = [palette[s] for s in sigQ]
        if len(palette) == n_classes:
            return cP, cQ
        n_classes = len(palette)


def poset_isomorphism(P: FinPoset, Q: FinPoset, max_size: int | None = None) -> dict | None:
    """An order isomorphism ``P -> Q`` as a label map, or ``None``.

    Backtracking over colour-refined candidates; exhaustive, so ``None``
    is a definitive answer.
    """
    if max_size is not None and max(len(P), len(Q)) > max_size:
        raise SizeGuard(f"poset isomorphism: {max(len(P), len(Q))} elements exceeds guard {max_size}")
    if len(P) != len(Q):
        return None
    n = len(P)
    cP, cQ = _refine(P, Q)
    if sorted(cP) != sorted(cQ):
        return None
    class_size = {}
    for c in cQ:
        class_size[c] = class_size.get(c, 0) + 1
    by_colour: dict[int, list[int]] = {}
    for j, c in enumerate(cQ):
        by_colour.setdefault(c, []).append(j)

    # rarest colours first, then prefer elements comparable to those already placed
    order: list[int] = []
    placed = 0
    remaining = set(range(n))
    while remaining:
        def score(i):
            comp = P.up_mask(i) | P.down_mask(i)
            return (class_size[cP[i]], -bin(comp & placed).count("1"), i)

        i = min(remaining, key=score)
        order.append(i)
        placed |= 1 << i
        remaining.discard(i)

    phi = [-1] * n
    used = [False] * n

    def consistent(i: int, j: int, depth: int) -> bool:
        up_i, down_i = P.up_mask(i), P.down_mask(i)
        up_j, down_j = Q.up_mask(j), Q.down_mask(j)
        for k in range(depth):
            p = order[k]
            q = phi[p]
            if (up_i >> p & 1) != (up_j >> q & 1) or (down_i >> p & 1) != (down_j >> q & 1):
                return False
        return True

    def search(depth: int) -> bool:
        if depth == n:
            return True
        i = order[depth]
        for j in by_colour[cP[i]]:
            if not used[j] and consistent(i, j, depth):
                phi[i] = j
                used[j] = True
                if search(depth + 1):
                    return True
                used[j] = False
        phi[i] = -1
        return False

    if not search(0):
        return None
    return {P.elements[i]: Q.elements[phi[i]] for i in range(n)}

"""Brute-force verifiers for the universal properties and isomorphism claims.

The checks here work from the order relation alone: join and meet tables
are recomputed from up-sets, morphisms are enumerated by backtracking, and
universal properties are tested by counting extensions against every
small target lattice.  Nothing reuses the shortcuts the constructors take.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .dlat import (
    DistLattice,
    DLatMorphism,
    boolean_lattice,
    booleanize,
    chain_lattice,
    free_dlat,
    from_downsets,
    join_irreducibles,
    product_lattice,
    tensor_with_injections,
)
from .errors import SizeGuard
from .order import FinPoset, UpperSemilattice, bits, fmt_label, poset_isomorphism, semilattice_from_poset, validate_poset
from .spectral import SpectralSpace, homeomorphic, space_from_opens, spec

SEARCH_CAP = 10**7
ISO_GUARD = 12
EXHAUSTIVE_RECHECK = 64


@dataclass
class CheckReport:
    name: str
    instances_checked: int = 0
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "instances_checked": self.instances_checked,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


# -- order-only view of a lattice ---------------------------------------------------


class _Table:
    """Join/meet tables and covers recomputed from the order relation."""

    def __init__(self, L: DistLattice):
        P = L.as_poset()
        n = len(P)
        self.lattice = L
        self.elements = P.elements
        self.n = n
        up = [P.up_mask(i) for i in range(n)]
        down = [P.down_mask(i) for i in range(n)]
        by_up = {m: i for i, m in enumerate(up)}
        by_down = {m: i for i, m in enumerate(down)}
        self.join = [[by_up[up[i] & up[j]] for j in range(n)] for i in range(n)]
        self.meet = [[by_down[down[i] & down[j]] for j in range(n)] for i in range(n)]
        self.up = up
        self.bottom = next(i for i in range(n) if up[i] == P.full_mask)
        self.top = next(i for i in range(n) if down[i] == P.full_mask)
        lower = [[] for _ in range(n)]
        for i in range(n):
            for j in bits(P.cover_masks[i]):
                lower[j].append(i)
        self.lower = lower
        self.order = sorted(range(n), key=lambda i: (bin(down[i]).count("1"), i))

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)


_TABLES: dict[int, tuple[DistLattice, _Table]] = {}


def _table(L: DistLattice) -> _Table:
    hit = _TABLES.get(id(L))
    if hit is None or hit[0] is not L:
        if len(_TABLES) > 4096:
            _TABLES.clear()
        hit = (L, _Table(L))
        _TABLES[id(L)] = hit
    return hit[1]


def _is_morphism(S: _Table, T: _Table, f: Sequence[int]) -> bool:
    if f[S.bottom] != T.bottom or f[S.top] != T.top:
        return False
    for i in range(S.n):
        ji, mi = S.join[i], S.meet[i]
        for j in range(i + 1, S.n):
            if f[ji[j]] != T.join[f[i]][f[j]] or f[mi[j]] != T.meet[f[i]][f[j]]:
                return False
    return True


def _enumerate(S: _Table, T: _Table, cap: int) -> list[tuple[int, ...]]:
    """All lattice morphisms as index tuples.

    Elements are visited by rank.  An element with two or more lower covers
    is their join, so its value is forced; an element with one lower cover
    is join-irreducible and branches over the target, pruned by
    monotonicity and by meets with earlier irreducibles.

    A map built this way sends each element to the join of the images of
    the irreducibles below it, and irreducibles are join-prime, so it
    preserves joins; meets of irreducibles then give all meets by
    distributivity.  Small sources are re-verified on every pair anyway.
    """
    f = [-1] * S.n
    branch_points: list[int] = []
    out = []
    visited = 0

    def rec(k: int):
        nonlocal visited
        visited += 1
        if visited > cap:
            raise SizeGuard(f"morphism enumeration exceeded {cap} search nodes")
        if k == S.n:
            if S.n > EXHAUSTIVE_RECHECK or _is_morphism(S, T, f):
                out.append(tuple(f))
            return
        x = S.order[k]
        lower = S.lower[x]
        if not lower:
            candidates = [T.bottom]
        elif len(lower) >= 2:
            y = T.bottom
            for z in lower:
                y = T.join[y][f[z]]
            candidates = [y]
        else:
            base = f[lower[0]]
            candidates = [y for y in range(T.n) if T.leq(base, y)]
        if x == S.top:
            candidates = [y for y in candidates if y == T.top]
        for y in candidates:
            ok = True
            for z in branch_points:
                if f[S.meet[x][z]] != T.meet[y][f[z]]:
                    ok = False
                    break
            if not ok:
                continue
            f[x] = y
            irreducible = len(lower) == 1
            if irreducible:
                branch_points.append(x)
            rec(k + 1)
            if irreducible:
                branch_points.pop()
            f[x] = -1

    rec(0)
    return out


def enumerate_dlat_morphisms(L: DistLattice, M: DistLattice, cap: int = SEARCH_CAP) -> list[DLatMorphism]:
    """Every map ``L -> M`` preserving 0, 1, binary joins and binary meets.

    Deterministic order; raises :class:`SizeGuard` past ``cap`` search nodes.
    """
    S, T = _table(L), _table(M)
    return [
        DLatMorphism(L, M, {S.elements[i]: T.elements[y] for i, y in enumerate(f)}, check=False)
        for f in _enumerate(S, T, cap)
    ]


def _morphism_tuples(L: DistLattice, M: DistLattice, cap: int = SEARCH_CAP) -> list[tuple]:
    S, T = _table(L), _table(M)
    return [tuple(T.elements[y] for y in f) for f in _enumerate(S, T, cap)]


def enumerate_semilattice_maps(U: UpperSemilattice, M: DistLattice) -> list[dict]:
    """Maps ``U -> M`` preserving binary joins and the bottom."""
    P = U.poset
    order = sorted(P.elements, key=lambda x: (len(P.down(x)), P.index(x)))
    out = []
    f: dict = {}

    def rec(k: int):
        if k == len(order):
            if all(f[U.join(a, b)] == M.join(f[a], f[b]) for a in order for b in order):
                out.append(dict(f))
            return
        x = order[k]
        for y in ([M.bottom] if x == U.bottom else M.elements):
            f[x] = y
            if all(
                M.join(y, f[z]) == f[U.join(x, z)]
                for z in order[: k + 1]
                if U.join(x, z) in f
            ):
                rec(k + 1)
            del f[x]

    rec(0)
    return out


# -- universal property checks --------------------------------------------------------


def _fmt_map(m: dict) -> dict:
    return {fmt_label(k): fmt_label(v) for k, v in m.items()}


def check_free_universal(
    U: UpperSemilattice,
    targets: Iterable[DistLattice] | None = None,
    free: tuple[DistLattice, dict] | None = None,
    bound: int = 6,
) -> CheckReport:
    """Each semilattice map ``U -> M`` extends to exactly one lattice morphism ``Free(U) -> M``."""
    F, unit = free if free is not None else free_dlat(U)
    targets = list(targets) if targets is not None else distributive_lattices(bound)
    report = CheckReport("free_universal")
    index = {x: i for i, x in enumerate(F.elements)}
    for M in targets:
        extensions = Counter()
        for h in _morphism_tuples(F, M):
            extensions[tuple(h[index[unit[u]]] for u in U.elements)] += 1
        for phi in enumerate_semilattice_maps(U, M):
            report.instances_checked += 1
            key = tuple(phi[u] for u in U.elements)
            if extensions[key] != 1:
                report.counterexample = {
                    "target": M.to_json(),
                    "map": _fmt_map(phi),
                    "extensions": extensions[key],
                }
                return report
    return report


def check_boolean_reflection(
    L: DistLattice,
    bound: int = 8,
    unit: tuple[DistLattice, dict] | None = None,
) -> CheckReport:
    """Each morphism ``L -> B`` into a Boolean lattice factors uniquely through the Booleanization."""
    if unit is None:
        Bz = booleanize(L)
        unit = (Bz.lattice, Bz.unit.mapping)
    BL, eta = unit
    report = CheckReport("boolean_reflection")
    index = {x: i for i, x in enumerate(BL.elements)}
    k = 0
    while 1 << k <= bound:
        B = boolean_lattice(k)
        factorizations = Counter()
        for g in _morphism_tuples(BL, B):
            factorizations[tuple(g[index[eta[x]]] for x in L.elements)] += 1
        for f in _morphism_tuples(L, B):
            report.instances_checked += 1
            if factorizations[f] != 1:
                report.counterexample = {
                    "target": B.to_json(),
                    "map": _fmt_map(dict(zip(L.elements, f))),
                    "factorizations": factorizations[f],
                }
                return report
        k += 1
    return report


def check_tensor_coproduct(
    L: DistLattice,
    M: DistLattice,
    bound: int = 5,
    tensor: tuple[DistLattice, dict, dict] | None = None,
    targets: Iterable[DistLattice] | None = None,
) -> CheckReport:
    """Morphisms ``L (x) M -> N`` biject with pairs ``(L -> N, M -> N)`` via the injections."""
    if tensor is None:
        T, left, right = tensor_with_injections(L, M)
        tensor = (T, left.mapping, right.mapping)
    T, left, right = tensor
    targets = list(targets) if targets is not None else distributive_lattices(bound)
    report = CheckReport("tensor_coproduct")
    index = {x: i for i, x in enumerate(T.elements)}
    for N in targets:
        extensions = Counter()
        for h in _morphism_tuples(T, N):
            key = (tuple(h[index[left[a]]] for a in L.elements), tuple(h[index[right[b]]] for b in M.elements))
            extensions[key] += 1
        for f, g in itertools.product(_morphism_tuples(L, N), _morphism_tuples(M, N)):
            report.instances_checked += 1
            if extensions[f, g] != 1:
                report.counterexample = {
                    "target": N.to_json(),
                    "left": _fmt_map(dict(zip(L.elements, f))),
                    "right": _fmt_map(dict(zip(M.elements, g))),
                    "extensions": extensions[f, g],
                }
                return report
    return report


# -- isomorphisms ----------------------------------------------------------------------


def find_isomorphism(L: DistLattice, M: DistLattice, max_irr: int = ISO_GUARD) -> DLatMorphism | None:
    """A lattice isomorphism ``L -> M`` or ``None`` (definitive).

    Searches isomorphisms of the join-irreducible posets and extends by
    joins; the extension is re-verified as a bijective morphism.
    """
    if max(len(L.irr), len(M.irr)) > max_irr:
        raise SizeGuard(f"isomorphism search: more than {max_irr} join-irreducibles")
    if len(L) != len(M):
        return None
    phi = poset_isomorphism(L.irr, M.irr)
    if phi is None:
        return None
    mapping = {x: M.join_all(phi[j] for j in L.irr_below(x)) for x in L.elements}
    f = DLatMorphism(L, M, mapping)
    if not f.is_injective():
        raise AssertionError("extended isomorphism is not injective")
    return f


def lattice_isomorphism_bruteforce(L: DistLattice, M: DistLattice) -> dict | None:
    """Order isomorphism of the full lattices (an order isomorphism of lattices is a lattice isomorphism)."""
    return poset_isomorphism(L.as_poset(), M.as_poset())


def prime_filters_bruteforce(L: DistLattice) -> list[frozenset]:
    """Prime filters found among the up-sets of ``L``."""
    t = _table(L)
    P = L.as_poset()
    out = []
    for mask in P.dual().downset_masks():
        members = list(bits(mask))
        if not mask >> t.top & 1 or mask >> t.bottom & 1:
            continue
        if any(not mask >> t.meet[i][j] & 1 for i in members for j in members):
            continue
        prime = all(
            mask >> i & 1 or mask >> j & 1
            for i in range(t.n)
            for j in range(i, t.n)
            if mask >> t.join[i][j] & 1
        )
        if prime:
            out.append(frozenset(t.elements[i] for i in members))
    return sorted(out, key=lambda s: (len(s), sorted(map(fmt_label, s))))


def spec_bruteforce(L: DistLattice) -> SpectralSpace:
    """Prime filters with basic opens ``D(a) = {p : a in p}``."""
    points = prime_filters_bruteforce(L)
    opens = {frozenset(p for p in points if a in p) for a in L.elements}
    return space_from_opens(points, opens)


def birkhoff_round_trip(L: DistLattice) -> bool:
    R = from_downsets(join_irreducibles(L))
    return find_isomorphism(R, L) is not None and lattice_isomorphism_bruteforce(R, L) is not None


# -- corpus ------------------------------------------------------------------------------


def _extend_posets(P: FinPoset) -> Iterator[FinPoset]:
    """Posets obtained by adding one maximal element above a down-set."""
    n = len(P)
    for D in P.downset_masks():
        up = [P.up_mask(i) | (1 << n if D >> i & 1 else 0) for i in range(n)]
        up.append(1 << n)
        yield FinPoset([str(i) for i in range(n + 1)], up)


def posets_up_to_iso(max_size: int, keep: Callable[[FinPoset], bool] = lambda P: True) -> list[FinPoset]:
    """One representative of each poset with at most ``max_size`` elements.

    ``keep`` must be inherited by subposets obtained by deleting a maximal
    element; rejected posets are not extended.
    """
    level = [FinPoset([], [])]
    out = list(level)
    for _ in range(max_size):
        reps: dict = {}
        for P in level:
            for Q in _extend_posets(P):
                if not keep(Q):
                    continue
                key = (len(Q.downset_masks()), len(list(Q.relation())))
                bucket = reps.setdefault(key, [])
                if all(poset_isomorphism(Q, R) is None for R in bucket):
                    bucket.append(Q)
        level = [Q for bucket in reps.values() for Q in bucket]
        out.extend(level)
    return out


_CORPUS: dict[int, list[DistLattice]] = {}


def distributive_lattices(max_size: int) -> list[DistLattice]:
    """Every distributive lattice with at most ``max_size`` elements, up to isomorphism.

    Each is the down-set lattice of its join-irreducibles, so this runs
    over posets with at most ``max_size`` down-sets.
    """
    if max_size not in _CORPUS:
        posets = posets_up_to_iso(max(max_size - 1, 0), lambda P: len(P.downset_masks()) <= max_size)
        lattices = [from_downsets(P) for P in posets if len(P.downset_masks()) <= max_size]
        lattices.sort(key=lambda L: (len(L), len(L.irr), sorted(map(len, (L.irr.up(j) for j in L.irr)))))
        _CORPUS[max_size] = lattices
    return list(_CORPUS[max_size])


def semilattices(max_size: int) -> list[UpperSemilattice]:
    """Every finite upper semilattice with at most ``max_size`` elements, up to isomorphism."""
    out = []
    for P in posets_up_to_iso(max_size):
        if len(P) == 0:
            continue
        try:
            out.append(semilattice_from_poset(P))
        except Exception:
            continue
    return out


def random_poset(rng: random.Random, n: int, density: float = 0.35) -> FinPoset:
    labels = [str(i) for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return validate_poset(labels, pairs)


def random_lattices(seed: int, count: int, max_irr: int = 6) -> list[DistLattice]:
    rng = random.Random(seed)
    return [from_downsets(random_poset(rng, rng.randint(0, max_irr))) for _ in range(count)]


# -- mutations --------------------------------------------------------------------------


def corrupted_free_chain() -> tuple[UpperSemilattice, tuple[DistLattice, dict]]:
    """``Free({0 < 1})`` with its middle collapsed: a 2-chain with unit ``0 -> 0, 1 -> 1``."""
    U = semilattice_from_poset(validate_poset(["0", "1"], [("0", "1")]))
    C = chain_lattice(2)
    return U, (C, {"0": "0", "1": "1"})


def corrupted_tensor(L: DistLattice) -> tuple[DistLattice, dict, dict]:
    """Product ``L x L`` posing as ``L (x) L`` with both injections diagonal."""
    P = product_lattice(L, L)
    diag = {a: (a, a) for a in L.elements}
    return P, diag, dict(diag)


def corrupted_booleanization(L: DistLattice) -> tuple[DistLattice, dict]:
    """Booleanization whose unit sends every non-top element to the empty set."""
    Bz = booleanize(L)
    eta = {x: (Bz.lattice.top if x == L.top else Bz.lattice.bottom) for x in L.elements}
    return Bz.lattice, eta


# -- suites ------------------------------------------------------------------------------


def _merge(name: str, reports: Iterable[CheckReport]) -> CheckReport:
    out = CheckReport(name)
    for r in reports:
        out.instances_checked += r.instances_checked
        if r.counterexample is not None and out.counterexample is None:
            out.counterexample = r.counterexample
    return out


def suite_free(max_size: int = 5, target_size: int = 6) -> CheckReport:
    targets = distributive_lattices(target_size)
    return _merge("free_universal", (check_free_universal(U, targets) for U in semilattices(max_size)))


def suite_boolean(max_size: int = 6, bound: int = 8) -> CheckReport:
    return _merge("boolean_reflection", (check_boolean_reflection(L, bound) for L in distributive_lattices(max_size)))


def suite_tensor(max_size: int = 6, bound: int = 5) -> CheckReport:
    corpus = distributive_lattices(max_size)
    targets = distributive_lattices(bound)
    return _merge(
        "tensor_coproduct",
        (check_tensor_coproduct(L, M, targets=targets) for L in corpus for M in corpus),
    )


def suite_birkhoff(max_size: int = 8, seed: int = 0, random_count: int = 20) -> CheckReport:
    report = CheckReport("birkhoff_round_trip")
    for L in distributive_lattices(max_size) + random_lattices(seed, random_count):
        report.instances_checked += 1
        if not birkhoff_round_trip(L):
            report.counterexample = {"lattice": L.to_json()}
            break
    return report


def suite_spectral(max_size: int = 8, seed: int = 0, random_count: int = 20) -> CheckReport:
    """``spec`` agrees with prime filters found by brute force."""
    report = CheckReport("spec_prime_filters")
    for L in distributive_lattices(max_size) + random_lattices(seed, random_count, max_irr=5):
        report.instances_checked += 1
        if homeomorphic(spec(L), spec_bruteforce(L), max_points=64) is None:
            report.counterexample = {"lattice": L.to_json()}
            break
    return report


def suite_mutations() -> CheckReport:
    """Each check must produce a counterexample on its corrupted input."""
    report = CheckReport("mutations_detected")
    U, bad_free = corrupted_free_chain()
    C3 = chain_lattice(3)
    cases = {
        "free_collapsed_middle": check_free_universal(U, distributive_lattices(4), free=bad_free),
        "tensor_as_product": check_tensor_coproduct(C3, C3, tensor=corrupted_tensor(C3)),
        "booleanization_bad_unit": check_boolean_reflection(C3, unit=corrupted_booleanization(C3)),
    }
    report.details = {k: v.to_json() for k, v in cases.items()}
    for name, r in cases.items():
        report.instances_checked += 1
        if r.passed:
            report.counterexample = {"undetected_mutation": name}
    return report


SUITES: dict[str, Callable[[int], CheckReport]] = {
    "free": lambda seed: suite_free(),
    "boolean": lambda seed: suite_boolean(),
    "tensor": lambda seed: suite_tensor(),
    "birkhoff": lambda seed: suite_birkhoff(seed=seed),
    "spectral": lambda seed: suite_spectral(seed=seed),
    "mutations": lambda seed: suite_mutations(),
}


def run_suite(name: str, seed: int = 0) -> list[CheckReport]:
    if name == "all":
        return [run(seed) for run in SUITES.values()]
    if name not in SUITES:
        raise KeyError(name)
    return [SUITES[name](seed)]

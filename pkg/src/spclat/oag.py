"""Finitely generated partially ordered abelian groups.

A group is ``Z^r x Z/m_1 x ... x Z/m_t`` with a positive cone generated
by finitely many elements.  Elements are integer tuples with the torsion
coordinates reduced.

Cone membership is integer programming in general.  Here it is a
bounded search over generator coefficients, and a negative answer is
only given with a certificate:

* a positive functional ``w`` (``w . g >= 1`` on every generator)
  bounds the total coefficient mass by ``w . x``; if that bound fits in
  the search box the search was exhaustive;
* otherwise a Farkas vector, verified in exact arithmetic, shows that
  ``x`` is not even in the real cone.

Anything else is reported as :attr:`Decision.INCONCLUSIVE`.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import Inconclusive, InvalidInput, JoinNotFound, JoinNotUnique, NotInCone, NotPointed
from .order import FinPoset, UpperSemilattice, semilattice_from_poset

DEFAULT_BOUND = 16

Element = tuple


def default_bound() -> int:
    raw = os.environ.get("SPCLAT_BOUND")
    if raw is None:
        return DEFAULT_BOUND
    try:
        bound = int(raw)
    except ValueError:
        raise InvalidInput(f"SPCLAT_BOUND must be an integer, got {raw!r}") from None
    if bound < 1:
        raise InvalidInput("SPCLAT_BOUND must be at least 1")
    return bound


class Decision(enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class Membership(NamedTuple):
    decision: Decision
    coefficients: tuple | None
    bound_hit: bool


# -- exact linear algebra helpers ---------------------------------------------


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _rationalize(values, check) -> list | None:
    """Round a float vector to nearby rationals that pass ``check``."""
    for limit in (1, 12, 1000, 10**6):
        q = [Fraction(float(v)).limit_denominator(limit) for v in values]
        if check(q):
            return q
    return None


def _farkas(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list | None:
    """A verified ``y`` with ``y . c >= 0`` for all columns and ``y . target < 0``.

    Its existence proves ``target`` is outside the real cone spanned by
    ``columns``.
    """
    r = len(target)
    if r == 0:
        return None
    A_ub = -np.array(columns, dtype=float).reshape(len(columns), r) if columns else None
    b_ub = np.zeros(len(columns)) if columns else None
    res = linprog(np.array(target, dtype=float), A_ub=A_ub, b_ub=b_ub, bounds=[(-1, 1)] * r, method="highs")
    if res.status != 0 or res.fun > -1e-9:
        return None

    def ok(y):
        return all(_dot(y, c) >= 0 for c in columns) and _dot(y, target) < 0

    return _rationalize(res.x, ok)


def _snf(rows: list[list[int]], n_cols: int):
    """Smith form ``S = U M V``; returns (diagonal, U, V) as integer lists."""
    n_rows = len(rows)
    if n_rows == 0 or n_cols == 0:
        eye = lambda k: [[int(i == j) for j in range(k)] for i in range(k)]
        return [], eye(n_rows), eye(n_cols)
    S, U, V = smith_normal_decomp(Matrix(rows))
    diag = [int(S[i, i]) for i in range(min(n_rows, n_cols)) if S[i, i] != 0]
    to_list = lambda M: [[int(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]
    return [abs(d) for d in diag], to_list(U), to_list(V)


def _integer_kernel(rows: list[list[int]], n_cols: int) -> list[list[int]]:
    diag, _, V = _snf(rows, n_cols)
    return [[V[i][j] for i in range(n_cols)] for j in range(len(diag), n_cols)]


def _solve_integer(rows: list[list[int]], n_cols: int, rhs: list[int]) -> list[int] | None:
    """Some integer ``y`` with ``M y = rhs``, or ``None``."""
    diag, U, V = _snf(rows, n_cols)
    u = [_dot(row, rhs) for row in U]
    z = [0] * n_cols
    for i, value in enumerate(u):
        if i < len(diag):
            if value % diag[i]:
                return None
            z[i] = value // diag[i]
        elif value:
            return None
    return [_dot(V[i], z) for i in range(n_cols)]


# -- the group ----------------------------------------------------------------


@dataclass(frozen=True)
class OrderedAbelianGroup:
    """``Z^free_rank x prod Z/torsion`` with cone generated by ``cone``.

    Pointedness (the cone meets its negative only in 0) is decided exactly
    at construction and :class:`NotPointed` is raised when it fails.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()
    cone: tuple[Element, ...] = ()
    search_bound: int = field(default_factory=default_bound)

    def __post_init__(self):
        if self.free_rank < 0:
            raise InvalidInput("free rank must be nonnegative")
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if any(m < 2 for m in self.torsion):
            raise InvalidInput("torsion moduli must be at least 2")
        if self.search_bound < 1:
            raise InvalidInput("search bound must be at least 1")
        object.__setattr__(self, "cone", tuple(self.element(g) for g in self.cone))
        self._check_pointed()

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def zero(self) -> Element:
        return (0,) * self.dim

    def element(self, x) -> Element:
        if isinstance(x, bool):
            raise InvalidInput(f"{x!r} is not a group element")
        if isinstance(x, int):
            # bare 0 names the zero of any group
            x = self.zero if x == 0 else (x,)
        try:
            x = tuple(x)
        except TypeError:
            raise InvalidInput(f"{x!r} is not a group element") from None
        if len(x) != self.dim or not all(isinstance(c, int) and not isinstance(c, bool) for c in x):
            raise InvalidInput(f"{x!r} is not an integer vector of length {self.dim}")
        r = self.free_rank
        return x[:r] + tuple(c % m for c, m in zip(x[r:], self.torsion))

    def add(self, x: Element, y: Element) -> Element:
        return self.element(tuple(a + b for a, b in zip(x, y)))

    def _reduce(self, x: tuple) -> Element:
        # trusted arithmetic on valid elements; skips validation
        if not self.torsion:
            return x
        r = self.free_rank
        return x[:r] + tuple(c % m for c, m in zip(x[r:], self.torsion))

    def _plus(self, x: Element, y: Element) -> Element:
        return self._reduce(tuple(a + b for a, b in zip(x, y)))

    def _minus(self, x: Element, y: Element) -> Element:
        return self._reduce(tuple(a - b for a, b in zip(x, y)))

    def sub(self, x: Element, y: Element) -> Element:
        return self.element(tuple(a - b for a, b in zip(x, y)))

    def neg(self, x: Element) -> Element:
        return self.element(tuple(-a for a in x))

    def scale(self, k: int, x: Element) -> Element:
        return self.element(tuple(k * a for a in x))

    def sum(self, xs) -> Element:
        out = self.zero
        for x in xs:
            out = self.add(out, x)
        return out

    def fmt(self, x: Element) -> str:
        if self.dim == 1:
            return str(x[0])
        return "(" + ",".join(map(str, x)) + ")"

    def with_bound(self, bound: int) -> OrderedAbelianGroup:
        return OrderedAbelianGroup(self.free_rank, self.torsion, self.cone, bound)

    def to_json(self) -> dict:
        return {
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "cone": [list(g) for g in self.cone],
            "bound": self.search_bound,
        }

    # -- cone geometry ------------------------------------------------------

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        """Nonzero cone generators, deduplicated, in input order."""
        return tuple(dict.fromkeys(g for g in self.cone if any(g)))

    def _free(self, x: Element) -> tuple:
        return x[: self.free_rank]

    @cached_property
    def functional(self) -> tuple[int, ...]:
        """Integer ``W`` on the free part, positive on every generator."""
        return self._functional

    def _check_pointed(self):
        gens = [g for g in self.cone if any(g)]
        for g in gens:
            if not any(self._free(g)):
                raise NotPointed(f"torsion generator {g!r} has a finite-order negative in the cone")
        if not gens:
            object.__setattr__(self, "_functional", (0,) * self.free_rank)
            return
        F = np.array([self._free(g) for g in gens], dtype=float)
        r = self.free_rank
        # maximize s subject to F w >= s, |w| <= 1, s <= 1
        c = np.zeros(r + 1)
        c[-1] = -1.0
        A_ub = np.hstack([-F, np.ones((len(gens), 1))])
        res = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(gens)), bounds=[(-1, 1)] * r + [(None, 1)], method="highs")
        if res.status == 0 and -res.fun > 1e-9:
            w = _rationalize(res.x[:r], lambda q: all(_dot(q, self._free(g)) > 0 for g in gens))
            if w is not None:
                scale = math.lcm(*(q.denominator for q in w))
                W = tuple(int(q * scale) for q in w)
                object.__setattr__(self, "_functional", W)
                return
        # look for a nonnegative dependency among free parts
        A_eq = np.vstack([F.T, np.ones((1, len(gens)))])
        b_eq = np.zeros(r + 1)
        b_eq[-1] = 1.0
        res = linprog(np.zeros(len(gens)), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * len(gens), method="highs")
        if res.status == 0:
            lam = _rationalize(
                res.x,
                lambda q: min(q) >= 0 and sum(q) > 0 and all(
                    sum(qi * g[k] for qi, g in zip(q, gens)) == 0 for k in range(r)
                ),
            )
            if lam is not None:
                support = [self.fmt(g) for q, g in zip(lam, gens) if q]
                raise NotPointed(f"generators {', '.join(support)} have a positive combination with zero free part")
        raise Inconclusive("pointedness of the cone (linear programs gave no exact certificate)")

    @cached_property
    def box(self) -> frozenset:
        """All combinations of generators with coefficients at most ``search_bound``."""
        out = {self.zero}
        for g in self.generators:
            multiples = [self.scale(k, g) for k in range(self.search_bound + 1)]
            out = {self._plus(s, m) for s in out for m in multiples}
        return frozenset(out)

    def weight(self, x: Element) -> int:
        return _dot(self.functional, self._free(x))

    @cached_property
    def simplicial_inverse(self) -> tuple | None:
        """Rational left inverse of the generator matrix when its free parts are independent.

        Coefficients are then unique, so membership needs no search.
        """
        gens = self.generators
        if not gens or not self.free_rank:
            return None
        F = Matrix([list(self._free(g)) for g in gens]).T
        if F.rank() < len(gens):
            return None
        left = (F.T * F).inv() * F.T
        return tuple(tuple(Fraction(int(e.p), int(e.q)) for e in left.row(i)) for i in range(left.rows))

    @cached_property
    def box_radius(self) -> int:
        """Every cone element of weight at most this lies in :attr:`box`."""
        if not self.generators:
            return 0
        return self.search_bound * min(self.weight(g) for g in self.generators)


# -- cone membership ------------------------------------------------------------


@lru_cache(maxsize=1 << 18)
def cone_search(A: OrderedAbelianGroup, x: Element) -> Membership:
    """Bounded search for ``x`` as a nonnegative combination of generators."""
    x = A.element(x)
    gens = A.generators
    if not any(x):
        return Membership(Decision.YES, (0,) * len(gens), False)
    if not gens:
        return Membership(Decision.NO, None, False)
    inverse = A.simplicial_inverse
    if inverse is not None:
        coeffs = [sum(q * c for q, c in zip(row, A._free(x))) for row in inverse]
        if all(q.denominator == 1 and q >= 0 for q in coeffs):
            ks = tuple(int(q) for q in coeffs)
            combo = A._reduce(tuple(sum(k * g[i] for k, g in zip(ks, gens)) for i in range(A.dim)))
            if combo == x:
                return Membership(Decision.YES, ks, False)
        return Membership(Decision.NO, None, False)
    budget = A.weight(x)
    if budget <= 0:
        # every nonzero combination has positive weight
        return Membership(Decision.NO, None, False)
    weights = [A.weight(g) for g in gens]
    caps = [budget // wg for wg in weights]
    exhaustive = all(c <= A.search_bound for c in caps)
    limits = [min(c, A.search_bound) for c in caps]
    coeffs = [0] * len(gens)
    dead: set = set()

    def dfs(i: int, residual: Element, budget: int) -> bool:
        if not any(residual):
            return True
        if i == len(gens) or budget <= 0 or (i, residual) in dead:
            return False
        g, wg = gens[i], weights[i]
        for k in range(min(limits[i], budget // wg), -1, -1):
            coeffs[i] = k
            if dfs(i + 1, A._reduce(tuple(r - k * c for r, c in zip(residual, g))), budget - k * wg):
                return True
        coeffs[i] = 0
        dead.add((i, residual))
        return False

    if dfs(0, x, budget):
        return Membership(Decision.YES, tuple(coeffs), False)
    if exhaustive:
        return Membership(Decision.NO, None, False)
    if _farkas([A._free(g) for g in gens], A._free(x)) is not None:
        return Membership(Decision.NO, None, True)
    return Membership(Decision.INCONCLUSIVE, None, True)


def cone_member(A: OrderedAbelianGroup, x) -> Decision:
    return cone_search(A, A.element(x)).decision


def leq(A: OrderedAbelianGroup, a, b) -> Decision:
    return cone_member(A, A.sub(A.element(b), A.element(a)))


def require(decision: Decision, query: str) -> bool:
    """Collapse a decided answer to ``bool``; raise on indecision."""
    if decision is Decision.INCONCLUSIVE:
        raise Inconclusive(query)
    return decision is Decision.YES


def minimal_elements(A: OrderedAbelianGroup, candidates) -> list[Element]:
    """Minimal elements of a finite set under the cone order."""
    out: list[Element] = []
    for u in sorted(candidates, key=lambda c: (A.weight(c), c)):
        # anything strictly below u has strictly smaller weight
        if not any(require(leq(A, m, u), f"{A.fmt(m)} <= {A.fmt(u)}") for m in out):
            out.append(u)
    return out


@lru_cache(maxsize=1 << 16)
def try_join(A: OrderedAbelianGroup, a, b) -> Element:
    """Least common upper bound of ``a`` and ``b``, searched in the box above them.

    Raises :class:`JoinNotFound` when no common upper bound exists at all
    (``a - b`` outside the subgroup generated by the cone),
    :class:`JoinNotUnique` if the minimal ones in the box are incomparable,
    and :class:`Inconclusive` when the box is too small to tell.
    """
    a, b = A.element(a), A.element(b)
    box = A.box
    offset = A._minus(a, b)
    common = {A._plus(a, p) for p in box if A._plus(offset, p) in box}
    query = f"{A.fmt(a)} v {A.fmt(b)}"
    if not common:
        if not _in_identity_component(A, offset):
            raise JoinNotFound(f"{A.fmt(a)} and {A.fmt(b)} have no common upper bound")
        raise Inconclusive(f"{query}: no common upper bound in the search box")
    least = min(common, key=lambda c: (A.weight(c), c))
    # Anything below least must already sit in the box.  With independent
    # generators coefficients only shrink going down; otherwise use weight.
    far = A.weight(least) - min(A.weight(a), A.weight(b)) > A.box_radius
    if far and A.simplicial_inverse is None:
        raise Inconclusive(f"{query}: candidate {A.fmt(least)} lies beyond the exhaustive search radius")
    for u in sorted(common):
        if A._minus(u, least) in box:
            continue
        if not require(leq(A, least, u), f"{A.fmt(least)} <= {A.fmt(u)}"):
            minimal = minimal_elements(A, common)
            raise JoinNotUnique(A.fmt(a), A.fmt(b), [A.fmt(m) for m in minimal])
    return least


def try_join_all(A: OrderedAbelianGroup, xs) -> Element:
    xs = [A.element(x) for x in xs]
    if not xs:
        raise InvalidInput("join of an empty family is not defined in a group")
    out = xs[0]
    for x in xs[1:]:
        out = try_join(A, out, x)
    return out


def _in_identity_component(A: OrderedAbelianGroup, x: Element) -> bool:
    gens = A.generators
    t = len(A.torsion)
    rows = [[g[i] for g in gens] + [mod if i == A.free_rank + j else 0 for j, mod in enumerate(A.torsion)] for i in range(A.dim)]
    return _solve_integer(rows, len(gens) + t, list(x)) is not None


# -- principal ideals -------------------------------------------------------------


def _in_cone(A: OrderedAbelianGroup, x: Element, name: str) -> None:
    d = cone_member(A, x)
    if d is Decision.INCONCLUSIVE:
        raise Inconclusive(f"{A.fmt(x)} in cone")
    if d is Decision.NO:
        raise NotInCone(f"{name} = {A.fmt(x)} is not in the positive cone")


@lru_cache(maxsize=1 << 16)
def principal_leq(A: OrderedAbelianGroup, a, b) -> Decision:
    """Whether ``<a>`` is contained in ``<b>``, i.e. ``a <= k b`` for some ``k``."""
    a, b = A.element(a), A.element(b)
    _in_cone(A, a, "a")
    _in_cone(A, b, "b")
    if not any(a):
        return Decision.YES
    if not any(b):
        return Decision.NO
    for k in range(1, A.search_bound + 1):
        if cone_member(A, A.sub(A.scale(k, b), a)) is Decision.YES:
            return Decision.YES
    # t b - a outside the real cone for every t >= 0
    cols = [A._free(g) for g in A.generators] + [tuple(-c for c in A._free(b))]
    if _farkas(cols, tuple(-c for c in A._free(a))) is not None:
        return Decision.NO
    return Decision.INCONCLUSIVE


# -- identity component -----------------------------------------------------------


class IdentityComponent(NamedTuple):
    """``group`` is the subgroup generated by the cone; ``embed``/``lift`` translate coordinates."""

    group: OrderedAbelianGroup
    ambient: OrderedAbelianGroup
    transform: tuple  # unimodular U: generator coefficients -> component coordinates
    inverse: tuple
    keep: tuple  # rows of U that survive (dropped rows have unit invariant factor)
    ambient_gens: tuple

    def embed(self, h) -> Element:
        H, A = self.group, self.ambient
        h = H.element(h)
        full = [0] * len(self.transform)
        for value, row in zip(h, self.keep):
            full[row] = value
        coeffs = [_dot(r, full) for r in self.inverse]
        return A.sum(A.scale(c, g) for c, g in zip(coeffs, self.ambient_gens))

    def lift(self, x) -> Element:
        H, A = self.group, self.ambient
        x = A.element(x)
        m = len(self.ambient_gens)
        rows = [
            [g[i] for g in self.ambient_gens] + [mod if i == A.free_rank + t else 0 for t, mod in enumerate(A.torsion)]
            for i in range(A.dim)
        ]
        sol = _solve_integer(rows, m + len(A.torsion), list(x))
        if sol is None:
            raise InvalidInput(f"{A.fmt(x)} is not in the identity component")
        full = [_dot(r, sol[:m]) for r in self.transform]
        return H.element(tuple(full[row] for row in self.keep))


def identity_component(A: OrderedAbelianGroup) -> IdentityComponent:
    """The subgroup generated by the cone, presented in Smith normal form.

    With ``G`` the generator matrix and ``K`` the relations among generator
    coefficients, the component is ``Z^m / K``; the Smith form of ``K``
    gives its invariant factors.
    """
    gens = list(A.cone) or [A.zero]
    m = len(gens)
    t = len(A.torsion)
    rows = [[g[i] for g in gens] + [mod if i == A.free_rank + j else 0 for j, mod in enumerate(A.torsion)] for i in range(A.dim)]
    kernel = _integer_kernel(rows, m + t)
    relations = [v[:m] for v in kernel]
    # Smith form of the relation lattice (columns = relations)
    rel_rows = [[v[i] for v in relations] for i in range(m)]
    diag, U, _ = _snf(rel_rows, len(relations))
    free_rows, torsion_rows, moduli = [], [], []
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            free_rows.append(i)
        elif d > 1:
            torsion_rows.append(i)
            moduli.append(d)
    U = [row[:] for row in U]
    for i in free_rows:
        column = [U[i][j] for j in range(m) if U[i][j]]
        if column and column[0] < 0:
            U[i] = [-c for c in U[i]]
    keep = tuple(free_rows + torsion_rows)
    cone = [tuple(U[row][j] for row in keep) for j in range(m)]
    H = OrderedAbelianGroup(len(free_rows), tuple(moduli), tuple(cone), A.search_bound)
    inverse = Matrix(U).inv()
    inverse = tuple(tuple(int(inverse[i, j]) for j in range(m)) for i in range(m))
    return IdentityComponent(H, A, tuple(map(tuple, U)), inverse, keep, tuple(gens))


# -- Archimedes semilattice ---------------------------------------------------------


@dataclass(frozen=True)
class ArchSemilattice:
    """Principal ideals ``<sum_I a_i>`` for subsets ``I`` of a window.

    ``reps`` are class representatives (the first subset sum met in
    subset order); ``semilattice`` is labelled by their formatted values.
    """

    group: OrderedAbelianGroup
    window: tuple[Element, ...]
    reps: tuple[Element, ...]
    semilattice: UpperSemilattice
    subset_class: dict = field(compare=False, hash=False)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.semilattice.elements

    def rep(self, label: str) -> Element:
        return self.reps[self.labels.index(label)]

    def label(self, rep: Element) -> str:
        return self.group.fmt(rep)

    def class_of(self, x) -> str:
        """Window class generating the same principal ideal as ``x``."""
        A = self.group
        x = A.element(x)
        for r in self.reps:
            if require(principal_leq(A, x, r), f"<{A.fmt(x)}> in <{A.fmt(r)}>") and require(
                principal_leq(A, r, x), f"<{A.fmt(r)}> in <{A.fmt(x)}>"
            ):
                return self.label(r)
        raise InvalidInput(f"<{A.fmt(x)}> is not among the window classes")

    def ideal_leq(self, x, label: str) -> bool:
        """``<x>`` contained in the window class ``label``."""
        A = self.group
        r = self.rep(label)
        return require(principal_leq(A, x, r), f"<{A.fmt(x)}> in <{A.fmt(r)}>")


def arch(A: OrderedAbelianGroup, window) -> ArchSemilattice:
    """Sub-semilattice of ``Arch(A)`` generated by the window classes."""
    window = tuple(A.element(a) for a in window)
    for a in window:
        _in_cone(A, a, "window element")
    subsets = sorted(
        (frozenset(I) for k in range(len(window) + 1) for I in itertools.combinations(range(len(window)), k)),
        key=lambda I: (len(I), sorted(I)),
    )
    reps: list[Element] = []
    subset_class: dict = {}

    def same(x, y) -> bool:
        return require(principal_leq(A, x, y), f"<{A.fmt(x)}> in <{A.fmt(y)}>") and require(
            principal_leq(A, y, x), f"<{A.fmt(y)}> in <{A.fmt(x)}>"
        )

    for I in subsets:
        s = A.sum(window[i] for i in I)
        for k, r in enumerate(reps):
            if same(s, r):
                subset_class[I] = k
                break
        else:
            subset_class[I] = len(reps)
            reps.append(s)
    n = len(reps)
    up = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if require(principal_leq(A, reps[i], reps[j]), f"<{A.fmt(reps[i])}> in <{A.fmt(reps[j])}>"):
                mask |= 1 << j
        up.append(mask)
    labels = [A.fmt(r) for r in reps]
    U = semilattice_from_poset(FinPoset(labels, up))
    out = ArchSemilattice(A, window, tuple(reps), U, {I: labels[k] for I, k in subset_class.items()})
    for i in range(n):
        for j in range(n):
            if out.class_of(A.add(reps[i], reps[j])) != U.join(labels[i], labels[j]):
                raise AssertionError("class of a sum is not the join of the classes")
    return out

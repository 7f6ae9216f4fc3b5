import itertools

import pytest
from hypothesis import assume, given, strategies as st

from spclat.errors import Inconclusive, InvalidInput, JoinNotFound, JoinNotUnique, NotInCone, NotPointed
from spclat.oag import (
    Decision,
    OrderedAbelianGroup,
    arch,
    cone_member,
    cone_search,
    default_bound,
    identity_component,
    leq,
    principal_leq,
    try_join,
)
from spclat.oracle import find_isomorphism
from spclat.order import chain, poset_isomorphism
from spclat.dlat import boolean_lattice

G = OrderedAbelianGroup
Z = G(1, (), ((1,),))
Z23 = G(1, (), ((2,), (3,)))
Z2 = G(2, (), ((1, 0), (0, 1)))
ZxZ2 = G(1, (2,), ((1, 0), (1, 1)))
Z_discrete = G(1, (), ())


def _monoid_by_hand(gens, limit):
    """Elements of the monoid generated by ``gens`` (positive integers) up to ``limit``."""
    reach = {0}
    for n in range(1, limit + 1):
        if any(n - g in reach for g in gens if n - g >= 0):
            reach.add(n)
    return reach


# -- construction --------------------------------------------------------------------------


def test_pointedness_is_enforced():
    with pytest.raises(NotPointed):
        G(1, (), ((1,), (-1,)))
    with pytest.raises(NotPointed):
        G(2, (), ((1, -1), (-1, 1)))
    with pytest.raises(NotPointed):
        G(0, (3,), ((1,),))


def test_invalid_inputs():
    with pytest.raises(InvalidInput):
        G(1, (1,), ())
    with pytest.raises(InvalidInput):
        Z.element((1, 2))
    with pytest.raises(InvalidInput):
        G(1, (), ((1,),), 0)


def test_torsion_is_reduced():
    assert ZxZ2.element((3, 5)) == (3, 1)
    assert ZxZ2.add((1, 1), (0, 1)) == (1, 0)


def test_bound_from_environment(monkeypatch):
    monkeypatch.setenv("SPCLAT_BOUND", "5")
    assert default_bound() == 5
    assert G(1, (), ((1,),)).search_bound == 5
    monkeypatch.setenv("SPCLAT_BOUND", "zero")
    with pytest.raises(InvalidInput):
        default_bound()


# -- cone membership -----------------------------------------------------------------------


def test_cone_member_examples():
    assert cone_member(Z, 5) is Decision.YES
    assert cone_member(Z23, 1) is Decision.NO
    m = cone_search(Z23, (7,))
    assert m.decision is Decision.YES
    assert sum(c * g[0] for c, g in zip(m.coefficients, Z23.generators)) == 7


def test_cone_member_matches_monoid_by_hand():
    reach = _monoid_by_hand([2, 3], 40)
    for n in range(-10, 41):
        expected = Decision.YES if n in reach else Decision.NO
        assert cone_member(Z23, n) is expected


def test_leq_examples():
    assert leq(Z, 2, 5) is Decision.YES
    assert leq(Z2, (1, 0), (0, 1)) is Decision.NO
    assert leq(Z23, 0, 1) is Decision.NO


def test_inconclusive_when_bound_too_small():
    A = G(2, (), ((1, 0), (1, 1), (1, 2)), 2)
    # every way of writing (10, 5) uses a coefficient above 2
    assert cone_member(A, (10, 5)) is Decision.INCONCLUSIVE
    assert cone_member(A.with_bound(8), (10, 5)) is Decision.YES
    # outside the real cone: decided even with a tiny bound
    assert cone_member(A, (5, 11)) is Decision.NO


def test_independent_generators_need_no_bound():
    A = G(2, (), ((1, 0), (1, 1)), 1)
    assert cone_member(A, (100, 40)) is Decision.YES
    assert cone_member(A, (40, 100)) is Decision.NO


# -- joins ----------------------------------------------------------------------------------


def test_try_join_examples():
    assert try_join(Z2, (1, 0), (0, 1)) == (1, 1)
    assert try_join(Z, 2, 5) == (5,)


def test_join_in_numerical_semigroup_is_not_unique():
    # common upper bounds of 2 and 3 are {5, 6, 7, ...} minus nothing; 5 and 6
    # differ by 1, which is not in the cone, so neither is below the other
    reach = _monoid_by_hand([2, 3], 30)
    uppers = [n for n in range(31) if n - 2 in reach and n - 3 in reach]
    minimal = [u for u in uppers if not any(v != u and u - v in reach for v in uppers)]
    assert minimal == [5, 6]
    with pytest.raises(JoinNotUnique) as err:
        try_join(Z23, 2, 3)
    assert sorted(err.value.minimal) == ["5", "6"]


def test_try_join_skew_cone():
    skew = G(2, (), ((1, 0), (1, 1)))
    # (1,1) - (1,0) = (0,1) is not positive, so (1,1) is not an upper bound of (1,0)
    assert try_join(skew, (0, 1), (1, 0)) == (2, 1)


def test_try_join_missing_and_undecided():
    # different cosets of the subgroup generated by the cone: no upper bound at all
    with pytest.raises(JoinNotFound):
        try_join(G(1, (2,), ((1, 0),)), (0, 0), (0, 1))
    skew = G(2, (), ((1, 0), (1, 1)))
    with pytest.raises(Inconclusive):
        try_join(skew.with_bound(4), (-2, 5), (5, -5))
    assert try_join(skew.with_bound(40), (-2, 5), (5, -5)) == (15, 5)


@given(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), st.tuples(st.integers(-6, 6), st.integers(-6, 6)))
def test_product_order_join_is_coordinatewise_max(a, b):
    assert try_join(Z2, a, b) == (max(a[0], b[0]), max(a[1], b[1]))


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_leq_on_z_is_integer_order(a, b):
    assert (leq(Z, a, b) is Decision.YES) == (a <= b)


@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_skew_join_is_least(a, b):
    A = G(2, (), ((1, 0), (1, 1)), 40)
    j = try_join(A, a, b)
    assert leq(A, a, j) is Decision.YES and leq(A, b, j) is Decision.YES
    # least among common upper bounds in a window around j
    for dx, dy in itertools.product(range(-4, 5), repeat=2):
        u = (j[0] + dx, j[1] + dy)
        if leq(A, a, u) is Decision.YES and leq(A, b, u) is Decision.YES:
            assert leq(A, j, u) is Decision.YES


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_leq_is_translation_invariant(a, b, c):
    assert leq(Z23, a, b) is leq(Z23, a + c, b + c)


# -- identity component -----------------------------------------------------------------------


def test_identity_component_examples():
    assert identity_component(Z).group.free_rank == 1
    H = identity_component(G(2, (), ((1, 0),)))
    assert H.group.free_rank == 1 and H.group.torsion == ()
    assert H.embed((1,)) == (1, 0)
    H = identity_component(Z23)
    assert H.group.free_rank == 1 and H.group.torsion == ()
    # 3 - 2 = 1 lies in the component
    assert H.embed(H.lift((1,))) == (1,)


def test_identity_component_with_torsion():
    H = identity_component(ZxZ2)
    assert (H.group.free_rank, H.group.torsion) == (1, (2,))
    for x in itertools.product(range(-3, 4), range(2)):
        assert H.embed(H.lift(x)) == x


def test_identity_component_rejects_outside_elements():
    H = identity_component(G(2, (), ((1, 0),)))
    with pytest.raises(InvalidInput):
        H.lift((0, 1))


def test_identity_component_of_discrete_group_is_trivial():
    H = identity_component(Z_discrete)
    assert H.group.dim == 0


@given(st.integers(-8, 8), st.integers(-8, 8))
def test_identity_component_round_trip_on_z2(x, y):
    H = identity_component(G(2, (), ((1, 0), (1, 2))))
    if y % 2 == 0:
        assert H.embed(H.lift((x, y))) == (x, y)
    else:
        with pytest.raises(InvalidInput):
            H.lift((x, y))


# -- principal ideals and Arch ------------------------------------------------------------------


def test_principal_leq_examples():
    assert principal_leq(Z, 3, 1) is Decision.YES
    assert principal_leq(Z2, (1, 0), (0, 1)) is Decision.NO
    for A, b in ((Z, 1), (Z2, (1, 1)), (Z23, 2)):
        assert principal_leq(A, 0, b) is Decision.YES


def test_principal_leq_needs_cone_elements():
    with pytest.raises(NotInCone):
        principal_leq(Z23, 1, 2)


def _arch_matches(W, P):
    return poset_isomorphism(W.semilattice.poset, P) is not None


def test_arch_of_z():
    W = arch(Z, [1])
    assert W.labels == ("0", "1")
    assert _arch_matches(W, chain(2))


def test_arch_of_numerical_semigroup():
    # <2> = <3> = <5>: 2 <= 2*3 and 3 <= 2*2
    assert principal_leq(Z23, 2, 3) is Decision.YES and principal_leq(Z23, 3, 2) is Decision.YES
    assert _arch_matches(arch(Z23, [2, 3]), chain(2))


def test_arch_with_torsion():
    assert leq(ZxZ2, (1, 1), (2, 0)) is Decision.YES
    assert leq(ZxZ2, (1, 0), (2, 0)) is Decision.YES
    assert _arch_matches(arch(ZxZ2, [(1, 0), (1, 1)]), chain(2))


def test_arch_of_z2_is_power_set():
    W = arch(Z2, [(1, 0), (0, 1)])
    assert _arch_matches(W, boolean_lattice(2).as_poset())
    assert W.class_of((3, 5)) == "(1,1)"
    assert W.class_of((4, 0)) == "(1,0)"


def test_arch_of_discrete_group():
    assert arch(Z_discrete, []).labels == ("0",)


def test_arch_rejects_non_positive_window():
    with pytest.raises(NotInCone):
        arch(Z, [-1])


def test_non_morphism_witness():
    # (x, y) -> (x, y, x + y) preserves the order on small pairs but not joins
    Z3 = G(3, (), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    f = lambda v: (v[0], v[1], v[0] + v[1])
    for a, b in itertools.product(itertools.product(range(-2, 3), repeat=2), repeat=2):
        if leq(Z2, a, b) is Decision.YES:
            assert leq(Z3, f(a), f(b)) is Decision.YES
    joined = try_join(Z3, f((1, 0)), f((0, 1)))
    assert joined == (1, 1, 1)
    assert f(try_join(Z2, (1, 0), (0, 1))) == (1, 1, 2)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3))
def test_arch_class_of_sum_is_join(window):
    assume(all(any(a) for a in window))
    W = arch(Z2, window)
    for x, y in itertools.product(W.labels, repeat=2):
        s = Z2.add(W.rep(x), W.rep(y))
        assert W.class_of(s) == W.semilattice.join(x, y)


def test_arch_free_lattice_of_z():
    from spclat.dlat import chain_lattice, free_dlat

    assert find_isomorphism(free_dlat(arch(Z, [1]).semilattice).lattice, chain_lattice(3)) is not None

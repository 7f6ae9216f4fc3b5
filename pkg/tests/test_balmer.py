import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from spclat import balmer
from spclat.dlat import boolean_lattice, chain_lattice, free_dlat, powerset_lattice, tensor
from spclat.errors import InvalidInput, JoinsMissing, NotSaturated
from spclat.oag import OrderedAbelianGroup, arch, try_join
from spclat.oracle import distributive_lattices, find_isomorphism
from spclat.spectral import (
    constructible,
    coproduct,
    discrete,
    homeomorphic,
    sierpinski,
    space_product,
    spc,
    spec,
)

G = OrderedAbelianGroup
Z = G(1, (), ((1,),))
Z2 = G(2, (), ((1, 0), (0, 1)))
Z23 = G(1, (), ((2,), (3,)))
CHAIN3 = chain_lattice(3)
SMALL = distributive_lattices(5)


# -- pointwise ---------------------------------------------------------------------------------


def test_pointwise_empty_shape():
    assert len(balmer.zar_pointwise(CHAIN3, [])) == 1


def test_pointwise_one_object():
    for L in SMALL:
        assert find_isomorphism(balmer.zar_pointwise(L, ["*"]), L) is not None


def test_pointwise_two_chain_two_objects():
    L = balmer.zar_pointwise(chain_lattice(2), ["a", "b"])
    assert find_isomorphism(L, boolean_lattice(2)) is not None
    # spectrum of a four-element Boolean algebra: its two atoms, discrete
    assert homeomorphic(spc(L), discrete(2)) is not None


def test_pointwise_spectrum_is_a_disjoint_union():
    for L in SMALL:
        for k in range(4):
            X = spc(balmer.zar_pointwise(L, [f"k{i}" for i in range(k)]))
            assert len(X) == k * len(spc(L))


def test_pointwise_spectrum_is_a_coproduct():
    for L in distributive_lattices(8):
        X = spc(L)
        for k in range(4):
            S = [f"k{i}" for i in range(k)]
            copies = coproduct([(s, X) for s in S])
            assert homeomorphic(spc(balmer.zar_pointwise(L, S)), copies, max_points=32) is not None


def test_pointwise_comparison_is_iso():
    for L in SMALL:
        phi = balmer.pointwise_comparison(L, ["a", "b"])
        assert phi.is_injective()
        assert len(phi.target) == len(tensor(L, powerset_lattice(["a", "b"])))


def test_pointwise_supports():
    k0 = ["a", "b", "c"]
    X = balmer.pointwise_generator(CHAIN3, k0, "b")
    assert balmer.support_pointwise(CHAIN3, k0, X) == ("0", "2", "0")
    zero = {k: "0" for k in k0}
    assert balmer.support_pointwise(CHAIN3, k0, zero) == balmer.zar_pointwise(CHAIN3, k0).bottom
    with pytest.raises(InvalidInput):
        balmer.support_pointwise(CHAIN3, k0, {"a": "0"})


# -- sheaves -----------------------------------------------------------------------------------


def test_sheaf_over_a_point():
    for L in SMALL:
        assert find_isomorphism(balmer.zar_sheaf(L, chain_lattice(2)), L) is not None


def test_sheaf_three_chain_base():
    L = balmer.zar_sheaf(chain_lattice(2), CHAIN3)
    assert find_isomorphism(L, boolean_lattice(2)) is not None
    assert homeomorphic(spc(L), discrete(2)) is not None


def test_sheaf_point_count_and_model():
    for zar in SMALL:
        for l in SMALL:
            S = balmer.spc_sheaf(zar, l)
            assert len(S.space) == len(spec(l)) * len(spc(zar))
            assert S.model == space_product(constructible(spec(l)), spc(zar))


# -- saturated sets and presentations --------------------------------------------------------------


def test_saturated_set_checks_joins():
    with pytest.raises(NotSaturated):
        balmer.SaturatedSet(Z2, ((1, 0), (0, 1)))
    B = balmer.saturate(Z2, [(1, 0), (0, 1)])
    assert B.elements == ((0, 1), (1, 0), (1, 1))


def test_saturate_needs_joins():
    with pytest.raises(JoinsMissing):
        balmer.saturate(Z23, [2, 3])


def test_generator_examples():
    F = balmer.generator(Z, CHAIN3, "1", [])
    assert list(F.items()) == [((0,), "1")]
    F = balmer.generator(Z, CHAIN3, "2", [1])
    assert dict(F.items()) == {(0,): "2", (1,): "0"}
    F = balmer.generator(Z2, CHAIN3, "1", [(1, 0), (0, 1)])
    assert dict(F.items()) == {(0, 0): "1", (1, 0): "0", (0, 1): "0", (1, 1): "0"}


def test_extend_presentation_examples():
    F = balmer.generator(Z, CHAIN3, "2", [1])
    assert balmer.extend_presentation(F, F.base) == F
    B2 = balmer.saturate(Z, [0, 1, 2])
    E = balmer.extend_presentation(F, B2)
    assert E.value(2) == "0" and E.value(0) == "2"
    # below everything in B: bottom
    E = balmer.extend_presentation(F, balmer.saturate(Z, [-1, 0, 1]))
    assert E.value(-1) == "0"


# -- Theta and the support formula ----------------------------------------------------------------


def test_theta_two_point_base():
    W = arch(Z2, [(1, 0), (0, 1)])
    for a in [(1, 0), (0, 1), (1, 1)]:
        B = balmer.saturate(Z2, [(0, 0), a])
        expected = frozenset(J for J in W.labels if not W.ideal_leq(a, J))
        assert balmer.theta(B, (0, 0), W) == expected
        # the free-lattice unit sends a class to the classes not above it
        U = free_dlat(W.semilattice)
        assert expected == U.unit[W.class_of(a)]


def test_theta_top_point_is_everything():
    W = arch(Z, [1])
    B = balmer.saturate(Z, [0, 1, 2])
    assert balmer.theta(B, 2, W) == frozenset(W.labels)
    assert balmer.theta(B, 0, W) == frozenset({"0"})


def test_day_support_unit_case():
    W = arch(Z, [1])
    for c in CHAIN3.elements:
        s = balmer.day_support(balmer.generator(Z, CHAIN3, c, []), W)
        assert s.values == (c,) * len(W.labels)


def test_day_support_one_step():
    W = arch(Z2, [(1, 0), (0, 1)])
    B0 = balmer.saturate(Z2, [(0, 0), (1, 0)])
    th = balmer.theta(B0, (0, 0), W)
    for c in CHAIN3.elements:
        s = balmer.day_support(balmer.generator(Z2, CHAIN3, c, [(1, 0)]), W)
        assert s == balmer.rectangle(CHAIN3, W, c, th)


def test_semisupport_laws_on_generators():
    W = arch(Z2, [(1, 0), (0, 1)])
    zar = CHAIN3
    e1, e2 = (1, 0), (0, 1)
    s = lambda c, xs: balmer.day_support(balmer.generator(Z2, zar, c, xs), W)
    # s(F{0/(a1 + a2)}) = s(F{0/a1}) v s(F{0/a2}) when a1, a2 meet in 0
    assert s("2", [(1, 1)]) == balmer.day_join(zar, s("2", [e1]), s("2", [e2]))
    # monotone: a <= b gives s(F{0/a}) <= s(F{0/b})
    small, big = s("2", [e1]), s("2", [(2, 1)])
    assert balmer.day_join(zar, small, big) == big
    # multiplicativity on generators
    assert s("1", [e1, e2]) == balmer.day_meet(zar, s("1", [e1]), s("2", [e2]))


def test_tensor_form_agrees_with_tuple_form():
    rng = random.Random(5)
    W = arch(Z2, [(1, 0), (0, 1)])
    for zar in SMALL:
        for _ in range(3):
            xs = rng.sample([(1, 0), (0, 1), (1, 1), (2, 0)], rng.randint(0, 2))
            F = balmer.generator(Z2, zar, rng.choice(zar.elements), xs)
            direct = balmer.day_support(F, W)
            assert balmer.tensor_to_day(zar, W, balmer.day_support_tensor(F, W)) == direct


# -- the filtered lattice ------------------------------------------------------------------------


def test_day_over_z_is_sierpinski_product():
    for zar in SMALL:
        X = balmer.spc_day(zar, Z, [1])
        assert homeomorphic(X, space_product(sierpinski(), spc(zar))) is not None
        assert find_isomorphism(balmer.zar_day(zar, Z, [1]), tensor(zar, CHAIN3)) is not None


def test_day_over_discrete_group_is_trivial():
    D = G(1, (), ())
    for zar in SMALL:
        assert find_isomorphism(balmer.zar_day(zar, D, []), zar) is not None


def test_day_over_z2_is_double_sierpinski_product():
    S = sierpinski()
    for zar in distributive_lattices(4):
        X = balmer.spc_day(zar, Z2, [(1, 0), (0, 1)])
        assert homeomorphic(X, space_product(space_product(S, S), spc(zar))) is not None


def test_day_needs_window_joins():
    with pytest.raises(JoinsMissing):
        balmer.zar_day(CHAIN3, Z23, [2, 3])


def test_filtered_closed_sets_for_a_point():
    pairs = balmer.filtered_closed_sets(chain_lattice(2))
    # a point: closed sets of Sierpinski, three of them
    assert len(pairs) == 3
    assert set(pairs.values()) == set(balmer.closed_set_pairs(spc(chain_lattice(2))))


# -- random properties ---------------------------------------------------------------------------


@st.composite
def presentations(draw):
    A = draw(st.sampled_from([Z, Z2]))
    zar = draw(st.sampled_from(SMALL))
    pts = draw(st.lists(st.tuples(*[st.integers(-3, 3)] * A.dim), min_size=1, max_size=4))
    B = balmer.saturate(A, pts)
    values = {b: draw(st.sampled_from(zar.elements)) for b in B}
    return balmer.FilteredPresentation.from_mapping(B, zar, values)


@given(presentations(), st.integers(-4, 4), st.integers(-4, 4))
def test_shift_invariance(F, dx, dy):
    A = F.group
    W = arch(A, [(1,)] if A.dim == 1 else [(1, 0), (0, 1)])
    offset = (dx,) if A.dim == 1 else (dx, dy)
    assert balmer.day_support(balmer.shift(F, offset), W) == balmer.day_support(F, W)


@given(presentations(), st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), max_size=3))
def test_extension_invariance(F, extra):
    A = F.group
    W = arch(A, [(1,)] if A.dim == 1 else [(1, 0), (0, 1)])
    extra = [e[: A.dim] for e in extra]
    B2 = balmer.saturate(A, list(F.base) + extra)
    assert balmer.day_support(balmer.extend_presentation(F, B2), W) == balmer.day_support(F, W)


@settings(max_examples=30)
@given(presentations())
def test_theta_intersection_law(F):
    A, B = F.group, F.base
    W = arch(A, [(1,)] if A.dim == 1 else [(1, 0), (0, 1)])
    image = balmer.arch_free(W).lattice
    for a in B:
        whole = balmer.theta(B, a, W)
        assert whole in image
        pieces = frozenset(W.labels)
        for b in B:
            pieces &= balmer.theta(balmer.SaturatedSet(A, (a, b, try_join(A, a, b))), a, W)
        assert pieces == whole


def test_campaign_instances_are_seeded():
    from spclat.campaign import random_instance

    a, b = random_instance(17), random_instance(17)
    assert a.F == b.F and a.B2 == b.B2 and a.offset == b.offset


def test_figure_pairs_are_pairs():
    X = spc(CHAIN3)
    pairs = balmer.closed_set_pairs(X)
    assert all(z1 <= z2 for z1, z2 in pairs)
    assert len(pairs) == sum(1 for z1, z2 in itertools.product(X.closed_sets(), repeat=2) if z1 <= z2)

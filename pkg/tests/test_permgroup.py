import random

import pytest

from j2sym import Permutation, PermutationGroup
from j2sym.words import word_from_indices

import oracles
from corpus import CORPUS, TRANSITIVE_SMALL, X32, Y32, control_group

P = Permutation.parse


# -- order and membership against the closure oracle -------------------------


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_order_matches_exhaustive_closure(name):
    group, known = CORPUS[name]
    assert group.order == known
    assert group.order == oracles.closure_order(group.degree, group.generators)


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "Q8", "C2xC2"])
def test_membership_matches_closure(name):
    group, _ = CORPUS[name]
    elements = oracles.closure_elements(group.degree, group.generators)
    # check every permutation of the symmetric group of that degree
    import itertools

    for images in itertools.permutations(range(1, group.degree + 1)):
        p = Permutation(images)
        assert (p in group) == (images in elements)


def test_trivial_group():
    g = PermutationGroup(5, [])
    assert g.order == 1
    assert g.is_trivial()
    assert g.orbit(3) == [3]
    assert Permutation.identity(5) in g
    assert P("(1,2)", degree=5) not in g


def test_generator_degree_mismatch():
    with pytest.raises(ValueError):
        PermutationGroup(4, [P("(1,2)", degree=3)])


# -- orbits and stabilizers ---------------------------------------------------


def test_orbit_of_control_group_is_all_letters():
    N = control_group()
    assert sorted(N.orbit(1)) == list(range(1, 33))


def test_stabilizer_orbit_sizes_on_letters():
    N = control_group()
    stab = N.stabilizer(1)
    assert stab.order == 60
    assert sorted(len(o) for o in stab.orbits()) == [1, 1, 5, 5, 20]
    # the printed orbit sets, element by element
    assert {frozenset(o) for o in stab.orbits()} == {
        frozenset({1}),
        frozenset({2}),
        frozenset({3, 6, 7, 14, 17}),
        frozenset({4, 5, 9, 11, 22}),
        frozenset(range(1, 33))
        - frozenset({1, 2, 3, 6, 7, 14, 17, 4, 5, 9, 11, 22}),
    }


def test_stabilizer_of_abelian_regular_is_trivial():
    g = PermutationGroup(3, [P("(1,2,3)", degree=3)])
    assert g.stabilizer(1).order == 1


def test_schreier_words_sound():
    for name in ("S4", "A5", "PSL(2,7)", "control-1920"):
        group, _ = CORPUS[name]
        words = group.orbit_words(1)
        for q, w in words.items():
            p = Permutation.identity(group.degree)
            for i in w:
                p = p * group.generators[i - 1]
            assert p[1] == q


def test_orbit_stabilizer_identity_randomized():
    rng = random.Random(20260809)
    names = sorted(CORPUS)
    checked = 0
    while checked < 100:
        name = rng.choice(names)
        group, order = CORPUS[name]
        point = rng.randrange(1, group.degree + 1)
        orbit = group.orbit(point)
        stab = PermutationGroup(group.degree, group.stabilizer_generators(point))
        assert len(orbit) * stab.order == order
        checked += 1


# -- chain internals -----------------------------------------------------------


def test_chain_base_points_and_element_words():
    N = control_group()
    chain = N.chain
    assert chain.order() == 1920
    # every strong generator sifts to the identity
    for p, _, _ in chain.strong:
        assert chain.contains(p)
    # chain words evaluate back to the element
    for target in (X32 * Y32, Y32 * X32 * Y32):
        w = chain.element_word(target)
        acc = Permutation.identity(32)
        for i in w:
            acc = acc * (N.generators[i - 1] if i > 0 else N.generators[-i - 1].inverse())
        assert acc == target


def test_element_word_short_closure():
    N = control_group()
    g18 = P(
        "(1,29,3,16)(2,30,4,13)(5,17,8,23)(6,22,10,18)(7,14,27,12)"
        "(9,11,28,15)(19,26,25,31)(20,32,24,21)",
        degree=32,
    )
    w = N.element_word(g18)
    assert word_from_indices(w, ("x", "y")).evaluate({"x": X32, "y": Y32}) == g18
    with pytest.raises(ValueError):
        N.element_word(P("(1,2)", degree=32))


# -- normal closure, derived subgroup -----------------------------------------


def test_normal_closure_examples():
    N = control_group()
    assert N.normal_closure([X32 ** 5]).order == 2
    assert N.normal_closure([Permutation.identity(32)]).order == 1
    H = N.normal_closure([Y32 ** 3])
    assert H.order == 32
    # closed under conjugation by every generator of N
    for h in H.generators:
        for g in N.generators:
            assert h.conjugate(g) in H


def test_normal_closure_oracle():
    S3, _ = CORPUS["S3"]
    closure = S3.normal_closure([P("(1,2,3)", degree=3)])
    assert {p for p in oracles.closure_elements(3, closure.generators)} == {
        p for p in oracles.closure_elements(3, [P("(1,2,3)", degree=3)])
    }


def test_derived_subgroups():
    S3, _ = CORPUS["S3"]
    assert S3.derived_subgroup().order == 3
    A4, _ = CORPUS["A4"]
    assert A4.derived_subgroup().order == 4
    C6, _ = CORPUS["C6"]
    assert C6.derived_subgroup().order == 1
    A5, _ = CORPUS["A5"]
    assert A5.derived_subgroup().order == 60
    assert A5.is_perfect()


def test_derived_series_terminates():
    S4, _ = CORPUS["S4"]
    orders = [g.order for g in S4.derived_series()]
    assert orders == [24, 12, 4, 1]


# -- primitivity ---------------------------------------------------------------


def test_c4_blocks():
    g, _ = CORPUS["C4"]
    prim, block = g.primitivity()
    assert not prim
    assert block == [1, 3]


def test_s3_primitive():
    g, _ = CORPUS["S3"]
    assert g.is_primitive()


def test_primitivity_requires_transitive():
    with pytest.raises(ValueError):
        CORPUS["C2xC2"][0].primitivity()


@pytest.mark.parametrize("name", TRANSITIVE_SMALL)
def test_primitivity_matches_brute_force(name):
    group, _ = CORPUS[name]
    if group.degree > 12:
        pytest.skip("oracle limited to degree 12")
    prim, block = group.primitivity()
    assert prim == oracles.is_primitive_brute(group)
    if not prim:
        assert block in [sorted(b) for b in oracles.block_systems(group)]


# -- classes -------------------------------------------------------------------


def test_class_size_examples():
    S3, _ = CORPUS["S3"]
    assert S3.class_size(P("(1,2)", degree=3)) == 3
    assert S3.class_size(Permutation.identity(3)) == 1
    assert S3.centralizer_order(P("(1,2)", degree=3)) == 2


def test_class_size_requires_membership():
    C3, _ = CORPUS["C3"]
    with pytest.raises(ValueError):
        C3.class_size(P("(1,2)", degree=3))


def test_class_size_matches_oracle():
    for name in ("S4", "D4", "Q8"):
        group, _ = CORPUS[name]
        for gen in group.generators:
            assert group.class_size(gen) == len(oracles.conjugacy_class(group, gen))


# -- coset action ---------------------------------------------------------------


def test_coset_action_whole_group():
    S3, _ = CORPUS["S3"]
    action = S3.coset_action(S3.generators)
    assert action.degree == 1


def test_coset_action_sign():
    S3, _ = CORPUS["S3"]
    a3 = [P("(1,2,3)", degree=3)]
    action = S3.coset_action(a3)
    assert action.degree == 2
    # the 3-cycle fixes both cosets, the transposition swaps them
    assert action.group.generators[0].is_identity()
    assert action.group.generators[1] == P("(1,2)", degree=2)


def test_coset_action_on_letter_stabilizer_matches_natural_action():
    N = control_group()
    stab = N.stabilizer_generators(1)
    action = N.coset_action(stab)
    assert action.degree == 32
    # relabelling: coset k  ->  image of letter 1 under its representative
    relabel = {k + 1: rep[1] for k, rep in enumerate(action.representatives)}
    assert sorted(relabel.values()) == list(range(1, 33))
    for g32, gact in zip(N.generators, action.group.generators):
        for k in range(1, 33):
            assert relabel[gact[k]] == g32[relabel[k]]


def test_coset_action_degree_equals_index():
    for name, sub in (("S4", ["(1,2)"]), ("D4", ["(1,3)"]), ("A5", ["(1,2,3)"])):
        group, order = CORPUS[name]
        gens = [P(s, degree=group.degree) for s in sub]
        action = group.coset_action(gens)
        h = PermutationGroup(group.degree, gens)
        assert action.degree == order // h.order


def test_coset_action_rejects_non_subgroup():
    C3, _ = CORPUS["C3"]
    with pytest.raises(ValueError):
        C3.coset_action([P("(1,2)", degree=3)])

import pytest

from j2sym import (
    LimitExceeded,
    Permutation,
    PermutationGroup,
    Presentation,
    ProgenitorSpec,
    Word,
    build_progenitor_quotient_presentation,
    cayley_presentation,
    enumerate_cosets,
    sufficient_subpresentation,
    verify_presentation,
)
from j2sym.words import word_from_indices

from corpus import CORPUS, control_group

P = Permutation.parse
W = Word.parse


def test_presentation_normalises_relators():
    p = Presentation(("a", "b"), (W("b a a^-1 b"), W("a^3"), W("a^3")))
    assert [str(r) for r in p.relators] == ["b^2", "a^3"]  # reduced, deduped, sorted


def test_presentation_rejects_bad_relators():
    with pytest.raises(ValueError):
        Presentation(("a",), (W("a a^-1"),))
    with pytest.raises(ValueError):
        Presentation(("a",), (W("b"),))
    with pytest.raises(ValueError):
        Presentation(("a", "a"), ())


def test_presentation_keeps_involution_squares():
    p = Presentation(("t1",), (W("t1 t1"),))
    assert [str(r) for r in p.relators] == ["t1^2"]


# -- cayley presentations -----------------------------------------------------


def test_cayley_c3():
    C3, _ = CORPUS["C3"]
    pres = cayley_presentation(C3, ("a",))
    assert [str(r) for r in pres.relators] == ["a^3"]
    assert verify_presentation(pres, C3)


def test_cayley_c2xc2_enumerates_to_four():
    g, _ = CORPUS["C2xC2"]
    pres = cayley_presentation(g, ("a", "b"))
    table = enumerate_cosets(pres, [])
    assert table.coset_count == 4


@pytest.mark.parametrize("name", ["C6", "S3", "D4", "Q8", "A4", "S4", "A5"])
def test_cayley_verifies_on_corpus(name):
    group, _ = CORPUS[name]
    names = tuple("abcde"[: len(group.generators)])
    pres = cayley_presentation(group, names)
    assert verify_presentation(pres, group)


def test_cayley_control_group_index_1920(built):
    # the heavyweight case: the control group's own Cayley relators
    N = built.result.control
    pres = built.result.control_presentation
    assert pres is not None and len(pres.relators) > 100
    assert verify_presentation(pres, N)


def test_cayley_respects_bound():
    g, _ = CORPUS["S4"]
    with pytest.raises(ValueError):
        cayley_presentation(g, ("a", "b"), bound=10)


# -- verify_presentation -------------------------------------------------------


def test_verify_rejects_failing_relator():
    C3, _ = CORPUS["C3"]
    assert not verify_presentation(Presentation(("a",), (W("a^2"),)), C3)


def test_verify_rejects_wrong_index():
    C3, _ = CORPUS["C3"]
    # a^6 holds on C3 but presents C6: index 6 != 3
    assert not verify_presentation(Presentation(("a",), (W("a^6"),)), C3)


def test_verify_arity_mismatch():
    C3, _ = CORPUS["C3"]
    assert not verify_presentation(Presentation(("a", "b"), (W("a^3"), W("b"))), C3)


def test_verify_indeterminate_is_distinct():
    # relator set presenting an infinite group: the enumeration limit is an
    # exception, not False
    free_ish = Presentation(("a", "b"), (W("a^2"),))
    C2xC2, _ = CORPUS["C2xC2"]
    with pytest.raises(LimitExceeded):
        verify_presentation(free_ish, C2xC2, limit=500)


# -- sufficient subsets ---------------------------------------------------------


def test_sufficient_subpresentation_small():
    g, _ = CORPUS["C2xC2"]
    pres = cayley_presentation(g, ("a", "b"))
    small = sufficient_subpresentation(pres, 4, shrink=True)
    assert len(small.relators) <= len(pres.relators)
    assert verify_presentation(small, g)


def test_sufficient_subpresentation_rejects_wrong_order():
    g, _ = CORPUS["C2xC2"]
    pres = cayley_presentation(g, ("a", "b"))
    with pytest.raises(ValueError):
        sufficient_subpresentation(pres, 8)


# -- progenitor quotient presentation -------------------------------------------


def _j2_spec():
    N = control_group()
    return ProgenitorSpec(
        ("x", "y"),
        tuple(N.generators),
        ((W("x^5 y^3"), 1, 3), (W("x y^-2 x y"), 2, 6)),
    )


def test_spec_validates():
    with pytest.raises(ValueError):
        ProgenitorSpec(("a",), (P("(1,2)", degree=3),), ())  # intransitive
    with pytest.raises(ValueError):
        ProgenitorSpec(
            ("a",), (P("(1,2)", degree=2),), ((W("a"), 7, 2),)
        )  # letter out of range


def test_progenitor_requires_verified_control():
    spec = _j2_spec()
    pres = Presentation(("x", "y"), (W("x^10"),))
    with pytest.raises(ValueError):
        build_progenitor_quotient_presentation(spec, pres)


def test_progenitor_alphabet_and_relators(built):
    pres = built.result.presentation
    assert pres.generators == ("x", "y", "t1")
    strs = [str(r) for r in pres.relators]
    assert "t1^2" in strs
    # the tau expansion with u_1 empty, and the pi expansion using u_2 = x
    tau_expansion = str((W("x^5 y^3 t1") ** 3).free_reduce(involutions=False))
    pi_expansion = str(
        (W("x y^-2 x y x^-1 t1 x") ** 6).free_reduce(involutions=False)
    )
    assert tau_expansion in strs
    assert pi_expansion in strs


def test_progenitor_substitution_invariant(built):
    # substituting t1 -> identity sends the control relators, t1^2 and the
    # commutator relators to the identity, and each expansion relator to
    # w^k for its relation word w (which is *not* the identity here; the
    # control group is not a quotient of the image)
    result = built.result
    spec = result.data.spec
    assign = dict(spec.control_assignment())
    assign["t1"] = Permutation.identity(spec.degree)
    expansion_values = {
        (w.evaluate(spec.control_assignment()) ** k).images
        for w, _, k in spec.relation_triples
    }
    n_expansion = 0
    for rel in result.presentation.relators:
        value = rel.evaluate(assign, degree=spec.degree)
        t1_count = sum(1 for sym, _ in rel.letters if sym == "t1")
        if t1_count <= 2:  # control relators, t1^2, commutators
            assert value.is_identity()
        else:
            n_expansion += 1
            assert value.images in expansion_values
            assert not value.is_identity()
    assert n_expansion == len(spec.relation_triples)


def test_progenitor_commutator_count_independent_of_schreier_order(built):
    # permuting the Schreier generators changes nothing observable: the
    # relator set is canonically sorted, and the enumeration gives the same
    # coset count
    spec = built.result.data.spec
    N = built.result.control
    small = sufficient_subpresentation(
        built.result.control_presentation, N.order
    )
    pres = build_progenitor_quotient_presentation(spec, small, control_verified=True)
    table = enumerate_cosets(pres, [W("x"), W("y")])
    assert table.coset_count == 315


def test_progenitor_no_relations_is_infinite():
    # a free product of involutions over a small control group never closes
    S3, _ = CORPUS["S3"]
    spec = ProgenitorSpec(("a", "b"), tuple(S3.generators), ())
    pres_n = cayley_presentation(S3, ("a", "b"))
    assert verify_presentation(pres_n, S3)
    pres = build_progenitor_quotient_presentation(spec, pres_n, control_verified=True)
    with pytest.raises(LimitExceeded):
        enumerate_cosets(pres, [W("a"), W("b")], limit=2000)


def test_progenitor_degree_one_trivial_control():
    spec = ProgenitorSpec((), (), ())
    pres_n = Presentation((), ())
    trivial = PermutationGroup(1, [])
    assert verify_presentation(pres_n, trivial)
    pres = build_progenitor_quotient_presentation(spec, pres_n, control_verified=True)
    assert pres.generators == ("t1",)
    assert [str(r) for r in pres.relators] == ["t1^2"]
    table = enumerate_cosets(pres, [])
    assert table.coset_count == 2


def test_hand_supplied_relator_file_accepted_after_verification(built):
    from j2sym.j2data import data_path, load_presentation_file

    N = built.result.control
    pres = load_presentation_file(data_path("control.pres"), ("x", "y"))
    assert verify_presentation(pres, N)
    spec = built.result.data.spec
    quotient = build_progenitor_quotient_presentation(
        spec, pres, control_verified=True
    )
    table = enumerate_cosets(quotient, [W("x"), W("y")])
    assert table.coset_count == 315

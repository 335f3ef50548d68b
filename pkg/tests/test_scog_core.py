import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cogdim.errors import IncompatibleComposition, MissingMap, NonInjectiveMap, UnknownIsoStatus, ValidationError
from cogdim.example_generators import action_scog, amalgam_scog, graph_product_scog, moore_action, named_complex
from cogdim.group_backends import INFINITE, ConcreteFiniteGroup, OrderLabel
from cogdim.poset_core import Poset
from cogdim.scog_core import (
    SimpleComplexOfGroups,
    SimpleMorphism,
    compute_blocks,
    is_thin,
    omega_sets,
    scog_from_json,
    simply_isomorphic,
    subdivide_scog,
    thinning,
    validate_scog,
)

from corpus import corpus_scogs


def test_amalgam_blocks_and_thinning():
    S = amalgam_scog()
    bp = compute_blocks(S)
    sizes = sorted(len(b) for b in bp.blocks)
    assert sizes == [1, 1, 1, 1, 1, 10]
    big = next(b for b in bp.blocks if len(b) == 10)
    assert {S.local[i].tag for i in big} == {"A"}
    R = bp.block_poset
    assert len(R) == 6
    T = thinning(S)
    assert is_thin(T)
    assert sorted(P.tag for P in T.local) == ["A", "A", "B", "C", "D", "E"]
    # the A-block lies below B, D and E; D and E lie below C
    tag = {J: T.group(J).tag for J in T.poset}
    covers = {(tag[T.poset.elements[i]], tag[T.poset.elements[j]]) for i, j in T.poset.cover_pairs_idx()}
    assert {("A", "B"), ("A", "D"), ("A", "E"), ("D", "C"), ("E", "C")} <= covers


def test_amalgam_concrete_matches_order_backend():
    a, b = compute_blocks(amalgam_scog()), compute_blocks(amalgam_scog("concrete"))
    assert a.blocks == b.blocks


def test_non_thin_pair():
    Q = Poset.chain("ab")
    S = SimpleComplexOfGroups(Q, [OrderLabel("x", 2), OrderLabel("x", 2)], backend="order")
    assert not is_thin(S)
    assert len(thinning(S).poset) == 1


def test_order_must_not_decrease():
    Q = Poset.chain("ab")
    with pytest.raises(NonInjectiveMap):
        SimpleComplexOfGroups(Q, [OrderLabel("x", 4), OrderLabel("y", 2)], backend="order")


def test_infinite_iso_status_needs_flags():
    Q = Poset.chain("ab")
    S = SimpleComplexOfGroups(Q, [OrderLabel("x", INFINITE), OrderLabel("y", INFINITE)], backend="order")
    with pytest.raises(UnknownIsoStatus):
        compute_blocks(S)
    S2 = SimpleComplexOfGroups(Q, S.local, backend="order", iso_flags={(0, 1): False})
    assert is_thin(S2)


def test_explicit_backend_checks():
    Z2, Z4 = ConcreteFiniteGroup.cyclic(2), ConcreteFiniteGroup.cyclic(4)
    Q = Poset.chain("ab")
    ok = SimpleComplexOfGroups(Q, [Z2, Z4], backend="explicit", maps={(0, 1): [0, 2]})
    assert is_thin(ok)
    with pytest.raises(NonInjectiveMap):
        SimpleComplexOfGroups(Q, [Z4, Z4], backend="explicit", maps={(0, 1): [0, 2, 0, 2]})
    with pytest.raises(MissingMap):
        SimpleComplexOfGroups(Q, [Z2, Z4], backend="explicit", maps={})
    with pytest.raises(ValidationError):
        SimpleComplexOfGroups(Q, [Z2, Z4], backend="explicit", maps={(0, 1): [0, 1]})


def test_incompatible_composites():
    # a < b < d and a < c < d with Z2 -> Z2 x Z2 landing in different factors
    Z2 = ConcreteFiniteGroup.cyclic(2)
    V = ConcreteFiniteGroup.elementary_abelian(2)
    Q = Poset.from_relations("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    x, y = V.element((1, 0)), V.element((0, 1))
    e = V.identity
    maps = {(0, 1): [0, 1], (0, 2): [0, 1], (1, 3): [e, x], (2, 3): [e, y]}
    with pytest.raises(IncompatibleComposition):
        SimpleComplexOfGroups(Q, [Z2, Z2, Z2, V], backend="explicit", maps=maps)


def test_explicit_converts_to_subgroups():
    Z2, Z4 = ConcreteFiniteGroup.cyclic(2), ConcreteFiniteGroup.cyclic(4)
    Q = Poset.chain("ab")
    psi = SimpleMorphism(Z4, {0: [0, 2], 1: [0, 1, 2, 3]})
    S = SimpleComplexOfGroups(Q, [Z2, Z4], backend="explicit", maps={(0, 1): [0, 2]}, morphism=psi)
    T = S.to_subgroup_backend(psi)
    assert [P.order for P in T.local] == [2, 4]
    bad = SimpleMorphism(Z4, {0: [0, 1], 1: [0, 1, 2, 3]})
    with pytest.raises(ValidationError):
        SimpleComplexOfGroups(Q, [Z2, Z4], backend="explicit", maps={(0, 1): [0, 2]}, morphism=bad)


def test_subgroup_containment_required():
    G = ConcreteFiniteGroup.dihedral(3)
    P = G.generate([G.element((0, 1))])
    Q = Poset.chain("ab")
    with pytest.raises(MissingMap):
        SimpleComplexOfGroups(Q, [G.whole(), P], backend="subgroup", ambient=G)


@pytest.mark.parametrize("name,scog", corpus_scogs(), ids=[n for n, _ in corpus_scogs()])
def test_thinning_properties(name, scog):
    bp = compute_blocks(scog)
    R = bp.block_poset
    Q = scog.poset
    assert len(R) <= len(Q)
    # projection is monotone
    for a in Q:
        for b in Q:
            if Q.leq(a, b):
                assert R.leq(bp.projection(a), bp.projection(b))
    T = thinning(scog)
    assert is_thin(T)
    TT = thinning(T)
    assert simply_isomorphic(T, TT, {J: J for J in T.poset})
    if scog.backend == "subgroup":
        for block in bp.blocks:
            assert len({scog.local[i].members for i in block}) == 1
        q_multiset = sorted(P.order for P in scog.local)
        for P in T.local:
            assert P.order in q_multiset


@pytest.mark.parametrize("k", [2, 3, 4])
def test_omega_sets_concrete(k):
    S = action_scog(moore_action(k))
    for J in S.poset:
        j = S.poset.index(J)
        om = omega_sets(S, None, J)
        assert S.ambient.identity in om or any(j in omega for omega, _ in om.values())
        for g, (omega, blocks) in om.items():
            for u in omega:
                assert S.local[u].order == S.local[j].order
        e_omega = next(omega for omega, _ in om.values() if j in omega)
        assert set(S.blocks().blocks[S.blocks().block_of[j]]) <= set(e_omega)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["path3", "cycle4", "points2", "simplex2"]))
def test_subdivision_thins_back(name):
    S = graph_product_scog(named_complex(name))
    assert is_thin(S)
    T = thinning(subdivide_scog(S))
    mapping = {R: R[0] for R in T.poset}
    assert simply_isomorphic(T, S, mapping)


@pytest.mark.parametrize("name,scog", corpus_scogs()[:12], ids=[n for n, _ in corpus_scogs()[:12]])
def test_json_roundtrip(name, scog):
    doc = json.loads(json.dumps(scog.to_json()))
    back = validate_scog(doc)
    assert back.poset.elements == scog.poset.elements
    assert [getattr(P, "order", None) for P in back.local] == [getattr(P, "order", None) for P in scog.local]
    assert back.to_json() == doc


def test_json_errors():
    with pytest.raises(ValidationError):
        scog_from_json({"poset": {"elements": ["a"]}})
    with pytest.raises(MissingMap):
        scog_from_json({"poset": {"elements": ["a", "b"]}, "backend": "order", "local_groups": {"a": {"tag": "x", "order": 1}}})

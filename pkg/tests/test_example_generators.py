import pytest

from cogdim.errors import ConditionFailed, NotAdmissible, NotFlag, NotStrictDomain, NotValidated, ValidationError
from cogdim.example_generators import (
    AMALGAM_GROUPS,
    GroupAction,
    action_join,
    action_product,
    action_scog,
    check_action,
    clique_complex,
    coxeter_semidirect_scog,
    cycle_graph,
    graph_product_scog,
    moore_action,
    named_complex,
    octahedron,
    projective_small_cover,
    sphere0_action,
    trivial_action,
    validate_reflection_like,
)
from cogdim.group_backends import ConcreteFiniteGroup
from cogdim.homology_engine import AbelianGroup, homology, is_flag
from cogdim.invariants import block_cd
from cogdim.poset_core import LinkModel
from cogdim.scog_core import compute_blocks

ACTIONS = [moore_action(2), moore_action(3), projective_small_cover(3), projective_small_cover(4), sphere0_action()]


def segment_flip(domain):
    G = ConcreteFiniteGroup.cyclic(2)
    cells = ["a", "b", "e"]
    act = [[0, 1, 2], [1, 0, 2]]
    return GroupAction(G, cells, [0, 0, 1], [[], [], [0, 1]], act, domain)


@pytest.mark.parametrize("A", ACTIONS + [action_product(moore_action(2), sphere0_action())], ids=lambda A: A.name)
def test_orbit_partition(A):
    check_action(A)
    total = sum(len(A.orbit(c)) for c in A.domain)
    assert total == len(A.cells)


@pytest.mark.parametrize("A", ACTIONS, ids=lambda A: A.name)
def test_validator_accepts(A):
    cert = validate_reflection_like(A)
    assert cert.n == A.domain_dim()
    assert set(cert.status) == {"i", "ii", "iii"}


def test_product_and_join_preserve_validation():
    for A, B in [(moore_action(2), moore_action(3)), (projective_small_cover(3), sphere0_action())]:
        for C in (action_product(A, B), action_join(A, B)):
            validate_reflection_like(C)
            check_action(C)


def test_moore_space_homology():
    for k in range(2, 6):
        X = moore_action(k).space()
        assert [homology(X, n) for n in range(3)] == [AbelianGroup(1), AbelianGroup(0, (k,)), AbelianGroup()]


def test_projective_space_homology():
    X = projective_small_cover(3).space()
    assert [homology(X, n) for n in range(3)] == [AbelianGroup(1), AbelianGroup(0, (2,)), AbelianGroup()]


def test_not_admissible():
    with pytest.raises(NotAdmissible):
        check_action(segment_flip([0, 2]))


def test_not_strict_domain():
    A = moore_action(2)
    A.domain = [A.index("c")]
    with pytest.raises(NotStrictDomain):
        check_action(A)


def test_trivial_action_rejected():
    with pytest.raises(ConditionFailed) as info:
        validate_reflection_like(trivial_action(1))
    assert info.value.condition == "iii"


def test_coxeter_needs_validation():
    with pytest.raises(NotValidated):
        coxeter_semidirect_scog(moore_action(2))
    with pytest.raises(ValidationError):
        A = moore_action(2)
        validate_reflection_like(A)
        coxeter_semidirect_scog(A, model="other")


def test_coxeter_interior_block():
    A = moore_action(2)
    cert = validate_reflection_like(A)
    S = coxeter_semidirect_scog(A)
    bp = compute_blocks(S)
    # the interior block carries the local group F_0 and contains the cone point
    cone_point = next(J for J in S.poset if J == ((), ()))
    b = bp.block_of[S.poset.index(cone_point)]
    assert S.group(cone_point).order == cert.F0.order * 1 or S.group(cone_point).order == A.group.order
    assert len(bp.blocks[b]) >= 1
    assert block_cd(S).value == cert.n + 1


def test_graph_product_backend_threshold():
    S = graph_product_scog(named_complex("path3"))
    assert S.backend == "subgroup" and S.ambient.order == 8
    big = graph_product_scog(named_complex("points4"), vertex_orders=[5, 5, 5, 5])
    assert big.backend == "order"
    assert isinstance(S.poset.model, LinkModel)
    with pytest.raises(NotFlag):
        graph_product_scog(cycle_graph(3).skeleton(1))


def test_named_complexes():
    assert octahedron().f_vector() == [6, 12, 8]
    assert is_flag(octahedron())
    assert clique_complex(range(3), [(0, 1), (1, 2), (0, 2)]).dim == 2
    with pytest.raises(ValidationError):
        named_complex("nonsense")


def test_amalgam_orders():
    assert AMALGAM_GROUPS == {"A": 2, "B": 4, "C": 8, "D": 4, "E": 4}


def test_action_scog_is_thin_for_moore():
    from cogdim.scog_core import is_thin

    assert is_thin(action_scog(moore_action(4)))


@pytest.mark.parametrize("model", ["cubical", "literal"])
def test_coxeter_local_group_orders(model):
    A = moore_action(2)
    validate_reflection_like(A)
    S = coxeter_semidirect_scog(A, model=model)
    orders = [S.group(J).order for J in S.poset]
    # apex carries F = D_2 (order 4); the center carries the three reflections, 2^3
    assert S.group(S.poset.elements[0]).order == 4
    assert max(orders) == 8

import random

import networkx as nx
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cogdim.errors import NegativeDimension, NotASubcomplex
from cogdim.homology_engine import (
    AbelianGroup,
    SparseMatrix,
    barycentric_subdivision,
    cohomology,
    cohomology_all,
    collapse_core,
    cone,
    direct_sum,
    homology,
    homology_all,
    invariant_factors,
    is_acyclic,
    is_chordal_1_skeleton,
    is_collapsible_greedy,
    is_flag,
    join,
    kunneth_vanishing_check,
    reduced_cohomology,
    reduced_homology,
    relative_cohomology,
    relative_homology,
    smith_normal_form,
)
from cogdim.simplicial import ComplexPair, CubicalCone, SimplicialComplex

from corpus import random_complex

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)

complexes = st.builds(random_complex, st.integers(1, 7), st.integers(1, 9), st.integers(0, 3), st.integers(0, 10_000))


def rp2() -> SimplicialComplex:
    # six-vertex triangulation of the projective plane
    return SimplicialComplex.from_simplices(
        [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    )


def torus() -> SimplicialComplex:
    def v(i, j):
        return (i % 3) * 3 + (j % 3)

    tri = []
    for i in range(3):
        for j in range(3):
            tri.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            tri.append((v(i, j), v(i, j + 1), v(i + 1, j + 1)))
    return SimplicialComplex.from_simplices(tri)


def sphere(n: int) -> SimplicialComplex:
    return SimplicialComplex.simplex(range(n + 2)).skeleton(n)


def sympy_factors(rows):
    M = sympy.Matrix(rows)
    D = sympy_snf(M, domain=sympy.ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_invariant_factors_match_sympy(rows):
    assert sorted(invariant_factors(rows)) == sympy_factors(rows)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_invariant_factors_divisibility_chain(rows):
    fs = invariant_factors(rows)
    assert all(b % a == 0 for a, b in zip(fs, fs[1:]))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_snf_transforms(rows):
    res = smith_normal_form(rows, transforms=True)
    U, V = sympy.Matrix(res.U), sympy.Matrix(res.V)
    D = U * sympy.Matrix(rows) * V
    m, n = D.shape
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i, j] == 0
    diag = [abs(int(D[i, i])) for i in range(min(m, n)) if D[i, i] != 0]
    assert diag == sorted(invariant_factors(rows))
    assert abs(U.det()) == 1 and abs(V.det()) == 1


def test_sparse_matrix_roundtrip():
    rows = [[1, 0, 2], [0, 0, 0], [3, 4, 0]]
    M = SparseMatrix.from_dense(rows)
    assert M.to_dense() == rows
    assert M.transpose().to_dense() == [list(r) for r in zip(*rows)]
    assert M.nnz() == 4


def test_abelian_group_text_and_sum():
    assert str(AbelianGroup(1, (3,))) == "Z + Z/3"
    assert str(AbelianGroup()) == "0"
    assert direct_sum([AbelianGroup(1), AbelianGroup(0, (2,)), AbelianGroup(2, (3,))]) == AbelianGroup(3, (6,))
    assert AbelianGroup.from_json(AbelianGroup(2, (2, 4)).to_json()) == AbelianGroup(2, (2, 4))


def test_known_homology():
    assert [str(homology(rp2(), n)) for n in range(3)] == ["Z", "Z/2", "0"]
    assert cohomology(rp2(), 2) == AbelianGroup(0, (2,))
    T = torus()
    assert homology(T, 1) == AbelianGroup(2) and homology(T, 2) == AbelianGroup(1)
    for n in range(4):
        S = sphere(n)
        assert reduced_homology(S, n) == AbelianGroup(1)
        assert all(not reduced_homology(S, k) for k in range(n))


def test_empty_complex_reduced_cohomology():
    E = SimplicialComplex.empty()
    assert reduced_cohomology(E, -1) == AbelianGroup(1)
    assert not reduced_cohomology(E, 0)


def test_negative_degree_rejected():
    with pytest.raises(NegativeDimension):
        homology(sphere(1), -2)


@settings(max_examples=60, deadline=None)
@given(complexes)
def test_euler_characteristic_matches_betti(X):
    hs = homology_all(X)
    assert X.euler_characteristic() == sum((-1) ** n * g.rank for n, g in hs.items())


@settings(max_examples=60, deadline=None)
@given(complexes)
def test_universal_coefficients(X):
    H = [homology(X, n) for n in range(X.dim + 1)]
    C = cohomology_all(X)
    for n in range(X.dim + 1):
        c = C.get(n, AbelianGroup())
        assert c.rank == H[n].rank
        assert c.torsion == (H[n - 1].torsion if n >= 1 else ())


@settings(max_examples=25, deadline=None)
@given(st.builds(random_complex, st.integers(1, 6), st.integers(1, 6), st.integers(0, 2), st.integers(0, 10_000)))
def test_subdivision_invariance(X):
    sd = barycentric_subdivision(X)
    for n in range(X.dim + 1):
        assert homology(sd, n) == homology(X, n)


@settings(max_examples=40, deadline=None)
@given(complexes, st.integers(0, 10_000))
def test_long_exact_sequence_rank_bookkeeping(X, seed):
    rng = random.Random(seed)
    simp = X.maximal_simplices()
    keep = [s for s in simp if rng.random() < 0.5]
    A = SimplicialComplex(X.labels, keep, closed=False)
    pair = ComplexPair(X, A)
    top = X.dim + 1
    hx = [homology(X, n).rank for n in range(top)]
    ha = [homology(A, n).rank if not A.is_empty() else 0 for n in range(top)]
    hr = [relative_homology(pair, n).rank for n in range(top)]
    # alternating sum along the long exact sequence vanishes
    assert sum((-1) ** n * (ha[n] - hx[n] + hr[n]) for n in range(top)) == 0
    # exactness at H_n(X): rank H_n(X) <= rank H_n(A) + rank H_n(X, A)
    assert all(hx[n] <= ha[n] + hr[n] for n in range(top))
    assert all(hr[n] <= hx[n] + (ha[n - 1] if n else 0) for n in range(top))


def test_relative_cohomology_of_disk_rel_boundary():
    D = SimplicialComplex.simplex(range(3))
    pair = ComplexPair(D, D.skeleton(1))
    assert relative_cohomology(pair, 2) == AbelianGroup(1)
    assert not relative_cohomology(pair, 1)


def test_pair_requires_subcomplex():
    with pytest.raises(NotASubcomplex):
        ComplexPair(SimplicialComplex.simplex([0, 1]), SimplicialComplex.simplex([5]))


def test_cone_and_join():
    S1 = sphere(1)
    assert is_acyclic(cone(S1))
    S = join(S1, sphere(0))
    assert reduced_homology(S, 2) == AbelianGroup(1)


def test_no_free_face_means_full_core():
    for X in (sphere(1), rp2(), torus()):
        assert len(collapse_core(X)) == X.num_cells
        assert not is_collapsible_greedy(X)


def test_collapse_core_of_collapsible():
    X = SimplicialComplex.simplex(range(4))
    assert len(collapse_core(X)) == 1
    core = collapse_core(sphere(1))
    assert len(core) > 1


def test_flag_detection():
    assert is_flag(SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2), (2, 3)])) is False
    assert is_flag(SimplicialComplex.from_simplices([(0, 1, 2), (2, 3)]))


def test_chordality_against_networkx():
    rng = random.Random(7)
    for _ in range(150):
        n = rng.randint(1, 8)
        G = nx.gnp_random_graph(n, rng.random(), seed=rng.randint(0, 10**6))
        X = SimplicialComplex.from_simplices([tuple(e) for e in G.edges()], vertices=G.nodes())
        assert is_chordal_1_skeleton(X) == nx.is_chordal(G)


def test_cubical_cone_boundary_squares_to_zero():
    base = torus()
    C = CubicalCone(base)
    for d in range(1, C.dim + 1):
        for c in C.cells(d):
            acc = {}
            for f, s in C.boundary(c):
                for g, t in C.boundary(f):
                    acc[g] = acc.get(g, 0) + s * t
            assert not any(acc.values())
    assert is_acyclic(C)
    assert C.euler_characteristic() == 1


def test_kunneth_check():
    assert kunneth_vanishing_check(rp2(), rp2().skeleton(0)) in (True, False)
    assert kunneth_vanishing_check(SimplicialComplex.simplex([0, 1]), sphere(1))

import pytest

from cogdim.bestvina_builder import build_bestvina, build_bestvina_Z, panel_pair, standard_panel_complex
from cogdim.example_generators import amalgam_scog, named_complex
from cogdim.homology_engine import ComplexPair, collapse_core, is_acyclic, relative_cohomology
from cogdim.invariants import d_B, spherical_poset
from cogdim.poset_core import Poset
from cogdim.scog_core import compute_blocks

from corpus import corpus_posets, random_poset

SMALL = [(n, Q) for n, Q in corpus_posets() if len(Q) <= 40]


def labels_are_unique_maxima(X):
    # label(face) >= label(simplex), so the panel containing a simplex with the largest index is its label
    Q = X.poset
    for s, l in X.labels.items():
        containing = [j for j in range(len(Q)) if Q.leq_idx(j, l)]
        maxima = [j for j in containing if not any(Q.leq_idx(j, k) and j != k for k in containing)]
        assert maxima == [l]


@pytest.mark.parametrize("name,Q", SMALL, ids=[n for n, _ in SMALL])
def test_bestvina_Z_panels_acyclic_and_dimension(name, Q):
    BZ = build_bestvina_Z(Q)
    BZ.check()
    labels_are_unique_maxima(BZ)
    for J in Q:
        assert is_acyclic(BZ.panel(J))
    d = d_B(Q)
    assert BZ.dim == d
    nonzero = set()
    for J in Q:
        total, sub = panel_pair(BZ, J)
        for n in range(BZ.dim + 1):
            if relative_cohomology(ComplexPair(total, sub), n):
                nonzero.add(n)
    assert max(nonzero) == d


@pytest.mark.parametrize("name,Q", SMALL[:45], ids=[n for n, _ in SMALL[:45]])
def test_bestvina_contractible_panels(name, Q):
    B = build_bestvina(Q)
    B.check()
    labels_are_unique_maxima(B)
    for J in Q:
        assert is_acyclic(B.panel(J))
    for J in B.notes["reused"]:
        key = next(K for K in Q if K == J or (isinstance(K, tuple) and list(K) == J))
        assert len(collapse_core(B.panel(key))) == 1
    d = d_B(Q)
    assert d <= B.dim <= d + 1
    if d != 2:
        assert B.dim == d


def test_standard_panel_complex_labels():
    Q = Poset.from_relations("abc", [("a", "b"), ("a", "c")])
    K = standard_panel_complex(Q)
    K.check()
    assert K.dim == 1
    assert {K.label(s) for s in K.complex.all_simplices()} == {"a", "b", "c"}
    assert K.panel("a").num_cells == K.complex.num_cells


def test_amalgam_bestvina_is_segment():
    R = compute_blocks(amalgam_scog()).block_poset
    B = build_bestvina(R)
    assert B.dim == 1
    assert B.complex.f_vector() == [3, 2]
    assert B.dim < standard_panel_complex(R).dim


def test_maximal_elements_are_points():
    Q = random_poset(12, 0.3, 5)
    B = build_bestvina(Q)
    for J in Q.maximal():
        assert B.panel(J).num_cells == 1


def test_json_export():
    B = build_bestvina(spherical_poset(named_complex("cycle4")))
    doc = B.to_json()
    assert doc["format"] == 1 and doc["dim"] == 2
    assert len(doc["labels"]) == B.complex.num_cells

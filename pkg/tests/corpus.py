"""Shared test corpus: generated scogs, posets and random small inputs."""

from __future__ import annotations

import random
from functools import lru_cache

from cogdim.example_generators import (
    action_join,
    action_product,
    action_scog,
    coxeter_semidirect_scog,
    amalgam_scog,
    graph_product_scog,
    moore_action,
    named_complex,
    projective_small_cover,
    sphere0_action,
    trivial_action,
    validate_reflection_like,
)
from cogdim.invariants import spherical_poset
from cogdim.poset_core import Poset
from cogdim.scog_core import subdivide_scog
from cogdim.simplicial import SimplicialComplex

GRAPH_NAMES = ["simplex2", "points2", "points3", "path3", "path4", "path5", "cycle4", "cycle5", "octahedron"]


def random_poset(n: int, p: float, seed: int) -> Poset:
    rng = random.Random(seed)
    rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Poset.from_relations(range(n), rel)


def random_complex(nverts: int, nsimp: int, maxdim: int, seed: int) -> SimplicialComplex:
    rng = random.Random(seed)
    simp = []
    for _ in range(nsimp):
        k = rng.randint(1, maxdim + 1)
        simp.append(tuple(sorted(rng.sample(range(nverts), min(k, nverts)))))
    return SimplicialComplex.from_simplices(simp, vertices=range(nverts))


@lru_cache(maxsize=None)
def corpus_scogs() -> tuple:
    """(name, scog) pairs used by the corpus-wide checks."""
    out = []
    for k in range(2, 9):
        out.append((f"moore{k}", action_scog(moore_action(k))))
    for n in range(2, 5):
        out.append((f"projective{n}", action_scog(projective_small_cover(n))))
    out.append(("sphere0", action_scog(sphere0_action())))
    out.append(("trivial1", action_scog(trivial_action(1))))
    out.append(("moore2xsphere0", action_scog(action_product(moore_action(2), sphere0_action()))))
    out.append(("moore2*sphere0", action_scog(action_join(moore_action(2), sphere0_action()))))
    for name in GRAPH_NAMES:
        out.append((f"gp_{name}", graph_product_scog(named_complex(name))))
    out.append(("gp_path3_mixed", graph_product_scog(named_complex("path3"), vertex_orders=[2, 3, 2])))
    out.append(("amalgam", amalgam_scog()))
    out.append(("amalgam_concrete", amalgam_scog("concrete")))
    A = moore_action(2)
    validate_reflection_like(A)
    out.append(("coxeter_moore2_cubical", coxeter_semidirect_scog(A, model="cubical")))
    out.append(("coxeter_moore2_literal", coxeter_semidirect_scog(A, model="literal")))
    out.append(("sd_moore3", subdivide_scog(action_scog(moore_action(3)))))
    out.append(("sd_gp_path3", subdivide_scog(graph_product_scog(named_complex("path3")))))
    return tuple(out)


def concrete_small(max_order: int = 200) -> list:
    """Concrete scogs covered by the oracle comparison."""
    out = []
    for k in range(2, 6):
        out.append((f"moore{k}", action_scog(moore_action(k))))
    for n in range(2, 4):
        out.append((f"projective{n}", action_scog(projective_small_cover(n))))
    for name in ["simplex2", "points2", "points3", "path3", "path4", "cycle4", "simplex3", "points4"]:
        out.append((f"gp_{name}", graph_product_scog(named_complex(name))))
    out.append(("amalgam_concrete", amalgam_scog("concrete")))
    return [(n, s) for n, s in out if _ambient_order(s) <= max_order]


def _ambient_order(scog) -> int:
    if scog.backend == "subgroup":
        return scog.ambient.order
    return scog.morphism.target.order


@lru_cache(maxsize=None)
def corpus_posets() -> tuple:
    """At least fifty posets: every generated example plus seeded random posets."""
    out = [(name, s.poset) for name, s in corpus_scogs()]
    for name in GRAPH_NAMES:
        out.append((f"spherical_{name}", spherical_poset(named_complex(name))))
    out.append(("chain5", Poset.chain(range(5))))
    out.append(("antichain3", Poset.antichain(range(3))))
    seed = 0
    while len(out) < 70:
        n = 5 + seed % 36
        p = [0.1, 0.2, 0.35][seed % 3]
        out.append((f"random{seed}", random_poset(n, p, seed)))
        seed += 1
    return tuple(out)

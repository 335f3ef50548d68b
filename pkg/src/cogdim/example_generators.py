"""Group actions on cell complexes and the complexes of groups built from them.

A ``GroupAction`` is a finite group acting on a finite regular cell complex,
given by its cell poset (cells with their codimension-one faces) and a
permutation of cells per group element. The simplicial model of the space is
the order complex of the cell poset (the barycentric subdivision), which is a
flag complex on which the action is admissible whenever it is admissible on
cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Hashable, Iterable, Sequence

from .errors import (
    ConditionFailed,
    NotAdmissible,
    NotFlag,
    NotStrictDomain,
    NotValidated,
    SizeGuardError,
    ValidationError,
)
from .group_backends import ConcreteFiniteGroup, OrderLabel, SubgroupHandle
from .homology_engine import collapse_core, homology_all, is_flag
from .poset_core import FaceModel, LinkModel, Poset, face_poset, id_key, iter_bits, order_complex
from .scog_core import SimpleComplexOfGroups, SimpleMorphism
from .simplicial import CubicalCone, SimplicialComplex, jsonable

CONCRETE_PRODUCT_LIMIT = 512


@dataclass
class ReflectionLikeCertificate:
    F0: SubgroupHandle
    n: int
    boundary_cells: frozenset
    interior_cells: frozenset
    status: dict  # condition -> "exact" | "heuristic" | "vacuous"


@dataclass
class GroupAction:
    group: ConcreteFiniteGroup
    cells: list  # cell ids
    dims: list[int]
    facets: list[list[int]]  # codimension-one faces, as cell indices
    act: list[list[int]]  # act[g][c] = image of cell c under g
    domain: list[int]  # cell indices of the strict fundamental domain
    name: str = ""
    metadata: dict = field(default_factory=dict)
    certificate: ReflectionLikeCertificate | None = None

    def __post_init__(self) -> None:
        self._index = {c: i for i, c in enumerate(self.cells)}
        self._closure: list[int] | None = None

    @property
    def dim(self) -> int:
        return max(self.dims, default=-1)

    def index(self, cell: Hashable) -> int:
        return self._index[cell]

    def closure_mask(self, c: int) -> int:
        """Bitmask of all faces of cell c (including c)."""
        if self._closure is None:
            order = sorted(range(len(self.cells)), key=lambda i: self.dims[i])
            clo = [0] * len(self.cells)
            for i in order:
                m = 1 << i
                for f in self.facets[i]:
                    m |= clo[f]
                clo[i] = m
            self._closure = clo
        return self._closure[c]

    def faces(self, c: int) -> list[int]:
        return list(iter_bits(self.closure_mask(c)))

    def stabilizer(self, c: int) -> frozenset:
        return frozenset(g for g in self.group.elements() if self.act[g][c] == c)

    def orbit(self, c: int) -> frozenset:
        return frozenset(self.act[g][c] for g in self.group.elements())

    def cell_poset(self, cells: Iterable[int] | None = None) -> Poset:
        """Cells ordered by inclusion (faces below)."""
        idx = sorted(range(len(self.cells))) if cells is None else sorted(cells)
        pos = {c: k for k, c in enumerate(idx)}
        covers: list[list[int]] = [[] for _ in idx]
        for c in idx:
            for f in self.facets[c]:
                if f in pos:
                    covers[pos[f]].append(pos[c])
        return Poset.from_covers([self.cells[c] for c in idx], covers, check=False)

    def space(self) -> SimplicialComplex:
        """Barycentric subdivision of the cell complex: a flag simplicial complex."""
        return order_complex(self.cell_poset())

    def domain_space(self) -> SimplicialComplex:
        return order_complex(self.cell_poset(self.domain))

    def domain_dim(self) -> int:
        return max(self.dims[c] for c in self.domain)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "kind": "group_action",
            "name": self.name,
            "group": self.group.to_json(),
            "cells": [{"id": jsonable(c), "dim": d, "facets": [jsonable(self.cells[f]) for f in fs]} for c, d, fs in zip(self.cells, self.dims, self.facets)],
            "action": self.act,
            "domain": [jsonable(self.cells[c]) for c in self.domain],
            "metadata": self.metadata,
        }


def check_action(A: GroupAction) -> None:
    """Homomorphism, cellularity, admissibility and strict fundamental domain checks."""
    G = A.group
    n = len(A.cells)
    for g in G.elements():
        perm = A.act[g]
        if sorted(perm) != list(range(n)):
            raise ValidationError(f"group element {g} does not permute the cells")
        for c in range(n):
            if sorted(perm[f] for f in A.facets[c]) != sorted(A.facets[perm[c]]):
                raise ValidationError(f"group element {g} does not preserve faces of {A.cells[c]!r}")
    for g in G.elements():
        for h in G.elements():
            gh = G.mul(g, h)
            if any(A.act[gh][c] != A.act[g][A.act[h][c]] for c in range(n)):
                raise ValidationError("cell permutations do not form an action")
    for c in range(n):
        for g in A.stabilizer(c):
            if any(A.act[g][f] != f for f in A.faces(c)):
                raise NotAdmissible(
                    f"element {g} maps cell {A.cells[c]!r} to itself without fixing it pointwise; "
                    "use the barycentric subdivision"
                )
    dom = set(A.domain)
    for c in A.domain:
        if any(f not in dom for f in A.faces(c)):
            raise NotStrictDomain("domain is not closed under faces")
    seen: set[int] = set()
    for c in A.domain:
        orb = A.orbit(c)
        if orb & seen:
            raise NotStrictDomain(f"domain meets the orbit of {A.cells[c]!r} twice")
        seen |= orb
    if len(seen) != n:
        raise NotStrictDomain("domain misses an orbit")


def _boundary_of_ball(A: GroupAction, n: int) -> set[int]:
    dom = set(A.domain)
    tops = [c for c in A.domain if A.dims[c] == n]
    count: dict[int, int] = {}
    for t in tops:
        for f in A.facets[t]:
            count[f] = count.get(f, 0) + 1
    bd: set[int] = set()
    for f, k in count.items():
        if k == 1 and f in dom:
            bd.update(A.faces(f))
    return bd


def validate_reflection_like(A: GroupAction) -> ReflectionLikeCertificate:
    """Check the reflection-like conditions; (ii) and (iii) exactly, (i) heuristically.

    A 0-dimensional domain (a point) is accepted as the 0-ball with empty
    boundary; condition (iii) then asks that the action be nontrivial, which
    keeps S^0 actions usable as join factors.
    """
    check_action(A)
    G = A.group
    n = A.domain_dim()
    if A.dim != n:
        raise ConditionFailed("i", f"domain has dimension {n} but the space has dimension {A.dim}")
    bd = _boundary_of_ball(A, n)
    interior = [c for c in A.domain if c not in bd]
    status = {}
    # (i): collapsible domain, boundary a homology (n-1)-sphere and a pseudomanifold
    Y = A.domain_space()
    if len(collapse_core(Y)) != 1:
        raise ConditionFailed("i", "fundamental domain is not (greedily) collapsible")
    if n >= 1:
        dB = order_complex(A.cell_poset(bd))
        hs = homology_all(dB, reduced=True)
        sphere = {n - 1: 1}
        if {k: (g.rank, g.torsion) for k, g in hs.items()} != {k: (v, ()) for k, v in sphere.items()}:
            raise ConditionFailed("i", "boundary of the domain is not a homology sphere")
        if n >= 2:
            ridges: dict[int, int] = {}
            for c in bd:
                if A.dims[c] == n - 1:
                    for f in A.facets[c]:
                        ridges[f] = ridges.get(f, 0) + 1
            if any(k != 2 for k in ridges.values()):
                raise ConditionFailed("i", "boundary of the domain is not a pseudomanifold")
        status["i"] = "heuristic"
    else:
        status["i"] = "exact"
    stabs = {c: A.stabilizer(c) for c in A.domain}
    F0 = stabs[interior[0]] if interior else frozenset()
    for c in interior:
        if stabs[c] != F0:
            raise ConditionFailed("ii", f"interior cells {A.cells[interior[0]]!r} and {A.cells[c]!r} have different stabilizers")
    status["ii"] = "exact"
    for c in bd:
        if not F0 < stabs[c]:
            raise ConditionFailed("iii", f"stabilizer of boundary cell {A.cells[c]!r} does not properly contain F0")
    if len(F0) == G.order:
        raise ConditionFailed("iii", "the action is trivial on the interior")
    status["iii"] = "exact" if bd else "vacuous"
    cert = ReflectionLikeCertificate(SubgroupHandle(G, F0), n, frozenset(bd), frozenset(interior), status)
    A.certificate = cert
    return cert


# ---------------------------------------------------------------------- concrete actions


def _action_from_maps(G: ConcreteFiniteGroup, cells: list, dims: list[int], facets: list[list[int]], image, domain: list, name: str, meta: dict) -> GroupAction:
    index = {c: i for i, c in enumerate(cells)}
    act = []
    for g in G.elements():
        act.append([index[image(G.names[g], c)] for c in cells])
    A = GroupAction(G, cells, dims, facets, act, sorted(index[c] for c in domain), name, meta)
    return A


def moore_action(k: int) -> GroupAction:
    """D_k acting on the Moore space M_k with a triangle as strict fundamental domain.

    Cells: centre ``c``, circle vertices ``p`` and ``q``, radial edges
    ``("r", j)`` for j in Z/2k (even j ends at p, odd j at q), circle edges
    ``("e", 0)``, ``("e", 1)`` and faces ``("f", h)`` spanned by c and the
    boundary positions h, h + 1. The boundary 2k-gon wraps k times around
    the circle. The dihedral element (i, f) acts on positions by
    x -> (-1)^f x + 2i.
    """
    if k < 2:
        raise ValidationError("Moore space needs k >= 2")
    G = ConcreteFiniteGroup.dihedral(k)
    m = 2 * k
    cells: list = ["c", "p", "q"]
    cells += [("r", j) for j in range(m)]
    cells += [("e", 0), ("e", 1)]
    cells += [("f", h) for h in range(m)]
    index = {c: i for i, c in enumerate(cells)}
    dims = [0, 0, 0] + [1] * m + [1, 1] + [2] * m
    facets: list[list[int]] = [[], [], []]
    for j in range(m):
        facets.append([index["c"], index["p" if j % 2 == 0 else "q"]])
    facets.append([index["p"], index["q"]])
    facets.append([index["p"], index["q"]])
    for h in range(m):
        facets.append([index[("r", h)], index[("r", (h + 1) % m)], index[("e", h % 2)]])

    def image(g, c):
        i, f = g
        if c in ("c", "p", "q"):
            return c
        kind, j = c
        if kind == "r":
            return ("r", ((-j if f else j) + 2 * i) % m)
        if kind == "e":
            return ("e", (j + f) % 2)
        return ("f", ((-j - 1 if f else j) + 2 * i) % m)

    domain = ["c", "p", "q", ("r", 0), ("r", 1), ("e", 0), ("f", 0)]
    return _action_from_maps(G, cells, dims, facets, image, domain, f"moore({k})", {"example": "dihedral Moore space", "k": k})


def projective_small_cover(n: int) -> GroupAction:
    """(Z/2)^{n-1} acting on RP^{n-1}: the coordinate sign changes on the cross-polytope modulo the antipodal map."""
    if not 2 <= n <= 4:
        raise SizeGuardError("projective small cover supports 2 <= n <= 4")

    def normal(S: tuple, signs: tuple) -> tuple:
        if signs[0] == 1:
            signs = tuple(1 - s for s in signs)
        return (S, signs)

    cells = []
    for r in range(1, n + 1):
        for S in combinations(range(n), r):
            for signs in product((0, 1), repeat=r):
                c = normal(S, signs)
                if c not in cells:
                    cells.append(c)
    cells.sort(key=lambda c: (len(c[0]), c))
    index = {c: i for i, c in enumerate(cells)}
    dims = [len(S) - 1 for S, _ in cells]
    facets = []
    for S, signs in cells:
        fs = []
        if len(S) > 1:
            for t in range(len(S)):
                fs.append(index[normal(S[:t] + S[t + 1:], signs[:t] + signs[t + 1:])])
        facets.append(fs)
    # group: bit vectors of length n modulo the all-ones vector, represented with last bit 0
    vecs = [tuple(v) + (0,) for v in product((0, 1), repeat=n - 1)]
    G = ConcreteFiniteGroup.from_closure(
        [tuple(1 if i == j else 0 for i in range(n)) for j in range(n - 1)],
        lambda a, b: _xor_mod_ones(a, b),
        tuple([0] * n),
        name=f"(Z/2)^{n - 1}",
    )
    assert set(G.names) == set(vecs)

    def image(g, c):
        S, signs = c
        return normal(S, tuple(s ^ g[i] for s, i in zip(signs, S)))

    domain = [c for c in cells if all(s == 0 for s in c[1])]
    return _action_from_maps(G, cells, dims, facets, image, domain, f"projective({n})", {"example": "projective small cover", "n": n})


def _xor_mod_ones(a: tuple, b: tuple) -> tuple:
    v = tuple(x ^ y for x, y in zip(a, b))
    if v[-1] == 1:
        v = tuple(1 - x for x in v)
    return v


def sphere0_action() -> GroupAction:
    """Z/2 swapping the two points of S^0; the domain is one point."""
    G = ConcreteFiniteGroup.cyclic(2)
    cells = ["+", "-"]
    return _action_from_maps(G, cells, [0, 0], [[], []], lambda g, c: c if g == 0 else ("-" if c == "+" else "+"), ["+"], "S0", {"example": "reflection on S^0"})


def trivial_action(n: int = 1) -> GroupAction:
    """The trivial group acting on an n-simplex (its own domain)."""
    G = ConcreteFiniteGroup.trivial()
    faces = [S for r in range(1, n + 2) for S in combinations(range(n + 1), r)]
    index = {S: i for i, S in enumerate(faces)}
    facets = [[index[S[:t] + S[t + 1:]] for t in range(len(S))] if len(S) > 1 else [] for S in faces]
    return _action_from_maps(G, faces, [len(S) - 1 for S in faces], facets, lambda g, c: c, faces, "trivial", {"example": "trivial action", "n": n})


def _product_group(G: ConcreteFiniteGroup, H: ConcreteFiniteGroup) -> ConcreteFiniteGroup:
    return ConcreteFiniteGroup.direct_product(G, H)


def _require_validated(A: GroupAction) -> None:
    if A.certificate is None:
        validate_reflection_like(A)


def action_product(A: GroupAction, B: GroupAction) -> GroupAction:
    """F x F' acting on the product cell complex; the domain is the product of domains."""
    _require_validated(A)
    _require_validated(B)
    G = _product_group(A.group, B.group)
    m = B.group.order
    nb = len(B.cells)
    cells = [(a, b) for a in A.cells for b in B.cells]
    dims = [A.dims[i] + B.dims[j] for i in range(len(A.cells)) for j in range(nb)]
    facets = []
    for i in range(len(A.cells)):
        for j in range(nb):
            facets.append([f * nb + j for f in A.facets[i]] + [i * nb + f for f in B.facets[j]])
    act = []
    for g in G.elements():
        ga, gb = divmod(g, m)
        act.append([A.act[ga][i] * nb + B.act[gb][j] for i in range(len(A.cells)) for j in range(nb)])
    domain = sorted(i * nb + j for i in A.domain for j in B.domain)
    return GroupAction(G, cells, dims, facets, act, domain, f"{A.name} x {B.name}", {"example": "product", "factors": [A.metadata, B.metadata]})


def action_join(A: GroupAction, B: GroupAction) -> GroupAction:
    """F x F' acting on the join; cells are ('l', a), ('r', b) and ('lr', a, b)."""
    _require_validated(A)
    _require_validated(B)
    G = _product_group(A.group, B.group)
    m = B.group.order
    na, nb = len(A.cells), len(B.cells)
    cells = [("l", a) for a in A.cells] + [("r", b) for b in B.cells] + [("lr", a, b) for a in A.cells for b in B.cells]
    dims = list(A.dims) + list(B.dims) + [A.dims[i] + B.dims[j] + 1 for i in range(na) for j in range(nb)]

    def pair(i: int, j: int) -> int:
        return na + nb + i * nb + j

    facets = [list(fs) for fs in A.facets] + [[na + f for f in fs] for fs in B.facets]
    for i in range(na):
        for j in range(nb):
            fs = [pair(f, j) for f in A.facets[i]] if A.dims[i] > 0 else [na + j]
            fs += [pair(i, f) for f in B.facets[j]] if B.dims[j] > 0 else [i]
            facets.append(fs)
    act = []
    for g in G.elements():
        ga, gb = divmod(g, m)
        row = list(A.act[ga]) + [na + B.act[gb][j] for j in range(nb)]
        row += [pair(A.act[ga][i], B.act[gb][j]) for i in range(na) for j in range(nb)]
        act.append(row)
    domain = sorted(list(A.domain) + [na + j for j in B.domain] + [pair(i, j) for i in A.domain for j in B.domain])
    return GroupAction(G, cells, dims, facets, act, domain, f"{A.name} * {B.name}", {"example": "join", "factors": [A.metadata, B.metadata]})


# ---------------------------------------------------------------------- complexes of groups


def action_scog(A: GroupAction) -> SimpleComplexOfGroups:
    """Scog of the action: domain cells by reverse inclusion, local groups = cell stabilizers."""
    check_action(A)
    P = A.cell_poset(A.domain).dual()
    G = A.group
    local = [G.subgroup(A.stabilizer(A.index(c))) for c in P.elements]
    meta = {"example": A.name, "source": A.metadata}
    return SimpleComplexOfGroups(P, local, backend="subgroup", ambient=G, metadata=meta)


def _clique_check(L: SimplicialComplex) -> None:
    if not is_flag(L):
        raise NotFlag("complex is not flag")


def graph_product_scog(L: SimplicialComplex, vertex_orders: dict | Sequence[int] | None = None, vertex_groups: dict | None = None) -> SimpleComplexOfGroups:
    """Graph product of finite vertex groups over a flag complex L, as a scog over the spherical poset Q(L).

    Local group at a simplex is the direct product of its vertex groups. When
    the product of all vertex groups is small it is materialised and the
    scog uses subgroups of it (the obvious morphism to the direct product is
    injective on local groups); otherwise order labels are used.
    """
    _clique_check(L)
    verts = L.vertices()
    if vertex_groups is not None:
        groups = [vertex_groups[v] for v in verts]
        orders = [g.order for g in groups]
    else:
        if vertex_orders is None:
            orders = [2] * len(verts)
        elif isinstance(vertex_orders, dict):
            orders = [vertex_orders[v] for v in verts]
        else:
            orders = list(vertex_orders)
        groups = [ConcreteFiniteGroup.cyclic(o) for o in orders]
    if any(o < 1 for o in orders):
        raise ValidationError("vertex groups need positive order")
    Q0 = face_poset(L, with_empty=True)
    simplex_of = list(Q0.elements)
    Q = Poset(Q0.elements, Q0._up, upper_covers=Q0._ucov, model=LinkModel(L, simplex_of))
    pos = {v: i for i, v in enumerate(verts)}
    total = 1
    for o in orders:
        total *= o
    meta = {"example": "graph product", "vertices": [jsonable(v) for v in verts], "orders": orders}
    if total <= CONCRETE_PRODUCT_LIMIT:
        amb = ConcreteFiniteGroup.trivial()
        for g in groups:
            amb = ConcreteFiniteGroup.direct_product(amb, g) if amb.order > 1 else g
        coords = _product_coordinates(groups, amb)
        local = []
        for sigma in Q.elements:
            support = {pos[v] for v in sigma}
            members = [x for x, cs in enumerate(coords) if all(cs[i] == groups[i].identity for i in range(len(groups)) if i not in support)]
            local.append(amb.subgroup(members))
        return SimpleComplexOfGroups(Q, local, backend="subgroup", ambient=amb, metadata=meta)
    local = []
    for sigma in Q.elements:
        o = 1
        for v in sigma:
            o *= orders[pos[v]]
        local.append(OrderLabel(("graph_product", tuple(jsonable(v) for v in sigma)), o))
    return SimpleComplexOfGroups(Q, local, backend="order", metadata=meta)


def _product_coordinates(groups: list[ConcreteFiniteGroup], amb: ConcreteFiniteGroup) -> list[tuple]:
    """Coordinates of each element of an iterated direct product."""
    if len(groups) == 0:
        return [()]
    if len(groups) == 1:
        return [(x,) for x in range(amb.order)]
    out = []
    for x in range(amb.order):
        coords = []
        y = x
        for g in reversed(groups[1:]):
            y, r = divmod(y, g.order)
            coords.append(r)
        coords.append(y)
        out.append(tuple(reversed(coords)))
    return out


def _simplex_stabilizers(A: GroupAction, Yhat: SimplicialComplex) -> dict:
    """Pointwise F-stabilizer of each simplex of the subdivided domain."""
    stab_cell = {v: A.stabilizer(A.index(Yhat.labels[v])) for (v,) in Yhat.cells(0)}
    out = {(): frozenset(A.group.elements())}
    for s in Yhat.all_simplices():
        S = stab_cell[s[0]]
        for v in s[1:]:
            S = S & stab_cell[v]
        out[s] = S
    return out


def coxeter_semidirect_scog(A: GroupAction, model: str = "cubical") -> SimpleComplexOfGroups:
    """Scog of W_L x| F acting on the Davis complex, over the cone on the subdivided domain.

    L is the barycentric subdivision of the cell complex; its vertices are the
    cells, and the strict fundamental domain of the Davis complex is the cone
    C(Y') over the subdivided domain. The local group at a point over a chain
    rho_0 < ... < rho_k of simplices of Y (rho_0 may be the empty simplex, the
    apex direction) is W_{rho_0} x F_{rho_k}, of order 2^|rho_0| |F_{rho_k}|.

    ``model="literal"`` uses the simplices of C(Y') as the poset.
    ``model="cubical"`` groups them into the cubes [tau, rho] of the natural
    cubical structure on C(Y'), which has the same local groups on open cells
    and far fewer elements.
    """
    if A.certificate is None:
        raise NotValidated("validate the action with validate_reflection_like first")
    Yhat = A.domain_space()
    stab = _simplex_stabilizers(A, Yhat)
    lab = Yhat.labels

    def tag(tau: tuple, rho: tuple) -> tuple:
        return (tuple(sorted(id_key(lab[v]) for v in tau)), tuple(sorted(stab[rho])))

    meta = {"example": "coxeter semidirect", "action": A.name, "model": model, "n": A.certificate.n}
    if model == "cubical":
        cube = CubicalCone(Yhat)
        cells = [c for d in range(cube.dim + 1) for c in cube.cells(d)]
        idx = {c: i for i, c in enumerate(cells)}
        covers = [[idx[f] for f, _ in cube.boundary(c)] for c in cells]
        ids = [(tuple(lab[v] for v in tau), tuple(lab[v] for v in rho)) for tau, rho in cells]
        Q = Poset.from_covers(ids, covers, model=FaceModel(cube, cells), check=False)
        local = [OrderLabel(tag(tau, rho), (2 ** len(tau)) * len(stab[rho])) for tau, rho in cells]
    elif model == "literal":
        simp = [()] + list(Yhat.all_simplices())
        sidx = {s: i for i, s in enumerate(simp)}
        ucov: list[list[int]] = [[] for _ in simp]
        for s in simp:
            if len(s) == 1:
                ucov[0].append(sidx[s])
            for f, _ in Yhat.boundary(s):
                ucov[sidx[f]].append(sidx[s])
        base = Poset.from_covers(list(range(len(simp))), ucov, check=False)
        C = order_complex(base)  # vertices are indices into simp; C = C(Y')
        chains = [c for d in range(C.dim + 1) for c in C.cells(d)]
        cidx = {c: i for i, c in enumerate(chains)}
        covers = [[cidx[f] for f, _ in C.boundary(c)] for c in chains]
        ids = [tuple(tuple(lab[v] for v in simp[C.labels[x]]) for x in c) for c in chains]
        Q = Poset.from_covers(ids, covers, model=FaceModel(C, chains), check=False)
        local = []
        for c in chains:
            lo = simp[C.labels[c[0]]]
            hi = simp[C.labels[c[-1]]]
            local.append(OrderLabel(tag(lo, hi), (2 ** len(lo)) * len(stab[hi])))
    else:
        raise ValidationError(f"unknown model {model!r}")
    return SimpleComplexOfGroups(Q, local, backend="order", metadata=meta)


# ---------------------------------------------------------------------- the amalgam example


AMALGAM_GROUPS = {"A": 2, "B": 4, "C": 8, "D": 4, "E": 4}


def amalgam_poset() -> tuple[Poset, dict]:
    """Three triangles' face posets (by inclusion) glued along edges, with their group labels.

    Triangles: T1 = abc, T2 = bcd, T3 = bde. The centre of T1 carries B, the
    centre of T3 carries C, the edges be and de of T3 carry D and E, and every
    other cell carries A.
    """
    tris = {"T1": "abc", "T2": "bcd", "T3": "bde"}
    verts = list("abcde")
    edges = sorted({"".join(sorted(x + y)) for t in tris.values() for x, y in combinations(t, 2)})
    elements = verts + edges + list(tris)
    rel = []
    for e in edges:
        rel += [(e[0], e), (e[1], e)]
    for t, vs in tris.items():
        for x, y in combinations(vs, 2):
            rel.append(("".join(sorted(x + y)), t))
    labels = {x: "A" for x in elements}
    labels.update({"T1": "B", "T3": "C", "be": "D", "de": "E"})
    return Poset.from_relations(elements, rel), labels


def amalgam_scog(backend: str = "order") -> SimpleComplexOfGroups:
    """The amalgam example: A < B, A < D < C, A < E < C, all proper.

    ``backend="order"`` uses order labels. ``backend="concrete"`` realises the
    groups inside (Z/2)^4 with generators a, b, c, d as A = <a>, B = <a, b>,
    D = <a, c>, E = <a, d>, C = <a, c, d>; this is a finite quotient of the
    amalgam that is injective on the local groups.
    """
    Q, labels = amalgam_poset()
    meta = {"example": "thinning and Bestvina complex of an amalgam"}
    if backend == "order":
        local = [OrderLabel(labels[x], AMALGAM_GROUPS[labels[x]]) for x in Q.elements]
        return SimpleComplexOfGroups(Q, local, backend="order", metadata=meta)
    G = ConcreteFiniteGroup.elementary_abelian(4)
    gens = {"A": [0], "B": [0, 1], "D": [0, 2], "E": [0, 3], "C": [0, 2, 3]}
    subs = {}
    for name, bits in gens.items():
        subs[name] = G.generate(G.element(_unit(b, 4)) for b in bits)
    local = [subs[labels[x]] for x in Q.elements]
    return SimpleComplexOfGroups(Q, local, backend="subgroup", ambient=G, metadata=meta)


def _unit(b: int, n: int) -> tuple:
    return tuple(1 if i == b else 0 for i in range(n))


def identity_morphism(scog: SimpleComplexOfGroups) -> SimpleMorphism:
    """The inclusion of the local subgroups into the ambient group."""
    G = scog.ambient
    return SimpleMorphism(G, {i: P.sorted_members() for i, P in enumerate(scog.local)})


def path_graph(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_simplices([(i, i + 1) for i in range(n - 1)], vertices=range(n))


def cycle_graph(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_simplices([(i, (i + 1) % n) for i in range(n)])


def octahedron() -> SimplicialComplex:
    """Boundary of the cross-polytope in R^3: a flag 2-sphere."""
    pairs = [(0, 1), (2, 3), (4, 5)]
    return SimplicialComplex.from_simplices([(a, b, c) for a in pairs[0] for b in pairs[1] for c in pairs[2]])


def clique_complex(vertices: Iterable[Hashable], edges: Iterable[tuple]) -> SimplicialComplex:
    """Flag complex of a graph."""
    vertices = list(vertices)
    adj: dict = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    order = {v: i for i, v in enumerate(vertices)}
    cliques: list[tuple] = []

    def grow(clique: list, cand: set) -> None:
        cliques.append(tuple(clique))
        for v in sorted(cand, key=order.get):
            grow(clique + [v], {w for w in cand & adj[v] if order[w] > order[v]})

    for v in vertices:
        grow([v], {w for w in adj[v] if order[w] > order[v]})
    return SimplicialComplex.from_simplices(cliques, vertices=vertices)


def named_complex(name: str) -> SimplicialComplex:
    """Small named flag complexes: pathN, cycleN, simplexN, pointsN, octahedron."""
    if name == "octahedron":
        return octahedron()
    for prefix, fn in (("path", path_graph), ("cycle", cycle_graph)):
        if name.startswith(prefix):
            return fn(int(name[len(prefix):]))
    if name.startswith("simplex"):
        return SimplicialComplex.simplex(range(int(name[len("simplex"):]) + 1))
    if name.startswith("points"):
        return SimplicialComplex.from_simplices([], vertices=range(int(name[len("points"):])))
    raise ValidationError(f"unknown complex name {name!r}")

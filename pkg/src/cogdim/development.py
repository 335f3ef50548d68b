"""The Basic Construction G x X / ~ for a panel complex and a finite group.

The development is stored as a Delta-complex: a cell is a pair
``(sigma, r)`` with ``sigma`` a simplex of the panel complex and ``r`` the
canonical representative (least element id) of the left coset
``g * psi(P_label(sigma))``. The faces of ``[g, sigma]`` are ``[g, f]`` for
the faces ``f`` of ``sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable

from .bestvina_builder import PanelComplex
from .errors import InfiniteBackend, LabelMismatch, NonInjectiveMorphism, SizeGuardError
from .group_backends import ConcreteFiniteGroup
from .homology_engine import AbelianGroup, SparseMatrix, homology_all, invariant_factors
from .scog_core import SimpleComplexOfGroups, SimpleMorphism
from .simplicial import CellSubcomplex, jsonable

MAX_DEVELOPMENT_CELLS = 10_000_000


class _CosetTable:
    """Canonical left-coset representatives g*P -> min(g*P), cached per subgroup."""

    def __init__(self, G: ConcreteFiniteGroup):
        self.G = G
        self._reps: dict[frozenset, list[int]] = {}

    def reps(self, P: frozenset) -> list[int]:
        if P not in self._reps:
            G = self.G
            self._reps[P] = [min(G.mul(g, p) for p in P) for g in G.elements()]
        return self._reps[P]

    def transversal(self, P: frozenset) -> list[int]:
        return sorted(set(self.reps(P)))


class DevelopmentComplex:
    """Cell complex protocol (dim, cells, boundary, cell_dim) for a development."""

    def __init__(self, panel: PanelComplex, G: ConcreteFiniteGroup, groups: list[frozenset]):
        self.panel = panel
        self.G = G
        self.groups = groups  # poset index -> psi(P_J) as a member set
        self.cosets = _CosetTable(G)
        X = panel.complex
        by_dim: list[list] = []
        for d in range(X.dim + 1):
            lst = []
            for s in X.cells(d):
                P = groups[panel.labels[s]]
                lst.extend((s, r) for r in self.cosets.transversal(P))
            lst.sort()
            by_dim.append(lst)
        self._by_dim = by_dim
        self._cells = frozenset(c for lst in by_dim for c in lst)
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def cells(self, d: int) -> list:
        if 0 <= d < len(self._by_dim):
            return self._by_dim[d]
        return []

    @staticmethod
    def cell_dim(c) -> int:
        return len(c[0]) - 1

    def canon(self, s: tuple, g: int) -> tuple:
        P = self.groups[self.panel.labels[s]]
        return (s, self.cosets.reps(P)[g])

    def boundary(self, c) -> list:
        s, r = c
        if len(s) <= 1:
            return []
        return [(self.canon(s[:i] + s[i + 1:], r), -1 if i % 2 else 1) for i in range(len(s))]

    def act(self, h: int, c) -> tuple:
        s, r = c
        return self.canon(s, self.G.mul(h, r))

    def __contains__(self, c: object) -> bool:
        return c in self._cells

    @property
    def num_cells(self) -> int:
        return len(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(lst) for d, lst in enumerate(self._by_dim))

    def vertex_of(self, c) -> tuple:
        """Vertex cells of a cell, in simplex order."""
        s, r = c
        return tuple(self.canon((v,), r) for v in s)


@dataclass
class Development:
    complex: DevelopmentComplex
    group: ConcreteFiniteGroup
    panel: PanelComplex
    scog: SimpleComplexOfGroups
    groups: list[frozenset]
    report: dict = field(default_factory=dict)

    def domain_cells(self) -> list:
        """The copy [e, X]."""
        e = self.group.identity
        return sorted(self.complex.canon(s, e) for s in self.panel.complex.all_simplices())

    def stabilizer(self, c) -> frozenset:
        G = self.group
        return frozenset(h for h in G.elements() if self.complex.act(h, c) == c)

    def is_simplicial(self) -> bool:
        seen = set()
        for d in range(self.complex.dim + 1):
            for c in self.complex.cells(d):
                vs = frozenset(self.complex.vertex_of(c))
                if len(vs) != d + 1 or vs in seen:
                    return False
                seen.add(vs)
        return True

    def to_json(self) -> dict:
        D = self.complex
        X = self.panel.complex
        top = []
        covered = set()
        for d in range(D.dim, -1, -1):
            for c in D.cells(d):
                if c in covered:
                    continue
                top.append([[jsonable(X.labels[v]), r] for (v,), r in D.vertex_of(c)])
                stack = [c]
                while stack:
                    x = stack.pop()
                    for f, _ in D.boundary(x):
                        if f not in covered:
                            covered.add(f)
                            stack.append(f)
        return {
            "format": 1,
            "group_order": self.group.order,
            "cells": [len(D.cells(d)) for d in range(D.dim + 1)],
            "simplicial": self.is_simplicial(),
            "simplices": top,
            "report": self.report,
        }

    def to_off(self) -> str:
        """OFF export; vertices placed on the moment curve, 2-cells as triangles, 1-cells as segments."""
        D = self.complex
        verts = D.cells(0)
        vidx = {v: i for i, v in enumerate(verts)}
        faces = []
        for c in D.cells(2):
            faces.append([vidx[v] for v in D.vertex_of(c)])
        if D.dim < 2:
            for c in D.cells(1):
                faces.append([vidx[v] for v in D.vertex_of(c)])
        lines = ["OFF", f"{len(verts)} {len(faces)} {len(D.cells(1))}"]
        for i in range(len(verts)):
            t = (i + 1) / (len(verts) + 1)
            lines.append(f"{t:.6f} {t * t:.6f} {t * t * t:.6f}")
        for f in faces:
            lines.append(" ".join([str(len(f))] + [str(x) for x in f]))
        return "\n".join(lines) + "\n"


def _image_groups(scog: SimpleComplexOfGroups, psi: SimpleMorphism | None) -> tuple[ConcreteFiniteGroup, list[frozenset]]:
    if scog.backend == "order" and psi is None:
        raise InfiniteBackend("developments need a concrete group: order-labelled scogs must come with a finite morphism")
    if psi is not None and scog.backend == "subgroup":
        # psi given as images of the subgroups themselves
        G = psi.target
        groups = [frozenset(psi.maps[i]) for i in range(len(scog))]
    else:
        G, images = scog.subgroup_images(psi)
        groups = [S.members for S in images]
    for i in range(len(scog)):
        o = scog.order_of(i)
        if o != len(groups[i]):
            raise NonInjectiveMorphism(f"psi is not injective on the local group at {scog.poset.elements[i]!r}")
    return G, groups


def develop(panel: PanelComplex, scog: SimpleComplexOfGroups, psi: SimpleMorphism | None = None, *, check: bool = True, max_cells: int = MAX_DEVELOPMENT_CELLS) -> Development:
    if panel.poset.elements != scog.poset.elements:
        raise LabelMismatch("panel complex and scog are indexed by different posets")
    G, groups = _image_groups(scog, psi)
    X = panel.complex
    total = 0
    for s in X.all_simplices():
        total += G.order // len(groups[panel.labels[s]])
    if total > max_cells:
        raise SizeGuardError(f"development would have {total} cells (guard {max_cells})")
    D = DevelopmentComplex(panel, G, groups)
    dev = Development(D, G, panel, scog, groups)
    if check:
        dev.report = check_development(dev)
    return dev


def check_development(dev: Development, exhaustive_limit: int = 1000) -> dict:
    """Orbit/coset bookkeeping, Euler characteristic, and (for small G) stabilizers."""
    D = dev.complex
    X = dev.panel.complex
    G = dev.group
    expected = [0] * (X.dim + 1)
    chi = 0
    for s in X.all_simplices():
        idx = G.order // len(dev.groups[dev.panel.labels[s]])
        expected[len(s) - 1] += idx
        chi += (-1) ** (len(s) - 1) * idx
    counts = [len(D.cells(d)) for d in range(D.dim + 1)]
    if counts != expected:
        raise AssertionError("cell counts do not match coset indices")
    if D.euler_characteristic() != chi:
        raise AssertionError("Euler characteristic mismatch")
    # orbits: the domain meets each orbit once
    domain = dev.domain_cells()
    seen = set()
    for c in domain:
        orbit = {D.act(h, c) for h in G.elements()}
        if orbit & seen:
            raise AssertionError("domain meets an orbit twice")
        seen |= orbit
    if seen != set(D._cells):
        raise AssertionError("domain misses an orbit")
    stab_checked = False
    if G.order <= exhaustive_limit and len(D) * G.order <= 2_000_000:
        for c in D._cells:
            s, r = c
            want = frozenset(G.mul(G.mul(r, p), G.inv(r)) for p in dev.groups[dev.panel.labels[s]])
            if dev.stabilizer(c) != want:
                raise AssertionError("stabilizer mismatch")
        stab_checked = True
    return {
        "group_order": G.order,
        "cells_per_dim": counts,
        "euler_characteristic": chi,
        "orbits_per_dim": [len(X.cells(d)) for d in range(X.dim + 1)],
        "stabilizers_checked": stab_checked,
    }


def development_homology(dev: Development) -> list[AbelianGroup]:
    D = dev.complex
    hs = homology_all(D)
    return [hs.get(n, AbelianGroup()) for n in range(D.dim + 1)]


def fixed_point_subcomplex(dev: Development, H: frozenset) -> CellSubcomplex:
    """X^H: cells [g, sigma] with g^{-1} H g inside psi(P_label(sigma))."""
    G = dev.group
    D = dev.complex
    cells = []
    for c in D._cells:
        s, r = c
        P = dev.groups[dev.panel.labels[s]]
        if all(G.conj(h, r) in P for h in H):
            cells.append(c)
    return CellSubcomplex(D, cells)


def verify_model_hypothesis(dev: Development) -> dict:
    """Diagnostics toward 'D is a model for E_F G': connectivity, H_1, fixed sets of local groups."""
    D = dev.complex
    G = dev.group
    hs = homology_all(D, reduced=True)
    h0 = hs.get(0, AbelianGroup())
    h1 = hs.get(1, AbelianGroup())
    connected = not h0 and D.num_cells > 0
    report: dict[str, Any] = {
        "connected": connected,
        "H1_trivial": not h1,
        "simply_connected_proxy": connected and not h1,
        "acyclic": not hs,
        "fixed_sets": [],
        "failures": [],
        "status": "assumed",
    }
    subgroups = set()
    for P in dev.groups:
        for g in G.elements():
            subgroups.add(frozenset(G.conj(a, g) for a in P))
    for H in sorted(subgroups, key=lambda S: (len(S), sorted(S))):
        F = fixed_point_subcomplex(dev, H)
        empty = F.num_cells == 0
        acyclic = (not empty) and not homology_all(F, reduced=True)
        entry = {"subgroup": sorted(H), "order": len(H), "cells": F.num_cells, "nonempty": not empty, "acyclic": acyclic}
        report["fixed_sets"].append(entry)
        if not acyclic:
            report["failures"].append(entry)
    if not report["simply_connected_proxy"]:
        report["failures"].append({"development": "not connected or H1 nonzero"})
    return report


# ---------------------------------------------------------------------- Bredon oracle


@dataclass
class BredonCochainComplex:
    bases: list[list[tuple]]  # degree -> list of (domain simplex, coset representative of x*S)
    coboundaries: list[SparseMatrix]  # degree i: C^i -> C^{i+1}

    def cohomology(self) -> list[AbelianGroup]:
        n = len(self.bases)
        ranks = []
        factors = []
        for M in self.coboundaries:
            f = invariant_factors(M) if M.nrows and M.ncols else []
            factors.append(f)
            ranks.append(len(f))
        out = []
        for i in range(n):
            r_out = ranks[i] if i < len(ranks) else 0
            f_in = factors[i - 1] if i >= 1 else []
            out.append(AbelianGroup(len(self.bases[i]) - r_out - len(f_in), tuple(f_in)))
        return out


def bredon_cochain_complex(dev: Development, S: frozenset) -> BredonCochainComplex:
    """Cochains C^i(X; B_S) built from domain cells and explicit isomorphism sets.

    A basis element of degree i is (sigma, xS) with sigma an i-cell of the
    domain and x^{-1} G_sigma x = S. For a face f = y * [e, f_0] of tau, the
    coefficient map sends (f_0, xS) to (tau, y x S) when y G_{f_0} y^{-1} = G_tau
    (the induced map of orbits is then an isomorphism) and to 0 otherwise.
    """
    G = dev.group
    D = dev.complex
    X = dev.panel.complex
    cos = _CosetTable(G)
    Sreps = cos.reps(S)
    transversal = cos.transversal(S)
    stab = {}
    for s in X.all_simplices():
        stab[s] = dev.groups[dev.panel.labels[s]]
    bases: list[list[tuple]] = []
    index: list[dict] = []
    for d in range(X.dim + 1):
        b = []
        for s in X.cells(d):
            Gs = stab[s]
            if len(Gs) != len(S):
                continue
            for x in transversal:
                if frozenset(G.conj(a, x) for a in Gs) == S:
                    b.append((s, x))
        bases.append(b)
        index.append({e: k for k, e in enumerate(b)})
    cob: list[SparseMatrix] = []
    for d in range(X.dim):
        cols: list[dict[int, int]] = [{} for _ in bases[d]]
        for tau in X.cells(d + 1):
            Gt = stab[tau]
            if len(Gt) != len(S):
                continue
            for (f, r), sgn in D.boundary(D.canon(tau, G.identity)):
                y = r
                Gf = stab[f]
                if frozenset(G.mul(G.mul(y, a), G.inv(y)) for a in Gf) != Gt:
                    continue
                for x in transversal:
                    k = index[d].get((f, x))
                    if k is None:
                        continue
                    target = (tau, Sreps[G.mul(y, x)])
                    row = index[d + 1][target]
                    cols[k][row] = cols[k].get(row, 0) + sgn
        cols = [{r: v for r, v in c.items() if v} for c in cols]
        cob.append(SparseMatrix(len(bases[d + 1]), len(bases[d]), cols))
    # delta o delta = 0
    for d in range(len(cob) - 1):
        A, B = cob[d], cob[d + 1]
        for j, col in enumerate(A.cols):
            acc: dict[int, int] = {}
            for m, v in col.items():
                for r, w in B.cols[m].items():
                    acc[r] = acc.get(r, 0) + v * w
            if any(acc.values()):
                raise AssertionError("delta o delta != 0")
    return BredonCochainComplex(bases, cob)


def bredon_cochain_oracle(dev: Development, J: Hashable) -> list[AbelianGroup]:
    """H^*_F(X; B_{P_J}) computed directly from the development's cells, degrees 0..dim."""
    j = dev.panel.poset.index(J)
    return bredon_cochain_complex(dev, dev.groups[j]).cohomology()

"""Panel complexes: the standard one K = |Q| and the Bestvina complexes B, B^Z.

Every simplex carries a label in Q; the panel of J is the set of simplices
whose label is >= J. Labels always satisfy label(face) >= label(simplex), so
each panel is a subcomplex and the largest J with the simplex in X_J is the
label itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Hashable

from .homology_engine import collapse_core, is_acyclic, reduced_cohomology
from .poset_core import Poset, id_key, order_complex
from .simplicial import SimplicialComplex, jsonable


@dataclass
class PanelComplex:
    complex: SimplicialComplex
    poset: Poset
    labels: dict  # simplex (integer tuple) -> poset index
    notes: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.complex.dim

    def label(self, simplex: tuple) -> Hashable:
        return self.poset.elements[self.labels[simplex]]

    def panel_simplices(self, J: Hashable) -> list[tuple]:
        j = self.poset.index(J)
        up = self.poset.up_mask(j)
        return [s for s, l in self.labels.items() if up >> l & 1]

    def panel(self, J: Hashable) -> SimplicialComplex:
        return SimplicialComplex(self.complex.labels, self.panel_simplices(J), closed=True)

    def strict_panel(self, J: Hashable) -> SimplicialComplex:
        """X_{>J}: union of the panels strictly above J."""
        j = self.poset.index(J)
        up = self.poset.strict_up_mask(j)
        return SimplicialComplex(self.complex.labels, [s for s, l in self.labels.items() if up >> l & 1], closed=True)

    def check(self) -> None:
        """Face-monotone labels (so panels are subcomplexes and the max label is unique), nonempty panels."""
        Q = self.poset
        for s, l in self.labels.items():
            for f, _ in self.complex.boundary(s):
                if not Q.leq_idx(l, self.labels[f]):
                    raise AssertionError(f"label of face {f} not >= label of {s}")
        if set(self.labels) != set(self.complex.all_simplices()):
            raise AssertionError("every simplex needs a label")
        for j in range(len(Q)):
            up = Q.up_mask(j)
            if not any(up >> l & 1 for l in self.labels.values()):
                raise AssertionError(f"panel of {Q.elements[j]!r} is empty")

    def to_json(self) -> dict:
        C = self.complex
        return {
            "format": 1,
            "complex": C.to_json(),
            "labels": [
                {"simplex": [jsonable(v) for v in C.label_simplex(s)], "label": jsonable(self.poset.elements[l])}
                for s, l in sorted(self.labels.items(), key=lambda t: (len(t[0]), t[0]))
            ],
            "dim": self.dim,
            "notes": self.notes,
        }


def standard_panel_complex(Q: Poset) -> PanelComplex:
    """K = |Q| with label(chain) = least element of the chain."""
    K = order_complex(Q)
    labels = {}
    for s in K.all_simplices():
        # vertex ids of the order complex are element indices
        labels[s] = next(i for i in s if all(Q.leq_idx(i, k) for k in s))
    return PanelComplex(K, Q, labels)


def _processing_order(Q: Poset) -> list[int]:
    # top-down: every element after all elements above it
    return sorted(range(len(Q)), key=lambda i: (Q.height_idx(i), id_key(Q.elements[i])))


def _needed_dim(U: SimplicialComplex) -> int:
    """Smallest possible dimension of an acyclic complex containing U: max n with H~^{n-1}(U) != 0."""
    need = 0
    for n in range(U.dim + 2):
        if reduced_cohomology(U, n - 1):
            need = n
    return need


def _smallest_core(U: SimplicialComplex, target: int, tries: int) -> tuple[set, int]:
    core = collapse_core(U)
    best = (core, _dim_of(core))
    rng = random.Random(0)
    for _ in range(tries):
        if best[1] + 1 <= target:
            break
        perm = list(range(len(U.labels)))
        rng.shuffle(perm)
        shuffled = SimplicialComplex(U.labels, [tuple(sorted(perm[v] for v in s)) for s in U.all_simplices()], closed=True)
        inv = {p: v for v, p in enumerate(perm)}
        c = {tuple(sorted(inv[v] for v in s)) for s in collapse_core(shuffled)}
        d = _dim_of(c)
        if d < best[1]:
            best = (c, d)
    return best


def _dim_of(cells: set) -> int:
    return max((len(s) - 1 for s in cells), default=-1)


def _build(Q: Poset, acyclic: bool, tries: int) -> PanelComplex:
    labels: dict[tuple, int] = {}
    vlabels: list = []
    overshoot = []
    reused = []
    for j in _processing_order(Q):
        mask = Q.strict_up_mask(j)
        U_simp = [s for s, l in labels.items() if mask >> l & 1]
        J = Q.elements[j]
        if not U_simp:
            v = len(vlabels)
            vlabels.append(("apex", J))
            labels[(v,)] = j
            continue
        U = SimplicialComplex(vlabels, U_simp, closed=True)
        target = _needed_dim(U)
        core, cdim = _smallest_core(U, max(target, U.dim), tries)
        if len(core) == 1:
            reused.append(J)
            continue
        if acyclic and is_acyclic(U):
            reused.append(J)
            continue
        v = len(vlabels)
        vlabels.append(("apex", J))
        labels[(v,)] = j
        for s in core:
            labels[tuple(sorted(s + (v,)))] = j
        if max(U.dim, cdim + 1) > max(target, U.dim):
            overshoot.append({"element": jsonable(J), "needed": target, "built": cdim + 1})
    C = SimplicialComplex(vlabels, labels.keys(), closed=True)
    notes = {"kind": "B^Z" if acyclic else "B", "reused": [jsonable(J) for J in reused], "overshoot": overshoot}
    return PanelComplex(C, Q, labels, notes)


def build_bestvina_Z(Q: Poset, *, tries: int = 8) -> PanelComplex:
    """Bestvina complex with acyclic panels.

    Top-down: B_J = B_{>J} when that union is acyclic, otherwise B_{>J} with a
    cone attached over a collapse core of it (the core is homotopy equivalent
    to B_{>J}, so the result is contractible and usually of smaller dimension
    than the full cone).
    """
    return _build(Q, True, tries)


def build_bestvina(Q: Poset, *, tries: int = 8) -> PanelComplex:
    """Bestvina complex with contractible panels; reuse only when greedily collapsible."""
    return _build(Q, False, tries)


def panel_pair(X: PanelComplex, J: Hashable) -> tuple[SimplicialComplex, SimplicialComplex]:
    return X.panel(J), X.strict_panel(J)

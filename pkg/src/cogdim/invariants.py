"""Dimension invariants of posets and simple complexes of groups.

All cohomology is integral. Reduced cohomology uses H~^{-1}(empty) = Z, so a
maximal element J contributes n = 0 to d_B(Q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Iterator

from .bestvina_builder import PanelComplex, build_bestvina_Z
from .errors import NotFlag
from .group_backends import rigidity_check
from .homology_engine import (
    AbelianGroup,
    cohomology_all,
    direct_sum,
    is_chordal_1_skeleton,
    is_flag,
)
from .poset_core import FaceModel, LinkModel, Poset, face_poset, id_key, iter_bits, realize_strict_upper
from .scog_core import SimpleComplexOfGroups, SimpleMorphism, omega_sets
from .simplicial import SimplicialComplex, jsonable

MODEL_ASSUMED = "model for E_F G assumed"


@dataclass
class DimensionReport:
    value: int
    witnesses: list = field(default_factory=list)  # (element or block id, degree, AbelianGroup)
    assumptions: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witnesses": [{"at": jsonable(J), "degree": n, "group": str(g)} for J, n, g in self.witnesses],
            "assumptions": list(self.assumptions),
            **({"details": self.details} if self.details else {}),
        }


# ---------------------------------------------------------------------- relative pieces


class RelativeCells:
    """The cells of a complex lying in a given family, with boundaries truncated to the family.

    When the family is the complement of a subcomplex in a subcomplex this is
    the relative chain complex of the pair.
    """

    def __init__(self, parent: Any, cells: list):
        self.parent = parent
        self._cells = set(cells)
        by_dim: list[list] = []
        for c in cells:
            d = parent.cell_dim(c)
            while len(by_dim) <= d:
                by_dim.append([])
            by_dim[d].append(c)
        for lst in by_dim:
            lst.sort()
        self._by_dim = by_dim

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def cells(self, d: int) -> list:
        if 0 <= d < len(self._by_dim):
            return self._by_dim[d]
        return []

    def cell_dim(self, c) -> int:
        return self.parent.cell_dim(c)

    def boundary(self, c) -> list:
        cs = self._cells
        return [(f, s) for f, s in self.parent.boundary(c) if f in cs]

    def __contains__(self, c: object) -> bool:
        return c in self._cells

    @property
    def num_cells(self) -> int:
        return len(self._cells)


class _ChainCells:
    """Chains of a poset as cells (increasing index tuples in a fixed linear order)."""

    def __init__(self, Q: Poset):
        self.Q = Q

    @staticmethod
    def cell_dim(c) -> int:
        return len(c) - 1

    @staticmethod
    def boundary(c) -> list:
        if len(c) <= 1:
            return []
        return [(c[:i] + c[i + 1:], -1 if i % 2 else 1) for i in range(len(c))]


def _chains_from(Q: Poset, u: int) -> Iterator[tuple[int, ...]]:
    """All chains of Q whose least element is u."""
    stack: list[tuple[tuple[int, ...], int]] = [((u,), Q.strict_up_mask(u))]
    while stack:
        chain, ext = stack.pop()
        yield chain
        for j in iter_bits(ext):
            stack.append((chain + (j,), ext & Q.strict_up_mask(j)))


def relative_chain_cells(Q: Poset, members: int) -> RelativeCells:
    """Relative chains of (|Q_{>=C}|, |Q_{>=C} minus C|) for an up-closed-complement family C."""
    if isinstance(Q.model, FaceModel):
        cell_of = Q.model.cell_of
        return RelativeCells(Q.model.space, [cell_of[i] for i in iter_bits(members)])
    chains = []
    for u in iter_bits(members):
        chains.extend(_chains_from(Q, u))
    return RelativeCells(_ChainCells(Q), chains)


def _top_degree(groups: dict[int, AbelianGroup]) -> int | None:
    nz = [n for n, g in groups.items() if g]
    return max(nz) if nz else None


# ---------------------------------------------------------------------- d_B


def strict_upper_cohomology(Q: Poset, j: int) -> dict[int, AbelianGroup]:
    """Reduced cohomology of K_{>J}, keyed by degree (degree -1 for the empty complex)."""
    X = realize_strict_upper(Q, j)
    if X.num_cells == 0:
        return {-1: AbelianGroup(1)}
    return cohomology_all(X, reduced=True)


def local_cohomological_dimension(Q: Poset) -> DimensionReport:
    """d_B(Q) = max{n : H~^{n-1}(K_{>J}) != 0 for some J}."""
    best = -1
    witnesses = []
    for j in range(len(Q)):
        hs = strict_upper_cohomology(Q, j)
        for deg, g in hs.items():
            n = deg + 1
            if n > best:
                best = n
                witnesses = []
            if n == best:
                witnesses.append((Q.elements[j], n, g))
    witnesses.sort(key=lambda w: id_key(w[0]))
    return DimensionReport(max(best, 0), witnesses)


def d_B(Q: Poset) -> int:
    return local_cohomological_dimension(Q).value


def _max_relative_degree(Q: Poset) -> int:
    best = -1
    for j in range(len(Q)):
        t = _top_degree(cohomology_all(relative_chain_cells(Q, 1 << j)))
        if t is not None:
            best = max(best, t)
    return best


def _panel_quantities(X: PanelComplex) -> tuple[int, int]:
    """(max n with H~^{n-1}(X_{>J}) != 0, max n with H^n(X_J, X_{>J}) != 0)."""
    Q = X.poset
    a = b = -1
    C = X.complex
    for j in range(len(Q)):
        sub = X.strict_panel(Q.elements[j])
        if sub.num_cells == 0:
            a = max(a, 0)
        else:
            t = _top_degree(cohomology_all(sub, reduced=True))
            if t is not None:
                a = max(a, t + 1)
        rel = RelativeCells(C, [s for s, l in X.labels.items() if l == j])
        t = _top_degree(cohomology_all(rel))
        if t is not None:
            b = max(b, t)
    return a, b


def gendimbest_quantities(Q: Poset, BZ: PanelComplex | None = None) -> dict[str, int]:
    """The five quantities that all equal d_B(Q)."""
    if BZ is None:
        BZ = build_bestvina_Z(Q)
    a, b = _panel_quantities(BZ)
    return {
        "via_strict_upper": d_B(Q),
        "via_pairs": _max_relative_degree(Q),
        "via_bestvina_strict_panels": a,
        "dim_bestvina_Z": BZ.dim,
        "via_bestvina_pairs": b,
    }


# ---------------------------------------------------------------------- block formula


def _rigidity(scog: SimpleComplexOfGroups) -> str:
    """Finite local groups are rigid; infinite order labels raise RigidityUnknown."""
    if scog.backend == "order":
        rigidity_check(None, scog.local)
    return "rigidity: finite local groups"


def block_pieces(scog: SimpleComplexOfGroups) -> Iterator[tuple[int, int, int]]:
    """(block number, member mask, strict mask) for every block C."""
    Q = scog.poset
    bp = scog.blocks()
    for b, members in enumerate(bp.blocks):
        mmask = 0
        for i in members:
            mmask |= 1 << i
        total = 0
        for i in members:
            total |= Q.up_mask(i)
        strict = total & ~mmask
        yield b, mmask, strict


def block_cd(scog: SimpleComplexOfGroups, *, explain: bool = False) -> DimensionReport:
    """max{n : H^n(K_C, K_{>C}) != 0 for some block C}."""
    assumptions = [_rigidity(scog), MODEL_ASSUMED]
    Q = scog.poset
    bp = scog.blocks()
    best = -1
    witnesses = []
    details: dict = {"blocks": len(bp.blocks)}
    pieces = []
    for b, members, strict in block_pieces(scog):
        # sanity: everything above the block and outside it has strictly bigger groups
        rel = relative_chain_cells(Q, members)
        hs = cohomology_all(rel)
        t = _top_degree(hs)
        rep = bp.block_poset.elements[b]
        if explain:
            pieces.append({"block": jsonable(rep), "size": len(bp.blocks[b]), "relative_cells": rel.num_cells, "cohomology": {str(k): str(v) for k, v in hs.items()}})
        if t is None:
            continue
        if t > best:
            best = t
            witnesses = []
        if t == best:
            witnesses.append((rep, t, hs[t]))
    if explain:
        details["pieces"] = pieces
    return DimensionReport(max(best, 0), witnesses, assumptions, details)


def cd_thin_formula(scog: SimpleComplexOfGroups) -> DimensionReport:
    rep = local_cohomological_dimension(scog.poset)
    rep.assumptions = [MODEL_ASSUMED]
    return rep


def cd_upper_bound(scog: SimpleComplexOfGroups) -> int:
    """d_B(R) for the block poset R."""
    return d_B(scog.blocks().block_poset)


def bredon_formula(scog: SimpleComplexOfGroups, psi: SimpleMorphism | None, J: Hashable) -> list[AbelianGroup]:
    """Sum over g in I_J and blocks C within Omega^g_J of H^*(K_C, K_{>C}), degrees 0..dim K."""
    Q = scog.poset
    top = Q.rank()
    total = [AbelianGroup() for _ in range(top + 1)]
    for g, (omega, blocks) in omega_sets(scog, psi, J).items():
        for blk in blocks:
            members = 0
            for u in blk:
                members |= 1 << u
            hs = cohomology_all(relative_chain_cells(Q, members))
            for n, grp in hs.items():
                total[n] = direct_sum([total[n], grp])
    return total


def tree_criterion(scog: SimpleComplexOfGroups | Poset) -> dict:
    """cd <= 1 test: H^n(K_{>J}) = 0 for all J and n >= 1."""
    Q = scog if isinstance(scog, Poset) else scog.poset
    witnesses = []
    for j in range(len(Q)):
        X = realize_strict_upper(Q, j)
        if X.num_cells == 0:
            continue
        for n, g in cohomology_all(X).items():
            if n >= 1 and g:
                witnesses.append((Q.elements[j], n, g))
    out: dict[str, Any] = {
        "cd_le_1": not witnesses,
        "witnesses": [{"at": jsonable(J), "degree": n, "group": str(g)} for J, n, g in witnesses],
    }
    if isinstance(Q.model, LinkModel):
        out["chordal"] = is_chordal_1_skeleton(Q.model.L)
    return out


def spherical_poset(L: SimplicialComplex) -> Poset:
    """Simplices of L and the empty simplex, by inclusion, with the link model attached."""
    Q0 = face_poset(L, with_empty=True)
    return Poset(Q0.elements, Q0._up, upper_covers=Q0._ucov, model=LinkModel(L, list(Q0.elements)))


def vcd_racg(L: SimplicialComplex) -> DimensionReport:
    """vcd of the right-angled Coxeter group W_L, as d_B of the spherical poset of L."""
    if not is_flag(L):
        raise NotFlag("L must be a flag complex")
    rep = local_cohomological_dimension(spherical_poset(L))
    rep.assumptions = ["Davis complex is a model for E_F W_L"]
    return rep


def reflike_counterexample_report(action: Any, *, model: str = "cubical", link_check: str = "full") -> dict:
    """Top cohomology of L, the link condition for vcd <= n, and block_cd of W_L x| F."""
    from .example_generators import coxeter_semidirect_scog, validate_reflection_like

    cert = validate_reflection_like(action)
    L = action.space()
    n = L.dim
    top = cohomology_all(L).get(n, AbelianGroup())
    # links of nonempty simplices have dimension < n; only the empty simplex can carry H^n
    link_report = {"checked": 0, "vanish_by_dimension": 0, "computed": 0, "failures": []}
    if link_check == "full":
        dims = _link_dims(L)
        for s, d in dims.items():
            link_report["checked"] += 1
            if d < n:
                link_report["vanish_by_dimension"] += 1
            else:
                link_report["computed"] += 1
                if cohomology_all(L.link(L.label_simplex(s))).get(n):
                    link_report["failures"].append(jsonable(L.label_simplex(s)))
    hypothesis = not top and not link_report["failures"]
    scog = coxeter_semidirect_scog(action, model=model)
    rep = block_cd(scog)
    interior = None
    for J, deg, g in rep.witnesses:
        interior = {"block": jsonable(J), "degree": deg, "group": str(g)}
        break
    return {
        "action": action.name,
        "n": n,
        "F0_order": cert.F0.order,
        "top_cohomology": str(top),
        "top_cohomology_vanishes": not top,
        "link_condition": link_report,
        "vcd_upper_bound": n if hypothesis else None,
        "cd": rep.value,
        "cd_witness": interior,
        "poset_size": len(scog.poset),
        "blocks": rep.details.get("blocks"),
        "assumptions": rep.assumptions,
    }


def _link_dims(L: SimplicialComplex) -> dict[tuple, int]:
    """dim Lk(sigma) = max over maximal simplices containing sigma of (|tau| - |sigma|) - 1."""
    best: dict[tuple, int] = {}
    for t in L.maximal_simplices():
        for k in range(1, len(t) + 1):
            for s in combinations(t, k):
                d = len(t) - len(s) - 1
                if best.get(s, -2) < d:
                    best[s] = d
    return best

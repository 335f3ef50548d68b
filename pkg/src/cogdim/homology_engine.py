"""Exact integral (co)homology via Smith normal form, and complex constructors.

The sparse elimination first pivots on unit entries (Markowitz order: short
columns, then short rows), which is where nearly all the work in boundary
matrices happens, and hands the small non-unit remainder to a dense routine.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Any, Hashable, Iterable, Sequence

from .errors import NegativeDimension
from .simplicial import CellSubcomplex, ComplexPair, CubicalCone, SimplicialComplex

__all__ = [
    "AbelianGroup",
    "SparseMatrix",
    "SNFResult",
    "smith_normal_form",
    "invariant_factors",
    "homology",
    "cohomology",
    "reduced_homology",
    "reduced_cohomology",
    "relative_homology",
    "relative_cohomology",
    "homology_all",
    "cohomology_all",
    "direct_sum",
    "betti_and_torsion",
    "barycentric_subdivision",
    "cone",
    "join",
    "is_flag",
    "is_chordal_1_skeleton",
    "collapse_core",
    "is_collapsible_greedy",
    "is_acyclic",
    "kunneth_vanishing_check",
    "SimplicialComplex",
    "ComplexPair",
    "CellSubcomplex",
    "CubicalCone",
]


# ---------------------------------------------------------------------------
# abelian groups


def normalize_torsion(values: Iterable[int]) -> tuple[int, ...]:
    """Turn a list of diagonal entries into the invariant-factor chain (entries >= 2)."""
    ds = sorted(abs(v) for v in values if abs(v) > 1)
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            a, b = ds[i], ds[j]
            g = gcd(a, b)
            ds[i], ds[j] = g, a // g * b
    return tuple(d for d in ds if d > 1)


@dataclass(frozen=True, order=True)
class AbelianGroup:
    """Finitely generated abelian group Z^rank + Z/d_1 + ... with d_i | d_{i+1}."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        object.__setattr__(self, "torsion", normalize_torsion(self.torsion))

    @classmethod
    def free(cls, rank: int) -> "AbelianGroup":
        return cls(rank, ())

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __bool__(self) -> bool:
        return not self.is_trivial()

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup(self.rank + other.rank, self.torsion + other.torsion)

    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion), "text": str(self)}

    @classmethod
    def from_json(cls, doc: dict) -> "AbelianGroup":
        return cls(doc["rank"], tuple(doc["torsion"]))


def direct_sum(groups: Iterable[AbelianGroup]) -> AbelianGroup:
    out = AbelianGroup()
    for g in groups:
        out = out + g
    return out


# ---------------------------------------------------------------------------
# sparse integer matrices and Smith normal form


@dataclass
class SparseMatrix:
    """Column-major sparse integer matrix: ``cols[j]`` maps row -> nonzero value."""

    nrows: int
    ncols: int
    cols: list[dict[int, int]] = field(default_factory=list)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols: list[dict[int, int]] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, ncols, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        cols: list[dict[int, int]] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)


@dataclass
class SNFResult:
    diagonal: list[int]
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None


def _as_sparse(M: Any) -> SparseMatrix:
    if isinstance(M, SparseMatrix):
        return M
    M = [list(r) for r in M]
    return SparseMatrix.from_dense(M) if M else SparseMatrix(0, 0, [])


def _dense_diagonal(A: list[list[int]]) -> list[int]:
    """Diagonal entries of some diagonalization of a dense integer matrix (no transforms)."""
    diag: list[int] = []
    A = [row[:] for row in A if any(row)]
    while A:
        ncols = len(A[0])
        best = None
        for i, row in enumerate(A):
            for j, v in enumerate(row):
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        while True:
            p = A[pi][pj]
            changed = False
            # column reduction by row operations
            for i in range(len(A)):
                if i != pi and A[i][pj]:
                    q = A[i][pj] // p
                    if q:
                        row, prow = A[i], A[pi]
                        for j in range(ncols):
                            if prow[j]:
                                row[j] -= q * prow[j]
                    if A[i][pj]:
                        changed = True
            # row reduction by column operations
            prow = A[pi]
            for j in range(ncols):
                if j != pj and prow[j]:
                    q = prow[j] // p
                    if q:
                        for i in range(len(A)):
                            if A[i][pj]:
                                A[i][j] -= q * A[i][pj]
                    if prow[j]:
                        changed = True
            if not changed:
                break
            # move to the smallest remainder in the pivot row/column
            best = None
            for i in range(len(A)):
                v = A[i][pj]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, pj)
            for j in range(ncols):
                v = A[pi][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), pi, j)
            _, pi, pj = best
        diag.append(abs(A[pi][pj]))
        del A[pi]
        for row in A:
            del row[pj]
        A = [row for row in A if any(row)]
    return diag


def invariant_factors(M: Any) -> list[int]:
    """Nonzero invariant factors of an integer matrix, as a divisibility chain."""
    M = _as_sparse(M)
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for j, col in enumerate(M.cols):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
                cols.setdefault(j, set()).add(i)
    ones = 0
    heap = [(len(s), j) for j, s in cols.items()]
    heapq.heapify(heap)
    while heap:
        cnt, j = heapq.heappop(heap)
        s = cols.get(j)
        if s is None or len(s) != cnt:
            continue
        best_len = -1
        pi = -1
        for i in s:
            v = rows[i][j]
            if v == 1 or v == -1:
                ln = len(rows[i])
                if best_len < 0 or ln < best_len:
                    best_len, pi = ln, i
                    if ln == 1:
                        break
        if pi < 0:
            continue
        prow = rows.pop(pi)
        u = prow[j]
        touched = set()
        for i2 in s:
            if i2 == pi:
                continue
            r2 = rows[i2]
            f = r2[j] * u
            for c, pv in prow.items():
                nv = r2.get(c, 0) - f * pv
                if nv:
                    if c not in r2:
                        cols[c].add(i2)
                        touched.add(c)
                    r2[c] = nv
                elif c in r2:
                    del r2[c]
                    if c != j:
                        cols[c].discard(i2)
                        touched.add(c)
            if not r2:
                del rows[i2]
        del cols[j]
        for c in prow:
            if c != j:
                cols[c].discard(pi)
                touched.add(c)
        for c in touched:
            cs = cols.get(c)
            if cs is not None:
                if cs:
                    heapq.heappush(heap, (len(cs), c))
                else:
                    del cols[c]
        ones += 1
    rest: list[int] = []
    if rows:
        rlist = sorted(rows)
        clist = sorted({c for r in rows.values() for c in r})
        cidx = {c: k for k, c in enumerate(clist)}
        dense = []
        for r in rlist:
            row = [0] * len(clist)
            for c, v in rows[r].items():
                row[cidx[c]] = v
            dense.append(row)
        rest = _dense_diagonal(dense)
    # merging coprime entries (2, 3 -> 1, 6) keeps the count equal to the rank
    nontrivial = list(normalize_torsion(rest))
    return [1] * (ones + len(rest) - len(nontrivial)) + nontrivial


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf_with_transforms(M: list[list[int]], nrows: int, ncols: int) -> SNFResult:
    A = [row[:] for row in M]
    m, n = nrows, ncols
    U = _identity(m)
    V = _identity(n)

    def swap_rows(a: int, b: int) -> None:
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a: int, b: int) -> None:
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst: int, src: int, q: int) -> None:  # row_dst += q * row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    diag: list[int] = []
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, t)
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), t, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return SNFResult(diag, U, V)


def smith_normal_form(M: Any, transforms: bool = False) -> SNFResult:
    """Smith normal form of an integer matrix.

    Returns the nonzero diagonal entries d_1 | d_2 | ... . With
    ``transforms=True`` also returns unimodular U, V with U*M*V = D, where D
    has the diagonal in its top-left corner (dense; meant for small inputs).
    """
    if not transforms:
        return SNFResult(invariant_factors(M))
    S = _as_sparse(M)
    return _snf_with_transforms(S.to_dense(), S.nrows, S.ncols)


# ---------------------------------------------------------------------------
# chain complexes


class _Chains:
    """Cellular chains of ``total`` modulo ``sub`` (optionally augmented)."""

    def __init__(self, total: Any, sub: Any = None, reduced: bool = False):
        self.total = total
        self.sub = sub
        self.reduced = reduced and (sub is None or sub.num_cells == 0)
        self._basis: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        self._factors: dict[tuple[int, bool], list[int]] = {}

    def basis(self, d: int) -> list:
        if d not in self._basis:
            if d == -1:
                b = [()] if self.reduced else []
            elif self.sub is None or self.sub.num_cells == 0:
                b = list(self.total.cells(d))
            else:
                sub = self.sub
                b = [c for c in self.total.cells(d) if c not in sub]
            self._basis[d] = b
            self._index[d] = {c: k for k, c in enumerate(b)}
        return self._basis[d]

    def boundary_matrix(self, d: int) -> SparseMatrix:
        """Matrix of C_d -> C_{d-1}."""
        cols_b = self.basis(d)
        rows_b = self.basis(d - 1)
        ridx = self._index[d - 1]
        cols: list[dict[int, int]] = []
        if d == 0:
            for _ in cols_b:
                cols.append({0: 1} if rows_b else {})
        else:
            bd = self.total.boundary
            for c in cols_b:
                col: dict[int, int] = {}
                for f, sgn in bd(c):
                    r = ridx.get(f)
                    if r is not None:
                        col[r] = col.get(r, 0) + sgn
                cols.append({r: v for r, v in col.items() if v})
        return SparseMatrix(len(rows_b), len(cols_b), cols)

    def factors(self, d: int, transpose: bool = False) -> list[int]:
        key = (d, transpose)
        if key not in self._factors:
            lo = -1 if self.reduced else 0
            if d < lo or d > self.total.dim or not self.basis(d) or not self.basis(d - 1):
                self._factors[key] = []
            else:
                M = self.boundary_matrix(d)
                self._factors[key] = invariant_factors(M.transpose() if transpose else M)
        return self._factors[key]

    def homology(self, n: int) -> AbelianGroup:
        dimc = len(self.basis(n))
        r_n = len(self.factors(n))
        f_up = self.factors(n + 1)
        return AbelianGroup(dimc - r_n - len(f_up), tuple(f_up))

    def cohomology(self, n: int) -> AbelianGroup:
        dimc = len(self.basis(n))
        f_dn = self.factors(n, transpose=True)  # coboundary C^{n-1} -> C^n
        r_up = len(self.factors(n + 1, transpose=True))
        return AbelianGroup(dimc - len(f_dn) - r_up, tuple(f_dn))


def _chains(X: Any, sub: Any = None, reduced: bool = False) -> _Chains:
    cache = getattr(X, "_cache", None)
    if sub is None and cache is not None:
        key = ("chains", reduced)
        if key not in cache:
            cache[key] = _Chains(X, None, reduced)
        return cache[key]
    return _Chains(X, sub, reduced)


def _check_degree(n: int) -> None:
    if n < -1:
        raise NegativeDimension(f"degree {n} < -1")


def homology(X: Any, n: int) -> AbelianGroup:
    _check_degree(n)
    if n < 0:
        return AbelianGroup()
    return _chains(X).homology(n)


def cohomology(X: Any, n: int) -> AbelianGroup:
    _check_degree(n)
    if n < 0:
        return AbelianGroup()
    return _chains(X).cohomology(n)


def reduced_homology(X: Any, n: int) -> AbelianGroup:
    """Reduced homology with H~_{-1}(empty) = Z."""
    _check_degree(n)
    return _chains(X, reduced=True).homology(n)


def reduced_cohomology(X: Any, n: int) -> AbelianGroup:
    """Reduced cohomology with H~^{-1}(empty) = Z."""
    _check_degree(n)
    return _chains(X, reduced=True).cohomology(n)


def _pair(pair: Any) -> ComplexPair:
    if isinstance(pair, ComplexPair):
        return pair
    total, sub = pair
    return ComplexPair(total, sub)


def relative_homology(pair: Any, n: int) -> AbelianGroup:
    _check_degree(n)
    p = _pair(pair)
    if n < 0:
        return AbelianGroup()
    return _Chains(p.total, p.sub).homology(n)


def relative_cohomology(pair: Any, n: int) -> AbelianGroup:
    _check_degree(n)
    p = _pair(pair)
    if n < 0:
        return AbelianGroup()
    return _Chains(p.total, p.sub).cohomology(n)


def cohomology_all(X: Any, sub: Any = None, *, reduced: bool = False) -> dict[int, AbelianGroup]:
    """All nonzero cohomology groups, keyed by degree."""
    ch = _chains(X, reduced=True) if (reduced and sub is None) else _Chains(X, sub, reduced)
    lo = -1 if ch.reduced else 0
    out = {}
    for n in range(lo, X.dim + 1):
        g = ch.cohomology(n)
        if g:
            out[n] = g
    return out


def homology_all(X: Any, sub: Any = None, *, reduced: bool = False) -> dict[int, AbelianGroup]:
    ch = _chains(X, reduced=True) if (reduced and sub is None) else _Chains(X, sub, reduced)
    lo = -1 if ch.reduced else 0
    out = {}
    for n in range(lo, X.dim + 1):
        g = ch.homology(n)
        if g:
            out[n] = g
    return out


def betti_and_torsion(X: Any) -> list[AbelianGroup]:
    return [homology(X, n) for n in range(X.dim + 1)]


def is_acyclic(X: Any) -> bool:
    """True iff all reduced homology vanishes (the empty complex is not acyclic)."""
    return not homology_all(X, reduced=True)


# ---------------------------------------------------------------------------
# constructors


def barycentric_subdivision(X: SimplicialComplex) -> SimplicialComplex:
    """Order complex of the face poset of X; vertices are labelled by simplices (label tuples)."""
    faces = list(X.all_simplices())
    labels = [X.label_simplex(s) for s in faces]
    index = {s: i for i, s in enumerate(faces)}
    chains: list[tuple[int, ...]] = []

    def extend(chain: list[int], s: tuple) -> None:
        # grow the chain downward through facets
        chains.append(tuple(chain))
        if len(s) > 1:
            for f, _ in X.boundary(s):
                chain.append(index[f])
                extend(chain, f)
                chain.pop()

    for s in X.maximal_simplices():
        extend([index[s]], s)
    return SimplicialComplex(labels, chains)


def cone(X: SimplicialComplex, apex: Hashable = "*") -> SimplicialComplex:
    while apex in X._index:
        apex = (apex,)
    labels = list(X.labels) + [apex]
    a = len(labels) - 1
    simp = [(a,)] + [s + (a,) for s in X.all_simplices()]
    simp += list(X.all_simplices())
    return SimplicialComplex(labels, simp, closed=True)


def join(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    """Join with vertices relabelled (0, x) and (1, y)."""
    labels = [(0, x) for x in X.labels] + [(1, y) for y in Y.labels]
    off = len(X.labels)
    xs = [()] + list(X.all_simplices())
    ys = [()] + [tuple(v + off for v in s) for s in Y.all_simplices()]
    simp = [a + b for a in xs for b in ys if a or b]
    return SimplicialComplex(labels, simp, closed=True)


# ---------------------------------------------------------------------------
# combinatorial tests


def is_flag(X: SimplicialComplex) -> bool:
    """Every clique of the 1-skeleton spans a simplex."""
    adj = X.edges_graph()
    for s in X.all_simplices():
        common = None
        for v in s:
            common = set(adj[v]) if common is None else common & adj[v]
        for v in common or ():
            if tuple(sorted(s + (v,))) not in X:
                return False
    return True


def _mcs_order(adj: dict[int, set[int]]) -> list[int]:
    """Maximum cardinality search; the reverse of the visiting order is a PEO for chordal graphs."""
    weight = {v: 0 for v in adj}
    order = []
    unvisited = set(adj)
    while unvisited:
        v = max(unvisited, key=lambda x: (weight[x], -x))
        order.append(v)
        unvisited.remove(v)
        for w in adj[v]:
            if w in unvisited:
                weight[w] += 1
    return order


def is_chordal_graph(adj: dict[int, set[int]]) -> bool:
    order = _mcs_order(adj)
    pos = {v: i for i, v in enumerate(order)}
    # check the elimination ordering (reverse of the MCS order) is perfect
    for v in order:
        earlier = [w for w in adj[v] if pos[w] < pos[v]]
        if not earlier:
            continue
        parent = max(earlier, key=lambda w: pos[w])
        for w in earlier:
            if w != parent and w not in adj[parent]:
                return False
    return True


def is_chordal_1_skeleton(X: SimplicialComplex) -> bool:
    return is_chordal_graph(X.edges_graph())


def collapse_core(X: Any) -> set:
    """Greedy elementary collapses, highest dimension first; returns the remaining cells.

    Works on any complex whose boundary faces are cells of the complex.
    """
    cells = set()
    for d in range(X.dim + 1):
        cells.update(X.cells(d))
    dim_of = X.cell_dim
    cof: dict = {c: set() for c in cells}
    for c in cells:
        for f, _ in X.boundary(c):
            cof[f].add(c)
    heap = []
    for c, cs in cof.items():
        if len(cs) == 1:
            heapq.heappush(heap, (-dim_of(c), c))
    while heap:
        _, s = heapq.heappop(heap)
        if s not in cells or len(cof[s]) != 1:
            continue
        (t,) = cof[s]
        if cof[t]:
            continue
        cells.discard(s)
        cells.discard(t)
        for f, _ in X.boundary(t):
            if f in cells:
                cof[f].discard(t)
                if len(cof[f]) == 1:
                    heapq.heappush(heap, (-dim_of(f), f))
        for f, _ in X.boundary(s):
            if f in cells:
                cof[f].discard(s)
                if len(cof[f]) == 1:
                    heapq.heappush(heap, (-dim_of(f), f))
        cof[s] = set()
    return cells


def is_collapsible_greedy(X: Any) -> bool:
    """One-sided collapsibility test: True certifies contractibility."""
    core = collapse_core(X)
    return len(core) == 1


def kunneth_vanishing_check(L: Any, Lp: Any) -> bool:
    """Hypotheses of the top-degree Kunneth vanishing statement for L x L' and L * L'.

    With m = dim L and n = dim L': either H^m(L) = 0, or H_m(L) = 0,
    H_n(L') = 0 and the torsion of H_{m-1}(L), H_{n-1}(L') have coprime orders.
    """
    m, n = L.dim, Lp.dim
    if not cohomology(L, m):
        return True
    if homology(L, m) or homology(Lp, n):
        return False
    a = homology(L, m - 1).torsion
    b = homology(Lp, n - 1).torsion
    oa = 1
    for d in a:
        oa *= d
    ob = 1
    for d in b:
        ob *= d
    return gcd(oa, ob) == 1


def poset_product(P, Pp):
    from .poset_core import poset_product as _pp

    return _pp(P, Pp)


def poset_join(P, Pp):
    from .poset_core import poset_join as _pj

    return _pj(P, Pp)

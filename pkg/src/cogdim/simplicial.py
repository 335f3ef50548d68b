"""Finite cell complexes: abstract simplicial complexes, subcomplexes, pairs.

All complexes here expose the same small protocol used by the homology code:
``dim``, ``cells(d)``, ``boundary(cell)``, ``__contains__`` and ``num_cells``.
Boundaries are lists of ``(face, sign)`` pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Hashable, Iterable, Iterator, Sequence

from .errors import NotASubcomplex, ValidationError

Simplex = tuple  # sorted tuple of integer vertex ids


def sort_labels(labels: Iterable[Hashable]) -> list:
    labels = list(labels)
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=repr)


def jsonable(x: Any) -> Any:
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, (tuple, list)):
        return [jsonable(y) for y in x]
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(y) for y in x), key=repr)
    return str(x)


class SimplicialComplex:
    """Abstract simplicial complex with arbitrary hashable vertex labels.

    Vertices are stored as dense integers ``0..n-1`` (``labels[i]`` is the
    label of vertex ``i``); simplices are sorted integer tuples. The empty
    complex (no simplices at all) is allowed.
    """

    __slots__ = ("labels", "_index", "_simplices", "_by_dim", "_cache")

    def __init__(self, labels: Sequence[Hashable], simplices: Iterable[Simplex], *, closed: bool = False):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValidationError("duplicate vertex labels")
        faces: set = set()
        if closed:
            faces = set(simplices)
        else:
            for s in simplices:
                s = tuple(sorted(s))
                if s in faces:
                    continue
                for k in range(1, len(s) + 1):
                    faces.update(combinations(s, k))
        self._simplices = frozenset(faces)
        top = max((len(s) for s in faces), default=0)
        by_dim: list[list] = [[] for _ in range(top)]
        for s in faces:
            by_dim[len(s) - 1].append(s)
        for lst in by_dim:
            lst.sort()
        self._by_dim = by_dim
        self._cache: dict = {}

    # construction -------------------------------------------------------

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[Hashable]], vertices: Iterable[Hashable] = ()) -> "SimplicialComplex":
        simplices = [tuple(s) for s in simplices]
        labels = set(vertices)
        for s in simplices:
            labels.update(s)
        labels = sort_labels(labels)
        index = {lab: i for i, lab in enumerate(labels)}
        ids = [tuple(sorted(index[v] for v in s)) for s in simplices if len(s)]
        ids += [(index[v],) for v in vertices]
        return cls(labels, ids)

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls((), ())

    @classmethod
    def simplex(cls, vertices: Iterable[Hashable]) -> "SimplicialComplex":
        return cls.from_simplices([tuple(vertices)])

    @classmethod
    def from_json(cls, doc: dict) -> "SimplicialComplex":
        if "simplices" not in doc:
            raise ValidationError("complex document needs a 'simplices' field")
        simp = []
        for s in doc["simplices"]:
            simp.append(tuple(tuple(v) if isinstance(v, list) else v for v in s))
        return cls.from_simplices(simp)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "simplices": [[jsonable(v) for v in self.label_simplex(s)] for s in self.maximal_simplices()],
        }

    # protocol -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def cells(self, d: int) -> list:
        if 0 <= d < len(self._by_dim):
            return self._by_dim[d]
        return []

    simplices = cells

    @staticmethod
    def cell_dim(s: Simplex) -> int:
        return len(s) - 1

    def boundary(self, s: Simplex) -> list:
        if len(s) <= 1:
            return []
        return [(s[:i] + s[i + 1:], -1 if i % 2 else 1) for i in range(len(s))]

    def __contains__(self, s: object) -> bool:
        return s in self._simplices

    @property
    def num_cells(self) -> int:
        return len(self._simplices)

    def __len__(self) -> int:
        return len(self._simplices)

    def all_simplices(self) -> Iterator[Simplex]:
        for lst in self._by_dim:
            yield from lst

    def is_empty(self) -> bool:
        return not self._simplices

    # queries ----------------------------------------------------------------

    def vertex_id(self, label: Hashable) -> int:
        return self._index[label]

    def label_simplex(self, s: Simplex) -> tuple:
        return tuple(self.labels[v] for v in s)

    def id_simplex(self, labels: Iterable[Hashable]) -> Simplex:
        return tuple(sorted(self._index[v] for v in labels))

    def has_simplex(self, labels: Iterable[Hashable]) -> bool:
        try:
            return self.id_simplex(labels) in self._simplices
        except KeyError:
            return False

    def vertices(self) -> list:
        return [self.labels[s[0]] for s in self.cells(0)]

    def f_vector(self) -> list[int]:
        return [len(lst) for lst in self._by_dim]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(lst) for d, lst in enumerate(self._by_dim))

    def maximal_simplices(self) -> list[Simplex]:
        covered = set()
        for s in self._simplices:
            if len(s) > 1:
                for i in range(len(s)):
                    covered.add(s[:i] + s[i + 1:])
        return sorted((s for s in self._simplices if s not in covered), key=lambda s: (len(s), s))

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex(self.labels, [s for s in self._simplices if len(s) <= k + 1], closed=True)

    def edges_graph(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {s[0]: set() for s in self.cells(0)}
        for a, b in self.cells(1):
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def link(self, labels: Iterable[Hashable]) -> "SimplicialComplex":
        """Link of a simplex given by labels; the link of the empty simplex is the complex itself."""
        sig = set(self.id_simplex(labels))
        if sig and tuple(sorted(sig)) not in self._simplices:
            raise ValidationError("simplex not in complex")
        if not sig:
            return self
        out = []
        for s in self._simplices:
            if sig.issubset(s) and len(s) > len(sig):
                out.append(tuple(v for v in s if v not in sig))
        return SimplicialComplex(self.labels, out, closed=True).compact()

    def compact(self) -> "SimplicialComplex":
        """Drop unused vertex labels (renumbering vertices)."""
        used = sorted({v for s in self.cells(0) for v in s})
        if len(used) == len(self.labels):
            return self
        new = {v: i for i, v in enumerate(used)}
        return SimplicialComplex(
            [self.labels[v] for v in used],
            [tuple(new[v] for v in s) for s in self._simplices],
            closed=True,
        )

    def subcomplex(self, simplices: Iterable[Simplex], *, check: bool = True) -> "SimplicialComplex":
        simplices = set(simplices)
        if check:
            for s in simplices:
                if s not in self._simplices:
                    raise NotASubcomplex(f"{self.label_simplex(s)} not a simplex")
                if len(s) > 1:
                    for f, _ in self.boundary(s):
                        if f not in simplices:
                            raise NotASubcomplex("family not closed under faces")
        return SimplicialComplex(self.labels, simplices, closed=True)

    def relabel(self, mapping) -> "SimplicialComplex":
        return SimplicialComplex.from_simplices(
            [tuple(mapping(v) for v in self.label_simplex(s)) for s in self.maximal_simplices()]
        )

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector()})"


class CellSubcomplex:
    """A subfamily of cells of a parent complex closed under taking faces."""

    __slots__ = ("parent", "_cells", "_by_dim", "_cache")

    def __init__(self, parent: Any, cells: Iterable, *, check: bool = False):
        self.parent = parent
        self._cells = frozenset(cells)
        if check:
            for c in self._cells:
                if c not in parent:
                    raise NotASubcomplex(f"{c!r} not a cell of parent")
                for f, _ in parent.boundary(c):
                    if f not in self._cells:
                        raise NotASubcomplex("family not closed under faces")
        by_dim: list[list] = []
        for c in self._cells:
            d = parent.cell_dim(c)
            while len(by_dim) <= d:
                by_dim.append([])
            by_dim[d].append(c)
        for lst in by_dim:
            lst.sort()
        self._by_dim = by_dim
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def cells(self, d: int) -> list:
        if 0 <= d < len(self._by_dim):
            return self._by_dim[d]
        return []

    def boundary(self, c) -> list:
        return self.parent.boundary(c)

    def cell_dim(self, c) -> int:
        return self.parent.cell_dim(c)

    def __contains__(self, c: object) -> bool:
        return c in self._cells

    @property
    def num_cells(self) -> int:
        return len(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def is_empty(self) -> bool:
        return not self._cells

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(lst) for d, lst in enumerate(self._by_dim))


class CubicalCone:
    """Cubical structure on the cone over a simplicial complex ``base``.

    Cells are intervals ``(tau, rho)`` with ``tau`` a subset of ``rho`` and
    ``rho`` a simplex of ``base`` or the empty simplex. The cell is the cube
    spanned by all sets between ``tau`` and ``rho``; its dimension is
    ``|rho| - |tau|``. The cell ``((), ())`` is the cone point.
    """

    def __init__(self, base: SimplicialComplex):
        self.base = base
        rhos = [()] + list(base.all_simplices())
        by_dim: list[list] = [[] for _ in range(base.dim + 2)]
        for rho in rhos:
            for k in range(len(rho) + 1):
                for tau in combinations(rho, k):
                    by_dim[len(rho) - k].append((tau, rho))
        for lst in by_dim:
            lst.sort(key=lambda c: (len(c[1]), c[1], c[0]))
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

    def boundary(self, c) -> list:
        tau, rho = c
        tset = set(tau)
        free = [v for v in rho if v not in tset]
        out = []
        for i, v in enumerate(free):
            sign = -1 if i % 2 else 1
            out.append(((tuple(sorted(tset | {v})), rho), sign))
            out.append(((tau, tuple(w for w in rho if w != v)), -sign))
        return out

    @staticmethod
    def cell_dim(c) -> int:
        return len(c[1]) - len(c[0])

    def faces(self, c) -> list:
        """All faces of a cell (including itself)."""
        tau, rho = c
        free = [v for v in rho if v not in set(tau)]
        out = []
        # each free coordinate is 0 (drop from rho), 1 (add to tau) or free
        def rec(i, t, r):
            if i == len(free):
                out.append((tuple(sorted(t)), tuple(sorted(r))))
                return
            v = free[i]
            rec(i + 1, t, r)
            rec(i + 1, t + [v], r)
            rec(i + 1, t, [w for w in r if w != v])
        rec(0, list(tau), list(rho))
        return out

    def __contains__(self, c: object) -> bool:
        return c in self._cells

    @property
    def num_cells(self) -> int:
        return len(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(lst) for d, lst in enumerate(self._by_dim))


@dataclass(frozen=True)
class ComplexPair:
    """A complex together with a subcomplex (given as cells of the same parent space)."""

    total: Any
    sub: Any

    def __post_init__(self) -> None:
        t, s = self.total, self.sub
        if isinstance(t, SimplicialComplex) and isinstance(s, SimplicialComplex) and t.labels != s.labels:
            # align on labels
            for simp in s.all_simplices():
                if not t.has_simplex(s.label_simplex(simp)):
                    raise NotASubcomplex("sub is not a subcomplex of total")
            aligned = SimplicialComplex(t.labels, [t.id_simplex(s.label_simplex(x)) for x in s.all_simplices()], closed=True)
            object.__setattr__(self, "sub", aligned)
            return
        for d in range(s.dim + 1):
            for c in s.cells(d):
                if c not in t:
                    raise NotASubcomplex("sub is not a subcomplex of total")

"""Finite posets, order complexes and the realizations K_J, K_{>J}, K_Omega, K_{>Omega}.

Order relations are stored as transitive closures in integer bitsets:
``up[i]`` has bit ``j`` set iff ``i <= j``.

A poset may carry a *model*: an identification with the face poset of a
regular cell complex. Realizations of up-sets can then be read off as
subcomplexes of that cell complex instead of order complexes; the two are
homeomorphic (the order complex is the barycentric subdivision), and the
model path is much smaller. See ``FaceModel`` and ``LinkModel``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from .errors import CycleError, DuplicateIdError, EmptyOmega, UnknownElement, ValidationError
from .simplicial import CellSubcomplex, ComplexPair, SimplicialComplex, jsonable


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def id_key(x: Hashable) -> str:
    return x if isinstance(x, str) else repr(x)


class Poset:
    """Finite poset on opaque hashable ids; dense integer indices internally."""

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int], *, upper_covers: Sequence[Sequence[int]] | None = None, model: Any = None):
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise DuplicateIdError("duplicate element ids")
        self._up = list(up)
        self._down: list[int] | None = None
        self._ucov = [list(c) for c in upper_covers] if upper_covers is not None else None
        self._height: list[int] | None = None
        self.model = model

    # construction -------------------------------------------------------

    @classmethod
    def from_relations(cls, elements: Iterable[Hashable], relations: Iterable[tuple[Hashable, Hashable]]) -> "Poset":
        """Reflexive-transitive closure of a relation; raises CycleError if not antisymmetric."""
        elements = list(elements)
        index: dict = {}
        for e in elements:
            if e in index:
                raise DuplicateIdError(f"duplicate element id {e!r}")
            index[e] = len(index)
        n = len(elements)
        succ: list[set[int]] = [set() for _ in range(n)]
        for a, b in relations:
            if a not in index:
                raise UnknownElement(a)
            if b not in index:
                raise UnknownElement(b)
            if a != b:
                succ[index[a]].add(index[b])
        order = _toposort(succ)
        up = [0] * n
        for i in reversed(order):
            m = 1 << i
            for j in succ[i]:
                m |= up[j]
            up[i] = m
        return cls(elements, up)

    @classmethod
    def from_covers(cls, elements: Sequence[Hashable], upper_covers: Sequence[Sequence[int]], *, model: Any = None, check: bool = True) -> "Poset":
        """Build from upper-cover lists given on indices (trusted to be a Hasse diagram if check=False)."""
        n = len(elements)
        succ = [set(c) for c in upper_covers]
        order = _toposort(succ)
        up = [0] * n
        for i in reversed(order):
            m = 1 << i
            for j in succ[i]:
                m |= up[j]
            up[i] = m
        P = cls(elements, up, upper_covers=None if check else upper_covers, model=model)
        return P

    @classmethod
    def chain(cls, elements: Sequence[Hashable]) -> "Poset":
        return cls.from_relations(elements, zip(elements, elements[1:]))

    @classmethod
    def antichain(cls, elements: Sequence[Hashable]) -> "Poset":
        return cls.from_relations(elements, [])

    @classmethod
    def from_json(cls, doc: dict) -> "Poset":
        if "elements" not in doc:
            raise ValidationError("poset document needs 'elements'")
        els = [_hashable(e) for e in doc["elements"]]
        rels = [(_hashable(a), _hashable(b)) for a, b in doc.get("relations", [])]
        return cls.from_relations(els, rels)

    def to_json(self) -> dict:
        rels = []
        for i in range(len(self)):
            for j in self.upper_covers_idx(i):
                rels.append([jsonable(self.elements[i]), jsonable(self.elements[j])])
        return {"format": 1, "elements": [jsonable(e) for e in self.elements], "relations": rels}

    # basic queries ------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e: object) -> bool:
        return e in self._index

    def index(self, e: Hashable) -> int:
        try:
            return self._index[e]
        except (KeyError, TypeError):
            raise UnknownElement(e) from None

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return bool(self._up[self.index(a)] >> self.index(b) & 1)

    def lt(self, a: Hashable, b: Hashable) -> bool:
        return a != b and self.leq(a, b)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self._up[i] >> j & 1)

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def strict_up_mask(self, i: int) -> int:
        return self._up[i] & ~(1 << i)

    def down_mask(self, i: int) -> int:
        if self._down is None:
            down = [0] * len(self)
            for a in range(len(self)):
                for b in iter_bits(self._up[a]):
                    down[b] |= 1 << a
            self._down = down
        return self._down[i]

    def ids(self, mask: int) -> list:
        return [self.elements[i] for i in iter_bits(mask)]

    def mask_of(self, ids: Iterable[Hashable]) -> int:
        m = 0
        for e in ids:
            m |= 1 << self.index(e)
        return m

    def up(self, J: Hashable) -> list:
        return self.ids(self._up[self.index(J)])

    def strict_up(self, J: Hashable) -> list:
        return self.ids(self.strict_up_mask(self.index(J)))

    def down(self, J: Hashable) -> list:
        return self.ids(self.down_mask(self.index(J)))

    def upper_covers_idx(self, i: int) -> list[int]:
        if self._ucov is None:
            ucov = []
            for a in range(len(self)):
                strict = self.strict_up_mask(a)
                above = 0
                for b in iter_bits(strict):
                    above |= self.strict_up_mask(b)
                ucov.append(list(iter_bits(strict & ~above)))
            self._ucov = ucov
        return self._ucov[i]

    def upper_covers(self, J: Hashable) -> list:
        return [self.elements[j] for j in self.upper_covers_idx(self.index(J))]

    def cover_pairs_idx(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(len(self)) for j in self.upper_covers_idx(i)]

    def maximal(self) -> list:
        return [e for i, e in enumerate(self.elements) if self._up[i] == 1 << i]

    def minimal(self) -> list:
        return [e for i, e in enumerate(self.elements) if self.down_mask(i) == 1 << i]

    def height_idx(self, i: int) -> int:
        """Length of the longest chain from i to a maximal element."""
        if self._height is None:
            h = [0] * len(self)
            for a in self.linear_extension_idx()[::-1]:
                h[a] = max((h[b] + 1 for b in self.upper_covers_idx(a)), default=0)
            self._height = h
        return self._height[i]

    def height(self, J: Hashable) -> int:
        return self.height_idx(self.index(J))

    def linear_extension_idx(self) -> list[int]:
        return _toposort([set(self.upper_covers_idx(i)) for i in range(len(self))])

    def rank(self) -> int:
        """Length of the longest chain (number of elements minus one); -1 when empty."""
        if not len(self):
            return -1
        return max(self.height_idx(i) for i in range(len(self)))

    def is_chain(self, ids: Iterable[Hashable]) -> bool:
        idx = [self.index(e) for e in ids]
        return all(self.leq_idx(a, b) or self.leq_idx(b, a) for k, a in enumerate(idx) for b in idx[k + 1:])

    def chains_idx(self, mask: int | None = None) -> Iterator[tuple[int, ...]]:
        """All nonempty chains inside the subset ``mask`` (increasing order)."""
        if mask is None:
            mask = (1 << len(self)) - 1
        stack: list[tuple[tuple[int, ...], int]] = [((i,), self.strict_up_mask(i) & mask) for i in iter_bits(mask)]
        while stack:
            chain, ext = stack.pop()
            yield chain
            for j in iter_bits(ext):
                stack.append((chain + (j,), ext & self.strict_up_mask(j)))

    def subposet(self, ids: Iterable[Hashable]) -> "Poset":
        idx = sorted(self.index(e) for e in ids)
        pos = {old: new for new, old in enumerate(idx)}
        sel = 0
        for i in idx:
            sel |= 1 << i
        up = []
        for i in idx:
            m = 0
            for j in iter_bits(self._up[i] & sel):
                m |= 1 << pos[j]
            up.append(m)
        return Poset([self.elements[i] for i in idx], up)

    def dual(self) -> "Poset":
        n = len(self)
        return Poset(self.elements, [self.down_mask(i) for i in range(n)])

    def relabel(self, f: Callable[[Hashable], Hashable]) -> "Poset":
        return Poset([f(e) for e in self.elements], self._up, upper_covers=self._ucov, model=self.model)

    def is_isomorphism(self, other: "Poset", mapping: dict) -> bool:
        """Check that ``mapping`` (ids of self -> ids of other) is an order isomorphism."""
        if len(mapping) != len(self) or len(set(mapping.values())) != len(other) or len(self) != len(other):
            return False
        for a in self.elements:
            if a not in mapping or mapping[a] not in other:
                return False
        for a in self.elements:
            for b in self.elements:
                if self.leq(a, b) != other.leq(mapping[a], mapping[b]):
                    return False
        return True

    def __repr__(self) -> str:
        return f"Poset(n={len(self)})"


def _hashable(x: Any) -> Hashable:
    if isinstance(x, list):
        return tuple(_hashable(y) for y in x)
    return x


def _toposort(succ: Sequence[set[int]]) -> list[int]:
    n = len(succ)
    indeg = [0] * n
    for i in range(n):
        for j in succ[i]:
            indeg[j] += 1
    queue = deque(i for i in range(n) if indeg[i] == 0)
    order = []
    while queue:
        i = queue.popleft()
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    if len(order) != n:
        raise CycleError("relation is not antisymmetric (cycle in closure)")
    return order


def validate_poset(raw: Any) -> Poset:
    """Accept a JSON poset document, a (elements, relations) pair, or a Poset."""
    if isinstance(raw, Poset):
        return raw
    if isinstance(raw, dict):
        return Poset.from_json(raw)
    elements, relations = raw
    return Poset.from_relations(elements, relations)


# ---------------------------------------------------------------------------
# models


class FaceModel:
    """Q is the face poset of the cell complex ``space`` under reverse inclusion.

    ``cell_of[i]`` is the cell of element ``i``. Up-sets of Q are exactly the
    subcomplexes of ``space``.
    """

    def __init__(self, space: Any, cell_of: Sequence[Any]):
        self.space = space
        self.cell_of = list(cell_of)

    def subcomplex(self, mask: int) -> CellSubcomplex:
        cell_of = self.cell_of
        return CellSubcomplex(self.space, (cell_of[i] for i in iter_bits(mask)))


class LinkModel:
    """Q is the spherical poset of a simplicial complex L: simplices and the empty simplex, by inclusion.

    ``simplex_of[i]`` is the label tuple of element ``i``. The realization of
    Q_{>J} is homeomorphic to the link of J in L (the link of the empty
    simplex is L).
    """

    def __init__(self, L: SimplicialComplex, simplex_of: Sequence[tuple]):
        self.L = L
        self.simplex_of = list(simplex_of)

    def strict_upper(self, i: int) -> SimplicialComplex:
        return self.L.link(self.simplex_of[i])


# ---------------------------------------------------------------------------
# realizations


def order_complex(Q: Poset, mask: int | None = None) -> SimplicialComplex:
    """Order complex of Q (or of the subposet given by ``mask``); vertices labelled by element ids."""
    if mask is None:
        mask = (1 << len(Q)) - 1
    return SimplicialComplex(Q.elements, Q.chains_idx(mask), closed=True)


def _check(Q: Poset, J: Hashable) -> int:
    return Q.index(J)


def upper_set_realization(Q: Poset, J: Hashable) -> SimplicialComplex:
    """K_J = |Q_{>=J}|, always a cone with apex J."""
    return order_complex(Q, Q.up_mask(_check(Q, J)))


def strict_upper_realization(Q: Poset, J: Hashable) -> SimplicialComplex:
    """K_{>J} = |Q_{>J}|, possibly empty."""
    return order_complex(Q, Q.strict_up_mask(_check(Q, J)))


def omega_masks(Q: Poset, omega: Iterable[Hashable], strictly_bigger: Callable[[Hashable, Hashable], bool]) -> tuple[int, int]:
    omega = list(omega)
    if not omega:
        raise EmptyOmega("Omega must be nonempty")
    total = 0
    strict = 0
    for U in omega:
        u = Q.index(U)
        m = Q.up_mask(u)
        total |= m
        for v in iter_bits(m):
            if not strict >> v & 1 and strictly_bigger(Q.elements[v], U):
                strict |= 1 << v
    return total, strict


def omega_realizations(Q: Poset, omega: Iterable[Hashable], strictly_bigger: Callable[[Hashable, Hashable], bool]) -> ComplexPair:
    """(K_Omega, K_{>Omega}) as order complexes."""
    total, strict = omega_masks(Q, omega, strictly_bigger)
    return ComplexPair(order_complex(Q, total), order_complex(Q, strict))


def realize_upset(Q: Poset, mask: int) -> Any:
    """|Q_mask| for an up-closed mask, using the face model when there is one."""
    if isinstance(Q.model, FaceModel):
        return Q.model.subcomplex(mask)
    return order_complex(Q, mask)


def realize_pair(Q: Poset, total: int, sub: int) -> ComplexPair:
    if isinstance(Q.model, FaceModel):
        return ComplexPair(Q.model.subcomplex(total), Q.model.subcomplex(sub))
    return ComplexPair(order_complex(Q, total), order_complex(Q, sub))


def realize_strict_upper(Q: Poset, i: int) -> Any:
    """A complex homeomorphic to K_{>J} for J = elements[i]."""
    if isinstance(Q.model, FaceModel):
        return Q.model.subcomplex(Q.strict_up_mask(i))
    if isinstance(Q.model, LinkModel):
        return Q.model.strict_upper(i)
    return order_complex(Q, Q.strict_up_mask(i))


def without_model(Q: Poset) -> Poset:
    return Poset(Q.elements, Q._up, upper_covers=Q._ucov)


# ---------------------------------------------------------------------------
# products and joins of face posets


def poset_product(P: Poset, Pp: Poset) -> Poset:
    """Componentwise order on pairs."""
    els = [(a, b) for a in P.elements for b in Pp.elements]
    n2 = len(Pp)
    covers = []
    for i in range(len(P)):
        for j in range(n2):
            c = [i2 * n2 + j for i2 in P.upper_covers_idx(i)] + [i * n2 + j2 for j2 in Pp.upper_covers_idx(j)]
            covers.append(c)
    return Poset.from_covers(els, covers, check=False)


BOTTOM = "_"


def poset_join(P: Poset, Pp: Poset) -> Poset:
    """(P + bottom) x (P' + bottom) minus (bottom, bottom), componentwise."""
    a = _with_bottom(P)
    b = _with_bottom(Pp)
    prod = poset_product(a, b)
    keep = [e for e in prod.elements if e != (BOTTOM, BOTTOM)]
    return prod.subposet(keep)


def _with_bottom(P: Poset) -> Poset:
    els = [BOTTOM] + list(P.elements)
    covers = [[1 + i for i in range(len(P)) if P.down_mask(i) == 1 << i]]
    covers += [[1 + j for j in P.upper_covers_idx(i)] for i in range(len(P))]
    return Poset.from_covers(els, covers, check=False)


def face_poset(X: SimplicialComplex, *, reverse: bool = False, with_empty: bool = False) -> Poset:
    """Face poset of a simplicial complex, ids = label tuples (sorted by vertex id)."""
    simp = list(X.all_simplices())
    if with_empty:
        simp = [()] + simp
    idx = {s: i for i, s in enumerate(simp)}
    covers: list[list[int]] = [[] for _ in simp]
    for s in simp:
        if len(s) == 0:
            continue
        faces = [f for f, _ in X.boundary(s)] if len(s) > 1 else ([()] if with_empty else [])
        for f in faces:
            if reverse:
                covers[idx[s]].append(idx[f])
            else:
                covers[idx[f]].append(idx[s])
    els = [X.label_simplex(s) for s in simp]
    return Poset.from_covers(els, covers, check=False)


@dataclass(frozen=True)
class ElementSubset:
    poset: Poset
    members: frozenset

    def __post_init__(self) -> None:
        for m in self.members:
            if m not in self.poset:
                raise UnknownElement(m)

"""Local group backends: concrete finite groups with subgroups, and order labels."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence

from .errors import DifferentParent, GroupError, InfiniteBackend, RigidityUnknown, SizeGuardError
from .simplicial import jsonable

MAX_GROUP_ORDER = 10_000
INFINITE = float("inf")


class ConcreteFiniteGroup:
    """A finite group given by its multiplication table on elements ``0..n-1``."""

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[Hashable] | None = None, *, check: bool = True, name: str = ""):
        n = len(table)
        if n == 0:
            raise GroupError("a group has at least one element")
        if n > MAX_GROUP_ORDER:
            raise SizeGuardError(f"group order {n} exceeds guard {MAX_GROUP_ORDER}")
        self.table = [list(r) for r in table]
        self.names = list(names) if names is not None else list(range(n))
        if len(self.names) != n:
            raise GroupError("names and table sizes differ")
        self._name_index = {x: i for i, x in enumerate(self.names)}
        self.name = name
        ident = None
        for e in range(n):
            if all(self.table[e][x] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise GroupError("no identity element")
        self.identity = ident
        self._inv = [0] * n
        for a in range(n):
            row = self.table[a]
            if len(row) != n:
                raise GroupError("table not square")
            try:
                self._inv[a] = row.index(ident)
            except ValueError:
                raise GroupError(f"element {a} has no inverse") from None
        if check:
            self._check_axioms()

    def _check_axioms(self) -> None:
        n = self.order
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise GroupError("table rows are not permutations")
        for x in range(n):
            if self.table[x][self.identity] != x:
                raise GroupError("identity is not two-sided")
        if n <= 48:
            triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(20000))
        t = self.table
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError("multiplication is not associative")

    # constructors ------------------------------------------------------------

    @classmethod
    def from_closure(cls, generators: Sequence[Hashable], mul: Callable[[Any, Any], Any], identity: Hashable, *, name: str = "") -> "ConcreteFiniteGroup":
        """Complete a generating set under multiplication (BFS) and tabulate."""
        elements = [identity]
        index = {identity: 0}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in generators:
                y = mul(x, g)
                if y not in index:
                    if len(elements) >= MAX_GROUP_ORDER:
                        raise SizeGuardError("group order exceeds guard")
                    index[y] = len(elements)
                    elements.append(y)
                    queue.append(y)
        table = [[index[mul(a, b)] for b in elements] for a in elements]
        return cls(table, elements, check=False, name=name)

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[int]], degree: int | None = None, *, name: str = "") -> "ConcreteFiniteGroup":
        """Permutations given as image lists; element names are image tuples.

        The product is composition, (a*b)(i) = a(b(i)), so the action on points is a left action.
        """
        gens = [tuple(g) for g in generators]
        if degree is None:
            degree = len(gens[0]) if gens else 0
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise GroupError(f"not a permutation of degree {degree}: {g}")
        ident = tuple(range(degree))
        return cls.from_closure(gens, lambda a, b: tuple(a[b[i]] for i in range(degree)), ident, name=name)

    @classmethod
    def trivial(cls) -> "ConcreteFiniteGroup":
        return cls([[0]], [()], name="1")

    @classmethod
    def cyclic(cls, n: int) -> "ConcreteFiniteGroup":
        return cls([[(a + b) % n for b in range(n)] for a in range(n)], list(range(n)), check=False, name=f"Z/{n}")

    @classmethod
    def dihedral(cls, k: int) -> "ConcreteFiniteGroup":
        """Dihedral group of order 2k; element (i, f) acts on Z/2k by x -> (-1)^f x + 2i.

        s = (0, 1) and t = (1, 1) are reflections, st = (-1, 0) a rotation of order k.
        """
        if k < 1:
            raise GroupError("k >= 1 required")

        def mul(a, b):  # composition a o b
            i, f = a
            j, g = b
            return ((i + (j if f == 0 else -j)) % k, (f + g) % 2)

        return cls.from_closure([(0, 1), (1, 1)], mul, (0, 0), name=f"D_{k}")

    @classmethod
    def elementary_abelian(cls, n: int) -> "ConcreteFiniteGroup":
        N = 1 << n
        return cls([[a ^ b for b in range(N)] for a in range(N)], [tuple((a >> i) & 1 for i in range(n)) for a in range(N)], check=False, name=f"(Z/2)^{n}")

    @classmethod
    def direct_product(cls, G: "ConcreteFiniteGroup", H: "ConcreteFiniteGroup") -> "ConcreteFiniteGroup":
        m = H.order
        if G.order * m > MAX_GROUP_ORDER:
            raise SizeGuardError("direct product exceeds group order guard")
        table = []
        for a in range(G.order):
            for b in range(m):
                table.append([G.table[a][c] * m + H.table[b][d] for c in range(G.order) for d in range(m)])
        names = [(x, y) for x in G.names for y in H.names]
        return cls(table, names, check=False, name=f"{G.name}x{H.name}")

    # queries -------------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, a: int, g: int) -> int:
        """g^{-1} a g."""
        return self.table[self.table[self._inv[g]][a]][g]

    def element(self, name: Hashable) -> int:
        try:
            return self._name_index[name]
        except (KeyError, TypeError):
            raise GroupError(f"unknown group element {name!r}") from None

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def subgroup(self, members: Iterable[int]) -> "SubgroupHandle":
        return SubgroupHandle(self, frozenset(members))

    def generate(self, gens: Iterable[int]) -> "SubgroupHandle":
        """Subgroup generated by ``gens`` (closure fixpoint)."""
        gens = list(gens)
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return SubgroupHandle(self, frozenset(seen), check=False)

    def whole(self) -> "SubgroupHandle":
        return SubgroupHandle(self, frozenset(self.elements()), check=False)

    def trivial_subgroup(self) -> "SubgroupHandle":
        return SubgroupHandle(self, frozenset([self.identity]), check=False)

    def to_json(self) -> dict:
        return {"table": self.table, "names": [jsonable(x) for x in self.names]}

    @classmethod
    def from_json(cls, doc: dict) -> "ConcreteFiniteGroup":
        if "table" in doc:
            names = doc.get("names")
            if names is not None:
                names = [_deep_tuple(x) for x in names]
            return cls(doc["table"], names)
        if "permutation_generators" in doc:
            degree = int(doc["degree"])
            gens = [_perm_from_cycles(c, degree) for c in doc["permutation_generators"]]
            return cls.from_permutations(gens, degree)
        raise GroupError("group document needs 'table' or 'permutation_generators'")

    def parse_element(self, ref: Any) -> int:
        """Element reference from JSON: table index, permutation image list, or {'cycles': ...}."""
        if isinstance(ref, dict) and "cycles" in ref:
            degree = len(self.names[0])
            return self.element(_perm_from_cycles(ref["cycles"], degree))
        if isinstance(ref, list):
            return self.element(_deep_tuple(ref))
        if isinstance(ref, int) and not isinstance(ref, bool) and 0 <= ref < self.order:
            return ref
        return self.element(ref)

    def __repr__(self) -> str:
        return f"ConcreteFiniteGroup({self.name or 'order ' + str(self.order)})"


def _deep_tuple(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_deep_tuple(y) for y in x)
    return x


def _perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            if not (0 <= a < degree and 0 <= b < degree):
                raise GroupError("cycle entry out of range")
            img[a] = b
    if sorted(img) != list(range(degree)):
        raise GroupError("cycles do not define a permutation")
    return tuple(img)


class SubgroupHandle:
    """A subgroup of a concrete finite group, as a set of element ids."""

    __slots__ = ("parent", "members")

    def __init__(self, parent: ConcreteFiniteGroup, members: frozenset, *, check: bool = True):
        self.parent = parent
        self.members = frozenset(members)
        if check:
            G = parent
            if G.identity not in self.members:
                raise GroupError("subgroup must contain the identity")
            for a in self.members:
                if G.inv(a) not in self.members:
                    raise GroupError("subgroup not closed under inverses")
                for b in self.members:
                    if G.mul(a, b) not in self.members:
                        raise GroupError("subgroup not closed under products")

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, a: object) -> bool:
        return a in self.members

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupHandle) and other.parent is self.parent and other.members == self.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __le__(self, other: "SubgroupHandle") -> bool:
        return subgroup_leq(self, other)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def __repr__(self) -> str:
        return f"SubgroupHandle(order={self.order})"


@dataclass(frozen=True)
class OrderLabel:
    """Abstract local group: identity tag plus order (``INFINITE`` allowed)."""

    tag: Hashable
    order: float | int

    def __post_init__(self) -> None:
        if not (self.order == INFINITE or (isinstance(self.order, int) and self.order >= 1)):
            raise GroupError(f"invalid order {self.order!r}")

    @property
    def finite(self) -> bool:
        return self.order != INFINITE

    def to_json(self) -> dict:
        return {"tag": jsonable(self.tag), "order": "INFINITE" if self.order == INFINITE else self.order}


def _same_parent(H: SubgroupHandle, P: SubgroupHandle) -> None:
    if H.parent is not P.parent:
        raise DifferentParent("subgroups live in different groups")


def subgroup_equal(H: SubgroupHandle, P: SubgroupHandle) -> bool:
    _same_parent(H, P)
    return H.members == P.members


def subgroup_leq(H: SubgroupHandle, P: SubgroupHandle) -> bool:
    _same_parent(H, P)
    return H.members <= P.members


def subgroup_index(H: SubgroupHandle, P: SubgroupHandle) -> int:
    if not subgroup_leq(H, P):
        raise GroupError("H is not contained in P")
    return P.order // H.order


def conjugate_subgroup(P: SubgroupHandle, g: int) -> SubgroupHandle:
    """g^{-1} P g."""
    G = P.parent
    return SubgroupHandle(G, frozenset(G.conj(a, g) for a in P.members), check=False)


def left_coset(P: SubgroupHandle, g: int) -> frozenset:
    G = P.parent
    return frozenset(G.mul(p, g) for p in P.members)


def transporter_coset_reps(G: Any, P: Any, targets: Iterable[Any]) -> list[int]:
    """Representatives of {g : g^{-1} P g in targets} modulo left multiplication by P."""
    if not isinstance(G, ConcreteFiniteGroup) or not isinstance(P, SubgroupHandle):
        raise InfiniteBackend("transporter sets need the concrete backend")
    target_sets = set()
    for T in targets:
        if not isinstance(T, SubgroupHandle):
            raise InfiniteBackend("transporter sets need the concrete backend")
        _same_parent(P, T)
        target_sets.add(T.members)
    reps = []
    seen: set[int] = set()
    for g in G.elements():
        if g in seen:
            continue
        if conjugate_subgroup(P, g).members in target_sets:
            reps.append(g)
            seen.update(left_coset(P, g))
    return reps


def rigidity_check(G: Any, family: Iterable[Any]) -> bool:
    """No conjugate of a member is properly contained in it."""
    family = list(family)
    if all(isinstance(P, OrderLabel) for P in family):
        if all(P.finite for P in family):
            return True
        raise RigidityUnknown("infinite local groups: rigidity cannot be decided from order labels")
    if not isinstance(G, ConcreteFiniteGroup):
        raise InfiniteBackend("rigidity check needs the concrete backend")
    for P in family:
        for g in G.elements():
            C = conjugate_subgroup(P, g).members
            if C < P.members:
                return False
    return True

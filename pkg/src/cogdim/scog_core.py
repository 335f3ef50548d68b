"""Simple complexes of groups over a finite poset: validation, blocks and thinning.

Three backends are supported:

``subgroup``  every local group is a ``SubgroupHandle`` of one ambient finite
              group; structure maps are inclusions and the ambient group with
              the identity map plays the role of the simple morphism.
``explicit``  local groups are separate ``ConcreteFiniteGroup`` objects with
              explicit monomorphisms along covering relations, optionally with
              a ``SimpleMorphism`` into a finite group.
``order``     local groups are ``OrderLabel`` objects (tag + order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping, Sequence

from .errors import (
    IncompatibleComposition,
    InfiniteBackend,
    MissingMap,
    NonInjectiveMap,
    UnknownIsoStatus,
    ValidationError,
)
from .group_backends import (
    INFINITE,
    ConcreteFiniteGroup,
    OrderLabel,
    SubgroupHandle,
    conjugate_subgroup,
    transporter_coset_reps,
)
from .poset_core import Poset, id_key
from .simplicial import jsonable


@dataclass
class SimpleMorphism:
    """psi: G(Q) -> G, given per element as an image list for each local group element."""

    target: ConcreteFiniteGroup
    maps: dict[int, list[int]]  # poset index -> images of local group elements

    def image(self, i: int) -> SubgroupHandle:
        return SubgroupHandle(self.target, frozenset(self.maps[i]), check=False)


class SimpleComplexOfGroups:
    def __init__(
        self,
        poset: Poset,
        local_groups: Sequence[Any],
        *,
        backend: str,
        ambient: ConcreteFiniteGroup | None = None,
        maps: Mapping[tuple[int, int], Sequence[int]] | None = None,
        morphism: SimpleMorphism | None = None,
        iso_flags: Mapping[tuple[int, int], bool] | None = None,
        metadata: dict | None = None,
        validate: bool = True,
    ):
        if backend not in ("subgroup", "explicit", "order"):
            raise ValidationError(f"unknown backend {backend!r}")
        if len(local_groups) != len(poset):
            raise ValidationError("one local group per poset element required")
        self.poset = poset
        self.local = list(local_groups)
        self.backend = backend
        self.ambient = ambient
        self.maps = dict(maps or {})
        self.morphism = morphism
        self.iso_flags = dict(iso_flags or {})
        self.metadata = dict(metadata or {})
        self._blocks: BlockPartition | None = None
        self._iso_reach: list[int] | None = None
        if validate:
            self._validate()

    # ------------------------------------------------------------------ validation

    def _validate(self) -> None:
        Q = self.poset
        covers = Q.cover_pairs_idx()
        if self.backend == "subgroup":
            G = self.ambient
            if G is None:
                G = self.local[0].parent if self.local else None
                self.ambient = G
            for P in self.local:
                if not isinstance(P, SubgroupHandle) or P.parent is not G:
                    raise ValidationError("subgroup backend needs subgroups of one ambient group")
            for i, j in covers:
                if not self.local[i].members <= self.local[j].members:
                    raise MissingMap(f"no inclusion {Q.elements[i]!r} -> {Q.elements[j]!r}: P_J is not contained in P_T")
        elif self.backend == "order":
            for P in self.local:
                if not isinstance(P, OrderLabel):
                    raise ValidationError("order backend needs OrderLabel local groups")
            for i, j in covers:
                a, b = self.local[i].order, self.local[j].order
                if a > b:
                    raise NonInjectiveMap(f"order decreases along {Q.elements[i]!r} <= {Q.elements[j]!r}")
        else:
            self._validate_explicit(covers)

    def _validate_explicit(self, covers: list[tuple[int, int]]) -> None:
        Q = self.poset
        for P in self.local:
            if not isinstance(P, ConcreteFiniteGroup):
                raise ValidationError("explicit backend needs ConcreteFiniteGroup local groups")
        for i, j in covers:
            if (i, j) not in self.maps:
                raise MissingMap(f"missing structure map {Q.elements[i]!r} -> {Q.elements[j]!r}")
            _check_mono(self.local[i], self.local[j], self.maps[(i, j)], f"{Q.elements[i]!r} -> {Q.elements[j]!r}")
        # composites: phi[J][T] for all J <= T, checked against every cover path
        self._composites: dict[tuple[int, int], tuple[int, ...]] = {}
        order = Q.linear_extension_idx()
        for J in order:
            comp = {J: tuple(range(self.local[J].order))}
            up = Q.up_mask(J)
            for T in order:
                if not up >> T & 1 or T not in comp:
                    continue
                for U in Q.upper_covers_idx(T):
                    phi = self.maps[(T, U)]
                    cand = tuple(phi[x] for x in comp[T])
                    if U in comp and comp[U] != cand:
                        raise IncompatibleComposition(
                            f"composites from {Q.elements[J]!r} to {Q.elements[U]!r} disagree"
                        )
                    comp[U] = cand
            for T, m in comp.items():
                self._composites[(J, T)] = m
        if self.morphism is not None:
            psi = self.morphism
            G = psi.target
            for i, P in enumerate(self.local):
                if i not in psi.maps:
                    raise MissingMap(f"morphism undefined on {Q.elements[i]!r}")
                _check_mono(P, G, psi.maps[i], f"psi at {Q.elements[i]!r}", error=NonInjectiveMap)
            for i, j in covers:
                phi = self.maps[(i, j)]
                if any(psi.maps[j][phi[x]] != psi.maps[i][x] for x in range(self.local[i].order)):
                    raise IncompatibleComposition(f"psi not compatible along {Q.elements[i]!r} -> {Q.elements[j]!r}")

    # ------------------------------------------------------------------ queries

    def __len__(self) -> int:
        return len(self.poset)

    def index(self, J: Hashable) -> int:
        return self.poset.index(J)

    def group(self, J: Hashable) -> Any:
        return self.local[self.poset.index(J)]

    def order_of(self, i: int) -> float | int:
        P = self.local[i]
        return P.order

    def structure_map(self, J: Hashable, T: Hashable) -> tuple[int, ...]:
        """phi_{TJ} as an image tuple (explicit backend)."""
        if self.backend != "explicit":
            raise ValidationError("structure maps are explicit only in the explicit backend")
        i, j = self.index(J), self.index(T)
        if (i, j) not in self._composites:
            raise MissingMap("J is not below T")
        return self._composites[(i, j)]

    def all_finite(self) -> bool:
        return all(self.order_of(i) != INFINITE for i in range(len(self)))

    def is_iso_cover(self, i: int, j: int) -> bool:
        """Is the structure map along the cover i < j an isomorphism?"""
        a, b = self.order_of(i), self.order_of(j)
        if a != INFINITE and b != INFINITE:
            return a == b
        if a != INFINITE or b != INFINITE:
            return False
        flag = self.iso_flags.get((i, j))
        if flag is None:
            Q = self.poset
            raise UnknownIsoStatus(f"iso status of {Q.elements[i]!r} -> {Q.elements[j]!r} unknown (infinite orders, no flag)")
        return bool(flag)

    def iso_reach(self, i: int) -> int:
        """Mask of elements reachable from i by upward iso covers (including i)."""
        if self._iso_reach is None:
            Q = self.poset
            reach = [0] * len(Q)
            for a in Q.linear_extension_idx()[::-1]:
                m = 1 << a
                for b in Q.upper_covers_idx(a):
                    if self.is_iso_cover(a, b):
                        m |= reach[b]
                reach[a] = m
            self._iso_reach = reach
        return self._iso_reach[i]

    def strictly_bigger_idx(self, v: int, u: int) -> bool:
        """For v >= u: is P_u -> P_v not surjective?"""
        a, b = self.order_of(u), self.order_of(v)
        if a != INFINITE and b != INFINITE:
            return b > a
        return not (self.iso_reach(u) >> v & 1)

    def blocks(self) -> "BlockPartition":
        if self._blocks is None:
            self._blocks = compute_blocks(self)
        return self._blocks

    def subgroup_images(self, psi: SimpleMorphism | None = None) -> tuple[ConcreteFiniteGroup, list[SubgroupHandle]]:
        """The target group and the images psi(P_J) of all local groups."""
        if psi is None:
            if self.backend == "subgroup":
                return self.ambient, list(self.local)
            psi = self.morphism
        if psi is None:
            raise InfiniteBackend("needs the concrete backend with a simple morphism")
        return psi.target, [psi.image(i) for i in range(len(self))]

    def to_subgroup_backend(self, psi: SimpleMorphism | None = None) -> "SimpleComplexOfGroups":
        G, images = self.subgroup_images(psi)
        return SimpleComplexOfGroups(self.poset, images, backend="subgroup", ambient=G, metadata=self.metadata)

    def to_order_backend(self) -> "SimpleComplexOfGroups":
        if self.backend == "order":
            return self
        if self.backend == "subgroup":
            labels = [OrderLabel(tuple(P.sorted_members()), P.order) for P in self.local]
        else:
            labels = [OrderLabel(("local", id_key(self.poset.elements[i])), P.order) for i, P in enumerate(self.local)]
        return SimpleComplexOfGroups(self.poset, labels, backend="order", metadata=self.metadata)

    # ------------------------------------------------------------------ JSON

    def to_json(self) -> dict:
        Q = self.poset
        doc: dict = {"format": 1, "poset": Q.to_json()}
        keys = [jsonable(e) for e in Q.elements]

        def k(i: int) -> str:
            return keys[i] if isinstance(keys[i], str) else _key_str(keys[i])

        if self.backend == "subgroup":
            doc["backend"] = "concrete"
            doc["ambient_group"] = self.ambient.to_json()
            doc["local_groups"] = {k(i): {"elements": P.sorted_members()} for i, P in enumerate(self.local)}
        elif self.backend == "order":
            doc["backend"] = "order"
            doc["local_groups"] = {k(i): P.to_json() for i, P in enumerate(self.local)}
            if self.iso_flags:
                doc["iso_flags"] = [[k(i), k(j), bool(v)] for (i, j), v in sorted(self.iso_flags.items())]
        else:
            doc["backend"] = "concrete"
            doc["local_groups"] = {k(i): {"group": P.to_json()} for i, P in enumerate(self.local)}
            doc["maps"] = [{"from": k(i), "to": k(j), "images": list(m)} for (i, j), m in sorted(self.maps.items())]
            if self.morphism is not None:
                doc["ambient_group"] = self.morphism.target.to_json()
                doc["morphism"] = {k(i): list(m) for i, m in sorted(self.morphism.maps.items())}
        if self.metadata:
            doc["metadata"] = jsonable_meta(self.metadata)
        return doc


def jsonable_meta(meta: dict) -> dict:
    return {str(k): jsonable(v) if not isinstance(v, dict) else jsonable_meta(v) for k, v in meta.items()}


def _key_str(x: Any) -> str:
    import json

    return json.dumps(x, separators=(",", ":"))


def _check_mono(P: ConcreteFiniteGroup, T: ConcreteFiniteGroup, images: Sequence[int], what: str, error: type = NonInjectiveMap) -> None:
    if len(images) != P.order:
        raise MissingMap(f"{what}: map must list one image per element")
    if any(not (0 <= y < T.order) for y in images):
        raise ValidationError(f"{what}: image out of range")
    for a in range(P.order):
        for b in range(P.order):
            if images[P.mul(a, b)] != T.mul(images[a], images[b]):
                raise ValidationError(f"{what}: not a homomorphism")
    if len(set(images)) != len(images):
        raise error(f"{what}: not injective")


# ---------------------------------------------------------------------- validation from data


def validate_scog(data: Any) -> SimpleComplexOfGroups:
    """Build and validate a scog from a JSON document (or return a scog unchanged)."""
    if isinstance(data, SimpleComplexOfGroups):
        data._validate()
        return data
    return scog_from_json(data)


def _elem_key(Q: Poset) -> dict:
    out = {}
    for i, e in enumerate(Q.elements):
        j = jsonable(e)
        out[j if isinstance(j, str) else _key_str(j)] = i
    return out


def scog_from_json(doc: dict) -> SimpleComplexOfGroups:
    if "poset" not in doc or "local_groups" not in doc:
        raise ValidationError("scog document needs 'poset' and 'local_groups'")
    Q = Poset.from_json(doc["poset"])
    key = _elem_key(Q)
    lg = doc["local_groups"]
    missing = [k for k in key if k not in lg]
    if missing:
        raise MissingMap(f"no local group for {missing[0]!r}")
    idx_groups = {key[k]: v for k, v in lg.items() if k in key}
    backend = doc.get("backend", "concrete")
    meta = doc.get("metadata", {})
    if backend == "order":
        labels = []
        for i in range(len(Q)):
            g = idx_groups[i]
            order = g["order"]
            order = INFINITE if order in ("INFINITE", "inf", None) else int(order)
            labels.append(OrderLabel(_freeze(g.get("tag", id_key(Q.elements[i]))), order))
        flags = {}
        for a, b, v in doc.get("iso_flags", []):
            flags[(key[_k(a)], key[_k(b)])] = bool(v)
        return SimpleComplexOfGroups(Q, labels, backend="order", iso_flags=flags, metadata=meta)
    if backend != "concrete":
        raise ValidationError(f"unknown backend {backend!r}")
    explicit = any("group" in idx_groups[i] for i in range(len(Q)))
    if not explicit:
        if "ambient_group" not in doc:
            raise ValidationError("concrete subgroup backend needs 'ambient_group'")
        G = ConcreteFiniteGroup.from_json(doc["ambient_group"])
        subs = []
        for i in range(len(Q)):
            g = idx_groups[i]
            if "elements" in g:
                subs.append(G.subgroup(G.parse_element(x) for x in g["elements"]))
            elif "generators" in g:
                subs.append(G.generate(G.parse_element(x) for x in g["generators"]))
            else:
                raise ValidationError("subgroup needs 'elements' or 'generators'")
        return SimpleComplexOfGroups(Q, subs, backend="subgroup", ambient=G, metadata=meta)
    groups = [ConcreteFiniteGroup.from_json(idx_groups[i]["group"]) for i in range(len(Q))]
    maps = {}
    for m in doc.get("maps", []):
        maps[(key[_k(m["from"])], key[_k(m["to"])])] = [int(x) for x in m["images"]]
    psi = None
    if "morphism" in doc:
        if "ambient_group" not in doc:
            raise ValidationError("morphism needs 'ambient_group'")
        G = ConcreteFiniteGroup.from_json(doc["ambient_group"])
        psi = SimpleMorphism(G, {key[_k(k)]: [G.parse_element(x) for x in v] for k, v in doc["morphism"].items()})
    return SimpleComplexOfGroups(Q, groups, backend="explicit", maps=maps, morphism=psi, metadata=meta)


def _k(x: Any) -> str:
    return x if isinstance(x, str) else _key_str(x)


def _freeze(x: Any) -> Any:
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


# ---------------------------------------------------------------------- thinness and blocks


def is_thin(scog: SimpleComplexOfGroups) -> bool:
    return not any(scog.is_iso_cover(i, j) for i, j in scog.poset.cover_pairs_idx())


def strictly_bigger_predicate(scog: SimpleComplexOfGroups) -> Callable[[Hashable, Hashable], bool]:
    Q = scog.poset

    def pred(V: Hashable, U: Hashable) -> bool:
        return scog.strictly_bigger_idx(Q.index(V), Q.index(U))

    return pred


@dataclass
class BlockPartition:
    blocks: list[list[int]]  # sorted lists of poset indices
    block_of: list[int]  # poset index -> block number
    block_poset: Poset  # elements = representative ids
    representatives: list[int]  # block number -> representative poset index
    source: Poset = field(repr=False, default=None)

    def projection(self, J: Hashable) -> Hashable:
        Q = self.source
        return self.block_poset.elements[self.block_of[Q.index(J)]]

    def block_ids(self, b: int) -> list:
        return [self.source.elements[i] for i in self.blocks[b]]

    def block_mask(self, b: int) -> int:
        m = 0
        for i in self.blocks[b]:
            m |= 1 << i
        return m


def _components(n: int, edges: list[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(x) for x in range(n)]


def compute_blocks(scog: SimpleComplexOfGroups) -> BlockPartition:
    """Blocks = components of the graph of iso covers; R ordered by existence of comparable members."""
    Q = scog.poset
    n = len(Q)
    covers = Q.cover_pairs_idx()
    iso_edges = [(i, j) for i, j in covers if scog.is_iso_cover(i, j)]
    root = _components(n, iso_edges)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(root[i], []).append(i)
    # representative = least element id
    members = [sorted(g) for g in groups.values()]
    reps = [min(g, key=lambda i: id_key(Q.elements[i])) for g in members]
    order = sorted(range(len(members)), key=lambda b: id_key(Q.elements[reps[b]]))
    members = [members[b] for b in order]
    reps = [reps[b] for b in order]
    block_of = [0] * n
    for b, g in enumerate(members):
        for i in g:
            block_of[i] = b
    rel = set()
    for i, j in covers:
        bi, bj = block_of[i], block_of[j]
        if bi != bj:
            rel.add((bi, bj))
    R_ids = [Q.elements[r] for r in reps]
    R = Poset.from_relations(R_ids, [(R_ids[a], R_ids[b]) for a, b in sorted(rel)])
    return BlockPartition(members, block_of, R, reps, Q)


def thinning(scog: SimpleComplexOfGroups) -> SimpleComplexOfGroups:
    """The thin scog G(R) over the block poset."""
    if scog.backend == "explicit":
        scog = scog.to_subgroup_backend()
    bp = scog.blocks()
    local = [scog.local[r] for r in bp.representatives]
    meta = dict(scog.metadata)
    meta["thinned_from"] = len(scog.poset)
    if scog.backend == "subgroup":
        return SimpleComplexOfGroups(bp.block_poset, local, backend="subgroup", ambient=scog.ambient, metadata=meta)
    flags = {}
    R = bp.block_poset
    for i, j in R.cover_pairs_idx():
        if scog.order_of(bp.representatives[i]) == INFINITE and scog.order_of(bp.representatives[j]) == INFINITE:
            flags[(i, j)] = False
    return SimpleComplexOfGroups(R, local, backend="order", iso_flags=flags, metadata=meta)


def omega_sets(scog: SimpleComplexOfGroups, psi: SimpleMorphism | None, J: Hashable) -> dict[int, tuple[list[int], list[list[int]]]]:
    """Map each g in I_J to (Omega^g_J, blocks within Omega^g_J), all as poset indices."""
    G, images = scog.subgroup_images(psi)
    Q = scog.poset
    j = Q.index(J)
    PJ = images[j]
    reps = transporter_coset_reps(G, PJ, images)
    by_members: dict[frozenset, list[int]] = {}
    for u, S in enumerate(images):
        by_members.setdefault(S.members, []).append(u)
    out = {}
    for g in reps:
        target = conjugate_subgroup(PJ, g).members
        omega = sorted(by_members[target])
        inside = set(omega)
        edges = [(a, b) for a in omega for b in Q.upper_covers_idx(a) if b in inside]
        pos = {u: k for k, u in enumerate(omega)}
        root = _components(len(omega), [(pos[a], pos[b]) for a, b in edges])
        comp: dict[int, list[int]] = {}
        for k, u in enumerate(omega):
            comp.setdefault(root[k], []).append(u)
        blocks = sorted(comp.values())
        out[g] = (omega, blocks)
    return out


def subdivide_scog(scog: SimpleComplexOfGroups) -> SimpleComplexOfGroups:
    """Scog of the barycentrically subdivided action: chains of Q by reverse inclusion, P_chain = P_min."""
    Q = scog.poset
    chains = sorted(Q.chains_idx(), key=lambda c: (len(c), c))
    index = {c: k for k, c in enumerate(chains)}
    covers: list[list[int]] = [[] for _ in chains]
    for c in chains:
        if len(c) > 1:
            for t in range(len(c)):
                covers[index[c]].append(index[c[:t] + c[t + 1:]])
    ids = [tuple(Q.elements[i] for i in c) for c in chains]
    P = Poset.from_covers(ids, covers, check=False)
    local = [scog.local[c[0]] for c in chains]  # chains are increasing, so c[0] is the minimum
    meta = dict(scog.metadata)
    meta["subdivided"] = True
    if scog.backend == "explicit":
        return subdivide_scog(scog.to_subgroup_backend())
    return SimpleComplexOfGroups(P, local, backend=scog.backend, ambient=scog.ambient, metadata=meta)


def simply_isomorphic(A: SimpleComplexOfGroups, B: SimpleComplexOfGroups, mapping: Mapping[Hashable, Hashable]) -> bool:
    """Order isomorphism via ``mapping`` with equal local groups (subgroup equality or order-label equality)."""
    if not A.poset.is_isomorphism(B.poset, dict(mapping)):
        return False
    for J in A.poset.elements:
        a, b = A.group(J), B.group(mapping[J])
        if isinstance(a, SubgroupHandle) and isinstance(b, SubgroupHandle):
            if a.members != b.members:
                return False
        elif isinstance(a, OrderLabel) and isinstance(b, OrderLabel):
            if a != b:
                return False
        elif getattr(a, "order", None) != getattr(b, "order", None):
            return False
    return True

"""Finite groups given by full multiplication tables.

Elements are positional indices ``0..order-1``. Morphisms and actions are
total index arrays, which keeps serialization bit-exact and equality trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Sequence

from .errors import InvariantError


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    labels: tuple[str, ...] | None = None
    name: str = ""

    @classmethod
    def from_table(cls, table, identity: int | None = None, labels=None,
                   name: str = "", validate: bool = True) -> "FiniteGroup":
        table = tuple(tuple(int(v) for v in row) for row in table)
        if identity is None:
            identity = next((i for i, row in enumerate(table)
                             if row == tuple(range(len(table)))), 0)
        g = cls(table, identity, tuple(labels) if labels else None, name)
        if validate:
            g.validate()
        return g

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def __iter__(self):
        return iter(range(len(self.table)))

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table \
            and self.identity == other.identity

    def __hash__(self) -> int:
        return hash((self.table, self.identity))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order'}={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def prod(self, elems: Iterable[int]) -> int:
        out = self.identity
        for e in elems:
            out = self.table[out][e]
        return out

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        inv = [-1] * self.order
        for a, row in enumerate(self.table):
            for b, v in enumerate(row):
                if v == e:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out, base = self.identity, a
        while k:
            if k & 1:
                out = self.table[out][base]
            base = self.table[base][base]
            k >>= 1
        return out

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.table[self.table[g][x]][self.inv(g)]

    def commutator(self, x: int, y: int) -> int:
        t = self.table
        return t[t[t[x][y]][self.inv(x)]][self.inv(y)]

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != self.identity:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def exponent(self) -> int:
        from math import lcm
        return lcm(*self.element_orders) if self.order else 1

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            cls = sorted({self.conj(g, x) for g in range(self.order)})
            seen.update(cls)
            classes.append(tuple(cls))
        return tuple(classes)

    @cached_property
    def class_index(self) -> tuple[int, ...]:
        idx = [0] * self.order
        for i, cls in enumerate(self.conjugacy_classes):
            for x in cls:
                idx[x] = i
        return tuple(idx)

    def validate(self) -> None:
        n = self.order
        if n == 0:
            raise InvariantError("group must be nonempty")
        rng = set(range(n))
        for a, row in enumerate(self.table):
            if len(row) != n or set(row) != rng:
                raise InvariantError("table row is not a permutation", witness={"row": a})
        e = self.identity
        if self.table[e] != tuple(range(n)) or any(self.table[a][e] != a for a in range(n)):
            raise InvariantError("identity row/column is not the identity permutation",
                                 witness={"identity": e})
        t = self.table
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise InvariantError("table is not associative", witness={"triple": [a, b, c]})
        if self.labels is not None and len(self.labels) != n:
            raise InvariantError("labels length does not match order")

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def to_dict(self) -> dict:
        out: dict = {"order": self.order, "table": [list(r) for r in self.table]}
        if self.identity != 0:
            out["identity"] = self.identity
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteGroup":
        table = data["table"]
        if "order" in data and data["order"] != len(table):
            raise InvariantError("declared order does not match table size",
                                 witness={"order": data["order"], "rows": len(table)})
        return cls.from_table(table, data.get("identity"), data.get("labels"),
                              data.get("name", ""))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subset of ``parent`` closed under multiplication, kept sorted."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_normal(self) -> bool:
        G = self.parent
        return all(G.conj(g, x) in self._set for g in G for x in self.elements)

    def as_group(self) -> tuple[FiniteGroup, "GroupMorphism"]:
        """The subgroup as a standalone group plus its inclusion."""
        pos = {x: i for i, x in enumerate(self.elements)}
        G = self.parent
        table = [[pos[G.mul(a, b)] for b in self.elements] for a in self.elements]
        labels = [G.label(x) for x in self.elements] if G.labels else None
        H = FiniteGroup.from_table(table, pos[G.identity], labels, validate=False)
        return H, GroupMorphism(H, G, self.elements)


@dataclass(frozen=True, eq=False)
class GroupMorphism:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def validate(self) -> None:
        S, T = self.source, self.target
        if len(self.images) != S.order:
            raise InvariantError("morphism must have one image per source element")
        for x, y in product(range(S.order), repeat=2):
            if self.images[S.mul(x, y)] != T.mul(self.images[x], self.images[y]):
                raise InvariantError("images do not respect multiplication",
                                     witness={"pair": [x, y]})

    def kernel(self) -> Subgroup:
        e = self.target.identity
        return Subgroup(self.source, tuple(x for x in self.source if self.images[x] == e))

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.images))))

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order


@dataclass(frozen=True, eq=False)
class GroupAction:
    """An action of ``actor`` on the finite group ``space`` by automorphisms.

    ``maps[g]`` is the permutation of ``space`` elements induced by ``g``.
    """

    actor: FiniteGroup
    space: FiniteGroup
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(tuple(int(v) for v in m) for m in self.maps))

    def __call__(self, g: int, x: int) -> int:
        return self.maps[g][x]

    @classmethod
    def trivial(cls, actor: FiniteGroup, space: FiniteGroup) -> "GroupAction":
        return cls(actor, space, tuple(tuple(range(space.order)) for _ in range(actor.order)))

    def validate(self) -> None:
        A, X = self.actor, self.space
        if len(self.maps) != A.order:
            raise InvariantError("action needs one map per actor element")
        for g, m in enumerate(self.maps):
            if sorted(m) != list(range(X.order)):
                raise InvariantError("action map is not a bijection", witness={"actor": g})
            for x, y in product(range(X.order), repeat=2):
                if m[X.mul(x, y)] != X.mul(m[x], m[y]):
                    raise InvariantError("action map is not an automorphism",
                                         witness={"actor": g, "pair": [x, y]})
        if self.maps[A.identity] != tuple(range(X.order)):
            raise InvariantError("identity does not act trivially")
        for g, h in product(range(A.order), repeat=2):
            gh = self.maps[A.mul(g, h)]
            mg, mh = self.maps[g], self.maps[h]
            if any(gh[x] != mg[mh[x]] for x in range(X.order)):
                raise InvariantError("action is not a homomorphism", witness={"pair": [g, h]})

    def is_trivial_at(self, g: int) -> bool:
        return self.maps[g] == tuple(range(self.space.order))


# --- operations --------------------------------------------------------------

def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens`` (closure iteration)."""
    gens = sorted(set(int(g) for g in gens))
    found = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.mul(x, s)
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(found)))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    comms = {G.commutator(x, y) for x in G for y in G}
    return generated_subgroup(G, comms)


def conjugacy_test(G: FiniteGroup, x: int, y: int) -> bool:
    return G.class_index[x] == G.class_index[y]


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupMorphism]:
    """G/N for normal N, cosets ordered by their smallest element."""
    coset_of = [-1] * G.order
    reps = []
    for x in G:
        if coset_of[x] >= 0:
            continue
        idx = len(reps)
        reps.append(x)
        for n in N.elements:
            coset_of[G.mul(x, n)] = idx
    table = [[coset_of[G.mul(a, b)] for b in reps] for a in reps]
    Q = FiniteGroup.from_table(table, coset_of[G.identity], validate=False)
    return Q, GroupMorphism(G, Q, tuple(coset_of))


def abelianization(G: FiniteGroup):
    """G/D(G) as an FGAbelianModule in invariant-factor form plus the projection.

    Returns ``(module, projection)`` where ``projection[x]`` is the coordinate
    vector of the image of ``x``.
    """
    from .abmod import AbelianProjection, FGAbelianModule
    from .linalg import subquotient

    D = derived_subgroup(G)
    Q, pi = quotient(G, D)
    # Z^Q / relations e_a + e_b - e_ab and e_1, then read coordinates
    n = Q.order
    rel = []
    for a in range(n):
        for b in range(a, n):
            col = [0] * n
            col[a] += 1
            col[b] += 1
            col[Q.mul(a, b)] -= 1
            rel.append(col)
    e = [0] * n
    e[Q.identity] = 1
    rel.append(e)
    R = [[c[i] for c in rel] for i in range(n)]
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    sq = subquotient(ident, R, n)
    module = FGAbelianModule(tuple(sq.invariants))
    images = []
    for x in G:
        unit = [0] * n
        unit[pi(x)] = 1
        images.append(tuple(sq.coords(unit)))
    return module, AbelianProjection(G, module, tuple(images))


def extension_from_cocycle(Q: FiniteGroup, A, z):
    """Group extension 1 -> A -> E -> Q -> 1 defined by a normalized 2-cocycle.

    ``A`` is a finite FGAbelianModule with a ``Q``-action and ``z`` a
    Cocycle2 on ``Q`` valued in ``A``. The element ``(a, q)`` has index
    ``index(a) * |Q| + q`` and multiplies as
    ``(a1, q1)(a2, q2) = (a1 + q1.a2 + z(q1, q2), q1 q2)``.
    Returns ``(E, inclusion, projection)``.
    """
    from .cohom import check_cocycle2, normalize_cocycle2

    if A.actor is not None and A.actor.order != Q.order:
        raise InvariantError("module actor does not match the quotient group")
    witness = check_cocycle2(z)
    if witness is not None:
        raise InvariantError("z fails the 2-cocycle identity", witness={"triple": list(witness)})
    z = normalize_cocycle2(z)
    elems = A.elements()
    index = {a: i for i, a in enumerate(elems)}
    nq = Q.order
    n = len(elems) * nq
    table = [[0] * n for _ in range(n)]
    for i1, a1 in enumerate(elems):
        for q1 in range(nq):
            row = table[i1 * nq + q1]
            for i2, a2 in enumerate(elems):
                moved = A.act(q1, a2)
                for q2 in range(nq):
                    a = A.add(A.add(a1, moved), z.values[q1][q2])
                    row[i2 * nq + q2] = index[a] * nq + Q.mul(q1, q2)
    zero = index[A.zero]
    E = FiniteGroup.from_table(table, zero * nq + Q.identity, validate=False)
    inclusion = tuple(index[a] * nq + Q.identity for a in elems)
    projection = tuple(x % nq for x in range(n))
    return E, inclusion, GroupMorphism(E, Q, projection)


# --- standard groups ---------------------------------------------------------

def from_permutations(gens: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Group generated by permutations (tuples), elements sorted lexicographically."""
    gens = [tuple(g) for g in gens]
    if not gens:
        return cyclic(1)
    deg = len(gens[0])
    e = tuple(range(deg))
    found = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = tuple(x[s[i]] for i in range(deg))
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    elems = sorted(found)
    pos = {p: i for i, p in enumerate(elems)}
    # (p*q)(i) = p(q(i))
    table = [[pos[tuple(p[q[i]] for i in range(deg))] for q in elems] for p in elems]
    labels = ["[" + " ".join(map(str, p)) + "]" for p in elems]
    return FiniteGroup.from_table(table, pos[e], labels=labels, name=name, validate=False)


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup.from_table([[(a + b) % n for b in range(n)] for a in range(n)], 0,
                                  name=f"Z{n}", validate=False)


def symmetric(n: int) -> FiniteGroup:
    return from_permutations(list(permutations(range(n))), name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0
    return from_permutations([p for p in permutations(range(n)) if even(p)], name=f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], name=f"D{n}")


def quaternion() -> FiniteGroup:
    # regular representation on {±1, ±i, ±j, ±k}, encoded (sign, unit)
    units = ["1", "i", "j", "k"]
    mult = {("1", u): (1, u) for u in units}
    mult.update({(u, "1"): (1, u) for u in units})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in units]
    pos = {x: i for i, x in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = mult[(u1, u2)]
            row.append(pos[(s * s1 * s2, u)])
        table.append(row)
    labels = [("" if s > 0 else "-") + u for s, u in elems]
    return FiniteGroup.from_table(table, 0, labels, name="Q8", validate=False)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """(g, h) has index g * |H| + h."""
    nh = H.order
    table = [[G.mul(a // nh, b // nh) * nh + H.mul(a % nh, b % nh)
              for b in range(G.order * nh)] for a in range(G.order * nh)]
    return FiniteGroup.from_table(table, G.identity * nh + H.identity,
                                  name=f"{G.name}x{H.name}", validate=False)


def semidirect_product(N: FiniteGroup, K: FiniteGroup, action: GroupAction) -> FiniteGroup:
    """N ⋊ K with (n1, k1)(n2, k2) = (n1 · k1(n2), k1 k2); (n, k) has index k * |N| + n."""
    nn = N.order
    size = nn * K.order
    table = [[0] * size for _ in range(size)]
    for k1 in range(K.order):
        for n1 in range(nn):
            row = table[k1 * nn + n1]
            for k2 in range(K.order):
                k = K.mul(k1, k2) * nn
                m = action.maps[k1]
                for n2 in range(nn):
                    row[k2 * nn + n2] = k + N.mul(n1, m[n2])
    return FiniteGroup.from_table(table, K.identity * nn + N.identity, validate=False)


def automorphism_from_images(G: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> tuple[int, ...]:
    """Extend an assignment on generators to an endomorphism table; raises if inconsistent."""
    m = {G.identity: G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in zip(gens, images):
                y = G.mul(x, s)
                v = G.mul(m[x], t)
                if y in m:
                    if m[y] != v:
                        raise InvariantError("generator images do not define a homomorphism",
                                             witness={"element": y})
                else:
                    m[y] = v
                    nxt.append(y)
        frontier = nxt
    if len(m) != G.order:
        raise InvariantError("generators do not generate the group")
    return tuple(m[x] for x in range(G.order))


def inner_action(actor: FiniteGroup, G: FiniteGroup, hom: Sequence[int]) -> GroupAction:
    """Action of ``actor`` on ``G`` by conjugation through ``hom: actor -> G``."""
    maps = [tuple(G.conj(hom[s], x) for x in G) for s in actor]
    return GroupAction(actor, G, tuple(maps))


def cyclic_action(actor: FiniteGroup, generator: int, G: FiniteGroup,
                  automorphism: Sequence[int]) -> GroupAction:
    """Action of a cyclic ``actor`` sending ``generator`` to ``automorphism``."""
    maps: dict[int, tuple[int, ...]] = {actor.identity: tuple(range(G.order))}
    x, cur = actor.identity, tuple(range(G.order))
    for _ in range(actor.order):
        x = actor.mul(x, generator)
        cur = tuple(automorphism[cur[i]] for i in range(G.order))
        if x in maps and maps[x] != cur:
            raise InvariantError("automorphism order does not divide the generator order")
        maps[x] = cur
    if len(maps) != actor.order:
        raise InvariantError("actor is not cyclic on the given generator")
    return GroupAction(actor, G, tuple(maps[g] for g in actor))

"""Finitely generated abelian groups with a finite group acting, Galois
contexts with a cyclotomic character, and (1/h)Z/Z-valued pairings.

A module is presented as ``Z^k / diag(orders)``: generator ``i`` has order
``orders[i]`` (0 for a free generator). Elements are integer tuples reduced
coordinate-wise. The action of actor element ``g`` is an integer matrix
acting on column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd
from typing import Sequence

from .errors import InvariantError
from .groups import FiniteGroup, GroupMorphism
from .linalg import (Matrix, Subquotient, identity, invariant_factors, lcm,
                     matvec, subquotient, smith_solve)

Vec = tuple[int, ...]

__all__ = [
    "FGAbelianModule", "GaloisContext", "EvalPairing", "ModuleMorphism",
    "AbelianProjection", "dual_module", "coinvariants_and_fixed", "smith_solve",
]


def _reduce(orders: Sequence[int], v) -> Vec:
    return tuple((x % d) if d else x for x, d in zip(v, orders))


@dataclass(frozen=True, eq=False)
class FGAbelianModule:
    orders: tuple[int, ...]
    actor: FiniteGroup | None = None
    action: tuple[Matrix, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        if self.actor is not None and self.action is None:
            k = len(self.orders)
            object.__setattr__(self, "action", tuple(identity(k) for _ in self.actor))
        if self.action is not None:
            object.__setattr__(self, "action", tuple(
                [[int(v) for v in row] for row in A] for A in self.action))

    def __repr__(self) -> str:
        return f"FGAbelianModule(orders={self.orders})"

    @classmethod
    def trivial(cls, orders: Sequence[int], actor: FiniteGroup) -> "FGAbelianModule":
        return cls(tuple(orders), actor)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in invariant_factors(self.orders) if d)

    @property
    def invariants(self) -> tuple[int, ...]:
        return invariant_factors(self.orders)

    @property
    def is_finite(self) -> bool:
        return all(self.orders)

    @property
    def order(self) -> int:
        out = 1
        for d in self.orders:
            if d == 0:
                return 0
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    @property
    def zero(self) -> Vec:
        return (0,) * len(self.orders)

    def reduce(self, v) -> Vec:
        return _reduce(self.orders, v)

    def add(self, a, b) -> Vec:
        return _reduce(self.orders, [x + y for x, y in zip(a, b)])

    def sub(self, a, b) -> Vec:
        return _reduce(self.orders, [x - y for x, y in zip(a, b)])

    def neg(self, a) -> Vec:
        return _reduce(self.orders, [-x for x in a])

    def scale(self, k: int, a) -> Vec:
        return _reduce(self.orders, [k * x for x in a])

    def gen(self, i: int) -> Vec:
        return tuple(int(i == j) for j in range(self.ngens))

    def matrix(self, g: int) -> Matrix:
        if self.action is None:
            return identity(self.ngens)
        return self.action[g]

    def act(self, g: int, v) -> Vec:
        if self.action is None:
            return tuple(v)
        return _reduce(self.orders, matvec(self.action[g], v))

    def elements(self) -> list[Vec]:
        if not self.is_finite:
            raise InvariantError("module is infinite", witness={"orders": list(self.orders)})
        return [tuple(v) for v in product(*[range(d) for d in self.orders])]

    @cached_property
    def element_index(self) -> dict[Vec, int]:
        return {v: i for i, v in enumerate(self.elements())}

    def as_subquotient(self) -> Subquotient:
        k = self.ngens
        rel = [[self.orders[j] if i == j else 0 for j in range(k) if self.orders[j]]
               for i in range(k)]
        return subquotient(identity(k), rel, k)

    def relation_columns(self) -> Matrix:
        k = self.ngens
        return [[self.orders[j] if i == j else 0 for j in range(k) if self.orders[j]]
                for i in range(k)]

    def validate(self) -> None:
        k = self.ngens
        if any(d < 0 for d in self.orders):
            raise InvariantError("orders must be nonnegative")
        if self.action is None or self.actor is None:
            return
        G = self.actor
        if len(self.action) != G.order:
            raise InvariantError("module action needs one matrix per actor element")
        for g, A in enumerate(self.action):
            if len(A) != k or any(len(r) != k for r in A):
                raise InvariantError("action matrix has wrong shape", witness={"actor": g})
            for j, dj in enumerate(self.orders):
                if dj and any(self.reduce([dj * A[i][j] for i in range(k)])):
                    raise InvariantError("action matrix does not respect the torsion relations",
                                         witness={"actor": g, "generator": j})
        for j in range(k):
            if self.act(G.identity, self.gen(j)) != self.gen(j):
                raise InvariantError("identity does not act trivially", witness={"generator": j})
        for g, h in product(range(G.order), repeat=2):
            gh = G.mul(g, h)
            for j in range(k):
                if self.act(gh, self.gen(j)) != self.act(g, self.act(h, self.gen(j))):
                    raise InvariantError("module action is not a homomorphism",
                                         witness={"pair": [g, h], "generator": j})

    def with_action(self, actor: FiniteGroup, action) -> "FGAbelianModule":
        return FGAbelianModule(self.orders, actor, tuple(action))

    def restrict(self, inclusion: GroupMorphism) -> "FGAbelianModule":
        """Module for a subgroup given by its inclusion into the actor."""
        return FGAbelianModule(self.orders, inclusion.source,
                               tuple(self.matrix(inclusion(x)) for x in inclusion.source))

    def inflate(self, projection: GroupMorphism) -> "FGAbelianModule":
        """Module for a bigger group acting through ``projection``."""
        return FGAbelianModule(self.orders, projection.source,
                               tuple(self.matrix(projection(x)) for x in projection.source))

    def fixed_elements(self) -> list[Vec]:
        return [v for v in self.elements()
                if all(self.act(g, v) == v for g in self.actor)]

    def to_dict(self) -> dict:
        free = [i for i, d in enumerate(self.orders) if d == 0]
        tors = [i for i, d in enumerate(self.orders) if d]
        if free and tors and max(free) > min(tors):
            raise InvariantError("serialization needs free generators first")
        out: dict = {"rank": len(free), "torsion": [self.orders[i] for i in tors]}
        if self.action is not None and self.actor is not None:
            k = self.ngens
            out["action"] = {str(g): A for g, A in enumerate(self.action) if A != identity(k)}
        return out

    @classmethod
    def from_dict(cls, data: dict, actor: FiniteGroup | None = None) -> "FGAbelianModule":
        orders = (0,) * int(data.get("rank", 0)) + tuple(int(d) for d in data.get("torsion", []))
        if actor is None:
            return cls(orders)
        k = len(orders)
        given = {int(g): A for g, A in (data.get("action") or {}).items()}
        for g in given:
            if not 0 <= g < actor.order:
                raise InvariantError("action keyed by an unknown actor element", witness={"element": g})
        action = tuple(given.get(g, identity(k)) for g in actor)
        m = cls(orders, actor, action)
        m.validate()
        return m


@dataclass(frozen=True, eq=False)
class AbelianProjection:
    """Projection of a finite group onto an abelian module, by element index."""

    source: FiniteGroup
    target: FGAbelianModule
    images: tuple[Vec, ...]

    def __call__(self, x: int) -> Vec:
        return self.images[x]

    def validate(self) -> None:
        G, A = self.source, self.target
        if len(self.images) != G.order:
            raise InvariantError("projection needs one image per group element")
        for x, y in product(range(G.order), repeat=2):
            if self.images[G.mul(x, y)] != A.add(self.images[x], self.images[y]):
                raise InvariantError("projection is not a homomorphism", witness={"pair": [x, y]})


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    """Equivariant homomorphism given by an integer matrix on generators."""

    source: FGAbelianModule
    target: FGAbelianModule
    matrix: Matrix

    def __call__(self, v) -> Vec:
        return self.target.reduce(matvec(self.matrix, v))

    def validate(self) -> None:
        S, T = self.source, self.target
        if len(self.matrix) != T.ngens or any(len(r) != S.ngens for r in self.matrix):
            raise InvariantError("morphism matrix has wrong shape")
        for j, d in enumerate(S.orders):
            if d and any(T.reduce([d * row[j] for row in self.matrix])):
                raise InvariantError("morphism does not respect torsion relations",
                                     witness={"generator": j})
        if S.actor is not None and T.actor is not None:
            for g in S.actor:
                for j in range(S.ngens):
                    e = S.gen(j)
                    if self(S.act(g, e)) != T.act(g, self(e)):
                        raise InvariantError("morphism is not equivariant",
                                             witness={"actor": g, "generator": j})

    def kernel_coords(self) -> Subquotient:
        """Kernel as a subquotient of the source's Z^k."""
        from .linalg import kernel_mod
        S, T = self.source, self.target
        k = S.ngens
        L = lcm(*[d for d in T.orders if d]) if T.is_finite else 0
        if T.is_finite:
            rows = [[(L // d) * v for v in row] for row, d in zip(self.matrix, T.orders)]
            K = kernel_mod(rows, L, k) if rows else identity(k)
        else:
            big = [list(row) + [T.orders[i] if i == j else 0 for j in range(T.ngens) if T.orders[j]]
                   for i, row in enumerate(self.matrix)]
            from .linalg import lattice_kernel
            ker = lattice_kernel(big, k + sum(1 for d in T.orders if d))
            K = ker[:k]
        return subquotient(K, S.relation_columns(), k)


@dataclass(frozen=True, eq=False)
class GaloisContext:
    """A finite Galois quotient with its cyclotomic character modulo ``h``.

    ``qchar[g]`` is the exponent by which ``g`` acts on h-th roots of unity.
    In finite-field mode ``frobenius`` generates ``gamma`` and ``q`` is the
    cardinality of the base field.
    """

    gamma: FiniteGroup
    h: int
    qchar: tuple[int, ...]
    frobenius: int | None = None
    q: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "qchar", tuple(int(v) % self.h for v in self.qchar))

    @classmethod
    def trivial_character(cls, gamma: FiniteGroup, h: int, **kw) -> "GaloisContext":
        return cls(gamma, h, tuple(1 for _ in gamma), **kw)

    @property
    def finite_field(self) -> bool:
        return self.frobenius is not None

    def validate(self) -> None:
        G, h = self.gamma, self.h
        if h < 1:
            raise InvariantError("h must be positive")
        if len(self.qchar) != G.order:
            raise InvariantError("qchar needs one value per Galois element")
        for g, v in enumerate(self.qchar):
            if gcd(v, h) != 1:
                raise InvariantError("qchar value is not a unit mod h", witness={"element": g, "value": v})
        for a, b in product(range(G.order), repeat=2):
            if self.qchar[G.mul(a, b)] != self.qchar[a] * self.qchar[b] % h:
                raise InvariantError("qchar is not a homomorphism", witness={"pair": [a, b]})
        if self.frobenius is not None:
            s = self.frobenius
            if G.element_orders[s] != G.order:
                raise InvariantError("frobenius does not generate the Galois group",
                                     witness={"frobenius": s})
            if self.q is not None and self.q % h != self.qchar[s]:
                raise InvariantError("qchar(frobenius) differs from q mod h",
                                     witness={"q": self.q, "qchar": self.qchar[s]})

    def roots_module(self) -> FGAbelianModule:
        """(1/h)Z/Z, written additively as Z/h, with the cyclotomic action."""
        return FGAbelianModule((self.h,), self.gamma, tuple([[v]] for v in self.qchar))

    def to_dict(self) -> dict:
        out = {"group": self.gamma.to_dict(), "h": self.h, "qchar": list(self.qchar)}
        if self.frobenius is not None:
            out["frobenius"] = self.frobenius
        if self.q is not None:
            out["q"] = self.q
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GaloisContext":
        gamma = FiniteGroup.from_dict(data["group"])
        h = int(data["h"])
        qchar = data.get("qchar")
        if qchar is None:
            qchar = [1] * gamma.order
        ctx = cls(gamma, h, tuple(qchar), data.get("frobenius"), data.get("q"))
        ctx.validate()
        return ctx


@dataclass(frozen=True, eq=False)
class EvalPairing:
    """Bilinear pairing ``left x right -> (1/h)Z/Z``.

    ``table[i][j]`` is the numerator (mod h) of the value on generator pair
    ``(i, j)``.
    """

    left: FGAbelianModule
    right: FGAbelianModule
    h: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(
            tuple(int(v) % self.h for v in row) for row in self.table))

    def __call__(self, m, x) -> int:
        """Numerator of ev(m, x) in Z/h."""
        t = self.table
        s = 0
        for i, mi in enumerate(m):
            if mi:
                row = t[i]
                for j, xj in enumerate(x):
                    if xj:
                        s += mi * xj * row[j]
        return s % self.h

    def fraction(self, m, x) -> Fraction:
        return Fraction(self(m, x), self.h)

    def validate(self, ctx: GaloisContext | None = None) -> None:
        L, R, h = self.left, self.right, self.h
        if len(self.table) != L.ngens or any(len(r) != R.ngens for r in self.table):
            raise InvariantError("pairing table has wrong shape")
        for i, d in enumerate(L.orders):
            for j in range(R.ngens):
                if d and d * self.table[i][j] % h:
                    raise InvariantError("pairing ignores a left torsion relation",
                                         witness={"pair": [i, j]})
        for j, e in enumerate(R.orders):
            for i in range(L.ngens):
                if e and e * self.table[i][j] % h:
                    raise InvariantError("pairing ignores a right torsion relation",
                                         witness={"pair": [i, j]})
        if ctx is None:
            return
        if ctx.h % h and h % ctx.h:
            raise InvariantError("pairing modulus incompatible with the context")
        for s in ctx.gamma:
            q = ctx.qchar[s]
            for i in range(L.ngens):
                mi = L.act(s, L.gen(i))
                for j in range(R.ngens):
                    if self(mi, R.act(s, R.gen(j))) != q * self.table[i][j] % h:
                        raise InvariantError("pairing is not Galois-equivariant with the cyclotomic twist",
                                             witness={"sigma": s, "pair": [i, j]})

    def to_dict(self) -> dict:
        return {"h": self.h,
                "table": [[str(Fraction(v, self.h)) for v in row] for row in self.table]}

    @classmethod
    def from_dict(cls, data: dict, left: FGAbelianModule, right: FGAbelianModule,
                  h: int) -> "EvalPairing":
        h = int(data.get("h", h))
        table = []
        for row in data["table"]:
            out = []
            for v in row:
                f = Fraction(v)
                if (f * h).denominator != 1:
                    raise InvariantError("pairing value not in (1/h)Z/Z", witness={"value": v, "h": h})
                out.append(int(f * h) % h)
            table.append(out)
        return cls(left, right, h, tuple(tuple(r) for r in table))


def dual_module(N: FGAbelianModule, ctx: GaloisContext) -> tuple[FGAbelianModule, EvalPairing]:
    """Hom(N, (1/h)Z/Z) with action (σχ)(x) = q(σ)·χ(σ^{-1}x), plus evaluation.

    Generator ``i`` of the dual is the character sending generator ``j`` of
    ``N`` to ``δ_ij / d_i``.
    """
    h = ctx.h
    if not N.is_finite:
        raise InvariantError("dual_module needs a finite module", witness={"orders": list(N.orders)})
    if h % N.exponent:
        raise InvariantError("exponent of N does not divide h",
                             witness={"exponent": N.exponent, "h": h})
    G = ctx.gamma
    k = N.ngens
    d = N.orders
    action = []
    for s in G:
        Ainv = N.matrix(G.inv(s))
        q = ctx.qchar[s]
        # column i of the new matrix: coordinates of σχ_i
        M = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                num = d[j] * q * Ainv[i][j]
                M[j][i] = (num // d[i]) % d[j]
        action.append(M)
    D = FGAbelianModule(d, G, tuple(action))
    table = tuple(tuple((h // d[i]) if i == j else 0 for j in range(k)) for i in range(k))
    return D, EvalPairing(D, N, h, table)


def coinvariants_and_fixed(M: FGAbelianModule, elements: Sequence[int] | None = None
                           ) -> tuple[Subquotient, Subquotient]:
    """(M_Γ, M^Γ) for the subgroup with the given actor elements (default: all)."""
    from .linalg import kernel_mod, lattice_kernel

    k = M.ngens
    elements = list(M.actor) if elements is None else list(elements)
    I = identity(k)
    diffs = [[[A[i][j] - I[i][j] for j in range(k)] for i in range(k)]
             for A in (M.matrix(g) for g in elements)]
    rel = M.relation_columns()
    # coinvariants: Z^k / (relations + images of σ - 1)
    span = [list(rel[i]) + sum(([D[i][j] for j in range(k)] for D in diffs), [])
            for i in range(k)]
    coinv = subquotient(I, span, k)
    # invariants: {x : (σ - 1)x in relations} / relations
    rows = [row for D in diffs for row in D]
    mods = [M.orders[i] for _ in diffs for i in range(k)]
    if M.is_finite:
        L = lcm(*mods) if mods else 1
        scaled = [[(L // m) * v for v in row] for row, m in zip(rows, mods)]
        K = kernel_mod(scaled, L, k) if scaled else I
    else:
        slack = sum(1 for m in mods if m)
        big = []
        s = 0
        for row, m in zip(rows, mods):
            extra = [0] * slack
            if m:
                extra[s] = m
                s += 1
            big.append(list(row) + extra)
        K = [r[:] for r in lattice_kernel(big, k + slack)[:k]] if big else I
    fixed = subquotient(K, rel, k)
    return coinv, fixed

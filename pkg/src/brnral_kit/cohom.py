"""Explicit cochains on a finite group: H^1 with abelian and nonabelian
coefficients, solving 2-coboundary equations, cup products into (1/h)Z/Z,
restriction and inflation.

Cochains are tables indexed by actor element indices. Abelian values are
module vectors; nonabelian values are group element indices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

from .abmod import EvalPairing, FGAbelianModule, GaloisContext, ModuleMorphism, Vec
from .errors import InvariantError
from .groups import FiniteGroup, GroupAction, GroupMorphism, generated_subgroup
from .linalg import (Subquotient, identity, kernel_mod, lattice_kernel, lcm,
                     smith_solve, subquotient)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Cocycle1Ab:
    module: FGAbelianModule
    values: tuple[Vec, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.module.reduce(v) for v in self.values))

    @property
    def actor(self) -> FiniteGroup:
        return self.module.actor

    def __call__(self, g: int) -> Vec:
        return self.values[g]

    def __add__(self, other: "Cocycle1Ab") -> "Cocycle1Ab":
        M = self.module
        return Cocycle1Ab(M, tuple(M.add(a, b) for a, b in zip(self.values, other.values)))

    def scale(self, k: int) -> "Cocycle1Ab":
        M = self.module
        return Cocycle1Ab(M, tuple(M.scale(k, a) for a in self.values))

    def to_list(self) -> list[dict]:
        return [{"on": g, "value": list(v)} for g, v in enumerate(self.values)]


@dataclass(frozen=True, eq=False)
class Cocycle2:
    module: FGAbelianModule
    values: tuple[tuple[Vec, ...], ...]

    def __post_init__(self):
        M = self.module
        object.__setattr__(self, "values", tuple(tuple(M.reduce(v) for v in row)
                                                 for row in self.values))

    @property
    def actor(self) -> FiniteGroup:
        return self.module.actor

    def __call__(self, g: int, h: int) -> Vec:
        return self.values[g][h]

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        M = self.module
        return Cocycle2(M, tuple(tuple(M.add(a, b) for a, b in zip(r1, r2))
                                 for r1, r2 in zip(self.values, other.values)))

    def __sub__(self, other: "Cocycle2") -> "Cocycle2":
        M = self.module
        return Cocycle2(M, tuple(tuple(M.sub(a, b) for a, b in zip(r1, r2))
                                 for r1, r2 in zip(self.values, other.values)))

    def scale(self, k: int) -> "Cocycle2":
        M = self.module
        return Cocycle2(M, tuple(tuple(M.scale(k, a) for a in row) for row in self.values))

    def is_zero(self) -> bool:
        return all(not any(v) for row in self.values for v in row)

    def to_list(self) -> list[dict]:
        n = len(self.values)
        return [{"on": [g, h], "value": list(self.values[g][h])}
                for g in range(n) for h in range(n)]

    @classmethod
    def zero(cls, module: FGAbelianModule) -> "Cocycle2":
        n = module.actor.order
        return cls(module, tuple(tuple(module.zero for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_list(cls, module: FGAbelianModule, entries) -> "Cocycle2":
        """From ``[{"on": [g, h], "value": [...]}, ...]``; missing pairs are zero."""
        n = module.actor.order
        vals = [[module.zero] * n for _ in range(n)]
        for e in entries:
            g, h = e["on"]
            vals[g][h] = module.reduce(e["value"])
        return cls(module, tuple(tuple(r) for r in vals))


@dataclass(frozen=True, eq=False)
class Cocycle1NonAb:
    action: GroupAction
    values: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.values[g]


# --- checks and coboundaries ---------------------------------------------------

def check_cocycle1(a: Cocycle1Ab) -> tuple[int, int] | None:
    """First pair (σ, τ) violating a(στ) = a(σ) + σ·a(τ), else None."""
    M, G = a.module, a.actor
    for s, t in product(range(G.order), repeat=2):
        if a.values[G.mul(s, t)] != M.add(a.values[s], M.act(s, a.values[t])):
            return (s, t)
    return None


def check_cocycle2(z: Cocycle2) -> tuple[int, int, int] | None:
    """First triple violating σ·z(τ,ρ) − z(στ,ρ) + z(σ,τρ) − z(σ,τ) = 0, else None."""
    M, G = z.module, z.actor
    v = z.values
    for s, t, r in product(range(G.order), repeat=3):
        lhs = M.add(M.act(s, v[t][r]), v[s][G.mul(t, r)])
        rhs = M.add(v[G.mul(s, t)][r], v[s][t])
        if lhs != rhs:
            return (s, t, r)
    return None


def check_cocycle1_nonab(a: Cocycle1NonAb) -> tuple[int, int] | None:
    act = a.action
    G, H = act.actor, act.space
    for s, t in product(range(G.order), repeat=2):
        if a.values[G.mul(s, t)] != H.mul(a.values[s], act(s, a.values[t])):
            return (s, t)
    return None


def coboundary0(M: FGAbelianModule, m) -> Cocycle1Ab:
    """σ ↦ σ·m − m"""
    return Cocycle1Ab(M, tuple(M.sub(M.act(s, m), m) for s in M.actor))


def coboundary1(M: FGAbelianModule, b: Sequence) -> Cocycle2:
    """(σ, τ) ↦ σ·b(τ) − b(στ) + b(σ)"""
    G = M.actor
    vals = []
    for s in G:
        row = []
        for t in G:
            row.append(M.add(M.sub(M.act(s, b[t]), b[G.mul(s, t)]), b[s]))
        vals.append(tuple(row))
    return Cocycle2(M, tuple(vals))


def normalize_cocycle2(z: Cocycle2) -> Cocycle2:
    """Shift by a constant 1-cochain so that z(1, ·) = z(·, 1) = 0."""
    G, M = z.actor, z.module
    e = G.identity
    c = z.values[e][e]
    if not any(c):
        return z
    log.warning("2-cocycle is not normalized; shifting by the constant cochain %s", list(c))
    return z - coboundary1(M, [c] * G.order)


# --- linear algebra on cochains ----------------------------------------------

def generating_set(G: FiniteGroup) -> list[int]:
    """Greedy deterministic generating set."""
    gens: list[int] = []
    current = {G.identity}
    for x in G:
        if x not in current:
            gens.append(x)
            current = set(generated_subgroup(G, gens).elements)
            if len(current) == G.order:
                break
    return gens


def _solve_lattice(rows, mods, nvars: int):
    """Basis (columns) of {x : rows·x ≡ 0 modulo mods row-wise}."""
    if not rows:
        return identity(nvars)
    if all(mods):
        L = lcm(*mods)
        scaled = [[(L // m) * v for v in row] for row, m in zip(rows, mods)]
        return kernel_mod(scaled, L, nvars)
    nslack = sum(1 for m in mods if m)
    big = []
    s = 0
    for row, m in zip(rows, mods):
        extra = [0] * nslack
        if m:
            extra[s] = m
            s += 1
        big.append(list(row) + extra)
    return lattice_kernel(big, nvars + nslack)[:nvars]


def _z1_rows(M: FGAbelianModule, gens: Sequence[int]):
    """Rows expressing a(σs) − a(σ) − σ·a(s) ≡ 0 for all σ and generators s."""
    G = M.actor
    k = M.ngens
    n = G.order * k
    rows, mods = [], []
    for s in G:
        A = M.matrix(s)
        for t in gens:
            st = G.mul(s, t)
            for i in range(k):
                row = [0] * n
                row[st * k + i] += 1
                row[s * k + i] -= 1
                for j in range(k):
                    row[t * k + j] -= A[i][j]
                rows.append(row)
                mods.append(M.orders[i])
    # a(1) = 0
    e = G.identity
    for i in range(k):
        row = [0] * n
        row[e * k + i] = 1
        rows.append(row)
        mods.append(M.orders[i])
    return rows, mods


def _b1_columns(M: FGAbelianModule):
    G = M.actor
    k = M.ngens
    n = G.order * k
    cols = []
    for j in range(k):
        col = [0] * n
        for s in G:
            A = M.matrix(s)
            for i in range(k):
                col[s * k + i] += A[i][j] - (1 if i == j else 0)
        cols.append(col)
    for s in G:
        for i, d in enumerate(M.orders):
            if d:
                col = [0] * n
                col[s * k + i] = d
                cols.append(col)
    return [[c[r] for c in cols] for r in range(n)]


@dataclass(frozen=True, eq=False)
class H1Group:
    """H^1(Γ, M) as an explicit finitely generated abelian group."""

    module: FGAbelianModule
    quotient: Subquotient

    @property
    def invariants(self) -> tuple[int, ...]:
        return self.quotient.invariants

    @property
    def order(self) -> int:
        return self.quotient.order

    def _flatten(self, a: Cocycle1Ab) -> list[int]:
        return [x for v in a.values for x in v]

    def representative(self, coeffs) -> Cocycle1Ab:
        M = self.module
        k = M.ngens
        vec = self.quotient.element(coeffs)
        return Cocycle1Ab(M, tuple(tuple(vec[s * k:(s + 1) * k]) for s in M.actor))

    def class_of(self, a: Cocycle1Ab) -> tuple[int, ...]:
        coords = self.quotient.coords(self._flatten(a))
        if coords is None:
            raise InvariantError("not a 1-cocycle", witness={"pair": list(check_cocycle1(a) or ())})
        return coords

    def generators(self) -> list[Cocycle1Ab]:
        n = len(self.invariants)
        return [self.representative([int(i == j) for j in range(n)]) for i in range(n)]

    def classes(self) -> list[tuple[int, ...]]:
        return list(self.quotient.elements())

    def is_trivial_class(self, a: Cocycle1Ab) -> bool:
        return not any(self.class_of(a))


def h1_abelian(M: FGAbelianModule) -> H1Group:
    """H^1(Γ, M) = Z^1 / B^1 by lattice computations on cochain vectors."""
    G = M.actor
    if G is None:
        raise InvariantError("module has no acting group")
    n = G.order * M.ngens
    rows, mods = _z1_rows(M, generating_set(G))
    Z1 = _solve_lattice(rows, mods, n)
    B1 = _b1_columns(M)
    return H1Group(M, subquotient(Z1, B1, n))


def h1_cyclic(M: FGAbelianModule, generator: int) -> Subquotient:
    """ker(Norm) / (s − 1)M for a cyclic acting group generated by ``generator``."""
    G = M.actor
    if G.element_orders[generator] != G.order:
        raise InvariantError("element does not generate the acting group",
                             witness={"generator": generator})
    k = M.ngens
    norm = [[0] * k for _ in range(k)]
    x = G.identity
    for _ in range(G.order):
        A = M.matrix(x)
        for i in range(k):
            for j in range(k):
                norm[i][j] += A[i][j]
        x = G.mul(x, generator)
    K = _solve_lattice(norm, list(M.orders), k)
    A = M.matrix(generator)
    span = [list(r) + [A[i][j] - (i == j) for j in range(k)]
            for i, r in enumerate(M.relation_columns())]
    return subquotient(K, span, k)


def cyclic_cocycle(M: FGAbelianModule, generator: int, value) -> Cocycle1Ab:
    """The cochain a(s^i) = Σ_{j<i} s^j·value determined by a(s) = value."""
    G = M.actor
    vals: dict[int, Vec] = {G.identity: M.zero}
    x, acc = G.identity, M.zero
    for _ in range(G.order - 1):
        acc = M.add(acc, M.act(x, value))
        x = G.mul(x, generator)
        vals[x] = acc
    return Cocycle1Ab(M, tuple(vals[g] for g in G))


def is_coboundary1(a: Cocycle1Ab) -> Vec | None:
    """m with a = σm − m, or None."""
    M, G = a.module, a.actor
    k = M.ngens
    rows, rhs, mods = [], [], []
    for s in G:
        A = M.matrix(s)
        for i in range(k):
            rows.append([A[i][j] - (i == j) for j in range(k)])
            rhs.append(a.values[s][i])
            mods.append(M.orders[i])
    x = smith_solve(rows, rhs, mods, k)
    return None if x is None else M.reduce(x)


def h2_solve(z: Cocycle2) -> tuple[Vec, ...] | None:
    """A 1-cochain b with z(σ,τ) = σ·b(τ) − b(στ) + b(σ), or None if [z] ≠ 0."""
    M, G = z.module, z.actor
    k = M.ngens
    n = G.order * k
    rows, rhs, mods = [], [], []
    for s in G:
        A = M.matrix(s)
        for t in G:
            st = G.mul(s, t)
            for i in range(k):
                row = [0] * n
                for j in range(k):
                    row[t * k + j] += A[i][j]
                row[st * k + i] -= 1
                row[s * k + i] += 1
                rows.append(row)
                rhs.append(z.values[s][t][i])
                mods.append(M.orders[i])
    x = smith_solve(rows, rhs, mods, n)
    if x is None:
        return None
    return tuple(M.reduce(x[s * k:(s + 1) * k]) for s in G)


def cup_pairing(a: Cocycle1Ab, beta: Cocycle1Ab, ev: EvalPairing,
                ctx: GaloisContext) -> Cocycle2:
    """c(σ, τ) = ev(a(σ), σ·β(τ)) valued in (1/h)Z/Z with the cyclotomic action."""
    if a.actor is not ctx.gamma and a.actor != ctx.gamma:
        raise InvariantError("first cocycle lives over a different Galois group")
    if beta.actor is not ctx.gamma and beta.actor != ctx.gamma:
        raise InvariantError("second cocycle lives over a different Galois group")
    if ev.h != ctx.h:
        raise InvariantError("pairing modulus differs from the context h",
                             witness={"pairing_h": ev.h, "h": ctx.h})
    G = ctx.gamma
    B = beta.module
    vals = tuple(tuple((ev(a.values[s], B.act(s, beta.values[t])),) for t in G) for s in G)
    return Cocycle2(ctx.roots_module(), vals)


# --- change of group / module ------------------------------------------------

def restrict(cocycle, inclusion: GroupMorphism):
    """Restrict a 1- or 2-cocycle along a subgroup inclusion."""
    H = inclusion.source
    if isinstance(cocycle, Cocycle1Ab):
        M = cocycle.module.restrict(inclusion)
        return Cocycle1Ab(M, tuple(cocycle.values[inclusion(x)] for x in H))
    if isinstance(cocycle, Cocycle2):
        M = cocycle.module.restrict(inclusion)
        return Cocycle2(M, tuple(tuple(cocycle.values[inclusion(x)][inclusion(y)] for y in H)
                                 for x in H))
    if isinstance(cocycle, Cocycle1NonAb):
        act = cocycle.action
        sub = GroupAction(H, act.space, tuple(act.maps[inclusion(x)] for x in H))
        return Cocycle1NonAb(sub, tuple(cocycle.values[inclusion(x)] for x in H))
    raise TypeError(f"cannot restrict {type(cocycle).__name__}")


def inflate(cocycle, projection: GroupMorphism):
    """Inflate a cocycle along a surjection onto its acting group."""
    G = projection.source
    if isinstance(cocycle, Cocycle1Ab):
        M = cocycle.module.inflate(projection)
        return Cocycle1Ab(M, tuple(cocycle.values[projection(x)] for x in G))
    if isinstance(cocycle, Cocycle2):
        M = cocycle.module.inflate(projection)
        return Cocycle2(M, tuple(tuple(cocycle.values[projection(x)][projection(y)] for y in G)
                                 for x in G))
    raise TypeError(f"cannot inflate {type(cocycle).__name__}")


def push(a: Cocycle1Ab, f: ModuleMorphism) -> Cocycle1Ab:
    return Cocycle1Ab(f.target, tuple(f(v) for v in a.values))


# --- nonabelian H^1 ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NonAbH1:
    """Classes of Z^1(Γ, H) under twisted conjugation, canonically ordered."""

    action: GroupAction
    cocycles: tuple[tuple[int, ...], ...]
    class_index: dict

    @cached_property
    def representatives(self) -> tuple[Cocycle1NonAb, ...]:
        reps: dict[int, tuple[int, ...]] = {}
        for c in self.cocycles:
            i = self.class_index[c]
            if i not in reps:
                reps[i] = c
        return tuple(Cocycle1NonAb(self.action, reps[i]) for i in range(len(reps)))

    def __len__(self) -> int:
        return len(self.representatives)

    def class_of(self, values) -> int:
        return self.class_index[tuple(values)]


def nonabelian_cocycles(action: GroupAction) -> list[tuple[int, ...]]:
    """All 1-cocycles Γ → H, by enumerating values on a generating set."""
    G, H = action.actor, action.space
    gens = generating_set(G)
    found = []
    for choice in product(range(H.order), repeat=len(gens)):
        vals = {G.identity: H.identity}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, v in zip(gens, choice):
                    y = G.mul(x, s)
                    w = H.mul(vals[x], action(x, v))
                    if y in vals:
                        if vals[y] != w:
                            ok = False
                            break
                    else:
                        vals[y] = w
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        cand = tuple(vals[g] for g in G)
        if check_cocycle1_nonab(Cocycle1NonAb(action, cand)) is None:
            found.append(cand)
    return sorted(found)


def h1_nonabelian(action: GroupAction) -> NonAbH1:
    """Orbits of Z^1 under a'(σ) = g^{-1}·a(σ)·σ(g)."""
    G, H = action.actor, action.space
    cocycles = nonabelian_cocycles(action)
    index: dict[tuple[int, ...], int] = {}
    nclasses = 0
    for c in cocycles:
        if c in index:
            continue
        for g in H:
            gi = H.inv(g)
            twisted = tuple(H.mul(H.mul(gi, c[s]), action(s, g)) for s in G)
            index[twisted] = nclasses
        nclasses += 1
    return NonAbH1(action, tuple(cocycles), index)

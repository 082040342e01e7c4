"""Membership in the unramified algebraic Brauer group inside H^1(Γ, M).

A class [a] is a member when ev(a(σ), N(σ, b)) = 0 in (1/h)Z/Z for every
b ∈ H and every σ in the quantified set: the Frobenius alone in
finite-field mode, all of Γ in characteristic zero. The condition is linear
in a, so the member set is computed as the kernel of a homomorphism out of
H^1 and returned with witnesses for every rejected generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .abmod import (AbelianProjection, EvalPairing, FGAbelianModule, GaloisContext,
                    ModuleMorphism, dual_module)
from .cohom import (Cocycle1Ab, H1Group, check_cocycle1, cup_pairing, h1_abelian,
                    h1_nonabelian, h2_solve, is_coboundary1, push, restrict)
from .errors import InvariantError
from .groups import GroupAction, GroupMorphism, Subgroup
from .linalg import Subquotient, kernel_mod, lcm, subquotient
from .norms import NormContext


@dataclass(frozen=True, eq=False)
class BrnralInstance:
    """Γ-context, H with its action (via the norm context), M and ev: M × H^ab → (1/h)Z/Z."""

    ctx: GaloisContext
    nc: NormContext
    M: FGAbelianModule
    ev: EvalPairing
    meta: dict = field(default_factory=dict)

    def validate(self, finite_field: bool = False) -> None:
        self.ctx.validate()
        self.nc.validate()
        self.M.validate()
        if self.M.actor is None or self.M.actor.order != self.ctx.gamma.order:
            raise InvariantError("M is not a module over the Galois group")
        if self.ev.h != self.ctx.h:
            raise InvariantError("pairing modulus differs from h",
                                 witness={"pairing_h": self.ev.h, "h": self.ctx.h})
        if self.ev.right.orders != self.nc.hab.orders:
            raise InvariantError("pairing right factor is not H^ab",
                                 witness={"pairing": list(self.ev.right.orders),
                                          "hab": list(self.nc.hab.orders)})
        EvalPairing(self.M, self.nc.hab, self.ev.h, self.ev.table).validate(self.ctx)
        if finite_field and self.ctx.frobenius is None:
            raise InvariantError("finite-field mode needs a frobenius element")

    @property
    def pairing(self) -> EvalPairing:
        """ev with its modules rebound to M and H^ab carrying their actions."""
        return EvalPairing(self.M, self.nc.hab, self.ev.h, self.ev.table)

    def dual_hab(self) -> tuple[FGAbelianModule, EvalPairing]:
        return dual_module(self.nc.hab, self.ctx)

    def canonical_dualmap(self) -> ModuleMorphism:
        """The morphism M → Ĥ^ab determined by ev."""
        D, _ = self.dual_hab()
        h = self.ctx.h
        e = self.nc.hab.orders
        mat = [[self.ev.table[i][j] * e[j] // h % e[j] for i in range(self.M.ngens)]
               for j in range(len(e))]
        return ModuleMorphism(self.M, D, mat)


def sigma_set(inst: BrnralInstance, mode: str) -> list[int]:
    if mode == "finite-field":
        if inst.ctx.frobenius is None:
            raise InvariantError("finite-field mode needs a frobenius element")
        return [inst.ctx.frobenius]
    if mode == "char-zero":
        return list(inst.ctx.gamma)
    raise ValueError(f"unknown mode {mode!r}")


def find_witness(inst: BrnralInstance, a: Cocycle1Ab, sigmas) -> tuple[int, int, int] | None:
    """First (σ, b, numerator) with ev(a(σ), N(σ, b)) ≠ 0, scanning σ then b."""
    ev, nc = inst.pairing, inst.nc
    for s in sigmas:
        if not any(a.values[s]):
            continue
        for b in nc.H:
            v = ev(a.values[s], nc.norm(s, b))
            if v:
                return (s, b, v)
    return None


@dataclass(frozen=True, eq=False)
class BrnralResult:
    mode: str
    ambient: H1Group
    members: Subquotient
    member_gens: tuple[tuple[int, ...], ...]
    witnesses: tuple[dict, ...]
    certificate: dict = field(default_factory=dict)

    @property
    def invariants(self) -> tuple[int, ...]:
        return self.members.invariants

    @property
    def order(self) -> int:
        return self.members.order

    def member_classes(self) -> list[tuple[int, ...]]:
        """All member classes as ambient coordinate tuples, sorted."""
        e = self.ambient.invariants
        out = set()
        for coeffs in self.members.elements():
            v = self.members.element(coeffs)
            out.add(tuple(x % d for x, d in zip(v, e)))
        return sorted(out)

    def contains(self, coords) -> bool:
        return self.members.coords(list(coords)) is not None

    def to_dict(self) -> dict:
        amb = self.ambient
        out = {
            "mode": self.mode,
            "ambient": {"invariants": list(amb.invariants),
                        "generators": [g.to_list() for g in amb.generators()]},
            "members": {
                "invariants": list(self.members.invariants),
                "generators": [list(c) for c in self.member_gens],
                "representatives": [amb.representative(c).to_list() for c in self.member_gens],
            },
            "witnesses": list(self.witnesses),
        }
        if self.certificate:
            out["certificate"] = self.certificate
        return out


def _condition_rows(inst: BrnralInstance, H1: H1Group, sigmas) -> tuple[list[list[int]], list[tuple[int, int]]]:
    """One row per (σ, distinct norm value): the numerators on H^1 generators."""
    ev, nc = inst.pairing, inst.nc
    gens = H1.generators()
    rows, tags = [], []
    for s in sigmas:
        for value, b in sorted(nc.distinct_norms(s).items(), key=lambda kv: kv[1]):
            row = [ev(g.values[s], value) for g in gens]
            if any(row):
                rows.append(row)
                tags.append((s, b))
    return rows, tags


def _member_subgroup(inst: BrnralInstance, H1: H1Group, sigmas) -> Subquotient:
    n = len(H1.invariants)
    rows, _ = _condition_rows(inst, H1, sigmas)
    h = inst.ctx.h
    K = kernel_mod(rows, h, n) if rows else [[int(i == j) for j in range(n)] for i in range(n)]
    rel = [[H1.invariants[j] if i == j else 0 for j in range(n)] for i in range(n)]
    try:
        return subquotient(K, rel, n)
    except ValueError:
        raise InvariantError("membership condition depends on the cocycle representative")


def _membership(inst: BrnralInstance, mode: str) -> BrnralResult:
    sigmas = sigma_set(inst, mode)
    H1 = h1_abelian(inst.M)
    members = _member_subgroup(inst, H1, sigmas)
    e = H1.invariants
    member_gens = tuple(tuple(x % d for x, d in zip(members.element(
        [int(i == j) for j in range(len(members.invariants))]), e))
        for i in range(len(members.invariants)))
    witnesses = []
    for i, g in enumerate(H1.generators()):
        coords = tuple(int(i == j) for j in range(len(e)))
        if members.coords(list(coords)) is None:
            w = find_witness(inst, g, sigmas)
            if w is None:
                raise InvariantError("rejected class has no witness", witness={"generator": i})
            s, b, v = w
            witnesses.append({"generator": i, "sigma": s, "b": b,
                              "norm": list(inst.nc.norm(s, b)), "value": str(Fraction(v, inst.ctx.h))})
    return BrnralResult(mode, H1, members, member_gens, tuple(witnesses))


def brnral_finite_field(inst: BrnralInstance) -> BrnralResult:
    """Members: ev(a(s), N(s, b)) = 0 for all b, s the Frobenius."""
    inst.validate(finite_field=True)
    return _membership(inst, "finite-field")


def galois_kernel_subgroup(inst: BrnralInstance) -> Subgroup:
    """Γ' = {σ : σ acts trivially on H and q(σ) = 1}."""
    G = inst.ctx.gamma
    elems = tuple(s for s in G if inst.nc.action.is_trivial_at(s) and inst.ctx.qchar[s] == 1)
    return Subgroup(G, elems)


def finite_quotient_certificate(inst: BrnralInstance, result: BrnralResult) -> dict:
    """Check every member generator dies in H^1(Γ', Ĥ^ab)."""
    sub = galois_kernel_subgroup(inst)
    Gp, inc = sub.as_group()
    f = inst.canonical_dualmap()
    checks = []
    for coords in result.member_gens:
        a = result.ambient.representative(coords)
        pushed = restrict(push(a, f), inc)
        m = is_coboundary1(pushed)
        checks.append({"member": list(coords), "trivial": m is not None,
                       "primitive": None if m is None else list(m)})
    return {"subgroup": list(sub.elements), "checks": checks,
            "vanishing": all(c["trivial"] for c in checks)}


def brnral_char_zero(inst: BrnralInstance) -> BrnralResult:
    """Members: ev(a(σ), N(σ, b)) = 0 for all b and all σ ∈ Γ, with the Γ'-vanishing certificate."""
    inst.validate()
    res = _membership(inst, "char-zero")
    cert = finite_quotient_certificate(inst, res)
    return BrnralResult(res.mode, res.ambient, res.members, res.member_gens,
                        res.witnesses, cert)


def is_member(inst: BrnralInstance, a: Cocycle1Ab, mode: str) -> bool:
    """Direct evaluation of the condition on one cocycle."""
    if check_cocycle1(a) is not None:
        raise InvariantError("not a 1-cocycle", witness={"pair": list(check_cocycle1(a))})
    return find_witness(inst, a, sigma_set(inst, mode)) is None


@dataclass(frozen=True, eq=False)
class KernelComparison:
    ambient: H1Group
    target: H1Group
    kernel: Subquotient
    kernel_gens: tuple[tuple[int, ...], ...]

    def kernel_classes(self) -> list[tuple[int, ...]]:
        e = self.ambient.invariants
        out = set()
        for coeffs in self.kernel.elements():
            v = self.kernel.element(coeffs)
            out.add(tuple(x % d for x, d in zip(v, e)))
        return sorted(out)

    def to_dict(self) -> dict:
        return {"ambient": list(self.ambient.invariants),
                "target": list(self.target.invariants),
                "kernel": {"invariants": list(self.kernel.invariants),
                           "generators": [list(g) for g in self.kernel_gens]}}


def kernel_comparison(inst: BrnralInstance, dualmap: ModuleMorphism | None = None) -> KernelComparison:
    """ker[H^1(Γ, M) → H^1(Γ, Ĥ^ab)] for the dual map compatible with ev."""
    D, canon = inst.dual_hab()
    if dualmap is None:
        dualmap = inst.canonical_dualmap()
    dualmap = ModuleMorphism(inst.M, D, dualmap.matrix)
    dualmap.validate()
    hab = inst.nc.hab
    for i in range(inst.M.ngens):
        m = inst.M.gen(i)
        for j in range(hab.ngens):
            x = hab.gen(j)
            if inst.pairing(m, x) != canon(dualmap(m), x):
                raise InvariantError("dual map is incompatible with the pairing",
                                     witness={"pair": [i, j]})
    H1M = h1_abelian(inst.M)
    H1D = h1_abelian(D)
    n = len(H1M.invariants)
    f = H1D.invariants
    images = [H1D.class_of(push(g, dualmap)) for g in H1M.generators()]
    if f:
        L = lcm(*f)
        rows = [[(L // f[j]) * images[i][j] for i in range(n)] for j in range(len(f))]
        K = kernel_mod(rows, L, n)
    else:
        K = [[int(i == j) for j in range(n)] for i in range(n)]
    rel = [[H1M.invariants[j] if i == j else 0 for j in range(n)] for i in range(n)]
    ker = subquotient(K, rel, n)
    e = H1M.invariants
    gens = tuple(tuple(x % d for x, d in zip(ker.element(
        [int(i == j) for j in range(len(ker.invariants))]), e)) for i in range(len(ker.invariants)))
    return KernelComparison(H1M, H1D, ker, gens)


@dataclass(frozen=True)
class OrthogonalityReport:
    pairs: tuple[dict, ...]
    members: int
    image_classes: int

    @property
    def all_orthogonal(self) -> bool:
        return all(p["orthogonal"] for p in self.pairs)

    def to_dict(self) -> dict:
        return {"verdict": "all orthogonal" if self.all_orthogonal else "NOT orthogonal",
                "members": self.members, "image_classes": self.image_classes,
                "pairs": list(self.pairs)}


def nonabelian_image(inst: BrnralInstance) -> list[tuple[int, ...]]:
    """Image of H^1(Γ, H) in H^1(Γ, H^ab), as sorted class coordinates."""
    nc = inst.nc
    H1ab = h1_abelian(nc.hab)
    out = set()
    for rep in h1_nonabelian(nc.action).representatives:
        a = Cocycle1Ab(nc.hab, tuple(nc.abmap(x) for x in rep.values))
        out.add(H1ab.class_of(a))
    return sorted(out)


def real_orthogonality(inst: BrnralInstance) -> OrthogonalityReport:
    """Cup every char-0 member with every class coming from H^1(Γ, H); each must vanish in H^2."""
    G = inst.ctx.gamma
    if G.order != 2:
        raise InvariantError("real-place check needs a Galois group of order 2",
                             witness={"order": G.order})
    res = brnral_char_zero(inst)
    nc = inst.nc
    H1ab = h1_abelian(nc.hab)
    betas = nonabelian_image(inst)
    ev = inst.pairing
    pairs = []
    for alpha in res.member_classes():
        a = res.ambient.representative(alpha)
        for beta in betas:
            b = H1ab.representative(beta)
            c = cup_pairing(a, b, ev, inst.ctx)
            prim = h2_solve(c)
            pairs.append({"alpha": list(alpha), "beta": list(beta),
                          "cup": [c.values[s][t][0] for s in G for t in G],
                          "orthogonal": prim is not None})
    return OrthogonalityReport(tuple(pairs), len(res.member_classes()), len(betas))


def compare_modes(inst: BrnralInstance) -> dict:
    """Diagnostic only: the single-Frobenius and all-σ member sets side by side."""
    ff = brnral_finite_field(inst)
    c0 = brnral_char_zero(inst)
    return {"finite-field": ff.member_classes(), "char-zero": c0.member_classes(),
            "agree": ff.member_classes() == c0.member_classes()}


def inflate_instance(inst: BrnralInstance, projection: GroupMorphism,
                     frobenius: int | None = None) -> BrnralInstance:
    """The same data seen through a bigger quotient Γ'' ↠ Γ."""
    G2 = projection.source
    ctx = inst.ctx
    qchar = tuple(ctx.qchar[projection(s)] for s in G2)
    ctx2 = GaloisContext(G2, ctx.h, qchar, frobenius, ctx.q if frobenius is not None else None)
    act = inst.nc.action
    act2 = GroupAction(G2, act.space, tuple(act.maps[projection(s)] for s in G2))
    nc2 = NormContext.build(ctx2, act2, AbelianProjection(act.space, FGAbelianModule(inst.nc.hab.orders),
                                                          inst.nc.abmap.images))
    M2 = inst.M.inflate(projection)
    return BrnralInstance(ctx2, nc2, M2, EvalPairing(M2, nc2.hab, inst.ev.h, inst.ev.table),
                          dict(inst.meta))

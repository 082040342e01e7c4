"""Brute-force reference computations.

Each oracle works from definitions by enumeration, sharing no linear algebra
with the calculators it checks. They are only meant for desk-scale inputs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from math import gcd

from .abmod import FGAbelianModule
from .groups import FiniteGroup


def cocycles1(M: FGAbelianModule) -> list[tuple]:
    """All 1-cocycles Γ → M, by trying every assignment on a generating set."""
    G = M.actor
    gens = _greedy_generators(G)
    elems = M.elements()
    out = []
    for choice in product(elems, repeat=len(gens)):
        vals = {G.identity: M.zero}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, v in zip(gens, choice):
                    y = G.mul(x, s)
                    w = M.add(vals[x], M.act(x, v))
                    if y in vals:
                        ok = ok and vals[y] == w
                    else:
                        vals[y] = w
                        nxt.append(y)
            frontier = nxt
        if not ok:
            continue
        a = tuple(vals[g] for g in G)
        if all(a[G.mul(s, t)] == M.add(a[s], M.act(s, a[t])) for s in G for t in G):
            out.append(a)
    return sorted(set(out))


def coboundaries1(M: FGAbelianModule) -> set[tuple]:
    G = M.actor
    return {tuple(M.sub(M.act(s, m), m) for s in G) for m in M.elements()}


def _greedy_generators(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {G.identity}
    for x in G:
        if x in span:
            continue
        gens.append(x)
        span = _closure(G, gens)
        if len(span) == G.order:
            break
    return gens


def _closure(G: FiniteGroup, gens) -> set[int]:
    found = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return found


@dataclass(frozen=True)
class BruteH1:
    cocycles: tuple[tuple, ...]
    coboundaries: frozenset
    class_of: dict          # cocycle -> canonical representative

    @property
    def order(self) -> int:
        return len(self.cocycles) // len(self.coboundaries)

    def order_profile(self, M: FGAbelianModule) -> dict[int, int]:
        """k ↦ number of classes killed by k, for k dividing the exponent."""
        reps = sorted(set(self.class_of.values()))
        exp = _exponent_of_classes(M, reps, self.class_of)
        prof = {}
        for k in _divisors(exp):
            zero = self.class_of[tuple(M.zero for _ in M.actor)]
            prof[k] = sum(1 for r in reps
                          if self.class_of[tuple(M.scale(k, v) for v in r)] == zero)
        return prof


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _exponent_of_classes(M, reps, class_of) -> int:
    zero = class_of[tuple(M.zero for _ in M.actor)]
    e = 1
    for r in reps:
        k = 1
        while class_of[tuple(M.scale(k, v) for v in r)] != zero:
            k += 1
        e = e * k // gcd(e, k)
    return e


def h1_bruteforce(M: FGAbelianModule) -> BruteH1:
    Z = cocycles1(M)
    B = frozenset(coboundaries1(M))
    class_of = {}
    for a in Z:
        if a in class_of:
            continue
        orbit = sorted(tuple(M.add(x, y) for x, y in zip(a, b)) for b in B)
        for c in orbit:
            class_of[c] = orbit[0]
    return BruteH1(tuple(Z), B, class_of)


def profile_from_invariants(invariants, ks) -> dict[int, int]:
    out = {}
    for k in ks:
        n = 1
        for d in invariants:
            n *= gcd(k, d) if d else k
        out[k] = n
    return out


# --- groups -------------------------------------------------------------------

def derived_subgroup_oracle(G: FiniteGroup) -> set[int]:
    comms = {G.mul(G.mul(x, y), G.mul(G.inv(x), G.inv(y))) for x in G for y in G}
    return _closure(G, sorted(comms))


def conjugate_bruteforce(G: FiniteGroup, x: int, y: int) -> bool:
    return any(G.mul(G.mul(g, x), G.inv(g)) == y for g in G)


def element_order_counts(G: FiniteGroup) -> Counter:
    out = Counter()
    for x in G:
        k, y = 1, x
        while y != G.identity:
            y, k = G.mul(y, x), k + 1
        out[k] += 1
    return out


def abelian_order_counts(invariants) -> Counter:
    M = FGAbelianModule(tuple(invariants))
    out = Counter()
    for v in M.elements():
        k = 1
        while any(M.scale(k, v)):
            k += 1
        out[k] += 1
    return out


# --- norms and membership ------------------------------------------------------------

def norm_bruteforce(nc, s: int, b: int):
    """N(σ, b) from the definition, with the unreduced character value."""
    H, act, gamma = nc.H, nc.action, nc.gamma
    q = nc.ctx.qchar[s]
    sinv = gamma.inv(s)

    def power(x, k):
        y = H.identity
        for _ in range(k):
            y = H.mul(y, x)
        return y

    def phi(x):
        return act(sinv, power(x, q))

    acc = nc.abmap(b)
    x, n = phi(b), 1
    while not conjugate_bruteforce(H, x, b):
        acc = nc.hab.add(acc, nc.abmap(x))
        x, n = phi(x), n + 1
    return n, acc


def _verdict(inst, a, sigmas, norms) -> bool:
    ev = inst.pairing
    return all(ev(a[s], norms[(s, b)]) == 0 for s in sigmas for b in inst.nc.H)


def membership_bruteforce(inst, mode: str, box: int = 2) -> list[tuple[tuple, bool]]:
    """Direct verdicts on cocycles of M.

    For finite M every cocycle is enumerated. With a free part, each class
    representative is shifted by the coboundaries of all elements whose
    free coordinates lie in [-box, box].
    """
    from .cohom import coboundary0, h1_abelian

    sigmas = [inst.ctx.frobenius] if mode == "finite-field" else list(inst.ctx.gamma)
    nc, M = inst.nc, inst.M
    norms = {(s, b): norm_bruteforce(nc, s, b)[1] for s in sigmas for b in nc.H}
    if M.is_finite:
        cands = cocycles1(M)
    else:
        H1 = h1_abelian(M)
        ranges = [range(-box, box + 1) if d == 0 else range(d) for d in M.orders]
        shifts = [coboundary0(M, m).values for m in product(*ranges)]
        cands = []
        for c in H1.classes():
            rep = H1.representative(c).values
            cands.extend(tuple(M.add(x, y) for x, y in zip(rep, sh)) for sh in shifts)
    return [(a, _verdict(inst, a, sigmas, norms)) for a in cands]


def split_subgroup_order(rank: int, n: int, d: int) -> int:
    """|T[nd] ⋊ F| for split data."""
    return (n * d) ** rank * n


# --- full verification of an instance ----------------------------------------------

def _check(report: list, name: str, ok: bool, **detail) -> None:
    entry = {"check": name, "ok": bool(ok)}
    if detail:
        entry["detail"] = detail
    report.append(entry)


def verify_h1(M: FGAbelianModule, report: list) -> None:
    from .cohom import h1_abelian, h1_cyclic

    brute = h1_bruteforce(M)
    H1 = h1_abelian(M)
    prof = brute.order_profile(M)
    _check(report, "h1.order", H1.order == brute.order, calculator=H1.order, oracle=brute.order)
    _check(report, "h1.isomorphism", profile_from_invariants(H1.invariants, prof) == prof,
           invariants=list(H1.invariants))
    G = M.actor
    gen = next((g for g in G if G.element_orders[g] == G.order), None)
    if gen is not None:
        sq = h1_cyclic(M, gen)
        _check(report, "h1.kernel-image", profile_from_invariants(sq.invariants, prof) == prof
               and sq.order == brute.order, invariants=list(sq.invariants))
    mismatched = [a for a in brute.cocycles
                  if H1.class_of(_as_cocycle(M, a)) != H1.class_of(_as_cocycle(M, brute.class_of[a]))]
    _check(report, "h1.class-normal-form", not mismatched)


def _as_cocycle(M, values):
    from .cohom import Cocycle1Ab
    return Cocycle1Ab(M, tuple(values))


def verify_brnral(inst, report: list) -> None:
    from .brnral import brnral_char_zero, brnral_finite_field, kernel_comparison, real_orthogonality
    from .groups import derived_subgroup
    from .norms import q_norm

    nc = inst.nc
    H = nc.H
    D = set(derived_subgroup(H).elements)
    _check(report, "groups.derived-subgroup", D == derived_subgroup_oracle(H))
    _check(report, "groups.abelianization-order", nc.hab.order * len(D) == H.order)
    bad = [(s, b) for s in nc.gamma for b in H
           if (nc.n_period(s, b), nc.norm(s, b)) != norm_bruteforce(nc, s, b)]
    _check(report, "norms.definition", not bad, first=list(bad[0]) if bad else None)
    _check(report, "norms.phi-bijective",
           all(len(set(nc.phi_tables[s])) == H.order for s in nc.gamma))
    s = inst.ctx.frobenius
    if s is not None and inst.ctx.q is not None:
        frob = inst.nc.action.maps[s]
        bad = [b for b in H
               if q_norm(H, frob, inst.ctx.q, nc.abmap, nc.hab, b) != (nc.n_period(s, b), nc.norm(s, b))]
        _check(report, "norms.q-norm-agreement", not bad)
    modes = [("char-zero", brnral_char_zero)]
    if inst.ctx.frobenius is not None:
        modes.insert(0, ("finite-field", brnral_finite_field))
    kc = set(kernel_comparison(inst).kernel_classes())
    for mode, calc in modes:
        res = calc(inst)
        wrong = [a for a, verdict in membership_bruteforce(inst, mode)
                 if res.contains(res.ambient.class_of(_as_cocycle(inst.M, a))) != verdict]
        _check(report, f"brnral.{mode}.oracle", not wrong,
               members=list(res.invariants), first=[list(v) for v in wrong[0]] if wrong else None)
        _check(report, f"brnral.{mode}.kernel-inclusion", kc <= set(res.member_classes()))
        if mode == "char-zero":
            _check(report, "brnral.char-zero.finite-quotient", res.certificate["vanishing"])
    if inst.ctx.gamma.order == 2 and H.order <= 16:
        _check(report, "brnral.real-orthogonality", real_orthogonality(inst).all_orthogonal)


def verify_torf(data, report: list, max_level: int | None = None) -> None:
    from .torf import ExtensionLevel, build_finite_subgroup, corollary_variant, enlarge_subgroup, embed_F

    res = build_finite_subgroup(data, max_level=max_level)
    cert = res.certificate
    _check(report, "torf.certificate", cert["passed"],
           failed=sorted(k for k, v in cert.items() if v is False))
    lat = data.lattice
    nd = res.n * res.d
    if data.z.is_zero():
        E0 = ExtensionLevel(lat, 1, _zero_cocycle(lat))
        sec = [((), embed_F(lat, f)) for f in lat.F]  # T[1] is zero
        out = enlarge_subgroup(E0, sec, nd)
        _check(report, "torf.split-order", res.order == split_subgroup_order(lat.rank, res.n, res.d),
               order=res.order)
        _check(report, "torf.split-enlarge-agrees",
               out.order == res.order and len(out.torus_part) == cert["torus_order"])
    cor = corollary_variant(res)
    _check(report, "torf.corollary-enlarge", all(v for k, v in cor["checks"].items()
                                                  if isinstance(v, bool)),
           order=cor["order"], stated=cor["stated_order"])


def _zero_cocycle(lat):
    from .cohom import Cocycle2
    return Cocycle2.zero(lat.torsion_module(1))


def verify_instance(raw: dict, max_level: int | None = None) -> dict:
    """Run every applicable oracle on one instance file; report each comparison."""
    from .io import Instance

    inst = Instance(raw)
    report: list = []
    if "M" in raw and "H" not in raw:
        verify_h1(inst.module(), report)
    if "H" in raw:
        b = inst.brnral()
        if b.M.is_finite:
            verify_h1(b.M, report)
        verify_brnral(b, report)
    if "torf" in raw:
        verify_torf(inst.torf(), report, max_level)
    return {"ok": all(c["ok"] for c in report), "checks": report}

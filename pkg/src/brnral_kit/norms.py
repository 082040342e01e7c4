"""Twisted power maps b ↦ σ^{-1}(b^{q(σ)}), their conjugacy return periods,
and the induced norms into the abelianization."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .abmod import AbelianProjection, FGAbelianModule, GaloisContext, Vec
from .errors import InvariantError
from .groups import FiniteGroup, GroupAction, abelianization


def induced_abelian_action(action: GroupAction, hab: FGAbelianModule,
                           abmap: AbelianProjection) -> FGAbelianModule:
    """The Γ-module structure on H^ab coming from the action on H."""
    G, H = action.actor, action.space
    k = hab.ngens
    pre = []
    for j in range(k):
        e = hab.gen(j)
        b = next((x for x in H if abmap(x) == e), None)
        if b is None:
            raise InvariantError("abelianization map is not surjective", witness={"generator": j})
        pre.append(b)
    mats = []
    for s in G:
        cols = [abmap(action(s, b)) for b in pre]
        mats.append([[cols[j][i] for j in range(k)] for i in range(k)])
    return FGAbelianModule(hab.orders, G, tuple(mats))


@dataclass(frozen=True, eq=False)
class NormContext:
    ctx: GaloisContext
    action: GroupAction
    hab: FGAbelianModule
    abmap: AbelianProjection

    @classmethod
    def build(cls, ctx: GaloisContext, action: GroupAction,
              abmap: AbelianProjection | None = None) -> "NormContext":
        if abmap is None:
            hab, abmap = abelianization(action.space)
        else:
            hab = abmap.target
        hab = induced_abelian_action(action, hab, abmap)
        abmap = AbelianProjection(action.space, hab, abmap.images)
        return cls(ctx, action, hab, abmap)

    @property
    def H(self) -> FiniteGroup:
        return self.action.space

    @property
    def gamma(self) -> FiniteGroup:
        return self.ctx.gamma

    def validate(self) -> None:
        H, G = self.H, self.gamma
        if self.action.actor.order != G.order:
            raise InvariantError("H is acted on by a group other than the Galois group")
        self.action.validate()
        self.abmap.validate()
        if self.ctx.h % H.exponent:
            raise InvariantError("h is not a multiple of the exponent of H",
                                 witness={"h": self.ctx.h, "exponent": H.exponent})
        seen = {}
        for x in H:
            seen.setdefault(self.abmap(x), x)
        if len(seen) != self.hab.order:
            raise InvariantError("abelianization map is not surjective")
        from .groups import derived_subgroup
        D = set(derived_subgroup(H).elements)
        kernel = {x for x in H if not any(self.abmap(x))}
        if kernel != D:
            raise InvariantError("kernel of the abelianization map is not the derived subgroup",
                                 witness={"element": min(kernel ^ D)})
        for s in G:
            for b in H:
                if self.abmap(self.action(s, b)) != self.hab.act(s, self.abmap(b)):
                    raise InvariantError("Galois action on H^ab does not match the action on H",
                                         witness={"sigma": s, "b": b})

    def exponent_for(self, s: int) -> int:
        return self.ctx.qchar[s] % self.H.exponent

    @cached_property
    def _inverse_maps(self) -> tuple[tuple[int, ...], ...]:
        G = self.gamma
        return tuple(self.action.maps[G.inv(s)] for s in G)

    def phi(self, s: int, b: int) -> int:
        """σ^{-1}(b^{q(σ)})"""
        H = self.H
        q = self.exponent_for(s)
        if gcd(q, H.element_orders[b]) != 1:
            raise InvariantError("qchar value is not coprime to the element order",
                                 witness={"sigma": s, "b": b, "q": q})
        return self._inverse_maps[s][H.power(b, q)]

    @cached_property
    def phi_tables(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.phi(s, b) for b in self.H) for s in self.gamma)

    def n_period(self, s: int, b: int) -> int:
        return self._period_and_norm(s, b)[0]

    def norm(self, s: int, b: int) -> Vec:
        return self._period_and_norm(s, b)[1]

    @cached_property
    def _norm_cache(self) -> dict:
        return {}

    def _period_and_norm(self, s: int, b: int) -> tuple[int, Vec]:
        key = (s, b)
        cache = self._norm_cache
        if key not in cache:
            H = self.H
            table = self.phi_tables[s]
            target = H.class_index[b]
            acc = self.abmap(b)
            x = table[b]
            n = 1
            while H.class_index[x] != target:
                acc = self.hab.add(acc, self.abmap(x))
                x = table[x]
                n += 1
                if n > H.order:
                    raise InvariantError("φ-orbit never returns to the conjugacy class",
                                         witness={"sigma": s, "b": b})
            cache[key] = (n, acc)
        return cache[key]

    def norm_table(self) -> list[dict]:
        return [{"sigma": s, "b": b, "n": self.n_period(s, b), "norm": list(self.norm(s, b))}
                for s in self.gamma for b in self.H]

    def distinct_norms(self, s: int) -> dict[Vec, int]:
        """Each norm value N(σ, ·) mapped to the smallest b attaining it."""
        out: dict[Vec, int] = {}
        for b in self.H:
            out.setdefault(self.norm(s, b), b)
        return out


def q_norm(H: FiniteGroup, frobenius_map, q: int, abmap: AbelianProjection,
           hab: FGAbelianModule, b: int) -> tuple[int, Vec]:
    """Finite-field q-norm from the raw field size ``q``.

    ``frobenius_map`` is the permutation of H induced by the Frobenius. This
    path inverts that permutation directly and exponentiates by the unreduced
    ``q``; conjugacy is decided by an explicit search.
    """
    inv = [0] * H.order
    for x, y in enumerate(frobenius_map):
        inv[y] = x

    def step(x: int) -> int:
        return inv[H.power(x, q)]

    def conjugate(x: int, y: int) -> bool:
        return any(H.mul(H.mul(g, x), H.inv(g)) == y for g in H)

    acc = abmap(b)
    x = step(b)
    n = 1
    while not conjugate(x, b):
        acc = hab.add(acc, abmap(x))
        x = step(x)
        n += 1
    return n, acc

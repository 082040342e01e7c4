"""Deterministic generator and loader for the bundled instance corpus.

The corpus has three families, each stored as instance files under
``brnral_kit/data``:

* ``h1-*``: a cyclic Γ of order ≤ 6 acting on an abelian group of order ≤ 16;
* ``br-*``: Brauer membership problems (H with a Γ-action, M, ev);
* ``torf-*``: split and non-split torus extension data.

``python -m brnral_kit.corpus`` rewrites the bundled files; the test suite
checks that the bundled copy matches a fresh generation.
"""

from __future__ import annotations

import random
from functools import lru_cache
from importlib import resources
from itertools import product
from math import gcd
from pathlib import Path
from typing import Iterator

from .abmod import EvalPairing, FGAbelianModule, GaloisContext, dual_module
from .brnral import BrnralInstance
from .cohom import coboundary1, generating_set
from .errors import InvariantError
from .groups import (FiniteGroup, GroupAction, alternating, automorphism_from_images, cyclic,
                     dihedral, direct_product, quaternion, symmetric)
from .io import brnral_to_dict, dumps, module_to_dict, read_json, torf_to_dict
from .linalg import identity, matmul
from .norms import NormContext
from .torf import TorusLattice, make_torf_data

SEED = 20240611
CORPUS_PACKAGE = "brnral_kit.data"


# --- automorphisms -------------------------------------------------------------

@lru_cache(maxsize=None)
def _group_cache(name: str) -> FiniteGroup:
    return GROUPS[name]()


GROUPS = {
    "C1": lambda: cyclic(1), "C2": lambda: cyclic(2), "C3": lambda: cyclic(3),
    "C4": lambda: cyclic(4), "C5": lambda: cyclic(5), "C6": lambda: cyclic(6),
    "C8": lambda: cyclic(8), "C2xC2": lambda: direct_product(cyclic(2), cyclic(2)),
    "C3xC3": lambda: direct_product(cyclic(3), cyclic(3)),
    "S3": lambda: symmetric(3), "D4": lambda: dihedral(4), "Q8": quaternion,
    "D5": lambda: dihedral(5), "A4": lambda: alternating(4),
    "C2xS3": lambda: direct_product(cyclic(2), symmetric(3)),
    "S4": lambda: symmetric(4), "A5": lambda: alternating(5),
}


def group(name: str) -> FiniteGroup:
    return _group_cache(name)


@lru_cache(maxsize=None)
def group_automorphisms(name: str) -> tuple[tuple[int, ...], ...]:
    """All automorphisms of a named group, as sorted image tables."""
    G = group(name)
    gens = generating_set(G)
    orders = G.element_orders
    cands = [[y for y in G if orders[y] == orders[g]] for g in gens]
    out = set()
    for images in product(*cands):
        try:
            m = automorphism_from_images(G, gens, images)
        except InvariantError:
            continue
        if len(set(m)) == G.order and all(m[G.mul(x, y)] == G.mul(m[x], m[y])
                                          for x in gens for y in G):
            out.add(m)
    return tuple(sorted(out))


def _compose(a, b):
    return tuple(a[b[x]] for x in range(len(b)))


def _perm_order(a) -> int:
    e = tuple(range(len(a)))
    x, k = a, 1
    while x != e:
        x, k = _compose(a, x), k + 1
    return k


def cyclic_perm_action(gamma: FiniteGroup, G: FiniteGroup, aut) -> GroupAction:
    """Γ = Z/n (generator 1) acting through powers of ``aut``."""
    maps = [tuple(range(G.order))]
    for _ in range(1, gamma.order):
        maps.append(_compose(aut, maps[-1]))
    return GroupAction(gamma, G, tuple(maps))


def module_automorphisms(orders: tuple[int, ...]) -> list[tuple[tuple[int, ...], ...]]:
    """Automorphisms of ⊕ Z/d_i as matrices (columns = images of generators)."""
    M = FGAbelianModule(orders)
    elems = M.elements()
    k = len(orders)
    cols = [[v for v in elems if not any(M.scale(d, v))] for d in orders]
    out = []
    for choice in product(*cols):
        A = tuple(tuple(choice[j][i] for j in range(k)) for i in range(k))
        img = {M.reduce([sum(A[i][j] * v[j] for j in range(k)) for i in range(k)]) for v in elems}
        if len(img) == len(elems):
            out.append(A)
    return sorted(out)


def _mat_power_is_identity(A, n: int, orders) -> bool:
    k = len(orders)
    P = identity(k)
    for _ in range(n):
        P = [[v % d for v in row] for row, d in zip(matmul(A, P), orders)]
    return P == identity(k)


# --- H^1 instances ---------------------------------------------------------------

H1_MODULES = [(2,), (3,), (4,), (5,), (6,), (7,), (8,), (9,), (10,), (12,), (16,),
              (2, 2), (2, 4), (2, 6), (3, 3), (2, 8), (4, 4), (2, 2, 2), (2, 2, 4)]


def h1_instances(rng: random.Random) -> Iterator[tuple[str, dict]]:
    for orders in H1_MODULES:
        auts = module_automorphisms(orders)
        for n in range(1, 7):
            ok = [A for A in auts if _mat_power_is_identity(A, n, orders)]
            nontrivial = [A for A in ok if A != tuple(tuple(r) for r in identity(len(orders)))]
            picks = [rng.choice(nontrivial)] if nontrivial else []
            if n in (1, 2) or not picks:
                picks.append(tuple(tuple(r) for r in identity(len(orders))))
            if n > 1 and not nontrivial and n not in (2, 3):
                continue
            gamma = cyclic(n)
            for i, A in enumerate(picks):
                mats = [identity(len(orders))]
                for _ in range(1, n):
                    mats.append([[v % d for v in row] for row, d in zip(matmul(A, mats[-1]), orders)])
                M = FGAbelianModule(orders, gamma, tuple(mats))
                M.validate()
                ctx = GaloisContext.trivial_character(gamma, 1)
                name = f"h1-M{'x'.join(map(str, orders))}-C{n}-{i}"
                yield name, module_to_dict(ctx, M, {"family": "h1"})


# --- membership instances ------------------------------------------------------------

def _units_of_order_dividing(h: int, n: int) -> list[int]:
    return [u for u in range(1, h + 1) if gcd(u, h) == 1 and pow(u, n, h) == 1 % h] or [1]


def _direct_sum(A: FGAbelianModule, B: FGAbelianModule) -> FGAbelianModule:
    ka, kb = A.ngens, B.ngens
    mats = []
    for g in A.actor:
        top = [list(r) + [0] * kb for r in A.matrix(g)]
        bot = [[0] * ka + list(r) for r in B.matrix(g)]
        mats.append(top + bot)
    return FGAbelianModule(A.orders + B.orders, A.actor, tuple(mats))


def with_extra_summand(D: FGAbelianModule, ev: EvalPairing, extra: FGAbelianModule,
                       chi=None) -> tuple[FGAbelianModule, EvalPairing]:
    """M = extra ⊕ D, ev extended by χ on the extra generator (zero by default)."""
    M = _direct_sum(extra, D)
    h = ev.h
    e = ev.right.orders
    rows = []
    for i in range(extra.ngens):
        if chi is not None and i == 0:
            rows.append(tuple(chi[j] * (h // e[j]) % h for j in range(len(e))))
        else:
            rows.append((0,) * len(e))
    return M, EvalPairing(M, ev.right, h, tuple(rows) + ev.table)


def _make_brnral(ctx: GaloisContext, act: GroupAction, variant: str, rng: random.Random):
    nc = NormContext.build(ctx, act)
    D, ev = dual_module(nc.hab, ctx)
    gamma = ctx.gamma
    if variant == "dual":
        M = D
    elif variant == "killed":
        extra = FGAbelianModule.trivial((2,), gamma)
        M, ev = with_extra_summand(D, ev, extra)
    elif variant == "free":
        fixed = [v for v in D.fixed_elements() if any(v)]
        chi = rng.choice(fixed) if fixed else None
        extra = FGAbelianModule.trivial((0,), gamma)
        M, ev = with_extra_summand(D, ev, extra, chi)
    elif variant == "sign":
        sign = tuple([[-1 if _is_odd(gamma, s) else 1]] for s in gamma)
        extra = FGAbelianModule((0,), gamma, sign)
        anti = [v for v in D.elements() if D.act(1, v) == D.neg(v)]
        M, ev = with_extra_summand(D, ev, extra, rng.choice(anti))
    else:
        raise ValueError(variant)
    inst = BrnralInstance(ctx, nc, M, ev, {"variant": variant})
    inst.validate()
    return inst


def _is_odd(gamma: FiniteGroup, s: int) -> bool:
    """Sign character of a cyclic group of even order (generator 1)."""
    return s % 2 == 1


BR_GROUPS = ["C2", "C3", "C4", "C5", "C6", "C8", "C2xC2", "C3xC3", "S3", "D4", "Q8", "D5",
             "A4", "C2xS3", "S4", "A5"]


def random_brnral_instance(rng: random.Random, groups=BR_GROUPS, gamma_orders=(1, 2, 3, 4, 6),
                           real: bool | None = None) -> BrnralInstance:
    """A random valid membership instance with cyclic Γ and a Frobenius."""
    name = rng.choice(groups)
    H = group(name)
    n = rng.choice(gamma_orders)
    auts = [a for a in group_automorphisms(name) if n % _perm_order(a) == 0]
    aut = rng.choice(auts)
    gamma = cyclic(n)
    act = cyclic_perm_action(gamma, H, aut)
    h = H.exponent * rng.choice((1, 1, 2))
    if real is True and n == 2:
        u = -1 % h
    else:
        u = rng.choice(_units_of_order_dividing(h, n))
    qchar = tuple(pow(u, s, h) for s in gamma)
    ctx = GaloisContext(gamma, h, qchar, frobenius=1 % n, q=u + h)
    variants = ["dual", "killed", "free"] + (["sign"] if n % 2 == 0 else [])
    return _make_brnral(ctx, act, rng.choice(variants), rng)


def brnral_instances(rng: random.Random) -> Iterator[tuple[str, dict]]:
    count = 0
    for name in BR_GROUPS:
        H = group(name)
        auts = group_automorphisms(name)
        for n in (1, 2, 3, 4):
            usable = [a for a in auts if n % _perm_order(a) == 0]
            nontrivial = [a for a in usable if a != tuple(range(H.order))]
            choices = [tuple(range(H.order))] + ([rng.choice(nontrivial)] if nontrivial else [])
            if n == 1:
                choices = choices[:1]
            for aut in choices:
                gamma = cyclic(n)
                act = cyclic_perm_action(gamma, H, aut)
                h = H.exponent
                units = _units_of_order_dividing(h, n)
                qs = [1] if n == 1 else sorted({1, rng.choice(units)})
                if n == 2 and h > 2:
                    qs = sorted(set(qs) | {h - 1})
                for u in qs:
                    qchar = tuple(pow(u, s, h) for s in gamma)
                    ctx = GaloisContext(gamma, h, qchar, frobenius=1 % n, q=u + h)
                    variants = ["dual", "killed", "free"] + (["sign"] if n % 2 == 0 else [])
                    tag = "triv" if aut == tuple(range(H.order)) else "aut"
                    chosen = [variants[count % len(variants)]]
                    count += 1
                    if tag == "triv" and "dual" not in chosen:
                        chosen.insert(0, "dual")
                    for variant in chosen:
                        inst = _make_brnral(ctx, act, variant, rng)
                        yield (f"br-{name}-C{n}-{tag}-q{u}-{variant}",
                               brnral_to_dict(inst, "finite-field"))
    # a noncyclic Galois group (char-zero only)
    for name in ("C2xC2", "S3", "D4"):
        H = group(name)
        gamma = direct_product(cyclic(2), cyclic(2))
        auts = [a for a in group_automorphisms(name) if _perm_order(a) <= 2]
        a1 = auts[len(auts) // 2]
        commuting = [b for b in auts if _compose(a1, b) == _compose(b, a1)]
        a2 = commuting[-1]
        e = tuple(range(H.order))
        # element (x, y) of C2 x C2 has index 2x + y
        maps = (e, a2, a1, _compose(a1, a2))
        act = GroupAction(gamma, H, maps)
        h = H.exponent * 2
        units = [u for u in range(1, h) if gcd(u, h) == 1 and u * u % h == 1]
        u1, u2 = units[-1], units[1 % len(units)]
        qchar = (1, u2, u1, u1 * u2 % h)
        ctx = GaloisContext(gamma, h, qchar)
        inst = _make_brnral(ctx, act, "killed", rng)
        yield f"br-{name}-C2xC2-noncyclic", brnral_to_dict(inst, "char-zero")
    # trivial H: every class is a member
    gamma = cyclic(2)
    ctx = GaloisContext(gamma, 2, (1, 1), frobenius=1, q=3)
    H = cyclic(1)
    nc = NormContext.build(ctx, GroupAction.trivial(gamma, H))
    M = FGAbelianModule.trivial((2,), gamma)
    inst = BrnralInstance(ctx, nc, M, EvalPairing(M, nc.hab, 2, ((),)), {"variant": "trivial-H"})
    inst.validate()
    yield "br-C1-C2-trivialH", brnral_to_dict(inst, "finite-field")


# --- torus data ------------------------------------------------------------------

def a2_matrix(p) -> list[list[int]]:
    """Permutation p of {0,1,2} on the root lattice with basis e0−e1, e1−e2."""
    def img(i, j):
        v = [0, 0, 0]
        v[p[i]] += 1
        v[p[j]] -= 1
        return [v[0], v[0] + v[1]]
    c1, c2 = img(0, 1), img(1, 2)
    return [[c1[0], c2[0]], [c1[1], c2[1]]]


def _perms_of(G: FiniteGroup) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in lab.strip("[]").split()) for lab in G.labels]


def _carry(n: int, a: int, b: int) -> int:
    return 1 if a + b >= n else 0


def _perturb(data, rng: random.Random):
    """Add the coboundary of a random normalized cochain (same class, messier cocycle)."""
    T = data.z.module
    Q = data.lattice.Q
    y = [T.zero] + [T.reduce([rng.randrange(data.M0) for _ in range(data.lattice.rank)])
                    for _ in range(Q.order - 1)]
    if Q.identity != 0:
        y[0], y[Q.identity] = y[Q.identity], y[0]
    z = data.z - coboundary1(T, y)
    from .torf import TorfExtensionData
    return TorfExtensionData(data.ctx, data.lattice, data.M0, z, data.meta)


def torf_data_list(rng: random.Random) -> Iterator[tuple[str, object]]:
    triv2 = cyclic(1)
    C2, C3, C4 = cyclic(2), cyclic(3), cyclic(4)
    neg = [[-1]]

    def lattice(gamma, F, ga, fa, outer=None):
        outer = outer or GroupAction.trivial(gamma, F)
        lat = TorusLattice(len(ga[0]), gamma, F, tuple(ga), tuple(fa), outer)
        lat.validate()
        return lat

    def ctx(gamma):
        return GaloisContext.trivial_character(gamma, 2)

    # split, rank 1
    lat = lattice(triv2, C2, [[[1]]], [[[1]], neg])
    yield "torf-split-C2-sign-r1", make_torf_data(ctx(triv2), lat, 1, [], {"d": 1})
    lat = lattice(C2, C2, [[[1]], neg], [[[1]], neg])
    yield "torf-split-C2-sign-galois-sign", make_torf_data(ctx(C2), lat, 1, [], {"d": 2})
    # split, rank 2, swap
    swap = [[0, 1], [1, 0]]
    lat = lattice(triv2, C2, [identity(2)], [identity(2), swap])
    yield "torf-split-C2-swap-r2", make_torf_data(ctx(triv2), lat, 1, [], {"d": 1})
    # S3 on the A2 lattice
    S3 = symmetric(3)
    fa = [a2_matrix(p) for p in _perms_of(S3)]
    lat = lattice(triv2, S3, [identity(2)], fa)
    yield "torf-split-S3-A2", make_torf_data(ctx(triv2), lat, 1, [], {"d": 1})
    # Z/3 rotating A2, Γ = Z/2 acting by a reflection and inverting F
    rot = a2_matrix((1, 2, 0))
    rot2 = matmul(rot, rot)
    refl = a2_matrix((1, 0, 2))
    outer = GroupAction(C2, C3, ((0, 1, 2), (0, 2, 1)))
    lat = lattice(C2, C3, [identity(2), refl], [identity(2), rot, rot2], outer)
    yield "torf-split-C3-A2-reflection", make_torf_data(ctx(C2), lat, 1, [], {"d": 2})

    # non-split: Z/2 over Z with carry (the Z/4 extension)
    lat = lattice(triv2, C2, [[[1]]], [[[1]], [[1]]])
    z = [{"on": [1, 1], "value": [1]}]
    base = make_torf_data(ctx(triv2), lat, 2, z, {"d": 1})
    yield "torf-nonsplit-C2-carry", base
    # non-split: F = Z/2 by sign, f^2 = 1/2, Γ = Z/2 by sign
    lat = lattice(C2, C2, [[[1]], neg], [[[1]], neg])
    Q = lat.Q
    z = [{"on": [x, y], "value": [1]} for x in Q for y in Q
         if x % 2 == 1 and y % 2 == 1]
    base = make_torf_data(ctx(C2), lat, 2, z, {"d": 2})
    yield "torf-nonsplit-C2-sign-galois-sign", base
    yield "torf-nonsplit-C2-sign-galois-sign-perturbed", _perturb(base, rng)
    # non-split: Z/4 carry, Γ = Z/2 acting trivially
    lat = lattice(C2, C4, [[[1]], [[1]]], [[[1]]] * 4)
    Q = lat.Q
    z = [{"on": [x, y], "value": [_carry(4, x % 4, y % 4)]} for x in Q for y in Q]
    base = make_torf_data(ctx(C2), lat, 4, z, {"d": 1})
    yield "torf-nonsplit-C4-carry-perturbed", _perturb(base, rng)
    # non-split: Z/3 carry along (1, 1), Γ = Z/2 swapping coordinates
    lat = lattice(C2, C3, [identity(2), swap], [identity(2)] * 3)
    Q = lat.Q
    z = [{"on": [x, y], "value": [_carry(3, x % 3, y % 3)] * 2} for x in Q for y in Q]
    base = make_torf_data(ctx(C2), lat, 3, z, {"d": 2})
    yield "torf-nonsplit-C3-diag-swap", base
    yield "torf-nonsplit-C3-diag-swap-perturbed", _perturb(base, rng)


def torf_instances(rng: random.Random) -> Iterator[tuple[str, dict]]:
    for name, data in torf_data_list(rng):
        data.validate()
        yield name, torf_to_dict(data)


# --- bundling -------------------------------------------------------------------

def generate() -> dict[str, dict]:
    rng = random.Random(SEED)
    out: dict[str, dict] = {}
    for family in (h1_instances, brnral_instances, torf_instances):
        for name, inst in family(rng):
            if name in out:
                raise RuntimeError(f"duplicate corpus name {name}")
            out[name] = inst
    return dict(sorted(out.items()))


def corpus_dir() -> Path:
    return Path(str(resources.files(CORPUS_PACKAGE)))


def write_corpus(target: Path | None = None) -> int:
    target = Path(target) if target else corpus_dir()
    target.mkdir(parents=True, exist_ok=True)
    for old in target.glob("*.json"):
        old.unlink()
    items = generate()
    for name, inst in items.items():
        (target / f"{name}.json").write_text(dumps(inst), encoding="utf-8")
    return len(items)


def load_corpus(prefix: str = "") -> dict[str, dict]:
    """Bundled instances whose name starts with ``prefix``, keyed by name."""
    base = corpus_dir()
    return {p.stem: read_json(p) for p in sorted(base.glob(f"{prefix}*.json"))}


if __name__ == "__main__":
    print(f"wrote {write_corpus()} instances to {corpus_dir()}")

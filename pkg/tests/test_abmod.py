from fractions import Fraction
from itertools import product
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brnral_kit.abmod import (EvalPairing, FGAbelianModule, GaloisContext, ModuleMorphism,
                              coinvariants_and_fixed, dual_module)
from brnral_kit.errors import InvariantError
from brnral_kit.groups import cyclic

from conftest import h1_modules


def _units_of_order_dividing(h, n):
    return [u for u in range(1, h + 1) if gcd(u, h) == 1 and pow(u, n, h) == 1 % h]


def _context(M, data):
    G = M.actor
    h = M.exponent * data.draw(st.sampled_from([1, 2]))
    u = data.draw(st.sampled_from(_units_of_order_dividing(h, G.order)))
    return GaloisContext(G, h, tuple(pow(u, s, h) for s in G), frobenius=1 % G.order, q=u)


modules = st.sampled_from([m for _, m in h1_modules()])


def _character_value(D, ev, chi, x):
    return ev.fraction(chi, x)


# --- dual module -------------------------------------------------------------------

def test_dual_of_Z2():
    C2 = cyclic(2)
    ctx = GaloisContext.trivial_character(C2, 2)
    D, ev = dual_module(FGAbelianModule.trivial((2,), C2), ctx)
    assert D.invariants == (2,)
    assert ev.fraction((1,), (1,)) == Fraction(1, 2)
    assert ev.fraction((1,), (0,)) == 0


def test_dual_of_Z4_negation():
    C2 = cyclic(2)
    N = FGAbelianModule((4,), C2, ([[1]], [[-1]]))
    D, ev = dual_module(N, GaloisContext.trivial_character(C2, 4))
    assert D.invariants == (4,)
    for chi in D.elements():
        assert D.act(1, chi) == D.neg(chi)
        for x in N.elements():
            assert ev(D.act(1, chi), x) == ev(chi, N.act(1, x))


def test_dual_preserves_invariants():
    G = cyclic(1)
    N = FGAbelianModule.trivial((2, 6), G)
    D, _ = dual_module(N, GaloisContext.trivial_character(G, 6))
    assert D.invariants == N.invariants == (2, 6)


def test_dual_rejects_bad_exponent():
    G = cyclic(1)
    with pytest.raises(InvariantError):
        dual_module(FGAbelianModule.trivial((4,), G), GaloisContext.trivial_character(G, 2))
    with pytest.raises(InvariantError):
        dual_module(FGAbelianModule.trivial((0,), G), GaloisContext.trivial_character(G, 2))


@given(modules, st.data())
def test_dual_pairing_is_perfect_and_equivariant(N, data):
    ctx = _context(N, data)
    D, ev = dual_module(N, ctx)
    D.validate()
    ev.validate(ctx)
    elems = N.elements()
    # every character of N appears exactly once
    seen = {tuple(ev(chi, x) for x in elems) for chi in D.elements()}
    assert len(seen) == D.order == N.order
    for s, chi, x in product(ctx.gamma, D.elements(), elems):
        assert ev(D.act(s, chi), N.act(s, x)) == ctx.qchar[s] * ev(chi, x) % ctx.h


@given(modules, st.data())
def test_double_dual_is_equivariantly_isomorphic(N, data):
    ctx = _context(N, data)
    D, ev = dual_module(N, ctx)
    DD, ev2 = dual_module(D, ctx)
    assert DD.invariants == N.invariants
    # x ↦ ev(·, x) is the canonical map N → DD
    for x in N.elements():
        img = next(psi for psi in DD.elements()
                   if all(ev2(psi, chi) == ev(chi, x) for chi in D.elements()))
        for s in ctx.gamma:
            sx = N.act(s, x)
            assert all(ev2(DD.act(s, img), chi) == ev(chi, sx) for chi in D.elements())


# --- coinvariants and fixed points ---------------------------------------------------

def test_coinvariants_trivial_action():
    C3 = cyclic(3)
    M = FGAbelianModule.trivial((2, 4), C3)
    coinv, fixed = coinvariants_and_fixed(M)
    assert coinv.invariants == fixed.invariants == (2, 4)


def test_coinvariants_Z4_negation():
    C2 = cyclic(2)
    M = FGAbelianModule((4,), C2, ([[1]], [[-1]]))
    coinv, fixed = coinvariants_and_fixed(M)
    assert fixed.invariants == (2,)
    assert coinv.invariants == (2,)
    assert {tuple(v % 4 for v in fixed.element(c)) for c in fixed.elements()} == {(0,), (2,)}


def test_coinvariants_Z_sign():
    C2 = cyclic(2)
    M = FGAbelianModule((0,), C2, ([[1]], [[-1]]))
    coinv, fixed = coinvariants_and_fixed(M)
    assert fixed.invariants == ()
    assert coinv.invariants == (2,)


@given(modules)
def test_fixed_points_match_enumeration(M):
    coinv, fixed = coinvariants_and_fixed(M)
    assert fixed.order == len(M.fixed_elements())
    # |M_Γ| = |M| / |Σ (σ-1)M| for finite M
    span = {M.zero}
    diffs = {M.sub(M.act(g, v), v) for g in M.actor for v in M.elements()}
    frontier = list(span)
    while frontier:
        nxt = []
        for x in frontier:
            for d in diffs:
                y = M.add(x, d)
                if y not in span:
                    span.add(y)
                    nxt.append(y)
        frontier = nxt
    assert coinv.order * len(span) == M.order


# --- validation and serialization ---------------------------------------------------

def test_module_validation():
    C2 = cyclic(2)
    FGAbelianModule((4,), C2, ([[1]], [[3]])).validate()
    with pytest.raises(InvariantError):
        FGAbelianModule((4,), C2, ([[1]], [[2]])).validate()   # not a homomorphism
    with pytest.raises(InvariantError):
        FGAbelianModule((0, 2), C2, ([[1, 0], [0, 1]], [[1, 1], [0, 1]])).validate()


@given(modules)
def test_module_roundtrip(M):
    back = FGAbelianModule.from_dict(M.to_dict(), M.actor)
    assert back.orders == M.orders
    assert all(back.matrix(g) == M.matrix(g) for g in M.actor)


def test_galois_context_validation():
    C2 = cyclic(2)
    GaloisContext(C2, 4, (1, 3), frobenius=1, q=7).validate()
    with pytest.raises(InvariantError):
        GaloisContext(C2, 4, (1, 2)).validate()
    with pytest.raises(InvariantError):
        GaloisContext(C2, 4, (1, 3), frobenius=1, q=5).validate()
    with pytest.raises(InvariantError):
        GaloisContext(cyclic(4), 5, (1, 2, 4, 3), frobenius=2, q=4).validate()


def test_pairing_validation():
    C2 = cyclic(2)
    ctx = GaloisContext(C2, 2, (1, 1))
    L = FGAbelianModule.trivial((2,), C2)
    with pytest.raises(InvariantError):
        EvalPairing(L, FGAbelianModule.trivial((3,), C2), 2, ((1,),)).validate()
    R = FGAbelianModule((4,), C2, ([[1]], [[-1]]))
    EvalPairing(L, R, 2, ((1,),)).validate(ctx)   # values of order 2 survive negation
    ctx4 = GaloisContext(C2, 4, (1, 1))
    ev = EvalPairing(FGAbelianModule.trivial((4,), C2), R, 4, ((1,),))
    with pytest.raises(InvariantError):
        ev.validate(ctx4)


def test_pairing_roundtrip():
    G = cyclic(1)
    L = FGAbelianModule.trivial((2, 4), G)
    R = FGAbelianModule.trivial((4,), G)
    ev = EvalPairing(L, R, 4, ((2,), (3,)))
    assert EvalPairing.from_dict(ev.to_dict(), L, R, 4).table == ev.table
    assert ev.to_dict()["table"] == [["1/2"], ["3/4"]]


def test_module_morphism_validation_and_kernel():
    C2 = cyclic(2)
    A = FGAbelianModule.trivial((4,), C2)
    B = FGAbelianModule.trivial((2,), C2)
    f = ModuleMorphism(A, B, [[1]])
    f.validate()
    K = f.kernel_coords()
    assert K.order == 2
    with pytest.raises(InvariantError):
        ModuleMorphism(B, A, [[1]]).validate()

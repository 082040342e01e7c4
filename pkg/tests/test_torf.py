import logging
import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brnral_kit.abmod import GaloisContext
from brnral_kit.cohom import Cocycle2, check_cocycle2, h1_nonabelian
from brnral_kit.corpus import load_corpus, symmetric
from brnral_kit.errors import InvariantError
from brnral_kit.groups import GroupAction, cyclic, direct_product
from brnral_kit.io import Instance
from brnral_kit.linalg import identity
from brnral_kit.torf import (ExtensionLevel, TorfExtensionData, TorusLattice, _lift,
                             ambient_geometric, build_finite_subgroup, corollary_variant,
                             embed_F, enlarge_subgroup, h1_surjectivity_report, make_torf_data,
                             phi_preimage, semidirect, torsion_module)

from conftest import corpus

NEG = [[-1]]


def lattice(gamma, F, ga, fa, outer=None):
    lat = TorusLattice(len(ga[0]), gamma, F, tuple(ga), tuple(fa),
                       outer or GroupAction.trivial(gamma, F))
    lat.validate()
    return lat


def sign_lattice():
    return lattice(cyclic(1), cyclic(2), [[[1]]], [[[1]], NEG])


def torf(name):
    return Instance(corpus("torf-")[name]).torf()


def _ctx(gamma):
    return GaloisContext.trivial_character(gamma, 2)


# --- torsion modules -------------------------------------------------------------

def test_torsion_module_examples():
    lat = sign_lattice()
    assert torsion_module(lat, 1).order == 1
    triv = lattice(cyclic(1), cyclic(1), [[[1]]], [[[1]]])
    assert torsion_module(triv, 6).invariants == (6,)
    swap = [[0, 1], [1, 0]]
    lat2 = lattice(cyclic(2), cyclic(1), [identity(2), swap], [identity(2)])
    T = lat2.torsion_module(2, over="gamma")
    assert len(T.elements()) == 4
    assert T.act(1, (1, 0)) == (0, 1)
    assert sorted(T.fixed_elements()) == [(0, 0), (1, 1)]


def test_torsion_module_rejects_bad_level():
    with pytest.raises(InvariantError):
        sign_lattice().torsion_module(0)


@pytest.mark.parametrize("name", ["torf-split-S3-A2", "torf-split-C3-A2-reflection",
                                  "torf-nonsplit-C3-diag-swap"])
@pytest.mark.parametrize("N,K", [(1, 2), (2, 3), (3, 2), (2, 2)])
def test_torsion_inclusions_commute_with_action(name, N, K):
    lat = torf(name).lattice
    small, big = lat.torsion_module(N), lat.torsion_module(N * K)
    r = lat.rank
    for q in lat.Q:
        for t in small.elements():
            assert big.reduce(_lift(small.act(q, t), K, r)) == big.act(q, _lift(t, K, r))


def test_lattice_validation():
    C2 = cyclic(2)
    with pytest.raises(InvariantError):
        lattice(cyclic(1), C2, [[[1]]], [[[1]], [[2]]])
    with pytest.raises(InvariantError):
        lattice(cyclic(1), C2, [[[1]]], [[[1]], [[1], [0]]])
    # Γ inverting the lattice must also invert F-action data consistently
    swap = [[0, 1], [1, 0]]
    with pytest.raises(InvariantError):
        lattice(C2, C2, [identity(2), swap], [identity(2), [[1, 0], [0, -1]]])


# --- semidirect products ---------------------------------------------------------

def test_semidirect_examples():
    C2, C3 = cyclic(2), cyclic(3)
    Q = semidirect(C3, C2, GroupAction.trivial(C2, C3))
    assert Q.order == 6 and Q.is_abelian()
    assert max(Q.element_orders) == 6
    S = semidirect(C3, C2, GroupAction(C2, C3, ((0, 1, 2), (0, 2, 1))))
    S.validate()
    assert S.order == 6 and not S.is_abelian()
    assert sorted(S.element_orders) == sorted(symmetric(3).element_orders)


def test_embeddings_into_semidirect():
    data = torf("torf-split-C3-A2-reflection")
    lat = data.lattice
    Q = lat.Q
    assert Q.order == lat.F.order * lat.gamma.order
    for f, g in product(lat.F, lat.F):
        assert Q.mul(embed_F(lat, f), embed_F(lat, g)) == embed_F(lat, lat.F.mul(f, g))
    inc = data.gamma_inclusion
    inc.validate()


# --- φ preimages ----------------------------------------------------------------

def test_phi_preimage_examples():
    lat = sign_lattice()
    assert phi_preimage(lat, 1, 2, [()]) == [(0,), (1,)]
    assert len(phi_preimage(lat, 3, 2, [(x,) for x in range(3)])) == 6
    assert len(phi_preimage(lat, 2, 3, [(0,), (1,)])) == 6


@given(st.sampled_from([1, 2, 3, 4]), st.sampled_from([1, 2, 3]), st.integers(1, 2), st.data())
def test_phi_preimage_order(N, m, r, data):
    lat = lattice(cyclic(1), cyclic(1), [identity(r)], [identity(r)])
    gens = data.draw(st.lists(st.tuples(*[st.integers(0, N - 1)] * r), max_size=2))
    S = {(0,) * r}
    frontier = list(S)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % N for a, b in zip(x, g))
                if y not in S:
                    S.add(y)
                    nxt.append(y)
        frontier = nxt
    pre = phi_preimage(lat, N, m, sorted(S))
    assert len(pre) == len(S) * m ** r
    assert all(tuple(m * v % (m * N) for v in t) in {tuple(m * s for s in x) for x in S}
               for t in pre)
    kernel = {t for t in product(range(m * N), repeat=r) if all(m * v % (m * N) == 0 for v in t)}
    assert kernel <= set(pre)


# --- enlargement ---------------------------------------------------------------

def _zero_level(lat, N):
    return ExtensionLevel(lat, N, Cocycle2.zero(lat.torsion_module(N)))


def test_enlarge_split_example():
    lat = sign_lattice()
    E = _zero_level(lat, 1)
    H0 = [((), embed_F(lat, f)) for f in lat.F]
    out = enlarge_subgroup(E, H0, 2)
    assert out.order == 2 * lat.F.order
    assert out.checks["surjects_onto_F"] and out.checks["torus_part_normalized_by_H0"]
    assert out.checks["contains_H0"]


def test_enlarge_with_m_one_is_identity():
    lat = sign_lattice()
    E = _zero_level(lat, 2)
    H0 = [((0,), embed_F(lat, f)) for f in lat.F]
    out = enlarge_subgroup(E, H0, 1)
    assert sorted(out.elements) == sorted(H0)


def test_enlarge_is_idempotent():
    lat = sign_lattice()
    first = enlarge_subgroup(_zero_level(lat, 1), [((), embed_F(lat, f)) for f in lat.F], 3)
    again = enlarge_subgroup(first.level, first.elements, 1)
    assert again.elements == first.elements


def test_enlarge_rejects_non_surjective_H0():
    lat = sign_lattice()
    with pytest.raises(InvariantError) as err:
        enlarge_subgroup(_zero_level(lat, 2), [((0,), embed_F(lat, 0))], 2)
    assert err.value.witness == {"missing": 1}


@given(st.randoms(use_true_random=False))
def test_enlarge_independent_of_generator_order(rnd):
    res = build_finite_subgroup(torf("torf-nonsplit-C2-sign-galois-sign"))
    E = ExtensionLevel(res.data.lattice, res.level, res.cocycle)
    gens = list(res.pairs)
    base = enlarge_subgroup(E, gens, 2).elements
    rnd.shuffle(gens)
    assert enlarge_subgroup(E, gens, 2).elements == base


# --- building H ------------------------------------------------------------------

def test_build_split_order():
    lat = sign_lattice()
    data = make_torf_data(_ctx(lat.gamma), lat, 1, [], {"d": 1})
    res = build_finite_subgroup(data)
    assert res.certificate["passed"]
    assert res.order == (2 * 1) ** 1 * 2


def test_build_nonsplit_carry_contains_order_four_lift():
    res = build_finite_subgroup(torf("torf-nonsplit-C2-carry"))
    assert res.certificate["passed"]
    assert res.order == 4 and max(res.H.element_orders) == 4
    # the lift of the generator of F has order 4 in the ambient extension too
    G, pairs, _ = ambient_geometric(res.data, res.ambient_level)
    lifts = [x for x in res.embedding if x[1] == 1]
    assert lifts and all(G.element_orders[pairs.index(x)] == 4 for x in lifts)


def test_build_rejects_wrong_n():
    with pytest.raises(InvariantError):
        build_finite_subgroup(torf("torf-nonsplit-C2-carry"), n=3)


@pytest.mark.parametrize("name", sorted(load_corpus("torf-")))
def test_build_certificate_on_corpus(name):
    res = build_finite_subgroup(torf(name))
    cert = res.certificate
    assert cert["passed"], cert
    assert res.order == cert["torus_order"] * res.data.F.order
    assert res.level % (res.n * res.d) == 0
    assert res.to_dict()["order"] == res.order
    # the Γ-action on H is an action by automorphisms
    res.action.validate()


@given(st.integers(0, 10**6))
def test_build_certificate_on_perturbed_data(seed):
    from brnral_kit.corpus import _perturb
    base = torf(random.Random(seed).choice(["torf-nonsplit-C2-sign-galois-sign",
                                            "torf-nonsplit-C2-carry",
                                            "torf-split-C2-sign-galois-sign"]))
    data = _perturb(base, random.Random(seed))
    assert check_cocycle2(data.z) is None
    assert build_finite_subgroup(data).certificate["passed"]


def test_split_build_matches_enlarge():
    for name in ("torf-split-C2-swap-r2", "torf-split-C3-A2-reflection"):
        data = torf(name)
        res = build_finite_subgroup(data)
        lat = data.lattice
        out = enlarge_subgroup(_zero_level(lat, 1), [((), embed_F(lat, f)) for f in lat.F],
                               res.n * res.d)
        assert out.order == res.order
        assert len(out.torus_part) == res.certificate["torus_order"]


# --- corollary variant --------------------------------------------------------

def test_corollary_variant_rank_one_matches():
    info = corollary_variant(build_finite_subgroup(torf("torf-split-C2-sign-r1")))
    assert info["matches_stated_order"]
    assert info["order"] == info["stated_order"] == 2 ** 3


def test_corollary_variant_rank_two_is_flagged():
    res = build_finite_subgroup(torf("torf-split-C2-swap-r2"))
    info = corollary_variant(res)
    n, d = res.n, res.d
    assert info["order"] == (n * n * d * d) ** 2 * n
    assert not info["matches_stated_order"]


# --- data validation --------------------------------------------------------------

def test_data_rejects_non_cocycle():
    lat = sign_lattice()
    with pytest.raises(InvariantError):
        make_torf_data(_ctx(lat.gamma), lat, 3, [{"on": [1, 1], "value": [1]}]).validate()


def test_data_rejects_nontrivial_restriction_to_gamma():
    C2 = cyclic(2)
    lat = lattice(C2, cyclic(1), [[[1]], [[1]]], [[[1]]])
    data = make_torf_data(_ctx(C2), lat, 2, [{"on": [1, 1], "value": [1]}])
    with pytest.raises(InvariantError):
        data.validate()


def test_unnormalized_cocycle_is_shifted(caplog):
    lat = sign_lattice()
    entries = [{"on": [x, y], "value": [1]} for x in lat.Q for y in lat.Q]
    with caplog.at_level(logging.WARNING):
        data = make_torf_data(_ctx(lat.gamma), lat, 2, entries)
    assert "not normalized" in caplog.text
    assert not any(data.z.values[0][0]) and check_cocycle2(data.z) is None


def test_characteristic_warning(caplog):
    data = torf("torf-nonsplit-C2-carry")
    data = TorfExtensionData(data.ctx, data.lattice, data.M0, data.z, {"d": 1, "p": 2})
    with caplog.at_level(logging.WARNING):
        data.validate()
    assert "not prime to the characteristic" in caplog.text


# --- finite-level surjectivity ------------------------------------------------

def test_surjectivity_report_empty_ladder():
    res = build_finite_subgroup(torf("torf-split-C2-sign-galois-sign"))
    rep = h1_surjectivity_report(res, [])
    assert rep == {"label": "finite-level evidence", "levels": []}


def test_surjectivity_report_at_ambient_level_is_trivially_surjective():
    res = build_finite_subgroup(torf("torf-split-C2-sign-galois-sign"))
    (row,) = h1_surjectivity_report(res, [res.ambient_level])["levels"]
    assert row["order"] == res.order
    assert row["surjective"]


def _brute_nonabelian_classes(act):
    H = act.space
    s = 1  # Γ = Z/2
    cocycles = [g for g in H if H.mul(g, act(s, g)) == H.identity]
    return {min(H.mul(H.mul(H.inv(x), c), act(s, x)) for x in H) for c in cocycles}


def test_surjectivity_report_matches_direct_enumeration():
    res = build_finite_subgroup(torf("torf-split-C2-sign-galois-sign"))
    K = res.ambient_level
    rows = h1_surjectivity_report(res, [K, 2 * K])["levels"]
    for row in rows:
        G, pairs, act = ambient_geometric(res.data, row["level"])
        orbits = _brute_nonabelian_classes(act)
        assert row["classes_G"] == len(orbits) == len(h1_nonabelian(act))
        index = {p: i for i, p in enumerate(pairs)}
        m = row["level"] // K
        emb = [index[(tuple(v * m % row["level"] for v in t), q)] for t, q in res.embedding]
        hit = set()
        for c in h1_nonabelian(res.action).representatives:
            g = emb[c.values[1]]
            hit.add(min(G.mul(G.mul(G.inv(x), g), act(1, x)) for x in G))
        assert row["image"] == len(hit)


def test_surjectivity_report_rejects_bad_level():
    res = build_finite_subgroup(torf("torf-split-C2-sign-galois-sign"))
    with pytest.raises(InvariantError):
        h1_surjectivity_report(res, [res.ambient_level + 1])


def test_direct_product_gamma_lattice():
    # Γ = Z/2 × Z/2 acting through one sign; d = 2
    G = direct_product(cyclic(2), cyclic(2))
    lat = lattice(G, cyclic(1), [[[1]], NEG, [[1]], NEG], [[[1]]])
    res = build_finite_subgroup(make_torf_data(_ctx(G), lat, 1, [], {"d": 2}))
    assert res.certificate["passed"] and res.order == 2

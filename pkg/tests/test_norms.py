import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from brnral_kit.abmod import GaloisContext
from brnral_kit.corpus import random_brnral_instance
from brnral_kit.errors import InvariantError
from brnral_kit.groups import GroupAction, cyclic, symmetric
from brnral_kit.norms import NormContext, q_norm
from brnral_kit.oracles import norm_bruteforce

SMALL_H = ["C2", "C3", "C4", "C5", "C6", "C2xC2", "S3", "D4", "Q8", "D5", "A4", "C2xS3"]


def _z5_context():
    C4, C5 = cyclic(4), cyclic(5)
    maps = tuple(tuple(pow(2, k, 5) * x % 5 for x in C5) for k in C4)
    return NormContext.build(GaloisContext.trivial_character(C4, 5), GroupAction(C4, C5, maps))


def _s3_context(q):
    # qchar 2 is not a unit mod 6; the context is built without validation on purpose
    C2, S3 = cyclic(2), symmetric(3)
    return NormContext.build(GaloisContext(C2, 6, (1, q)), GroupAction.trivial(C2, S3))


def test_phi_examples():
    nc = _s3_context(2)
    H = nc.H
    c = next(x for x in H if H.element_orders[x] == 3)
    assert nc.phi(1, c) == H.mul(c, c)
    assert nc.phi(1, H.identity) == H.identity
    triv = _s3_context(1)
    assert all(triv.phi(1, b) == b for b in H)


def test_phi_rejects_non_coprime_exponent():
    nc = _s3_context(2)
    t = next(x for x in nc.H if nc.H.element_orders[x] == 2)
    with pytest.raises(InvariantError):
        nc.phi(1, t)


def test_n_period_examples():
    nc = _z5_context()
    assert nc.phi(1, 1) == 3
    assert nc.n_period(1, 1) == 4
    assert nc.n_period(1, 0) == 1
    triv = _s3_context(1)
    assert all(triv.n_period(1, b) == 1 for b in triv.H)


def test_norm_examples():
    nc = _z5_context()
    assert nc.norm(1, 1) == (0,)
    assert nc.norm(1, 0) == (0,)
    nc = _s3_context(1)
    H = nc.H
    t = next(x for x in H if H.element_orders[x] == 2)
    assert nc.n_period(1, t) == 1
    assert nc.norm(1, t) == (1,)
    assert nc.norm(1, H.identity) == (0,)


def test_norm_table_rows():
    nc = _z5_context()
    rows = nc.norm_table()
    assert len(rows) == 4 * 5
    assert rows[0] == {"sigma": 0, "b": 0, "n": 1, "norm": [0]}


instances = st.builds(lambda seed: random_brnral_instance(random.Random(seed), SMALL_H),
                      st.integers(0, 10**6))


@given(instances)
def test_phi_is_bijection(inst):
    nc = inst.nc
    for s in nc.gamma:
        assert sorted(nc.phi_tables[s]) == list(nc.H)


@given(instances)
def test_power_commutes_with_action(inst):
    nc = inst.nc
    H, G = nc.H, nc.gamma
    for s in G:
        q = inst.ctx.qchar[s]
        si = G.inv(s)
        for b in H:
            assert H.power(nc.action(si, b), q) == nc.action(si, H.power(b, q))


@given(instances)
def test_norm_conjugation_invariant_and_matches_definition(inst):
    nc = inst.nc
    H = nc.H
    for s in nc.gamma:
        for b in H:
            assert (nc.n_period(s, b), nc.norm(s, b)) == norm_bruteforce(nc, s, b)
            assert 1 <= nc.n_period(s, b) <= H.order
            for g in H:
                assert nc.norm(s, H.conj(g, b)) == nc.norm(s, b)


@given(instances)
def test_q_norm_agrees_at_frobenius(inst):
    nc = inst.nc
    s = inst.ctx.frobenius
    frob = nc.action.maps[s]
    for b in nc.H:
        assert q_norm(nc.H, frob, inst.ctx.q, nc.abmap, nc.hab, b) == (nc.n_period(s, b),
                                                                        nc.norm(s, b))


@given(instances)
def test_context_validates(inst):
    inst.nc.validate()
    inst.nc.hab.validate()

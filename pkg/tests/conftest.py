import os
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from brnral_kit.corpus import load_corpus
from brnral_kit.io import Instance

settings.register_profile("default", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@lru_cache(maxsize=None)
def corpus(prefix: str) -> dict:
    return load_corpus(prefix)


@lru_cache(maxsize=None)
def brnral_corpus() -> dict:
    return {name: Instance(raw).brnral() for name, raw in corpus("br-").items()}


@pytest.fixture(scope="session")
def br_instances():
    return brnral_corpus()


@lru_cache(maxsize=None)
def h1_modules() -> tuple:
    """(name, module) for every bundled H^1 instance."""
    return tuple((name, Instance(raw).module()) for name, raw in corpus("h1-").items())


@lru_cache(maxsize=None)
def _automorphisms(orders):
    from brnral_kit.corpus import module_automorphisms
    return module_automorphisms(orders)


def _power_is_identity(A, n, orders):
    from brnral_kit.linalg import identity, matmul
    P = identity(len(orders))
    for _ in range(n):
        P = [[v % d for v in row] for row, d in zip(matmul(A, P), orders)]
    return P == identity(len(orders))


@st.composite
def cyclic_modules(draw, orders_pool=((2,), (3,), (4,), (6,), (8,), (2, 2), (2, 4), (3, 3)),
                   max_gamma=6):
    """A finite module with a cyclic Γ = Z/n acting through one automorphism."""
    from brnral_kit.abmod import FGAbelianModule
    from brnral_kit.groups import cyclic
    from brnral_kit.linalg import identity, matmul

    orders = draw(st.sampled_from(orders_pool))
    n = draw(st.integers(1, max_gamma))
    auts = [A for A in _automorphisms(orders) if _power_is_identity(A, n, orders)]
    A = draw(st.sampled_from(auts))
    mats = [identity(len(orders))]
    for _ in range(1, n):
        mats.append([[v % d for v in row] for row, d in zip(matmul(A, mats[-1]), orders)])
    return FGAbelianModule(orders, cyclic(n), tuple(mats))

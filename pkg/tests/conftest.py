import random

import pytest

from weilspin.fieldtower import TowerSpec
from weilspin.fmtransform import OrlovTransform
from weilspin.secantpipe import PRESETS
from weilspin.weilcm import WeilStructure


@pytest.fixture(scope="session")
def ws6():
    """The q=2 sixfold structure, built once for the whole run."""
    return WeilStructure(PRESETS["sixfold-q2"]())


@pytest.fixture(scope="session")
def orl6(ws6):
    return OrlovTransform(3, ws6.datum.tower)


@pytest.fixture(scope="session")
def ws4():
    """The real-multiplication fourfold structure."""
    return WeilStructure(PRESETS["fourfold-rm2"]())


@pytest.fixture(scope="session")
def orl4(ws4):
    return OrlovTransform(2, ws4.datum.tower)


@pytest.fixture(scope="session")
def tiny_tower():
    return TowerSpec(1, 1)


@pytest.fixture()
def rng():
    return random.Random(20240817)


def rand_elem(rng, tower, span=5):
    return tower.elem(
        rng.randint(-span, span),
        rng.randint(-2, 2),
        rng.randint(-2, 2),
        rng.randint(-1, 1),
    )


def rand_mv(rng, space, nterms=4):
    from weilspin.exteralg import Multivector

    terms = {}
    for _ in range(nterms):
        terms[rng.randrange(1 << space.m)] = space.tower.elem(
            rng.randint(-3, 3), 0, rng.randint(-2, 2), 0
        )
    return Multivector(space, terms)


def rand_vec(rng, hspace, span=3):
    return hspace.vector([rng.randint(-span, span) for _ in range(hspace.dim_v)])

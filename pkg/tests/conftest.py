import hypothesis
import numpy as np
import pytest

from almost_reps.algebra.carrier import FreeAlgebra, FreeGroupAlgebra, LatticeGroupAlgebra
from almost_reps.algebra.folner import ExhaustionSpec, exhaustion_subspace, span
from almost_reps.analysis.almostrep import build_from_folner
from almost_reps.linalg.field import PrimeField, RationalField
from almost_reps.parsers.literal_parser import ElementParser

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def gf():
    return PrimeField(32003)


@pytest.fixture
def gf2():
    return PrimeField(2)


@pytest.fixture
def qq():
    return RationalField()


@pytest.fixture
def kz(gf):
    return LatticeGroupAlgebra(1, gf)


@pytest.fixture
def kz2(gf):
    return LatticeGroupAlgebra(2, gf)


@pytest.fixture
def f2(gf):
    return FreeGroupAlgebra(2, gf)


@pytest.fixture
def free2(gf):
    return FreeAlgebra(2, gf)


@pytest.fixture
def parse():
    def _parse(carrier, text):
        return ElementParser(carrier).parse(text)
    return _parse


@pytest.fixture
def kz_L(kz):
    return span(kz, kz.generator_ball())


@pytest.fixture
def kz_rep(kz, kz_L):
    """k[Z] with L = span{1, t, t^-1} on the radius-5 ball (V dim 11)"""
    return build_from_folner(kz_L, exhaustion_subspace(kz, ExhaustionSpec("ball"), 5))

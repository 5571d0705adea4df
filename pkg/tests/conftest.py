from fractions import Fraction

import pytest

from hyperheis.kahler import CurveSpec
from hyperheis.pq_tables import PQTable
from hyperheis.verma import CLASSICAL, HighestWeightData, VermaModule

SPECIALIZED = {1: [-2], 2: [Fraction(-3, 2), 5], 3: [1, Fraction(2, 3), -4]}


@pytest.fixture(params=[1, 2, 3])
def r(request):
    return request.param


@pytest.fixture
def symbolic_table(r):
    return PQTable(CurveSpec.symbolic(r))


@pytest.fixture
def special_table(r):
    return PQTable(CurveSpec.specialized(SPECIALIZED[r]))


def module_for(r, kappa0=1, lam=1, mu=Fraction(1, 3), chi=None, phi=CLASSICAL):
    table = PQTable(CurveSpec.specialized(SPECIALIZED[r]))
    hw = HighestWeightData(lam, mu, kappa0, chi if chi is not None else [0] * r)
    return VermaModule(hw, phi, table)

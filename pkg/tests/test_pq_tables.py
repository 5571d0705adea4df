from fractions import Fraction

import pytest
import sympy as sp

from hyperheis.errors import DomainError
from hyperheis.exact_core import ParamScalar
from hyperheis.kahler import CurveSpec, OmegaClass, OneForm, RingElem, reduce
from hyperheis.pq_tables import PQTable, p_poly, psi, q_poly

from .oracles import reduce_oracle, to_sympy

a1 = ParamScalar.var(1)


def u_dt(k):
    return OneForm(cdt=RingElem.monomial(k, 1))


@pytest.fixture
def t1():
    return PQTable(CurveSpec.symbolic(1))


@pytest.fixture
def t2():
    return PQTable(CurveSpec.symbolic(2))


def test_initial_conditions(t1, t2):
    assert p_poly(t1, -1, -1) == 1
    assert p_poly(t2, -1, -2) == 0
    assert q_poly(t1, 1, -1) == 1
    assert q_poly(t2, 2, -1) == 0


def test_derived_values_r1(t1):
    assert p_poly(t1, 0, -1) == a1 * Fraction(-1, 4)
    assert q_poly(t1, 2, -1) == ParamScalar.var(1, -1) * 2


def test_derived_values_against_oracle():
    s = sp.symbols("a1")
    assert reduce_oracle({("udt", 0): 1}, [s])[1] == -s / 4
    assert sp.simplify(reduce_oracle({("udt", -2): 1}, [s])[1] - 2 / s) == 0


def test_psi_examples(t1):
    assert psi(t1, 0, 0) == OmegaClass.basis(1, 1)
    assert psi(t1, 1, 0) == OmegaClass((Fraction(0), a1 * Fraction(-1, 4)))
    # i + j - 1 = -3: Q branch, and the recursion numerator (3*2 - 2*3) vanishes
    assert not psi(t1, -1, -1)
    s = sp.symbols("a1")
    assert reduce_oracle({("udt", -3): 1}, [s]) == [0, 0]


def test_domain_errors(t2):
    with pytest.raises(DomainError):
        p_poly(t2, -3, -1)
    with pytest.raises(DomainError):
        p_poly(t2, 0, 0)
    with pytest.raises(DomainError):
        q_poly(t2, 0, -1)
    with pytest.raises(DomainError):
        q_poly(t2, 3, -3)


def test_oracle_equivalence(symbolic_table):
    table = symbolic_table
    r, curve = table.r, table.curve
    for k in range(-r, 16):
        want = [p_poly(table, k, -kk) for kk in range(1, r + 1)]
        assert reduce(u_dt(k), curve) == OmegaClass((Fraction(0), *want))
    for m in range(1, 16):
        want = [q_poly(table, m, -kk) for kk in range(1, r + 1)]
        assert reduce(u_dt(-m), curve) == OmegaClass((Fraction(0), *want))


def test_branch_overlap(symbolic_table):
    r = symbolic_table.r
    for s in range(-r, 0):
        for i in range(-r, 0):
            assert symbolic_table.p_poly(s, i) == symbolic_table.q_poly(-s, i)


def test_psi_depends_only_on_sum(symbolic_table):
    for total in range(-8, 9):
        vals = {psi(symbolic_table, i, total - i) for i in range(-5, 6)}
        assert len(vals) == 1


def test_prefill_is_consistent():
    c = CurveSpec.specialized([Fraction(-3, 2), 5])
    lazy, eager = PQTable(c), PQTable(c).prefill(12, 12)
    for k in range(-2, 13):
        for i in (-1, -2):
            assert lazy.p_poly(k, i) == eager.p_poly(k, i)
    for m in range(12, 0, -1):
        for i in (-1, -2):
            assert lazy.q_poly(m, i) == eager.q_poly(m, i)


def test_specialized_table_agrees_with_oracle():
    vals = [Fraction(-3, 2), 5]
    table = PQTable(CurveSpec.specialized(vals))
    a = [to_sympy(v) for v in vals]
    for s in range(-5, 6):
        want = reduce_oracle({("udt", s): 1}, a)
        assert [to_sympy(x) for x in table.u_coords(s)] == want[1:]

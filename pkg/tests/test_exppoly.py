from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from feforge.exppoly import (
    DegreeBoundError,
    ExpPoly,
    InverseNotRepresentable,
    NotRepresentable,
    SymbolTable,
    SymbolTableMismatch,
    add_poly,
    apply_field_product,
    apply_words,
    expand_on_product,
    linearly_independent,
    parse_exppoly,
    rank,
)
from feforge.exppoly.evaluate import mod_p_values, sqrt_mod_p, to_complex, to_gaussian
from feforge.exppoly.scalar import GaussianRational, I

T = SymbolTable()
TF = SymbolTable(embedding="additive")


def sym(name, args=("x",), power=1, table=T):
    return ExpPoly.symbol(table, name, args, power)


a1, a2, m1, m2 = sym("a1"), sym("a2"), sym("m1"), sym("m2")

small = st.integers(-4, 4)
atoms = st.sampled_from([a1, a2, m1, m2, ExpPoly.one(T)])


@st.composite
def polys(draw):
    out = ExpPoly.zero(T)
    for _ in range(draw(st.integers(0, 3))):
        term = ExpPoly.const(T, draw(small))
        for _ in range(draw(st.integers(0, 2))):
            term = term * draw(atoms)
        out = out + term
    return out


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys())
def test_dump_parse_roundtrip(p):
    assert parse_exppoly(p.dump(), T) == p


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_words_are_ring_homomorphisms(p, q):
    w = {"x": ("x", "y")}
    assert apply_words(p * q, w) == apply_words(p, w) * apply_words(q, w)
    assert apply_words(p + q, w) == apply_words(p, w) + apply_words(q, w)


def test_symbols_on_a_product():
    assert expand_on_product(a1) == sym("a1", "x") + sym("a1", "y")
    assert expand_on_product(m1) == sym("m1", "x") * sym("m1", "y")
    assert expand_on_product(m1**2) == sym("m1", "x", 2) * sym("m1", "y", 2)
    B = ExpPoly.symbol(T, "B", ("x", "z"))
    assert apply_words(B, {"x": ("x", "y")}) == ExpPoly.symbol(T, "B", ("x", "z")) + ExpPoly.symbol(T, "B", ("y", "z"))


def test_field_product_images():
    idx = sym("id", table=TF)
    a = sym("a1", table=TF)
    assert apply_field_product(idx) == sym("id", "x", table=TF) * sym("id", "y", table=TF)
    assert apply_field_product(a).dump() == "a1*(x,y)"
    with pytest.raises(NotRepresentable):
        apply_field_product(sym("m1", table=TF))


def test_inverse_and_degree_bound():
    with pytest.raises(InverseNotRepresentable):
        sym("m1", power=-1)
    with pytest.raises(InverseNotRepresentable):
        m1 ** -2
    with pytest.raises(DegreeBoundError):
        a1**9
    assert (a1**8).degree() == 8


def test_tables_must_agree():
    with pytest.raises(SymbolTableMismatch):
        add_poly(a1, sym("a1", table=TF))


def test_dump_is_canonical():
    p = ExpPoly.const(T, -3) + (GaussianRational(Fraction(1, 2)) + I) * m1**2
    assert p.dump() == "-3 + (1/2+i)*m1(x)^2"
    assert ExpPoly.zero(T).dump() == "0"
    assert parse_exppoly("3*a1 + m1 - 1", T) == 3 * a1 + m1 - 1


def test_symbolic_coefficients():
    g = sp.Symbol("gamma")
    p = a1 * g + m1 * g**2
    assert p.is_symbolic()
    assert p.map_coefficients(lambda c: c.subs(g, 2)) == 2 * a1 + 4 * m1


def test_substitute_symbols_to_constants():
    p = 2 * m1 * a1 + m2
    assert p.substitute_symbols({"m1": "1"}) == 2 * a1 + m2
    assert p.substitute_symbols({"m1": "0"}) == m2
    assert p.substitute_symbols({"m2": "m1"}) == 2 * m1 * a1 + m1


def test_rank_of_characters():
    assert rank([m1, m2, m1 + m2]) == 2
    assert linearly_independent([ExpPoly.one(T), a1, m1, a1 * m1])
    assert not linearly_independent([a1, 2 * a1])
    assert rank([]) == 0


def test_exact_evaluation():
    x = sp.Symbol("x")
    assert to_gaussian(sp.sqrt(1 - 4 * x**2) / 2, {"x": sp.Rational(3, 10)}) == GaussianRational(Fraction(2, 5))
    assert to_gaussian(sp.I * x, {"x": 2}) == GaussianRational(0, 2)
    assert to_complex(sp.sqrt(2)) == pytest.approx(2**0.5)
    with pytest.raises(NotRepresentable):
        to_gaussian(sp.sqrt(2))


def test_mod_p_square_roots():
    assert sqrt_mod_p(4, 13) == {2, 11}
    assert sqrt_mod_p(5, 13) == set()
    assert mod_p_values(sp.I, 5) == {2, 3}
    assert mod_p_values(sp.Rational(1, 2), 5) == {3}

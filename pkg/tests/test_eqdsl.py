import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feforge.eqdsl import (
    Apply,
    ArityError,
    Codomain,
    DomainClass,
    DomainSpec,
    MixedOperationError,
    NamedConst,
    ParseError,
    Prod,
    ShapeId,
    Sum,
    Var,
    classify,
    domain_from_flag,
    parse,
    render,
)
from feforge.eqdsl.classify import CANONICAL_EQUATIONS, canonical_equation_text

GROUP = DomainSpec(DomainClass.Group)
FIELD_ADD = DomainSpec(DomainClass.FieldAdditive)
REAL = DomainSpec(DomainClass.RealLine)


def test_parse_scalar_alpha_rhs():
    eq = parse("f(x+y)-f(x)-f(y)=alpha*x*y", REAL)
    assert isinstance(eq.lhs, Sum) and len(eq.lhs.terms) == 3
    assert all(isinstance(t, Apply) for _, t in eq.lhs.terms)
    assert eq.rhs == Prod((NamedConst("alpha"), Var("x"), Var("y")))
    assert eq.unknowns == {"f"}
    assert "alpha" in eq.knowns


def test_parse_unknown_alpha_function():
    eq = parse("f(x*y)-f(x)-f(y)=a(x)*a(y)", GROUP)
    assert eq.unknowns == {"f", "a"}
    assert eq.domain.group_op == "multiplicative"
    assert parse("f(x*y)-f(x)-f(y)=alpha(x)*alpha(y)", GROUP) == eq


@pytest.mark.parametrize(
    "text, offset",
    [("f(x+y", 6), ("f(x+y)-f(x)=", 13), ("f(x+y)-f(x) f(y)=0", 13), ("f(z)=0", 3)],
)
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == offset


def test_arity_and_mixed_operations():
    with pytest.raises(ArityError):
        parse("f(x+y)-f(x)-f(y)=B(x)")
    with pytest.raises(ArityError):
        parse("f(x,y)=0")
    with pytest.raises(MixedOperationError):
        parse("f(x+y*x)=0")
    # different operations in different arguments parse, but match no shape
    assert classify(parse("f(x+y)-f(x*y)=0")) == ShapeId.Unrecognized


def test_depth_limit():
    deep = "(" * 20 + "f(x)" + ")" * 20
    with pytest.raises(ParseError):
        parse(f"{deep}=0")


@pytest.mark.parametrize("shape", [s for s in CANONICAL_EQUATIONS])
def test_canonical_equations_classify(shape):
    op = "+" if shape in (ShapeId.S2, ShapeId.S5, ShapeId.S8) else "*"
    text = canonical_equation_text(shape, op)
    if shape == ShapeId.S2:
        dom = FIELD_ADD
    elif shape == ShapeId.S3:
        dom = DomainSpec(DomainClass.FieldMultiplicativeNoZero)
    elif shape == ShapeId.S5:
        dom = FIELD_ADD
    else:
        dom = GROUP
    eq = parse(text, dom)
    assert classify(eq) == shape
    assert render(eq) == text


@pytest.mark.parametrize(
    "text, shape",
    [
        ("f(x+y)-f(x)-f(y)=B(x,y)", ShapeId.S1),
        ("f(x*y)-f(x)*f(y)=a(x)*a(y)", ShapeId.S9),
        ("f(x+y)-f(x)*f(y)=a(x*y)", ShapeId.OpenProblemMixed),
        ("f(x*y)-f(x)*f(y)=a(x+y)", ShapeId.OpenProblemMixed),
        ("f(x+y)=f(x)+f(y)", ShapeId.Unrecognized),
        ("f(x*y)=f(x)+f(y)+a(x)*a(y)", ShapeId.S6),
        ("f(y*x)-f(y)-f(x)=a(y)*a(x)", ShapeId.S6),
        ("-f(x)+f(x+y)-f(y)-B(y,x)=0", ShapeId.S1),
        ("2*f(x+y)-2*f(x)-2*f(y)=2*B(x,y)", ShapeId.S1),
        ("f(x+y)-f(x)-f(y)=a(x)*a(y)+1", ShapeId.Unrecognized),
    ],
)
def test_classification_examples(text, shape):
    assert classify(parse(text, GROUP)) == shape


def test_embedded_shapes_need_an_embedding():
    text = "f(x+y)-f(x)-f(y)=alpha*x*y"
    assert classify(parse(text, GROUP)) == ShapeId.Unrecognized
    assert classify(parse(text, FIELD_ADD)) == ShapeId.S2
    assert classify(parse(text, REAL)) == ShapeId.S2
    assert classify(parse("f(x+y)-f(x)-f(y)=a(x*y)", GROUP)) == ShapeId.Unrecognized
    assert classify(parse("f(x+y)-f(x)-f(y)=a(x*y)", FIELD_ADD)) == ShapeId.S5


def test_operation_must_match_the_domain():
    assert classify(parse("f(x*y)-f(x)-f(y)=a(x)*a(y)", REAL)) == ShapeId.Unrecognized
    assert classify(parse("f(x*y)-f(x)-f(y)=a(x)*a(y)", DomainSpec(DomainClass.RealPositive))) == ShapeId.S6


def test_domain_flags():
    d = domain_from_flag("real-positive", "real")
    assert d.group_op == "multiplicative" and d.codomain == Codomain.Real
    assert domain_from_flag("field", op="multiplicative").domain_class == DomainClass.FieldWithZero
    assert domain_from_flag("field").domain_class == DomainClass.FieldAdditive
    assert domain_from_flag("group").group_op is None
    with pytest.raises(ValueError):
        domain_from_flag("torus")
    with pytest.raises(ValueError):
        DomainSpec(DomainClass.RealPositive, "additive")


# random well-formed equations -----------------------------------------------------------------

args1 = st.sampled_from(["x", "y", "x+y", "y+x"])
atom = st.one_of(
    args1.map(lambda a: f"f({a})"),
    args1.map(lambda a: f"a({a})"),
    st.just("B(x,y)"),
    st.sampled_from(["x", "y", "alpha", "2", "1/3"]),
)
term = st.lists(atom, min_size=1, max_size=3).map(lambda fs: "*".join(fs))


@st.composite
def equations(draw):
    lhs = draw(st.lists(term, min_size=1, max_size=4))
    rhs = draw(st.lists(term, min_size=1, max_size=2))
    signs = draw(st.lists(st.sampled_from(["+", "-"]), min_size=len(lhs), max_size=len(lhs)))
    left = "".join(s + t for s, t in zip(signs, lhs)).lstrip("+")
    return f"f(x+y)+{left}={'+'.join(rhs)}"


@settings(max_examples=150, deadline=None)
@given(equations())
def test_render_roundtrip_and_total_classification(text):
    try:
        eq = parse(text, REAL)
    except ParseError:
        return
    again = parse(render(eq), REAL)
    assert again == eq
    assert render(again) == render(eq)
    assert classify(again) == classify(eq)
    assert isinstance(classify(eq), ShapeId)


@settings(max_examples=60, deadline=None)
@given(st.permutations(["f(x+y)", "-f(x)", "-f(y)", "-a(x)*a(y)"]), st.booleans())
def test_classification_ignores_order(parts, swap):
    lhs = "+".join(parts).replace("+-", "-")
    if swap:
        lhs = lhs.replace("a(x)*a(y)", "a(y)*a(x)")
    assert classify(parse(f"{lhs}=0", REAL)) == ShapeId.S6

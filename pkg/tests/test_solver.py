import random
from fractions import Fraction

import pytest
import sympy as sp

from feforge.eqdsl import Codomain, DomainClass, DomainSpec, ShapeId
from feforge.exppoly import ExpPoly, parse_exppoly, residual
from feforge.exppoly.scalar import GaussianRational, I
from feforge.solver import (
    ConstraintSystem,
    ConstraintViolation,
    MissingParameter,
    NonRealError,
    Unsupported,
    UnsupportedShapeError,
    UnsupportedSystem,
    check_membership,
    real_admissible,
    realize,
    solve_constraints,
    solve_shape,
)
from feforge.solver.sampling import sample_parameters

S = sp.Symbol
g, al, g1, g2, a1, a2 = (S(n) for n in ("gamma", "alpha", "gamma1", "gamma2", "alpha1", "alpha2"))

GROUP_MUL = DomainSpec(DomainClass.Group, "multiplicative")
GROUP_ADD = DomainSpec(DomainClass.Group, "additive")


def family(shape, domain, label):
    return next(f for f in solve_shape(shape, domain) if f.label == label)


def branch_strings(cs):
    return [str(b) for b in solve_constraints(cs)]


# constraint systems --------------------------------------------------------------------------


def test_single_quadratic():
    out = branch_strings(ConstraintSystem((g - g**2 - al**2,), (g, al)))
    assert out == ["{alpha = sqrt(-gamma**2 + gamma)}", "{alpha = -sqrt(-gamma**2 + gamma)}"]


def test_system_i_branches():
    cs = ConstraintSystem((g1**2 + a1**2, g2**2 + a2**2 - g2, g1 * g2 + a1 * a2 - g1), (a1, g2, g1, a2))
    out = branch_strings(cs)
    assert "{gamma2 = 1, gamma1 = I*alpha1, alpha2 = 0}" in out
    assert "{gamma2 = 1, gamma1 = -I*alpha1, alpha2 = 0}" in out
    assert "{alpha1 = 0, gamma1 = 0, alpha2 = sqrt(-gamma2**2 + gamma2)}" in out
    assert len(out) == 4


def test_system_ii_main_branch():
    cs = ConstraintSystem((g1**2 + a1**2 - g1, g2**2 + a2**2 - g2, g1 * g2 + a1 * a2), (a1, g1, g2, a2))
    out = branch_strings(cs)
    main = [
        "{gamma1 = sqrt(1 - 4*alpha1**2)/2 + 1/2, gamma2 = 1/2 - sqrt(1 - 4*alpha1**2)/2, alpha2 = -alpha1}",
        "{gamma1 = 1/2 - sqrt(1 - 4*alpha1**2)/2, gamma2 = sqrt(1 - 4*alpha1**2)/2 + 1/2, alpha2 = -alpha1}",
    ]
    assert set(main) <= set(out) and len(out) == 6
    # the family lists the nondegenerate branches first
    fam = family(ShapeId.S9, GROUP_ADD, "case (ii)")
    assert [str(b) for b in fam.branches()][:2] == main


def test_linear_and_inconsistent():
    assert branch_strings(ConstraintSystem((g - 3,), (g,))) == ["{gamma = 3}"]
    assert branch_strings(ConstraintSystem((g**2 + 1,), (g,))) == ["{gamma = I}", "{gamma = -I}"]
    assert len(solve_constraints(ConstraintSystem((g - 1, g - 2), (g,)))) == 0
    assert branch_strings(ConstraintSystem((), (g,))) == ["{}"]


def test_branches_back_substitute_exactly():
    cs = ConstraintSystem((g1**2 + a1**2 - g1, g2**2 + a2**2 - g2, g1 * g2 + a1 * a2), (a1, g1, g2, a2))
    for b in solve_constraints(cs):
        assert all(sp.simplify(r) == 0 for r in cs.residuals(b.mapping))


def test_unsupported_systems():
    x = sp.symbols("x0:5")
    with pytest.raises(UnsupportedSystem):
        solve_constraints(ConstraintSystem((sum(x),), x))
    with pytest.raises(UnsupportedSystem):
        solve_constraints(ConstraintSystem((g**3 - 1,), (g,)))


def test_solving_is_deterministic():
    cs = ConstraintSystem((g1**2 + a1**2, g2**2 + a2**2 - g2, g1 * g2 + a1 * a2 - g1), (a1, g2, g1, a2))
    assert branch_strings(cs) == branch_strings(ConstraintSystem(cs.equations, cs.params))


# families -------------------------------------------------------------------------------------


def test_s6_group_family():
    fam = family(ShapeId.S6, GROUP_MUL, "exponential")
    assert fam.template_f.dump() == "(-alpha**2) + (gamma)*a1(x) + (alpha**2)*m1(x)"
    assert fam.template_alpha.dump() == "(-alpha) + (alpha)*m1(x)"
    assert [f.label for f in solve_shape(ShapeId.S6, GROUP_MUL)] == ["exponential", "constant", "quadratic"]


@pytest.mark.parametrize("cls", [DomainClass.RealWithZero, DomainClass.RealNonneg, DomainClass.FieldWithZero])
def test_s6_with_zero_forces_gamma(cls):
    fams = solve_shape(ShapeId.S6, DomainSpec(cls))
    assert [f.label for f in fams] == ["exponential", "constant"]
    for fam in fams:
        assert [str(b) for b in fam.branches()] == ["{gamma = 0}"]
        with pytest.raises(ConstraintViolation):
            realize(fam, {"gamma": 1, "alpha": 1})


def test_s3_forces_alpha_zero():
    fam = solve_shape(ShapeId.S3, DomainSpec(DomainClass.RealWithZero))[0]
    f, a = realize(fam, {"alpha": 0})
    assert f.is_zero() and a is None
    with pytest.raises(ConstraintViolation):
        realize(fam, {"alpha": 2})
    (log,) = solve_shape(ShapeId.S3, DomainSpec(DomainClass.RealPositive))
    assert log.template_f.dump() == "a1(x)"


def test_s7_on_a_monoid():
    (fam,) = solve_shape(ShapeId.S7, DomainSpec(DomainClass.Monoid, "multiplicative"))
    f, a = realize(fam, {"c": Fraction(3)})
    assert f.dump() == "3*m1(x)"
    assert a.dump() == "-6*m1(x)"
    with pytest.raises(UnsupportedShapeError):
        solve_shape(ShapeId.S7, DomainSpec(DomainClass.Semigroup, "multiplicative"))


def test_s5_constant_enters_with_minus_sign():
    (fam,) = solve_shape(ShapeId.S5, DomainSpec(DomainClass.FieldAdditive))
    f, a = realize(fam, {"gamma": 2})
    assert f.dump() == "-2 + 1/2*a1*(x,x) + a2(x)"
    assert a.dump() == "2 + a1(x)"
    # the opposite sign leaves a constant residual
    wrong = f + 4
    assert residual(fam.equation, {"f": wrong, "a": a}).dump() == "-4"


def test_open_problem_marker_and_unrecognized():
    out = solve_shape(ShapeId.OpenProblemMixed, GROUP_ADD)
    assert isinstance(out, Unsupported)
    assert out.reason.startswith("unsupported: open problem")
    with pytest.raises(UnsupportedShapeError):
        solve_shape(ShapeId.Unrecognized, GROUP_ADD)


def test_s9_requires_a_group():
    with pytest.raises(UnsupportedShapeError):
        solve_shape(ShapeId.S9, DomainSpec(DomainClass.Semigroup, "additive"))


# realize ------------------------------------------------------------------------------------------


def test_realize_s6_instance():
    fam = family(ShapeId.S6, GROUP_MUL, "exponential")
    f, a = realize(fam, {"gamma": 0, "alpha": 1})
    assert f.dump() == "-1 + m1(x)"
    assert a.dump() == "-1 + m1(x)"


def test_realize_s9_case_i():
    fam = family(ShapeId.S9, GROUP_ADD, "case (i)")
    f, a = realize(fam, {"alpha1": 1})
    assert f.dump() == "i*a1(x)*m1(x) + m1(x)"
    assert a.dump() == "a1(x)*m1(x)"


def test_realize_reports_violations():
    fam = family(ShapeId.S9, GROUP_ADD, "case (iii)")
    with pytest.raises(ConstraintViolation) as info:
        realize(fam, {"gamma": 2})
    assert "gamma" in str(info.value)
    with pytest.raises(ConstraintViolation):
        realize(fam, {"gamma": 2, "alpha": 1})
    f, a = realize(fam, {"gamma": Fraction(1, 2), "alpha": Fraction(1, 2)})
    assert residual(fam.equation, {"f": f, "a": a}).is_zero()


def test_realize_missing_and_unknown_parameters():
    fam = family(ShapeId.S9, GROUP_ADD, "case (ii)")
    with pytest.raises(MissingParameter):
        realize(fam, {})
    with pytest.raises(KeyError):
        realize(fam, {"beta": 1})


def test_symbol_renaming_in_realize():
    fam = family(ShapeId.S6, GROUP_MUL, "exponential")
    f, _ = realize(fam, {"gamma": 1, "alpha": 1, "m1": "m2"})
    assert f.dump() == "-1 + a1(x) + m2(x)"
    f0, a0 = realize(fam, {"gamma": 1, "alpha": 1, "m1": "0"})
    assert a0.dump() == "-1"


def test_random_draws_per_branch():
    rng = random.Random(3)
    fam = family(ShapeId.S9, GROUP_ADD, "case (ii)")
    for b in fam.branches():
        for _ in range(5):
            vals = sample_parameters(fam, rng, branch=b)
            scal = {p.name: vals[p.name] for p in fam.scalar_params}
            f, a = realize(fam, scal)
            assert residual(fam.equation, {"f": f, "a": a}).is_zero()


# real admissibility ----------------------------------------------------------------------------------


def test_real_intervals():
    dom = DomainSpec(DomainClass.RealLine, codomain=Codomain.Real)
    fams = {f.label: real_admissible(f) for f in solve_shape(ShapeId.S9, dom)}
    assert fams["case (i)"].param("alpha1").describe() == "alpha1 in [0, 0]"
    assert fams["case (ii)"].param("alpha1").describe() == "alpha1 in [-1/2, 1/2]"
    assert fams["case (iii)"].param("gamma").describe() == "gamma in [0, 1]"
    assert "exponential m(x) = exp(lambda*x)" in fams["case (ii)"].real_forms
    with pytest.raises(NonRealError):
        realize(fams["case (ii)"], {"alpha1": Fraction(3, 5)})
    with pytest.raises(ConstraintViolation):
        realize(fams["case (iii)"], {"gamma": 2})
    f, a = realize(fams["case (i)"], {"alpha1": 0, "gamma2": 1})
    assert f.dump() == "m1(x)" and a.is_zero()


def test_real_forms_by_domain():
    fam = real_admissible(family(ShapeId.S6, DomainSpec(DomainClass.RealNonzero, codomain=Codomain.Real), "exponential"))
    assert "exponential m(x) = sign(x)*|x|^mu" in fam.real_forms
    assert fam.param("alpha").kind == "realScalar"


# membership -------------------------------------------------------------------------------------------


def test_membership_examples():
    fam = family(ShapeId.S6, GROUP_MUL, "exponential")
    T = fam.table
    got = check_membership(parse_exppoly("3*a1", T), ExpPoly.zero(T), fam)
    assert got["gamma"] == 3 and got["alpha"] == 0
    got = check_membership(parse_exppoly("m1 - 1", T), parse_exppoly("1 - m1", T), fam)
    assert got["alpha"] == -1 and got["gamma"] == 0
    assert check_membership(parse_exppoly("a1^2", T), ExpPoly.zero(T), fam) is None


def test_membership_inverts_realize():
    rng = random.Random(11)
    for shape, dom in [(ShapeId.S6, GROUP_MUL), (ShapeId.S9, GROUP_ADD), (ShapeId.S4, GROUP_ADD)]:
        for fam in solve_shape(shape, dom):
            for _ in range(3):
                vals = sample_parameters(fam, rng)
                scal = {p.name: vals[p.name] for p in fam.scalar_params}
                f, a = realize(fam, scal)
                back = check_membership(f, a, fam)
                assert back is not None, (shape, fam.label, scal)
                f2, a2 = realize(fam, back)
                assert f2 == f and a2 == a

import pytest
from hypothesis import given, settings

from nflin.algebra import Poly, parse_poly as P
from nflin.normal_form import (
    NonResonantCoefficient,
    NormalFormSystem,
    PolynomialVectorField,
    check_full_normal_form,
    check_seminormal,
    lie_bracket,
    normal_form_residual,
    rhs,
    seminormal_by_resonance,
    seminormal_residual,
    system_from_coefficients,
)
from nflin.resonance import ResonantMonomial

from strategies import arbitrary_systems, jordan_structures, polys


def field(*comps, variables=("a", "b", "c")):
    return PolynomialVectorField(tuple(P(c) if isinstance(c, str) else c for c in comps), variables)


def ex3(c1="c1", c2="c2", c3="c3", eta="eta"):
    return system_from_coefficients(
        [1, 1, 2],
        [((2, 0, 0), 3, P(c1)), ((1, 1, 0), 3, P(c2)), ((0, 2, 0), 3, P(c3))],
        superdiagonal=(P(eta), 0),
        variables=("x", "y", "z"),
    )


def test_bracket_with_itself(examples):
    x0 = examples["ex2"].field_0()
    assert lie_bracket(x0, x0).is_zero()


def test_example_1_fields_commute():
    nf = system_from_coefficients([1, 2], [((2, 0), 2, P("c1"))], variables=("x", "y"))
    assert lie_bracket(nf.field_A(), nf.field_F()).is_zero()
    assert nf.field_ell() == nf.field_A()


def test_example_3_off_normal_term():
    nf = ex3(c1="0", c2="1", c3="0", eta="1")
    br = lie_bracket(nf.field_ell(), nf.field_F())
    assert not br.is_zero()
    assert br.components[2] == P("x^2")


def test_example_3_residual_is_explicit():
    # [X_ell, X_F] = eta*(c2 x^2 + 2 c3 x y) d_z
    res = normal_form_residual(ex3())
    assert res.components == (Poly(), Poly(), P("eta*c2*x^2 + 2*eta*c3*x*y"))


def test_seminormal_examples(examples):
    assert check_seminormal(examples["ex2"])
    assert check_seminormal(examples["ex3"])
    nf = examples["ex2"]
    bad = nf.with_terms(nf.terms + ((ResonantMonomial((0, 2, 0), 2), P("1")),), check_resonance=False)
    assert not check_seminormal(bad)


def test_full_normal_form_examples():
    assert check_full_normal_form(ex3(c2="0", c3="0"))
    assert not check_full_normal_form(ex3())
    assert not check_full_normal_form(ex3(c3="0", eta="1"))
    assert check_full_normal_form(ex3(eta="0"))


def test_rhs_example_1():
    nf = system_from_coefficients([1, 2], [((2, 0), 2, P("c1"))], variables=("x", "y"))
    assert rhs(nf).components == (P("x"), P("2*y + c1*x^2"))


def test_rhs_linear_only():
    nf = system_from_coefficients([1, 2], [])
    assert rhs(nf).components == (P("x1"), P("2*x2"))


def test_rhs_example_5_truncated(examples):
    from nflin.parent import truncate_normal_form

    nf = truncate_normal_form(examples["ex5"], 3)
    assert rhs(nf).components == (
        P("x1"), P("2*x2 + c1*x1^2"), P("3*x3 + c2*x1*x2 + c3*x1^3"), P("10*x4"),
    )


def test_construction_rejects_non_resonant():
    with pytest.raises(NonResonantCoefficient) as info:
        system_from_coefficients([1, 2], [((1, 1), 2, 1)])
    assert info.value.mu == (1, 1) and info.value.alpha == 2


def test_coefficients_may_not_use_phase_variables():
    with pytest.raises(ValueError):
        system_from_coefficients([1, 2], [((2, 0), 2, P("x1"))])


@settings(max_examples=100)
@given(arbitrary_systems(max_n=4, max_degree=5))
def test_seminormal_tests_agree(nf):
    assert seminormal_residual(nf).is_zero() == seminormal_by_resonance(nf)


@settings(max_examples=60)
@given(jordan_structures())
def test_semisimple_field_commutes(jordan):
    nf = NormalFormSystem(jordan)
    assert lie_bracket(nf.field_0(), nf.field_A()).is_zero()
    assert lie_bracket(nf.field_0(), nf.field_ell()).is_zero()


@settings(max_examples=60)
@given(arbitrary_systems(max_n=3, max_degree=3))
def test_diagonal_full_equals_seminormal(nf):
    if nf.jordan.is_diagonal() and seminormal_by_resonance(nf):
        assert check_full_normal_form(nf) == check_seminormal(nf)


three = dict(symbols=("a", "b", "c"), max_terms=2, max_exp=2)


@settings(max_examples=40)
@given(polys(**three), polys(**three), polys(**three), polys(**three), polys(**three), polys(**three))
def test_jacobi_identity(u1, u2, v1, v2, w1, w2):
    vs = ("a", "b")
    u = PolynomialVectorField((u1, u2), vs)
    v = PolynomialVectorField((v1, v2), vs)
    w = PolynomialVectorField((w1, w2), vs)
    total = lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u)) + lie_bracket(w, lie_bracket(u, v))
    assert total.is_zero()


def test_time_reversal_negates_field(examples):
    nf = examples["ex3"]
    back = nf.time_reversed()
    assert back.field_f() == nf.field_f().scale(-1)
    assert check_seminormal(back)

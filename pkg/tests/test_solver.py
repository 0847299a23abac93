import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from nflin.algebra import GaussianRational as G, Poly, PolyExp, parse_poly as P
from nflin.normal_form import rhs, system_from_coefficients
from nflin.oracle import evaluate_solution
from nflin.resonance import ResonanceTable
from nflin.parent import build_parent, structure_report, triangular_order
from nflin.solver import (
    ClosedFormSolution,
    integrate,
    project,
    restrict,
    solution_residual,
    solve_parent,
    verify_solution_symbolic,
)

from strategies import resonant_systems


def pe(lam, *coeffs):
    return PolyExp({lam: {k: P(c) for k, c in enumerate(coeffs) if c != "0"}})


def test_triangular_order_example_1(examples):
    ps = build_parent(examples["ex1"])
    order = triangular_order(ps)
    pos = {ps.labels[k]: p for p, k in enumerate(order)}
    assert pos["y"] < pos["w1"]          # the c1 entry sits above the diagonal


def test_triangular_order_example_2(examples):
    ps = build_parent(examples["ex2"])
    solve_order = [ps.labels[k] for k in reversed(triangular_order(ps))]
    assert solve_order.index("w4") < solve_order.index("w3") < solve_order.index("w2")


def test_triangular_order_diagonal():
    ps = build_parent(system_from_coefficients([2, 3], []))
    assert triangular_order(ps) == [0, 1]


def test_solve_example_1(examples):
    sol = solve_parent(build_parent(examples["ex1"]))
    assert sol["x"] == pe(1, "x_0")
    assert sol["y"] == pe(2, "y_0", "c1*w1_0")
    assert sol["w1"] == pe(2, "w1_0")


def test_solve_example_3_w_block(examples):
    sol = solve_parent(build_parent(examples["ex3"]))
    assert sol["w3"] == pe(2, "w3_0")
    assert sol["w2"] == pe(2, "w2_0", "eta*w3_0")
    assert sol["w1"] == pe(2, "w1_0", "2*eta*w2_0", "eta^2*w3_0")


def test_solve_zero_matrix():
    ps = build_parent(system_from_coefficients([0], []), ResonanceTable(()))
    sol = solve_parent(ps)
    assert sol["x1"] == PolyExp({0: {0: P("x1_0")}})


def test_restrict_example_1(examples):
    ps = build_parent(examples["ex1"])
    sol = restrict(solve_parent(ps), ps)
    assert sol["y"] == pe(2, "y_0", "c1*x_0^2")
    assert sol.initial_symbols == ("x_0", "y_0")


def test_restrict_example_2(examples):
    ps = build_parent(examples["ex2"])
    sol = restrict(solve_parent(ps), ps)
    z = pe(5, "z_0", "c2*x_0*y_0^2 + c3*x_0^3*y_0 + c4*x_0^5",
           "(2*c1*c2*x_0^3*y_0 + c1*c3*x_0^5)/2", "c1^2*c2*x_0^5/3")
    assert sol["z"] == z
    assert sol["y"] == pe(2, "y_0", "c1*x_0^2")


def test_restrict_without_resonances():
    ps = build_parent(system_from_coefficients([2, 3], []))
    sol = solve_parent(ps)
    assert restrict(sol, ps).components == sol.components


def test_project(examples):
    for name, n in (("ex1", 2), ("ex2", 3)):
        ps = build_parent(examples[name])
        sol = project(restrict(solve_parent(ps), ps), ps.n)
        assert len(sol) == n and sol.projected
    ps = build_parent(system_from_coefficients([2, 3], []))
    sol = restrict(solve_parent(ps), ps)
    assert project(sol).components == sol.components


def test_verify_example_1(examples):
    nf = examples["ex1"]
    sol = integrate(build_parent(nf))
    assert verify_solution_symbolic(sol, rhs(nf))
    broken = ClosedFormSolution((("x", sol["x"]), ("y", pe(2, "y_0"))), sol.initial_symbols, True, True)
    assert not verify_solution_symbolic(broken, rhs(nf))


def test_verify_example_3_normal_form(examples):
    nf = examples["ex3"].subs({"c2": Poly(), "c3": Poly()})
    sol = integrate(build_parent(nf))
    assert verify_solution_symbolic(sol, rhs(nf))
    assert sol["z"] == pe(2, "z_0", "c1*x_0^2", "c1*eta*x_0*y_0", "c1*eta^2*y_0^2/3")


def test_solution_is_general(examples):
    ps = build_parent(examples["ex2"])
    sol = solve_parent(ps)
    for label, f in sol.components:
        assert f.at_zero() == P(f"{label}_0")
    # xi' = B xi as a PolyExp identity
    vals = sol.as_dict()
    for i, label in enumerate(ps.labels):
        acc = PolyExp()
        for j, other in enumerate(ps.labels):
            if ps.entry(i, j):
                acc = acc + vals[other].scale(ps.entry(i, j))
        assert (vals[label].derivative() - acc).is_zero()


def test_exponents_and_t_degrees(examples):
    for name in ("ex1", "ex2", "ex3", "ex5"):
        ps = build_parent(examples[name])
        mult = {}
        for lam in structure_report(ps).eigenvalues:
            mult[lam] = mult.get(lam, 0) + 1
        for _, f in solve_parent(ps).components:
            for lam in f.terms:
                assert lam in mult
                assert f.tdegree(lam) < mult[lam]


@settings(max_examples=40)
@given(resonant_systems(max_n=4, max_value=4))
def test_end_to_end_theorem(nf):
    ps = build_parent(nf)
    assert verify_solution_symbolic(integrate(ps), rhs(nf))


@settings(max_examples=25)
@given(resonant_systems(max_n=3, max_value=3), st.lists(st.floats(-0.3, 0.3), min_size=3, max_size=3),
       st.floats(0, 1))
def test_restriction_commutes_with_evaluation(nf, x0, t):
    ps = build_parent(nf)
    sol = solve_parent(ps)
    x0 = x0[: nf.n]
    point = dict(zip((f"{v}_0" for v in nf.variables), x0))
    w0 = {f"{w}_0": ps.phi(k).evaluate(dict(zip(nf.variables, x0))) for k, w in enumerate(ps.w_names)}
    before = evaluate_solution(sol, {**point, **w0}, t)
    after = evaluate_solution(restrict(sol, ps), point, t)
    assert np.allclose(before, after, rtol=1e-12, atol=1e-14)

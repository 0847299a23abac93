"""Closed-form integration through the parent system: solve xi' = B xi by
triangular back-substitution, restrict to the constraint manifold, project
onto the original coordinates."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import Poly, PolyExp, solve_scalar
from .normal_form import PolynomialVectorField
from .parent import ParentSystem, on_manifold_substitution, triangular_order


def initial_symbol(label: str) -> str:
    return f"{label}_0"


@dataclass(frozen=True)
class ClosedFormSolution:
    components: tuple          # ((label, PolyExp), ...)
    initial_symbols: tuple
    restricted: bool = False
    projected: bool = False

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.components)

    def __getitem__(self, label) -> PolyExp:
        for name, f in self.components:
            if name == label:
                return f
        raise KeyError(label)

    def __len__(self):
        return len(self.components)

    def as_dict(self) -> dict:
        return dict(self.components)

    def to_json(self) -> dict:
        return {
            "restricted": self.restricted,
            "projected": self.projected,
            "initial_symbols": list(self.initial_symbols),
            "components": {
                label: [
                    {"lambda": lam.to_json(), "tpower": k, "coeff": str(c)}
                    for lam, k, c in f.records()
                ]
                for label, f in self.components
            },
        }

    def __str__(self):
        return "\n".join(f"{label}(t) = {f}" for label, f in self.components)


def solve_parent(ps: ParentSystem) -> ClosedFormSolution:
    """General solution with xi(0) = (x_0, w_0) kept symbolic."""
    order = triangular_order(ps)
    labels = ps.labels
    sol: dict = {}
    for k in reversed(order):
        forcing = PolyExp()
        for j in range(ps.dimension):
            if j != k:
                b = ps.entry(k, j)
                if b:
                    forcing = forcing + sol[j].scale(b)
        lam = ps.entry(k, k).constant_value() if ps.entry(k, k) else 0
        sol[k] = solve_scalar(lam, Poly.symbol(initial_symbol(labels[k])), forcing)
    return ClosedFormSolution(
        tuple((labels[k], sol[k]) for k in range(ps.dimension)),
        tuple(initial_symbol(label) for label in labels),
    )


def restrict(sol: ClosedFormSolution, ps: ParentSystem) -> ClosedFormSolution:
    """Put the initial point on the manifold: w_0 -> phi(x_0)."""
    if sol.restricted:
        raise ValueError("solution is already restricted")
    x0 = {v: Poly.symbol(initial_symbol(v)) for v in ps.nf.variables}
    bindings = {
        initial_symbol(w): phi.subs(x0) for w, phi in on_manifold_substitution(ps).items()
    }
    comps = tuple((label, f.subs(bindings)) for label, f in sol.components)
    keep = tuple(s for s in sol.initial_symbols if s not in bindings)
    return ClosedFormSolution(comps, keep, restricted=True, projected=sol.projected)


def project(sol: ClosedFormSolution, n: int = None, variables=None) -> ClosedFormSolution:
    """Keep only the original coordinates (the first n, or those named)."""
    if not sol.restricted:
        raise ValueError("project a restricted solution")
    if variables is not None:
        comps = tuple((label, f) for label, f in sol.components if label in set(variables))
    else:
        if n is None:
            n = len(sol.initial_symbols)
        comps = sol.components[:n]
    return ClosedFormSolution(comps, sol.initial_symbols, restricted=True, projected=True)


def integrate(ps: ParentSystem) -> ClosedFormSolution:
    """The three steps at once: solve, restrict, project."""
    return project(restrict(solve_parent(ps), ps), ps.n)


def solution_residual(sol: ClosedFormSolution, field: PolynomialVectorField) -> dict:
    """label -> d/dt component minus the right-hand side evaluated on the solution."""
    values = sol.as_dict()
    missing = [v for v in field.variables if v not in values]
    if missing:
        raise ValueError(f"solution lacks components {missing}")
    one = PolyExp.one()
    cache: dict = {}
    out = {}
    for v, comp in zip(field.variables, field.components):
        out[v] = values[v].derivative() - comp.compose(values, one, cache)
    return out


def verify_solution_symbolic(sol: ClosedFormSolution, field: PolynomialVectorField) -> bool:
    """Exact check of x' = f(x) and x(0) = x_0 as identities in t, x_0 and parameters."""
    values = sol.as_dict()
    for v in field.variables:
        if v in values and values[v].at_zero() != Poly.symbol(initial_symbol(v)):
            return False
    return all(r.is_zero() for r in solution_residual(sol, field).values())

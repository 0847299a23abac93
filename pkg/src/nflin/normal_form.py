"""Systems x' = Ax + F(x) with resonant F, their vector fields, and the
seminormal / Poincare-Dulac conditions decided by Lie brackets."""
from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Optional, Sequence

from .algebra import GaussianRational, Poly
from .resonance import ResonantMonomial, is_resonant
from .spectrum import JordanStructure, Spectrum


class NonResonantCoefficient(ValueError):
    def __init__(self, mu, alpha):
        super().__init__(f"monomial mu={list(mu)} is not resonant with alpha={alpha}")
        self.mu = tuple(mu)
        self.alpha = alpha


def default_variables(n: int) -> tuple:
    return tuple(f"x{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class PolynomialVectorField:
    components: tuple
    variables: tuple

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Poly) else Poly.constant(c) for c in self.components)
        if len(comps) != len(self.variables):
            raise ValueError("one component per variable is required")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "variables", tuple(self.variables))

    @classmethod
    def linear(cls, matrix, variables) -> "PolynomialVectorField":
        xs = [Poly.symbol(v) for v in variables]
        comps = []
        for row in matrix:
            acc = Poly()
            for a, x in zip(row, xs):
                if a:
                    acc = acc + a * x
            comps.append(acc)
        return cls(tuple(comps), tuple(variables))

    @property
    def n(self) -> int:
        return len(self.variables)

    def apply(self, p: Poly) -> Poly:
        """Directional derivative X(p) = X^j d_j p."""
        out = Poly()
        for v, comp in zip(self.variables, self.components):
            if comp:
                dp = p.diff(v)
                if dp:
                    out = out + comp * dp
        return out

    def __add__(self, other):
        _same_space(self, other)
        return PolynomialVectorField(tuple(a + b for a, b in zip(self.components, other.components)), self.variables)

    def __sub__(self, other):
        _same_space(self, other)
        return PolynomialVectorField(tuple(a - b for a, b in zip(self.components, other.components)), self.variables)

    def scale(self, k) -> "PolynomialVectorField":
        return PolynomialVectorField(tuple(c * k for c in self.components), self.variables)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def subs(self, bindings) -> "PolynomialVectorField":
        return PolynomialVectorField(tuple(c.subs(bindings) for c in self.components), self.variables)

    def to_json(self) -> dict:
        return {v: str(c) for v, c in zip(self.variables, self.components)}

    def __str__(self):
        return "\n".join(f"d{v}/dt = {c}" for v, c in zip(self.variables, self.components))


def _same_space(v: PolynomialVectorField, w: PolynomialVectorField):
    if v.variables != w.variables:
        raise ValueError("vector fields live on different coordinate sets")


def lie_bracket(v: PolynomialVectorField, w: PolynomialVectorField) -> PolynomialVectorField:
    """[V, W]^i = V^j d_j W^i - W^j d_j V^i."""
    _same_space(v, w)
    return PolynomialVectorField(
        tuple(v.apply(wi) - w.apply(vi) for vi, wi in zip(v.components, w.components)),
        v.variables,
    )


@dataclass(frozen=True)
class NormalFormSystem:
    """x' = Ax + sum_k c_k x^mu(k) e_alpha(k).

    ``terms`` is a tuple of ``(ResonantMonomial, Poly)``; coefficients may
    involve parameter symbols but never the phase variables.  Construction
    rejects non-resonant monomials unless ``check_resonance`` is False.
    """

    jordan: JordanStructure
    terms: tuple = ()
    variables: Optional[tuple] = None
    check_resonance: InitVar[bool] = True

    def __post_init__(self, check_resonance):
        n = self.jordan.n
        variables = tuple(self.variables) if self.variables is not None else default_variables(n)
        if len(variables) != n or len(set(variables)) != n:
            raise ValueError(f"need {n} distinct variable names, got {variables}")
        merged: dict = {}
        for mono, c in self.terms:
            if not isinstance(mono, ResonantMonomial):
                mono = ResonantMonomial(tuple(mono[0]), int(mono[1]))
            c = c if isinstance(c, Poly) else Poly.constant(c)
            if len(mono.mu) != n or not 1 <= mono.alpha <= n:
                raise ValueError(f"term {mono} does not fit dimension {n}")
            if set(c.symbols) & set(variables):
                raise ValueError(f"coefficient {c} depends on phase variables")
            if check_resonance and not is_resonant(mono.mu, mono.alpha, self.jordan.spectrum):
                raise NonResonantCoefficient(mono.mu, mono.alpha)
            merged[mono] = merged.get(mono, Poly()) + c
        terms = tuple(sorted(((m, c) for m, c in merged.items() if c), key=lambda mc: mc[0].sort_key()))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "variables", variables)

    @property
    def n(self) -> int:
        return self.jordan.n

    @property
    def spectrum(self) -> Spectrum:
        return self.jordan.spectrum

    @property
    def parameters(self) -> tuple:
        names = set()
        for eta in self.jordan.superdiagonal:
            names.update(eta.symbols)
        for _, c in self.terms:
            names.update(c.symbols)
        return tuple(sorted(names))

    def monomial(self, mu) -> Poly:
        return Poly.monomial(self.variables, mu)

    def max_degree(self) -> int:
        return max((m.degree for m, _ in self.terms), default=1)

    def with_terms(self, terms, check_resonance: bool = True) -> "NormalFormSystem":
        return NormalFormSystem(self.jordan, tuple(terms), self.variables, check_resonance)

    def subs(self, bindings) -> "NormalFormSystem":
        """Substitute values for parameters (coefficients and superdiagonal)."""
        jordan = JordanStructure(self.spectrum, tuple(eta.subs(bindings) for eta in self.jordan.superdiagonal))
        return NormalFormSystem(jordan, tuple((m, c.subs(bindings)) for m, c in self.terms), self.variables, False)

    def time_reversed(self) -> "NormalFormSystem":
        """The system x' = -f(x); resonances are preserved under lambda -> -lambda."""
        spectrum = Spectrum(tuple(-lam for lam in self.spectrum))
        jordan = JordanStructure(spectrum, tuple(-eta for eta in self.jordan.superdiagonal))
        return NormalFormSystem(jordan, tuple((m, -c) for m, c in self.terms), self.variables)

    # vector fields -----------------------------------------------------
    def field_A(self) -> PolynomialVectorField:
        return PolynomialVectorField.linear(self.jordan.matrix(), self.variables)

    def field_0(self) -> PolynomialVectorField:
        return PolynomialVectorField.linear(self.jordan.semisimple(), self.variables)

    def field_ell(self) -> PolynomialVectorField:
        return PolynomialVectorField.linear(self.jordan.adjoint_matrix(), self.variables)

    def field_F(self) -> PolynomialVectorField:
        comps = [Poly() for _ in range(self.n)]
        for mono, c in self.terms:
            comps[mono.alpha - 1] = comps[mono.alpha - 1] + c * self.monomial(mono.mu)
        return PolynomialVectorField(tuple(comps), self.variables)

    def field_f(self) -> PolynomialVectorField:
        return self.field_A() + self.field_F()


def rhs(nf: NormalFormSystem) -> PolynomialVectorField:
    """Components of Ax + F(x)."""
    return nf.field_f()


def seminormal_by_resonance(nf: NormalFormSystem) -> bool:
    return all(is_resonant(m.mu, m.alpha, nf.spectrum) for m, _ in nf.terms)


def seminormal_residual(nf: NormalFormSystem) -> PolynomialVectorField:
    return lie_bracket(nf.field_0(), nf.field_f())


def check_seminormal(nf: NormalFormSystem) -> bool:
    """[X_0, X_f] == 0, cross-checked against the per-monomial resonance test."""
    by_bracket = seminormal_residual(nf).is_zero()
    if by_bracket != seminormal_by_resonance(nf):
        raise AssertionError("bracket and resonance tests disagree on seminormality")
    return by_bracket


def normal_form_residual(nf: NormalFormSystem) -> PolynomialVectorField:
    """[X_ell, X_F] with X_ell built from the conjugate transpose of A."""
    return lie_bracket(nf.field_ell(), nf.field_F())


def check_full_normal_form(nf: NormalFormSystem) -> bool:
    """[X_ell, X_F] == 0 identically in phase variables and parameters."""
    return normal_form_residual(nf).is_zero()


def system_from_coefficients(eigenvalues: Sequence, coefficients: Sequence, superdiagonal=None, variables=None):
    """Convenience builder: ``coefficients`` is a list of ``(mu, alpha, c)``."""
    jordan = JordanStructure(Spectrum(tuple(GaussianRational.coerce(v) for v in eigenvalues)), superdiagonal)
    terms = tuple((ResonantMonomial(tuple(mu), alpha), c) for mu, alpha, c in coefficients)
    return NormalFormSystem(jordan, terms, variables)

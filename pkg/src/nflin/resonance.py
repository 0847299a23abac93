"""Enumeration of resonant monomials x^mu e_alpha."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .spectrum import (
    JordanStructure,
    Spectrum,
    check_poincare,
    compositions,
    resonance_degree_bound,
)


class NonPoincareUnbounded(ValueError):
    """The spectrum has no finite resonance bound and no ``max_degree`` was given."""


@dataclass(frozen=True, order=False)
class ResonantMonomial:
    mu: tuple
    alpha: int  # 1-based target coordinate

    @property
    def degree(self) -> int:
        return sum(self.mu)

    def sort_key(self):
        # alpha, degree, then lexicographic with x1 leading: (2,0,0) < (1,1,0)
        return (self.alpha, self.degree, tuple(-m for m in self.mu))

    def to_json(self) -> dict:
        return {"mu": list(self.mu), "alpha": self.alpha}


@dataclass(frozen=True)
class ResonanceTable:
    entries: tuple
    truncation_degree: Optional[int] = None
    search_degree: int = 0
    per_alpha: dict = field(init=False, compare=False)

    def __post_init__(self):
        entries = tuple(sorted(self.entries, key=ResonantMonomial.sort_key))
        object.__setattr__(self, "entries", entries)
        per = {}
        for e in entries:
            lo, hi, q = per.get(e.alpha, (e.degree, e.degree, 0))
            per[e.alpha] = (min(lo, e.degree), max(hi, e.degree), q + 1)
        object.__setattr__(self, "per_alpha", per)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def monomials(self) -> list:
        """Distinct resonant monomials in table order (first occurrence wins)."""
        seen = {}
        for e in self.entries:
            seen.setdefault(e.mu, e.alpha)
        return list(seen.items())

    def to_json(self) -> dict:
        return {
            "entries": [e.to_json() for e in self.entries],
            "per_alpha": {
                str(a): {"m_minus": lo, "m_plus": hi, "q": q}
                for a, (lo, hi, q) in sorted(self.per_alpha.items())
            },
            "truncation_degree": self.truncation_degree,
            "search_degree": self.search_degree,
        }


def is_resonant(mu, alpha: int, spectrum: Spectrum) -> bool:
    """Exact test of (mu . lambda) = lambda_alpha with |mu| >= 2."""
    if sum(mu) < 2 or any(m < 0 for m in mu):
        return False
    return spectrum.dot(mu) == spectrum[alpha - 1]


def effective_bound(spectrum: Spectrum, max_degree: Optional[int] = None) -> tuple:
    """(degree to search, truncation degree or None)."""
    cert = check_poincare(spectrum)
    if cert is None:
        if max_degree is None:
            raise NonPoincareUnbounded(
                "spectrum is not in a Poincare domain; pass max_degree to enumerate a finite part"
            )
        return max_degree, max_degree
    bound = resonance_degree_bound(spectrum, cert)
    if max_degree is not None and max_degree < bound:
        return max_degree, max_degree
    return bound, None


def enumerate_resonances(jordan, max_degree: Optional[int] = None) -> ResonanceTable:
    """All resonant monomials with 2 <= |mu| <= bound, decided against A_s.

    For Poincare spectra the bound is the certificate bound, intersected with
    ``max_degree`` when given.  Otherwise ``max_degree`` is mandatory.
    """
    spectrum = jordan.spectrum if isinstance(jordan, JordanStructure) else jordan
    degree_cap, truncated = effective_bound(spectrum, max_degree)
    lam = spectrum.eigenvalues
    by_value: dict = {}
    for a, v in enumerate(lam, start=1):
        by_value.setdefault(v, []).append(a)
    entries = []
    for degree in range(2, degree_cap + 1):
        for mu in compositions(degree, spectrum.n):
            for alpha in by_value.get(spectrum.dot(mu), ()):
                entries.append(ResonantMonomial(mu, alpha))
    return ResonanceTable(tuple(entries), truncated, degree_cap)


def resonance_intervals(table: ResonanceTable) -> dict:
    """alpha -> (m_minus, m_plus); alphas without resonances are absent."""
    return {a: (lo, hi) for a, (lo, hi, _) in table.per_alpha.items()}

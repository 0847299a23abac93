"""Linear part in Jordan form and exact tests on its spectrum."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import GaussianRational, Poly


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple

    def __post_init__(self):
        vals = tuple(GaussianRational.coerce(v) for v in self.eigenvalues)
        if not vals:
            raise ValueError("spectrum must contain at least one eigenvalue")
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    def __getitem__(self, i):
        return self.eigenvalues[i]

    def dot(self, mu: Sequence[int]) -> GaussianRational:
        """(mu . lambda) = sum_i mu_i lambda_i."""
        out = GaussianRational(0)
        for m, lam in zip(mu, self.eigenvalues):
            if m:
                out = out + lam * m
        return out


@dataclass(frozen=True)
class JordanStructure:
    """A = diag(lambda) + superdiagonal.

    ``superdiagonal[i]`` couples coordinate i to i+1 (upper convention).
    Entries are usually 0 or 1 but may be symbolic parameters.
    """

    spectrum: Spectrum
    superdiagonal: tuple = field(default=None)

    def __post_init__(self):
        n = self.spectrum.n
        sup = self.superdiagonal
        if sup is None:
            sup = (0,) * (n - 1)
        sup = tuple(v if isinstance(v, Poly) else Poly.constant(v) for v in sup)
        if len(sup) != n - 1:
            raise ValueError(f"superdiagonal needs {n - 1} entries, got {len(sup)}")
        object.__setattr__(self, "superdiagonal", sup)

    @classmethod
    def diagonal(cls, eigenvalues) -> "JordanStructure":
        return cls(Spectrum(tuple(eigenvalues)))

    @property
    def n(self) -> int:
        return self.spectrum.n

    @property
    def eigenvalues(self) -> tuple:
        return self.spectrum.eigenvalues

    def semisimple(self) -> list:
        n = self.n
        return [[Poly.constant(self.eigenvalues[i]) if i == j else Poly() for j in range(n)] for i in range(n)]

    def nilpotent(self) -> list:
        n = self.n
        out = [[Poly() for _ in range(n)] for _ in range(n)]
        for i, eta in enumerate(self.superdiagonal):
            out[i][i + 1] = eta
        return out

    def matrix(self) -> list:
        """Full A as a nested list of Poly entries."""
        out = self.semisimple()
        for i, eta in enumerate(self.superdiagonal):
            out[i][i + 1] = eta
        return out

    def adjoint_matrix(self) -> list:
        """Conjugate transpose of A; parameter symbols are treated as real."""
        a = self.matrix()
        n = self.n
        return [[a[j][i].conjugate() for j in range(n)] for i in range(n)]

    def is_diagonal(self) -> bool:
        return all(not eta for eta in self.superdiagonal)


@dataclass(frozen=True)
class PoincareCertificate:
    """A direction d with <d, lambda_j> >= margin > 0 for every eigenvalue."""

    separating_direction: tuple
    margin: Fraction

    def to_json(self) -> dict:
        d1, d2 = self.separating_direction
        return {"direction": [str(d1), str(d2)], "margin": str(self.margin)}


def _pair(z: GaussianRational, d) -> Fraction:
    return d[0] * z.re + d[1] * z.im


def _candidate_directions(points: Sequence[GaussianRational]):
    # the hull point nearest the origin is either a vertex or the foot of the
    # perpendicular on an edge; both are rational
    seen = set()
    for p in points:
        d = (p.re, p.im)
        if d != (0, 0) and d not in seen:
            seen.add(d)
            yield d
    for a, b in itertools.combinations(points, 2):
        ex, ey = b.re - a.re, b.im - a.im
        ee = ex * ex + ey * ey
        if not ee:
            continue
        s = -(a.re * ex + a.im * ey) / ee
        if 0 < s < 1:
            d = (a.re + s * ex, a.im + s * ey)
            if d != (0, 0) and d not in seen:
                seen.add(d)
                yield d


def check_poincare(spectrum: Spectrum) -> Optional[PoincareCertificate]:
    """Certificate iff the origin lies strictly outside the convex hull of the
    spectrum.  The origin on the hull boundary counts as failure."""
    points = list(spectrum.eigenvalues)
    for d in _candidate_directions(points):
        margin = min(_pair(z, d) for z in points)
        if margin > 0:
            return PoincareCertificate(d, margin)
    return None


def verify_certificate(spectrum: Spectrum, cert: PoincareCertificate) -> bool:
    return cert.margin > 0 and all(_pair(z, cert.separating_direction) >= cert.margin for z in spectrum)


def resonance_degree_bound(spectrum: Spectrum, cert: PoincareCertificate) -> int:
    """Every resonance (mu . lambda) = lambda_alpha has |mu| <= the returned bound.

    Pairing with the separating direction gives |mu| * m <= <d, lambda_alpha>,
    where m is the smallest pairing over the spectrum.
    """
    if not verify_certificate(spectrum, cert):
        raise ValueError("certificate does not separate this spectrum from the origin")
    d = cert.separating_direction
    pairs = [_pair(z, d) for z in spectrum]
    return math.floor(max(pairs) / min(pairs))


def validate_jordan(jordan: JordanStructure) -> list:
    """Positions (1-based) whose nonzero superdiagonal entry joins unequal eigenvalues."""
    lam = jordan.eigenvalues
    return [
        i + 1
        for i, eta in enumerate(jordan.superdiagonal)
        if eta and lam[i] != lam[i + 1]
    ]


def find_master_resonance(spectrum: Spectrum, max_degree: int = 6) -> Optional[tuple]:
    """Smallest-degree mu with |mu| > 0 and sum mu_i lambda_i = 0, if any up to ``max_degree``."""
    n = spectrum.n
    for degree in range(1, max_degree + 1):
        for mu in compositions(degree, n):
            if not spectrum.dot(mu):
                return mu
    return None


def compositions(degree: int, n: int):
    """All length-n nonnegative tuples summing to ``degree``, descending lexicographic."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in compositions(degree - first, n - 1):
            yield (first,) + rest
